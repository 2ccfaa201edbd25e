#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cardmul/dense.hpp"

namespace cardmul {

/// Pairwise-difference operator on fibers of length p: one row per
/// unordered pair, one +weight and one -weight entry each. Applied
/// matrix-free; materialize() exists for small-instance oracles.
class DifferenceOperator {
public:
    struct SignedPair {
        std::uint32_t plus;
        std::uint32_t minus;
    };

    /// All C(p,2) pairs. Rows start with the cyclic ring
    /// (1,2),(2,3),...,(p-1,p),(p,1) — the wrap row carries + on the larger
    /// index — followed by the remaining pairs with + on the smaller index.
    static DifferenceOperator all_pairs(std::size_t p, double weight = 1.0);

    std::size_t fiber_length() const { return p_; }
    std::size_t rows() const { return pairs_.size(); }
    double weight() const { return weight_; }
    std::span<const SignedPair> pairs() const { return pairs_; }

    DenseMatrix materialize() const;

    /// Row r of the result is weight * (W[plus_r,:] - W[minus_r,:]).
    DenseMatrix apply(const DenseMatrix& w) const;

    /// Entrywise 1-norm of apply(w) without materializing the result.
    double l1_of_apply(const DenseMatrix& w) const;

private:
    DifferenceOperator(std::size_t p, std::vector<SignedPair> pairs, double weight)
        : p_(p), pairs_(std::move(pairs)), weight_(weight) {}

    std::size_t p_;
    std::vector<SignedPair> pairs_;
    double weight_;
};

DifferenceOperator difference_operator(std::size_t p);

DenseMatrix apply_difference(const DifferenceOperator& op, const DenseMatrix& w);

/// Partition of row indices {0,...,p-1} into groups, each with its
/// parameter count P_i and block weight sqrt(P_i).
struct GroupSpec {
    struct Group {
        std::vector<std::size_t> members;
        double param_count = 1.0;
        double weight = 1.0;
    };

    std::vector<Group> groups;

    static GroupSpec whole(std::size_t p);
    static GroupSpec from_partition(const std::vector<std::vector<std::size_t>>& members,
                                    const std::vector<double>& param_counts);

    std::size_t fiber_length() const;
    void validate(std::size_t p) const;
};

/// Block application of the grouped operator: per group, weighted pairwise
/// differences of the rows inside that group only. Groups with one member
/// contribute no rows; an all-singleton partition yields nullopt (the
/// operator has zero rows, which DenseMatrix cannot represent).
std::optional<DenseMatrix> grouped_difference(const GroupSpec& spec, const DenseMatrix& w);

std::optional<DenseMatrix> materialize_grouped(const GroupSpec& spec);

/// Orthogonal projection onto the kernel of the (grouped) difference
/// operator: every group's rows are replaced by the group's column means.
DenseMatrix project_kernel(const DenseMatrix& w);
DenseMatrix project_kernel(const DenseMatrix& w, const GroupSpec& spec);

/// Ordered list of weight matrices (last layer first); adjacent layers must
/// be dimension compatible.
struct ParamStack {
    std::vector<DenseMatrix> layers;

    explicit ParamStack(std::vector<DenseMatrix> ls);
    std::size_t hidden_layers() const { return layers.size() - 1; }  // L
    std::size_t parameter_count() const;                             // P
};

/// h[Theta] = sum_l ||A^l W^l||_1 + nu * sum_l ||Pi W^l||_1, entrywise-sum
/// matrix 1-norms throughout. Whole-matrix grouping per layer by default.
double regularizer_h(const ParamStack& theta, double nu);
double regularizer_h(const ParamStack& theta, double nu, std::span<const GroupSpec> per_layer);

/// Sort each column, split into k contiguous partitions (sizes differ by at
/// most one, larger partitions first), replace each value by its partition
/// mean, restore positions. k >= rows leaves the matrix unchanged.
DenseMatrix project_cardinality(const DenseMatrix& w, std::size_t k);

/// Induced 1->1 norm: maximum absolute column sum.
double one_to_one_norm(const DenseMatrix& b);

/// Bound on the 1->1 norm of the restricted inverse of the difference
/// operator: 2/sqrt(P) for a whole matrix with P parameters.
double m_bound_whole(double param_count);

/// Grouped variant: sup_i 2 / (sqrt(P_i) * |B_i|).
double m_bound_grouped(const GroupSpec& spec);

struct LambdaConfig {
    double a_lip = 1.0;    // activation Lipschitz constant
    std::size_t hidden_layers = 1;  // L
    std::size_t samples = 1;        // n
    std::size_t param_count = 1;    // P
    double x_norm_n = 1.0;
    double m_g = 0.0;
    double c = 1.0;        // sub-Gaussian constant, caller supplied
    double nu = 1.0;

    void validate() const;
};

/// lambda >= C (M_G + 1) a_Lip^{2L} ||x||_n^2 (sqrt(2)/L)^{2L-1}
///           sqrt(log(2P)) log(2n) / sqrt(n), evaluated as written.
double lambda_bound(const LambdaConfig& cfg);

}  // namespace cardmul
