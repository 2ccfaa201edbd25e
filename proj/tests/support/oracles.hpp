#pragma once

// Test-side oracles, kept independent of the library's computation paths:
// a second multiplication routine with a different loop order, Eigen-based
// pseudo-inverse and least squares, and set-based distinct counting.

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <set>
#include <vector>

#include "cardmul/dense.hpp"
#include "cardmul/rng.hpp"

namespace oracle {

using cardmul::DenseMatrix;

// k-i-j loop order, accumulating rank-one updates; independent of the
// library's i-j-k naive kernel.
inline DenseMatrix multiply_kij(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t k = 0; k < a.cols(); ++k)
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

inline Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

inline DenseMatrix from_eigen(const Eigen::MatrixXd& e) {
    DenseMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return m;
}

inline Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a) {
    return a.completeOrthogonalDecomposition().pseudoInverse();
}

// Max absolute column sum evaluated per the definition: maximum of ||B e_j||_1
// over coordinate basis vectors.
inline double one_to_one_by_basis(const Eigen::MatrixXd& b) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(b.cols());
        e(j) = 1.0;
        best = std::max(best, (b * e).lpNorm<1>());
    }
    return best;
}

// Orthogonal projection of each column of W onto ker(A), computed by least
// squares against an orthonormal kernel basis.
inline DenseMatrix project_onto_kernel(const Eigen::MatrixXd& a, const DenseMatrix& w) {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd kernel = lu.kernel();  // columns span ker(A)
    const Eigen::MatrixXd we = to_eigen(w);
    const Eigen::MatrixXd coeff =
        (kernel.transpose() * kernel).ldlt().solve(kernel.transpose() * we);
    return from_eigen(kernel * coeff);
}

inline std::size_t distinct_bits(const std::vector<double>& values) {
    std::set<std::uint64_t> seen;
    for (double v : values) seen.insert(std::bit_cast<std::uint64_t>(v));
    return seen.size();
}

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, cardmul::Rng& rng,
                                 double scale = 1.0) {
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = scale * (2.0 * rng.next_unit() - 1.0);
    return m;
}

// Entries drawn from `degree` random levels, so fibers in both directions
// hold at most `degree` distinct values.
inline DenseMatrix random_levels_matrix(std::size_t rows, std::size_t cols, std::size_t degree,
                                        cardmul::Rng& rng) {
    std::vector<double> levels(degree);
    for (double& l : levels) l = 10.0 * (2.0 * rng.next_unit() - 1.0);
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = levels[rng.next_u64() % degree];
    return m;
}

}  // namespace oracle
