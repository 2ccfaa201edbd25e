#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cardmul/codec.hpp"
#include "cardmul/dense.hpp"

namespace cardmul {

enum class Kernel { Naive, Strassen, OuterCompressed, InnerCompressed, Binary };

std::string kernel_name(Kernel k);

struct MultReport {
    DenseMatrix product;
    std::uint64_t scalar_mults = 0;
    double multiply_seconds = 0.0;
    double preprocess_seconds = 0.0;  // compression time when the kernel compresses itself
    Kernel kernel = Kernel::Naive;
};

/// Algorithm: the standard triple loop, C[i,j] = sum_k A[i,k]*B[k,j].
/// scalar_mults is exactly M*P*N.
MultReport multiply_naive(const DenseMatrix& a, const DenseMatrix& b);

/// Classical 7-multiplication Strassen recursion. Inputs are zero-padded to
/// the next power of two and the padding is stripped from the output;
/// blocks of size <= cutoff fall back to the naive kernel.
MultReport multiply_strassen(const DenseMatrix& a, const DenseMatrix& b,
                             std::size_t cutoff = 64);

/// Rank-one accumulation over the shared dimension: for every j the outer
/// product of the two value tables is formed (the only multiplications) and
/// scattered to the output through the encoding labels. Contributions are
/// accumulated for j ascending unless `j_order` supplies a permutation.
/// scalar_mults = sum_j s_j * t_j.
MultReport multiply_outer_compressed(const ColCompressed& w, const RowCompressed& v,
                                     const std::vector<std::size_t>& j_order = {},
                                     unsigned threads = 1);

/// Inner-product route for a large shared dimension: entries of each column
/// of `b` are group-summed by the row encoding of `w_rows`, then multiplied
/// once per unique value. scalar_mults = b.cols * sum_i s_i.
MultReport multiply_inner_compressed(const RowCompressed& w_rows, const DenseMatrix& b,
                                     unsigned threads = 1);

/// Two-value specialization routed through the rank-one scatter; the result
/// is exact (integer arithmetic, no rounding).
MultReport multiply_binary(const BinaryCompressed& a, const BinaryCompressed& b);
MultReport multiply_binary(const BinaryCompressed& a, const DenseMatrix& b);

/// Dispatch rule: binary inputs go to the binary kernel; otherwise the
/// outer kernel when the shared dimension is smaller than both output
/// dimensions, else the inner kernel. Compression happens inside and is
/// reported as preprocess_seconds.
MultReport multiply_auto(const DenseMatrix& a, const DenseMatrix& b, double tolerance = 0.0,
                         unsigned threads = 1);

/// Relative Frobenius distance ||x - ref||_F / ||ref||_F (0 when both empty).
double relative_frobenius_error(const DenseMatrix& x, const DenseMatrix& ref);

}  // namespace cardmul
