#pragma once

#include <cstdint>

#include "cardmul/dense.hpp"
#include "cardmul/matmul.hpp"

namespace cardmul {

/// Mode-n product T x_n U: each mode-n fiber of T becomes U times that
/// fiber. `mode` is 1-based; U must have cols == dims[mode-1].
DenseTensor mode_n_product(const DenseTensor& t, const DenseMatrix& u, std::size_t mode);

/// T x_n A with A the all-pairs difference operator on dims[mode-1].
DenseTensor difference_tensor(const DenseTensor& t, std::size_t mode);

/// Contracted product <X, Y>_L: sums over the last L modes of X paired
/// with the first L modes of Y. For matrices and L = 1 this is the matrix
/// product with naive summation order.
DenseTensor contracted_product(const DenseTensor& x, const DenseTensor& y, std::size_t l);

enum class MatmulBackend { Naive, Auto };

/// Running totals of the matrix kernels invoked by a contraction.
struct MultTotals {
    std::uint64_t scalar_mults = 0;
    double multiply_seconds = 0.0;
    double preprocess_seconds = 0.0;
};

/// Same contraction, but the underlying matrix product of the unfoldings
/// runs through the selected multiplication kernel.
DenseTensor contracted_product_via(const DenseTensor& x, const DenseTensor& y, std::size_t l,
                                   MatmulBackend backend, MultTotals& totals);

/// Contraction of the two tensors over their *leading* K modes (the adjoint
/// pairing used by the regression gradient): result dims are X's trailing
/// modes followed by Y's trailing modes.
DenseTensor contract_leading(const DenseTensor& x, const DenseTensor& y, std::size_t k);

DenseTensor contract_leading_via(const DenseTensor& x, const DenseTensor& y, std::size_t k,
                                 MatmulBackend backend, MultTotals& totals);

/// Effective-noise statistic: twice the largest absolute diagonal entry of
/// the sample-mode Gram <X, X>_1 divided by N (the extent of mode 1).
double effective_noise_s(const DenseTensor& x, std::size_t n_samples);

struct FitOptions {
    double step = 1e-3;
    std::size_t iterations = 100;
    MatmulBackend backend = MatmulBackend::Naive;
};

struct FitReport {
    DenseTensor coefficients;
    double data_loss = 0.0;   // ||Y - <X,B>_L||_F^2
    double objective = 0.0;   // data_loss + lambda*h[B]
    MultTotals totals;        // work done by the contraction kernels
    double seconds = 0.0;
};

/// Subgradient descent for
///   min_B ||Y - <X, B>_L||_F^2 + lambda * (||B x_n A||_1 + nu ||Pi_A B||_1)
/// starting from the zero tensor, with a fixed step. `sparsity_mode` is the
/// 1-based mode of B the difference operator acts on. sign(0) is taken as 0,
/// so B = 0 is a fixed point when Y = 0.
FitReport tensor_regression_fit(const DenseTensor& x, const DenseTensor& y, std::size_t l,
                                double lambda, double nu, std::size_t sparsity_mode,
                                const FitOptions& options);

/// The tensor regularizer ||B x_n A||_1 + nu ||Pi_A B||_1 itself.
double tensor_regularizer_h(const DenseTensor& b, std::size_t mode, double nu);

/// Fiber means along `mode` (1-based): the projection onto the kernel of
/// the mode's difference operator.
DenseTensor project_kernel_mode(const DenseTensor& t, std::size_t mode);

}  // namespace cardmul
