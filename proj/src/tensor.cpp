#include "cardmul/tensor.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "cardmul/sparsity.hpp"

namespace cardmul {

namespace {

std::size_t product_of(std::span<const std::size_t> dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) p *= d;
    return p;
}

void check_mode(const DenseTensor& t, std::size_t mode) {
    if (mode < 1 || mode > t.order())
        throw std::out_of_range("tensor: mode out of range");
}

// The contraction pattern of <X, Y>_L on row-major data is exactly a matrix
// product of the unfoldings, so both tensors are reshaped in place.
struct ContractionShape {
    std::size_t rows;      // product of x's leading dims
    std::size_t inner;     // product of the contracted dims
    std::size_t cols;      // product of y's trailing dims
    std::vector<std::size_t> out_dims;
};

ContractionShape contraction_shape(const DenseTensor& x, const DenseTensor& y, std::size_t l) {
    if (l < 1 || l > x.order() || l > y.order())
        throw std::invalid_argument("contracted_product: invalid contraction length");
    const auto& xd = x.dims();
    const auto& yd = y.dims();
    for (std::size_t i = 0; i < l; ++i)
        if (xd[xd.size() - l + i] != yd[i])
            throw std::invalid_argument("contracted_product: contracted extents do not agree");

    ContractionShape s;
    s.rows = product_of(std::span(xd).first(xd.size() - l));
    s.inner = product_of(std::span(yd).first(l));
    s.cols = product_of(std::span(yd).subspan(l));
    s.out_dims.assign(xd.begin(), xd.end() - static_cast<std::ptrdiff_t>(l));
    s.out_dims.insert(s.out_dims.end(), yd.begin() + static_cast<std::ptrdiff_t>(l), yd.end());
    if (s.out_dims.empty()) s.out_dims.push_back(1);  // fully contracted: scalar as a 1-tensor
    return s;
}

DenseMatrix unfold(const DenseTensor& t, std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols, t.data());
}

}  // namespace

DenseTensor mode_n_product(const DenseTensor& t, const DenseMatrix& u, std::size_t mode) {
    check_mode(t, mode);
    const std::size_t m = mode - 1;
    const std::size_t extent = t.dims()[m];
    if (u.cols() != extent)
        throw std::invalid_argument("mode_n_product: matrix cols must match mode extent");

    std::vector<std::size_t> out_dims = t.dims();
    out_dims[m] = u.rows();
    DenseTensor out(out_dims);

    std::size_t outer = 1;
    for (std::size_t d = 0; d < m; ++d) outer *= t.dims()[d];
    const std::size_t inner = t.stride(m);

    for (std::size_t o = 0; o < outer; ++o) {
        const double* tin = t.data().data() + o * extent * inner;
        double* tout = out.data().data() + o * u.rows() * inner;
        for (std::size_t r = 0; r < u.rows(); ++r) {
            for (std::size_t in = 0; in < inner; ++in) {
                double acc = 0.0;
                for (std::size_t q = 0; q < extent; ++q)
                    acc += tin[q * inner + in] * u(r, q);
                tout[r * inner + in] = acc;
            }
        }
    }
    return out;
}

DenseTensor difference_tensor(const DenseTensor& t, std::size_t mode) {
    check_mode(t, mode);
    if (t.dims()[mode - 1] < 2)
        throw std::invalid_argument("difference_tensor: mode extent must be >= 2");
    return mode_n_product(t, difference_operator(t.dims()[mode - 1]).materialize(), mode);
}

DenseTensor contracted_product(const DenseTensor& x, const DenseTensor& y, std::size_t l) {
    const auto s = contraction_shape(x, y, l);
    DenseTensor out(s.out_dims);
    // Same i, j, k order as multiply_naive so the matrix special case agrees
    // exactly.
    const double* xd = x.data().data();
    const double* yd = y.data().data();
    double* od = out.data().data();
    for (std::size_t i = 0; i < s.rows; ++i) {
        for (std::size_t j = 0; j < s.cols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < s.inner; ++k)
                acc += xd[i * s.inner + k] * yd[k * s.cols + j];
            od[i * s.cols + j] = acc;
        }
    }
    return out;
}

DenseTensor contracted_product_via(const DenseTensor& x, const DenseTensor& y, std::size_t l,
                                   MatmulBackend backend, MultTotals& totals) {
    const auto s = contraction_shape(x, y, l);
    const DenseMatrix xm = unfold(x, s.rows, s.inner);
    const DenseMatrix ym = unfold(y, s.inner, s.cols);
    MultReport r = backend == MatmulBackend::Naive ? multiply_naive(xm, ym)
                                                   : multiply_auto(xm, ym);
    totals.scalar_mults += r.scalar_mults;
    totals.multiply_seconds += r.multiply_seconds;
    totals.preprocess_seconds += r.preprocess_seconds;
    return DenseTensor(s.out_dims, std::move(r.product.data()));
}

DenseTensor contract_leading(const DenseTensor& x, const DenseTensor& y, std::size_t k) {
    MultTotals ignored;
    return contract_leading_via(x, y, k, MatmulBackend::Naive, ignored);
}

DenseTensor contract_leading_via(const DenseTensor& x, const DenseTensor& y, std::size_t k,
                                 MatmulBackend backend, MultTotals& totals) {
    if (k < 1 || k > x.order() || k > y.order())
        throw std::invalid_argument("contract_leading: invalid contraction length");
    for (std::size_t i = 0; i < k; ++i)
        if (x.dims()[i] != y.dims()[i])
            throw std::invalid_argument("contract_leading: contracted extents do not agree");

    const std::size_t inner = product_of(std::span(x.dims()).first(k));
    const std::size_t rows = x.size() / inner;
    const std::size_t cols = y.size() / inner;

    std::vector<std::size_t> out_dims(x.dims().begin() + static_cast<std::ptrdiff_t>(k),
                                      x.dims().end());
    out_dims.insert(out_dims.end(), y.dims().begin() + static_cast<std::ptrdiff_t>(k),
                    y.dims().end());
    if (out_dims.empty()) out_dims.push_back(1);

    // X unfolds as inner x rows; the pairing is X^T Y on the unfoldings.
    const DenseMatrix xt = unfold(x, inner, rows).transposed();
    const DenseMatrix ym = unfold(y, inner, cols);
    MultReport r = backend == MatmulBackend::Naive ? multiply_naive(xt, ym)
                                                   : multiply_auto(xt, ym);
    totals.scalar_mults += r.scalar_mults;
    totals.multiply_seconds += r.multiply_seconds;
    totals.preprocess_seconds += r.preprocess_seconds;
    return DenseTensor(out_dims, std::move(r.product.data()));
}

double effective_noise_s(const DenseTensor& x, std::size_t n_samples) {
    if (x.dims()[0] != n_samples)
        throw std::invalid_argument("effective_noise_s: first mode extent must equal N");
    const std::size_t cols = x.size() / n_samples;
    // Diagonal of the sample-mode Gram: squared column norms of the unfolding.
    double best = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        double diag = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double v = x[i * cols + j];
            diag += v * v;
        }
        best = std::max(best, std::fabs(diag));
    }
    return 2.0 * best / static_cast<double>(n_samples);
}

DenseTensor project_kernel_mode(const DenseTensor& t, std::size_t mode) {
    check_mode(t, mode);
    const std::size_t m = mode - 1;
    const std::size_t extent = t.dims()[m];
    const std::size_t inner = t.stride(m);
    std::size_t outer = 1;
    for (std::size_t d = 0; d < m; ++d) outer *= t.dims()[d];

    DenseTensor out(t.dims());
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const double* base = t.data().data() + o * extent * inner + in;
            double mean = 0.0;
            for (std::size_t q = 0; q < extent; ++q) mean += base[q * inner];
            mean /= static_cast<double>(extent);
            double* obase = out.data().data() + o * extent * inner + in;
            for (std::size_t q = 0; q < extent; ++q) obase[q * inner] = mean;
        }
    }
    return out;
}

double tensor_regularizer_h(const DenseTensor& b, std::size_t mode, double nu) {
    check_mode(b, mode);
    double h = 0.0;
    if (b.dims()[mode - 1] >= 2) {
        const DenseTensor diff = difference_tensor(b, mode);
        for (double v : diff.data()) h += std::fabs(v);
    }
    const DenseTensor proj = project_kernel_mode(b, mode);
    for (double v : proj.data()) h += nu * std::fabs(v);
    return h;
}

namespace {

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

FitReport tensor_regression_fit(const DenseTensor& x, const DenseTensor& y, std::size_t l,
                                double lambda, double nu, std::size_t sparsity_mode,
                                const FitOptions& options) {
    if (options.step <= 0.0)
        throw std::invalid_argument("tensor_regression_fit: step must be positive");
    if (lambda < 0.0 || nu < 0.0)
        throw std::invalid_argument("tensor_regression_fit: lambda and nu must be >= 0");
    if (x.order() != l + 1)
        throw std::invalid_argument(
            "tensor_regression_fit: X must have order L+1 with the sample mode first");
    if (x.dims()[0] != y.dims()[0])
        throw std::invalid_argument("tensor_regression_fit: sample extents do not agree");

    // B's dims: X's trailing L modes followed by Y's non-sample modes.
    std::vector<std::size_t> b_dims(x.dims().begin() + 1, x.dims().end());
    b_dims.insert(b_dims.end(), y.dims().begin() + 1, y.dims().end());
    if (sparsity_mode < 1 || sparsity_mode > b_dims.size())
        throw std::out_of_range("tensor_regression_fit: sparsity mode out of range");

    DenseTensor b(b_dims);
    DenseMatrix a_mat(1, 1);
    DenseMatrix a_t(1, 1);
    const bool has_pairs = b_dims[sparsity_mode - 1] >= 2;
    if (lambda > 0.0 && has_pairs) {
        a_mat = difference_operator(b_dims[sparsity_mode - 1]).materialize();
        a_t = a_mat.transposed();
    }

    const auto start = std::chrono::steady_clock::now();
    MultTotals totals;

    for (std::size_t it = 0; it < options.iterations; ++it) {
        // Residual and data gradient 2 <X, <X,B>_L - Y> over the sample mode.
        DenseTensor pred = contracted_product_via(x, b, l, options.backend, totals);
        for (std::size_t q = 0; q < pred.size(); ++q) pred[q] -= y[q];
        DenseTensor grad = contract_leading_via(x, pred, 1, options.backend, totals);
        for (std::size_t q = 0; q < grad.size(); ++q) grad[q] *= 2.0;

        if (lambda > 0.0) {
            if (has_pairs) {
                DenseTensor diff = mode_n_product(b, a_mat, sparsity_mode);
                for (std::size_t q = 0; q < diff.size(); ++q) diff[q] = sign0(diff[q]);
                const DenseTensor pulled = mode_n_product(diff, a_t, sparsity_mode);
                for (std::size_t q = 0; q < grad.size(); ++q)
                    grad[q] += lambda * pulled[q];
            }
            DenseTensor proj = project_kernel_mode(b, sparsity_mode);
            for (std::size_t q = 0; q < proj.size(); ++q) proj[q] = sign0(proj[q]);
            const DenseTensor pulled_proj = project_kernel_mode(proj, sparsity_mode);
            for (std::size_t q = 0; q < grad.size(); ++q)
                grad[q] += lambda * nu * pulled_proj[q];
        }

        for (std::size_t q = 0; q < b.size(); ++q) b[q] -= options.step * grad[q];
    }

    FitReport report{std::move(b), 0.0, 0.0, totals,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count()};
    const DenseTensor pred = contracted_product(x, report.coefficients, l);
    for (std::size_t q = 0; q < pred.size(); ++q) {
        const double d = pred[q] - y[q];
        report.data_loss += d * d;
    }
    report.objective = report.data_loss;
    if (lambda > 0.0)
        report.objective += lambda * tensor_regularizer_h(report.coefficients, sparsity_mode, nu);
    return report;
}

}  // namespace cardmul
