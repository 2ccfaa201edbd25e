#include "cardmul/cardinality.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cardmul {

namespace {

bool same_value(double a, double rep, double tolerance) {
    if (tolerance == 0.0)
        return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(rep);
    return std::fabs(a - rep) <= tolerance;
}

}  // namespace

std::size_t distinct_in_fiber(const double* base, std::size_t len, std::size_t stride,
                              double tolerance) {
    std::vector<double> reps;
    for (std::size_t i = 0; i < len; ++i) {
        const double v = base[i * stride];
        bool seen = false;
        for (double rep : reps) {
            if (same_value(v, rep, tolerance)) {
                seen = true;
                break;
            }
        }
        if (!seen) reps.push_back(v);
    }
    return reps.size();
}

std::size_t cardinality_degree(const DenseMatrix& matrix, FiberMode mode, double tolerance) {
    if (tolerance < 0.0) throw std::invalid_argument("cardinality_degree: tolerance must be >= 0");
    std::size_t degree = 0;
    if (mode == FiberMode::ColumnWise) {
        for (std::size_t j = 0; j < matrix.cols(); ++j) {
            const std::size_t d =
                distinct_in_fiber(matrix.data().data() + j, matrix.rows(), matrix.cols(), tolerance);
            if (d > degree) degree = d;
        }
    } else {
        for (std::size_t i = 0; i < matrix.rows(); ++i) {
            const std::size_t d = distinct_in_fiber(matrix.row(i).data(), matrix.cols(), 1, tolerance);
            if (d > degree) degree = d;
        }
    }
    return degree;
}

bool is_nk_sparse(const DenseTensor& tensor, std::size_t fiber_mode, std::size_t k,
                  double tolerance) {
    if (fiber_mode < 1 || fiber_mode > tensor.order())
        throw std::out_of_range("is_nk_sparse: fiber mode out of range");
    if (k < 1) throw std::invalid_argument("is_nk_sparse: k must be >= 1");

    const std::size_t mode = fiber_mode - 1;
    const std::size_t extent = tensor.dims()[mode];
    const std::size_t stride = tensor.stride(mode);
    // Fibers are enumerated as (outer, inner) blocks around the chosen mode.
    std::size_t outer = 1;
    for (std::size_t d = 0; d < mode; ++d) outer *= tensor.dims()[d];
    const std::size_t inner = stride;

    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const double* base = tensor.data().data() + o * extent * inner + in;
            if (distinct_in_fiber(base, extent, stride, tolerance) > k) return false;
        }
    }
    return true;
}

}  // namespace cardmul
