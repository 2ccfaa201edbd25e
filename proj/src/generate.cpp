#include "cardmul/generate.hpp"

#include <stdexcept>

namespace cardmul {

DenseMatrix gen_cardinality_matrix(std::size_t rows, std::size_t cols, std::size_t k, Rng& rng) {
    if (k < 1) throw std::invalid_argument("gen: sparsity degree must be >= 1");
    const double shift = rng.next_normal();
    DenseMatrix m(rows, cols);
    for (double& v : m.data())
        v = static_cast<double>(rng.next_int_1_to(k)) - shift;
    return m;
}

GenPair gen_pair(std::size_t m, std::size_t p, std::size_t n, std::size_t k,
                 std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix a = gen_cardinality_matrix(m, p, k, rng);
    DenseMatrix b = gen_cardinality_matrix(p, n, k, rng);
    return {std::move(a), std::move(b)};
}

DenseMatrix gen_binary_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = rng.next_bit() ? 1.0 : 0.0;
    return m;
}

DenseTensor gen_cardinality_tensor(const std::vector<std::size_t>& dims, std::size_t k,
                                   Rng& rng) {
    if (k < 1) throw std::invalid_argument("gen: sparsity degree must be >= 1");
    const double shift = rng.next_normal();
    DenseTensor t(dims);
    for (double& v : t.data())
        v = static_cast<double>(rng.next_int_1_to(k)) - shift;
    return t;
}

}  // namespace cardmul
