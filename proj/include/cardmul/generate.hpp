#pragma once

#include <cstdint>

#include "cardmul/dense.hpp"
#include "cardmul/rng.hpp"

namespace cardmul {

/// Integers drawn uniformly from {1,...,k} minus one standard-normal draw
/// shared by every coordinate, so all fibers hold at most k distinct values.
DenseMatrix gen_cardinality_matrix(std::size_t rows, std::size_t cols, std::size_t k, Rng& rng);

struct GenPair {
    DenseMatrix a;  // M x P, column cardinality <= k
    DenseMatrix b;  // P x N, row cardinality <= k
};

GenPair gen_pair(std::size_t m, std::size_t p, std::size_t n, std::size_t k,
                 std::uint64_t seed);

DenseMatrix gen_binary_matrix(std::size_t rows, std::size_t cols, Rng& rng);

DenseTensor gen_cardinality_tensor(const std::vector<std::size_t>& dims, std::size_t k,
                                   Rng& rng);

}  // namespace cardmul
