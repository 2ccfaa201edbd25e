#include <doctest.h>

#include "cardmul/cardinality.hpp"
#include "cardmul/codec.hpp"
#include "cardmul/rng.hpp"
#include "support/oracles.hpp"

using namespace cardmul;

namespace {

DenseMatrix intro_w() {
    return DenseMatrix::from_rows(
        {{2.1, 1.1}, {1, 2.3}, {1, 1.1}, {2.1, 1.1}, {3, 2.3}, {3, 4}});
}

}  // namespace

TEST_SUITE("codec") {

TEST_CASE("column compression of the 6x2 running example") {
    const ColCompressed c = compress_columns(intro_w());
    CHECK(c.max_uniques == 3);
    CHECK(c.uniques_per_col == std::vector<std::uint32_t>{3, 3});
    // C_W = [[2.1, 1.1], [1, 2.3], [3, 4]]
    CHECK(c.value_at(0, 0) == 2.1);
    CHECK(c.value_at(1, 0) == 1.0);
    CHECK(c.value_at(2, 0) == 3.0);
    CHECK(c.value_at(0, 1) == 1.1);
    CHECK(c.value_at(1, 1) == 2.3);
    CHECK(c.value_at(2, 1) == 4.0);
    // first column of I, 1-based: (1, 2, 2, 1, 3, 3)
    const std::vector<std::uint32_t> expect{0, 1, 1, 0, 2, 2};
    for (std::size_t i = 0; i < 6; ++i) CHECK(c.label(i, 0) == expect[i]);
    CHECK(decompress_columns(c) == intro_w());
}

TEST_CASE("constant matrix compresses to a single value row") {
    DenseMatrix m(3, 3);
    for (double& v : m.data()) v = 5.0;
    const ColCompressed c = compress_columns(m);
    CHECK(c.max_uniques == 1);
    for (std::size_t j = 0; j < 3; ++j) CHECK(c.value_at(0, j) == 5.0);
    for (std::uint32_t label : c.encoding) CHECK(label == 0);
    CHECK(decompress_columns(c) == m);
}

TEST_CASE("row compression mirrors column compression") {
    // V over two distinct values per row, numeric stand-ins a=1 b=2 c=3 d=4.
    const DenseMatrix v = DenseMatrix::from_rows({{1, 1, 2, 1}, {3, 4, 4, 3}});
    const RowCompressed r = compress_rows(v);
    CHECK(r.max_uniques == 2);
    CHECK(r.value_at(0, 0) == 1.0);
    CHECK(r.value_at(0, 1) == 2.0);
    CHECK(r.value_at(1, 0) == 3.0);
    CHECK(r.value_at(1, 1) == 4.0);
    // first row of J, 1-based: (1, 1, 2, 1)
    CHECK(r.label(0, 0) == 0);
    CHECK(r.label(0, 1) == 0);
    CHECK(r.label(0, 2) == 1);
    CHECK(r.label(0, 3) == 0);
    CHECK(decompress_rows(r) == v);
}

TEST_CASE("single all-distinct row") {
    const DenseMatrix v = DenseMatrix::from_rows({{5, 6, 7, 8}});
    const RowCompressed r = compress_rows(v);
    CHECK(r.max_uniques == 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK(r.label(0, j) == j);
    CHECK(decompress_rows(r) == v);
}

TEST_CASE("decoding a hand-built single-row value table") {
    ColCompressed c;
    c.rows = 4;
    c.cols = 3;
    c.max_uniques = 1;
    c.uniques_per_col = {1, 1, 1};
    c.values = {7.0, -1.0, 0.5};
    c.encoding.assign(12, 0);
    c.build_groups();
    const DenseMatrix m = decompress_columns(c);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m(i, 0) == 7.0);
        CHECK(m(i, 1) == -1.0);
        CHECK(m(i, 2) == 0.5);
    }
}

TEST_CASE("decompress rejects labels past the unique count") {
    ColCompressed c = compress_columns(intro_w());
    c.encoding[0] = 5;
    CHECK_THROWS_AS(decompress_columns(c), std::runtime_error);
    RowCompressed r = compress_rows(intro_w());
    r.encoding[0] = 9;
    CHECK_THROWS_AS(decompress_rows(r), std::runtime_error);
}

TEST_CASE("binary compression matches the worked 6x3 example") {
    const DenseMatrix a = DenseMatrix::from_rows(
        {{0, 0, 1}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 1, 1}});
    const BinaryCompressed b = compress_binary(a);
    const DenseMatrix expect_enc = DenseMatrix::from_rows(
        {{0, 0, 0}, {0, 1, 1}, {1, 1, 1}, {0, 0, 0}, {1, 0, 1}, {0, 1, 0}});
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(b.bit(i, j) == static_cast<std::uint8_t>(expect_enc(i, j)));
    // C_A = [[0, 0, 1], [1, 1, 0]]
    CHECK(b.value_at(0, 0) == 0);
    CHECK(b.value_at(0, 1) == 0);
    CHECK(b.value_at(0, 2) == 1);
    CHECK(b.value_at(1, 0) == 1);
    CHECK(b.value_at(1, 1) == 1);
    CHECK(b.value_at(1, 2) == 0);
    CHECK(decompress_binary(b) == a);
}

TEST_CASE("binary compression of an all-zero matrix") {
    DenseMatrix z(4, 3);
    const BinaryCompressed b = compress_binary(z);
    for (std::uint8_t bit : b.encoding) CHECK(bit == 0);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(b.value_at(0, j) == 0);
        CHECK(b.value_at(1, j) == 1);
    }
    CHECK(decompress_binary(b) == z);
}

TEST_CASE("binary compression rejects non-binary entries") {
    const DenseMatrix m = DenseMatrix::from_rows({{0, 1}, {2, 0}});
    CHECK_THROWS_AS(compress_binary(m), std::domain_error);
}

TEST_CASE("round-trip property across all four pairs") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng.next_u64() % 12;
        const std::size_t cols = 1 + rng.next_u64() % 9;
        const std::size_t degree = 1 + rng.next_u64() % 6;
        const DenseMatrix m = oracle::random_levels_matrix(rows, cols, degree, rng);
        CHECK(decompress_columns(compress_columns(m)) == m);
        CHECK(decompress_rows(compress_rows(m)) == m);

        DenseMatrix bits(rows, cols);
        for (double& v : bits.data()) v = rng.next_bit() ? 1.0 : 0.0;
        CHECK(decompress_binary(compress_binary(bits)) == bits);
    }
}

TEST_CASE("recompressing a decompressed matrix is stable") {
    Rng rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const DenseMatrix m =
            oracle::random_levels_matrix(2 + rng.next_u64() % 8, 1 + rng.next_u64() % 5,
                                         1 + rng.next_u64() % 4, rng);
        const ColCompressed c1 = compress_columns(m);
        const ColCompressed c2 = compress_columns(decompress_columns(c1));
        CHECK(c1.values == c2.values);
        CHECK(c1.encoding == c2.encoding);
        CHECK(c1.uniques_per_col == c2.uniques_per_col);
    }
}

TEST_CASE("transpose_as_rows matches compressing the transpose") {
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        const DenseMatrix m =
            oracle::random_levels_matrix(2 + rng.next_u64() % 6, 2 + rng.next_u64() % 6,
                                         1 + rng.next_u64() % 4, rng);
        const RowCompressed a = transpose_as_rows(compress_columns(m));
        const RowCompressed b = compress_rows(m.transposed());
        CHECK(a.values == b.values);
        CHECK(a.encoding == b.encoding);
        CHECK(a.uniques_per_row == b.uniques_per_row);
    }
}

TEST_CASE("memory footprint formulas") {
    // dense 100 x 10
    CHECK(memory_footprint(DenseMatrix(100, 10), MemoryModel::Fixed32) == 32000);

    // the running example: values 32*6, encoding 6*2*ceil(log2 3)
    const ColCompressed c = compress_columns(intro_w());
    CHECK(memory_footprint(c, MemoryModel::MinimalBits) == 192 + 24);
    CHECK(memory_footprint(intro_w(), MemoryModel::MinimalBits) == 384);
    CHECK(memory_footprint(c, MemoryModel::Fixed32) == 192 + 32 * 12);

    // constant 1000 x 1: strictly below 1/8 of dense under minimal bits
    DenseMatrix constant(1000, 1);
    for (double& v : constant.data()) v = 3.25;
    const ColCompressed cc = compress_columns(constant);
    CHECK(memory_footprint(cc, MemoryModel::MinimalBits) * 8 <
          memory_footprint(constant, MemoryModel::Fixed32));

    // binary: cols*2 value bits + rows*cols encoding bits under minimal bits
    DenseMatrix bits(16, 8);
    const BinaryCompressed bc = compress_binary(bits);
    CHECK(memory_footprint(bc, MemoryModel::MinimalBits) == 8 * 2 + 16 * 8);
}

TEST_CASE("minimal-bits footprint is non-decreasing in the degree") {
    Rng rng(77);
    std::uint64_t prev = 0;
    for (std::size_t degree = 1; degree <= 12; ++degree) {
        const DenseMatrix m = oracle::random_levels_matrix(64, 6, degree, rng);
        const std::uint64_t bits = memory_footprint(compress_columns(m), MemoryModel::MinimalBits);
        CHECK(bits >= prev);
        prev = bits;
    }
}

TEST_CASE("compression wins exactly when the value table plus indices fit") {
    Rng rng(88);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 4 + rng.next_u64() % 120;
        const std::size_t cols = 1 + rng.next_u64() % 8;
        const std::size_t degree = 1 + rng.next_u64() % 8;
        const DenseMatrix m = oracle::random_levels_matrix(rows, cols, degree, rng);
        const ColCompressed c = compress_columns(m);
        std::uint64_t uniques = 0;
        for (auto s : c.uniques_per_col) uniques += s;
        std::uint64_t index_bits = 1;
        while ((1ULL << index_bits) < std::max<std::uint64_t>(2, c.max_uniques)) ++index_bits;
        const std::uint64_t compressed = 32 * uniques + index_bits * rows * cols;
        const std::uint64_t dense = 32ULL * rows * cols;
        CHECK(memory_footprint(c, MemoryModel::MinimalBits) == compressed);
        if (compressed < dense)
            CHECK(memory_footprint(c, MemoryModel::MinimalBits) <
                  memory_footprint(m, MemoryModel::Fixed32));
    }
}

}  // TEST_SUITE
