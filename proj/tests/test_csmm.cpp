#include <doctest.h>

#include <sstream>

#include "cardmul/csmm.hpp"
#include "cardmul/rng.hpp"
#include "support/oracles.hpp"

using namespace cardmul;

namespace {

std::string bytes_of(const CsmmValue& v) {
    std::ostringstream out(std::ios::binary);
    write_csmm(out, v);
    return out.str();
}

CsmmValue roundtrip(const CsmmValue& v) {
    std::istringstream in(bytes_of(v), std::ios::binary);
    return read_csmm(in);
}

}  // namespace

TEST_SUITE("csmm") {

TEST_CASE("dense matrices round-trip byte-stably") {
    Rng rng(5);
    const DenseMatrix m = oracle::random_matrix(7, 5, rng);
    const std::string first = bytes_of(m);
    const CsmmValue back = roundtrip(m);
    CHECK(std::get<DenseMatrix>(back) == m);
    CHECK(bytes_of(back) == first);
    CHECK(first.substr(0, 4) == "CSMM");
}

TEST_CASE("compressed kinds round-trip byte-stably") {
    Rng rng(6);
    const DenseMatrix m = oracle::random_levels_matrix(9, 4, 3, rng);

    const ColCompressed c = compress_columns(m);
    const std::string cb = bytes_of(c);
    const auto c2 = std::get<ColCompressed>(roundtrip(c));
    CHECK(decompress_columns(c2) == m);
    CHECK(bytes_of(c2) == cb);

    const RowCompressed r = compress_rows(m);
    const std::string rb = bytes_of(r);
    const auto r2 = std::get<RowCompressed>(roundtrip(r));
    CHECK(decompress_rows(r2) == m);
    CHECK(bytes_of(r2) == rb);

    DenseMatrix bits(11, 6);
    for (double& v : bits.data()) v = rng.next_bit() ? 1.0 : 0.0;
    const BinaryCompressed b = compress_binary(bits);
    const std::string bb = bytes_of(b);
    const auto b2 = std::get<BinaryCompressed>(roundtrip(b));
    CHECK(decompress_binary(b2) == bits);
    CHECK(bytes_of(b2) == bb);
}

TEST_CASE("tensors serialize as kind 4") {
    Rng rng(7);
    DenseTensor t({2, 3, 4});
    for (double& v : t.data()) v = rng.next_normal();
    const auto back = std::get<DenseTensor>(roundtrip(t));
    CHECK(back == t);
}

TEST_CASE("reader rejects corrupted streams") {
    Rng rng(8);
    const DenseMatrix m = oracle::random_levels_matrix(4, 3, 2, rng);

    std::string bad_magic = bytes_of(m);
    bad_magic[0] = 'X';
    std::istringstream in1(bad_magic, std::ios::binary);
    CHECK_THROWS_AS(read_csmm(in1), FormatError);

    std::string truncated = bytes_of(m);
    truncated.resize(truncated.size() / 2);
    std::istringstream in2(truncated, std::ios::binary);
    CHECK_THROWS_AS(read_csmm(in2), IoError);

    // Encoding index past the column's unique count must be rejected.
    const ColCompressed c = compress_columns(m);
    std::string bytes = bytes_of(c);
    // Header (4+2+1+8+8) + m (4) + s_j (4*3) + values (8*max_uniques*3):
    // the first encoding entry sits right after the values block.
    const std::size_t enc_off = 23 + 4 + 4 * 3 + 8 * c.max_uniques * 3;
    bytes[enc_off] = static_cast<char>(200);
    std::istringstream in3(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_csmm(in3), FormatError);
}

TEST_CASE("binary encoding columns must start with zero") {
    DenseMatrix bits(3, 2);
    bits(0, 0) = 1.0;
    const BinaryCompressed b = compress_binary(bits);
    std::string bytes = bytes_of(b);
    // Flip the first encoding bit of column 0 (after header + first_row byte).
    bytes[23 + 1] = static_cast<char>(bytes[23 + 1] | 1);
    std::istringstream in(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_csmm(in), FormatError);
}

}  // TEST_SUITE
