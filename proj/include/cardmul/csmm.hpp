#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

#include "cardmul/codec.hpp"
#include "cardmul/dense.hpp"

namespace cardmul {

/// I/O failure (missing file, short read, write error).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or corrupted container payload.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using CsmmValue =
    std::variant<DenseMatrix, ColCompressed, RowCompressed, BinaryCompressed, DenseTensor>;

// CSMM container, little-endian throughout:
//   magic "CSMM" | version u16 = 1 | kind u8 | rows u64 | cols u64 | payload
// kind 0 dense:     f64 row-major
// kind 1 col-comp:  m u32 | s_j u32[cols] | values f64 m*cols column-major |
//                   encoding u32 rows*cols row-major, 1-based
// kind 2 row-comp:  n u32 | s_i u32[rows] | values f64 rows*n row-major |
//                   encoding u32 rows*cols row-major, 1-based
// kind 3 binary:    first_row bitset (cols bits) | encoding bitset, one
//                   byte-padded run of rows bits per column; bits LSB-first
// kind 4 tensor:    rows = cols = 0 | order u8 | dims u64[order] | f64 row-major

void write_csmm(std::ostream& out, const CsmmValue& value);
CsmmValue read_csmm(std::istream& in);

void write_csmm_file(const std::string& path, const CsmmValue& value);
CsmmValue read_csmm_file(const std::string& path);

}  // namespace cardmul
