#pragma once

#include <cstdint>
#include <vector>

#include "cardmul/dense.hpp"

namespace cardmul {

/// Column-wise dictionary compression: per column the table of distinct
/// values in first-occurrence order plus an integer label per entry.
/// Labels are stored 0-based in memory; every serialized form is 1-based.
struct ColCompressed {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t max_uniques = 0;             // m = max_j s_j
    std::vector<std::uint32_t> uniques_per_col;  // s_j, length cols
    std::vector<double> values;              // m x cols, column-major (zero-padded)
    std::vector<std::uint32_t> encoding;     // rows x cols, row-major, 0-based labels

    // Inverse index, built at compression time: for column j the row
    // positions grouped by label, as offsets[j][t]..offsets[j][t+1] into
    // positions[j].
    std::vector<std::vector<std::uint32_t>> group_offsets;
    std::vector<std::vector<std::uint32_t>> group_positions;

    double value_at(std::size_t t, std::size_t j) const { return values[t * cols + j]; }
    std::uint32_t label(std::size_t i, std::size_t j) const { return encoding[i * cols + j]; }

    void build_groups();
};

/// Row-wise mirror of ColCompressed: per row the distinct values in
/// first-occurrence order plus a label per entry.
struct RowCompressed {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t max_uniques = 0;             // n = max_i s_i
    std::vector<std::uint32_t> uniques_per_row;  // s_i, length rows
    std::vector<double> values;              // rows x n, row-major (zero-padded)
    std::vector<std::uint32_t> encoding;     // rows x cols, row-major, 0-based labels

    std::vector<std::vector<std::uint32_t>> group_offsets;   // per row
    std::vector<std::vector<std::uint32_t>> group_positions; // column positions per label

    double value_at(std::size_t i, std::size_t t) const { return values[i * max_uniques + t]; }
    std::uint32_t label(std::size_t i, std::size_t j) const { return encoding[i * cols + j]; }

    void build_groups();
};

/// Two-value specialization: the first row of the matrix plus a bit matrix
/// normalized so every column starts with 0; the per-column value table is
/// the first value and its complement.
struct BinaryCompressed {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> first_row;   // length cols, values in {0,1}
    std::vector<std::uint8_t> encoding;    // rows x cols, row-major, bits in {0,1}

    std::uint8_t bit(std::size_t i, std::size_t j) const { return encoding[i * cols + j]; }
    /// Value of the original matrix at (i, j).
    std::uint8_t original(std::size_t i, std::size_t j) const {
        return static_cast<std::uint8_t>(first_row[j] ^ bit(i, j));
    }
    /// values table row t of column j (t = 0 stored value, t = 1 complement).
    std::uint8_t value_at(std::size_t t, std::size_t j) const {
        return static_cast<std::uint8_t>(t == 0 ? first_row[j] : 1 - first_row[j]);
    }
};

ColCompressed compress_columns(const DenseMatrix& w, double tolerance = 0.0);
RowCompressed compress_rows(const DenseMatrix& v, double tolerance = 0.0);
DenseMatrix decompress_columns(const ColCompressed& c);
DenseMatrix decompress_rows(const RowCompressed& r);

BinaryCompressed compress_binary(const DenseMatrix& b);
DenseMatrix decompress_binary(const BinaryCompressed& b);

/// Row-wise compression of the transpose, reusing the column compression
/// of the original (column labels are row labels of the transpose).
RowCompressed transpose_as_rows(const ColCompressed& c);

bool is_binary_matrix(const DenseMatrix& m);

enum class MemoryModel { Fixed32, MinimalBits };

/// Storage cost in bits. Fixed32 charges 32 bits per stored value and per
/// encoding entry; MinimalBits charges ceil(log2(max(2, m))) per encoding
/// entry and 1 bit per binary value/encoding entry.
std::uint64_t memory_footprint(const DenseMatrix& m, MemoryModel model);
std::uint64_t memory_footprint(const ColCompressed& c, MemoryModel model);
std::uint64_t memory_footprint(const RowCompressed& r, MemoryModel model);
std::uint64_t memory_footprint(const BinaryCompressed& b, MemoryModel model);

}  // namespace cardmul
