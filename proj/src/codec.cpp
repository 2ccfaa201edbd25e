#include "cardmul/codec.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace cardmul {

namespace {

bool same_value(double a, double rep, double tolerance) {
    if (tolerance == 0.0)
        return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(rep);
    return std::fabs(a - rep) <= tolerance;
}

std::uint32_t bits_per_index(std::size_t m) {
    std::size_t levels = m < 2 ? 2 : m;
    std::uint32_t bits = 0;
    std::size_t cap = 1;
    while (cap < levels) {
        cap <<= 1;
        ++bits;
    }
    return bits == 0 ? 1 : bits;
}

void build_group_index(std::size_t fibers, std::size_t len,
                       const std::vector<std::uint32_t>& s_per_fiber,
                       auto&& label_at,
                       std::vector<std::vector<std::uint32_t>>& offsets,
                       std::vector<std::vector<std::uint32_t>>& positions) {
    offsets.assign(fibers, {});
    positions.assign(fibers, {});
    for (std::size_t f = 0; f < fibers; ++f) {
        const std::size_t s = s_per_fiber[f];
        std::vector<std::uint32_t> counts(s, 0);
        for (std::size_t p = 0; p < len; ++p) ++counts[label_at(f, p)];
        auto& off = offsets[f];
        off.assign(s + 1, 0);
        for (std::size_t t = 0; t < s; ++t) off[t + 1] = off[t] + counts[t];
        auto& pos = positions[f];
        pos.resize(len);
        std::vector<std::uint32_t> cursor(off.begin(), off.end() - 1);
        for (std::size_t p = 0; p < len; ++p)
            pos[cursor[label_at(f, p)]++] = static_cast<std::uint32_t>(p);
    }
}

}  // namespace

void ColCompressed::build_groups() {
    build_group_index(cols, rows, uniques_per_col,
                      [this](std::size_t j, std::size_t i) { return label(i, j); },
                      group_offsets, group_positions);
}

void RowCompressed::build_groups() {
    build_group_index(rows, cols, uniques_per_row,
                      [this](std::size_t i, std::size_t j) { return label(i, j); },
                      group_offsets, group_positions);
}

ColCompressed compress_columns(const DenseMatrix& w, double tolerance) {
    if (tolerance < 0.0) throw std::invalid_argument("compress_columns: tolerance must be >= 0");
    const std::size_t rows = w.rows(), cols = w.cols();

    ColCompressed c;
    c.rows = rows;
    c.cols = cols;
    c.uniques_per_col.assign(cols, 0);
    c.encoding.assign(rows * cols, 0);

    std::vector<std::vector<double>> reps(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        auto& r = reps[j];
        for (std::size_t i = 0; i < rows; ++i) {
            const double v = w(i, j);
            std::size_t t = 0;
            for (; t < r.size(); ++t)
                if (same_value(v, r[t], tolerance)) break;
            if (t == r.size()) r.push_back(v);
            c.encoding[i * cols + j] = static_cast<std::uint32_t>(t);
        }
        c.uniques_per_col[j] = static_cast<std::uint32_t>(r.size());
        if (r.size() > c.max_uniques) c.max_uniques = r.size();
    }

    c.values.assign(c.max_uniques * cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t t = 0; t < reps[j].size(); ++t)
            c.values[t * cols + j] = reps[j][t];

    c.build_groups();
    return c;
}

RowCompressed compress_rows(const DenseMatrix& v, double tolerance) {
    if (tolerance < 0.0) throw std::invalid_argument("compress_rows: tolerance must be >= 0");
    const std::size_t rows = v.rows(), cols = v.cols();

    RowCompressed r;
    r.rows = rows;
    r.cols = cols;
    r.uniques_per_row.assign(rows, 0);
    r.encoding.assign(rows * cols, 0);

    std::vector<std::vector<double>> reps(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        auto& rp = reps[i];
        for (std::size_t j = 0; j < cols; ++j) {
            const double x = v(i, j);
            std::size_t t = 0;
            for (; t < rp.size(); ++t)
                if (same_value(x, rp[t], tolerance)) break;
            if (t == rp.size()) rp.push_back(x);
            r.encoding[i * cols + j] = static_cast<std::uint32_t>(t);
        }
        r.uniques_per_row[i] = static_cast<std::uint32_t>(rp.size());
        if (rp.size() > r.max_uniques) r.max_uniques = rp.size();
    }

    r.values.assign(rows * r.max_uniques, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t t = 0; t < reps[i].size(); ++t)
            r.values[i * r.max_uniques + t] = reps[i][t];

    r.build_groups();
    return r;
}

DenseMatrix decompress_columns(const ColCompressed& c) {
    DenseMatrix w(c.rows, c.cols);
    for (std::size_t i = 0; i < c.rows; ++i) {
        for (std::size_t j = 0; j < c.cols; ++j) {
            const std::uint32_t t = c.label(i, j);
            if (t >= c.uniques_per_col[j])
                throw std::runtime_error("decompress_columns: encoding index exceeds unique count");
            w(i, j) = c.value_at(t, j);
        }
    }
    return w;
}

DenseMatrix decompress_rows(const RowCompressed& r) {
    DenseMatrix v(r.rows, r.cols);
    for (std::size_t i = 0; i < r.rows; ++i) {
        for (std::size_t j = 0; j < r.cols; ++j) {
            const std::uint32_t t = r.label(i, j);
            if (t >= r.uniques_per_row[i])
                throw std::runtime_error("decompress_rows: encoding index exceeds unique count");
            v(i, j) = r.value_at(i, t);
        }
    }
    return v;
}

bool is_binary_matrix(const DenseMatrix& m) {
    for (double v : m.data())
        if (v != 0.0 && v != 1.0) return false;
    return true;
}

BinaryCompressed compress_binary(const DenseMatrix& b) {
    if (!is_binary_matrix(b))
        throw std::domain_error("compress_binary: matrix entries must be 0 or 1");

    BinaryCompressed c;
    c.rows = b.rows();
    c.cols = b.cols();
    c.first_row.resize(c.cols);
    c.encoding.resize(c.rows * c.cols);
    for (std::size_t j = 0; j < c.cols; ++j) {
        const std::uint8_t first = b(0, j) != 0.0 ? 1 : 0;
        c.first_row[j] = first;
        // Columns starting with 1 are stored complemented so every encoding
        // column begins with 0.
        for (std::size_t i = 0; i < c.rows; ++i) {
            const std::uint8_t v = b(i, j) != 0.0 ? 1 : 0;
            c.encoding[i * c.cols + j] = static_cast<std::uint8_t>(v ^ first);
        }
    }
    return c;
}

DenseMatrix decompress_binary(const BinaryCompressed& b) {
    DenseMatrix m(b.rows, b.cols);
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j)
            m(i, j) = static_cast<double>(b.original(i, j));
    return m;
}

RowCompressed transpose_as_rows(const ColCompressed& c) {
    RowCompressed r;
    r.rows = c.cols;
    r.cols = c.rows;
    r.max_uniques = c.max_uniques;
    r.uniques_per_row = c.uniques_per_col;
    r.values.assign(r.rows * r.max_uniques, 0.0);
    for (std::size_t j = 0; j < c.cols; ++j)
        for (std::size_t t = 0; t < c.uniques_per_col[j]; ++t)
            r.values[j * r.max_uniques + t] = c.value_at(t, j);
    r.encoding.resize(r.rows * r.cols);
    for (std::size_t i = 0; i < c.rows; ++i)
        for (std::size_t j = 0; j < c.cols; ++j)
            r.encoding[j * r.cols + i] = c.label(i, j);
    r.group_offsets = c.group_offsets;
    r.group_positions = c.group_positions;
    return r;
}

std::uint64_t memory_footprint(const DenseMatrix& m, MemoryModel) {
    return 32ULL * m.rows() * m.cols();
}

std::uint64_t memory_footprint(const ColCompressed& c, MemoryModel model) {
    std::uint64_t total_uniques = 0;
    for (std::uint32_t s : c.uniques_per_col) total_uniques += s;
    const std::uint64_t value_bits = 32ULL * total_uniques;
    const std::uint64_t per_index =
        model == MemoryModel::Fixed32 ? 32 : bits_per_index(c.max_uniques);
    return value_bits + per_index * static_cast<std::uint64_t>(c.rows) * c.cols;
}

std::uint64_t memory_footprint(const RowCompressed& r, MemoryModel model) {
    std::uint64_t total_uniques = 0;
    for (std::uint32_t s : r.uniques_per_row) total_uniques += s;
    const std::uint64_t value_bits = 32ULL * total_uniques;
    const std::uint64_t per_index =
        model == MemoryModel::Fixed32 ? 32 : bits_per_index(r.max_uniques);
    return value_bits + per_index * static_cast<std::uint64_t>(r.rows) * r.cols;
}

std::uint64_t memory_footprint(const BinaryCompressed& b, MemoryModel model) {
    const std::uint64_t per_entry = model == MemoryModel::Fixed32 ? 32 : 1;
    const std::uint64_t value_bits = per_entry * 2ULL * b.cols;
    const std::uint64_t encoding_bits = per_entry * static_cast<std::uint64_t>(b.rows) * b.cols;
    return value_bits + encoding_bits;
}

}  // namespace cardmul
