#include "cardmul/csmm.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace cardmul {

namespace {

static_assert(std::endian::native == std::endian::little,
              "CSMM writer assumes a little-endian host");

constexpr char kMagic[4] = {'C', 'S', 'M', 'M'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IoError("CSMM: unexpected end of stream");
    return v;
}

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void get_bytes(std::istream& in, void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in) throw IoError("CSMM: unexpected end of stream");
}

// Bit packing, LSB-first within each byte.
std::vector<std::uint8_t> pack_bits(const std::uint8_t* bits, std::size_t n) {
    std::vector<std::uint8_t> bytes((n + 7) / 8, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return bytes;
}

void unpack_bits(const std::vector<std::uint8_t>& bytes, std::uint8_t* bits, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        bits[i] = (bytes[i / 8] >> (i % 8)) & 1u;
}

void write_header(std::ostream& out, std::uint8_t kind, std::uint64_t rows, std::uint64_t cols) {
    put_bytes(out, kMagic, 4);
    put(out, kVersion);
    put(out, kind);
    put(out, rows);
    put(out, cols);
}

}  // namespace

void write_csmm(std::ostream& out, const CsmmValue& value) {
    if (auto* d = std::get_if<DenseMatrix>(&value)) {
        write_header(out, 0, d->rows(), d->cols());
        put_bytes(out, d->data().data(), d->size() * sizeof(double));
    } else if (auto* c = std::get_if<ColCompressed>(&value)) {
        write_header(out, 1, c->rows, c->cols);
        put(out, static_cast<std::uint32_t>(c->max_uniques));
        put_bytes(out, c->uniques_per_col.data(), c->cols * sizeof(std::uint32_t));
        // values are kept column-major in memory per row of the table;
        // serialize column j's uniques contiguously.
        for (std::size_t j = 0; j < c->cols; ++j)
            for (std::size_t t = 0; t < c->max_uniques; ++t)
                put(out, c->value_at(t, j));
        for (std::uint32_t label : c->encoding) put(out, label + 1);
    } else if (auto* r = std::get_if<RowCompressed>(&value)) {
        write_header(out, 2, r->rows, r->cols);
        put(out, static_cast<std::uint32_t>(r->max_uniques));
        put_bytes(out, r->uniques_per_row.data(), r->rows * sizeof(std::uint32_t));
        put_bytes(out, r->values.data(), r->values.size() * sizeof(double));
        for (std::uint32_t label : r->encoding) put(out, label + 1);
    } else if (auto* b = std::get_if<BinaryCompressed>(&value)) {
        write_header(out, 3, b->rows, b->cols);
        const auto first = pack_bits(b->first_row.data(), b->cols);
        put_bytes(out, first.data(), first.size());
        std::vector<std::uint8_t> col(b->rows);
        for (std::size_t j = 0; j < b->cols; ++j) {
            for (std::size_t i = 0; i < b->rows; ++i) col[i] = b->bit(i, j);
            const auto packed = pack_bits(col.data(), b->rows);
            put_bytes(out, packed.data(), packed.size());
        }
    } else {
        const auto& t = std::get<DenseTensor>(value);
        write_header(out, 4, 0, 0);
        put(out, static_cast<std::uint8_t>(t.order()));
        for (std::size_t d : t.dims()) put(out, static_cast<std::uint64_t>(d));
        put_bytes(out, t.data().data(), t.size() * sizeof(double));
    }
    if (!out) throw IoError("CSMM: write failed");
}

CsmmValue read_csmm(std::istream& in) {
    char magic[4];
    get_bytes(in, magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("CSMM: bad magic");
    if (get<std::uint16_t>(in) != kVersion) throw FormatError("CSMM: unsupported version");
    const auto kind = get<std::uint8_t>(in);
    const auto rows = static_cast<std::size_t>(get<std::uint64_t>(in));
    const auto cols = static_cast<std::size_t>(get<std::uint64_t>(in));

    switch (kind) {
        case 0: {
            std::vector<double> data(rows * cols);
            get_bytes(in, data.data(), data.size() * sizeof(double));
            return DenseMatrix(rows, cols, std::move(data));
        }
        case 1: {
            ColCompressed c;
            c.rows = rows;
            c.cols = cols;
            c.max_uniques = get<std::uint32_t>(in);
            c.uniques_per_col.resize(cols);
            get_bytes(in, c.uniques_per_col.data(), cols * sizeof(std::uint32_t));
            c.values.assign(c.max_uniques * cols, 0.0);
            for (std::size_t j = 0; j < cols; ++j)
                for (std::size_t t = 0; t < c.max_uniques; ++t)
                    c.values[t * cols + j] = get<double>(in);
            c.encoding.resize(rows * cols);
            for (auto& label : c.encoding) {
                const auto one_based = get<std::uint32_t>(in);
                if (one_based == 0) throw FormatError("CSMM: encoding index must be 1-based");
                label = one_based - 1;
            }
            for (std::size_t j = 0; j < cols; ++j) {
                if (c.uniques_per_col[j] > c.max_uniques)
                    throw FormatError("CSMM: unique count exceeds table height");
                for (std::size_t i = 0; i < rows; ++i)
                    if (c.label(i, j) >= c.uniques_per_col[j])
                        throw FormatError("CSMM: encoding index exceeds unique count");
            }
            c.build_groups();
            return c;
        }
        case 2: {
            RowCompressed r;
            r.rows = rows;
            r.cols = cols;
            r.max_uniques = get<std::uint32_t>(in);
            r.uniques_per_row.resize(rows);
            get_bytes(in, r.uniques_per_row.data(), rows * sizeof(std::uint32_t));
            r.values.resize(rows * r.max_uniques);
            get_bytes(in, r.values.data(), r.values.size() * sizeof(double));
            r.encoding.resize(rows * cols);
            for (auto& label : r.encoding) {
                const auto one_based = get<std::uint32_t>(in);
                if (one_based == 0) throw FormatError("CSMM: encoding index must be 1-based");
                label = one_based - 1;
            }
            for (std::size_t i = 0; i < rows; ++i) {
                if (r.uniques_per_row[i] > r.max_uniques)
                    throw FormatError("CSMM: unique count exceeds table width");
                for (std::size_t j = 0; j < cols; ++j)
                    if (r.label(i, j) >= r.uniques_per_row[i])
                        throw FormatError("CSMM: encoding index exceeds unique count");
            }
            r.build_groups();
            return r;
        }
        case 3: {
            BinaryCompressed b;
            b.rows = rows;
            b.cols = cols;
            b.first_row.resize(cols);
            std::vector<std::uint8_t> bytes((cols + 7) / 8);
            get_bytes(in, bytes.data(), bytes.size());
            unpack_bits(bytes, b.first_row.data(), cols);
            b.encoding.resize(rows * cols);
            std::vector<std::uint8_t> col_bytes((rows + 7) / 8);
            std::vector<std::uint8_t> col(rows);
            for (std::size_t j = 0; j < cols; ++j) {
                get_bytes(in, col_bytes.data(), col_bytes.size());
                unpack_bits(col_bytes, col.data(), rows);
                if (rows > 0 && col[0] != 0)
                    throw FormatError("CSMM: binary encoding column must start with 0");
                for (std::size_t i = 0; i < rows; ++i) b.encoding[i * cols + j] = col[i];
            }
            return b;
        }
        case 4: {
            const auto order = get<std::uint8_t>(in);
            if (order == 0) throw FormatError("CSMM: tensor order must be >= 1");
            std::vector<std::size_t> dims(order);
            for (auto& d : dims) d = static_cast<std::size_t>(get<std::uint64_t>(in));
            DenseTensor t(dims);
            get_bytes(in, t.data().data(), t.size() * sizeof(double));
            return t;
        }
        default:
            throw FormatError("CSMM: unknown kind");
    }
}

void write_csmm_file(const std::string& path, const CsmmValue& value) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_csmm(out, value);
}

CsmmValue read_csmm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_csmm(in);
}

}  // namespace cardmul
