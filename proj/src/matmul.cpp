#include "cardmul/matmul.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace cardmul {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_inner_dims(std::size_t a_cols, std::size_t b_rows) {
    if (a_cols != b_rows)
        throw std::invalid_argument("multiply: inner dimensions do not agree");
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Square n x n helpers on flat row-major buffers for the Strassen recursion.
void add_block(const double* a, const double* b, double* c, std::size_t n) {
    for (std::size_t i = 0; i < n * n; ++i) c[i] = a[i] + b[i];
}

void sub_block(const double* a, const double* b, double* c, std::size_t n) {
    for (std::size_t i = 0; i < n * n; ++i) c[i] = a[i] - b[i];
}

void naive_block(const double* a, const double* b, double* c, std::size_t n,
                 std::uint64_t& mults) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
            c[i * n + j] = acc;
        }
    }
    mults += static_cast<std::uint64_t>(n) * n * n;
}

void strassen_rec(const std::vector<double>& a, const std::vector<double>& b,
                  std::vector<double>& c, std::size_t n, std::size_t cutoff,
                  std::uint64_t& mults) {
    if (n <= cutoff || n == 1) {
        naive_block(a.data(), b.data(), c.data(), n, mults);
        return;
    }
    const std::size_t h = n / 2;
    auto quad = [h, n](const std::vector<double>& m, int qi, int qj) {
        std::vector<double> q(h * h);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j)
                q[i * h + j] = m[(i + qi * h) * n + (j + qj * h)];
        return q;
    };

    const auto a11 = quad(a, 0, 0), a12 = quad(a, 0, 1), a21 = quad(a, 1, 0), a22 = quad(a, 1, 1);
    const auto b11 = quad(b, 0, 0), b12 = quad(b, 0, 1), b21 = quad(b, 1, 0), b22 = quad(b, 1, 1);

    std::vector<double> t1(h * h), t2(h * h);
    std::vector<double> m1(h * h), m2(h * h), m3(h * h), m4(h * h), m5(h * h), m6(h * h),
        m7(h * h);

    add_block(a11.data(), a22.data(), t1.data(), h);
    add_block(b11.data(), b22.data(), t2.data(), h);
    strassen_rec(t1, t2, m1, h, cutoff, mults);

    add_block(a21.data(), a22.data(), t1.data(), h);
    strassen_rec(t1, b11, m2, h, cutoff, mults);

    sub_block(b12.data(), b22.data(), t2.data(), h);
    strassen_rec(a11, t2, m3, h, cutoff, mults);

    sub_block(b21.data(), b11.data(), t2.data(), h);
    strassen_rec(a22, t2, m4, h, cutoff, mults);

    add_block(a11.data(), a12.data(), t1.data(), h);
    strassen_rec(t1, b22, m5, h, cutoff, mults);

    sub_block(a21.data(), a11.data(), t1.data(), h);
    add_block(b11.data(), b12.data(), t2.data(), h);
    strassen_rec(t1, t2, m6, h, cutoff, mults);

    sub_block(a12.data(), a22.data(), t1.data(), h);
    add_block(b21.data(), b22.data(), t2.data(), h);
    strassen_rec(t1, t2, m7, h, cutoff, mults);

    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < h; ++j) {
            const std::size_t q = i * h + j;
            c[i * n + j] = m1[q] + m4[q] - m5[q] + m7[q];
            c[i * n + j + h] = m3[q] + m5[q];
            c[(i + h) * n + j] = m2[q] + m4[q];
            c[(i + h) * n + j + h] = m1[q] - m2[q] + m3[q] + m6[q];
        }
    }
}

// One rank-one term of the outer kernel: form the value-table product D_j
// (the only multiplications), expand its rows to output width through V's
// labels (a gather), then add the matching expanded row into every output
// row selected by W's labels.
void outer_accumulate_term(const ColCompressed& w, const RowCompressed& v, std::size_t j,
                           std::size_t row_begin, std::size_t row_end, double* out,
                           std::vector<double>& dtab, std::vector<double>& expanded) {
    const std::size_t n_cols = v.cols;
    const std::size_t s = w.uniques_per_col[j];
    const std::size_t t = v.uniques_per_row[j];
    for (std::size_t u = 0; u < s; ++u) {
        const double wv = w.value_at(u, j);
        for (std::size_t q = 0; q < t; ++q) dtab[u * t + q] = wv * v.value_at(j, q);
    }
    const std::uint32_t* vlab = v.encoding.data() + j * n_cols;
    for (std::size_t u = 0; u < s; ++u) {
        const double* drow = dtab.data() + u * t;
        double* row = expanded.data() + u * n_cols;
        for (std::size_t k = 0; k < n_cols; ++k) row[k] = drow[vlab[k]];
    }
    for (std::size_t i = row_begin; i < row_end; ++i) {
        const double* src = expanded.data() + w.label(i, j) * n_cols;
        double* dst = out + i * n_cols;
        for (std::size_t k = 0; k < n_cols; ++k) dst[k] += src[k];
    }
}

std::uint64_t outer_mult_count(const ColCompressed& w, const RowCompressed& v) {
    std::uint64_t mults = 0;
    for (std::size_t j = 0; j < w.cols; ++j)
        mults += static_cast<std::uint64_t>(w.uniques_per_col[j]) * v.uniques_per_row[j];
    return mults;
}

}  // namespace

std::string kernel_name(Kernel k) {
    switch (k) {
        case Kernel::Naive: return "naive";
        case Kernel::Strassen: return "strassen";
        case Kernel::OuterCompressed: return "outer";
        case Kernel::InnerCompressed: return "inner";
        case Kernel::Binary: return "binary";
    }
    return "?";
}

MultReport multiply_naive(const DenseMatrix& a, const DenseMatrix& b) {
    check_inner_dims(a.cols(), b.rows());
    const std::size_t m = a.rows(), p = a.cols(), n = b.cols();

    const auto start = Clock::now();
    DenseMatrix c(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < p; ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
    MultReport r{std::move(c), static_cast<std::uint64_t>(m) * p * n, seconds_since(start), 0.0,
                 Kernel::Naive};
    return r;
}

MultReport multiply_strassen(const DenseMatrix& a, const DenseMatrix& b, std::size_t cutoff) {
    check_inner_dims(a.cols(), b.rows());
    if (cutoff == 0) cutoff = 1;
    const std::size_t m = a.rows(), p = a.cols(), n = b.cols();
    const std::size_t size = next_pow2(std::max({m, p, n}));

    const auto start = Clock::now();
    std::vector<double> pa(size * size, 0.0), pb(size * size, 0.0), pc(size * size, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < p; ++k) pa[i * size + k] = a(i, k);
    for (std::size_t k = 0; k < p; ++k)
        for (std::size_t j = 0; j < n; ++j) pb[k * size + j] = b(k, j);

    std::uint64_t mults = 0;
    strassen_rec(pa, pb, pc, size, cutoff, mults);

    DenseMatrix c(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = pc[i * size + j];

    return {std::move(c), mults, seconds_since(start), 0.0, Kernel::Strassen};
}

MultReport multiply_outer_compressed(const ColCompressed& w, const RowCompressed& v,
                                     const std::vector<std::size_t>& j_order,
                                     unsigned threads) {
    if (w.cols != v.rows)
        throw std::invalid_argument("multiply_outer_compressed: inner dimensions do not agree");
    if (!j_order.empty() && j_order.size() != w.cols)
        throw std::invalid_argument("multiply_outer_compressed: j_order must permute 0..P-1");
    const std::size_t p = w.cols, m = w.rows, n = v.cols;

    const auto start = Clock::now();
    DenseMatrix c(m, n);

    if (threads <= 1 || m < 2 * threads) {
        std::vector<double> dtab(w.max_uniques * v.max_uniques);
        std::vector<double> expanded(w.max_uniques * n);
        for (std::size_t idx = 0; idx < p; ++idx) {
            const std::size_t j = j_order.empty() ? idx : j_order[idx];
            outer_accumulate_term(w, v, j, 0, m, c.data().data(), dtab, expanded);
        }
    } else {
        // Parallel contract: partition output rows per worker; every worker
        // walks j in the same order, so each output cell still accumulates
        // its contributions in that order.
        std::vector<std::thread> pool;
        const std::size_t chunk = (m + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(m, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                std::vector<double> dtab(w.max_uniques * v.max_uniques);
                std::vector<double> expanded(w.max_uniques * n);
                for (std::size_t idx = 0; idx < p; ++idx) {
                    const std::size_t j = j_order.empty() ? idx : j_order[idx];
                    outer_accumulate_term(w, v, j, lo, hi, c.data().data(), dtab, expanded);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    return {std::move(c), outer_mult_count(w, v), seconds_since(start), 0.0,
            Kernel::OuterCompressed};
}

MultReport multiply_inner_compressed(const RowCompressed& w_rows, const DenseMatrix& b,
                                     unsigned threads) {
    if (w_rows.cols != b.rows())
        throw std::invalid_argument("multiply_inner_compressed: inner dimensions do not agree");
    const std::size_t m = w_rows.rows, n = b.cols();

    const auto start = Clock::now();
    DenseMatrix c(m, n);

    auto run_rows = [&](std::size_t lo, std::size_t hi) {
        std::vector<double> group_sum(w_rows.max_uniques * n);
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t s = w_rows.uniques_per_row[i];
            std::fill(group_sum.begin(), group_sum.begin() + s * n, 0.0);
            // Group-sum b's rows by the label of w's row i, in ascending
            // position order, then one multiplication per unique value.
            const auto& off = w_rows.group_offsets[i];
            const auto& pos = w_rows.group_positions[i];
            for (std::size_t t = 0; t < s; ++t) {
                double* sum = group_sum.data() + t * n;
                for (std::uint32_t q = off[t]; q < off[t + 1]; ++q) {
                    const double* brow = b.row(pos[q]).data();
                    for (std::size_t k = 0; k < n; ++k) sum[k] += brow[k];
                }
            }
            double* crow = c.row(i).data();
            for (std::size_t t = 0; t < s; ++t) {
                const double wv = w_rows.value_at(i, t);
                const double* sum = group_sum.data() + t * n;
                for (std::size_t k = 0; k < n; ++k) crow[k] += wv * sum[k];
            }
        }
    };

    if (threads <= 1 || m < 2 * threads) {
        run_rows(0, m);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (m + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(m, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_rows, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    std::uint64_t total_uniques = 0;
    for (std::uint32_t s : w_rows.uniques_per_row) total_uniques += s;
    return {std::move(c), static_cast<std::uint64_t>(n) * total_uniques, seconds_since(start),
            0.0, Kernel::InnerCompressed};
}

namespace {

// Shared binary path; row_bit(j, k) yields entry (j, k) of the right operand.
template <typename RowBit>
MultReport multiply_binary_impl(const BinaryCompressed& a, std::size_t b_rows, std::size_t b_cols,
                                RowBit&& row_bit) {
    if (a.cols != b_rows)
        throw std::invalid_argument("multiply_binary: inner dimensions do not agree");
    const std::size_t m = a.rows, p = a.cols, n = b_cols;

    const auto start = Clock::now();
    std::vector<std::int64_t> acc(m * n, 0);
    std::vector<std::uint32_t> one_cols;
    one_cols.reserve(n);

    std::uint64_t mults = 0;
    for (std::size_t j = 0; j < p; ++j) {
        // D_j: 2 x 2 product table of a's two column values against the bit
        // values {0, 1} of b's row. Only the (value 1, bit 1) cell is nonzero.
        std::int64_t d[2][2];
        for (std::size_t u = 0; u < 2; ++u)
            for (std::int64_t q = 0; q < 2; ++q)
                d[u][q] = static_cast<std::int64_t>(a.value_at(u, j)) * q;
        mults += 4;

        one_cols.clear();
        for (std::size_t k = 0; k < n; ++k)
            if (row_bit(j, k)) one_cols.push_back(static_cast<std::uint32_t>(k));
        if (one_cols.empty()) continue;

        const std::uint8_t u_one = a.first_row[j] ? 0 : 1;  // label whose value is 1
        const std::int64_t add = d[u_one][1];
        for (std::size_t i = 0; i < m; ++i) {
            if (a.bit(i, j) != u_one) continue;
            std::int64_t* arow = acc.data() + i * n;
            for (std::uint32_t k : one_cols) arow[k] += add;
        }
    }

    DenseMatrix c(m, n);
    for (std::size_t i = 0; i < m * n; ++i) c.data()[i] = static_cast<double>(acc[i]);
    return {std::move(c), mults, seconds_since(start), 0.0, Kernel::Binary};
}

}  // namespace

MultReport multiply_binary(const BinaryCompressed& a, const BinaryCompressed& b) {
    return multiply_binary_impl(a, b.rows, b.cols, [&b](std::size_t j, std::size_t k) {
        return b.original(j, k) != 0;
    });
}

MultReport multiply_binary(const BinaryCompressed& a, const DenseMatrix& b) {
    if (!is_binary_matrix(b))
        throw std::domain_error("multiply_binary: dense operand must be a 0/1 matrix");
    return multiply_binary_impl(a, b.rows(), b.cols(), [&b](std::size_t j, std::size_t k) {
        return b(j, k) != 0.0;
    });
}

MultReport multiply_auto(const DenseMatrix& a, const DenseMatrix& b, double tolerance,
                         unsigned threads) {
    check_inner_dims(a.cols(), b.rows());
    const std::size_t m = a.rows(), p = a.cols(), n = b.cols();

    if (is_binary_matrix(a) && is_binary_matrix(b)) {
        const auto pre_start = Clock::now();
        const BinaryCompressed ac = compress_binary(a);
        const BinaryCompressed bc = compress_binary(b);
        const double pre = seconds_since(pre_start);
        MultReport r = multiply_binary(ac, bc);
        r.preprocess_seconds = pre;
        return r;
    }

    if (p < std::min(m, n)) {
        const auto pre_start = Clock::now();
        const ColCompressed wc = compress_columns(a, tolerance);
        const RowCompressed vc = compress_rows(b, tolerance);
        const double pre = seconds_since(pre_start);
        MultReport r = multiply_outer_compressed(wc, vc, {}, threads);
        r.preprocess_seconds = pre;
        return r;
    }

    const auto pre_start = Clock::now();
    const RowCompressed wr = compress_rows(a, tolerance);
    const double pre = seconds_since(pre_start);
    MultReport r = multiply_inner_compressed(wr, b, threads);
    r.preprocess_seconds = pre;
    return r;
}

double relative_frobenius_error(const DenseMatrix& x, const DenseMatrix& ref) {
    if (x.rows() != ref.rows() || x.cols() != ref.cols())
        throw std::invalid_argument("relative_frobenius_error: shape mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x.data()[i] - ref.data()[i];
        num += d * d;
        den += ref.data()[i] * ref.data()[i];
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::sqrt(num);
    return std::sqrt(num / den);
}

}  // namespace cardmul
