#include "cardmul/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cardmul/cardinality.hpp"
#include "cardmul/codec.hpp"
#include "cardmul/csmm.hpp"
#include "cardmul/csv.hpp"
#include "cardmul/generate.hpp"
#include "cardmul/matmul.hpp"
#include "cardmul/sparsity.hpp"

namespace cardmul {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void append_field(std::string& out, double v, char sep) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof(buf), "%.9g", v);
    out.append(buf, static_cast<std::size_t>(n));
    out.push_back(sep);
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<BenchCell>& cells,
                                const std::vector<std::string>& kernels, std::size_t repeats,
                                std::uint64_t seed, unsigned threads) {
    if (repeats == 0) throw std::invalid_argument("bench: repeats must be >= 1");
    std::vector<BenchRow> rows;

    for (const auto& cell : cells) {
        for (const auto& kernel : kernels) {
            BenchRow row;
            row.kernel = kernel;
            row.m = cell.m;
            row.p = cell.p;
            row.n = cell.n;
            row.k = kernel == "binary" ? 2 : cell.k;

            double pre_total = 0.0, mul_total = 0.0, naive_total = 0.0;
            std::uint64_t mult_total = 0;

            for (std::size_t rep = 0; rep < repeats; ++rep) {
                const std::uint64_t rep_seed = seed + 7919 * rep;
                MultReport report{DenseMatrix(1, 1), 0, 0.0, 0.0, Kernel::Naive};
                MultReport naive_report{DenseMatrix(1, 1), 0, 0.0, 0.0, Kernel::Naive};

                if (kernel == "binary") {
                    Rng rng(rep_seed);
                    const DenseMatrix a = gen_binary_matrix(cell.m, cell.p, rng);
                    const DenseMatrix b = gen_binary_matrix(cell.p, cell.n, rng);
                    const auto pre_start = Clock::now();
                    const BinaryCompressed ac = compress_binary(a);
                    const BinaryCompressed bc = compress_binary(b);
                    pre_total += seconds_since(pre_start);
                    report = multiply_binary(ac, bc);
                    naive_report = multiply_naive(a, b);
                } else {
                    const GenPair pair = gen_pair(cell.m, cell.p, cell.n, cell.k, rep_seed);
                    if (kernel == "naive") {
                        report = multiply_naive(pair.a, pair.b);
                        naive_report = multiply_naive(pair.a, pair.b);
                    } else if (kernel == "strassen") {
                        report = multiply_strassen(pair.a, pair.b);
                        naive_report = multiply_naive(pair.a, pair.b);
                    } else if (kernel == "outer") {
                        const auto pre_start = Clock::now();
                        const ColCompressed wc = compress_columns(pair.a);
                        const RowCompressed vc = compress_rows(pair.b);
                        pre_total += seconds_since(pre_start);
                        report = multiply_outer_compressed(wc, vc, {}, threads);
                        naive_report = multiply_naive(pair.a, pair.b);
                    } else if (kernel == "inner") {
                        const auto pre_start = Clock::now();
                        const RowCompressed wr = compress_rows(pair.a);
                        pre_total += seconds_since(pre_start);
                        report = multiply_inner_compressed(wr, pair.b, threads);
                        naive_report = multiply_naive(pair.a, pair.b);
                    } else if (kernel == "auto") {
                        report = multiply_auto(pair.a, pair.b, 0.0, threads);
                        pre_total += report.preprocess_seconds;
                        naive_report = multiply_naive(pair.a, pair.b);
                    } else {
                        throw std::invalid_argument("bench: unknown kernel " + kernel);
                    }
                }

                mul_total += report.multiply_seconds;
                naive_total += naive_report.multiply_seconds;
                mult_total += report.scalar_mults;
                row.rel_error_vs_naive = std::max(
                    row.rel_error_vs_naive,
                    relative_frobenius_error(report.product, naive_report.product));
            }

            const double r = static_cast<double>(repeats);
            row.preprocess_seconds = pre_total / r;
            row.multiply_seconds = mul_total / r;
            row.scalar_mults = mult_total / repeats;
            row.ratio_vs_naive =
                row.multiply_seconds > 0.0 ? (naive_total / r) / row.multiply_seconds : 1.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out =
        "kernel,M,P,N,k,preprocess_seconds,multiply_seconds,scalar_mults,"
        "rel_error_vs_naive,ratio_vs_naive\n";
    for (const auto& r : rows) {
        out += r.kernel;
        out.push_back(',');
        out += std::to_string(r.m) + "," + std::to_string(r.p) + "," + std::to_string(r.n) +
               "," + std::to_string(r.k) + ",";
        append_field(out, r.preprocess_seconds, ',');
        append_field(out, r.multiply_seconds, ',');
        out += std::to_string(r.scalar_mults);
        out.push_back(',');
        append_field(out, r.rel_error_vs_naive, ',');
        append_field(out, r.ratio_vs_naive, '\n');
    }
    return out;
}

MemReport memory_report(const DenseMatrix& m, double tolerance) {
    MemReport r;
    r.rows = m.rows();
    r.cols = m.cols();
    const ColCompressed c = compress_columns(m, tolerance);
    r.degree = c.max_uniques;
    r.dense_bits = memory_footprint(m, MemoryModel::Fixed32);
    r.compressed_fixed32_bits = memory_footprint(c, MemoryModel::Fixed32);
    r.compressed_minimal_bits = memory_footprint(c, MemoryModel::MinimalBits);
    return r;
}

std::string memreport_text(const MemReport& r) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "matrix: %zu x %zu, column degree %zu\n", r.rows, r.cols,
                  r.degree);
    out += buf;
    std::snprintf(buf, sizeof(buf), "dense bits:                %llu\n",
                  static_cast<unsigned long long>(r.dense_bits));
    out += buf;
    std::snprintf(buf, sizeof(buf), "compressed bits (fixed32): %llu\n",
                  static_cast<unsigned long long>(r.compressed_fixed32_bits));
    out += buf;
    std::snprintf(buf, sizeof(buf), "compressed bits (minimal): %llu\n",
                  static_cast<unsigned long long>(r.compressed_minimal_bits));
    out += buf;
    return out;
}

LabeledData make_blobs(std::size_t classes, std::size_t samples, std::size_t features,
                       std::uint64_t seed) {
    if (classes < 2 || samples < classes || features < 1)
        throw std::invalid_argument("make_blobs: need >= 2 classes and enough samples");
    Rng rng(seed);

    // One center per class on the {0..16} grid; samples are the center plus
    // rounded Gaussian noise, clamped back to the grid, so every feature
    // holds at most 17 distinct levels.
    std::vector<std::vector<double>> centers(classes, std::vector<double>(features));
    for (auto& c : centers)
        for (auto& v : c) v = static_cast<double>(rng.next_u64() % 17);

    LabeledData data{DenseMatrix(features, samples), std::vector<std::size_t>(samples), classes};
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t label = s % classes;
        data.labels[s] = label;
        for (std::size_t f = 0; f < features; ++f) {
            const double noisy = centers[label][f] + 1.5 * rng.next_normal();
            data.features(f, s) = std::clamp(std::round(noisy), 0.0, 16.0);
        }
    }
    return data;
}

LabeledData load_labeled_csv(const std::string& path) {
    const DenseMatrix table = read_csv_matrix(path);
    if (table.cols() < 2)
        throw FormatError("labeled CSV needs at least one feature column and a label column");
    const std::size_t n = table.rows();
    const std::size_t d = table.cols() - 1;

    LabeledData data{DenseMatrix(d, n), std::vector<std::size_t>(n), 0};
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t f = 0; f < d; ++f) data.features(f, s) = table(s, f);
        const double raw = table(s, d);
        if (raw < 0.0 || raw != std::floor(raw))
            throw FormatError("labeled CSV: labels must be nonnegative integers");
        data.labels[s] = static_cast<std::size_t>(raw);
        data.classes = std::max(data.classes, data.labels[s] + 1);
    }
    if (data.classes < 2) throw FormatError("labeled CSV: need at least two classes");
    return data;
}

namespace {

struct EpochWork {
    double multiply_seconds = 0.0;
    double preprocess_seconds = 0.0;
    std::uint64_t scalar_mults = 0;

    void add(const MultReport& r) {
        multiply_seconds += r.multiply_seconds;
        scalar_mults += r.scalar_mults;
    }
    void add_pre(double s) { preprocess_seconds += s; }
};

DenseMatrix relu(const DenseMatrix& z) {
    DenseMatrix out = z;
    for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
    return out;
}

// Softmax cross-entropy over columns; returns dZ = (softmax - onehot)/n and
// fills accuracy.
DenseMatrix softmax_grad(const DenseMatrix& logits, const std::vector<std::size_t>& labels,
                         double& accuracy) {
    const std::size_t classes = logits.rows(), n = logits.cols();
    DenseMatrix grad(classes, n);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < n; ++s) {
        double best = logits(0, s);
        std::size_t arg = 0;
        for (std::size_t c = 1; c < classes; ++c)
            if (logits(c, s) > best) best = logits(c, s), arg = c;
        if (arg == labels[s]) ++hits;

        double denom = 0.0;
        for (std::size_t c = 0; c < classes; ++c) denom += std::exp(logits(c, s) - best);
        for (std::size_t c = 0; c < classes; ++c) {
            const double p = std::exp(logits(c, s) - best) / denom;
            grad(c, s) = (p - (c == labels[s] ? 1.0 : 0.0)) / static_cast<double>(n);
        }
    }
    accuracy = static_cast<double>(hits) / static_cast<double>(n);
    return grad;
}

DenseMatrix small_random(std::size_t rows, std::size_t cols, double scale, Rng& rng) {
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = scale * (2.0 * rng.next_unit() - 1.0);
    return m;
}

// One full training run (samples in columns). Forward uses the rank-one
// kernel, backward the inner kernel, as in the training recipe the demo
// reproduces.
void train_run(const LabeledData& data, const TrainOptions& options, bool project,
               const DenseMatrix& w1_init, const DenseMatrix& w2_init,
               std::vector<TrainStepRow>& rows) {
    // The input compression is reused across every epoch.
    const auto pre_start = Clock::now();
    const RowCompressed x_rows = compress_rows(data.features);
    const DenseMatrix x_t = data.features.transposed();
    const double input_pre = seconds_since(pre_start);

    DenseMatrix w1 = w1_init;
    DenseMatrix w2 = w2_init;
    double cum_multiply = 0.0;

    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        EpochWork work;
        if (epoch == 0) work.add_pre(input_pre);

        // Forward: Z1 = W1 X, H = relu(Z1), Z2 = W2 H.
        auto t0 = Clock::now();
        const ColCompressed w1c = compress_columns(w1);
        work.add_pre(seconds_since(t0));
        MultReport z1 = multiply_outer_compressed(w1c, x_rows);
        work.add(z1);
        const DenseMatrix h = relu(z1.product);

        t0 = Clock::now();
        const ColCompressed w2c = compress_columns(w2);
        const RowCompressed h_rows = compress_rows(h);
        work.add_pre(seconds_since(t0));
        MultReport z2 = multiply_outer_compressed(w2c, h_rows);
        work.add(z2);

        double accuracy = 0.0;
        const DenseMatrix dz2 = softmax_grad(z2.product, data.labels, accuracy);

        // Backward: dW2 = dZ2 H^T, dH = W2^T dZ2, dW1 = dZ1 X^T.
        t0 = Clock::now();
        const RowCompressed dz2_rows = compress_rows(dz2);
        work.add_pre(seconds_since(t0));
        MultReport dw2 = multiply_inner_compressed(dz2_rows, h.transposed());
        work.add(dw2);

        t0 = Clock::now();
        const RowCompressed w2t_rows = compress_rows(w2.transposed());
        work.add_pre(seconds_since(t0));
        MultReport dh = multiply_inner_compressed(w2t_rows, dz2);
        work.add(dh);

        DenseMatrix dz1 = dh.product;
        for (std::size_t q = 0; q < dz1.size(); ++q)
            if (z1.product.data()[q] <= 0.0) dz1.data()[q] = 0.0;

        t0 = Clock::now();
        const RowCompressed dz1_rows = compress_rows(dz1);
        work.add_pre(seconds_since(t0));
        MultReport dw1 = multiply_inner_compressed(dz1_rows, x_t);
        work.add(dw1);

        for (std::size_t q = 0; q < w2.size(); ++q)
            w2.data()[q] -= options.learning_rate * dw2.product.data()[q];
        for (std::size_t q = 0; q < w1.size(); ++q)
            w1.data()[q] -= options.learning_rate * dw1.product.data()[q];
        if (project) w1 = project_cardinality(w1, options.degree_k);

        cum_multiply += work.multiply_seconds;
        rows.push_back({project ? "projected" : "unprojected", epoch, work.multiply_seconds,
                        work.preprocess_seconds, cum_multiply, work.scalar_mults, accuracy,
                        cardinality_degree(w1, FiberMode::ColumnWise, 0.0)});
    }
}

}  // namespace

TrainResult run_train_demo(const TrainOptions& options) {
    const LabeledData data = options.csv_path.empty()
                                 ? make_blobs(options.synth_classes, options.synth_samples,
                                              options.synth_features, options.seed)
                                 : load_labeled_csv(options.csv_path);

    // Scaled features keep the softmax stable; scaling is per-matrix affine
    // so the per-row distinct counts are unchanged.
    LabeledData scaled = data;
    for (double& v : scaled.features.data()) v /= 16.0;

    Rng rng(options.seed ^ 0x5eedULL);
    const std::size_t d = scaled.features.rows();
    const DenseMatrix w1_init =
        small_random(options.hidden, d, 1.0 / std::sqrt(static_cast<double>(d)), rng);
    const DenseMatrix w2_init = small_random(
        scaled.classes, options.hidden, 1.0 / std::sqrt(static_cast<double>(options.hidden)), rng);

    TrainResult result;
    train_run(scaled, options, true, w1_init, w2_init, result.rows);
    train_run(scaled, options, false, w1_init, w2_init, result.rows);
    return result;
}

std::string train_csv(const TrainResult& result) {
    std::string out =
        "run,epoch,multiply_seconds,preprocess_seconds,cum_multiply_seconds,scalar_mults,"
        "accuracy,hidden_cardinality\n";
    for (const auto& r : result.rows) {
        out += r.run + "," + std::to_string(r.epoch) + ",";
        append_field(out, r.multiply_seconds, ',');
        append_field(out, r.preprocess_seconds, ',');
        append_field(out, r.cum_multiply_seconds, ',');
        out += std::to_string(r.scalar_mults) + ",";
        append_field(out, r.accuracy, ',');
        out += std::to_string(r.hidden_cardinality) + "\n";
    }
    return out;
}

TensorRegDemoResult run_tensorreg_demo(const TensorRegDemoOptions& options) {
    Rng rng(options.seed);
    std::vector<std::size_t> x_dims;
    x_dims.push_back(options.samples);
    x_dims.insert(x_dims.end(), options.dims.begin(), options.dims.end());
    const DenseTensor x = gen_cardinality_tensor(x_dims, options.degree_k, rng);

    DenseTensor b_true(options.dims);
    for (double& v : b_true.data()) v = rng.next_normal();
    const std::size_t l = options.dims.size();
    const DenseTensor y = contracted_product(x, b_true, l);

    double step = options.step;
    if (step <= 0.0) {
        double fro2 = 0.0;
        for (double v : x.data()) fro2 += v * v;
        step = 0.5 / fro2;
    }

    FitOptions sparse_opts{step, options.iterations, MatmulBackend::Auto};
    FitOptions naive_opts{step, options.iterations, MatmulBackend::Naive};

    TensorRegDemoResult result{
        tensor_regression_fit(x, y, l, options.lambda, options.nu, 1, sparse_opts),
        tensor_regression_fit(x, y, l, options.lambda, options.nu, 1, naive_opts), 0.0};
    result.loss_gap = std::fabs(result.sparse.data_loss - result.naive.data_loss);
    return result;
}

std::string tensorreg_text(const TensorRegDemoResult& r) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf),
                  "sparse : loss %.12g, scalar_mults %llu, multiply %.6fs, preprocess %.6fs\n",
                  r.sparse.data_loss,
                  static_cast<unsigned long long>(r.sparse.totals.scalar_mults),
                  r.sparse.totals.multiply_seconds, r.sparse.totals.preprocess_seconds);
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "naive  : loss %.12g, scalar_mults %llu, multiply %.6fs, preprocess %.6fs\n",
                  r.naive.data_loss, static_cast<unsigned long long>(r.naive.totals.scalar_mults),
                  r.naive.totals.multiply_seconds, r.naive.totals.preprocess_seconds);
    out += buf;
    std::snprintf(buf, sizeof(buf), "loss gap: %.3e\n", r.loss_gap);
    out += buf;
    return out;
}

}  // namespace cardmul
