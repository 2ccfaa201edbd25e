#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cardmul/dense.hpp"
#include "cardmul/tensor.hpp"

namespace cardmul {

struct BenchCell {
    std::size_t m, p, n, k;
};

struct BenchRow {
    std::string kernel;
    std::size_t m = 0, p = 0, n = 0, k = 0;
    double preprocess_seconds = 0.0;
    double multiply_seconds = 0.0;
    std::uint64_t scalar_mults = 0;
    double rel_error_vs_naive = 0.0;   // max over repeats
    double ratio_vs_naive = 1.0;       // naive multiply time / kernel multiply time
};

/// Runs every kernel on every cell `repeats` times with freshly generated
/// matrices, recomputing the naive product each time for the error column.
/// Binary rows use random bit matrices (the degree column reports 2).
std::vector<BenchRow> run_bench(const std::vector<BenchCell>& cells,
                                const std::vector<std::string>& kernels, std::size_t repeats,
                                std::uint64_t seed, unsigned threads = 1);

std::string bench_csv(const std::vector<BenchRow>& rows);

struct MemReport {
    std::size_t rows = 0, cols = 0;
    std::size_t degree = 0;  // max distinct values per column
    std::uint64_t dense_bits = 0;
    std::uint64_t compressed_fixed32_bits = 0;
    std::uint64_t compressed_minimal_bits = 0;
};

MemReport memory_report(const DenseMatrix& m, double tolerance);
std::string memreport_text(const MemReport& r);

struct TrainOptions {
    std::string csv_path;  // empty: synthetic blobs
    std::size_t synth_classes = 2;
    std::size_t synth_samples = 200;
    std::size_t synth_features = 2;
    std::size_t hidden = 40;
    std::size_t degree_k = 8;
    std::size_t epochs = 60;
    double learning_rate = 0.5;
    std::uint64_t seed = 1;
};

struct TrainStepRow {
    std::string run;  // "projected" | "unprojected"
    std::size_t epoch = 0;
    double multiply_seconds = 0.0;
    double preprocess_seconds = 0.0;
    double cum_multiply_seconds = 0.0;
    std::uint64_t scalar_mults = 0;
    double accuracy = 0.0;
    std::size_t hidden_cardinality = 0;  // column cardinality of the hidden weights
};

struct TrainResult {
    std::vector<TrainStepRow> rows;
};

/// Two-layer relu network trained twice from the same initialization, with
/// and without the per-step cardinality projection of the hidden weights.
/// Forward products run through the rank-one kernel, backward products
/// through the inner kernel.
TrainResult run_train_demo(const TrainOptions& options);

std::string train_csv(const TrainResult& result);

/// Synthetic classification data in the layout the demo trains on:
/// features x samples, integer feature levels in {0,...,16}, one Gaussian
/// blob per class.
struct LabeledData {
    DenseMatrix features;        // d x n
    std::vector<std::size_t> labels;  // length n
    std::size_t classes = 0;
};

LabeledData make_blobs(std::size_t classes, std::size_t samples, std::size_t features,
                       std::uint64_t seed);
LabeledData load_labeled_csv(const std::string& path);

struct TensorRegDemoOptions {
    std::size_t samples = 1000;
    std::vector<std::size_t> dims = {16, 16};
    std::size_t degree_k = 4;
    double lambda = 0.0;
    double nu = 1.0;
    std::size_t iterations = 10;
    double step = 0.0;  // 0: choose 0.5 / ||X||_F^2
    std::uint64_t seed = 1;
};

struct TensorRegDemoResult {
    FitReport sparse;  // contractions through the auto-dispatched kernels
    FitReport naive;
    double loss_gap = 0.0;
};

/// Fits the same regression twice, once with compressed-domain inner
/// products and once with the naive kernel, and compares losses and work.
TensorRegDemoResult run_tensorreg_demo(const TensorRegDemoOptions& options);

std::string tensorreg_text(const TensorRegDemoResult& r);

}  // namespace cardmul
