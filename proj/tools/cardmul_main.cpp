#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cardmul/bench.hpp"
#include "cardmul/cardinality.hpp"
#include "cardmul/codec.hpp"
#include "cardmul/csmm.hpp"
#include "cardmul/csv.hpp"
#include "cardmul/generate.hpp"
#include "cardmul/matmul.hpp"
#include "cardmul/tensor.hpp"

namespace {

using namespace cardmul;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::uint64_t effective_seed(std::uint64_t cli_seed) {
    if (const char* env = std::getenv("CARDMUL_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw std::invalid_argument("CARDMUL_SEED must be an unsigned integer");
    }
    return cli_seed;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

DenseMatrix load_matrix(const std::string& path) {
    if (has_suffix(path, ".csmm")) {
        CsmmValue v = read_csmm_file(path);
        if (auto* d = std::get_if<DenseMatrix>(&v)) return std::move(*d);
        if (auto* c = std::get_if<ColCompressed>(&v)) return decompress_columns(*c);
        if (auto* r = std::get_if<RowCompressed>(&v)) return decompress_rows(*r);
        if (auto* b = std::get_if<BinaryCompressed>(&v)) return decompress_binary(*b);
        throw FormatError(path + ": container does not hold a matrix");
    }
    return read_csv_matrix(path);
}

void store_matrix(const std::string& path, const DenseMatrix& m) {
    if (has_suffix(path, ".csmm"))
        write_csmm_file(path, m);
    else
        write_csv_matrix(path, m);
}

std::vector<std::size_t> parse_dims(const std::string& text) {
    std::vector<std::size_t> dims;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('x', start);
        if (end == std::string::npos) end = text.size();
        dims.push_back(std::stoull(text.substr(start, end - start)));
        if (end == text.size()) break;
        start = end + 1;
    }
    return dims;
}

std::vector<BenchCell> parse_cells(const std::vector<std::string>& sizes,
                                   const std::vector<std::size_t>& degrees) {
    std::vector<BenchCell> cells;
    for (const auto& s : sizes) {
        const auto dims = parse_dims(s);
        if (dims.size() != 3) throw std::invalid_argument("bench size must look like MxPxN");
        for (std::size_t k : degrees) cells.push_back({dims[0], dims[1], dims[2], k});
    }
    return cells;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

int run(int argc, char** argv) {
    CLI::App app{"cardinality-sparse matrix compression and multiplication"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a cardinality-sparse matrix pair");
    std::size_t gm = 64, gp = 16, gn = 64, gk = 10;
    std::uint64_t gseed = 1;
    std::string out_a = "a.csv", out_b = "b.csv";
    bool gbinary = false;
    gen->add_option("--rows,-m", gm, "rows of A");
    gen->add_option("--inner,-p", gp, "cols of A / rows of B");
    gen->add_option("--cols,-n", gn, "cols of B");
    gen->add_option("--degree,-k", gk, "sparsity degree");
    gen->add_option("--seed", gseed, "RNG seed (CARDMUL_SEED overrides)");
    gen->add_option("--out-a", out_a, "output path for A (.csv or .csmm)");
    gen->add_option("--out-b", out_b, "output path for B (.csv or .csmm)");
    gen->add_flag("--binary", gbinary, "generate 0/1 matrices instead");

    // compress
    auto* comp = app.add_subcommand("compress", "compress a matrix into a CSMM container");
    std::string comp_in, comp_out = "out.csmm", comp_mode = "cols";
    double comp_tol = 0.0;
    comp->add_option("--in", comp_in, "input matrix (.csv or .csmm)")->required();
    comp->add_option("--out", comp_out, "output container (.csmm)");
    comp->add_option("--mode", comp_mode, "cols | rows | binary")
        ->check(CLI::IsMember({"cols", "rows", "binary"}));
    comp->add_option("--tolerance", comp_tol, "merge tolerance for distinct values");

    // decompress
    auto* dec = app.add_subcommand("decompress", "expand a CSMM container to a dense matrix");
    std::string dec_in, dec_out = "out.csv";
    dec->add_option("--in", dec_in, "input container (.csmm)")->required();
    dec->add_option("--out", dec_out, "output matrix (.csv or .csmm)");

    // multiply
    auto* mul = app.add_subcommand("multiply", "multiply two matrices");
    std::string mul_a, mul_b, mul_out, mul_kernel = "auto";
    double mul_tol = 0.0;
    std::size_t mul_cutoff = 64;
    unsigned mul_threads = 1;
    mul->add_option("--a", mul_a, "left operand")->required();
    mul->add_option("--b", mul_b, "right operand")->required();
    mul->add_option("--out", mul_out, "product output path");
    mul->add_option("--kernel", mul_kernel, "naive | strassen | outer | inner | binary | auto")
        ->check(CLI::IsMember({"naive", "strassen", "outer", "inner", "binary", "auto"}));
    mul->add_option("--tolerance", mul_tol, "compression tolerance");
    mul->add_option("--cutoff", mul_cutoff, "Strassen recursion cutoff");
    mul->add_option("--threads", mul_threads, "worker threads for the compressed kernels");

    // bench
    auto* bench = app.add_subcommand("bench", "timing and counter grid");
    std::vector<std::string> bench_sizes{"256x256x256"};
    std::vector<std::size_t> bench_degrees{10};
    std::vector<std::string> bench_kernels{"naive", "outer"};
    std::size_t bench_repeats = 10;
    std::uint64_t bench_seed = 1;
    std::string bench_out;
    unsigned bench_threads = 1;
    bench->add_option("--sizes", bench_sizes, "cells as MxPxN");
    bench->add_option("--degrees", bench_degrees, "sparsity degrees");
    bench->add_option("--kernels", bench_kernels,
                      "kernels: naive strassen outer inner binary auto");
    bench->add_option("--repeats", bench_repeats, "matrix regenerations per cell");
    bench->add_option("--seed", bench_seed, "RNG seed (CARDMUL_SEED overrides)");
    bench->add_option("--out", bench_out, "CSV output path (default stdout)");
    bench->add_option("--threads", bench_threads, "worker threads (timing runs should use 1)");

    // memreport
    auto* mem = app.add_subcommand("memreport", "memory footprint of a matrix, both models");
    std::string mem_in;
    double mem_tol = 0.0;
    mem->add_option("--in", mem_in, "input matrix (.csv or .csmm)")->required();
    mem->add_option("--tolerance", mem_tol, "quantization tolerance before compression");

    // train-demo
    auto* train = app.add_subcommand("train-demo",
                                     "two-layer relu training with cardinality projection");
    TrainOptions topt;
    std::string train_out;
    train->add_option("--data", topt.csv_path, "labeled CSV (features..., integer label last)");
    train->add_option("--classes", topt.synth_classes, "synthetic class count");
    train->add_option("--samples", topt.synth_samples, "synthetic sample count");
    train->add_option("--features", topt.synth_features, "synthetic feature count");
    train->add_option("--hidden", topt.hidden, "hidden width");
    train->add_option("--degree,-k", topt.degree_k, "projection degree");
    train->add_option("--epochs", topt.epochs, "training epochs");
    train->add_option("--lr", topt.learning_rate, "learning rate");
    train->add_option("--seed", topt.seed, "RNG seed (CARDMUL_SEED overrides)");
    train->add_option("--out", train_out, "metrics CSV path (default stdout)");

    // tensorreg-demo
    auto* treg = app.add_subcommand("tensorreg-demo",
                                    "tensor regression, compressed vs naive inner products");
    TensorRegDemoOptions ropt;
    std::string treg_dims = "16x16";
    treg->add_option("--samples", ropt.samples, "sample count N");
    treg->add_option("--dims", treg_dims, "trailing input dims, e.g. 16x16");
    treg->add_option("--degree,-k", ropt.degree_k, "input sparsity degree");
    treg->add_option("--lambda", ropt.lambda, "regularization weight");
    treg->add_option("--nu", ropt.nu, "kernel-term weight");
    treg->add_option("--iters", ropt.iterations, "gradient iterations");
    treg->add_option("--step", ropt.step, "step size (0 = auto)");
    treg->add_option("--seed", ropt.seed, "RNG seed (CARDMUL_SEED overrides)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    if (gen->parsed()) {
        const std::uint64_t seed = effective_seed(gseed);
        if (gbinary) {
            Rng rng(seed);
            store_matrix(out_a, gen_binary_matrix(gm, gp, rng));
            store_matrix(out_b, gen_binary_matrix(gp, gn, rng));
        } else {
            const GenPair pair = gen_pair(gm, gp, gn, gk, seed);
            store_matrix(out_a, pair.a);
            store_matrix(out_b, pair.b);
        }
        return 0;
    }

    if (comp->parsed()) {
        const DenseMatrix m = load_matrix(comp_in);
        if (comp_mode == "cols")
            write_csmm_file(comp_out, compress_columns(m, comp_tol));
        else if (comp_mode == "rows")
            write_csmm_file(comp_out, compress_rows(m, comp_tol));
        else
            write_csmm_file(comp_out, compress_binary(m));
        return 0;
    }

    if (dec->parsed()) {
        store_matrix(dec_out, load_matrix(dec_in));
        return 0;
    }

    if (mul->parsed()) {
        const DenseMatrix a = load_matrix(mul_a);
        const DenseMatrix b = load_matrix(mul_b);
        MultReport report{DenseMatrix(1, 1), 0, 0.0, 0.0, Kernel::Naive};
        if (mul_kernel == "naive") {
            report = multiply_naive(a, b);
        } else if (mul_kernel == "strassen") {
            report = multiply_strassen(a, b, mul_cutoff);
        } else if (mul_kernel == "outer") {
            report = multiply_outer_compressed(compress_columns(a, mul_tol),
                                               compress_rows(b, mul_tol), {}, mul_threads);
        } else if (mul_kernel == "inner") {
            report = multiply_inner_compressed(compress_rows(a, mul_tol), b, mul_threads);
        } else if (mul_kernel == "binary") {
            report = multiply_binary(compress_binary(a), compress_binary(b));
        } else {
            report = multiply_auto(a, b, mul_tol, mul_threads);
        }
        if (!mul_out.empty()) store_matrix(mul_out, report.product);
        std::printf("kernel=%s scalar_mults=%llu multiply_seconds=%.6g preprocess_seconds=%.6g\n",
                    kernel_name(report.kernel).c_str(),
                    static_cast<unsigned long long>(report.scalar_mults),
                    report.multiply_seconds, report.preprocess_seconds);
        return 0;
    }

    if (bench->parsed()) {
        const auto rows = run_bench(parse_cells(bench_sizes, bench_degrees), bench_kernels,
                                    bench_repeats, effective_seed(bench_seed), bench_threads);
        for (const auto& r : rows)
            if (r.rel_error_vs_naive > 1e-9)
                throw std::runtime_error("bench: kernel " + r.kernel +
                                         " exceeded the 1e-9 error budget");
        write_text(bench_out, bench_csv(rows));
        return 0;
    }

    if (mem->parsed()) {
        const MemReport r = memory_report(load_matrix(mem_in), mem_tol);
        std::fputs(memreport_text(r).c_str(), stdout);
        return 0;
    }

    if (train->parsed()) {
        topt.seed = effective_seed(topt.seed);
        write_text(train_out, train_csv(run_train_demo(topt)));
        return 0;
    }

    if (treg->parsed()) {
        ropt.dims = parse_dims(treg_dims);
        ropt.seed = effective_seed(ropt.seed);
        const TensorRegDemoResult r = run_tensorreg_demo(ropt);
        std::fputs(tensorreg_text(r).c_str(), stdout);
        if (r.loss_gap > 1e-8 * std::max({1.0, r.sparse.data_loss, r.naive.data_loss}))
            throw std::runtime_error("tensorreg-demo: losses diverged between kernels");
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
