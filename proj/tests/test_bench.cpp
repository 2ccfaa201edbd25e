#include <doctest.h>

#include "cardmul/bench.hpp"
#include "cardmul/cardinality.hpp"
#include "cardmul/codec.hpp"
#include "cardmul/generate.hpp"
#include "support/oracles.hpp"

using namespace cardmul;

TEST_SUITE("cli_bench") {

TEST_CASE("gen: degree one gives constant matrices") {
    const GenPair pair = gen_pair(6, 3, 5, 1, 99);
    CHECK(cardinality_degree(pair.a, FiberMode::ColumnWise, 0.0) == 1);
    CHECK(cardinality_degree(pair.b, FiberMode::RowWise, 0.0) == 1);
    const double v = pair.a(0, 0);
    for (double x : pair.a.data()) CHECK(x == v);
}

TEST_CASE("gen: degree bound holds in both fiber directions") {
    const GenPair pair = gen_pair(64, 16, 64, 10, 512);
    CHECK(cardinality_degree(pair.a, FiberMode::ColumnWise, 0.0) <= 10);
    CHECK(cardinality_degree(pair.a, FiberMode::RowWise, 0.0) <= 10);
    CHECK(cardinality_degree(pair.b, FiberMode::RowWise, 0.0) <= 10);
}

TEST_CASE("gen: fixed seed reproduces the matrices") {
    const GenPair first = gen_pair(8, 4, 7, 5, 2718);
    const GenPair second = gen_pair(8, 4, 7, 5, 2718);
    CHECK(first.a == second.a);
    CHECK(first.b == second.b);
    const GenPair other = gen_pair(8, 4, 7, 5, 2719);
    CHECK(first.a.data() != other.a.data());
}

TEST_CASE("bench rows satisfy the error budget and the counter law") {
    const auto rows = run_bench({{24, 6, 20, 3}, {16, 48, 12, 4}},
                                {"naive", "outer", "inner", "auto", "strassen", "binary"}, 2,
                                7);
    REQUIRE(rows.size() == 12);
    for (const auto& r : rows) {
        INFO(r.kernel);
        CHECK(r.rel_error_vs_naive <= 1e-9);
        if (r.kernel == "binary") CHECK(r.rel_error_vs_naive == 0.0);
        if (r.kernel == "naive")
            CHECK(r.scalar_mults == static_cast<std::uint64_t>(r.m) * r.p * r.n);
        if (r.kernel == "outer")
            CHECK(r.scalar_mults <= static_cast<std::uint64_t>(r.k) * r.p * r.k);
        CHECK(r.multiply_seconds >= 0.0);
    }
    const std::string csv = bench_csv(rows);
    CHECK(csv.find("kernel,M,P,N,k") == 0);
}

TEST_CASE("bench: naive against itself stays near ratio one") {
    const auto rows = run_bench({{64, 32, 64, 5}}, {"naive"}, 5, 3);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rel_error_vs_naive == 0.0);
    CHECK(rows[0].ratio_vs_naive > 0.2);
    CHECK(rows[0].ratio_vs_naive < 5.0);
}

TEST_CASE("bench ratios shrink as the sparsity degree grows") {
    std::vector<BenchCell> cells;
    for (std::size_t k : {1, 4, 16, 64}) cells.push_back({96, 24, 96, k});
    const auto rows = run_bench(cells, {"outer"}, 3, 13);
    // Work is monotone in the degree, so the counter column must grow.
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].scalar_mults >= rows[i - 1].scalar_mults);
}

TEST_CASE("memreport: constant columns compress at least eightfold") {
    DenseMatrix m(100, 10);
    for (std::size_t j = 0; j < 10; ++j)
        for (std::size_t i = 0; i < 100; ++i) m(i, j) = static_cast<double>(j);
    const MemReport r = memory_report(m, 0.0);
    CHECK(r.compressed_minimal_bits * 8 <= r.dense_bits);
    CHECK(r.degree == 1);
}

TEST_CASE("memreport: all-distinct entries cannot win") {
    DenseMatrix m(32, 4);
    for (std::size_t q = 0; q < m.size(); ++q) m.data()[q] = static_cast<double>(q) * 1.25;
    const MemReport r = memory_report(m, 0.0);
    CHECK(r.compressed_minimal_bits >= r.dense_bits);
}

TEST_CASE("memreport matches the codec footprints exactly") {
    Rng rng(21);
    const DenseMatrix m = oracle::random_levels_matrix(1000, 8, 3, rng);
    const MemReport r = memory_report(m, 0.0);
    const ColCompressed c = compress_columns(m);
    CHECK(r.dense_bits == memory_footprint(m, MemoryModel::Fixed32));
    CHECK(r.compressed_fixed32_bits == memory_footprint(c, MemoryModel::Fixed32));
    CHECK(r.compressed_minimal_bits == memory_footprint(c, MemoryModel::MinimalBits));
    CHECK(r.compressed_minimal_bits < r.dense_bits);
}

TEST_CASE("train demo: projection with k = hidden width is the identity") {
    TrainOptions opt;
    opt.synth_classes = 2;
    opt.synth_samples = 40;
    opt.synth_features = 4;
    opt.hidden = 10;
    opt.degree_k = 10;  // k equals the column length of the hidden weights
    opt.epochs = 5;
    opt.seed = 3;
    const TrainResult r = run_train_demo(opt);
    REQUIRE(r.rows.size() == 10);
    for (std::size_t e = 0; e < 5; ++e) {
        const auto& projected = r.rows[e];
        const auto& unprojected = r.rows[5 + e];
        CHECK(projected.accuracy == unprojected.accuracy);
        CHECK(projected.scalar_mults == unprojected.scalar_mults);
        CHECK(projected.hidden_cardinality == unprojected.hidden_cardinality);
    }
}

TEST_CASE("train demo: hidden weights stay k-sparse after every step") {
    TrainOptions opt;
    opt.synth_classes = 3;
    opt.synth_samples = 60;
    opt.synth_features = 6;
    opt.hidden = 12;
    opt.degree_k = 8;
    opt.epochs = 6;
    opt.seed = 5;
    const TrainResult r = run_train_demo(opt);
    for (std::size_t e = 0; e < opt.epochs; ++e)
        CHECK(r.rows[e].hidden_cardinality <= 8);
}

TEST_CASE("train demo: digits-style run learns and the projection saves work") {
    // Ten epochs cover the regime where accuracy climbs past 80%; the work
    // comparison is made over that window.
    TrainOptions opt;
    opt.synth_classes = 10;
    opt.synth_samples = 200;
    opt.synth_features = 64;
    opt.hidden = 40;
    opt.degree_k = 8;
    opt.epochs = 10;
    opt.learning_rate = 0.8;
    opt.seed = 7;
    const TrainResult r = run_train_demo(opt);
    REQUIRE(r.rows.size() == 2 * opt.epochs);

    const auto& proj_last = r.rows[opt.epochs - 1];
    const auto& plain_last = r.rows[2 * opt.epochs - 1];
    CHECK(proj_last.accuracy >= 0.8);
    CHECK(plain_last.accuracy >= 0.8);

    std::uint64_t proj_mults = 0, plain_mults = 0;
    for (std::size_t e = 0; e < opt.epochs; ++e) {
        proj_mults += r.rows[e].scalar_mults;
        plain_mults += r.rows[opt.epochs + e].scalar_mults;
    }
    CHECK(proj_mults < plain_mults);

    const std::string csv = train_csv(r);
    CHECK(csv.find("run,epoch") == 0);
}

TEST_CASE("tensor regression demo: identical losses, less compressed work") {
    TensorRegDemoOptions opt;
    opt.samples = 120;
    opt.dims = {6, 6};
    opt.degree_k = 3;
    opt.iterations = 10;
    opt.seed = 11;
    const TensorRegDemoResult r = run_tensorreg_demo(opt);
    CHECK(r.loss_gap <= 1e-8 * std::max({1.0, r.sparse.data_loss, r.naive.data_loss}));
    CHECK(r.sparse.totals.scalar_mults < r.naive.totals.scalar_mults);
}

TEST_CASE("tensor regression demo: degree-1 input collapses the multiply count") {
    TensorRegDemoOptions opt;
    opt.samples = 50;
    opt.dims = {8};
    opt.degree_k = 1;
    opt.iterations = 4;
    opt.seed = 13;
    const TensorRegDemoResult r = run_tensorreg_demo(opt);
    // Each compressed product costs O(P) instead of O(N P) multiplications.
    CHECK(r.sparse.totals.scalar_mults * 10 < r.naive.totals.scalar_mults);
}

}  // TEST_SUITE
