#include <doctest.h>

#include <numeric>

#include "cardmul/cardinality.hpp"
#include "cardmul/generate.hpp"
#include "cardmul/matmul.hpp"
#include "support/oracles.hpp"

using namespace cardmul;

namespace {

DenseMatrix intro_w() {
    return DenseMatrix::from_rows(
        {{2.1, 1.1}, {1, 2.3}, {1, 1.1}, {2.1, 1.1}, {3, 2.3}, {3, 4}});
}

DenseMatrix intro_v() {
    return DenseMatrix::from_rows({{1, 1, 2, 1}, {3, 4, 4, 3}});
}

DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

}  // namespace

TEST_SUITE("matmul") {

TEST_CASE("the 6x2 times 2x4 example: 48 naive and 12 compressed multiplications") {
    const MultReport naive = multiply_naive(intro_w(), intro_v());
    CHECK(naive.scalar_mults == 48);

    const MultReport outer =
        multiply_outer_compressed(compress_columns(intro_w()), compress_rows(intro_v()));
    CHECK(outer.scalar_mults == 12);
    CHECK(relative_frobenius_error(outer.product, naive.product) == 0.0);
    CHECK(relative_frobenius_error(naive.product, oracle::multiply_kij(intro_w(), intro_v())) <
          1e-15);
}

TEST_CASE("identity times any matrix") {
    Rng rng(1);
    const DenseMatrix b = oracle::random_matrix(3, 5, rng);
    CHECK(multiply_naive(identity(3), b).product == b);
}

TEST_CASE("naive agrees with the independent loop-order oracle") {
    Rng rng(2);
    const DenseMatrix a = oracle::random_matrix(4, 3, rng);
    const DenseMatrix b = oracle::random_matrix(3, 5, rng);
    CHECK(relative_frobenius_error(multiply_naive(a, b).product, oracle::multiply_kij(a, b)) <
          1e-14);
    CHECK_THROWS_AS(multiply_naive(a, a), std::invalid_argument);
}

TEST_CASE("strassen: 2x2 all-ones takes 7 multiplications at cutoff 1") {
    DenseMatrix ones(2, 2);
    for (double& v : ones.data()) v = 1.0;
    const MultReport r = multiply_strassen(ones, ones, 1);
    CHECK(r.scalar_mults == 7);
    for (double v : r.product.data()) CHECK(v == 2.0);
}

TEST_CASE("strassen matches naive on power-of-two and ragged sizes") {
    Rng rng(3);
    {
        const DenseMatrix a = oracle::random_matrix(64, 64, rng);
        const DenseMatrix b = oracle::random_matrix(64, 64, rng);
        CHECK(relative_frobenius_error(multiply_strassen(a, b, 8).product,
                                       multiply_naive(a, b).product) < 1e-9);
    }
    {
        const DenseMatrix a = oracle::random_matrix(48, 48, rng);
        const DenseMatrix b = oracle::random_matrix(48, 48, rng);
        CHECK(relative_frobenius_error(multiply_strassen(a, b, 8).product,
                                       multiply_naive(a, b).product) < 1e-9);
    }
    {
        // Non-square shapes pad to the same power of two.
        const DenseMatrix a = oracle::random_matrix(5, 12, rng);
        const DenseMatrix b = oracle::random_matrix(12, 9, rng);
        CHECK(relative_frobenius_error(multiply_strassen(a, b, 2).product,
                                       multiply_naive(a, b).product) < 1e-9);
    }
}

TEST_CASE("outer kernel: degree-1 fibers collapse to P multiplications") {
    DenseMatrix w(30, 6);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t i = 0; i < 30; ++i) w(i, j) = static_cast<double>(j) + 0.5;
    DenseMatrix v(6, 25);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 25; ++j) v(i, j) = static_cast<double>(i) - 2.0;
    const MultReport r = multiply_outer_compressed(compress_columns(w), compress_rows(v));
    CHECK(r.scalar_mults == 6);
    CHECK(relative_frobenius_error(r.product, multiply_naive(w, v).product) < 1e-12);
}

TEST_CASE("outer kernel matches naive on random degree-4 inputs") {
    const GenPair pair = gen_pair(30, 6, 25, 4, 2024);
    const MultReport outer =
        multiply_outer_compressed(compress_columns(pair.a), compress_rows(pair.b));
    const MultReport naive = multiply_naive(pair.a, pair.b);
    CHECK(relative_frobenius_error(outer.product, naive.product) < 1e-10);
    CHECK(outer.scalar_mults <= 4ull * 6 * 4);
}

TEST_CASE("outer kernel counter equals the sum over value-table sizes") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const GenPair pair =
            gen_pair(4 + rng.next_u64() % 40, 1 + rng.next_u64() % 12, 4 + rng.next_u64() % 40,
                     1 + rng.next_u64() % 10, rng.next_u64());
        const ColCompressed wc = compress_columns(pair.a);
        const RowCompressed vc = compress_rows(pair.b);
        std::uint64_t expect = 0;
        for (std::size_t j = 0; j < wc.cols; ++j)
            expect += static_cast<std::uint64_t>(wc.uniques_per_col[j]) * vc.uniques_per_row[j];
        const MultReport r = multiply_outer_compressed(wc, vc);
        CHECK(r.scalar_mults == expect);
        CHECK(r.scalar_mults <=
              static_cast<std::uint64_t>(wc.max_uniques) * wc.cols * vc.max_uniques);
    }
}

TEST_CASE("inner kernel reproduces the worked grouped-sum row") {
    // C_W^(i) = (1.1, 2.3), I_i = (1,1,2,1,2), b = (1,2,3,4,5)^T:
    // 1.1*(1+2+4) + 2.3*(3+5) = 26.1.
    const DenseMatrix w = DenseMatrix::from_rows({{1.1, 1.1, 2.3, 1.1, 2.3}});
    const DenseMatrix b = DenseMatrix::from_rows({{1}, {2}, {3}, {4}, {5}});
    const MultReport r = multiply_inner_compressed(compress_rows(w), b);
    CHECK(r.product(0, 0) == doctest::Approx(26.1).epsilon(1e-12));
    CHECK(r.scalar_mults == 2);
    CHECK(relative_frobenius_error(r.product, multiply_naive(w, b).product) < 1e-12);
}

TEST_CASE("inner kernel: constant row needs one multiplication per column") {
    DenseMatrix w(1, 40);
    for (double& v : w.data()) v = 3.5;
    Rng rng(4);
    const DenseMatrix b = oracle::random_matrix(40, 1, rng);
    const MultReport r = multiply_inner_compressed(compress_rows(w), b);
    CHECK(r.scalar_mults == 1);
    double sum = 0.0;
    for (double v : b.data()) sum += v;
    CHECK(r.product(0, 0) == doctest::Approx(3.5 * sum).epsilon(1e-12));
}

TEST_CASE("inner kernel matches naive with the stated work bound") {
    const GenPair pair = gen_pair(8, 200, 6, 5, 77);
    const MultReport r = multiply_inner_compressed(compress_rows(pair.a), pair.b);
    CHECK(relative_frobenius_error(r.product, multiply_naive(pair.a, pair.b).product) < 1e-10);
    CHECK(r.scalar_mults <= 6ull * 8 * 5);
}

TEST_CASE("binary kernel is exact against the integer oracle") {
    const DenseMatrix a = DenseMatrix::from_rows(
        {{0, 0, 1}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 1, 1}});
    const DenseMatrix at = a.transposed();
    const MultReport r = multiply_binary(compress_binary(a), compress_binary(at));
    CHECK(r.product == multiply_naive(a, at).product);
}

TEST_CASE("binary kernel: permutation matrix reproduces the operand") {
    Rng rng(5);
    DenseMatrix perm(8, 8);
    std::vector<std::size_t> order(8);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 7; i > 0; --i) std::swap(order[i], order[rng.next_u64() % (i + 1)]);
    for (std::size_t i = 0; i < 8; ++i) perm(i, order[i]) = 1.0;

    const DenseMatrix b = gen_binary_matrix(8, 5, rng);
    const MultReport r = multiply_binary(compress_binary(perm), b);
    DenseMatrix expect(8, 5);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 5; ++j) expect(i, j) = b(order[i], j);
    CHECK(r.product == expect);
}

TEST_CASE("binary kernel on random 64x64 inputs") {
    Rng rng(6);
    const DenseMatrix a = gen_binary_matrix(64, 64, rng);
    const DenseMatrix b = gen_binary_matrix(64, 64, rng);
    const MultReport r = multiply_binary(compress_binary(a), compress_binary(b));
    CHECK(r.product == multiply_naive(a, b).product);
    CHECK(r.scalar_mults <= 2ull * 64 * 2);
    CHECK_THROWS_AS(multiply_binary(compress_binary(a), oracle::random_matrix(64, 4, rng)),
                    std::domain_error);
}

TEST_CASE("auto dispatch follows the shared-dimension rule") {
    {
        const GenPair pair = gen_pair(2000, 40, 2000, 3, 11);
        CHECK(multiply_auto(pair.a, pair.b).kernel == Kernel::OuterCompressed);
    }
    {
        const GenPair pair = gen_pair(100, 10000, 100, 3, 12);
        CHECK(multiply_auto(pair.a, pair.b).kernel == Kernel::InnerCompressed);
    }
    {
        Rng rng(13);
        const DenseMatrix a = gen_binary_matrix(16, 16, rng);
        const DenseMatrix b = gen_binary_matrix(16, 16, rng);
        CHECK(multiply_auto(a, b).kernel == Kernel::Binary);
    }
}

TEST_CASE("auto matches naive and reports preprocessing separately") {
    const GenPair pair = gen_pair(60, 9, 50, 5, 21);
    const MultReport r = multiply_auto(pair.a, pair.b);
    CHECK(relative_frobenius_error(r.product, multiply_naive(pair.a, pair.b).product) < 1e-10);
    CHECK(r.preprocess_seconds >= 0.0);
}

TEST_CASE("permuted accumulation order stays within the reassociation budget") {
    const GenPair pair = gen_pair(40, 12, 35, 6, 31);
    const ColCompressed wc = compress_columns(pair.a);
    const RowCompressed vc = compress_rows(pair.b);
    std::vector<std::size_t> reversed(12);
    std::iota(reversed.begin(), reversed.end(), std::size_t{0});
    std::reverse(reversed.begin(), reversed.end());

    const MultReport ascending = multiply_outer_compressed(wc, vc);
    const MultReport permuted = multiply_outer_compressed(wc, vc, reversed);
    CHECK(ascending.scalar_mults == permuted.scalar_mults);
    CHECK(relative_frobenius_error(permuted.product, ascending.product) < 1e-10);
}

TEST_CASE("threaded runs reproduce the single-threaded product") {
    const GenPair pair = gen_pair(64, 10, 48, 5, 41);
    const ColCompressed wc = compress_columns(pair.a);
    const RowCompressed vc = compress_rows(pair.b);
    CHECK(multiply_outer_compressed(wc, vc, {}, 4).product ==
          multiply_outer_compressed(wc, vc).product);

    const RowCompressed wr = compress_rows(pair.a);
    CHECK(multiply_inner_compressed(wr, pair.b, 4).product ==
          multiply_inner_compressed(wr, pair.b).product);
}

TEST_CASE("outer work grows with the generated sparsity degree") {
    std::uint64_t prev = 0;
    for (std::size_t k = 1; k <= 10; ++k) {
        const GenPair pair = gen_pair(64, 8, 64, k, 1234);
        const MultReport r =
            multiply_outer_compressed(compress_columns(pair.a), compress_rows(pair.b));
        CHECK(r.scalar_mults >= prev);
        prev = r.scalar_mults;
    }
}

}  // TEST_SUITE
