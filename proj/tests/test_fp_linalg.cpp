#include <random>

#include "doctest.h"

#include "fpg/fp_linalg.hpp"
#include "oracles.hpp"

using namespace fpg;

namespace {

FpMatrix from_rows_raw(std::uint32_t p, const oracle::Mat& rows) {
    std::vector<FpVector> conv(rows.begin(), rows.end());
    return FpMatrix::from_rows(p, conv);
}

oracle::Mat to_raw(const FpMatrix& m) {
    oracle::Mat out(m.rows(), oracle::Vec(m.cols(), 0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.at(r, c);
    return out;
}

}  // namespace

TEST_CASE("rank basics") {
    CHECK(FpMatrix::identity(2, 3).rank() == 3);
    CHECK(FpMatrix(3, 2, 2).rank() == 0);
    CHECK(from_rows_raw(2, {{1, 1}, {1, 1}}).rank() == 1);
}

TEST_CASE("kernel basics") {
    CHECK(FpMatrix::identity(2, 3).kernel_basis().empty());

    const auto kz = FpMatrix(2, 2, 2).kernel_basis();
    REQUIRE(kz.size() == 2);
    CHECK(kz[0] == FpVector{1, 0});
    CHECK(kz[1] == FpVector{0, 1});

    const auto k1 = from_rows_raw(2, {{1, 1}}).kernel_basis();
    REQUIRE(k1.size() == 1);
    CHECK(k1[0] == FpVector{1, 1});
}

TEST_CASE("solve basics") {
    const FpMatrix id = FpMatrix::identity(5, 3);
    const FpVector b{2, 0, 4};
    CHECK(id.solve(b) == b);

    CHECK(!FpMatrix(3, 2, 2).solve(FpVector{1, 0}).has_value());

    // free variable pinned to zero
    const auto x = from_rows_raw(2, {{1, 1}}).solve(FpVector{1});
    REQUIRE(x.has_value());
    CHECK(*x == FpVector{1, 0});
}

TEST_CASE("random matrices agree with the slow oracle") {
    std::mt19937_64 rng(42);
    for (const std::uint32_t p : {2u, 3u, 5u, 7u}) {
        std::uniform_int_distribution<std::uint32_t> entry(0, p - 1);
        for (int iter = 0; iter < 50; ++iter) {
            const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
            FpMatrix m(p, rows, cols);
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) m.set(r, c, entry(rng));

            const std::size_t rk = m.rank();
            CHECK(rk == oracle::rank_slow(to_raw(m), p));
            CHECK(rk == m.transpose().rank());

            const auto ker = m.kernel_basis();
            CHECK(rk + ker.size() == cols);
            for (const auto& v : ker) CHECK(vec_is_zero(m.apply(v)));

            FpVector x(cols, 0);
            for (auto& e : x) e = entry(rng);
            const FpVector b = m.apply(x);
            const auto sol = m.solve(b);
            REQUIRE(sol.has_value());
            CHECK(m.apply(*sol) == b);
        }
    }
}

TEST_CASE("inverse round trip") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 40; ++iter) {
        const std::uint32_t p = (iter % 2) ? 3 : 5;
        const std::size_t dim = 1 + rng() % 6;
        FpMatrix m(p, dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) m.set(r, c, std::uint32_t(rng() % p));
        const auto inv = m.inverse();
        if (m.rank() < dim) {
            CHECK(!inv.has_value());
        } else {
            REQUIRE(inv.has_value());
            CHECK((m * *inv).is_identity());
            CHECK((*inv * m).is_identity());
        }
    }
}

TEST_CASE("scalar helpers") {
    CHECK(is_prime(2));
    CHECK(is_prime(65521));
    CHECK(!is_prime(1));
    CHECK(!is_prime(65535));
    CHECK(ipow(3, 8) == 6561);
    CHECK(pow_mod(2, 10, 1000) == 24);
    for (std::uint32_t p : {2u, 3u, 11u})
        for (std::uint32_t a = 1; a < p; ++a) CHECK(a * inv_mod(a, p) % p == 1);
    CHECK_THROWS_AS(ipow(2, 65), bound_error);
}

TEST_CASE("incremental span") {
    IncrementalSpan span(3, 3);
    CHECK(span.insert(FpVector{1, 0, 0}));
    CHECK(span.insert(FpVector{1, 1, 0}));
    CHECK(!span.insert(FpVector{2, 1, 0}));  // dependent on the first two
    CHECK(span.rank() == 2);
    CHECK(span.contains(FpVector{0, 2, 0}));
    CHECK(!span.contains(FpVector{0, 0, 1}));
}
