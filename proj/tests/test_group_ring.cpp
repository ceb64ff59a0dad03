#include "doctest.h"

#include "fpg/group_ring.hpp"

using namespace fpg;

TEST_CASE("basis change sigma to rho") {
    const GroupRingContext c21(2, 1);
    CHECK(sigma_to_rho(c21, FpVector{0, 1}) == FpVector{1, 1});
    CHECK(sigma_to_rho(c21, FpVector{1, 0}) == FpVector{1, 0});

    const GroupRingContext c31(3, 1);
    CHECK(sigma_to_rho(c31, FpVector{0, 0, 1}) == FpVector{1, 2, 1});

    // round trips both ways
    for (std::uint32_t mask = 0; mask < 27; ++mask) {
        FpVector v{mask % 3, (mask / 3) % 3, (mask / 9) % 3};
        CHECK(rho_to_sigma(c31, sigma_to_rho(c31, v)) == v);
        CHECK(sigma_to_rho(c31, rho_to_sigma(c31, v)) == v);
    }

    CHECK_THROWS_AS(sigma_to_rho(c21, FpVector{1}), shape_error);
}

TEST_CASE("ring multiplication") {
    const GroupRingContext ctx(3, 1);
    const auto rho = GroupRingElement::rho(ctx);
    const auto top = GroupRingElement::rho_power(ctx, 2);
    CHECK((rho * top).is_zero());

    const auto one = GroupRingElement::one(ctx);
    const auto a = GroupRingElement(ctx, FpVector{2, 1, 2});
    CHECK(one * a == a);

    const GroupRingContext c22(2, 2);
    const auto s = GroupRingElement::sigma(c22);  // 1 + rho
    CHECK((s * s).coeffs() == FpVector{1, 0, 1, 0});
}

TEST_CASE("geometric series collapses to the top rho power") {
    for (const auto& [p, n] : {std::pair{2u, 1u}, {2u, 2u}, {3u, 1u}, {3u, 2u}, {5u, 1u}}) {
        const GroupRingContext ctx(p, n);
        const FpVector ones(ctx.order, 1);  // 1 + sigma + ... in the group basis
        FpVector expect(ctx.order, 0);
        expect[ctx.order - 1] = 1;
        CHECK(sigma_to_rho(ctx, ones) == expect);
    }
}

TEST_CASE("lambda reads the top coefficient") {
    const GroupRingContext ctx(3, 2);
    const QuotientRing m3(ctx, 3);
    CHECK(m3.lambda(FpVector{0, 0, 1}) == 1);
    CHECK(m3.lambda(FpVector{1, 1, 0}) == 0);

    const QuotientRing m1(ctx, 1);
    for (std::uint32_t c = 0; c < 3; ++c) CHECK(m1.lambda(FpVector{c}) == c);

    CHECK_THROWS_AS(m3.lambda(FpVector{1, 0}), shape_error);
}

TEST_CASE("pairing on rho powers") {
    const GroupRingContext ctx(3, 2);
    for (std::size_t j = 1; j <= 9; ++j) {
        const QuotientRing mj(ctx, j);
        for (std::size_t u = 0; u < j; ++u)
            for (std::size_t v = 0; v < j; ++v) {
                FpVector a(j, 0), b(j, 0);
                a[u] = 1;
                b[v] = 1;
                const std::uint32_t q = mj.form_q(a, b);
                if (u + v == j - 1) CHECK(q == 1);
                if (u + v >= j) CHECK(q == 0);
                CHECK(q == mj.form_q(b, a));
            }
    }

    const GroupRingContext c21(2, 1);
    const QuotientRing m2(c21, 2);
    CHECK(m2.form_q(FpVector{1, 1}, FpVector{1, 1}) == 0);
}

TEST_CASE("gram matrix shape and rank") {
    const GroupRingContext c21(2, 1);
    const QuotientRing m1(c21, 1);
    CHECK(m1.psi_matrix() == FpMatrix::identity(2, 1));

    for (const auto& [p, n] : {std::pair{2u, 1u}, {2u, 2u}, {2u, 3u}, {3u, 1u}, {3u, 2u}}) {
        const GroupRingContext ctx(p, n);
        for (std::size_t j = 1; j <= ctx.order; ++j) {
            const QuotientRing mj(ctx, j);
            const FpMatrix psi = mj.psi_matrix();
            CHECK(psi.rank() == j);
            CHECK(psi == psi.transpose());
            for (std::size_t u = 0; u < j; ++u)
                for (std::size_t v = 0; v < j; ++v) {
                    if (u + v == j - 1) CHECK(psi.at(u, v) == 1);
                    if (u + v > j - 1) CHECK(psi.at(u, v) == 0);
                }
            // equivariance of the pairing under sigma
            const FpMatrix s = mj.sigma_matrix();
            CHECK(s.transpose() * psi == psi * s);
        }
    }
}

TEST_CASE("kernel of lambda contains no ideal") {
    const GroupRingContext ctx(3, 2);
    for (std::size_t j = 1; j <= 9; ++j) {
        const QuotientRing mj(ctx, j);
        for (std::size_t k = 0; k < j; ++k) {
            // the ideal rho^k M_j contains rho^(j-1), which lambda sees
            FpVector probe(j, 0);
            probe[j - 1] = 1;
            CHECK(mj.lambda(probe) == 1);
            // and rho^(j-1) = rho^k * rho^(j-1-k) really lies in the ideal
            FpVector a(j, 0), b(j, 0);
            a[k] = 1;
            b[j - 1 - k] = 1;
            CHECK(mj.mul(a, b) == probe);
        }
    }
}

TEST_CASE("units are exactly the complement of the maximal ideal") {
    for (const auto& [p, n] : {std::pair{2u, 1u}, {2u, 2u}, {3u, 1u}, {3u, 2u}}) {
        const GroupRingContext ctx(p, n);
        for (std::size_t j = 1; j <= ctx.order; ++j) {
            const QuotientRing mj(ctx, j);
            // enumerate all of M_j when small enough, else sample the borders
            const std::uint64_t total = ipow(p, std::uint32_t(j));
            if (total > 2187) continue;
            for (std::uint64_t code = 0; code < total; ++code) {
                FpVector a(j, 0);
                std::uint64_t rest = code;
                for (std::size_t k = 0; k < j; ++k) {
                    a[k] = rest % p;
                    rest /= p;
                }
                const auto inv = mj.inverse(a);
                if (a[0] % p == 0) {
                    CHECK(!inv.has_value());
                } else {
                    REQUIRE(inv.has_value());
                    FpVector one(j, 0);
                    one[0] = 1;
                    CHECK(mj.mul(a, *inv) == one);
                }
            }
        }
    }
}
