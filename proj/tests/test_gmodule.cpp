#include <random>

#include "doctest.h"

#include "fpg/gmodule.hpp"
#include "oracles.hpp"

using namespace fpg;

namespace {

FpMatrix random_invertible(std::mt19937_64& rng, std::uint32_t p, std::size_t dim) {
    for (;;) {
        FpMatrix q(p, dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) q.set(r, c, std::uint32_t(rng() % p));
        if (q.rank() == dim) return q;
    }
}

oracle::Mat to_raw(const FpMatrix& m) {
    oracle::Mat out(m.rows(), oracle::Vec(m.cols(), 0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.at(r, c);
    return out;
}

JordanType oracle_type(const GModule& m) {
    auto lens = oracle::block_lengths_slow(to_raw(m.sigma()), m.ctx().p);
    std::sort(lens.begin(), lens.end(), std::greater<>());
    return lens;
}

}  // namespace

TEST_CASE("jordan type basics") {
    const GroupRingContext c21(2, 1);
    CHECK(jordan_type(GModule(c21, FpMatrix::identity(2, 5))) == JordanType{1, 1, 1, 1, 1});

    const GroupRingContext c22(2, 2);
    CHECK(jordan_type(GModule(c22, canonical_sigma_block(2, 4))) == JordanType{4});
}

TEST_CASE("module construction rejects a non unipotent action") {
    const GroupRingContext c31(3, 1);
    FpMatrix swap2(3, 2, 2);
    swap2.set(0, 1, 1);
    swap2.set(1, 0, 1);
    CHECK_THROWS_AS(GModule(c31, swap2), semantic_error);
}

TEST_CASE("jordan type matches the slow oracle on random modules") {
    std::mt19937_64 rng(11);
    const GroupRingContext ctx(3, 2);
    for (int iter = 0; iter < 30; ++iter) {
        JordanType planted;
        std::size_t dim = 0;
        while (dim < 10) {
            const std::size_t len = 1 + rng() % std::min<std::size_t>(9, 10 - dim);
            planted.push_back(len);
            dim += len;
        }
        std::sort(planted.begin(), planted.end(), std::greater<>());
        const GModule m =
            GModule(ctx, blockdiag_sigma(3, planted)).conjugated(random_invertible(rng, 3, dim));
        CHECK(jordan_type(m) == planted);
        CHECK(jordan_type(m) == oracle_type(m));
    }
}

TEST_CASE("decompose on already split input") {
    const GroupRingContext ctx(3, 1);
    const GModule m(ctx, blockdiag_sigma(3, {3, 1}));
    const Decomposition dec = decompose(m);
    CHECK(dec.type == JordanType{3, 1});
    REQUIRE(dec.generators.size() == 2);
    CHECK(dec.basis_change.rank() == 4);
    CHECK(m.sigma() * dec.basis_change == dec.basis_change * blockdiag_sigma(3, dec.type));
}

TEST_CASE("decompose the zero dimensional module") {
    const GroupRingContext ctx(2, 1);
    const Decomposition dec = decompose(GModule(ctx, FpMatrix(2, 0, 0)));
    CHECK(dec.type.empty());
    CHECK(dec.generators.empty());
}

TEST_CASE("decompose recovers a scrambled type") {
    std::mt19937_64 rng(23);
    for (const std::uint32_t p : {2u, 5u}) {
        const GroupRingContext ctx(p, 2);
        for (int iter = 0; iter < 25; ++iter) {
            JordanType planted;
            std::size_t dim = 0;
            while (dim < 12) {
                const std::size_t cap = std::min<std::size_t>(ctx.order, 12 - dim);
                const std::size_t len = 1 + rng() % cap;
                planted.push_back(len);
                dim += len;
            }
            std::sort(planted.begin(), planted.end(), std::greater<>());
            const GModule m = GModule(ctx, blockdiag_sigma(p, planted))
                                  .conjugated(random_invertible(rng, p, dim));
            const Decomposition dec = decompose(m);
            CHECK(dec.type == planted);
            CHECK(dec.basis_change.rank() == dim);
            CHECK(m.sigma() * dec.basis_change == dec.basis_change * blockdiag_sigma(p, dec.type));
            // generators really head their chains
            for (std::size_t s = 0; s < dec.generators.size(); ++s)
                CHECK(rho_height(m, dec.generators[s]) == dec.type[s]);
        }
    }
}

TEST_CASE("cyclic submodule lengths") {
    const GroupRingContext ctx(3, 1);
    const GModule m(ctx, blockdiag_sigma(3, {3, 1}));

    CHECK(cyclic_submodule(m, FpVector{0, 0, 0, 0}).length == 0);
    CHECK(cyclic_submodule(m, FpVector{0, 0, 0, 2}).length == 1);
    CHECK(cyclic_submodule(m, FpVector{1, 0, 0, 0}).length == 3);

    std::mt19937_64 rng(5);
    const FpMatrix q = random_invertible(rng, 3, 4);
    const GModule scr = m.conjugated(q);
    // the generator moves with the basis change: new coords are q^{-1} e_0
    const FpVector gen_new = q.inverse()->apply(FpVector{1, 0, 0, 0});
    const auto sub = cyclic_submodule(scr, gen_new);
    CHECK(sub.length == 3);
    CHECK(sub.sub.dim() == 3);
    CHECK(jordan_type(sub.sub) == JordanType{3});
}

TEST_CASE("dual preserves the type") {
    const GroupRingContext c31(3, 1);
    CHECK(jordan_type(dual_module(GModule(c31, FpMatrix::identity(3, 1)))) == JordanType{1});
    CHECK(jordan_type(dual_module(GModule(c31, canonical_sigma_block(3, 3)))) == JordanType{3});

    std::mt19937_64 rng(31);
    const GroupRingContext ctx(5, 1);
    for (int iter = 0; iter < 20; ++iter) {
        JordanType planted;
        std::size_t dim = 0;
        while (dim < 9) {
            const std::size_t cap = std::min<std::size_t>(5, 9 - dim);
            const std::size_t len = 1 + rng() % cap;
            planted.push_back(len);
            dim += len;
        }
        std::sort(planted.begin(), planted.end(), std::greater<>());
        const GModule m = GModule(ctx, blockdiag_sigma(5, planted))
                              .conjugated(random_invertible(rng, 5, dim));
        CHECK(jordan_type(dual_module(m)) == planted);
    }
}

TEST_CASE("projector with trivial epsilon is the identity") {
    const GroupRingContext ctx(3, 1);
    const std::size_t dim = 4;
    const GModule m(ctx, blockdiag_sigma(3, {3, 1}),
                    EpsilonStructure(FpMatrix::identity(3, dim), 1, 1));
    CHECK(epsilon_projector(m) == FpMatrix::identity(3, dim));
}

TEST_CASE("projector for an order two epsilon over F_3") {
    // s=2, t=2 forces z=1 and T = 2I + eps; with eps = diag(2,1) the image
    // is exactly the first axis
    const GroupRingContext ctx(3, 1);
    FpMatrix eps(3, 2, 2);
    eps.set(0, 0, 2);
    eps.set(1, 1, 1);
    const GModule m(ctx, FpMatrix::identity(3, 2), EpsilonStructure(eps, 2, 2));
    const FpMatrix t = epsilon_projector(m);

    FpMatrix expect(3, 2, 2);
    expect.set(0, 0, 1);
    CHECK(t == expect);
    CHECK(t * t == t);

    // symbolic check (2I - eps)(2I + eps) = 3I = 0
    const FpMatrix lhs = (FpMatrix::identity(3, 2).scaled(2) - eps) *
                         (FpMatrix::identity(3, 2).scaled(2) + eps);
    CHECK(lhs.is_zero());
}

TEST_CASE("eigenspace edge cases") {
    const GroupRingContext ctx(5, 1);

    // epsilon = t I: everything survives
    const GModule all(ctx, FpMatrix::identity(5, 3),
                      EpsilonStructure(FpMatrix::identity(5, 3).scaled(4), 2, 4));
    CHECK(epsilon_eigenspace(all).sub.dim() == 3);

    // epsilon of order 4 with eigenvalues {3, 2} but t = 4 misses them
    FpMatrix eps(5, 2, 2);
    eps.set(0, 0, 3);
    eps.set(1, 1, 2);
    const GModule none(ctx, FpMatrix::identity(5, 2), EpsilonStructure(eps, 4, 4));
    CHECK(epsilon_eigenspace(none).sub.dim() == 0);
    CHECK(epsilon_projector(none).is_zero());
}

TEST_CASE("eigenspace of a commuting pair is sigma stable") {
    std::mt19937_64 rng(17);
    const GroupRingContext ctx(3, 1);
    for (int iter = 0; iter < 20; ++iter) {
        const JordanType type{2, 1, 1};
        const std::size_t dim = 4;
        FpMatrix eps(3, dim, dim);
        // block scalars commuting with the block diagonal sigma
        const std::uint32_t vals[3] = {2, std::uint32_t(1 + rng() % 2), 1};
        eps.set(0, 0, vals[0]);
        eps.set(1, 1, vals[0]);
        eps.set(2, 2, vals[1]);
        eps.set(3, 3, vals[2]);
        const FpMatrix q = random_invertible(rng, 3, dim);
        const GModule m = GModule(ctx, blockdiag_sigma(3, type), EpsilonStructure(eps, 2, 2))
                              .conjugated(q);
        const auto eig = epsilon_eigenspace(m);
        const FpMatrix t = epsilon_projector(m);
        for (const auto& b : eig.basis) {
            // stays inside the eigenspace under sigma, and T fixes it
            const FpVector sb = m.sigma().apply(b);
            CHECK(m.epsilon()->matrix.apply(sb) == vec_scaled(3, sb, 2));
            CHECK(t.apply(b) == b);
        }
    }
}
