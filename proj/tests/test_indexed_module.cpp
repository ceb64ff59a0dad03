#include <random>

#include "doctest.h"

#include "fpg/indexed_module.hpp"
#include "fpg/json_io.hpp"
#include "oracles.hpp"

using namespace fpg;

TEST_CASE("annihilator of the trivial action is everything") {
    const GroupRingContext ctx(3, 1);
    const IndexedModule im{GModule(ctx, FpMatrix::identity(3, 4)), FpVector(4, 0)};
    CHECK(annihilator_basis(im).size() == 4);
}

TEST_CASE("annihilator of a full block has codimension one") {
    const GroupRingContext ctx(2, 2);
    const IndexedModule im{GModule(ctx, canonical_sigma_block(2, 4)), FpVector(4, 0)};
    const auto basis = annihilator_basis(im);
    CHECK(basis.size() == 3);
    // rho^3 kills each basis vector
    const FpMatrix r3 = im.module.rho().pow(3);
    for (const auto& v : basis) CHECK(vec_is_zero(r3.apply(v)));
}

TEST_CASE("annihilator equals a brute force kernel") {
    std::mt19937_64 rng(3);
    const GroupRingContext ctx(3, 2);
    for (int iter = 0; iter < 10; ++iter) {
        JordanType type;
        std::size_t dim = 0;
        while (dim < 12) {
            const std::size_t len = 1 + rng() % std::min<std::size_t>(9, 12 - dim);
            type.push_back(len);
            dim += len;
        }
        std::sort(type.begin(), type.end(), std::greater<>());
        FpMatrix q(3, dim, dim);
        do {
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = 0; c < dim; ++c) q.set(r, c, std::uint32_t(rng() % 3));
        } while (q.rank() != dim);
        const IndexedModule im{GModule(ctx, blockdiag_sigma(3, type)).conjugated(q),
                               FpVector(dim, 0)};
        const auto basis = annihilator_basis(im);
        const auto direct = im.module.rho().pow(8).kernel_basis();
        REQUIRE(basis.size() == direct.size());
        IncrementalSpan span(3, dim);
        for (const auto& v : basis) span.insert(v);
        for (const auto& v : direct) CHECK(span.contains(v));
    }
}

TEST_CASE("axiom check") {
    const GroupRingContext ctx(3, 1);
    const GModule m(ctx, blockdiag_sigma(3, {2, 1}));

    CHECK(check_axioms(IndexedModule{m, FpVector{0, 0, 0}}).empty());

    // e sees rho * (block generator) = e_1, which the axioms forbid
    const auto bad = check_axioms(IndexedModule{m, FpVector{0, 1, 0}});
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].witness == FpVector{0, 1, 0});

    const IndexedModule gen = generate_synthetic(3, 1, 0, {1}, 99);
    CHECK(check_axioms(gen).empty());
}

TEST_CASE("synthetic generator shapes") {
    const IndexedModule a = generate_synthetic(3, 1, 0, {1}, 1);
    CHECK(a.module.dim() == 5);  // M_2 plus M_3

    const IndexedModule b = generate_synthetic(2, 2, r_minus_infinity, {}, 1);
    CHECK(b.module.dim() == 1);

    const IndexedModule c1 = generate_synthetic(3, 2, 1, {2, 0}, 77);
    const IndexedModule c2 = generate_synthetic(3, 2, 1, {2, 0}, 77);
    CHECK(c1.module.sigma() == c2.module.sigma());
    CHECK(c1.e == c2.e);

    CHECK_THROWS_AS(generate_synthetic(2, 1, 0, {}, 1), precondition_error);
}

TEST_CASE("distinguished summand recovery") {
    const IndexedModule im = generate_synthetic(3, 1, 0, {1}, 5);
    const JepsilonDecomposition dec = decompose_jepsilon(im);
    CHECK(dec.r == 0);
    REQUIRE(dec.v_summands.size() == 1);
    CHECK(dec.v_summands[0].i == 1);
    CHECK(dec.u_value != 0);
    CHECK(rho_height(im.module, dec.u_generator) == 2);
}

TEST_CASE("one dimensional module with nonzero functional") {
    const GroupRingContext ctx(2, 2);
    const IndexedModule im{GModule(ctx, FpMatrix::identity(2, 1)), FpVector{1}};
    const JepsilonDecomposition dec = decompose_jepsilon(im);
    CHECK(dec.r == r_minus_infinity);
    CHECK(dec.v_summands.empty());
    CHECK(dec.u_value == 1);
}

TEST_CASE("correction clears the functional on the longer summand") {
    // lengths {2,3} over p=3, n=1 with e nonzero on both generators
    const GroupRingContext ctx(3, 1);
    const GModule m(ctx, blockdiag_sigma(3, {3, 2}));
    // coordinates: block M_3 at 0..2, block M_2 at 3..4; put e on both tops
    // and on nothing else so the axioms hold
    const IndexedModule im{m, FpVector{2, 0, 0, 1, 0}};
    CHECK(check_axioms(im).empty());
    const JepsilonDecomposition dec = decompose_jepsilon(im);
    CHECK(dec.r == 0);  // U is the length 2 block
    CHECK(rho_height(im.module, dec.u_generator) == 2);
    REQUIRE(dec.v_summands.size() == 1);
    CHECK(dec.v_summands[0].i == 1);
    CHECK(rho_height(im.module, dec.v_summands[0].generator) == 3);
    CHECK(vec_dot(3, im.e, dec.v_summands[0].generator) == 0);
}

TEST_CASE("degenerate functional is rejected") {
    const GroupRingContext ctx(3, 1);
    const IndexedModule im{GModule(ctx, blockdiag_sigma(3, {2})), FpVector{0, 0}};
    CHECK_THROWS_AS(decompose_jepsilon(im), degenerate_error);
}

TEST_CASE("summand lengths outside the pattern are rejected") {
    // a length 2 block with no index plus a length 1 block carrying it:
    // U = M_1 and the leftover length 2 is not a power of 3
    const GroupRingContext ctx(3, 1);
    const IndexedModule im{GModule(ctx, blockdiag_sigma(3, {2, 1})), FpVector{0, 0, 1}};
    CHECK(check_axioms(im).empty());
    CHECK_THROWS_AS(decompose_jepsilon(im), shape_error);
}

TEST_CASE("realization cases on hand built modules") {
    // case (a): a full length summand exists
    {
        const GroupRingContext ctx(3, 1);
        const GModule m(ctx, blockdiag_sigma(3, {3, 2}));
        const IndexedModule im{m, FpVector{0, 0, 0, 1, 0}};
        const auto w = realize_step(im, 0, 1, FpVector{0, 1, 0, 0, 0});
        CHECK(w.kind == RealizationCase::full_ring);
        CHECK(w.realized_length == 3);
        CHECK(w.realized_group == "F_p[G] ⋊ G");
        CHECK(w.target_group == "M_3 ⋊ G");
        CHECK(vec_dot(3, im.e, w.w_generator) == 0);
    }
    // case (b): an intermediate summand absorbs gamma
    {
        const GroupRingContext ctx(3, 2);
        const GModule m(ctx, blockdiag_sigma(3, {4, 3}));
        const IndexedModule im{m, FpVector{1, 0, 0, 0, 0, 0, 0}};
        const auto w = realize_step(im, 0, 1, FpVector{0, 0, 1, 0, 0, 0, 0});
        CHECK(w.kind == RealizationCase::correction);
        CHECK(w.realized_length == 3);
        CHECK(w.realized_group == "M_3 ⋊ G");
        CHECK(rho_height(im.module, w.w_generator) == 3);
        CHECK(vec_dot(3, im.e, w.w_generator) == 0);
    }
    // case (c): only the distinguished summand is long enough
    {
        const GroupRingContext ctx(2, 3);
        const GModule m(ctx, blockdiag_sigma(2, {5}));
        const IndexedModule im{m, FpVector{1, 0, 0, 0, 0}};
        const auto w = realize_step(im, 1, 1, FpVector{0, 0, 1, 0, 0});
        CHECK(w.kind == RealizationCase::exceptional);
        CHECK(w.realized_length == 4);
        CHECK(w.realized_group == "M_4 ⋊ G");
        CHECK(w.target_group == "M_4 ⋊ G");
        CHECK(rho_height(im.module, w.w_generator) == 4);
        CHECK(vec_dot(2, im.e, w.w_generator) == 0);
    }
}

TEST_CASE("realization preconditions") {
    const GroupRingContext ctx(3, 1);
    const GModule m(ctx, blockdiag_sigma(3, {3, 2}));
    const IndexedModule im{m, FpVector{0, 0, 0, 1, 0}};

    // gamma with nonzero functional value
    CHECK_THROWS_AS(realize_step(im, 0, 1, FpVector{0, 0, 0, 1, 0}), precondition_error);
    // gamma of the wrong height
    CHECK_THROWS_AS(realize_step(im, 0, 1, FpVector{1, 0, 0, 0, 0}), precondition_error);
    // offsets outside their ranges
    CHECK_THROWS_AS(realize_step(im, 1, 1, FpVector{0, 1, 0, 0, 0}), precondition_error);
    CHECK_THROWS_AS(realize_step(im, 0, 2, FpVector{0, 1, 0, 0, 0}), precondition_error);
}

TEST_CASE("index correction keeps heights") {
    // whenever the recovered summands were corrected, their heights match the
    // uncorrected ones; spot-check on seeded instances
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 40; ++iter) {
        const std::uint32_t n = 2;
        const int r = int(rng() % 2);
        std::vector<std::uint32_t> profile;
        for (int c = int(rng() % 3); c > 0; --c) profile.push_back(std::uint32_t(rng() % (n + 1)));
        const IndexedModule im = generate_synthetic(3, n, r, profile, 1000 + iter);
        const JepsilonDecomposition dec = decompose_jepsilon(im);
        std::vector<std::uint32_t> got;
        for (const auto& v : dec.v_summands) {
            got.push_back(v.i);
            CHECK(rho_height(im.module, v.generator) == ipow(3, v.i));
        }
        std::sort(got.begin(), got.end());
        std::vector<std::uint32_t> want = profile;
        std::sort(want.begin(), want.end());
        CHECK(got == want);
        CHECK(dec.r == r);
    }
}

TEST_CASE("indexed module json round trip") {
    const IndexedModule im = generate_synthetic(3, 2, 1, {1, 0}, 21);
    const json doc = to_json(im);
    const IndexedModule back = indexed_module_from_json(doc);
    CHECK(back.module.sigma() == im.module.sigma());
    CHECK(back.e == im.e);
    CHECK(back.module.ctx().p == 3);
    CHECK(back.module.ctx().n == 2);
}
