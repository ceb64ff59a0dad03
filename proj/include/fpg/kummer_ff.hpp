#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "fpg/indexed_module.hpp"

namespace fpg {

// Small finite field F_{ell^deg} with explicit polynomial arithmetic.
// Elements are coefficient vectors of length deg, lowest degree first.
struct SmallField {
    std::uint32_t ell = 0;
    std::uint32_t deg = 0;
    std::vector<std::uint32_t> modulus;  // monic irreducible, length deg + 1

    using El = std::vector<std::uint32_t>;

    El zero() const { return El(deg, 0); }
    El one() const;
    El gen_x() const;
    bool is_zero(const El& a) const;
    bool is_one(const El& a) const;
    El add(const El& a, const El& b) const;
    El sub(const El& a, const El& b) const;
    El mul(const El& a, const El& b) const;
    El pow(El a, std::uint64_t k) const;
    std::uint64_t card() const;
    // injective encoding, usable as a hash key (card stays under 2^63)
    std::uint64_t key(const El& a) const;
};

SmallField make_field(std::uint32_t ell, std::uint32_t deg, std::mt19937_64& rng);

std::vector<std::uint64_t> prime_factors(std::uint64_t v);

// discrete log of x base g where g has the given order; throws if x is
// outside the cyclic group generated by g
std::uint64_t discrete_log(const SmallField& f, const SmallField::El& g,
                           const SmallField::El& x, std::uint64_t order);

// The multiplicative tower used for the finite-field consistency checks:
// base field F_q with q = ell^a, a prime p different from ell, and the
// extension of degree s * p^n over F_q where s is the order of q mod p.
struct KummerTower {
    std::uint32_t q = 0, p = 0, n = 0;
    std::uint32_t ell = 0, a = 0, s = 0, t = 0;
    std::uint32_t d = 0;           // a * s * p^n
    std::uint64_t card = 0;        // ell^d
    std::uint64_t q1 = 0;          // card - 1
    std::uint64_t qs1 = 0;         // q^s - 1
    std::uint64_t nu = 0;          // q1 / qs1, index of F_{q^s}^* in the big group
    SmallField field;
    SmallField::El gen;            // generator of the multiplicative group
    SmallField::El xi_p;           // gen^(q1/p), the pinned primitive p-th root of 1
};

KummerTower build_tower(std::uint32_t q, std::uint32_t p, std::uint32_t n,
                        std::uint64_t seed = 0,
                        std::uint64_t card_bound = std::uint64_t(1) << 20);

// e(class a) for a = 0..p-1, where class a is gen^(a*nu) viewed in the
// subfield line F_{q^s}^*. Each value is computed twice, once in exponent
// arithmetic and once by comparing actual field elements against powers of
// the pinned root xi_p, and the two must agree.
std::vector<std::uint32_t> index_values(const KummerTower& tw);

// the same indices recomputed through a second generator gen^w, matching
// elements by discrete log; must reproduce index_values exactly
std::vector<std::uint32_t> index_values_via_generator(const KummerTower& tw,
                                                      std::uint64_t seed);

// J = (multiplicative group of the subfield) mod p-th powers, as a rank-one
// indexed module: sigma acts trivially, epsilon scales by t, e(class a) = a.
IndexedModule kummer_module(const KummerTower& tw);

struct KummerReport {
    std::uint32_t q = 0, p = 0, n = 0;
    std::uint32_t ell = 0, a = 0, s = 0, t = 0, d = 0;
    std::uint64_t card = 0;
    std::uint32_t dim_j = 0;
    bool degenerate = false;
    bool decomposed = false;
    std::optional<int> r;  // only set when decomposed
    std::vector<std::uint32_t> e_values;
};

// runs every consistency check for one tower and throws semantic_error on
// any mismatch between the module-theoretic and field-theoretic answers
KummerReport end_to_end_check(const KummerTower& tw, std::uint64_t seed = 0);

}  // namespace fpg
