#include "fpg/kummer_ff.hpp"

#include <numeric>
#include <string>
#include <unordered_map>

#include "fpg/errors.hpp"

namespace fpg {

namespace {

// raw polynomial helpers used by the irreducibility search; vectors are
// little-endian coefficient lists without a fixed length
using Poly = std::vector<std::uint32_t>;

void ptrim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly psub(const Poly& a, const Poly& b, std::uint32_t ell) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint32_t x = i < a.size() ? a[i] : 0;
        const std::uint32_t y = i < b.size() ? b[i] : 0;
        out[i] = (x + ell - y) % ell;
    }
    ptrim(out);
    return out;
}

// remainder of a modulo monic f
Poly pmod(Poly a, const Poly& f, std::uint32_t ell) {
    ptrim(a);
    const std::size_t df = f.size() - 1;
    while (a.size() > df) {
        const std::uint32_t c = a.back();
        const std::size_t shift = a.size() - 1 - df;
        if (c != 0)
            for (std::size_t i = 0; i < df; ++i)
                a[shift + i] = (a[shift + i] + std::uint64_t(c) * (ell - f[i])) % ell;
        a.pop_back();
        ptrim(a);
    }
    return a;
}

Poly pmul_mod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t ell) {
    if (a.empty() || b.empty()) return {};
    Poly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t k = 0; k < b.size(); ++k)
            prod[i + k] = (prod[i + k] + std::uint64_t(a[i]) * b[k]) % ell;
    }
    return pmod(std::move(prod), f, ell);
}

Poly ppow_mod(Poly base, std::uint64_t k, const Poly& f, std::uint32_t ell) {
    Poly r{1};
    while (k) {
        if (k & 1) r = pmul_mod(r, base, f, ell);
        base = pmul_mod(base, base, f, ell);
        k >>= 1;
    }
    return r;
}

Poly pgcd(Poly a, Poly b, std::uint32_t ell) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        // reduce a mod b after making b monic
        const std::uint32_t lead_inv = inv_mod(b.back(), ell);
        Poly bm = b;
        for (auto& c : bm) c = std::uint32_t(std::uint64_t(c) * lead_inv % ell);
        Poly r = a;
        ptrim(r);
        while (r.size() >= bm.size() && !r.empty()) {
            const std::uint32_t c = r.back();
            const std::size_t shift = r.size() - bm.size();
            for (std::size_t i = 0; i + 1 < bm.size(); ++i)
                r[shift + i] = (r[shift + i] + std::uint64_t(c) * (ell - bm[i])) % ell;
            r.pop_back();
            ptrim(r);
        }
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool poly_irreducible(const Poly& f, std::uint32_t ell, std::uint32_t deg) {
    // Rabin: x^(ell^deg) = x mod f, and for each prime r | deg the
    // polynomial x^(ell^(deg/r)) - x is coprime to f
    Poly x{0, 1};
    if (deg == 1) return true;
    std::vector<Poly> frob(deg + 1);
    frob[0] = pmod(x, f, ell);
    for (std::uint32_t k = 1; k <= deg; ++k) frob[k] = ppow_mod(frob[k - 1], ell, f, ell);
    if (frob[deg] != frob[0]) return false;
    for (const std::uint64_t r : prime_factors(deg)) {
        const Poly w = psub(frob[deg / r], frob[0], ell);
        const Poly g = pgcd(f, w, ell);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace

SmallField::El SmallField::one() const {
    El a(deg, 0);
    a[0] = 1;
    return a;
}

SmallField::El SmallField::gen_x() const {
    El a(deg, 0);
    if (deg == 1) {
        // x reduces to a constant in the prime field
        a[0] = (modulus[0] == 0) ? 0 : ell - modulus[0];
    } else {
        a[1] = 1;
    }
    return a;
}

bool SmallField::is_zero(const El& a) const {
    for (const auto c : a)
        if (c) return false;
    return true;
}

bool SmallField::is_one(const El& a) const {
    if (a.empty() || a[0] != 1) return false;
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i]) return false;
    return true;
}

SmallField::El SmallField::add(const El& a, const El& b) const {
    El out(deg);
    for (std::uint32_t i = 0; i < deg; ++i) out[i] = (a[i] + b[i]) % ell;
    return out;
}

SmallField::El SmallField::sub(const El& a, const El& b) const {
    El out(deg);
    for (std::uint32_t i = 0; i < deg; ++i) out[i] = (a[i] + ell - b[i]) % ell;
    return out;
}

SmallField::El SmallField::mul(const El& a, const El& b) const {
    std::vector<std::uint64_t> buf(2 * std::size_t(deg), 0);
    for (std::uint32_t i = 0; i < deg; ++i) {
        if (a[i] == 0) continue;
        for (std::uint32_t k = 0; k < deg; ++k) buf[i + k] += std::uint64_t(a[i]) * b[k];
    }
    for (std::size_t i = 2 * std::size_t(deg) - 1; i >= deg; --i) {
        const std::uint64_t c = buf[i] % ell;
        buf[i] = 0;
        if (c == 0) continue;
        for (std::uint32_t t = 0; t < deg; ++t)
            buf[i - deg + t] += c * (ell - modulus[t]);
    }
    El out(deg);
    for (std::uint32_t i = 0; i < deg; ++i) out[i] = std::uint32_t(buf[i] % ell);
    return out;
}

SmallField::El SmallField::pow(El a, std::uint64_t k) const {
    El r = one();
    while (k) {
        if (k & 1) r = mul(r, a);
        a = mul(a, a);
        k >>= 1;
    }
    return r;
}

std::uint64_t SmallField::card() const { return ipow(ell, deg); }

std::uint64_t SmallField::key(const El& a) const {
    std::uint64_t k = 0;
    for (std::uint32_t i = deg; i-- > 0;) k = k * ell + a[i];
    return k;
}

SmallField make_field(std::uint32_t ell, std::uint32_t deg, std::mt19937_64& rng) {
    if (!is_prime(ell)) throw semantic_error("field characteristic must be prime");
    if (deg < 1) throw semantic_error("field degree must be at least 1");
    ipow(ell, deg);  // overflow guard
    std::uniform_int_distribution<std::uint32_t> coeff(0, ell - 1);
    std::uniform_int_distribution<std::uint32_t> nonzero(1, ell - 1);
    for (int attempt = 0; attempt < 20000; ++attempt) {
        Poly f(deg + 1, 0);
        f[deg] = 1;
        f[0] = nonzero(rng);
        for (std::uint32_t i = 1; i < deg; ++i) f[i] = coeff(rng);
        if (poly_irreducible(f, ell, deg)) {
            SmallField fld;
            fld.ell = ell;
            fld.deg = deg;
            fld.modulus = std::move(f);
            return fld;
        }
    }
    throw semantic_error("no irreducible polynomial found (degree " + std::to_string(deg) + ")");
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

std::uint64_t discrete_log(const SmallField& f, const SmallField::El& g,
                           const SmallField::El& x, std::uint64_t order) {
    std::uint64_t m = 1;
    while (m * m < order) ++m;
    std::unordered_map<std::uint64_t, std::uint64_t> baby;
    baby.reserve(m * 2);
    SmallField::El cur = f.one();
    for (std::uint64_t i = 0; i < m; ++i) {
        baby.emplace(f.key(cur), i);
        cur = f.mul(cur, g);
    }
    const SmallField::El giant = f.pow(g, order - (m % order));
    cur = x;
    for (std::uint64_t t = 0; t <= m; ++t) {
        const auto it = baby.find(f.key(cur));
        if (it != baby.end()) return (t * m + it->second) % order;
        cur = f.mul(cur, giant);
    }
    throw semantic_error("discrete log: element is not a power of the base");
}

KummerTower build_tower(std::uint32_t q, std::uint32_t p, std::uint32_t n,
                        std::uint64_t seed, std::uint64_t card_bound) {
    if (!is_prime(p)) throw semantic_error("p must be prime");
    if (n < 1) throw semantic_error("n must be at least 1");
    if (q < 2) throw semantic_error("q must be a prime power at least 2");
    std::uint32_t ell = 0;
    for (std::uint32_t d = 2; d <= q; ++d)
        if (q % d == 0) {
            ell = d;
            break;
        }
    std::uint32_t a = 0;
    {
        std::uint32_t rest = q;
        while (rest % ell == 0) {
            rest /= ell;
            ++a;
        }
        if (rest != 1) throw semantic_error("q must be a prime power");
    }
    if (ell == p) throw semantic_error("the characteristic of q must differ from p");

    KummerTower tw;
    tw.q = q;
    tw.p = p;
    tw.n = n;
    tw.ell = ell;
    tw.a = a;
    tw.t = q % p;
    tw.s = 1;
    {
        std::uint32_t cur = tw.t;
        while (cur != 1) {
            cur = std::uint32_t(std::uint64_t(cur) * tw.t % p);
            ++tw.s;
            if (tw.s > p) throw semantic_error("internal: order of q mod p not found");
        }
    }
    const std::uint64_t pn = ipow(p, n);
    const std::uint64_t d64 = std::uint64_t(a) * tw.s * pn;
    if (d64 > 64) throw bound_error("extension degree " + std::to_string(d64) + " too large");
    tw.d = std::uint32_t(d64);
    tw.card = ipow(ell, tw.d);
    if (tw.card > card_bound)
        throw bound_error("field cardinality " + std::to_string(tw.card) + " exceeds bound " +
                          std::to_string(card_bound));
    tw.q1 = tw.card - 1;
    tw.qs1 = ipow(q, tw.s) - 1;
    if (tw.q1 % tw.qs1 != 0) throw semantic_error("internal: subfield order does not divide");
    tw.nu = tw.q1 / tw.qs1;
    if (tw.nu % p != 0) throw semantic_error("internal: p does not divide nu");
    if (tw.q1 % p != 0) throw semantic_error("internal: p does not divide the group order");

    std::mt19937_64 rng(seed ^ 0x6b756d6d65725fULL);
    tw.field = make_field(ell, tw.d, rng);

    const auto factors = prime_factors(tw.q1);
    std::uniform_int_distribution<std::uint32_t> coeff(0, ell - 1);
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 20000) throw semantic_error("no multiplicative generator found");
        SmallField::El cand(tw.d);
        for (auto& c : cand) c = coeff(rng);
        if (tw.field.is_zero(cand)) continue;
        bool ok = true;
        for (const auto r : factors)
            if (tw.field.is_one(tw.field.pow(cand, tw.q1 / r))) {
                ok = false;
                break;
            }
        if (ok) {
            tw.gen = std::move(cand);
            break;
        }
    }
    tw.xi_p = tw.field.pow(tw.gen, tw.q1 / p);
    if (tw.field.is_one(tw.xi_p)) throw semantic_error("internal: xi_p is trivial");
    return tw;
}

std::vector<std::uint32_t> index_values(const KummerTower& tw) {
    const auto& f = tw.field;
    std::vector<SmallField::El> xi_pow{f.one()};
    for (std::uint32_t k = 1; k < tw.p; ++k) xi_pow.push_back(f.mul(xi_pow.back(), tw.xi_p));

    // changing the p-th root multiplies it by a p-th root of unity, which the
    // Frobenius ratio cannot see; this is the exponent-level statement
    if ((tw.q1 / tw.p) % tw.q1 * (tw.qs1 % tw.q1) % tw.q1 != 0)
        throw semantic_error("internal: index depends on the chosen root");

    std::vector<std::uint32_t> out;
    for (std::uint32_t cls = 0; cls < tw.p; ++cls) {
        const std::uint64_t na = std::uint64_t(cls) * tw.nu % tw.q1;
        if (na % tw.p != 0) throw semantic_error("internal: class exponent not divisible by p");
        const std::uint64_t b = na / tw.p;
        const std::uint64_t c = b % tw.q1 * (tw.qs1 % tw.q1) % tw.q1;
        if (c % (tw.q1 / tw.p) != 0)
            throw semantic_error("internal: Frobenius ratio is not a p-th root of unity");
        const std::uint32_t kappa = std::uint32_t(c / (tw.q1 / tw.p) % tw.p);

        // same computation on actual field elements against the pinned root
        const SmallField::El y = f.pow(tw.gen, b);
        const SmallField::El z = f.pow(y, tw.qs1);
        std::uint32_t found = tw.p;
        for (std::uint32_t k = 0; k < tw.p; ++k)
            if (z == xi_pow[k]) {
                found = k;
                break;
            }
        if (found == tw.p)
            throw semantic_error("internal: Frobenius ratio missed every power of xi_p");
        if (found != kappa)
            throw semantic_error("internal: exponent and field computations disagree");

        const SmallField::El z2 = f.pow(f.mul(y, tw.xi_p), tw.qs1);
        if (z2 != z) throw semantic_error("internal: index depends on the chosen root");
        out.push_back(kappa);
    }
    return out;
}

std::vector<std::uint32_t> index_values_via_generator(const KummerTower& tw,
                                                      std::uint64_t seed) {
    const auto& f = tw.field;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x67656e32ULL);
    std::uniform_int_distribution<std::uint64_t> pick(1, tw.q1 - 1);
    std::uint64_t w = 1;
    do {
        w = pick(rng);
    } while (std::gcd(w, tw.q1) != 1);
    const SmallField::El g2 = f.pow(tw.gen, w);

    std::vector<SmallField::El> xi_pow{f.one()};
    for (std::uint32_t k = 1; k < tw.p; ++k) xi_pow.push_back(f.mul(xi_pow.back(), tw.xi_p));

    std::vector<std::uint32_t> out;
    for (std::uint32_t cls = 0; cls < tw.p; ++cls) {
        const SmallField::El x = f.pow(tw.gen, std::uint64_t(cls) * tw.nu % tw.q1);
        const std::uint64_t m2 = discrete_log(f, g2, x, tw.q1);
        if (m2 % tw.p != 0)
            throw semantic_error("internal: discrete log not divisible by p");
        const SmallField::El y2 = f.pow(g2, m2 / tw.p);
        const SmallField::El z2 = f.pow(y2, tw.qs1);
        std::uint32_t found = tw.p;
        for (std::uint32_t k = 0; k < tw.p; ++k)
            if (z2 == xi_pow[k]) {
                found = k;
                break;
            }
        if (found == tw.p)
            throw semantic_error("internal: Frobenius ratio missed every power of xi_p");
        out.push_back(found);
    }
    return out;
}

IndexedModule kummer_module(const KummerTower& tw) {
    GroupRingContext ctx(tw.p, tw.n);
    FpMatrix sigma = FpMatrix::identity(tw.p, 1);
    FpMatrix eps(tw.p, 1, 1);
    eps.set(0, 0, tw.t % tw.p);
    EpsilonStructure es(eps, tw.s, tw.t % tw.p);
    GModule gm(ctx, sigma, es);
    return IndexedModule{std::move(gm), FpVector{1}};
}

KummerReport end_to_end_check(const KummerTower& tw, std::uint64_t seed) {
    KummerReport rep;
    rep.q = tw.q;
    rep.p = tw.p;
    rep.n = tw.n;
    rep.ell = tw.ell;
    rep.a = tw.a;
    rep.s = tw.s;
    rep.t = tw.t;
    rep.d = tw.d;
    rep.card = tw.card;

    rep.e_values = index_values(tw);
    const auto via2 = index_values_via_generator(tw, seed);
    if (via2 != rep.e_values)
        throw semantic_error("index values changed with the generator");
    if (rep.e_values[0] != 0) throw semantic_error("index of the trivial class is nonzero");
    if (tw.p > 1 && rep.e_values.size() > 1) {
        if (rep.e_values[1] == 0) throw semantic_error("index of the generator class vanishes");
        for (std::uint32_t cls = 0; cls < tw.p; ++cls)
            if (rep.e_values[cls] != std::uint64_t(cls) * rep.e_values[1] % tw.p)
                throw semantic_error("index values are not linear in the class");
    }

    IndexedModule im = kummer_module(tw);
    const auto violations = check_axioms(im);
    if (!violations.empty()) throw semantic_error("module axioms fail: " + violations[0].what);
    rep.dim_j = static_cast<std::uint32_t>(im.module.dim());

    rep.degenerate = true;
    for (const auto& v : annihilator_basis(im))
        if (vec_dot(tw.p, im.e, v) != 0) rep.degenerate = false;
    if (rep.degenerate) throw semantic_error("index vanishes on the annihilator line");

    rep.decomposed = !(tw.p == 2 && tw.n == 1);
    if (rep.decomposed) {
        const auto dec = decompose_jepsilon(im);
        if (dec.r != r_minus_infinity)
            throw semantic_error("free part detected in a rank one module");
        if (!dec.v_summands.empty())
            throw semantic_error("unexpected extra summands in a rank one module");
        if (dec.u_value == 0) throw semantic_error("index vanishes on the distinguished summand");
        rep.r = dec.r;
    }
    return rep;
}

}  // namespace fpg
