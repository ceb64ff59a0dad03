#include "fpg/pgroups.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace fpg {

namespace {

// Test hook for the mutation smoke test: flips the sign of the extension
// cocycle so the defining relation of the group fails for e != 0, p odd.
bool fault_cocycle_sign() {
#ifdef FPG_FAULT_COCYCLE_SIGN
    return true;
#else
    static const bool enabled = [] {
        const char* v = std::getenv("FPG_FAULT_COCYCLE_SIGN");
        return v != nullptr && *v != '\0' && std::string(v) != "0";
    }();
    return enabled;
#endif
}

}  // namespace

GroupInvariants predicted_invariants(std::uint32_t p, std::uint32_t n, std::uint32_t j,
                                     std::uint32_t e) {
    e %= p;
    const std::uint64_t pn = ipow(p, n);
    GroupInvariants inv;
    inv.order = ipow(p, j + n);
    inv.exponent = (j < pn && e == 0) ? pn : pn * p;
    inv.nilpotency_class = j;
    inv.rank = (j == 1 && e != 0) ? 1 : 2;
    inv.frattini_order = (j == 1 && e != 0) ? pn : ipow(p, j + n - 2);
    return inv;
}

MetacyclicPGroup::MetacyclicPGroup(std::uint32_t p, std::uint32_t n, std::uint32_t j,
                                   std::uint32_t e, std::uint64_t bound)
    : p_(p), n_(n), j_(j), e_(e % p) {
    if (!is_prime(p)) throw semantic_error("group parameter p must be prime");
    if (n < 1) throw semantic_error("group parameter n must be at least 1");
    pn_ = ipow(p, n);
    if (j < 1 || j > pn_) throw semantic_error("group parameter j must lie in [1, p^n]");
    if (j > 32) throw bound_error("module length j too large for element encoding");
    order_ = ipow(p, j + n);
    if (order_ > bound)
        throw bound_error("group order " + std::to_string(order_) + " exceeds bound " +
                          std::to_string(bound));
    cocycle_ = fault_cocycle_sign() ? (p_ - e_) % p_ : e_;

    // sigma^k on M_j for every k < p^n; sigma adds rho to each rho-power
    sigma_pow_.assign(pn_, std::vector<std::uint32_t>(std::size_t(j_) * j_, 0));
    for (std::uint32_t t = 0; t < j_; ++t) sigma_pow_[0][std::size_t(t) * j_ + t] = 1;
    for (std::uint64_t k = 1; k < pn_; ++k) {
        const auto& prev = sigma_pow_[k - 1];
        auto& cur = sigma_pow_[k];
        for (std::uint32_t r = 0; r < j_; ++r) {
            for (std::uint32_t t = 0; t < j_; ++t) {
                // row r of sigma * prev: sigma has 1 at (r,r) and (r, r-1)
                std::uint64_t acc = prev[std::size_t(r) * j_ + t];
                if (r > 0) acc += prev[std::size_t(r - 1) * j_ + t];
                cur[std::size_t(r) * j_ + t] = static_cast<std::uint32_t>(acc % p_);
            }
        }
    }
}

MetacyclicPGroup::Elem MetacyclicPGroup::rho_power_elem(std::uint32_t t) const {
    if (t >= j_) throw semantic_error("rho power outside M_j");
    FpVector m(j_, 0);
    m[t] = 1;
    return encode(m, 0);
}

MetacyclicPGroup::Elem MetacyclicPGroup::encode(const FpVector& m, std::uint64_t k) const {
    if (m.size() != j_) throw shape_error("module coordinate length must be j");
    std::uint64_t idx = 0;
    for (std::uint32_t t = j_; t-- > 0;) idx = idx * p_ + m[t] % p_;
    return (k % pn_) + pn_ * idx;
}

std::pair<FpVector, std::uint64_t> MetacyclicPGroup::decode(Elem x) const {
    const std::uint64_t k = x % pn_;
    std::uint64_t rest = x / pn_;
    FpVector m(j_);
    for (std::uint32_t t = 0; t < j_; ++t) {
        m[t] = static_cast<std::uint32_t>(rest % p_);
        rest /= p_;
    }
    return {std::move(m), k};
}

void MetacyclicPGroup::apply_sigma_pow(std::uint64_t k, const std::uint32_t* m,
                                       std::uint32_t* out) const {
    const auto& s = sigma_pow_[k];
    for (std::uint32_t r = 0; r < j_; ++r) {
        std::uint64_t acc = 0;
        for (std::uint32_t t = 0; t < j_; ++t) acc += std::uint64_t(s[std::size_t(r) * j_ + t]) * m[t];
        out[r] = static_cast<std::uint32_t>(acc % p_);
    }
}

MetacyclicPGroup::Elem MetacyclicPGroup::mul(Elem a, Elem b) const {
    const std::uint64_t k1 = a % pn_;
    const std::uint64_t k2 = b % pn_;
    std::uint32_t m1[32], m2[32], sm2[32];
    std::uint64_t rest = a / pn_;
    for (std::uint32_t t = 0; t < j_; ++t) {
        m1[t] = static_cast<std::uint32_t>(rest % p_);
        rest /= p_;
    }
    rest = b / pn_;
    for (std::uint32_t t = 0; t < j_; ++t) {
        m2[t] = static_cast<std::uint32_t>(rest % p_);
        rest /= p_;
    }
    apply_sigma_pow(k1, m2, sm2);
    std::uint64_t k = k1 + k2;
    std::uint32_t carry = 0;
    if (k >= pn_) {
        k -= pn_;
        carry = cocycle_;
    }
    std::uint64_t idx = 0;
    for (std::uint32_t t = j_; t-- > 0;) {
        std::uint32_t v = (m1[t] + sm2[t]) % p_;
        if (carry && t == j_ - 1) v = (v + carry) % p_;
        idx = idx * p_ + v;
    }
    return k + pn_ * idx;
}

MetacyclicPGroup::Elem MetacyclicPGroup::inv(Elem a) const {
    auto [m, k] = decode(a);
    if (k == 0) {
        for (auto& x : m) x = (p_ - x) % p_;
        return encode(m, 0);
    }
    // (m,k)(m',p^n - k) carries, so m' = sigma^(p^n - k) applied to -(m + e u)
    m[j_ - 1] = (m[j_ - 1] + cocycle_) % p_;
    for (auto& x : m) x = (p_ - x) % p_;
    std::uint32_t out[32];
    apply_sigma_pow(pn_ - k, m.data(), out);
    FpVector mv(out, out + j_);
    return encode(mv, pn_ - k);
}

MetacyclicPGroup::Elem MetacyclicPGroup::power(Elem a, std::uint64_t k) const {
    Elem r = identity();
    Elem b = a;
    while (k) {
        if (k & 1) r = mul(r, b);
        b = mul(b, b);
        k >>= 1;
    }
    return r;
}

MetacyclicPGroup::Elem MetacyclicPGroup::commutator(Elem a, Elem b) const {
    return mul(mul(inv(a), inv(b)), mul(a, b));
}

MetacyclicPGroup::Elem MetacyclicPGroup::conjugate(Elem x, Elem g) const {
    return mul(mul(inv(g), x), g);
}

std::uint64_t MetacyclicPGroup::element_order(Elem a) const {
    std::uint64_t ord = 1;
    Elem y = a;
    while (y != identity()) {
        y = power(y, p_);
        ord *= p_;
        if (ord > order_) throw semantic_error("internal: element order exceeds group order");
    }
    return ord;
}

std::uint64_t MetacyclicPGroup::exponent() const {
    std::uint64_t best = 1;
    for (Elem x = 0; x < order_; ++x) best = std::max(best, element_order(x));
    return best;
}

std::vector<MetacyclicPGroup::Elem> MetacyclicPGroup::generating_pair() const {
    return {sigma_tilde(), unit_of_m()};
}

std::unordered_set<MetacyclicPGroup::Elem> MetacyclicPGroup::subgroup_closure(
    const std::vector<Elem>& gens) const {
    std::unordered_set<Elem> seen{identity()};
    std::vector<Elem> queue{identity()};
    while (!queue.empty()) {
        const Elem x = queue.back();
        queue.pop_back();
        for (const Elem g : gens) {
            const Elem y = mul(x, g);
            if (seen.insert(y).second) queue.push_back(y);
        }
    }
    return seen;
}

MetacyclicPGroup::NormalSubgroup MetacyclicPGroup::normal_closure(
    const std::vector<Elem>& gens) const {
    std::vector<Elem> genset;
    for (const Elem g : gens)
        if (g != identity() && std::find(genset.begin(), genset.end(), g) == genset.end())
            genset.push_back(g);
    const std::vector<Elem> outer = generating_pair();
    std::unordered_set<Elem> closure = subgroup_closure(genset);
    bool grew = true;
    while (grew) {
        grew = false;
        const std::size_t count = genset.size();
        for (std::size_t idx = 0; idx < count; ++idx) {
            for (const Elem g : outer) {
                const Elem c = conjugate(genset[idx], g);
                if (!closure.count(c)) {
                    genset.push_back(c);
                    grew = true;
                }
            }
        }
        if (grew) closure = subgroup_closure(genset);
    }
    return {std::move(closure), std::move(genset)};
}

std::vector<std::unordered_set<MetacyclicPGroup::Elem>> MetacyclicPGroup::lower_central_series()
    const {
    std::vector<std::unordered_set<Elem>> series;
    series.push_back(subgroup_closure(generating_pair()));
    std::vector<Elem> gens = generating_pair();
    const std::vector<Elem> outer = generating_pair();
    while (series.back().size() > 1) {
        std::vector<Elem> comms;
        for (const Elem x : gens)
            for (const Elem g : outer) comms.push_back(commutator(x, g));
        NormalSubgroup next = normal_closure(comms);
        gens = next.generators;
        series.push_back(std::move(next.elements));
    }
    return series;
}

std::uint32_t MetacyclicPGroup::nilpotency_class() const {
    std::vector<Elem> gens = generating_pair();
    const std::vector<Elem> outer = generating_pair();
    std::uint32_t k = 1;
    while (true) {
        std::vector<Elem> comms;
        for (const Elem x : gens)
            for (const Elem g : outer) comms.push_back(commutator(x, g));
        NormalSubgroup next = normal_closure(comms);
        if (next.elements.size() == 1) return k;
        gens = next.generators;
        ++k;
        if (k > 64) throw semantic_error("internal: lower central series does not terminate");
    }
}

std::unordered_set<MetacyclicPGroup::Elem> MetacyclicPGroup::frattini_subgroup() const {
    const std::vector<Elem> outer = generating_pair();
    std::vector<Elem> comms;
    for (const Elem x : outer)
        for (const Elem g : outer) comms.push_back(commutator(x, g));
    NormalSubgroup derived = normal_closure(comms);
    std::vector<Elem> gens = derived.generators;
    for (const Elem g : outer) gens.push_back(power(g, p_));
    return subgroup_closure(gens);
}

std::uint32_t MetacyclicPGroup::rank() const {
    const std::uint64_t phi = frattini_subgroup().size();
    if (phi == 0 || order_ % phi != 0) throw semantic_error("internal: Frattini size does not divide order");
    std::uint64_t q = order_ / phi;
    std::uint32_t r = 0;
    while (q % p_ == 0) {
        q /= p_;
        ++r;
    }
    if (q != 1) throw semantic_error("internal: Frattini index is not a p power");
    return r;
}

GroupInvariants MetacyclicPGroup::invariants() const {
    using Key = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t,
                           std::uint32_t>;
    static std::map<Key, GroupInvariants> cache;
    const Key key{p_, n_, j_, e_, cocycle_};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    GroupInvariants inv;
    inv.order = order_;
    inv.exponent = exponent();
    inv.nilpotency_class = nilpotency_class();
    const std::uint64_t phi = frattini_subgroup().size();
    inv.frattini_order = phi;
    inv.rank = rank();
    cache.emplace(key, inv);
    return inv;
}

bool MetacyclicPGroup::is_central(Elem x) const {
    for (Elem g = 0; g < order_; ++g)
        if (mul(x, g) != mul(g, x)) return false;
    return true;
}

MetacyclicPGroup MetacyclicPGroup::quotient_group(std::uint32_t j_target,
                                                  std::uint64_t bound) const {
    if (j_target < 1 || j_target > j_)
        throw semantic_error("quotient target length must lie in [1, j]");
    const std::uint32_t e_target = (j_target == j_) ? e_ : 0;
    return MetacyclicPGroup(p_, n_, j_target, e_target, bound);
}

MetacyclicPGroup::Elem MetacyclicPGroup::project(Elem x, const MetacyclicPGroup& target) const {
    if (target.p_ != p_ || target.n_ != n_ || target.j_ > j_)
        throw semantic_error("projection target is not a quotient of this group");
    auto [m, k] = decode(x);
    FpVector mt(m.begin(), m.begin() + target.j_);
    return target.encode(mt, k);
}

CayleyTable MetacyclicPGroup::cayley_table(std::uint64_t bound) const {
    if (order_ > bound)
        throw bound_error("order " + std::to_string(order_) + " too large for a full table");
    CayleyTable t;
    t.p = p_;
    t.n = n_;
    t.j = j_;
    t.e = e_;
    t.order = order_;
    t.tab.resize(order_ * order_);
    for (Elem a = 0; a < order_; ++a)
        for (Elem b = 0; b < order_; ++b)
            t.tab[a * order_ + b] = static_cast<std::uint32_t>(mul(a, b));
    return t;
}

std::string MetacyclicPGroup::export_table(std::uint64_t bound) const {
    const CayleyTable t = cayley_table(bound);
    std::ostringstream out;
    out << t.p << " " << t.n << " " << t.j << " " << t.e << "\n" << t.order << "\n";
    for (std::uint64_t a = 0; a < t.order; ++a) {
        for (std::uint64_t b = 0; b < t.order; ++b) {
            if (b) out << " ";
            out << t.tab[a * t.order + b];
        }
        out << "\n";
    }
    return out.str();
}

std::string MetacyclicPGroup::export_pc() const {
    // generators: a = (0, 1), b_t = (rho^t, 0)
    std::ostringstream out;
    out << "group p=" << p_ << " n=" << n_ << " j=" << j_ << " e=" << e_ << "\n";
    out << "generators a";
    for (std::uint32_t t = 0; t < j_; ++t) out << " b" << t;
    out << "\n";
    out << "a^" << pn_ << " = ";
    if (e_ == 0)
        out << "1";
    else
        out << "b" << (j_ - 1) << "^" << e_;
    out << "\n";
    for (std::uint32_t t = 0; t < j_; ++t) out << "b" << t << "^" << p_ << " = 1\n";
    for (std::uint32_t t = 0; t < j_; ++t)
        for (std::uint32_t u = t + 1; u < j_; ++u)
            out << "[b" << t << ", b" << u << "] = 1\n";
    for (std::uint32_t t = 0; t < j_; ++t) {
        out << "a b" << t << " a^-1 = b" << t;
        if (t + 1 < j_) out << " b" << (t + 1);
        out << "\n";
    }
    return out.str();
}

MetacyclicPGroup make_group(std::uint32_t p, std::uint32_t n, std::uint32_t j,
                            std::uint32_t e, std::uint64_t bound) {
    return MetacyclicPGroup(p, n, j, e, bound);
}

GroupInvariants invariants(const MetacyclicPGroup& g) { return g.invariants(); }

MetacyclicPGroup quotient_to(const MetacyclicPGroup& g, std::uint32_t j_target,
                             std::uint64_t bound) {
    return g.quotient_group(j_target, bound);
}

std::string export_group(const MetacyclicPGroup& g, const std::string& format,
                         std::uint64_t bound) {
    if (format == "table") return g.export_table(bound);
    if (format == "pc") return g.export_pc();
    throw semantic_error("unknown export format '" + format + "' (use table or pc)");
}

std::string export_table(const MetacyclicPGroup& g, std::uint64_t bound) {
    return g.export_table(bound);
}

std::optional<std::vector<std::uint32_t>> brute_isomorphic(const MetacyclicPGroup& a,
                                                           const MetacyclicPGroup& b,
                                                           std::uint64_t bound) {
    if (a.order() != b.order()) return std::nullopt;
    if (a.order() > bound)
        throw bound_error("isomorphism search capped at order " + std::to_string(bound));
    return brute_isomorphic(a.cayley_table(bound), b.cayley_table(bound), bound);
}

CayleyTable parse_table(const std::string& text) {
    std::istringstream in(text);
    CayleyTable t;
    if (!(in >> t.p >> t.n >> t.j >> t.e)) throw parse_error("table header malformed");
    if (!(in >> t.order) || t.order == 0) throw parse_error("table order malformed");
    if (t.order > 4096) throw bound_error("parsed table order too large");
    t.tab.resize(t.order * t.order);
    for (auto& cell : t.tab) {
        std::int64_t v;
        if (!(in >> v)) throw parse_error("table body truncated");
        if (v < 0 || static_cast<std::uint64_t>(v) >= t.order)
            throw parse_error("table entry out of range");
        cell = static_cast<std::uint32_t>(v);
    }
    std::string extra;
    if (in >> extra) throw parse_error("trailing data after table");
    return t;
}

namespace {

std::uint64_t table_identity(const CayleyTable& t) {
    for (std::uint64_t i = 0; i < t.order; ++i) {
        bool ok = true;
        for (std::uint64_t x = 0; x < t.order && ok; ++x)
            if (t.at(i, x) != x || t.at(x, i) != x) ok = false;
        if (ok) return i;
    }
    throw semantic_error("table has no identity element");
}

std::vector<std::uint64_t> table_orders(const CayleyTable& t, std::uint64_t id) {
    std::vector<std::uint64_t> ord(t.order, 0);
    for (std::uint64_t x = 0; x < t.order; ++x) {
        std::uint64_t k = 1;
        std::uint64_t y = x;
        while (y != id) {
            y = t.at(y, x);
            ++k;
            if (k > t.order) throw semantic_error("table is not a group (element order overflow)");
        }
        ord[x] = k;
    }
    return ord;
}

bool table_pair_generates(const CayleyTable& t, std::uint64_t id, std::uint64_t x,
                          std::uint64_t y) {
    std::vector<char> seen(t.order, 0);
    seen[id] = 1;
    std::vector<std::uint64_t> queue{id};
    std::size_t count = 1;
    while (!queue.empty()) {
        const std::uint64_t a = queue.back();
        queue.pop_back();
        for (const std::uint64_t g : {x, y}) {
            const std::uint64_t b = t.at(a, g);
            if (!seen[b]) {
                seen[b] = 1;
                ++count;
                queue.push_back(b);
            }
        }
    }
    return count == t.order;
}

}  // namespace

std::optional<std::vector<std::uint32_t>> brute_isomorphic(const CayleyTable& a,
                                                           const CayleyTable& b,
                                                           std::uint64_t bound) {
    if (a.order != b.order) return std::nullopt;
    if (a.order > bound) throw bound_error("isomorphism search capped at order " +
                                           std::to_string(bound));
    const std::uint64_t ida = table_identity(a);
    const std::uint64_t idb = table_identity(b);
    const auto orda = table_orders(a, ida);
    const auto ordb = table_orders(b, idb);
    {
        auto sa = orda, sb = ordb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return std::nullopt;
    }

    // one generating pair of a is enough; images range over b
    std::uint64_t x1 = 0, x2 = 0;
    bool have_pair = false;
    for (std::uint64_t x = 0; x < a.order && !have_pair; ++x)
        for (std::uint64_t y = 0; y < a.order && !have_pair; ++y)
            if (table_pair_generates(a, ida, x, y)) {
                x1 = x;
                x2 = y;
                have_pair = true;
            }
    if (!have_pair) throw semantic_error("left table is not generated by any pair");

    const std::uint32_t unset = static_cast<std::uint32_t>(b.order);
    for (std::uint64_t y1 = 0; y1 < b.order; ++y1) {
        if (ordb[y1] != orda[x1]) continue;
        for (std::uint64_t y2 = 0; y2 < b.order; ++y2) {
            if (ordb[y2] != orda[x2]) continue;
            std::vector<std::uint32_t> phi(a.order, unset);
            phi[ida] = static_cast<std::uint32_t>(idb);
            std::vector<std::uint64_t> queue{ida};
            bool ok = true;
            while (!queue.empty() && ok) {
                const std::uint64_t u = queue.back();
                queue.pop_back();
                const std::pair<std::uint64_t, std::uint64_t> steps[2] = {{x1, y1}, {x2, y2}};
                for (const auto& [g, gi] : steps) {
                    const std::uint64_t v = a.at(u, g);
                    const std::uint32_t vi = b.at(phi[u], gi);
                    if (phi[v] == unset) {
                        phi[v] = vi;
                        queue.push_back(v);
                    } else if (phi[v] != vi) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;
            std::vector<char> hit(b.order, 0);
            for (std::uint64_t u = 0; u < a.order && ok; ++u) {
                if (phi[u] == unset || hit[phi[u]]) ok = false;
                else hit[phi[u]] = 1;
            }
            if (!ok) continue;
            for (std::uint64_t u = 0; u < a.order && ok; ++u)
                for (std::uint64_t v = 0; v < a.order && ok; ++v)
                    if (phi[a.at(u, v)] != b.at(phi[u], phi[v])) ok = false;
            if (ok) return phi;
        }
    }
    return std::nullopt;
}

std::vector<WittLink> witt_chain(std::uint32_t p, std::uint32_t n, std::uint32_t i,
                                 std::uint64_t c, std::uint64_t bound) {
    if (!is_prime(p)) throw semantic_error("p must be prime");
    if (n < 2 || i < 1 || i >= n) throw semantic_error("need 1 <= i < n");
    const std::uint64_t lo = ipow(p, i);
    const std::uint64_t hi = ipow(p, i + 1);
    if (c < 1 || c > hi - lo)
        throw semantic_error("offset c must lie in [1, p^(i+1) - p^i]");
    std::vector<WittLink> chain;
    if (lo + c == hi) return chain;  // boundary value: nothing to connect

    const std::uint64_t top_order = ipow(p, static_cast<std::uint32_t>(hi) + n);
    if (top_order > bound)
        throw bound_error("chain top order " + std::to_string(top_order) + " exceeds bound " +
                          std::to_string(bound));

    std::mt19937_64 rng(0x77697474u);
    for (std::uint64_t jb = lo + c; jb < hi; ++jb) {
        const auto j_bottom = static_cast<std::uint32_t>(jb);
        MetacyclicPGroup top(p, n, j_bottom + 1, 0, bound);
        MetacyclicPGroup bottom(p, n, j_bottom, 0, bound);

        WittLink link;
        link.j_bottom = j_bottom;

        // kernel of the projection, counted by full enumeration
        std::uint64_t kernel_count = 0;
        bool central = true;
        for (MetacyclicPGroup::Elem x = 0; x < top.order(); ++x) {
            if (top.project(x, bottom) == bottom.identity()) {
                ++kernel_count;
                if (central && !top.is_central(x)) central = false;
            }
        }
        link.kernel_order = kernel_count;
        link.kernel_central = central;

        // spot-check that the projection is a homomorphism
        std::uniform_int_distribution<std::uint64_t> pick(0, top.order() - 1);
        for (int trial = 0; trial < 256; ++trial) {
            const auto x = pick(rng), y = pick(rng);
            if (top.project(top.mul(x, y), bottom) !=
                bottom.mul(top.project(x, bottom), top.project(y, bottom)))
                throw semantic_error("internal: quotient projection is not a homomorphism");
        }

        link.rank_top = top.rank();
        link.rank_bottom = bottom.rank();

        if (top.order() <= 128) {
            std::vector<MetacyclicPGroup::Elem> kernel;
            for (MetacyclicPGroup::Elem x = 0; x < top.order(); ++x)
                if (top.project(x, bottom) == bottom.identity()) kernel.push_back(x);
            bool found = false;
            const std::uint64_t want = top.order() / p;
            for (MetacyclicPGroup::Elem x = 0; x < top.order() && !found; ++x) {
                for (MetacyclicPGroup::Elem y = 0; y < top.order() && !found; ++y) {
                    const auto sub = top.subgroup_closure({x, y});
                    if (sub.size() != want) continue;
                    bool meets = false;
                    for (const auto k : kernel)
                        if (k != top.identity() && sub.count(k)) { meets = true; break; }
                    if (!meets) found = true;
                }
            }
            link.complement_exists = found;
        }
        chain.push_back(std::move(link));
    }
    return chain;
}

}  // namespace fpg
