#include "fpg/indexed_module.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace fpg {

namespace {

std::string vec_brief(const FpVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

// len = p^k exactly, or no value.
std::optional<std::uint32_t> p_log(std::uint32_t p, std::size_t len) {
    std::uint32_t k = 0;
    std::size_t x = len;
    while (x % p == 0) {
        x /= p;
        ++k;
    }
    if (x != 1) return std::nullopt;
    return k;
}

}  // namespace

std::vector<AxiomViolation> check_axioms(const IndexedModule& im) {
    const auto& m = im.module;
    const std::uint32_t p = m.ctx().p;
    if (im.e.size() != m.dim()) throw shape_error("functional length differs from module dimension");
    std::vector<AxiomViolation> out;
    const FpMatrix r = m.rho();
    for (std::size_t k = 0; k < m.dim(); ++k) {
        FpVector ek(m.dim(), 0);
        ek[k] = 1;
        if (m.epsilon()) {
            const FpVector img = m.epsilon()->matrix.apply(ek);
            if (img != vec_scaled(p, ek, m.epsilon()->t))
                out.push_back({"epsilon is not the scalar t on basis vector " + std::to_string(k),
                               img});
        }
        const FpVector w = r.apply(ek);
        if (vec_dot(p, im.e, w) != 0)
            out.push_back({"functional does not vanish on rho * basis vector " + std::to_string(k) +
                               " = " + vec_brief(w),
                           w});
    }
    return out;
}

std::vector<FpVector> annihilator_basis(const IndexedModule& im) {
    const auto& m = im.module;
    return m.rho().pow(m.ctx().order - 1).kernel_basis();
}

IndexedModule generate_synthetic(std::uint32_t p, std::uint32_t n, int r,
                                 const std::vector<std::uint32_t>& profile,
                                 std::uint64_t seed, std::uint64_t bound) {
    GroupRingContext ctx(p, n, bound);
    if (p == 2 && n == 1)
        throw precondition_error("p = 2, n = 1 has no valid shapes and is not supported");
    if (r != r_minus_infinity && (r < 0 || static_cast<std::uint32_t>(r) >= n))
        throw precondition_error("r must be -1 (meaning minus infinity) or lie in [0, n)");
    for (auto i : profile)
        if (i > n) throw precondition_error("profile exponent exceeds n");

    struct Block {
        std::size_t len;
        bool is_u;
    };
    std::vector<Block> blocks;
    const std::size_t len_u = (r == r_minus_infinity) ? 1 : static_cast<std::size_t>(ipow(p, r)) + 1;
    blocks.push_back({len_u, true});
    for (auto i : profile) blocks.push_back({static_cast<std::size_t>(ipow(p, i)), false});
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const Block& a, const Block& b) { return a.len > b.len; });

    std::size_t dim = 0;
    JordanType type;
    for (const auto& b : blocks) {
        type.push_back(b.len);
        dim += b.len;
    }
    if (dim > bound) throw bound_error("total dimension exceeds bound");

    const FpMatrix sigma0 = blockdiag_sigma(p, type);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> unit(1, p - 1);
    std::uniform_int_distribution<std::uint32_t> any(0, p - 1);

    FpVector e0(dim, 0);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        if (b.is_u) {
            e0[off] = unit(rng);
        } else {
            const auto i = *p_log(p, b.len);
            const bool forced_zero = (r != r_minus_infinity && static_cast<int>(i) <= r);
            if (!forced_zero) e0[off] = any(rng);
        }
        off += b.len;
    }

    // Random module automorphism phi. A hom between cyclic summands sends
    // the source generator to sum_d c_d rho^d g_target with d at least
    // len_target - len_source, and commutes with rho, which pins the rest.
    FpMatrix phi(p, dim, dim);
    for (int attempt = 0; attempt < 64; ++attempt) {
        phi = FpMatrix(p, dim, dim);
        std::size_t src_off = 0;
        for (const auto& src : blocks) {
            std::size_t dst_off = 0;
            for (const auto& dst : blocks) {
                const std::size_t dmin = dst.len > src.len ? dst.len - src.len : 0;
                for (std::size_t d = dmin; d < dst.len; ++d) {
                    const std::uint32_t c = any(rng);
                    if (c == 0) continue;
                    for (std::size_t k = 0; k + d < dst.len && k < src.len; ++k) {
                        const std::size_t row = dst_off + d + k;
                        const std::size_t col = src_off + k;
                        phi.set(row, col, (phi.at(row, col) + c) % p);
                    }
                }
                dst_off += dst.len;
            }
            src_off += src.len;
        }
        if (phi.rank() == dim) break;
        if (attempt == 63) throw semantic_error("internal: no invertible automorphism found");
    }

    const FpVector e1 = phi.apply_transposed(e0);  // e1(x) = e0(phi x)
    EpsilonStructure eps(FpMatrix::identity(p, dim), 1, 1);
    return IndexedModule{GModule(ctx, sigma0, std::move(eps)), e1};
}

const char* realization_case_name(RealizationCase c) {
    switch (c) {
        case RealizationCase::full_ring: return "full-ring";
        case RealizationCase::correction: return "correction";
        case RealizationCase::exceptional: return "exceptional";
    }
    return "unknown";
}

JepsilonDecomposition decompose_jepsilon(const IndexedModule& im) {
    const auto& m = im.module;
    const std::uint32_t p = m.ctx().p;
    const std::size_t pn = m.ctx().order;
    if (im.e.size() != m.dim()) throw shape_error("functional length differs from module dimension");

    Decomposition dec = decompose(m);

    bool seen = false;
    for (const auto& v : annihilator_basis(im))
        if (vec_dot(p, im.e, v) != 0) seen = true;
    if (!seen)
        throw degenerate_error("the functional vanishes on the whole annihilator submodule");

    // Distinguished summand: shortest generator the functional sees, among
    // summands short enough to sit inside the annihilator.
    std::size_t u_idx = dec.type.size();
    for (std::size_t idx = 0; idx < dec.type.size(); ++idx) {
        if (dec.type[idx] >= pn) continue;
        if (vec_dot(p, im.e, dec.generators[idx]) == 0) continue;
        if (u_idx == dec.type.size() || dec.type[idx] < dec.type[u_idx]) u_idx = idx;
    }
    if (u_idx == dec.type.size())
        throw semantic_error(
            "the functional vanishes on every summand generator but not on the annihilator, "
            "so it cannot kill rho J");

    const std::size_t len_u = dec.type[u_idx];
    int r = r_minus_infinity;
    if (len_u > 1) {
        const auto k = p_log(p, static_cast<std::uint32_t>(len_u - 1));
        if (!k || *k >= m.ctx().n)
            throw shape_error("distinguished summand length " + std::to_string(len_u) +
                              " is not 1 + a power of p below p^n");
        r = static_cast<int>(*k);
    }

    std::vector<std::uint32_t> v_exponents(dec.type.size(), 0);
    for (std::size_t idx = 0; idx < dec.type.size(); ++idx) {
        if (idx == u_idx) continue;
        const auto k = p_log(p, static_cast<std::uint32_t>(dec.type[idx]));
        if (!k || *k > m.ctx().n)
            throw shape_error("summand length " + std::to_string(dec.type[idx]) +
                              " is not a power of p up to p^n");
        v_exponents[idx] = *k;
    }

    const std::uint32_t eu = vec_dot(p, im.e, dec.generators[u_idx]);
    const std::uint32_t eu_inv = inv_mod(eu, p);
    std::vector<FpVector> corrected = dec.generators;
    for (std::size_t idx = 0; idx < dec.type.size(); ++idx) {
        if (idx == u_idx) continue;
        const std::uint32_t ev = vec_dot(p, im.e, dec.generators[idx]);
        if (ev == 0) continue;
        if (dec.type[idx] < len_u)
            throw minimality_error(
                "a summand shorter than the distinguished one carries a nonzero functional "
                "value; e does not kill rho J");
        const std::uint32_t c = static_cast<std::uint32_t>(std::uint64_t(ev) * eu_inv % p);
        corrected[idx] = vec_sub(p, dec.generators[idx], vec_scaled(p, dec.generators[u_idx], c));
        if (rho_height(m, corrected[idx]) != dec.type[idx])
            throw semantic_error("internal: correction changed a summand length");
    }

    // Shorter summands must not see the functional anywhere on their chain.
    const FpMatrix rho = m.rho();
    for (std::size_t idx = 0; idx < dec.type.size(); ++idx) {
        if (idx == u_idx || dec.type[idx] >= len_u) continue;
        FpVector v = corrected[idx];
        for (std::size_t k = 0; k < dec.type[idx]; ++k) {
            if (vec_dot(p, im.e, v) != 0)
                throw minimality_error(
                    "a summand shorter than the distinguished one carries a nonzero functional "
                    "value; e does not kill rho J");
            v = rho.apply(v);
        }
    }

    // Directness certificate for the corrected chains.
    IncrementalSpan span(p, m.dim());
    std::size_t total = 0;
    for (std::size_t idx = 0; idx < dec.type.size(); ++idx) {
        FpVector v = corrected[idx];
        for (std::size_t k = 0; k < dec.type[idx]; ++k) {
            if (!span.insert(v)) throw semantic_error("internal: corrected chains are dependent");
            ++total;
            v = rho.apply(v);
        }
    }
    if (total != m.dim() || span.rank() != m.dim())
        throw semantic_error("internal: corrected chains do not span the module");

    JepsilonDecomposition out;
    out.u_generator = dec.generators[u_idx];
    out.u_value = eu;
    out.r = r;
    for (std::size_t idx = 0; idx < dec.type.size(); ++idx) {
        if (idx == u_idx) continue;
        out.v_summands.push_back({corrected[idx], v_exponents[idx]});
    }
    return out;
}

RealizationWitness realize_step(const IndexedModule& im, std::uint32_t i, std::uint64_t c,
                                const FpVector& gamma) {
    const auto& m = im.module;
    const std::uint32_t p = m.ctx().p;
    const std::uint32_t n = m.ctx().n;
    if (i >= n) throw precondition_error("exponent i must lie in [0, n)");
    const std::uint64_t pi = ipow(p, i);
    const std::uint64_t limit = pi * (p - 1);  // p^(i+1) - p^i
    if (c < 1 || c >= limit)
        throw precondition_error("offset c must lie in [1, p^(i+1) - p^i)");
    if (gamma.size() != m.dim()) throw shape_error("gamma length differs from module dimension");
    const std::size_t h = rho_height(m, gamma);
    if (h != pi + c)
        throw precondition_error("gamma has height " + std::to_string(h) + ", expected p^i + c = " +
                                 std::to_string(pi + c));
    if (vec_dot(p, im.e, gamma) != 0)
        throw precondition_error("the functional must vanish on gamma");

    const JepsilonDecomposition dec = decompose_jepsilon(im);

    RealizationWitness out;
    out.target_group = "M_" + std::to_string(ipow(p, i + 1)) + " ⋊ G";

    bool found = false;
    for (const auto& v : dec.v_summands) {
        if (v.i == n) {
            out.kind = RealizationCase::full_ring;
            out.w_generator = v.generator;
            out.realized_length = m.ctx().order;
            out.realized_group = "F_p[G] ⋊ G";
            found = true;
            break;
        }
    }
    if (!found) {
        const VSummand* best = nullptr;
        for (const auto& v : dec.v_summands)
            if (v.i > i && v.i < n && (!best || v.i < best->i)) best = &v;
        if (best) {
            out.kind = RealizationCase::correction;
            out.w_generator = best->generator;
            out.realized_length = static_cast<std::size_t>(ipow(p, best->i));
            out.realized_group = "M_" + std::to_string(out.realized_length) + " ⋊ G";
            found = true;
        }
    }
    if (!found) {
        if (dec.r < static_cast<int>(i) + 1)
            throw contradiction_error(
                "no summand is long enough to absorb gamma and the distinguished summand is "
                "too short; this configuration contradicts the axioms");
        out.kind = RealizationCase::exceptional;
        out.w_generator = m.rho().apply(dec.u_generator);
        out.realized_length = static_cast<std::size_t>(ipow(p, static_cast<std::uint32_t>(dec.r)));
        out.realized_group = "M_" + std::to_string(out.realized_length) + " ⋊ G";
    }

    if (rho_height(m, out.w_generator) != out.realized_length)
        throw semantic_error("internal: realized generator has the wrong height");
    if (vec_dot(p, im.e, out.w_generator) != 0)
        throw semantic_error("internal: the functional does not vanish on the realized generator");
    return out;
}

}  // namespace fpg
