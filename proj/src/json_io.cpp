#include "fpg/json_io.hpp"

namespace fpg {

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
}

std::string dump_json(const json& v) { return v.dump(2) + "\n"; }

json matrix_to_json(const FpMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const FpVector& v) {
    json out = json::array();
    for (const auto x : v) out.push_back(x);
    return out;
}

namespace {

std::uint32_t field_u32(const json& v, const char* key) {
    if (!v.contains(key)) throw parse_error(std::string("missing field '") + key + "'");
    const auto& f = v.at(key);
    if (!f.is_number_unsigned()) throw parse_error(std::string("field '") + key +
                                                   "' must be a nonnegative integer");
    const auto raw = f.get<std::uint64_t>();
    if (raw > 0xffffffffull) throw parse_error(std::string("field '") + key + "' too large");
    return static_cast<std::uint32_t>(raw);
}

FpVector vector_from_json(const json& v, std::uint32_t p, const char* what) {
    if (!v.is_array()) throw parse_error(std::string(what) + " must be an array");
    FpVector out;
    out.reserve(v.size());
    for (const auto& entry : v) {
        if (!entry.is_number_integer())
            throw parse_error(std::string(what) + " entries must be integers");
        const auto raw = entry.get<std::int64_t>();
        const std::int64_t m = ((raw % p) + p) % p;
        out.push_back(static_cast<std::uint32_t>(m));
    }
    return out;
}

FpMatrix matrix_from_json(const json& v, std::uint32_t p, const char* what) {
    if (!v.is_array() || v.empty())
        throw parse_error(std::string(what) + " must be a nonempty array of rows");
    std::vector<FpVector> rows;
    for (const auto& row : v) rows.push_back(vector_from_json(row, p, what));
    const std::size_t width = rows[0].size();
    for (const auto& row : rows)
        if (row.size() != width)
            throw parse_error(std::string(what) + " rows have inconsistent lengths");
    return FpMatrix::from_rows(p, rows);
}

}  // namespace

json to_json(const GModule& m) {
    json out;
    out["p"] = m.ctx().p;
    out["n"] = m.ctx().n;
    out["dim"] = m.dim();
    out["sigma"] = matrix_to_json(m.sigma());
    if (m.epsilon()) {
        json eps;
        eps["matrix"] = matrix_to_json(m.epsilon()->matrix);
        eps["s"] = m.epsilon()->s;
        eps["t"] = m.epsilon()->t;
        out["epsilon"] = std::move(eps);
    }
    return out;
}

json to_json(const IndexedModule& im) {
    json out = to_json(im.module);
    out["e"] = vector_to_json(im.e);
    return out;
}

json to_json(const Decomposition& d) {
    json out;
    out["type"] = d.type;
    json gens = json::array();
    for (const auto& g : d.generators) gens.push_back(vector_to_json(g));
    out["generators"] = std::move(gens);
    out["basis_change"] = matrix_to_json(d.basis_change);
    return out;
}

json to_json(const JepsilonDecomposition& d) {
    json out;
    out["u_generator"] = vector_to_json(d.u_generator);
    out["u_value"] = d.u_value;
    if (d.r == r_minus_infinity)
        out["r"] = nullptr;
    else
        out["r"] = d.r;
    json vs = json::array();
    for (const auto& v : d.v_summands) {
        json entry;
        entry["generator"] = vector_to_json(v.generator);
        entry["i"] = v.i;
        vs.push_back(std::move(entry));
    }
    out["v_summands"] = std::move(vs);
    return out;
}

json to_json(const RealizationWitness& w) {
    json out;
    out["case"] = realization_case_name(w.kind);
    out["w_generator"] = vector_to_json(w.w_generator);
    out["realized_length"] = w.realized_length;
    out["realized_group"] = w.realized_group;
    out["target_group"] = w.target_group;
    return out;
}

json to_json(const GroupInvariants& gi) {
    json out;
    out["order"] = gi.order;
    out["exponent"] = gi.exponent;
    out["nilpotency_class"] = gi.nilpotency_class;
    out["rank"] = gi.rank;
    out["frattini_order"] = gi.frattini_order;
    return out;
}

json to_json(const WittLink& link) {
    json out;
    out["j_bottom"] = link.j_bottom;
    out["kernel_order"] = link.kernel_order;
    out["kernel_central"] = link.kernel_central;
    out["rank_top"] = link.rank_top;
    out["rank_bottom"] = link.rank_bottom;
    if (link.complement_exists)
        out["complement_exists"] = *link.complement_exists;
    else
        out["complement_exists"] = nullptr;
    return out;
}

json to_json(const std::vector<WittLink>& chain) {
    json out = json::array();
    for (const auto& link : chain) out.push_back(to_json(link));
    return out;
}

json to_json(const KummerReport& rep) {
    json out;
    out["q"] = rep.q;
    out["p"] = rep.p;
    out["n"] = rep.n;
    out["ell"] = rep.ell;
    out["a"] = rep.a;
    out["s"] = rep.s;
    out["t"] = rep.t;
    out["d"] = rep.d;
    out["card"] = rep.card;
    out["dimJ"] = rep.dim_j;
    out["degenerate"] = rep.degenerate;
    out["decomposed"] = rep.decomposed;
    if (rep.r && *rep.r != r_minus_infinity)
        out["r"] = *rep.r;
    else
        out["r"] = nullptr;
    out["e_values"] = rep.e_values;
    return out;
}

GModule gmodule_from_json(const json& v, std::uint64_t ring_bound) {
    if (!v.is_object()) throw parse_error("module document must be a JSON object");
    const std::uint32_t p = field_u32(v, "p");
    const std::uint32_t n = field_u32(v, "n");
    if (p < 2) throw parse_error("field 'p' must be at least 2");
    GroupRingContext ctx(p, n, ring_bound);
    if (!v.contains("sigma")) throw parse_error("missing field 'sigma'");
    FpMatrix sigma = matrix_from_json(v.at("sigma"), p, "sigma");
    if (v.contains("dim")) {
        const std::uint32_t dim = field_u32(v, "dim");
        if (dim != sigma.rows())
            throw parse_error("field 'dim' disagrees with the sigma matrix");
    }
    if (v.contains("epsilon")) {
        const auto& ev = v.at("epsilon");
        if (!ev.is_object()) throw parse_error("field 'epsilon' must be an object");
        if (!ev.contains("matrix")) throw parse_error("missing field 'epsilon.matrix'");
        FpMatrix em = matrix_from_json(ev.at("matrix"), p, "epsilon.matrix");
        const std::uint32_t s = field_u32(ev, "s");
        const std::uint32_t t = field_u32(ev, "t");
        return GModule(ctx, std::move(sigma), EpsilonStructure(std::move(em), s, t % p));
    }
    return GModule(ctx, std::move(sigma));
}

IndexedModule indexed_module_from_json(const json& v, std::uint64_t ring_bound) {
    GModule m = gmodule_from_json(v, ring_bound);
    if (!v.contains("e")) throw parse_error("missing field 'e'");
    FpVector e = vector_from_json(v.at("e"), m.ctx().p, "e");
    if (e.size() != m.dim()) throw parse_error("field 'e' length differs from the dimension");
    return IndexedModule{std::move(m), std::move(e)};
}

RealizeInput realize_input_from_json(const json& v, std::uint64_t ring_bound) {
    IndexedModule im = indexed_module_from_json(v, ring_bound);
    if (!v.contains("gamma")) throw parse_error("missing field 'gamma'");
    FpVector gamma = vector_from_json(v.at("gamma"), im.module.ctx().p, "gamma");
    if (gamma.size() != im.module.dim())
        throw parse_error("field 'gamma' length differs from the dimension");
    return RealizeInput{std::move(im), std::move(gamma)};
}

}  // namespace fpg
