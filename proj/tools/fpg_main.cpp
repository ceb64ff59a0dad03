// fpg: command line front end for the F_p[G] module and p-group toolkit.
//
// Exit codes: 0 success, 2 parse error, 3 semantic or precondition error,
// 4 resource bound exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "fpg/errors.hpp"
#include "fpg/gmodule.hpp"
#include "fpg/indexed_module.hpp"
#include "fpg/json_io.hpp"
#include "fpg/kummer_ff.hpp"
#include "fpg/pgroups.hpp"
#include "fpg/selftest.hpp"

namespace {

struct GlobalOpts {
    std::string format = "json";
    std::string output;  // empty = stdout
    std::uint64_t seed = 0;
    std::uint64_t bound = 0;  // 0 = per-command default
};

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fpg::parse_error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.output, std::ios::binary);
    if (!out) throw fpg::parse_error("cannot open output file: " + g.output);
    out << text;
}

std::string render_invariants_text(const fpg::GroupInvariants& v) {
    std::ostringstream s;
    s << "order " << v.order << ", exponent " << v.exponent << ", class "
      << v.nilpotency_class << ", rank " << v.rank << ", frattini " << v.frattini_order;
    return s.str();
}

int run_module_decompose(const GlobalOpts& g, const std::string& input) {
    const fpg::json doc = fpg::parse_json_text(read_input(input));
    const std::uint64_t bound = g.bound ? g.bound : 243;
    const fpg::GModule m = fpg::gmodule_from_json(doc, bound);
    const fpg::Decomposition dec = fpg::decompose(m);
    if (g.format == "json") {
        emit(g, fpg::dump_json(fpg::to_json(dec)));
    } else {
        std::ostringstream s;
        s << "type:";
        for (const auto l : dec.type) s << " " << l;
        s << "\ngenerators: " << dec.generators.size() << "\nbasis change rank: "
          << dec.basis_change.rank() << "\n";
        emit(g, s.str());
    }
    return 0;
}

int run_module_dual(const GlobalOpts& g, const std::string& input) {
    const fpg::json doc = fpg::parse_json_text(read_input(input));
    const std::uint64_t bound = g.bound ? g.bound : 243;
    const fpg::GModule m = fpg::gmodule_from_json(doc, bound);
    const fpg::GModule d = fpg::dual_module(m);
    if (g.format == "json") {
        emit(g, fpg::dump_json(fpg::to_json(d)));
    } else {
        std::ostringstream s;
        s << "dual of a dim " << m.dim() << " module, type:";
        for (const auto l : fpg::jordan_type(d)) s << " " << l;
        s << "\n";
        emit(g, s.str());
    }
    return 0;
}

int run_jepsilon_decompose(const GlobalOpts& g, const std::string& input) {
    const fpg::json doc = fpg::parse_json_text(read_input(input));
    const std::uint64_t bound = g.bound ? g.bound : 243;
    const fpg::IndexedModule im = fpg::indexed_module_from_json(doc, bound);
    const auto violations = fpg::check_axioms(im);
    if (!violations.empty()) {
        std::cerr << "axiom violations:\n";
        for (const auto& v : violations) std::cerr << "  " << v.what << "\n";
        return 3;
    }
    const fpg::JepsilonDecomposition dec = fpg::decompose_jepsilon(im);
    if (g.format == "json") {
        emit(g, fpg::dump_json(fpg::to_json(dec)));
    } else {
        std::ostringstream s;
        if (dec.r == fpg::r_minus_infinity)
            s << "r: -inf\n";
        else
            s << "r: " << dec.r << "\n";
        s << "u value: " << dec.u_value << "\nother summands:";
        for (const auto& v : dec.v_summands) s << " p^" << v.i;
        s << "\n";
        emit(g, s.str());
    }
    return 0;
}

int run_realize(const GlobalOpts& g, const std::string& input, std::uint32_t i,
                std::uint64_t c) {
    const fpg::json doc = fpg::parse_json_text(read_input(input));
    const std::uint64_t bound = g.bound ? g.bound : 243;
    const fpg::RealizeInput ri = fpg::realize_input_from_json(doc, bound);
    const auto violations = fpg::check_axioms(ri.im);
    if (!violations.empty()) {
        std::cerr << "axiom violations:\n";
        for (const auto& v : violations) std::cerr << "  " << v.what << "\n";
        return 3;
    }
    const fpg::RealizationWitness w = fpg::realize_step(ri.im, i, c, ri.gamma);
    if (g.format == "json") {
        emit(g, fpg::dump_json(fpg::to_json(w)));
    } else {
        std::ostringstream s;
        s << "case: " << fpg::realization_case_name(w.kind) << "\nrealized: "
          << w.realized_group << " (length " << w.realized_length << ")\ntarget: "
          << w.target_group << "\n";
        emit(g, s.str());
    }
    return 0;
}

int run_group_info(const GlobalOpts& g, std::uint32_t p, std::uint32_t n, std::uint32_t j,
                   std::uint32_t e) {
    const std::uint64_t bound = g.bound ? g.bound : 6561;
    const fpg::MetacyclicPGroup grp = fpg::make_group(p, n, j, e, bound);
    const fpg::GroupInvariants got = grp.invariants();
    const fpg::GroupInvariants want = fpg::predicted_invariants(p, n, j, e);
    const bool match = got == want;
    if (g.format == "json") {
        fpg::json doc;
        doc["p"] = p;
        doc["n"] = n;
        doc["j"] = j;
        doc["e"] = e;
        doc["computed"] = fpg::to_json(got);
        doc["predicted"] = fpg::to_json(want);
        doc["match"] = match;
        emit(g, fpg::dump_json(doc));
    } else {
        std::ostringstream s;
        s << "computed:  " << render_invariants_text(got) << "\npredicted: "
          << render_invariants_text(want) << "\nmatch: " << (match ? "yes" : "no") << "\n";
        emit(g, s.str());
    }
    return match ? 0 : 3;
}

int run_group_export(const GlobalOpts& g, std::uint32_t p, std::uint32_t n, std::uint32_t j,
                     std::uint32_t e, const std::string& fmt) {
    const std::uint64_t bound = g.bound ? g.bound : 512;
    const fpg::MetacyclicPGroup grp = fpg::make_group(p, n, j, e, bound);
    emit(g, fpg::export_group(grp, fmt, bound));
    return 0;
}

int run_witt_chain(const GlobalOpts& g, std::uint32_t p, std::uint32_t n, std::uint32_t i,
                   std::uint64_t c) {
    const std::uint64_t bound = g.bound ? g.bound : 177147;
    const auto chain = fpg::witt_chain(p, n, i, c, bound);
    if (g.format == "json") {
        emit(g, fpg::dump_json(fpg::to_json(chain)));
    } else {
        std::ostringstream s;
        s << "chain of " << chain.size() << " central extensions\n";
        for (const auto& link : chain) {
            s << "  bottom length " << link.j_bottom << ": kernel " << link.kernel_order
              << (link.kernel_central ? " central" : " NOT central") << ", ranks "
              << link.rank_top << "/" << link.rank_bottom;
            if (link.complement_exists.has_value())
                s << (*link.complement_exists ? ", splits" : ", no complement");
            s << "\n";
        }
        emit(g, s.str());
    }
    return 0;
}

int run_kummer_check(const GlobalOpts& g, std::uint32_t q, std::uint32_t p, std::uint32_t n) {
    const std::uint64_t bound = g.bound ? g.bound : (std::uint64_t(1) << 20);
    const fpg::KummerTower tw = fpg::build_tower(q, p, n, g.seed, bound);
    const fpg::KummerReport rep = fpg::end_to_end_check(tw, g.seed);
    if (g.format == "json") {
        emit(g, fpg::dump_json(fpg::to_json(rep)));
    } else {
        std::ostringstream s;
        s << "field tower over F_" << q << ", degree " << fpg::ipow(p, n) << " (cardinality "
          << rep.card << ")\ndim J = " << rep.dim_j << ", index values:";
        for (const auto v : rep.e_values) s << " " << v;
        s << "\n";
        emit(g, s.str());
    }
    return 0;
}

int run_selftest(const GlobalOpts& g) {
    fpg::SelftestOptions opt;
    if (g.bound) opt.ring_bound = g.bound;
    opt.seed = g.seed;
    const auto results = fpg::run_selftests(opt);
    for (const auto& r : results) {
        std::ostringstream line;
        line << (r.passed ? "PASS" : "FAIL") << "  [" << r.criterion << "] " << r.name << "  ("
             << r.seconds << " s)";
        std::cerr << line.str() << "\n";
        for (const auto& f : r.failures) std::cerr << "        " << f << "\n";
    }
    if (g.format == "json") {
        fpg::json doc;
        doc["passed"] = fpg::all_passed(results);
        fpg::json suites = fpg::json::array();
        for (const auto& r : results) {
            fpg::json s;
            s["criterion"] = r.criterion;
            s["name"] = r.name;
            s["passed"] = r.passed;
            s["failures"] = r.failures;
            suites.push_back(s);
        }
        doc["suites"] = suites;
        emit(g, fpg::dump_json(doc));
    } else {
        emit(g, fpg::all_passed(results) ? "all suites passed\n" : "some suites FAILED\n");
    }
    return fpg::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact arithmetic toolkit for modules over F_p[G] and metacyclic p-groups"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.add_option("--output", g.output, "write output to a file instead of stdout");
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--bound", g.bound, "size bound override (0 = command default)");

    std::string input = "-";
    std::uint32_t p = 0, n = 0, j = 0, e = 0, iopt = 0, q = 0;
    std::uint64_t c = 0;
    std::string fmt = "table";

    auto* cmd_md = app.add_subcommand("module-decompose", "decompose a module into cyclic summands");
    cmd_md->add_option("file", input, "module JSON file ('-' = stdin)");

    auto* cmd_du = app.add_subcommand("module-dual", "dual module with the transposed action");
    cmd_du->add_option("file", input, "module JSON file ('-' = stdin)");

    auto* cmd_je = app.add_subcommand("jepsilon-decompose",
                                      "split an indexed module into its distinguished and plain summands");
    cmd_je->add_option("file", input, "indexed module JSON file ('-' = stdin)");

    auto* cmd_re = app.add_subcommand("realize", "run one realization step on an indexed module");
    cmd_re->add_option("file", input, "JSON file with the module, functional and gamma");
    cmd_re->add_option("--i", iopt, "target exponent offset")->required();
    cmd_re->add_option("--c", c, "length offset, 1 <= c < p^(i+1) - p^i")->required();

    auto* cmd_gi = app.add_subcommand("group-info", "invariants of the group, computed and predicted");
    cmd_gi->add_option("p", p, "prime")->required();
    cmd_gi->add_option("n", n, "cyclic group exponent")->required();
    cmd_gi->add_option("j", j, "module length")->required();
    cmd_gi->add_option("e", e, "cocycle twist")->required();

    auto* cmd_ge = app.add_subcommand("group-export", "export a group as a table or presentation");
    cmd_ge->add_option("p", p, "prime")->required();
    cmd_ge->add_option("n", n, "cyclic group exponent")->required();
    cmd_ge->add_option("j", j, "module length")->required();
    cmd_ge->add_option("e", e, "cocycle twist")->required();
    cmd_ge->add_option("--fmt", fmt, "table or pc")->check(CLI::IsMember({"table", "pc"}));

    auto* cmd_wc = app.add_subcommand("witt-chain", "central extension chain between two group sizes");
    cmd_wc->add_option("p", p, "prime")->required();
    cmd_wc->add_option("n", n, "cyclic group exponent")->required();
    cmd_wc->add_option("i", iopt, "starting exponent")->required();
    cmd_wc->add_option("c", c, "length offset")->required();

    auto* cmd_kc = app.add_subcommand("kummer-check", "finite field tower consistency check");
    cmd_kc->add_option("q", q, "base field cardinality (prime power)")->required();
    cmd_kc->add_option("p", p, "prime")->required();
    cmd_kc->add_option("n", n, "tower height exponent")->required();

    auto* cmd_st = app.add_subcommand("selftest", "run the full verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        if (ex.get_exit_code() == 0) return app.exit(ex);
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    try {
        if (cmd_md->parsed()) return run_module_decompose(g, input);
        if (cmd_du->parsed()) return run_module_dual(g, input);
        if (cmd_je->parsed()) return run_jepsilon_decompose(g, input);
        if (cmd_re->parsed()) return run_realize(g, input, iopt, c);
        if (cmd_gi->parsed()) return run_group_info(g, p, n, j, e);
        if (cmd_ge->parsed()) return run_group_export(g, p, n, j, e, fmt);
        if (cmd_wc->parsed()) return run_witt_chain(g, p, n, iopt, c);
        if (cmd_kc->parsed()) return run_kummer_check(g, q, p, n);
        if (cmd_st->parsed()) return run_selftest(g);
    } catch (const fpg::parse_error& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 2;
    } catch (const fpg::bound_error& ex) {
        std::cerr << "bound exceeded: " << ex.what() << "\n";
        return 4;
    } catch (const fpg::semantic_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    }
    return 0;
}
