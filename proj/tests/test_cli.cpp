#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "json.hpp"

#ifndef FPG_CLI_PATH
#error "FPG_CLI_PATH must point at the built binary"
#endif
#ifndef FPG_FIXTURE_DIR
#error "FPG_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace {

struct RunResult {
    int rc = -1;
    std::string out;
};

// run the binary through the shell, capturing stdout; stderr is discarded
// unless the caller redirects it in extra
RunResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" FPG_CLI_PATH "\" " + args +
                            " 2>/dev/null";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int status = pclose(pipe);
    res.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string fixture(const std::string& name) {
    return std::string(FPG_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("module-decompose on trivial and canonical fixtures") {
    const auto ident = run_cli("module-decompose " + fixture("module_identity3.json"));
    CHECK(ident.rc == 0);
    const auto doc = nlohmann::json::parse(ident.out);
    CHECK(doc["type"] == nlohmann::json({1, 1, 1}));

    const auto canon = run_cli("module-decompose " + fixture("module_canonical_31.json"));
    CHECK(canon.rc == 0);
    CHECK(nlohmann::json::parse(canon.out)["type"] == nlohmann::json({3, 1}));
}

TEST_CASE("module-decompose golden output") {
    const auto res = run_cli("module-decompose " + fixture("module_scrambled.json"));
    CHECK(res.rc == 0);
    CHECK(res.out == slurp(fixture("module_scrambled_expected.json")));
}

TEST_CASE("module-decompose error paths") {
    CHECK(run_cli("module-decompose " + fixture("malformed.json")).rc == 2);
    CHECK(run_cli("module-decompose " + fixture("module_bad_sigma.json")).rc == 3);
    CHECK(run_cli("module-decompose /no/such/file.json").rc == 2);
}

TEST_CASE("module-dual preserves the type") {
    const auto res = run_cli("module-dual " + fixture("module_scrambled.json"));
    CHECK(res.rc == 0);
    const auto doc = nlohmann::json::parse(res.out);
    // feed the dual back in and compare types
    const std::string tmp = std::string(::getenv("TMPDIR") ? ::getenv("TMPDIR") : "/tmp") +
                            "/fpg_dual_roundtrip.json";
    std::ofstream(tmp) << doc.dump();
    const auto dec = run_cli("module-decompose " + tmp);
    CHECK(dec.rc == 0);
    const auto orig = run_cli("module-decompose " + fixture("module_scrambled.json"));
    CHECK(nlohmann::json::parse(dec.out)["type"] ==
          nlohmann::json::parse(orig.out)["type"]);
    std::remove(tmp.c_str());
}

TEST_CASE("jepsilon-decompose recovers the planted shape") {
    const auto res = run_cli("jepsilon-decompose " + fixture("indexed_module.json"));
    CHECK(res.rc == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["r"] == 0);
    CHECK(doc["u_value"] != 0);

    CHECK(run_cli("jepsilon-decompose " + fixture("indexed_bad_axiom.json")).rc == 3);
}

TEST_CASE("realize fixtures") {
    const auto a = run_cli("realize --i 0 --c 1 " + fixture("realize_case_a.json"));
    CHECK(a.rc == 0);
    CHECK(a.out == slurp(fixture("realize_case_a_expected.json")));
    CHECK(nlohmann::json::parse(a.out)["case"] == "full-ring");

    const auto c = run_cli("realize --i 1 --c 1 " + fixture("realize_case_c.json"));
    CHECK(c.rc == 0);
    CHECK(c.out == slurp(fixture("realize_case_c_expected.json")));
    CHECK(nlohmann::json::parse(c.out)["case"] == "exceptional");

    CHECK(run_cli("realize --i 0 --c 1 " + fixture("realize_bad_gamma.json")).rc == 3);
}

TEST_CASE("group-info") {
    const auto res = run_cli("group-info 2 1 2 0");
    CHECK(res.rc == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["match"] == true);
    CHECK(doc["computed"]["order"] == 8);
    CHECK(doc["computed"]["exponent"] == 4);
    CHECK(doc["computed"]["nilpotency_class"] == 2);
    CHECK(doc["computed"]["rank"] == 2);

    const auto cyc = run_cli("group-info 2 1 1 1");
    CHECK(cyc.rc == 0);
    const auto cdoc = nlohmann::json::parse(cyc.out);
    CHECK(cdoc["computed"]["order"] == 4);
    CHECK(cdoc["computed"]["exponent"] == 4);
    CHECK(cdoc["match"] == true);

    CHECK(run_cli("group-info 3 2 9 0").rc == 4);
}

TEST_CASE("group-export golden table") {
    const auto res = run_cli("group-export 3 1 2 1 --fmt table");
    CHECK(res.rc == 0);
    CHECK(res.out == slurp(fixture("group_export_3121.txt")));
}

TEST_CASE("witt-chain json") {
    const auto res = run_cli("witt-chain 2 2 1 1");
    CHECK(res.rc == 0);
    const auto doc = nlohmann::json::parse(res.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["kernel_order"] == 2);
    CHECK(doc[0]["kernel_central"] == true);
    CHECK(doc[0]["complement_exists"] == false);
}

TEST_CASE("kummer-check golden") {
    const auto res = run_cli("kummer-check 4 3 1");
    CHECK(res.rc == 0);
    CHECK(res.out == slurp(fixture("kummer_4_3_1.json")));
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["dimJ"] == 1);
    CHECK(doc["r"].is_null());
    CHECK(doc["e_values"] == nlohmann::json({0, 1, 2}));
}

TEST_CASE("identical invocations produce identical bytes") {
    const auto a = run_cli("module-decompose " + fixture("module_scrambled.json"));
    const auto b = run_cli("module-decompose " + fixture("module_scrambled.json"));
    CHECK(a.out == b.out);

    const auto k1 = run_cli("kummer-check 4 3 1 --seed 7");
    const auto k2 = run_cli("kummer-check 4 3 1 --seed 7");
    CHECK(k1.out == k2.out);
}

TEST_CASE("argument errors exit with the parse code") {
    CHECK(run_cli("group-info 2 1").rc == 2);
    CHECK(run_cli("no-such-command").rc == 2);
    CHECK(run_cli("group-export 2 1 1 0 --fmt xml").rc == 2);
}

TEST_CASE("injected cocycle fault trips the selftest") {
    const auto res = run_cli("selftest --bound 3", "FPG_FAULT_COCYCLE_SIGN=1");
    CHECK(res.rc != 0);
}
