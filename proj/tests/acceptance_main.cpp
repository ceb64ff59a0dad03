// Acceptance gate: runs every verification suite at full desk scale and
// prints one line per criterion. Exits nonzero if anything fails.

#include <cstdio>
#include <exception>

#include "fpg/selftest.hpp"

int main() {
    fpg::SelftestOptions opt;  // defaults: full grid, seed 0
    std::vector<fpg::SuiteResult> results;
    try {
        results = fpg::run_selftests(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "selftest driver threw: %s\n", e.what());
        return 1;
    }

    for (const auto& r : results) {
        std::printf("%s  criterion %2d  %-24s (%.2f s)\n", r.passed ? "PASS" : "FAIL",
                    r.criterion, r.name.c_str(), r.seconds);
        for (const auto& f : r.failures) std::printf("       %s\n", f.c_str());
    }
    const bool ok = fpg::all_passed(results);
    std::printf("%s\n", ok ? "acceptance: all criteria satisfied"
                           : "acceptance: FAILURES PRESENT");
    return ok ? 0 : 1;
}
