#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fpg {

struct SelftestOptions {
    std::uint64_t ring_bound = 243;  // grid points run only when p^n fits
    std::uint64_t seed = 0;
};

struct SuiteResult {
    int criterion = 0;  // 0 for the structural core suite
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::vector<std::string> failures;
};

// Runs the core relation suite plus the ten acceptance suites, in order.
// Every suite records failure messages instead of throwing.
std::vector<SuiteResult> run_selftests(const SelftestOptions& opt = {});

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace fpg
