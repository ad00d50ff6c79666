#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ocmc {

struct SuiteResult {
    std::string name;
    std::uint64_t total = 0;
    std::uint64_t failed = 0;
    std::uint64_t honesty_checks = 0;
    std::uint64_t honesty_violations = 0;
    double seconds = 0;
    std::vector<std::string> failures;  // first few counterexamples
    std::string note;                   // extra per-suite summary

    bool passed() const { return failed == 0 && honesty_violations == 0; }
};

// Suites are deterministic; `seed` feeds the randomized ones.
SuiteResult run_suite(const std::string& name, std::uint64_t seed = 20240901);

// Registered suite names, in reporting order.
const std::vector<std::string>& suite_names();

std::string format_suite_result(const SuiteResult& r);

}  // namespace ocmc
