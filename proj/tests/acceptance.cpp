// Acceptance gate: runs every paper-anchored suite, prints one line per
// criterion, and fails if any case, honesty check, or time limit fails.

#include <cstdio>
#include <string>
#include <vector>

#include "ocmc/selftest.hpp"

int main() {
    using ocmc::SuiteResult;
    struct Criterion {
        int number;
        const char* suite;
        const char* title;
        double time_limit_s;  // 0 = unbounded
    };
    const std::vector<Criterion> criteria{
        {1, "lemma2", "divisibility formula family on the fixed net", 60.0},
        {2, "lemma4", "bit formula family against the arithmetic", 0.0},
        {3, "fact14", "divisibility/bit characterizations and the lcm bounds", 5.0},
        {4, "periodicity", "periodic engine agrees with the bounded oracle", 0.0},
        {5, "qbf", "quantified boolean formula reduction vs brute force", 0.0},
        {6, "prop1", "residue gadget traversal equivalence", 0.0},
        {7, "thm8", "serial composition vs leaf-string oracle, both goals", 0.0},
        {8, "prop2", "layered circuit gadgets", 0.0},
        {9, "wagner", "lexicographic-maximum reduction vs enumeration", 0.0},
        {10, "lemma5mdp", "probabilistic gadget dichotomy, exact values", 0.0},
        {11, "thm10mdp", "word-guessing composition value bounds", 120.0},
    };

    bool all_ok = true;
    std::uint64_t honesty_checks = 0, honesty_violations = 0;

    for (const auto& c : criteria) {
        SuiteResult r = ocmc::run_suite(c.suite);
        honesty_checks += r.honesty_checks;
        honesty_violations += r.honesty_violations;
        bool in_time = c.time_limit_s == 0.0 || r.seconds <= c.time_limit_s;
        bool ok = r.passed() && in_time;
        all_ok = all_ok && ok;
        std::string extra;
        if (!r.note.empty()) extra += " [" + r.note + "]";
        if (!in_time) extra += " TIME LIMIT EXCEEDED";
        std::printf("%s  criterion %2d  %-55s %llu/%llu cases, %.2fs%s\n", ok ? "PASS" : "FAIL",
                    c.number, c.title, static_cast<unsigned long long>(r.total - r.failed),
                    static_cast<unsigned long long>(r.total), r.seconds, extra.c_str());
        for (const auto& f : r.failures) std::printf("      counterexample: %s\n", f.c_str());
    }

    SuiteResult honesty = ocmc::run_suite("honesty");
    honesty_checks += honesty.honesty_checks;
    honesty_violations += honesty.honesty_violations;
    bool honesty_ok = honesty.passed() && honesty_violations == 0;
    all_ok = all_ok && honesty_ok;
    std::printf("%s  criterion 12  %-55s %llu checks, %llu violations\n",
                honesty_ok ? "PASS" : "FAIL",
                "raising a bound never flips a definite verdict",
                static_cast<unsigned long long>(honesty_checks),
                static_cast<unsigned long long>(honesty_violations));

    std::printf("%s\n", all_ok ? "ACCEPTANCE: ALL CRITERIA PASS" : "ACCEPTANCE: FAILURES");
    return all_ok ? 0 : 1;
}
