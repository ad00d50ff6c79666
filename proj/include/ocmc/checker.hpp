#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ocmc/arith.hpp"
#include "ocmc/ctl.hpp"
#include "ocmc/ocp.hpp"

namespace ocmc {

constexpr std::uint64_t kDefaultStateBudget = 10'000'000;

/// Threshold and period per subformula. Above the threshold, satisfaction
/// at a location depends only on the counter's residue modulo the period.
struct SubformulaParams {
    Formula formula;  // node of the desugared tree
    Big period;       // K^lud
    Big threshold;    // t
};

struct PeriodParameters {
    int k = 0;      // number of control locations
    Big lcm_k = 1;  // LCM([k])
    Big period = 1;
    Big threshold = 0;
    std::vector<SubformulaParams> table;  // postorder over unique nodes
};

// Computes thresholds and periods for every subformula of `f` over `o`.
// `f` may contain sugar; the table is over the desugared tree.
PeriodParameters period_params(const Ocp& o, const Formula& f);

/// Dense bit set over the state space of an evaluation.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    std::size_t size() const { return size_; }
    std::size_t count() const;
    bool subset_of(const StateSet& o) const;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Result of the periodic evaluation: for every subformula, the exact
/// satisfaction set over locations x [0, threshold + period], on the graph
/// where a counter overflowing that range re-enters at threshold + 1.
class SatTable {
public:
    // Satisfaction of the goal formula at (loc, n), any n, via the
    // representative mapping.
    bool holds(int loc, const Big& n) const;
    // Representative of n in [0, threshold + period].
    Big representative(const Big& n) const;

    const PeriodParameters& params() const { return params_; }
    std::uint64_t width() const { return width_; }  // threshold + period + 1

    // Per-subformula tables, parallel to params().table.
    const StateSet& set_of(std::size_t table_index) const { return sets_[table_index]; }
    bool holds_sub(std::size_t table_index, int loc, std::uint64_t counter) const;

private:
    friend SatTable evaluate_periodic(const Ocp&, const Formula&, std::uint64_t);
    PeriodParameters params_;
    std::uint64_t width_ = 0;
    std::vector<StateSet> sets_;
    int root_index_ = -1;
};

// Exact evaluation of `f` on `o`, feasible when
// locations * (threshold + period + 1) fits the budget; otherwise throws
// BudgetError carrying the refused domain size.
SatTable evaluate_periodic(const Ocp& o, const Formula& f,
                           std::uint64_t budget = kDefaultStateBudget);

// Convenience single query through evaluate_periodic.
bool check(const Ocp& o, const Formula& f, int loc, const Big& n,
           std::uint64_t budget = kDefaultStateBudget);

/// Two-valued evaluation on the finite graph locations x [0,B] with
/// counter-overflowing transitions deleted. Not the true semantics in
/// general; exact whenever no witness or refutation needs counters > B.
class CappedTable {
public:
    bool holds(int loc, std::uint64_t counter) const;
    std::uint64_t bound() const { return width_ - 1; }

private:
    friend CappedTable evaluate_capped(const Ocp&, const Formula&, std::uint64_t);
    std::uint64_t width_ = 0;
    StateSet root_;
};

CappedTable evaluate_capped(const Ocp& o, const Formula& f, std::uint64_t bound);

enum class Three { False = 0, True = 1, Unknown = 2 };

/// Kleene evaluation on locations x [0,B]: transitions that would leave the
/// bound feed `unknown` into EX and the fixpoints. Definite verdicts agree
/// with the semantics of the infinite system.
class ThreeValuedTable {
public:
    Three value(int loc, std::uint64_t counter) const;
    Three value_big(int loc, const Big& counter) const;  // Unknown above the bound
    std::uint64_t bound() const { return width_ - 1; }

    const StateSet& definitely_true() const { return dt_; }
    const StateSet& definitely_false() const { return df_; }

private:
    friend ThreeValuedTable evaluate_three_valued(const Ocp&, const Formula&, std::uint64_t);
    std::uint64_t width_ = 0;
    StateSet dt_, df_;
};

ThreeValuedTable evaluate_three_valued(const Ocp& o, const Formula& f, std::uint64_t bound);

struct OracleOptions {
    std::uint64_t escalation_rounds = 3;  // bounds B0, 2*B0, 4*B0, ...
    std::uint64_t state_budget = kDefaultStateBudget;
};

/// Escalating bounded oracle. Evaluations are cached per (formula node,
/// bound), so repeated queries against the same formula are table lookups.
/// Definite three-valued verdicts are trusted; capped evaluation is used
/// last and only when two bounds agree. Not thread-safe.
class BoundedOracle {
public:
    explicit BoundedOracle(const Ocp& o, OracleOptions opts = {}) : o_(o), opts_(opts) {}

    Three check(const Formula& f, int loc, const Big& n, std::uint64_t b0);

    // Bounds at which the last query produced its verdict, for reporting.
    std::uint64_t last_bound() const { return last_bound_; }
    const char* last_engine() const { return last_engine_; }

    // Count of definite verdicts that flipped between escalation bounds;
    // anything nonzero indicates an engine bug.
    std::uint64_t honesty_violations() const { return honesty_violations_; }

private:
    const ThreeValuedTable& tv(const Formula& f, std::uint64_t b);
    const CappedTable& capped(const Formula& f, std::uint64_t b);

    const Ocp& o_;
    OracleOptions opts_;
    std::map<std::pair<const void*, std::uint64_t>, ThreeValuedTable> tv_cache_;
    std::map<std::pair<const void*, std::uint64_t>, CappedTable> capped_cache_;
    std::map<const void*, Formula> pinned_;  // keeps cache keys alive
    std::uint64_t last_bound_ = 0;
    const char* last_engine_ = "";
    std::uint64_t honesty_violations_ = 0;
};

// One-shot wrapper around BoundedOracle.
Three oracle_check(const Ocp& o, const Formula& f, int loc, const Big& n, std::uint64_t b0);

// Number of states definite at bound `b1` whose verdict changes or becomes
// unknown at bound `b2` > b1. Zero for a sound evaluator.
std::uint64_t tv_monotonicity_violations(const Ocp& o, const Formula& f, std::uint64_t b1,
                                         std::uint64_t b2);

}  // namespace ocmc
