#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ocmc/arith.hpp"
#include "ocmc/gadgets.hpp"
#include "ocmc/ocp.hpp"

namespace ocmc {

using Rational = boost::multiprecision::cpp_rational;

/// One-counter Markov decision process. Locations are either controlled
/// (a strategy picks the move) or probabilistic (a per-side distribution
/// picks it). Well-formedness requires at least one outgoing transition on
/// each side of every location; see complete_wellformed.
class OcMdp {
public:
    struct Edge {
        int delta;
        int dst;
        Rational prob;  // meaningful only for probabilistic sources
    };

    int add_location(const std::string& name, bool probabilistic);
    int location_id(const std::string& name) const;
    int require_location(const std::string& name) const;
    const std::string& location_name(int id) const { return names_[id]; }
    int location_count() const { return static_cast<int>(names_.size()); }
    bool probabilistic(int id) const { return prob_[id]; }

    void add_zero(int src, int delta, int dst, Rational prob = 0);
    void add_pos(int src, int delta, int dst, Rational prob = 0);

    const std::vector<Edge>& zero_out(int loc) const { return zero_[loc]; }
    const std::vector<Edge>& pos_out(int loc) const { return pos_[loc]; }

    // Checks outgoing-side coverage and that distributions sum to one.
    // Returns the defects instead of throwing.
    std::vector<std::string> wellformedness_defects() const;

private:
    std::vector<std::string> names_;
    std::map<std::string, int> ids_;
    std::vector<bool> prob_;
    std::vector<std::vector<Edge>> zero_, pos_;
};

struct CompletionResult {
    OcMdp mdp;
    std::vector<std::string> additions;  // one line per added self-loop
};

// Adds probability-one (q,0,q) self-loops wherever a side has no outgoing
// transition. Idempotent.
CompletionResult complete_wellformed(const OcMdp& a);

enum class FrontierMode { Optimistic, Pessimistic };

/// Exact finite restriction of the induced MDP to counters <= bound,
/// reachable from a start configuration. Counter increments past the bound
/// are redirected to an absorbing sink whose value the frontier mode pins
/// to one (optimistic) or zero (pessimistic).
struct FiniteMdp {
    struct Edge {
        int dst;
        Rational prob;
    };
    std::vector<std::vector<Edge>> succ;
    std::vector<bool> probabilistic;
    std::vector<int> loc;               // -1 for the sink
    std::vector<std::int64_t> counter;  // -1 for the sink
    int sink = -1;                      // -1 if unreachable
    int start = 0;
    FrontierMode mode = FrontierMode::Pessimistic;

    int vertex_count() const { return static_cast<int>(succ.size()); }
    int vertex_of(int location, std::int64_t c) const;  // -1 if absent

    // Vertices with a listed location at counter zero, plus the sink in
    // optimistic mode.
    std::vector<bool> target_vertices(const std::vector<int>& target_locs) const;

private:
    friend FiniteMdp induced_finite_mdp(const OcMdp&, int, std::int64_t, std::int64_t,
                                        FrontierMode);
    std::map<std::pair<int, std::int64_t>, int> index_;
};

FiniteMdp induced_finite_mdp(const OcMdp& a, int start_loc, std::int64_t start_counter,
                             std::int64_t bound, FrontierMode mode);

// Vertices from which some strategy reaches the target set with
// probability one. Pure graph analysis over distribution supports.
std::vector<bool> almost_sure_reach(const FiniteMdp& m, const std::vector<bool>& target);

// Exact maximal reachability values via policy iteration over memoryless
// deterministic strategies, with per-policy linear systems solved in
// rational arithmetic. Throws BudgetError past `budget` vertices.
std::vector<Rational> exact_max_reach_values(const FiniteMdp& m, const std::vector<bool>& target,
                                             std::size_t budget = 100'000);

// Floating-point value iteration; fast approximate preview only.
std::vector<double> approx_max_reach_values(const FiniteMdp& m, const std::vector<bool>& target,
                                            int sweeps = 10'000);

struct CrrMdpGadget {
    OcMdp mdp;
    int entry = -1;            // location evaluating the whole formula
    std::vector<int> targets;  // residue-zero cycle locations
};

// Formula-shaped MDP: disjunctions choose, conjunctions flip a fair coin,
// leaves walk a residue cycle that reaches a target exactly on matching
// residues. F must be negation-free and constant-free.
CrrMdpGadget mdp_of_crr_formula(const CrrFormula& f, const std::vector<int>& primes);

struct SerialMdp {
    OcMdp mdp;
    int start = -1;
    std::vector<int> targets;
};

// Word-guessing composition: automaton states choose transitions, a fair
// coin either advances the counter or audits the guessed letter in a
// formula gadget. Final states hand over to a terminal gadget recognizing
// counter value 2^m.
SerialMdp mdp_serial_compose(const Nfa& a, const CrrFormula& f, const CrrFormula& g,
                             const std::vector<int>& primes, int m);

// `ocmdp` text format.
OcMdp parse_ocmdp(std::istream& in, std::vector<int>* targets);
OcMdp parse_ocmdp_text(const std::string& text, std::vector<int>* targets);
std::string render_ocmdp(const OcMdp& a, const std::vector<int>& targets);

}  // namespace ocmc
