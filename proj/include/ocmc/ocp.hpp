#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "ocmc/arith.hpp"

namespace ocmc {

struct Transition {
    int src;
    int delta;  // zero side: {0,+1}; positive side: {-1,0,+1}
    int dst;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// One-counter process: finite control locations, a labeling of locations
/// by propositions, and two transition relations. Zero transitions fire
/// only at counter value 0, positive transitions only at counter > 0.
/// Immutable once built; evaluators may share it across threads read-only.
class Ocp {
public:
    int add_location(const std::string& name);
    int location_id(const std::string& name) const;  // -1 if unknown
    int require_location(const std::string& name) const;
    const std::string& location_name(int id) const { return names_[id]; }
    int location_count() const { return static_cast<int>(names_.size()); }

    void add_zero(int src, int delta, int dst);
    void add_pos(int src, int delta, int dst);
    void add_label(const std::string& prop, int loc);

    const std::vector<Transition>& zero_transitions() const { return zero_; }
    const std::vector<Transition>& pos_transitions() const { return pos_; }
    bool has_label(const std::string& prop, int loc) const;
    const std::map<std::string, std::vector<bool>>& labeling() const { return labels_; }

    // Out-edges of a location on one side, sorted by (dst, delta).
    const std::vector<Transition>& zero_out(int loc) const;
    const std::vector<Transition>& pos_out(int loc) const;
    // In-edges, sorted by src.
    const std::vector<Transition>& zero_in(int loc) const;
    const std::vector<Transition>& pos_in(int loc) const;

private:
    void check_loc(int id) const;

    std::vector<std::string> names_;
    std::map<std::string, int> ids_;
    std::vector<Transition> zero_, pos_;
    std::map<std::string, std::vector<bool>> labels_;

    mutable bool indexed_ = false;
    mutable std::vector<std::vector<Transition>> zero_out_, pos_out_, zero_in_, pos_in_;
    void build_index() const;
};

struct Configuration {
    int location;
    Big counter;
};

// Enabled moves of a configuration, ordered by (destination id, delta).
// Empty result means deadlock.
std::vector<Configuration> successors(const Ocp& o, const Configuration& c);

// True iff every zero transition is also a positive transition.
bool is_net(const Ocp& o);

/// Like Ocp but transition weights are arbitrary integers (naturals on the
/// zero side). Sizes count weights in unary.
struct WeightedOcpSpec {
    struct WTransition {
        int src;
        long long delta;
        int dst;
    };
    std::vector<std::string> names;
    std::vector<WTransition> zero, pos;
    std::map<std::string, std::vector<bool>> labels;

    int add_location(const std::string& name);
    int location_id(const std::string& name) const;
    std::uint64_t unary_size() const;
};

struct NormalizedOcp {
    Ocp ocp;
    // For each location of `ocp`, the index of the spec location it came
    // from, or -1 for a fresh chain link.
    std::vector<int> original_of;
};

// Expands every weight-k transition into a chain of |k| unit steps through
// fresh, unlabeled locations. Reachability from original configurations to
// original locations is preserved.
NormalizedOcp normalize_weighted(const WeightedOcpSpec& spec);

struct Nfa {
    std::vector<std::string> states;
    std::vector<std::tuple<int, int, int>> transitions;  // (src, bit, dst)
    int initial = 0;
    std::vector<bool> final_states;

    int add_state(const std::string& name);
    int state_id(const std::string& name) const;
};

// Standard nondeterministic membership; word is a sequence of bits.
bool nfa_accepts(const Nfa& a, const std::vector<int>& word);

// Line-oriented text formats, '#' starts a comment.
Ocp parse_ocp(std::istream& in);
Ocp parse_ocp_text(const std::string& text);
std::string render_ocp(const Ocp& o);

Nfa parse_nfa(std::istream& in);
Nfa parse_nfa_text(const std::string& text);
std::string render_nfa(const Nfa& a);

}  // namespace ocmc
