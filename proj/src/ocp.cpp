#include "ocmc/ocp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ocmc/error.hpp"

namespace ocmc {

int Ocp::add_location(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    for (auto& [prop, set] : labels_) set.resize(names_.size(), false);
    indexed_ = false;
    return id;
}

int Ocp::location_id(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
}

int Ocp::require_location(const std::string& name) const {
    int id = location_id(name);
    if (id < 0) throw StructuralError("unknown location: " + name);
    return id;
}

void Ocp::check_loc(int id) const {
    if (id < 0 || id >= location_count()) throw StructuralError("location id out of range");
}

void Ocp::add_zero(int src, int delta, int dst) {
    check_loc(src);
    check_loc(dst);
    if (delta != 0 && delta != 1) throw StructuralError("zero transition delta must be 0 or +1");
    Transition t{src, delta, dst};
    if (std::find(zero_.begin(), zero_.end(), t) == zero_.end()) zero_.push_back(t);
    indexed_ = false;
}

void Ocp::add_pos(int src, int delta, int dst) {
    check_loc(src);
    check_loc(dst);
    if (delta < -1 || delta > 1) throw StructuralError("positive transition delta must be in {-1,0,+1}");
    Transition t{src, delta, dst};
    if (std::find(pos_.begin(), pos_.end(), t) == pos_.end()) pos_.push_back(t);
    indexed_ = false;
}

void Ocp::add_label(const std::string& prop, int loc) {
    check_loc(loc);
    auto& set = labels_[prop];
    set.resize(names_.size(), false);
    set[loc] = true;
}

bool Ocp::has_label(const std::string& prop, int loc) const {
    auto it = labels_.find(prop);
    return it != labels_.end() && loc < static_cast<int>(it->second.size()) && it->second[loc];
}

void Ocp::build_index() const {
    const int n = location_count();
    zero_out_.assign(n, {});
    pos_out_.assign(n, {});
    zero_in_.assign(n, {});
    pos_in_.assign(n, {});
    for (const auto& t : zero_) {
        zero_out_[t.src].push_back(t);
        zero_in_[t.dst].push_back(t);
    }
    for (const auto& t : pos_) {
        pos_out_[t.src].push_back(t);
        pos_in_[t.dst].push_back(t);
    }
    auto by_dst = [](const Transition& a, const Transition& b) {
        return std::tie(a.dst, a.delta) < std::tie(b.dst, b.delta);
    };
    auto by_src = [](const Transition& a, const Transition& b) {
        return std::tie(a.src, a.delta) < std::tie(b.src, b.delta);
    };
    for (int q = 0; q < n; ++q) {
        std::sort(zero_out_[q].begin(), zero_out_[q].end(), by_dst);
        std::sort(pos_out_[q].begin(), pos_out_[q].end(), by_dst);
        std::sort(zero_in_[q].begin(), zero_in_[q].end(), by_src);
        std::sort(pos_in_[q].begin(), pos_in_[q].end(), by_src);
    }
    indexed_ = true;
}

const std::vector<Transition>& Ocp::zero_out(int loc) const {
    check_loc(loc);
    if (!indexed_) build_index();
    return zero_out_[loc];
}
const std::vector<Transition>& Ocp::pos_out(int loc) const {
    check_loc(loc);
    if (!indexed_) build_index();
    return pos_out_[loc];
}
const std::vector<Transition>& Ocp::zero_in(int loc) const {
    check_loc(loc);
    if (!indexed_) build_index();
    return zero_in_[loc];
}
const std::vector<Transition>& Ocp::pos_in(int loc) const {
    check_loc(loc);
    if (!indexed_) build_index();
    return pos_in_[loc];
}

std::vector<Configuration> successors(const Ocp& o, const Configuration& c) {
    if (c.location < 0 || c.location >= o.location_count())
        throw StructuralError("successors: unknown location");
    if (c.counter < 0) throw StructuralError("successors: negative counter");
    const auto& out = c.counter == 0 ? o.zero_out(c.location) : o.pos_out(c.location);
    std::vector<Configuration> result;
    result.reserve(out.size());
    for (const auto& t : out) result.push_back({t.dst, c.counter + t.delta});
    return result;
}

bool is_net(const Ocp& o) {
    const auto& pos = o.pos_transitions();
    for (const auto& t : o.zero_transitions()) {
        if (std::find(pos.begin(), pos.end(), t) == pos.end()) return false;
    }
    return true;
}

int WeightedOcpSpec::add_location(const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    names.push_back(name);
    for (auto& [prop, set] : labels) set.resize(names.size(), false);
    return static_cast<int>(names.size()) - 1;
}

int WeightedOcpSpec::location_id(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

std::uint64_t WeightedOcpSpec::unary_size() const {
    std::uint64_t s = names.size();
    for (const auto& t : zero) s += 1 + static_cast<std::uint64_t>(t.delta < 0 ? -t.delta : t.delta);
    for (const auto& t : pos) s += 1 + static_cast<std::uint64_t>(t.delta < 0 ? -t.delta : t.delta);
    for (const auto& [prop, set] : labels) s += std::count(set.begin(), set.end(), true);
    return s;
}

NormalizedOcp normalize_weighted(const WeightedOcpSpec& spec) {
    NormalizedOcp out;
    Ocp& o = out.ocp;
    for (const auto& name : spec.names) {
        o.add_location(name);
        out.original_of.push_back(static_cast<int>(out.original_of.size()));
    }
    for (const auto& [prop, set] : spec.labels) {
        for (std::size_t i = 0; i < set.size(); ++i)
            if (set[i]) o.add_label(prop, static_cast<int>(i));
    }

    int fresh = 0;
    auto chain = [&](int src, long long k, int dst, bool zero_side, int tag) {
        const int step = k < 0 ? -1 : 1;
        long long len = k < 0 ? -k : k;
        if (len <= 1) {
            if (zero_side)
                o.add_zero(src, static_cast<int>(k), dst);
            else
                o.add_pos(src, static_cast<int>(k), dst);
            return;
        }
        int prev = src;
        for (long long j = 1; j < len; ++j) {
            int link = o.add_location("_w" + std::to_string(tag) + "_" + std::to_string(fresh++));
            out.original_of.push_back(-1);
            if (zero_side && j == 1) {
                // A climbing zero transition: the first unit step fires at
                // counter 0, the rest at positive counters.
                o.add_zero(prev, step, link);
            } else {
                o.add_pos(prev, step, link);
            }
            prev = link;
        }
        o.add_pos(prev, step, dst);
    };

    int tag = 0;
    for (const auto& t : spec.zero) {
        if (t.delta < 0) throw StructuralError("normalize_weighted: zero transition with negative weight");
        chain(t.src, t.delta, t.dst, true, tag++);
    }
    for (const auto& t : spec.pos) chain(t.src, t.delta, t.dst, false, tag++);
    return out;
}

int Nfa::add_state(const std::string& name) {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    states.push_back(name);
    final_states.resize(states.size(), false);
    return static_cast<int>(states.size()) - 1;
}

int Nfa::state_id(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    return -1;
}

bool nfa_accepts(const Nfa& a, const std::vector<int>& word) {
    std::set<int> current{a.initial};
    for (int bit : word) {
        std::set<int> next;
        for (auto [src, b, dst] : a.transitions) {
            if (b == bit && current.count(src)) next.insert(dst);
        }
        current = std::move(next);
        if (current.empty()) return false;
    }
    for (int s : current)
        if (a.final_states[s]) return true;
    return false;
}

}  // namespace ocmc
