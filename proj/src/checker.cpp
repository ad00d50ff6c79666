#include "ocmc/checker.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "ocmc/error.hpp"

namespace ocmc {

std::size_t StateSet::count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) ++c;
    return c;
}

bool StateSet::subset_of(const StateSet& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w] & ~o.words_[w]) return false;
    return true;
}

namespace {

// Finite successor structure over locations x [0, width-1]. In wrapped mode
// a successor counter of `width` re-enters at `redirect`; in capped mode the
// move is dropped and counted as out-of-bound.
struct ConfigGraph {
    enum class Mode { Wrapped, Capped };

    const Ocp& o;
    Mode mode;
    std::uint64_t width;
    std::uint64_t redirect = 0;

    std::size_t states() const {
        return static_cast<std::size_t>(o.location_count()) * width;
    }
    int loc_of(std::size_t s) const { return static_cast<int>(s / width); }
    std::uint64_t counter_of(std::size_t s) const { return s % width; }
    std::size_t state(int loc, std::uint64_t c) const {
        return static_cast<std::size_t>(loc) * width + c;
    }

    template <class F>
    void for_succ(std::size_t s, F&& fn) const {
        const int q = loc_of(s);
        const std::uint64_t c = counter_of(s);
        const auto& out = c == 0 ? o.zero_out(q) : o.pos_out(q);
        for (const auto& t : out) {
            std::uint64_t c2 = c + static_cast<std::uint64_t>(static_cast<long long>(t.delta));
            if (c2 == width) {
                if (mode == Mode::Wrapped) fn(state(t.dst, redirect));
                // capped: dropped
            } else {
                fn(state(t.dst, c2));
            }
        }
    }

    // Count of moves deleted by the cap (0 in wrapped mode).
    int oob_count(std::size_t s) const {
        if (mode == Mode::Wrapped || counter_of(s) != width - 1) return 0;
        const int q = loc_of(s);
        const auto& out = width - 1 == 0 ? o.zero_out(q) : o.pos_out(q);
        int n = 0;
        for (const auto& t : out)
            if (t.delta == 1) ++n;
        return n;
    }

    int out_degree(std::size_t s) const {
        int n = 0;
        for_succ(s, [&](std::size_t) { ++n; });
        return n;
    }

    template <class F>
    void for_pred(std::size_t s, F&& fn) const {
        const int q2 = loc_of(s);
        const std::uint64_t c2 = counter_of(s);
        // Zero-side predecessors sit at counter 0.
        for (const auto& t : o.zero_in(q2)) {
            if (static_cast<std::uint64_t>(static_cast<long long>(t.delta)) == c2)
                fn(state(t.src, 0));
        }
        // Positive-side predecessors sit at counter c2 - delta >= 1.
        for (const auto& t : o.pos_in(q2)) {
            long long c = static_cast<long long>(c2) - t.delta;
            if (c >= 1 && static_cast<std::uint64_t>(c) < width) fn(state(t.src, static_cast<std::uint64_t>(c)));
        }
        // Wrapped re-entry: increments from the top counter land on `redirect`.
        if (mode == Mode::Wrapped && c2 == redirect && width >= 2) {
            for (const auto& t : o.pos_in(q2)) {
                if (t.delta == 1) fn(state(t.src, width - 1));
            }
        }
    }
};

StateSet label_set(const ConfigGraph& g, const std::string& prop) {
    StateSet s(g.states());
    const auto& labels = g.o.labeling();
    auto it = labels.find(prop);
    if (it == labels.end()) return s;
    for (int q = 0; q < g.o.location_count(); ++q) {
        if (q < static_cast<int>(it->second.size()) && it->second[q]) {
            for (std::uint64_t c = 0; c < g.width; ++c) s.set(g.state(q, c));
        }
    }
    return s;
}

// Least fixpoint of Z = seed | (gate & pre(Z)).
StateSet reach_backward(const ConfigGraph& g, const StateSet& gate, const StateSet& seed) {
    StateSet z = seed;
    std::deque<std::size_t> work;
    for (std::size_t s = 0; s < g.states(); ++s)
        if (z.get(s)) work.push_back(s);
    while (!work.empty()) {
        std::size_t s = work.front();
        work.pop_front();
        g.for_pred(s, [&](std::size_t p) {
            if (!z.get(p) && gate.get(p)) {
                z.set(p);
                work.push_back(p);
            }
        });
    }
    return z;
}

// Greatest fixpoint of Z = gate & pre(Z): states with an infinite in-graph
// path through `gate`.
StateSet stable_backward(const ConfigGraph& g, const StateSet& gate) {
    const std::size_t n = g.states();
    StateSet z = gate;
    std::vector<std::int32_t> live(n, 0);
    std::deque<std::size_t> dead;
    for (std::size_t s = 0; s < n; ++s) {
        if (!z.get(s)) continue;
        int cnt = 0;
        g.for_succ(s, [&](std::size_t t) {
            if (z.get(t)) ++cnt;
        });
        live[s] = cnt;
        if (cnt == 0) dead.push_back(s);
    }
    while (!dead.empty()) {
        std::size_t s = dead.front();
        dead.pop_front();
        if (!z.get(s)) continue;
        z.reset(s);
        g.for_pred(s, [&](std::size_t p) {
            if (z.get(p) && --live[p] == 0) dead.push_back(p);
        });
    }
    return z;
}

// Postorder of the unique nodes of a (desugared) formula dag.
std::vector<Formula> postorder_nodes(const Formula& root) {
    std::vector<Formula> order;
    std::unordered_map<const void*, bool> seen;
    auto go = [&](auto&& self, const Formula& f) -> void {
        if (seen.count(f.id())) return;
        seen.emplace(f.id(), true);
        for (int i = 0; i < f.arity(); ++i) self(self, i == 0 ? f.left() : f.right());
        order.push_back(f);
    };
    go(go, root);
    return order;
}

// Two-valued bottom-up evaluation over a ConfigGraph.
std::unordered_map<const void*, StateSet> evaluate_two_valued(const ConfigGraph& g,
                                                              const std::vector<Formula>& order) {
    std::unordered_map<const void*, StateSet> sets;
    const std::size_t n = g.states();
    for (const Formula& f : order) {
        StateSet r(n);
        switch (f.op()) {
            case CtlOp::True:
                for (std::size_t s = 0; s < n; ++s) r.set(s);
                break;
            case CtlOp::False:
                break;
            case CtlOp::Atom:
                r = label_set(g, f.atom_name());
                break;
            case CtlOp::Not: {
                const StateSet& a = sets.at(f.left().id());
                for (std::size_t s = 0; s < n; ++s)
                    if (!a.get(s)) r.set(s);
                break;
            }
            case CtlOp::And: {
                const StateSet& a = sets.at(f.left().id());
                const StateSet& b = sets.at(f.right().id());
                for (std::size_t s = 0; s < n; ++s)
                    if (a.get(s) && b.get(s)) r.set(s);
                break;
            }
            case CtlOp::ExistsNext: {
                const StateSet& a = sets.at(f.left().id());
                for (std::size_t s = 0; s < n; ++s) {
                    bool hit = false;
                    g.for_succ(s, [&](std::size_t t) { hit = hit || a.get(t); });
                    if (hit) r.set(s);
                }
                break;
            }
            case CtlOp::ExistsUntil: {
                r = reach_backward(g, sets.at(f.left().id()), sets.at(f.right().id()));
                break;
            }
            case CtlOp::ExistsWeakUntil: {
                const StateSet& a = sets.at(f.left().id());
                r = reach_backward(g, a, sets.at(f.right().id()));
                StateSet tail = stable_backward(g, a);
                for (std::size_t s = 0; s < n; ++s)
                    if (tail.get(s)) r.set(s);
                break;
            }
            default:
                throw StructuralError("evaluate: formula not desugared");
        }
        sets.emplace(f.id(), std::move(r));
    }
    return sets;
}

}  // namespace

PeriodParameters period_params(const Ocp& o, const Formula& f) {
    if (o.location_count() < 1) throw StructuralError("period_params: empty location set");
    PeriodParameters pp;
    pp.k = o.location_count();
    pp.lcm_k = lcm_upto(pp.k);
    const Formula core = desugar(f);
    const Big k2_twice = Big(2) * pp.k * pp.k;

    std::unordered_map<const void*, std::size_t> index;
    std::unordered_map<const void*, std::uint64_t> depth;
    for (const Formula& g : postorder_nodes(core)) {
        std::uint64_t d = 0;
        switch (g.op()) {
            case CtlOp::Not:
            case CtlOp::ExistsNext:
                d = depth.at(g.left().id());
                break;
            case CtlOp::And:
                d = std::max(depth.at(g.left().id()), depth.at(g.right().id()));
                break;
            case CtlOp::ExistsUntil:
            case CtlOp::ExistsWeakUntil:
                d = std::max(depth.at(g.left().id()) + 1, depth.at(g.right().id()));
                break;
            default:
                break;
        }
        depth.emplace(g.id(), d);
        Big period = 1;
        for (std::uint64_t i = 0; i < d; ++i) period *= pp.lcm_k;
        Big t = 0;
        switch (g.op()) {
            case CtlOp::True:
            case CtlOp::False:
            case CtlOp::Atom:
                break;
            case CtlOp::Not:
                t = pp.table[index.at(g.left().id())].threshold;
                break;
            case CtlOp::And:
                t = std::max(pp.table[index.at(g.left().id())].threshold,
                             pp.table[index.at(g.right().id())].threshold);
                break;
            case CtlOp::ExistsNext: {
                const auto& sub = pp.table[index.at(g.left().id())];
                t = sub.threshold + sub.period;
                break;
            }
            case CtlOp::ExistsUntil:
            case CtlOp::ExistsWeakUntil: {
                Big tmax = std::max(pp.table[index.at(g.left().id())].threshold,
                                    pp.table[index.at(g.right().id())].threshold);
                t = tmax + k2_twice * period;
                break;
            }
            default:
                throw StructuralError("period_params: unexpected sugar node");
        }
        index.emplace(g.id(), pp.table.size());
        pp.table.push_back({g, period, std::move(t)});
    }
    pp.period = pp.table.back().period;
    pp.threshold = pp.table.back().threshold;
    return pp;
}

bool SatTable::holds_sub(std::size_t table_index, int loc, std::uint64_t counter) const {
    return sets_[table_index].get(static_cast<std::size_t>(loc) * width_ + counter);
}

Big SatTable::representative(const Big& n) const {
    if (n <= params_.threshold) return n;
    return params_.threshold + 1 + (n - params_.threshold - 1) % params_.period;
}

bool SatTable::holds(int loc, const Big& n) const {
    Big m = representative(n);
    return holds_sub(static_cast<std::size_t>(root_index_), loc,
                     m.convert_to<std::uint64_t>());
}

SatTable evaluate_periodic(const Ocp& o, const Formula& f, std::uint64_t budget) {
    SatTable st;
    st.params_ = period_params(o, f);
    const Big domain = Big(o.location_count()) * (st.params_.threshold + st.params_.period + 1);
    if (domain > budget) {
        throw BudgetError(domain.str(),
                          "periodic evaluation infeasible, use a bounded oracle (domain size " +
                              domain.str() + " exceeds budget " + std::to_string(budget) + ")");
    }
    st.width_ = ((st.params_.threshold + st.params_.period + 1)).convert_to<std::uint64_t>();
    const std::uint64_t redirect = (st.params_.threshold + 1).convert_to<std::uint64_t>();
    ConfigGraph g{o, ConfigGraph::Mode::Wrapped, st.width_, redirect};

    std::vector<Formula> order;
    order.reserve(st.params_.table.size());
    for (const auto& e : st.params_.table) order.push_back(e.formula);
    auto sets = evaluate_two_valued(g, order);
    st.sets_.reserve(order.size());
    for (const auto& e : st.params_.table) st.sets_.push_back(std::move(sets.at(e.formula.id())));
    st.root_index_ = static_cast<int>(st.sets_.size()) - 1;
    return st;
}

bool check(const Ocp& o, const Formula& f, int loc, const Big& n, std::uint64_t budget) {
    if (loc < 0 || loc >= o.location_count()) throw StructuralError("check: unknown location");
    if (n < 0) throw StructuralError("check: negative counter");
    return evaluate_periodic(o, f, budget).holds(loc, n);
}

bool CappedTable::holds(int loc, std::uint64_t counter) const {
    return root_.get(static_cast<std::size_t>(loc) * width_ + counter);
}

CappedTable evaluate_capped(const Ocp& o, const Formula& f, std::uint64_t bound) {
    ConfigGraph g{o, ConfigGraph::Mode::Capped, bound + 1, 0};
    const Formula core = desugar(f);
    auto order = postorder_nodes(core);
    auto sets = evaluate_two_valued(g, order);
    CappedTable t;
    t.width_ = bound + 1;
    t.root_ = std::move(sets.at(core.id()));
    return t;
}

namespace {

struct TvSets {
    StateSet dt, df;
};

std::unordered_map<const void*, TvSets> evaluate_tv(const ConfigGraph& g,
                                                    const std::vector<Formula>& order) {
    std::unordered_map<const void*, TvSets> sets;
    const std::size_t n = g.states();

    // Least fixpoint of W = (df2 & df1) | (df2 & no-oob & all-succ-in-W):
    // the definite refutations of a weak until.
    auto all_succ_attractor = [&](const StateSet& df1, const StateSet& df2) {
        StateSet w(n);
        std::vector<std::int32_t> remaining(n, 0);
        std::deque<std::size_t> work;
        for (std::size_t s = 0; s < n; ++s) {
            if (!df2.get(s)) continue;
            if (df1.get(s)) {
                w.set(s);
                work.push_back(s);
                continue;
            }
            if (g.oob_count(s) > 0) continue;
            int deg = g.out_degree(s);
            remaining[s] = deg;
            if (deg == 0) {
                w.set(s);
                work.push_back(s);
            }
        }
        while (!work.empty()) {
            std::size_t s = work.front();
            work.pop_front();
            g.for_pred(s, [&](std::size_t p) {
                if (w.get(p) || !df2.get(p) || df1.get(p) || g.oob_count(p) > 0) return;
                if (remaining[p] > 0 && --remaining[p] == 0) {
                    w.set(p);
                    work.push_back(p);
                }
            });
        }
        return w;
    };

    // Greatest fixpoint of Z <= df2 & (df1 | (no-oob & all-succ-in-Z)):
    // the definite refutations of an until.
    auto all_succ_stable = [&](const StateSet& df1, const StateSet& df2) {
        StateSet z = df2;
        std::vector<std::int32_t> live(n, 0);
        std::deque<std::size_t> bad;
        auto guarded = [&](std::size_t s) { return !df1.get(s) && g.oob_count(s) == 0; };
        for (std::size_t s = 0; s < n; ++s) {
            if (!z.get(s)) continue;
            if (df1.get(s)) continue;
            if (g.oob_count(s) > 0) {
                bad.push_back(s);
                continue;
            }
            int cnt = 0;
            g.for_succ(s, [&](std::size_t t) {
                if (z.get(t)) ++cnt;
            });
            live[s] = cnt;
            if (cnt == 0 && g.out_degree(s) > 0) bad.push_back(s);
        }
        while (!bad.empty()) {
            std::size_t s = bad.front();
            bad.pop_front();
            if (!z.get(s)) continue;
            z.reset(s);
            g.for_pred(s, [&](std::size_t p) {
                if (z.get(p) && guarded(p) && --live[p] == 0 && g.out_degree(p) > 0)
                    bad.push_back(p);
            });
        }
        return z;
    };

    for (const Formula& f : order) {
        TvSets r{StateSet(n), StateSet(n)};
        switch (f.op()) {
            case CtlOp::True:
                for (std::size_t s = 0; s < n; ++s) r.dt.set(s);
                break;
            case CtlOp::False:
                for (std::size_t s = 0; s < n; ++s) r.df.set(s);
                break;
            case CtlOp::Atom: {
                r.dt = label_set(g, f.atom_name());
                for (std::size_t s = 0; s < n; ++s)
                    if (!r.dt.get(s)) r.df.set(s);
                break;
            }
            case CtlOp::Not: {
                const TvSets& a = sets.at(f.left().id());
                r.dt = a.df;
                r.df = a.dt;
                break;
            }
            case CtlOp::And: {
                const TvSets& a = sets.at(f.left().id());
                const TvSets& b = sets.at(f.right().id());
                for (std::size_t s = 0; s < n; ++s) {
                    if (a.dt.get(s) && b.dt.get(s)) r.dt.set(s);
                    if (a.df.get(s) || b.df.get(s)) r.df.set(s);
                }
                break;
            }
            case CtlOp::ExistsNext: {
                const TvSets& a = sets.at(f.left().id());
                for (std::size_t s = 0; s < n; ++s) {
                    bool some_dt = false, all_df = true;
                    g.for_succ(s, [&](std::size_t t) {
                        some_dt = some_dt || a.dt.get(t);
                        all_df = all_df && a.df.get(t);
                    });
                    if (some_dt) r.dt.set(s);
                    if (all_df && g.oob_count(s) == 0) r.df.set(s);
                }
                break;
            }
            case CtlOp::ExistsUntil: {
                const TvSets& a = sets.at(f.left().id());
                const TvSets& b = sets.at(f.right().id());
                r.dt = reach_backward(g, a.dt, b.dt);
                r.df = all_succ_stable(a.df, b.df);
                break;
            }
            case CtlOp::ExistsWeakUntil: {
                const TvSets& a = sets.at(f.left().id());
                const TvSets& b = sets.at(f.right().id());
                r.dt = reach_backward(g, a.dt, b.dt);
                StateSet tail = stable_backward(g, a.dt);
                for (std::size_t s = 0; s < n; ++s)
                    if (tail.get(s)) r.dt.set(s);
                r.df = all_succ_attractor(a.df, b.df);
                break;
            }
            default:
                throw StructuralError("evaluate: formula not desugared");
        }
        sets.emplace(f.id(), std::move(r));
    }
    return sets;
}

}  // namespace

Three ThreeValuedTable::value(int loc, std::uint64_t counter) const {
    std::size_t s = static_cast<std::size_t>(loc) * width_ + counter;
    if (dt_.get(s)) return Three::True;
    if (df_.get(s)) return Three::False;
    return Three::Unknown;
}

Three ThreeValuedTable::value_big(int loc, const Big& counter) const {
    if (counter >= width_) return Three::Unknown;
    return value(loc, counter.convert_to<std::uint64_t>());
}

ThreeValuedTable evaluate_three_valued(const Ocp& o, const Formula& f, std::uint64_t bound) {
    ConfigGraph g{o, ConfigGraph::Mode::Capped, bound + 1, 0};
    const Formula core = desugar(f);
    auto order = postorder_nodes(core);
    auto sets = evaluate_tv(g, order);
    ThreeValuedTable t;
    t.width_ = bound + 1;
    t.dt_ = std::move(sets.at(core.id()).dt);
    t.df_ = std::move(sets.at(core.id()).df);
    return t;
}

const ThreeValuedTable& BoundedOracle::tv(const Formula& f, std::uint64_t b) {
    auto key = std::make_pair(f.id(), b);
    auto it = tv_cache_.find(key);
    if (it == tv_cache_.end()) {
        pinned_.emplace(f.id(), f);
        it = tv_cache_.emplace(key, evaluate_three_valued(o_, f, b)).first;
    }
    return it->second;
}

const CappedTable& BoundedOracle::capped(const Formula& f, std::uint64_t b) {
    auto key = std::make_pair(f.id(), b);
    auto it = capped_cache_.find(key);
    if (it == capped_cache_.end()) {
        pinned_.emplace(f.id(), f);
        it = capped_cache_.emplace(key, evaluate_capped(o_, f, b)).first;
    }
    return it->second;
}

Three BoundedOracle::check(const Formula& f, int loc, const Big& n, std::uint64_t b0) {
    if (b0 == 0) b0 = 1;
    std::vector<std::uint64_t> bounds;
    std::uint64_t b = b0;
    for (std::uint64_t round = 0; round < opts_.escalation_rounds; ++round) {
        if (Big(o_.location_count()) * (Big(b) + 1) > opts_.state_budget) break;
        bounds.push_back(b);
        b *= 2;
    }
    if (bounds.empty()) return Three::Unknown;

    Three seen = Three::Unknown;
    for (std::uint64_t bi : bounds) {
        Three v = tv(f, bi).value_big(loc, n);
        if (v != Three::Unknown) {
            if (seen != Three::Unknown && v != seen) ++honesty_violations_;
            if (seen == Three::Unknown) {
                last_bound_ = bi;
                last_engine_ = "three-valued";
                seen = v;
            }
        }
    }
    if (seen != Three::Unknown) return seen;

    if (bounds.size() >= 2 && n <= bounds[bounds.size() - 2]) {
        std::uint64_t b1 = bounds[bounds.size() - 2];
        std::uint64_t b2 = bounds[bounds.size() - 1];
        std::uint64_t nc = n.convert_to<std::uint64_t>();
        bool v1 = capped(f, b1).holds(loc, nc);
        bool v2 = capped(f, b2).holds(loc, nc);
        if (v1 == v2) {
            last_bound_ = b2;
            last_engine_ = "capped-agreement";
            return v1 ? Three::True : Three::False;
        }
    }
    last_engine_ = "indeterminate";
    return Three::Unknown;
}

Three oracle_check(const Ocp& o, const Formula& f, int loc, const Big& n, std::uint64_t b0) {
    BoundedOracle oracle(o);
    return oracle.check(f, loc, n, b0);
}

std::uint64_t tv_monotonicity_violations(const Ocp& o, const Formula& f, std::uint64_t b1,
                                         std::uint64_t b2) {
    ThreeValuedTable t1 = evaluate_three_valued(o, f, b1);
    ThreeValuedTable t2 = evaluate_three_valued(o, f, b2);
    std::uint64_t bad = 0;
    for (int q = 0; q < o.location_count(); ++q) {
        for (std::uint64_t c = 0; c <= b1; ++c) {
            Three v1 = t1.value(q, c);
            if (v1 == Three::Unknown) continue;
            if (t2.value(q, c) != v1) ++bad;
        }
    }
    return bad;
}

}  // namespace ocmc
