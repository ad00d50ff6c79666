#include "ocmc/ocmdp.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>

#include "ocmc/error.hpp"

namespace ocmc {

int OcMdp::add_location(const std::string& name, bool probabilistic) {
    auto it = ids_.find(name);
    if (it != ids_.end()) {
        if (prob_[it->second] != probabilistic)
            throw StructuralError("location re-declared with a different kind: " + name);
        return it->second;
    }
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    prob_.push_back(probabilistic);
    zero_.emplace_back();
    pos_.emplace_back();
    return id;
}

int OcMdp::location_id(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
}

int OcMdp::require_location(const std::string& name) const {
    int id = location_id(name);
    if (id < 0) throw StructuralError("unknown location: " + name);
    return id;
}

void OcMdp::add_zero(int src, int delta, int dst, Rational prob) {
    if (delta != 0 && delta != 1) throw StructuralError("zero transition delta must be 0 or +1");
    zero_[src].push_back({delta, dst, std::move(prob)});
}

void OcMdp::add_pos(int src, int delta, int dst, Rational prob) {
    if (delta < -1 || delta > 1)
        throw StructuralError("positive transition delta must be in {-1,0,+1}");
    pos_[src].push_back({delta, dst, std::move(prob)});
}

std::vector<std::string> OcMdp::wellformedness_defects() const {
    std::vector<std::string> out;
    for (int q = 0; q < location_count(); ++q) {
        if (zero_[q].empty()) out.push_back(names_[q] + ": no zero transition");
        if (pos_[q].empty()) out.push_back(names_[q] + ": no positive transition");
        if (!prob_[q]) continue;
        for (int side = 0; side < 2; ++side) {
            const auto& edges = side == 0 ? zero_[q] : pos_[q];
            if (edges.empty()) continue;
            Rational sum = 0;
            for (const auto& e : edges) sum += e.prob;
            if (sum != 1)
                out.push_back(names_[q] + ": " + (side == 0 ? "zero" : "positive") +
                              " distribution sums to " + sum.str());
        }
    }
    return out;
}

CompletionResult complete_wellformed(const OcMdp& a) {
    CompletionResult res;
    OcMdp& b = res.mdp;
    for (int q = 0; q < a.location_count(); ++q)
        b.add_location(a.location_name(q), a.probabilistic(q));
    for (int q = 0; q < a.location_count(); ++q) {
        for (const auto& e : a.zero_out(q)) b.add_zero(q, e.delta, e.dst, e.prob);
        for (const auto& e : a.pos_out(q)) b.add_pos(q, e.delta, e.dst, e.prob);
        if (a.zero_out(q).empty()) {
            b.add_zero(q, 0, q, a.probabilistic(q) ? Rational(1) : Rational(0));
            res.additions.push_back(a.location_name(q) + ": added zero self-loop");
        }
        if (a.pos_out(q).empty()) {
            b.add_pos(q, 0, q, a.probabilistic(q) ? Rational(1) : Rational(0));
            res.additions.push_back(a.location_name(q) + ": added positive self-loop");
        }
    }
    return res;
}

int FiniteMdp::vertex_of(int location, std::int64_t c) const {
    auto it = index_.find({location, c});
    return it == index_.end() ? -1 : it->second;
}

std::vector<bool> FiniteMdp::target_vertices(const std::vector<int>& target_locs) const {
    std::vector<bool> t(vertex_count(), false);
    for (int v = 0; v < vertex_count(); ++v) {
        if (counter[v] == 0 &&
            std::find(target_locs.begin(), target_locs.end(), loc[v]) != target_locs.end())
            t[v] = true;
    }
    if (mode == FrontierMode::Optimistic && sink >= 0) t[sink] = true;
    return t;
}

FiniteMdp induced_finite_mdp(const OcMdp& a, int start_loc, std::int64_t start_counter,
                             std::int64_t bound, FrontierMode mode) {
    if (start_counter < 0 || start_counter > bound)
        throw DomainError("induced_finite_mdp: start counter outside [0, bound]");
    auto defects = a.wellformedness_defects();
    if (!defects.empty())
        throw StructuralError("induced_finite_mdp: ill-formed process (" + defects.front() +
                              "); run complete_wellformed first");

    FiniteMdp m;
    m.mode = mode;
    auto vertex = [&](int q, std::int64_t c) {
        auto it = m.index_.find({q, c});
        if (it != m.index_.end()) return it->second;
        int id = m.vertex_count();
        m.index_.emplace(std::make_pair(q, c), id);
        m.succ.emplace_back();
        m.probabilistic.push_back(a.probabilistic(q));
        m.loc.push_back(q);
        m.counter.push_back(c);
        return id;
    };
    auto sink_vertex = [&]() {
        if (m.sink >= 0) return m.sink;
        int id = m.vertex_count();
        m.sink = id;
        m.succ.emplace_back();
        m.probabilistic.push_back(false);
        m.loc.push_back(-1);
        m.counter.push_back(-1);
        m.succ[id].push_back({id, Rational(1)});
        return id;
    };

    m.start = vertex(start_loc, start_counter);
    std::deque<int> work{m.start};
    std::vector<bool> expanded;
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        if (v >= static_cast<int>(expanded.size())) expanded.resize(v + 1, false);
        if (expanded[v]) continue;
        expanded[v] = true;
        const int q = m.loc[v];
        const std::int64_t c = m.counter[v];
        const auto& edges = c == 0 ? a.zero_out(q) : a.pos_out(q);
        for (const auto& e : edges) {
            std::int64_t c2 = c + e.delta;
            int w;
            if (c2 > bound) {
                w = sink_vertex();
            } else {
                w = vertex(e.dst, c2);
                if (w >= static_cast<int>(expanded.size()) || !expanded[w]) work.push_back(w);
            }
            m.succ[v].push_back({w, e.prob});
        }
    }
    return m;
}

std::vector<bool> almost_sure_reach(const FiniteMdp& m, const std::vector<bool>& target) {
    const int n = m.vertex_count();
    std::vector<std::vector<int>> preds(n);
    for (int v = 0; v < n; ++v)
        for (const auto& e : m.succ[v]) preds[e.dst].push_back(v);

    std::vector<bool> safe(n, true);
    while (true) {
        // Backward closure inside `safe`: controlled vertices need one safe
        // successor on the way, probabilistic vertices need all successors
        // safe and one on the way.
        std::vector<bool> reach(n, false);
        std::deque<int> work;
        for (int v = 0; v < n; ++v) {
            if (target[v] && safe[v]) {
                reach[v] = true;
                work.push_back(v);
            }
        }
        auto eligible = [&](int v) {
            if (!safe[v] || reach[v]) return false;
            bool some = false, all = true;
            for (const auto& e : m.succ[v]) {
                some = some || reach[e.dst];
                all = all && safe[e.dst];
            }
            if (!some) return false;
            return m.probabilistic[v] ? all : true;
        };
        while (!work.empty()) {
            int v = work.front();
            work.pop_front();
            for (int p : preds[v]) {
                if (eligible(p)) {
                    reach[p] = true;
                    work.push_back(p);
                }
            }
        }
        // Re-examine: probabilistic vertices may have become eligible only
        // after later insertions; single pass until stable.
        bool grew = true;
        while (grew) {
            grew = false;
            for (int v = 0; v < n; ++v) {
                if (eligible(v)) {
                    reach[v] = true;
                    grew = true;
                }
            }
        }
        if (reach == safe) return reach;
        safe = std::move(reach);
    }
}

namespace {

// Reachability values of the Markov chain induced by a fixed strategy,
// solved exactly per strongly connected component in reverse topological
// order.
std::vector<Rational> chain_values(const FiniteMdp& m, const std::vector<bool>& target,
                                   const std::vector<int>& choice) {
    const int n = m.vertex_count();
    // Chain edges: the chosen edge for controlled vertices, all edges for
    // probabilistic ones.
    auto edges_of = [&](int v, auto&& fn) {
        if (target[v]) return;  // absorbing
        if (m.probabilistic[v]) {
            for (const auto& e : m.succ[v]) fn(e.dst, e.prob);
        } else {
            fn(m.succ[v][choice[v]].dst, Rational(1));
        }
    };

    // Vertices that can reach the target inside the chain.
    std::vector<std::vector<int>> preds(n);
    for (int v = 0; v < n; ++v)
        edges_of(v, [&](int w, const Rational&) { preds[w].push_back(v); });
    std::vector<bool> can_reach(n, false);
    std::deque<int> work;
    for (int v = 0; v < n; ++v)
        if (target[v]) {
            can_reach[v] = true;
            work.push_back(v);
        }
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        for (int p : preds[v])
            if (!can_reach[p]) {
                can_reach[p] = true;
                work.push_back(p);
            }
    }

    std::vector<Rational> value(n, Rational(0));
    for (int v = 0; v < n; ++v)
        if (target[v]) value[v] = 1;

    // Tarjan over the unknown vertices.
    {
        std::vector<int> idx(n, -1), low(n, 0), stk;
        std::vector<bool> on(n, false);
        std::vector<int> comp(n, -1);
        int counter = 0, ncomp = 0;
        std::vector<std::vector<int>> comps;
        auto strongconnect = [&](auto&& self, int v) -> void {
            idx[v] = low[v] = counter++;
            stk.push_back(v);
            on[v] = true;
            edges_of(v, [&](int w, const Rational&) {
                if (target[w] || !can_reach[w]) return;
                if (idx[w] < 0) {
                    self(self, w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on[w]) {
                    low[v] = std::min(low[v], idx[w]);
                }
            });
            if (low[v] == idx[v]) {
                comps.emplace_back();
                while (true) {
                    int w = stk.back();
                    stk.pop_back();
                    on[w] = false;
                    comp[w] = ncomp;
                    comps.back().push_back(w);
                    if (w == v) break;
                }
                ++ncomp;
            }
        };
        for (int v = 0; v < n; ++v)
            if (!target[v] && can_reach[v] && idx[v] < 0) strongconnect(strongconnect, v);

        // Tarjan emits components in reverse topological order already:
        // a component is closed only after everything it reaches.
        for (const auto& scc : comps) {
            // Solve the |scc| x |scc| linear system x = A x + b exactly.
            const int k = static_cast<int>(scc.size());
            std::vector<int> pos_in_scc(n, -1);
            for (int i = 0; i < k; ++i) pos_in_scc[scc[i]] = i;
            std::vector<std::vector<Rational>> mat(k, std::vector<Rational>(k + 1, Rational(0)));
            for (int i = 0; i < k; ++i) {
                mat[i][i] = 1;
                edges_of(scc[i], [&](int w, const Rational& p) {
                    if (!target[w] && !can_reach[w]) return;  // value zero
                    int j = pos_in_scc[w];
                    if (j >= 0)
                        mat[i][j] -= p;
                    else
                        mat[i][k] += p * value[w];
                });
            }
            // Gaussian elimination with first-nonzero pivoting.
            for (int col = 0; col < k; ++col) {
                int piv = -1;
                for (int row = col; row < k; ++row)
                    if (mat[row][col] != 0) {
                        piv = row;
                        break;
                    }
                if (piv < 0) throw Error("chain_values: singular component system");
                std::swap(mat[col], mat[piv]);
                Rational inv = mat[col][col];
                for (int j = col; j <= k; ++j) mat[col][j] /= inv;
                for (int row = 0; row < k; ++row) {
                    if (row == col || mat[row][col] == 0) continue;
                    Rational factor = mat[row][col];
                    for (int j = col; j <= k; ++j) mat[row][j] -= factor * mat[col][j];
                }
            }
            for (int i = 0; i < k; ++i) value[scc[i]] = mat[i][k];
        }
    }
    return value;
}

}  // namespace

std::vector<Rational> exact_max_reach_values(const FiniteMdp& m, const std::vector<bool>& target,
                                             std::size_t budget) {
    const int n = m.vertex_count();
    if (static_cast<std::size_t>(n) > budget)
        throw BudgetError(std::to_string(n), "exact_max_reach_values: vertex budget exceeded");
    if (n == 0) return {};

    // Initial strategy: head along a shortest path towards the target.
    std::vector<std::vector<int>> preds(n);
    for (int v = 0; v < n; ++v)
        for (const auto& e : m.succ[v]) preds[e.dst].push_back(v);
    std::vector<int> dist(n, -1);
    std::deque<int> work;
    for (int v = 0; v < n; ++v)
        if (target[v]) {
            dist[v] = 0;
            work.push_back(v);
        }
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        for (int p : preds[v])
            if (dist[p] < 0) {
                dist[p] = dist[v] + 1;
                work.push_back(p);
            }
    }
    std::vector<int> choice(n, 0);
    for (int v = 0; v < n; ++v) {
        if (m.probabilistic[v] || m.succ[v].empty()) continue;
        int best = 0;
        for (std::size_t i = 1; i < m.succ[v].size(); ++i) {
            int dbest = dist[m.succ[v][best].dst], dcur = dist[m.succ[v][i].dst];
            if (dbest < 0 || (dcur >= 0 && dcur < dbest)) best = static_cast<int>(i);
        }
        choice[v] = best;
    }

    while (true) {
        std::vector<Rational> value = chain_values(m, target, choice);
        bool improved = false;
        for (int v = 0; v < n; ++v) {
            if (m.probabilistic[v] || target[v] || m.succ[v].empty()) continue;
            int best = choice[v];
            for (std::size_t i = 0; i < m.succ[v].size(); ++i) {
                if (value[m.succ[v][i].dst] > value[m.succ[v][best].dst])
                    best = static_cast<int>(i);
            }
            if (value[m.succ[v][best].dst] > value[v]) {
                choice[v] = best;
                improved = true;
            }
        }
        if (!improved) return value;
    }
}

std::vector<double> approx_max_reach_values(const FiniteMdp& m, const std::vector<bool>& target,
                                            int sweeps) {
    const int n = m.vertex_count();
    std::vector<double> v(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (target[i]) v[i] = 1.0;
    for (int round = 0; round < sweeps; ++round) {
        double delta = 0;
        for (int i = 0; i < n; ++i) {
            if (target[i] || m.succ[i].empty()) continue;
            double next;
            if (m.probabilistic[i]) {
                next = 0;
                for (const auto& e : m.succ[i])
                    next += e.prob.convert_to<double>() * v[e.dst];
            } else {
                next = 0;
                for (const auto& e : m.succ[i]) next = std::max(next, v[e.dst]);
            }
            delta = std::max(delta, std::abs(next - v[i]));
            v[i] = next;
        }
        if (delta < 1e-12) break;
    }
    return v;
}

CrrMdpGadget mdp_of_crr_formula(const CrrFormula& f, const std::vector<int>& primes) {
    if (!f.negation_free()) throw StructuralError("mdp_of_crr_formula: negations not allowed");

    CrrMdpGadget g;
    OcMdp& a = g.mdp;
    // Residue cycles shared across leaves of the same prime.
    std::vector<std::vector<int>> cycle(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const int p = primes[i];
        for (int j = 0; j < p; ++j)
            cycle[i].push_back(
                a.add_location("q" + std::to_string(j) + ".p" + std::to_string(p), false));
        for (int j = 0; j < p; ++j) {
            a.add_pos(cycle[i][j], -1, cycle[i][(j - 1 + p) % p]);
            a.add_zero(cycle[i][j], 0, cycle[i][j]);
        }
        g.targets.push_back(cycle[i][0]);
    }

    auto build = [&](auto&& self, const CrrFormula& node, const std::string& path) -> int {
        switch (node.kind()) {
            case CrrFormula::Kind::Leaf: {
                if (node.prime_index() >= static_cast<int>(primes.size()) ||
                    node.residue() >= primes[node.prime_index()])
                    throw StructuralError("mdp_of_crr_formula: leaf outside prime list");
                int q = a.add_location("q." + path, false);
                int e = cycle[node.prime_index()][node.residue()];
                a.add_zero(q, 0, e);
                a.add_pos(q, 0, e);
                return q;
            }
            case CrrFormula::Kind::Or: {
                if (node.children().empty())
                    throw StructuralError("mdp_of_crr_formula: constants not supported");
                if (node.children().size() == 1)
                    return self(self, node.children()[0], path + ".1");
                int q = a.add_location("q." + path, false);
                for (std::size_t i = 0; i < node.children().size(); ++i) {
                    int c = self(self, node.children()[i], path + "." + std::to_string(i + 1));
                    a.add_zero(q, 0, c);
                    a.add_pos(q, 0, c);
                }
                return q;
            }
            case CrrFormula::Kind::And: {
                if (node.children().empty())
                    throw StructuralError("mdp_of_crr_formula: constants not supported");
                if (node.children().size() == 1)
                    return self(self, node.children()[0], path + ".1");
                // Right-fold into coin flips with probability one half per
                // branch point.
                std::vector<int> kids;
                for (std::size_t i = 0; i < node.children().size(); ++i)
                    kids.push_back(self(self, node.children()[i], path + "." + std::to_string(i + 1)));
                int right = kids.back();
                for (int i = static_cast<int>(kids.size()) - 2; i >= 0; --i) {
                    std::string nm = "q." + path + (i == 0 ? "" : ".f" + std::to_string(i));
                    int q = a.add_location(nm, true);
                    a.add_zero(q, 0, kids[i], Rational(1, 2));
                    a.add_zero(q, 0, right, Rational(1, 2));
                    a.add_pos(q, 0, kids[i], Rational(1, 2));
                    a.add_pos(q, 0, right, Rational(1, 2));
                    right = q;
                }
                return right;
            }
            case CrrFormula::Kind::NegLeaf:
                break;
        }
        throw StructuralError("mdp_of_crr_formula: bad node");
    };
    g.entry = build(build, f, "F");
    return g;
}

SerialMdp mdp_serial_compose(const Nfa& nfa, const CrrFormula& f, const CrrFormula& g,
                             const std::vector<int>& primes, int m) {
    for (std::size_t s = 0; s < nfa.states.size(); ++s) {
        bool has_out = false;
        for (const auto& t : nfa.transitions) has_out = has_out || std::get<0>(t) == static_cast<int>(s);
        if (nfa.final_states[s] && has_out)
            throw StructuralError("mdp_serial_compose: final states must have no outgoing transitions");
        if (!nfa.final_states[s] && !has_out)
            throw StructuralError("mdp_serial_compose: non-final states need an outgoing transition");
    }
    Big product = 1;
    for (int p : primes) product *= p;
    if ((Big(1) << m) >= product)
        throw DomainError("mdp_serial_compose: need 2^m < product of primes");

    CrrFormula not_g = eliminate_negations(negate_pushed(g), primes);
    CrrFormula not_f = eliminate_negations(negate_pushed(f), primes);
    CrrMdpGadget pos_g = mdp_of_crr_formula(CrrFormula::conj2(f, not_g), primes);
    CrrMdpGadget neg_g = mdp_of_crr_formula(CrrFormula::conj2(not_f, not_g), primes);
    CrrMdpGadget end_g = mdp_of_crr_formula(g, primes);

    SerialMdp sm;
    OcMdp& a = sm.mdp;

    auto embed = [&](const CrrMdpGadget& part, const std::string& prefix,
                     std::vector<int>& map_out) {
        const OcMdp& src = part.mdp;
        map_out.resize(src.location_count());
        for (int q = 0; q < src.location_count(); ++q)
            map_out[q] = a.add_location(prefix + src.location_name(q), src.probabilistic(q));
        for (int q = 0; q < src.location_count(); ++q) {
            for (const auto& e : src.zero_out(q)) a.add_zero(map_out[q], e.delta, map_out[e.dst], e.prob);
            for (const auto& e : src.pos_out(q)) a.add_pos(map_out[q], e.delta, map_out[e.dst], e.prob);
        }
        for (int t : part.targets) sm.targets.push_back(map_out[t]);
    };

    std::vector<int> nfa_loc(nfa.states.size());
    for (std::size_t s = 0; s < nfa.states.size(); ++s)
        nfa_loc[s] = a.add_location("n." + nfa.states[s], false);

    for (std::size_t ti = 0; ti < nfa.transitions.size(); ++ti) {
        auto [src, bit, dst] = nfa.transitions[ti];
        const CrrMdpGadget& part = bit == 1 ? pos_g : neg_g;
        std::vector<int> map;
        embed(part, "t" + std::to_string(ti) + ".", map);
        int mid = a.add_location("tr" + std::to_string(ti), true);
        a.add_zero(nfa_loc[src], 0, mid);
        a.add_pos(nfa_loc[src], 0, mid);
        a.add_zero(mid, 1, nfa_loc[dst], Rational(1, 2));
        a.add_zero(mid, 0, map[part.entry], Rational(1, 2));
        a.add_pos(mid, 1, nfa_loc[dst], Rational(1, 2));
        a.add_pos(mid, 0, map[part.entry], Rational(1, 2));
    }

    std::vector<int> gmap;
    embed(end_g, "g.", gmap);
    for (std::size_t s = 0; s < nfa.states.size(); ++s) {
        if (nfa.final_states[s]) {
            a.add_zero(nfa_loc[s], 0, gmap[end_g.entry]);
            a.add_pos(nfa_loc[s], 0, gmap[end_g.entry]);
        }
    }

    sm.start = nfa_loc[nfa.initial];
    auto defects = a.wellformedness_defects();
    if (!defects.empty())
        throw StructuralError("mdp_serial_compose: composed process ill-formed: " + defects.front());
    return sm;
}

OcMdp parse_ocmdp(std::istream& in, std::vector<int>* targets) {
    OcMdp a;
    std::vector<std::string> target_names;
    std::string line;
    bool header = false;
    std::size_t offset = 0;
    std::vector<std::array<std::string, 5>> pending;  // kind src delta dst prob
    while (std::getline(in, line)) {
        offset += line.size() + 1;
        std::istringstream ss(line.substr(0, line.find('#')));
        std::string kw;
        if (!(ss >> kw)) continue;
        if (!header) {
            if (kw != "ocmdp") throw ParseError(0, "expected 'ocmdp' header");
            header = true;
            continue;
        }
        if (kw == "nloc" || kw == "ploc") {
            std::string n;
            while (ss >> n) a.add_location(n, kw == "ploc");
        } else if (kw == "zero" || kw == "pos") {
            std::string src, delta, dst, prob;
            if (!(ss >> src >> delta >> dst)) throw ParseError(offset, "expected 'src delta dst'");
            ss >> prob;
            pending.push_back({kw, src, delta, dst, prob});
        } else if (kw == "target") {
            std::string n;
            while (ss >> n) target_names.push_back(n);
        } else {
            throw ParseError(offset, "unknown directive: " + kw);
        }
    }
    if (!header) throw ParseError(0, "empty input, expected 'ocmdp' header");

    auto parse_prob = [&](const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(Big(text));
            return Rational(Big(text.substr(0, slash)), Big(text.substr(slash + 1)));
        } catch (const std::exception&) {
            throw ParseError(0, "bad probability: " + text);
        }
    };
    for (const auto& p : pending) {
        int src = a.require_location(p[1]);
        int dst = a.require_location(p[3]);
        int delta = p[2] == "0" ? 0 : (p[2] == "1" || p[2] == "+1") ? 1 : p[2] == "-1" ? -1 : -2;
        if (delta == -2) throw ParseError(0, "bad delta: " + p[2]);
        bool has_prob = !p[4].empty();
        if (a.probabilistic(src) && !has_prob)
            throw ParseError(0, "probabilistic source needs a probability: " + p[1]);
        if (!a.probabilistic(src) && has_prob)
            throw ParseError(0, "nondeterministic source must not carry a probability: " + p[1]);
        Rational prob = has_prob ? parse_prob(p[4]) : Rational(0);
        if (p[0] == "zero")
            a.add_zero(src, delta, dst, prob);
        else
            a.add_pos(src, delta, dst, prob);
    }
    if (targets) {
        targets->clear();
        for (const auto& n : target_names) targets->push_back(a.require_location(n));
    }
    return a;
}

OcMdp parse_ocmdp_text(const std::string& text, std::vector<int>* targets) {
    std::istringstream in(text);
    return parse_ocmdp(in, targets);
}

std::string render_ocmdp(const OcMdp& a, const std::vector<int>& targets) {
    std::ostringstream out;
    out << "ocmdp\n";
    std::string nl, pl;
    for (int q = 0; q < a.location_count(); ++q)
        (a.probabilistic(q) ? pl : nl) += " " + a.location_name(q);
    if (!nl.empty()) out << "nloc" << nl << '\n';
    if (!pl.empty()) out << "ploc" << pl << '\n';
    auto emit = [&](const char* kw, int q, const OcMdp::Edge& e) {
        out << kw << ' ' << a.location_name(q) << ' '
            << (e.delta > 0 ? "+1" : e.delta < 0 ? "-1" : "0") << ' ' << a.location_name(e.dst);
        if (a.probabilistic(q))
            out << ' ' << boost::multiprecision::numerator(e.prob).str() << '/'
                << boost::multiprecision::denominator(e.prob).str();
        out << '\n';
    };
    for (int q = 0; q < a.location_count(); ++q)
        for (const auto& e : a.zero_out(q)) emit("zero", q, e);
    for (int q = 0; q < a.location_count(); ++q)
        for (const auto& e : a.pos_out(q)) emit("pos", q, e);
    if (!targets.empty()) {
        out << "target";
        for (int t : targets) out << ' ' << a.location_name(t);
        out << '\n';
    }
    return out.str();
}

}  // namespace ocmc
