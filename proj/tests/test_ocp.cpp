#include <random>

#include "doctest.h"
#include "ocmc/checker.hpp"
#include "ocmc/error.hpp"
#include "ocmc/gadgets.hpp"
#include "ocmc/ocp.hpp"

using namespace ocmc;

TEST_CASE("successor computation on the fixed net") {
    Ocp o = figure7();
    // q0 has no zero transitions: deadlock at counter 0.
    CHECK(successors(o, {o.require_location("q0"), 0}).empty());

    // tbar at counter 1 can drop into f.
    auto succ = successors(o, {o.require_location("tbar"), 1});
    bool found = false;
    for (const auto& c : succ)
        if (c.location == o.require_location("f") && c.counter == 0) found = true;
    CHECK(found);

    // Successors come ordered by destination id, then delta.
    for (std::size_t i = 1; i < succ.size(); ++i) {
        CHECK(succ[i - 1].location <= succ[i].location);
    }

    CHECK_THROWS_AS(successors(o, {99, 0}), StructuralError);
}

TEST_CASE("deadlocked location") {
    Ocp o;
    int a = o.add_location("a");
    CHECK(successors(o, {a, 5}).empty());
    CHECK(successors(o, {a, 0}).empty());
}

TEST_CASE("is_net") {
    CHECK(is_net(figure7()));

    Ocp o;
    int q = o.add_location("q");
    o.add_zero(q, 0, q);
    CHECK_FALSE(is_net(o));

    Ocp p;
    p.add_location("q");
    CHECK(is_net(p));
}

TEST_CASE("net monotonicity of zero moves") {
    // In a net, every move available at counter zero is also available at
    // positive counters (same transition tuple).
    Ocp o = figure7();
    REQUIRE(is_net(o));
    for (int q = 0; q < o.location_count(); ++q) {
        for (const auto& t : o.zero_out(q)) {
            auto pos = o.pos_out(q);
            CHECK(std::find(pos.begin(), pos.end(), t) != pos.end());
        }
    }
}

TEST_CASE("zero transitions never decrement") {
    Ocp o = figure7();
    for (const auto& t : o.zero_transitions()) CHECK(t.delta >= 0);
    for (int q = 0; q < o.location_count(); ++q) {
        for (const auto& c : successors(o, {q, 0})) CHECK(c.counter >= 0);
    }
}

TEST_CASE("normalize_weighted chains") {
    WeightedOcpSpec spec;
    int q = spec.add_location("q");
    int q2 = spec.add_location("q2");
    spec.pos.push_back({q, -3, q2});
    auto norm = normalize_weighted(spec);
    // Chain of three unit decrements: two fresh locations.
    CHECK(norm.ocp.location_count() == 4);
    CHECK(norm.ocp.pos_transitions().size() == 3);
    for (const auto& t : norm.ocp.pos_transitions()) CHECK(t.delta == -1);
    CHECK(norm.original_of[0] == 0);
    CHECK(norm.original_of[2] == -1);

    WeightedOcpSpec id_spec;
    int a = id_spec.add_location("a");
    int b = id_spec.add_location("b");
    id_spec.zero.push_back({a, 0, b});
    auto id_norm = normalize_weighted(id_spec);
    CHECK(id_norm.ocp.location_count() == 2);
    CHECK(id_norm.ocp.zero_transitions().size() == 1);

    WeightedOcpSpec bad;
    int c = bad.add_location("c");
    bad.zero.push_back({c, -1, c});
    CHECK_THROWS_AS(normalize_weighted(bad), StructuralError);

    // Weights count in unary for size accounting.
    CHECK(spec.unary_size() == 2 + 1 + 3);
}

TEST_CASE("weighted decrement loop expands to a cycle") {
    WeightedOcpSpec spec;
    int d = spec.add_location("div");
    spec.pos.push_back({d, -3, d});
    auto norm = normalize_weighted(spec);
    CHECK(norm.ocp.location_count() == 3);
    // Walking three unit decrements returns to div.
    Configuration c{d, 9};
    for (int step = 0; step < 3; ++step) {
        auto succ = successors(norm.ocp, c);
        REQUIRE(succ.size() == 1);
        c = succ[0];
    }
    CHECK(c.location == d);
    CHECK(c.counter == 6);
}

namespace {

// Reference semantics for weighted specs, capped at a counter bound:
// a transition with weight k moves the counter by k when the result stays
// in range. Used to check that normalization preserves the positive
// reachability fragment at original locations.
struct WeightedEval {
    const WeightedOcpSpec& spec;
    long long bound;

    std::vector<std::pair<int, long long>> succ(int loc, long long c) const {
        std::vector<std::pair<int, long long>> out;
        const auto& side = c == 0 ? spec.zero : spec.pos;
        for (const auto& t : side) {
            if (t.src != loc) continue;
            long long c2 = c + t.delta;
            if (c2 >= 0 && c2 <= bound) out.emplace_back(t.dst, c2);
        }
        return out;
    }

    // EF over a set of goal (location, counter) pairs.
    bool reaches(int loc, long long c, int goal_loc, long long goal_c) const {
        std::vector<std::vector<bool>> seen(spec.names.size(),
                                            std::vector<bool>(bound + 1, false));
        std::vector<std::pair<int, long long>> work{{loc, c}};
        seen[loc][c] = true;
        while (!work.empty()) {
            auto [l, cc] = work.back();
            work.pop_back();
            if (l == goal_loc && cc == goal_c) return true;
            for (auto [l2, c2] : succ(l, cc)) {
                if (!seen[l2][c2]) {
                    seen[l2][c2] = true;
                    work.emplace_back(l2, c2);
                }
            }
        }
        return false;
    }
};

}  // namespace

TEST_CASE("normalization preserves reachability between original configurations") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        WeightedOcpSpec spec;
        int nloc = 2 + static_cast<int>(rng() % 3);
        for (int i = 0; i < nloc; ++i) spec.add_location("L" + std::to_string(i));
        int ntrans = 2 + static_cast<int>(rng() % 5);
        for (int i = 0; i < ntrans; ++i) {
            int src = static_cast<int>(rng() % nloc);
            int dst = static_cast<int>(rng() % nloc);
            long long w = static_cast<long long>(rng() % 7) - 3;
            if (rng() % 2) {
                spec.pos.push_back({src, w, dst});
            } else {
                spec.zero.push_back({src, w < 0 ? -w : w, dst});
            }
        }
        auto norm = normalize_weighted(spec);
        WeightedEval ref{spec, 24};

        // Compare weighted reachability against reachability in the
        // normalized system restricted to original locations.
        for (int from = 0; from < nloc; ++from) {
            for (int to = 0; to < nloc; ++to) {
                for (long long c0 : {0LL, 1LL, 5LL}) {
                    for (long long c1 : {0LL, 2LL, 7LL}) {
                        bool expect = ref.reaches(from, c0, to, c1);
                        // Normalized side: breadth-first search capped the
                        // same way, ignoring states above the bound.
                        std::vector<std::vector<bool>> seen(
                            norm.ocp.location_count(), std::vector<bool>(25, false));
                        std::vector<Configuration> work{{from, c0}};
                        seen[from][c0] = true;
                        bool got = false;
                        while (!work.empty() && !got) {
                            Configuration cur = work.back();
                            work.pop_back();
                            if (cur.location == to && cur.counter == c1) got = true;
                            for (const auto& nx : successors(norm.ocp, cur)) {
                                if (nx.counter > 24) continue;
                                auto ctr = nx.counter.convert_to<std::size_t>();
                                if (!seen[nx.location][ctr]) {
                                    seen[nx.location][ctr] = true;
                                    work.push_back(nx);
                                }
                            }
                        }
                        CHECK(expect == got);
                    }
                }
            }
        }
    }
}

TEST_CASE("nfa membership") {
    Nfa a;
    int s0 = a.add_state("s0");
    int s1 = a.add_state("s1");
    a.initial = s0;
    a.final_states[s1] = true;
    // Accepts (0|1)*1.
    a.transitions.emplace_back(s0, 0, s0);
    a.transitions.emplace_back(s0, 1, s0);
    a.transitions.emplace_back(s0, 1, s1);
    CHECK(nfa_accepts(a, {0, 1}));
    CHECK_FALSE(nfa_accepts(a, {}));
    CHECK_FALSE(nfa_accepts(a, {1, 0}));
}

TEST_CASE("ocp text round trip") {
    Ocp o = figure7();
    std::string text = render_ocp(o);
    Ocp p = parse_ocp_text(text);
    CHECK(render_ocp(p) == text);
    CHECK(p.location_count() == 10);
    CHECK(p.zero_transitions().size() == o.zero_transitions().size());
    CHECK(p.pos_transitions().size() == o.pos_transitions().size());
    CHECK(is_net(p));
}

TEST_CASE("ocp text with weighted lines expands on load") {
    std::string text =
        "ocp\n"
        "loc a b\n"
        "prop start : a\n"
        "wpos a -2 b\n"
        "zero a 0 b\n";
    Ocp o = parse_ocp_text(text);
    CHECK(o.location_count() == 3);
    CHECK(o.pos_transitions().size() == 2);
    CHECK(o.has_label("start", o.require_location("a")));
}

TEST_CASE("nfa text round trip") {
    std::string text =
        "nfa\n"
        "state s0 s1\n"
        "init s0\n"
        "final s1\n"
        "trans s0 1 s1\n"
        "trans s0 0 s0\n";
    Nfa a = parse_nfa_text(text);
    CHECK(render_nfa(parse_nfa_text(render_nfa(a))) == render_nfa(a));
    CHECK(nfa_accepts(a, {0, 0, 1}));
    CHECK_FALSE(nfa_accepts(a, {1, 1}));
}
