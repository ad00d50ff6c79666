#include <sstream>

#include "doctest.h"
#include "ocmc/error.hpp"
#include "ocmc/ocmdp.hpp"

using namespace ocmc;

namespace {

// Fair coin into a target or a trap.
OcMdp coin_example() {
    OcMdp a;
    int c = a.add_location("c", true);
    int win = a.add_location("win", false);
    int trap = a.add_location("trap", false);
    a.add_zero(c, 0, win, Rational(1, 2));
    a.add_zero(c, 0, trap, Rational(1, 2));
    a.add_pos(c, 0, win, Rational(1, 2));
    a.add_pos(c, 0, trap, Rational(1, 2));
    a.add_zero(win, 0, win);
    a.add_pos(win, 0, win);
    a.add_zero(trap, 0, trap);
    a.add_pos(trap, 0, trap);
    return a;
}

}  // namespace

TEST_CASE("wellformedness and completion") {
    OcMdp a;
    int q = a.add_location("q", false);
    a.add_pos(q, 0, q);
    CHECK(a.wellformedness_defects().size() == 1);

    auto done = complete_wellformed(a);
    CHECK(done.mdp.wellformedness_defects().empty());
    CHECK(done.additions.size() == 1);

    auto again = complete_wellformed(done.mdp);
    CHECK(again.additions.empty());  // idempotent

    CHECK_THROWS_AS(induced_finite_mdp(a, q, 0, 4, FrontierMode::Pessimistic), StructuralError);
}

TEST_CASE("exact values on the coin") {
    OcMdp a = coin_example();
    FiniteMdp m = induced_finite_mdp(a, a.require_location("c"), 0, 2, FrontierMode::Pessimistic);
    auto target = m.target_vertices({a.require_location("win")});
    auto values = exact_max_reach_values(m, target);
    CHECK(values[m.vertex_of(a.require_location("c"), 0)] == Rational(1, 2));
    CHECK(values[m.vertex_of(a.require_location("win"), 0)] == 1);
    CHECK(values[m.vertex_of(a.require_location("trap"), 0)] == 0);

    auto sure = almost_sure_reach(m, target);
    CHECK(sure[m.vertex_of(a.require_location("win"), 0)]);
    CHECK_FALSE(sure[m.vertex_of(a.require_location("c"), 0)]);
    CHECK_FALSE(sure[m.vertex_of(a.require_location("trap"), 0)]);
}

TEST_CASE("values satisfy the optimality equations") {
    OcMdp a = coin_example();
    FiniteMdp m = induced_finite_mdp(a, a.require_location("c"), 0, 3, FrontierMode::Pessimistic);
    auto target = m.target_vertices({a.require_location("win")});
    auto values = exact_max_reach_values(m, target);
    for (int v = 0; v < m.vertex_count(); ++v) {
        if (target[v]) {
            CHECK(values[v] == 1);
            continue;
        }
        if (m.probabilistic[v]) {
            Rational sum = 0;
            for (const auto& e : m.succ[v]) sum += e.prob * values[e.dst];
            CHECK(values[v] == sum);
        } else {
            Rational best = 0;
            for (const auto& e : m.succ[v]) best = std::max(best, values[e.dst]);
            CHECK(values[v] == best);
        }
    }
    // Value-one set coincides with the qualitative analysis.
    auto sure = almost_sure_reach(m, target);
    for (int v = 0; v < m.vertex_count(); ++v) CHECK(sure[v] == (values[v] == 1));
}

TEST_CASE("residue-cycle gadget walks to the target exactly on matches") {
    std::vector<int> primes{2};
    CrrMdpGadget g = mdp_of_crr_formula(CrrFormula::leaf(0, 1), primes);
    CHECK(g.mdp.wellformedness_defects().empty());

    FiniteMdp m1 = induced_finite_mdp(g.mdp, g.entry, 1, 1, FrontierMode::Pessimistic);
    auto sure1 = almost_sure_reach(m1, m1.target_vertices(g.targets));
    CHECK(sure1[m1.vertex_of(g.entry, 1)]);

    FiniteMdp m2 = induced_finite_mdp(g.mdp, g.entry, 2, 2, FrontierMode::Pessimistic);
    auto values2 = exact_max_reach_values(m2, m2.target_vertices(g.targets));
    CHECK(values2[m2.vertex_of(g.entry, 2)] < 1);
}

TEST_CASE("disjunction lets the controller pick the matching branch") {
    std::vector<int> primes{2};
    CrrFormula f = CrrFormula::disj2(CrrFormula::leaf(0, 0), CrrFormula::leaf(0, 1));
    CrrMdpGadget g = mdp_of_crr_formula(f, primes);
    for (std::int64_t v = 0; v <= 3; ++v) {
        FiniteMdp m = induced_finite_mdp(g.mdp, g.entry, v, v, FrontierMode::Pessimistic);
        auto values = exact_max_reach_values(m, m.target_vertices(g.targets));
        CHECK(values[m.vertex_of(g.entry, v)] == 1);
    }
}

TEST_CASE("conjunction bound for an unsatisfiable test") {
    std::vector<int> primes{2};
    CrrFormula f = CrrFormula::conj2(CrrFormula::leaf(0, 0), CrrFormula::leaf(0, 1));
    CrrMdpGadget g = mdp_of_crr_formula(f, primes);
    FiniteMdp m = induced_finite_mdp(g.mdp, g.entry, 1, 1, FrontierMode::Pessimistic);
    auto values = exact_max_reach_values(m, m.target_vertices(g.targets));
    Rational v = values[m.vertex_of(g.entry, 1)];
    CHECK(v == Rational(1, 2));
    // One minus two to the minus size of the formula.
    CHECK(v <= 1 - Rational(1, 8));
    CHECK_THROWS_AS(mdp_of_crr_formula(CrrFormula::disj({}), primes), StructuralError);
}

TEST_CASE("frontier modes sandwich and are monotone in the bound") {
    // A climbing chain that pays off only high up: value depends on the cut.
    OcMdp a;
    int q = a.add_location("q", true);
    int goal = a.add_location("goal", false);
    a.add_zero(q, 1, q, Rational(1, 2));
    a.add_zero(q, 0, goal, Rational(1, 2));
    a.add_pos(q, 1, q, Rational(1, 2));
    a.add_pos(q, -1, q, Rational(1, 2));
    a.add_zero(goal, 0, goal);
    a.add_pos(goal, 0, goal);
    std::vector<int> targets{goal};

    auto value_at = [&](std::int64_t bound, FrontierMode mode) {
        FiniteMdp m = induced_finite_mdp(a, q, 0, bound, mode);
        auto values = exact_max_reach_values(m, m.target_vertices(targets));
        return values[m.vertex_of(q, 0)];
    };
    for (std::int64_t b : {2, 4, 6}) {
        Rational p1 = value_at(b, FrontierMode::Pessimistic);
        Rational p2 = value_at(b + 2, FrontierMode::Pessimistic);
        Rational o2 = value_at(b + 2, FrontierMode::Optimistic);
        Rational o1 = value_at(b, FrontierMode::Optimistic);
        CHECK(p1 <= p2);
        CHECK(p2 <= o2);
        CHECK(o2 <= o1);
        CHECK(p1 < o1);  // the cut genuinely matters here
    }
}

TEST_CASE("preview iteration approximates the exact values") {
    OcMdp a = coin_example();
    FiniteMdp m = induced_finite_mdp(a, a.require_location("c"), 0, 2, FrontierMode::Pessimistic);
    auto target = m.target_vertices({a.require_location("win")});
    auto exact = exact_max_reach_values(m, target);
    auto approx = approx_max_reach_values(m, target);
    for (int v = 0; v < m.vertex_count(); ++v)
        CHECK(std::abs(approx[v] - exact[v].convert_to<double>()) < 1e-9);
}

TEST_CASE("serial mdp composition matches the leaf string on a tiny instance") {
    std::vector<int> primes{2, 3};
    const int m = 2;
    CrrFormula even_test = CrrFormula::leaf(0, 0);  // word 1010
    CrrFormula g = crr_equals_formula(primes, 4);

    Nfa chain;
    for (int i = 0; i <= 4; ++i) chain.add_state("c" + std::to_string(i));
    chain.initial = 0;
    chain.final_states[4] = true;
    chain.transitions.emplace_back(0, 1, 1);
    chain.transitions.emplace_back(1, 0, 2);
    chain.transitions.emplace_back(2, 1, 3);
    chain.transitions.emplace_back(3, 0, 4);

    SerialMdp yes = mdp_serial_compose(chain, even_test, g, primes, m);
    FiniteMdp fm = induced_finite_mdp(yes.mdp, yes.start, 0, 5, FrontierMode::Pessimistic);
    auto values = exact_max_reach_values(fm, fm.target_vertices(yes.targets));
    CHECK(values[fm.vertex_of(yes.start, 0)] == 1);

    SerialMdp no = mdp_serial_compose(chain, CrrFormula::leaf(0, 1), g, primes, m);
    FiniteMdp fn = induced_finite_mdp(no.mdp, no.start, 0, 30, FrontierMode::Optimistic);
    auto nvalues = exact_max_reach_values(fn, fn.target_vertices(no.targets));
    CHECK(nvalues[fn.vertex_of(no.start, 0)] < 1);

    // On this larger instance too: the value-one set coincides with the
    // qualitative analysis, and the optimality equations hold exactly.
    auto ntarget = fn.target_vertices(no.targets);
    auto nsure = almost_sure_reach(fn, ntarget);
    for (int v = 0; v < fn.vertex_count(); ++v) {
        CHECK(nsure[v] == (nvalues[v] == 1));
        if (ntarget[v]) continue;
        if (fn.probabilistic[v]) {
            Rational sum = 0;
            for (const auto& e : fn.succ[v]) sum += e.prob * nvalues[e.dst];
            CHECK(nvalues[v] == sum);
        } else {
            Rational best = 0;
            for (const auto& e : fn.succ[v]) best = std::max(best, nvalues[e.dst]);
            CHECK(nvalues[v] == best);
        }
    }

    // Final states with outgoing transitions are rejected.
    Nfa bad = chain;
    bad.transitions.emplace_back(4, 0, 4);
    CHECK_THROWS_AS(mdp_serial_compose(bad, even_test, g, primes, m), StructuralError);
}

TEST_CASE("ocmdp text round trip") {
    OcMdp a = coin_example();
    std::vector<int> targets{a.require_location("win")};
    std::string text = render_ocmdp(a, targets);
    std::vector<int> back;
    OcMdp b = parse_ocmdp_text(text, &back);
    CHECK(render_ocmdp(b, back) == render_ocmdp(b, {b.require_location("win")}));
    REQUIRE(back.size() == 1);
    CHECK(b.location_name(back[0]) == "win");
    CHECK(b.probabilistic(b.require_location("c")));
    CHECK_FALSE(b.probabilistic(b.require_location("win")));

    CHECK_THROWS_AS(parse_ocmdp_text("ocmdp\nnloc a\nzero a 0 a 1/2\n", nullptr), ParseError);
    CHECK_THROWS_AS(parse_ocmdp_text("ocmdp\nploc a\nzero a 0 a\n", nullptr), ParseError);
}
