#include <sstream>

#include "doctest.h"
#include "ocmc/checker.hpp"
#include "ocmc/error.hpp"
#include "ocmc/gadgets.hpp"

using namespace ocmc;

namespace {

// Brute-force QBF validity.
bool qbf_valid(const Qbf& q) {
    auto go = [&](auto&& self, int i, Big assignment) -> bool {
        if (i == 0) return q.matrix.eval_bits(assignment);
        Big with = assignment | (Big(1) << (i - 1));
        if (q.exists[i - 1]) return self(self, i - 1, assignment) || self(self, i - 1, with);
        return self(self, i - 1, assignment) && self(self, i - 1, with);
    };
    return go(go, static_cast<int>(q.exists.size()), 0);
}

// Traversability of a residue gadget at a given entry counter: the guarded
// until reaching the exit port.
bool gadget_traversable(GadgetOcn g, const Big& m, std::uint64_t bound) {
    g.ocp.add_label("at_out", g.out);
    Formula goal = Formula::eu(fixed_ef_formula(), Formula::atom("at_out"));
    CappedTable t = evaluate_capped(g.ocp, goal, bound);
    return t.holds(g.in, m.convert_to<std::uint64_t>());
}

}  // namespace

TEST_CASE("figure7 transcription") {
    Ocp o = figure7();
    CHECK(o.location_count() == 10);
    CHECK(o.pos_transitions().size() == 23);
    CHECK(o.zero_transitions().size() == 5);
    CHECK(is_net(o));

    // f and q0 deadlock at counter zero; those deadlocks carry the zero tests.
    CHECK(successors(o, {o.require_location("f"), 0}).empty());
    CHECK(successors(o, {o.require_location("q0"), 0}).empty());

    // Every location is labeled by its own name.
    for (int q = 0; q < o.location_count(); ++q) CHECK(o.has_label(o.location_name(q), q));
}

TEST_CASE("divisibility family against arithmetic, small range") {
    Ocp o = figure7();
    BoundedOracle oracle(o);
    auto family = phi_div_family(3);
    int t = o.require_location("t");
    int tbar = o.require_location("tbar");
    for (int i = 1; i <= 3; ++i) {
        for (Big n = 0; n <= 40; ++n) {
            bool divides = n % (Big(1) << i) == 0;
            CHECK(oracle.check(family[i - 1], t, n, 128) ==
                  (divides ? Three::True : Three::False));
            CHECK(oracle.check(family[i - 1], tbar, n, 128) ==
                  (divides ? Three::False : Three::True));
        }
    }
    CHECK(oracle.honesty_violations() == 0);
}

TEST_CASE("bit family against arithmetic, small range") {
    Ocp o = figure7();
    BoundedOracle oracle(o);
    auto family = psi_bit_family(3);
    int tbar = o.require_location("tbar");
    for (int i = 1; i <= 3; ++i) {
        for (Big n = 0; n <= 40; ++n) {
            CHECK(oracle.check(family[i - 1], tbar, n, 128) ==
                  (bit_at(i, n) == 1 ? Three::True : Three::False));
        }
    }
}

TEST_CASE("qbf reduction basics") {
    Ocp o = figure7();
    int tbar = o.require_location("tbar");

    Qbf ex1{{true}, BoolFormula::var(1)};
    CHECK(qbf_valid(ex1));
    CHECK(evaluate_capped(o, qbf_reduce(ex1), 8).holds(tbar, 0));

    Qbf all1{{false}, BoolFormula::var(1)};
    CHECK_FALSE(qbf_valid(all1));
    CHECK_FALSE(evaluate_capped(o, qbf_reduce(all1), 8).holds(tbar, 0));

    // forall x2 exists x1 (x1 <-> x2), spelled with and/not.
    BoolFormula x1 = BoolFormula::var(1), x2 = BoolFormula::var(2);
    BoolFormula iff = BoolFormula::disj(BoolFormula::conj(x1, x2),
                                        BoolFormula::conj(BoolFormula::negation(x1),
                                                          BoolFormula::negation(x2)));
    Qbf q{{true, false}, iff};  // exists[0] for x1 (inner), forall x2 (outer)
    CHECK(qbf_valid(q));
    CHECK(evaluate_capped(o, qbf_reduce(q), 16).holds(tbar, 0));
}

TEST_CASE("qbf text format") {
    Qbf q = parse_qbf("forall x2 exists x1 : (x1 & ~x2) | (~x1 & x2)");
    CHECK(q.exists.size() == 2);
    CHECK(q.exists[0]);       // x1 inner, existential
    CHECK_FALSE(q.exists[1]); // x2 outer, universal
    CHECK(qbf_valid(q));
    CHECK_THROWS_AS(parse_qbf("exists x1 exists x3 : x1"), ParseError);
    CHECK_THROWS_AS(parse_qbf("exists x1 : x2"), ParseError);
}

TEST_CASE("eliminate_negations") {
    std::vector<int> primes{2, 3};
    CrrFormula a = eliminate_negations(CrrFormula::neg_leaf(0, 0), primes);
    CHECK(a.kind() == CrrFormula::Kind::Leaf);
    CHECK(a.residue() == 1);

    CrrFormula b = eliminate_negations(CrrFormula::neg_leaf(1, 1), primes);
    REQUIRE(b.kind() == CrrFormula::Kind::Or);
    CHECK(b.children().size() == 2);
    CHECK(b.children()[0].residue() == 0);
    CHECK(b.children()[1].residue() == 2);

    // Double negation via push, then elimination leaves a plain leaf.
    CrrFormula c = negate_pushed(negate_pushed(CrrFormula::leaf(0, 1)));
    CHECK(c.kind() == CrrFormula::Kind::Leaf);
    CHECK(eliminate_negations(c, primes).kind() == CrrFormula::Kind::Leaf);

    // Semantics preserved over one-hot assignments.
    std::vector<int> p3{2, 3, 5};
    CrrFormula f = parse_crr_formula("~x1_0 & (x2_1 | ~x3_4)");
    CrrFormula g = eliminate_negations(f, p3);
    CHECK(g.negation_free());
    for (Big m = 0; m < 30; ++m) CHECK(f.eval(crr(p3, m)) == g.eval(crr(p3, m)));
}

TEST_CASE("fixed guard formula") {
    Formula f = fixed_ef_formula();
    CHECK(is_ef(f));
    CHECK(lud(f) == 1);
    CHECK(render_formula(f) == "alpha -> EX (beta & EF ~EX gamma)");
}

TEST_CASE("residue gadget traversals") {
    std::vector<int> p1{2};
    CrrFormula f = CrrFormula::leaf(0, 0);
    GadgetOcn g = ocn_of_crr_formula(f, p1);
    CHECK(gadget_traversable(g, 0, 4));
    CHECK_FALSE(gadget_traversable(g, 1, 4));

    std::vector<int> p2{2, 3};
    CrrFormula h = CrrFormula::conj2(CrrFormula::leaf(0, 1), CrrFormula::leaf(1, 2));
    GadgetOcn gh = ocn_of_crr_formula(h, p2);
    CHECK(gadget_traversable(gh, 5, 8));
    CHECK_FALSE(gadget_traversable(gh, 4, 8));
    CHECK_FALSE(gadget_traversable(gh, 3, 8));

    CHECK_THROWS_AS(ocn_of_crr_formula(CrrFormula::neg_leaf(0, 0), p1), StructuralError);
}

TEST_CASE("residue gadget equivalence, exhaustive small formulas") {
    std::vector<int> primes{2, 3};
    std::vector<CrrFormula> leaves;
    for (int i = 0; i < 2; ++i)
        for (int r = 0; r < primes[i]; ++r) leaves.push_back(CrrFormula::leaf(i, r));

    std::vector<CrrFormula> family = leaves;
    for (const auto& a : leaves)
        for (const auto& b : leaves) {
            family.push_back(CrrFormula::conj2(a, b));
            family.push_back(CrrFormula::disj2(a, b));
        }
    for (const auto& f : family) {
        GadgetOcn g = ocn_of_crr_formula(f, primes);
        for (Big m = 0; m < 6; ++m)
            CHECK(gadget_traversable(g, m, 8) == f.eval(crr(primes, m)));
    }
}

TEST_CASE("crr_equals_formula") {
    CrrFormula f = crr_equals_formula({2, 3}, 4);
    REQUIRE(f.kind() == CrrFormula::Kind::And);
    CHECK(f.children()[0].residue() == 0);
    CHECK(f.children()[1].residue() == 1);
    for (Big m = 0; m < 6; ++m) CHECK(f.eval(crr({2, 3}, m)) == (m == 4));

    CrrFormula zero = crr_equals_formula({2, 3}, 0);
    for (const auto& c : zero.children()) CHECK(c.residue() == 0);
}

TEST_CASE("crr_formula_of_predicate round-trips the truth table") {
    std::vector<int> primes{2, 3};
    for (unsigned mask = 0; mask < 16; ++mask) {
        std::vector<bool> truth(4);
        for (int v = 0; v < 4; ++v) truth[v] = (mask >> v) & 1;
        CrrFormula f = crr_formula_of_predicate(truth, primes, 2);
        for (int v = 0; v < 4; ++v) CHECK(f.eval(crr(primes, v)) == truth[v]);
        // Above the table the predicate is false.
        CHECK_FALSE(f.eval(crr(primes, 4)));
        CHECK_FALSE(f.eval(crr(primes, 5)));
    }
    CrrFormula empty = crr_formula_of_predicate({false, false}, {2, 3}, 1);
    CHECK(empty.kind() == CrrFormula::Kind::Or);
    CHECK(empty.children().empty());
}

TEST_CASE("leafstring oracle") {
    std::vector<int> primes{2, 3};
    // Starts-with-1 automaton.
    Nfa a;
    int s0 = a.add_state("s0");
    int sf = a.add_state("sf");
    a.initial = s0;
    a.final_states[sf] = true;
    a.transitions.emplace_back(s0, 1, sf);
    a.transitions.emplace_back(sf, 0, sf);
    a.transitions.emplace_back(sf, 1, sf);

    // Even test: word over M=0..3 is 1010.
    CrrFormula even_test = CrrFormula::leaf(0, 0);
    CHECK(leafstring_oracle(a, even_test, primes, 2));
    // Odd test: word 0101 does not start with 1.
    CHECK_FALSE(leafstring_oracle(a, CrrFormula::leaf(0, 1), primes, 2));
    // Empty word: accepted only from a final initial state.
    CHECK_FALSE(leafstring_oracle(a, even_test, primes, 0));
}

TEST_CASE("serial composition, both variants") {
    std::vector<int> primes{2, 3};
    const int m = 2;
    CrrFormula g = crr_equals_formula(primes, 4);

    // Chain automaton accepting exactly 1010.
    Nfa chain;
    for (int i = 0; i <= 4; ++i) chain.add_state("c" + std::to_string(i));
    chain.initial = 0;
    chain.final_states[4] = true;
    chain.transitions.emplace_back(0, 1, 1);
    chain.transitions.emplace_back(1, 0, 2);
    chain.transitions.emplace_back(2, 1, 3);
    chain.transitions.emplace_back(3, 0, 4);

    CrrFormula even_test = CrrFormula::leaf(0, 0);  // word 1010
    CrrFormula odd_test = CrrFormula::leaf(0, 1);   // word 0101

    for (auto variant : {SerialVariant::Until, SerialVariant::Eg}) {
        SerialComposition yes = serial_compose(chain, even_test, g, primes, m, variant);
        CHECK(leafstring_oracle(chain, even_test, primes, m));
        CHECK(evaluate_capped(yes.ocp, yes.goal, 8).holds(yes.start, 0));

        SerialComposition no = serial_compose(chain, odd_test, g, primes, m, variant);
        CHECK_FALSE(leafstring_oracle(chain, odd_test, primes, m));
        CHECK_FALSE(evaluate_capped(no.ocp, no.goal, 8).holds(no.start, 0));
    }
}

TEST_CASE("serial composition never drives automaton states past the window") {
    std::vector<int> primes{2, 3};
    const int m = 2;
    Nfa a;
    a.add_state("s0");
    a.add_state("s1");
    a.initial = 0;
    a.final_states[1] = true;
    a.transitions.emplace_back(0, 1, 0);
    a.transitions.emplace_back(0, 0, 0);
    a.transitions.emplace_back(0, 1, 1);
    SerialComposition sc =
        serial_compose(a, CrrFormula::leaf(0, 0), crr_equals_formula(primes, 4), primes, m,
                       SerialVariant::Until);

    // Walk the guarded reachability relation and record automaton-state
    // counters.
    const std::uint64_t bound = 12;
    CappedTable guard = evaluate_capped(sc.ocp, fixed_ef_formula(), bound);
    std::vector<std::vector<bool>> seen(sc.ocp.location_count(),
                                        std::vector<bool>(bound + 1, false));
    std::vector<Configuration> work{{sc.start, 0}};
    seen[sc.start][0] = true;
    Big max_nfa_counter = 0;
    while (!work.empty()) {
        Configuration c = work.back();
        work.pop_back();
        if (sc.ocp.location_name(c.location).rfind("n.", 0) == 0)
            max_nfa_counter = std::max(max_nfa_counter, c.counter);
        if (!guard.holds(c.location, c.counter.convert_to<std::uint64_t>())) continue;
        for (const auto& nx : successors(sc.ocp, c)) {
            if (nx.counter > bound) continue;
            auto ctr = nx.counter.convert_to<std::size_t>();
            if (!seen[nx.location][ctr]) {
                seen[nx.location][ctr] = true;
                work.push_back(nx);
            }
        }
    }
    CHECK(max_nfa_counter <= 4);
}

TEST_CASE("layered circuits") {
    std::vector<int> primes{2};

    LayeredCircuit single;
    single.layers = 1;
    LayeredCircuit::Gate in;
    in.name = "g";
    in.layer = 1;
    in.prime_index = 0;
    in.residue = 0;
    single.gates.push_back(in);
    single.output = 0;
    single.validate();

    GadgetOcn g = ocn_of_circuit(single, primes);
    Formula phi = ef_of_circuit(single);
    CHECK(is_ef(phi));
    CappedTable t = evaluate_capped(g.ocp, phi, 4);
    CHECK(t.holds(g.in, 0));
    CHECK_FALSE(t.holds(g.in, 1));
    CHECK(t.holds(g.in, 2));
}

TEST_CASE("circuit text format and evaluation") {
    std::istringstream in(
        "circuit\n"
        "gate o OR\n"
        "gate a1 AND\n"
        "gate i0 INPUT x1_0\n"
        "gate i1 INPUT x2_1\n"
        "edge o a1\n"
        "edge a1 i0\n"
        "edge a1 i1\n"
        "output o\n");
    LayeredCircuit c = parse_circuit(in);
    CHECK(c.layers == 3);
    std::vector<int> primes{2, 3};
    for (Big m = 0; m < 6; ++m) CHECK(c.eval(crr(primes, m)) == (m % 2 == 0 && m % 3 == 1));

    GadgetOcn g = ocn_of_circuit(c, primes);
    Formula phi = ef_of_circuit(c);
    CHECK(render_formula(phi) == "EX AX EX EF ~EX gamma");
    CappedTable t = evaluate_capped(g.ocp, phi, 8);
    for (std::uint64_t m = 0; m < 6; ++m)
        CHECK(t.holds(g.in, m) == c.eval(crr(primes, static_cast<int>(m))));
}

TEST_CASE("or-over-everything circuit is always satisfied") {
    std::vector<int> primes{2};
    CrrFormula dnf = CrrFormula::disj2(CrrFormula::leaf(0, 0), CrrFormula::leaf(0, 1));
    LayeredCircuit c = circuit_of_dnf(CrrFormula::disj(
        {CrrFormula::conj({CrrFormula::leaf(0, 0)}), CrrFormula::conj({CrrFormula::leaf(0, 1)})}));
    (void)dnf;
    GadgetOcn g = ocn_of_circuit(c, primes);
    Formula phi = ef_of_circuit(c);
    CappedTable t = evaluate_capped(g.ocp, phi, 6);
    for (std::uint64_t m = 0; m <= 4; ++m) CHECK(t.holds(g.in, m));
}

TEST_CASE("lexmax oracle") {
    CHECK_FALSE(lexmax_even_oracle(BoolFormula::var(1), 1));            // max 1, odd
    CHECK(lexmax_even_oracle(BoolFormula::negation(BoolFormula::var(1)), 1));  // max 0
    CHECK_FALSE(lexmax_even_oracle(BoolFormula::constant(false), 2));   // unsatisfiable
}

TEST_CASE("wagner reduction agrees with the oracle on the named cases") {
    auto verdict = [&](const BoolFormula& psi, int m) {
        WagnerReduction w = wagner_reduce(psi, m);
        Big product = 1;
        for (int p : w.primes) product *= p;
        std::uint64_t bound = (product + 2).convert_to<std::uint64_t>();
        return evaluate_capped(w.ocp, w.goal, bound).holds(w.q0, 0);
    };
    BoolFormula x1 = BoolFormula::var(1), x2 = BoolFormula::var(2);

    CHECK_FALSE(verdict(BoolFormula::disj(x1, x2), 2));                        // max 3, odd
    CHECK_FALSE(verdict(BoolFormula::conj(x1, BoolFormula::negation(x2)), 2)); // max 1, odd
    CHECK(verdict(BoolFormula::conj(BoolFormula::negation(x1), x2), 2));       // max 2, even
    CHECK_FALSE(verdict(BoolFormula::constant(false), 2));                     // unsat
    CHECK(verdict(BoolFormula::negation(x1), 1));                              // max 0, even
    CHECK_FALSE(verdict(x1, 1));                                               // max 1, odd
    CHECK(verdict(BoolFormula::conj(BoolFormula::negation(x1), x2), 3));       // max 6, even

    CHECK(is_ef(wagner_reduce(BoolFormula::disj(x1, x2), 2).goal));
    CHECK_THROWS_AS(wagner_reduce(x1, 0), DomainError);
}

TEST_CASE("a corrupted net transcription is caught by the arithmetic") {
    // Drop one parity-tail edge and the divisibility family must disagree
    // with the arithmetic somewhere in a small range.
    std::string text = render_ocp(figure7());
    std::string dropped;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line == "pos f -1 g") continue;
        dropped += line + "\n";
    }
    Ocp broken = parse_ocp_text(dropped);
    REQUIRE(broken.pos_transitions().size() == figure7().pos_transitions().size() - 1);
    BoundedOracle oracle(broken);
    Formula phi1 = phi_div(1);
    bool mismatch = false;
    for (Big n = 0; n <= 20 && !mismatch; ++n) {
        Three want = n % 2 == 0 ? Three::True : Three::False;
        mismatch = oracle.check(phi1, broken.require_location("t"), n, 64) != want;
    }
    CHECK(mismatch);
}

TEST_CASE("generated goal formulas survive a text round trip") {
    BoolFormula x1 = BoolFormula::var(1), x2 = BoolFormula::var(2);
    Formula wg = wagner_reduce(BoolFormula::conj(BoolFormula::negation(x1), x2), 2).goal;
    CHECK(equal(parse_formula(render_formula(wg)), wg));

    std::vector<int> primes{2, 3};
    Nfa a;
    a.add_state("s0");
    a.add_state("sf");
    a.initial = 0;
    a.final_states[1] = true;
    a.transitions.emplace_back(0, 1, 1);
    SerialComposition sc = serial_compose(a, CrrFormula::leaf(0, 0),
                                          crr_equals_formula(primes, 4), primes, 2,
                                          SerialVariant::Until);
    CHECK(equal(parse_formula(render_formula(sc.goal)), sc.goal));
    CHECK(equal(parse_formula(render_formula(qbf_reduce(parse_qbf("exists x1 : x1")))),
                qbf_reduce(parse_qbf("exists x1 : x1"))));
}

TEST_CASE("dimacs parsing") {
    std::istringstream in(
        "c small instance\n"
        "p cnf 2 2\n"
        "1 -2 0\n"
        "2 0\n");
    int nvars = 0;
    BoolFormula f = parse_dimacs_cnf(in, &nvars);
    CHECK(nvars == 2);
    // (x1 | ~x2) & x2 is satisfied only when both are set.
    CHECK(f.eval_bits(3));
    CHECK_FALSE(f.eval_bits(1));
    CHECK_FALSE(f.eval_bits(2));
    CHECK_FALSE(f.eval_bits(0));
}
