#include <random>

#include "doctest.h"
#include "ocmc/ctl.hpp"
#include "ocmc/error.hpp"
#include "ocmc/gadgets.hpp"

using namespace ocmc;

TEST_CASE("parsing the concrete syntax") {
    Formula f = parse_formula("E[ p U q ]");
    CHECK(f.op() == CtlOp::ExistsUntil);
    CHECK(f.left().op() == CtlOp::Atom);
    CHECK(f.left().atom_name() == "p");
    CHECK(f.right().atom_name() == "q");

    Formula g = parse_formula("EF p");
    CHECK(g.op() == CtlOp::ExistsFinally);
    CHECK(g.left().atom_name() == "p");

    Formula h = parse_formula("~EX g");
    CHECK(h.op() == CtlOp::Not);
    CHECK(h.left().op() == CtlOp::ExistsNext);
    CHECK(h.left().left().atom_name() == "g");

    CHECK_THROWS_AS(parse_formula("E[ p U q"), ParseError);
    CHECK_THROWS_AS(parse_formula("p & & q"), ParseError);
    CHECK_THROWS_AS(parse_formula("p q"), ParseError);
}

TEST_CASE("precedence") {
    CHECK(equal(parse_formula("a & b | c"),
                Formula::disj(Formula::conj(Formula::atom("a"), Formula::atom("b")),
                              Formula::atom("c"))));
    CHECK(equal(parse_formula("a -> b -> c"),
                Formula::implies(Formula::atom("a"),
                                 Formula::implies(Formula::atom("b"), Formula::atom("c")))));
    CHECK(equal(parse_formula("~a & b"),
                Formula::conj(Formula::negation(Formula::atom("a")), Formula::atom("b"))));
}

namespace {

std::mt19937_64 rng(7);

Formula random_formula(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
    switch (pick(rng)) {
        case 0:
            return Formula::atom(std::string(1, static_cast<char>('a' + pick(rng) % 3)));
        case 1:
            return Formula::tru();
        case 2:
            return Formula::fals();
        case 3:
            return Formula::negation(random_formula(depth - 1));
        case 4:
            return Formula::conj(random_formula(depth - 1), random_formula(depth - 1));
        case 5:
            return Formula::disj(random_formula(depth - 1), random_formula(depth - 1));
        case 6:
            return Formula::implies(random_formula(depth - 1), random_formula(depth - 1));
        case 7:
            return Formula::ex(random_formula(depth - 1));
        case 8:
            return Formula::ax(random_formula(depth - 1));
        case 9:
            return Formula::ef(random_formula(depth - 1));
        case 10:
            return Formula::eg(random_formula(depth - 1));
        default:
            return Formula::eu(random_formula(depth - 1), random_formula(depth - 1));
    }
}

}  // namespace

TEST_CASE("render/parse round trip") {
    for (int i = 0; i < 300; ++i) {
        Formula f = random_formula(4);
        std::string text = render_formula(f);
        Formula g = parse_formula(text);
        CHECK(equal(f, g));
        CHECK(render_formula(g) == text);
        // Measures are stable under re-parsing.
        CHECK(formula_size(f) == formula_size(g));
        CHECK(lud(f) == lud(g));
    }
}

TEST_CASE("size measure") {
    CHECK(formula_size(Formula::atom("p")) == 1);
    CHECK(formula_size(parse_formula("~p")) == 2);
    CHECK(formula_size(parse_formula("E[ p U q ]")) == 3);
    CHECK(formula_size(Formula::tru()) == 1);
}

TEST_CASE("leftward until depth") {
    CHECK(lud(parse_formula("EF (p & ~EX q)")) == 1);
    CHECK(lud(parse_formula("E[ E[ p U q ] U r ]")) == 2);
    CHECK(lud(parse_formula("E[ p U E[ q U r ] ]")) == 1);
    CHECK(lud(Formula::atom("p")) == 0);

    // EG adds a level, EF only forces level one.
    for (int i = 0; i < 100; ++i) {
        Formula f = random_formula(3);
        CHECK(lud(Formula::eg(f)) == lud(f) + 1);
        CHECK(lud(Formula::ef(f)) == std::max<std::uint64_t>(1, lud(f)));
    }
}

TEST_CASE("ef fragment membership") {
    CHECK(is_ef(parse_formula("EF (p & ~EX q)")));
    CHECK_FALSE(is_ef(parse_formula("E[ p U q ]")));
    CHECK(is_ef(fixed_ef_formula()));
    CHECK_FALSE(is_ef(parse_formula("EG p")));
    CHECK(is_ef(parse_formula("AX (p -> q | r)")));
}

TEST_CASE("desugaring is size-stable for the abbreviations") {
    Formula f = parse_formula("EF p");
    Formula core = desugar(f);
    CHECK(core.op() == CtlOp::ExistsUntil);
    CHECK(core.left().op() == CtlOp::True);
    Formula g = parse_formula("EG p");
    Formula gcore = desugar(g);
    CHECK(gcore.op() == CtlOp::ExistsWeakUntil);
    CHECK(gcore.right().op() == CtlOp::False);
    Formula a = parse_formula("AX p");
    CHECK(desugar(a).op() == CtlOp::Not);
}

TEST_CASE("phi_div family size grows linearly") {
    auto family = phi_div_family(13);
    auto delta = formula_size(family[2]) - formula_size(family[1]);
    for (int i = 2; i <= 12; ++i)
        CHECK(formula_size(family[i]) - formula_size(family[i - 1]) == delta);
}

TEST_CASE("phi_div and psi_bit leftward until depth") {
    auto family = phi_div_family(8);
    for (int i = 1; i <= 8; ++i) CHECK(lud(family[i - 1]) == static_cast<std::uint64_t>(i));
    auto psis = psi_bit_family(6);
    for (int i = 1; i <= 6; ++i) CHECK(lud(psis[i - 1]) == static_cast<std::uint64_t>(i));
}
