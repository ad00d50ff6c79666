#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ocmc/arith.hpp"
#include "ocmc/ctl.hpp"
#include "ocmc/ocp.hpp"

namespace ocmc {

/// Boolean formula over residue indicator variables x_{i,r} (i-th prime,
/// residue r). And/Or are n-ary; an empty Or is constant false, an empty
/// And constant true. Negation appears only on leaves.
class CrrFormula {
public:
    enum class Kind { Leaf, NegLeaf, And, Or };

    static CrrFormula leaf(int prime_index, int residue);
    static CrrFormula neg_leaf(int prime_index, int residue);
    static CrrFormula conj(std::vector<CrrFormula> children);
    static CrrFormula disj(std::vector<CrrFormula> children);
    static CrrFormula conj2(CrrFormula a, CrrFormula b);
    static CrrFormula disj2(CrrFormula a, CrrFormula b);

    Kind kind() const;
    int prime_index() const;  // leaves, 0-based
    int residue() const;
    const std::vector<CrrFormula>& children() const;

    bool eval(const CrrAssignment& a) const;
    int size() const;  // node count
    bool negation_free() const;
    int conjunction_count() const;

    std::string to_string() const;

private:
    struct Node;
    static CrrFormula make(Kind k, int prime_index, int residue, std::vector<CrrFormula> children);
    std::shared_ptr<const Node> node_;
};

// Replaces ~x_{i,r} by the disjunction of the other residues of prime i.
// Requires negations at leaves only (see push_negations).
CrrFormula eliminate_negations(const CrrFormula& f, const std::vector<int>& primes);

// De Morgan normalization: negation of a whole formula, with negations
// pushed to the leaves.
CrrFormula negate_pushed(const CrrFormula& f);

// Parses the x<i>_<r> syntax with &, |, ~ and parentheses; i is 1-based.
CrrFormula parse_crr_formula(const std::string& text);

/// Boolean formula over variables x_1..x_m, used for QBF matrices and for
/// the lex-max reduction input.
class BoolFormula {
public:
    enum class Kind { Var, Not, And, Or, Const };

    static BoolFormula var(int index);  // 1-based
    static BoolFormula negation(BoolFormula f);
    static BoolFormula conj(BoolFormula a, BoolFormula b);
    static BoolFormula disj(BoolFormula a, BoolFormula b);
    static BoolFormula constant(bool value);

    Kind kind() const;
    int var_index() const;
    bool const_value() const;
    const BoolFormula& left() const;
    const BoolFormula& right() const;

    int max_var() const;
    int size() const;
    // Assignment given as bits of `m`: variable x_i reads bit_at(i, m).
    bool eval_bits(const Big& m) const;

    std::string to_string() const;

private:
    struct Node;
    static BoolFormula make(Kind k, int var, bool value, BoolFormula a, BoolFormula b);
    std::shared_ptr<const Node> node_;
};

BoolFormula parse_bool_formula(const std::string& text);

struct Qbf {
    std::vector<bool> exists;  // exists[i] for x_{i+1}; applied outermost = highest index
    BoolFormula matrix;
};

// `forall x2 exists x1 : matrix` — quantifiers outermost first.
Qbf parse_qbf(const std::string& text);

// DIMACS CNF reader for the lex-max reduction input.
BoolFormula parse_dimacs_cnf(std::istream& in, int* var_count);

/// A builder output with distinguished entry/exit control locations.
struct GadgetOcn {
    Ocp ocp;
    int in = -1;
    int out = -1;  // -1 when the builder has no exit port
};

// The fixed ten-location one-counter net used by the formula families
// below. Every location carries its own proposition.
Ocp figure7();

// Formulas over figure7(): phi_div(i) distinguishes divisibility of the
// counter by 2^i (at location t: divisible; at tbar: not divisible), and
// psi_bit(i) holds at tbar exactly when bit i of the counter is 1.
Formula phi_div(int i);
Formula psi_bit(int i);

// Builds the whole family once so higher entries share lower ones.
std::vector<Formula> phi_div_family(int up_to);
std::vector<Formula> psi_bit_family(int up_to);

// Encodes validity of a prenex QBF as a formula over figure7(), evaluated
// at (tbar, 0).
Formula qbf_reduce(const Qbf& alpha);

// Fixed formula alpha -> EX (beta & EF ~EX gamma); the per-location guard
// checked along gadget traversals.
Formula fixed_ef_formula();

// Gadget whose in->out traversals under fixed_ef_formula() exist exactly
// when F holds of the entry counter's residues. F must be negation-free.
GadgetOcn ocn_of_crr_formula(const CrrFormula& f, const std::vector<int>& primes);

// Conjunction of residue indicators pinning a value congruent to `target`.
CrrFormula crr_equals_formula(const std::vector<int>& primes, const Big& target);

// DNF with one conjunct per set entry of the truth table (indexed by
// value). Evaluates on crr(primes, M) exactly to truth[M] for M < 2^m.
CrrFormula crr_formula_of_predicate(const std::vector<bool>& truth,
                                    const std::vector<int>& primes, int m);

// The word F(crr(0)) F(crr(1)) ... F(crr(2^m - 1)) fed to the automaton;
// ground truth for the serial compositions.
bool leafstring_oracle(const Nfa& a, const CrrFormula& f, const std::vector<int>& primes, int m);

enum class SerialVariant { Until, Eg };

struct SerialComposition {
    Ocp ocp;
    int start = -1;  // the automaton's initial state as a control location
    Formula goal;    // E[ guard U rho ] or EG guard
};

// Wires one gadget copy per automaton transition plus a terminal gadget
// recognizing counter value 2^m. The goal formula holds at (start, 0)
// exactly when the leaf string is accepted.
SerialComposition serial_compose(const Nfa& a, const CrrFormula& f, const CrrFormula& g,
                                 const std::vector<int>& primes, int m, SerialVariant variant);

/// Circuit organized in layers: layer 1 holds the single output gate,
/// layers 1..k alternate freely between AND and OR, layer k+1 holds input
/// gates labeled with residue indicators.
struct LayeredCircuit {
    struct Gate {
        std::string name;
        int layer = 0;           // 1..k+1
        bool is_and = false;     // layers 1..k
        int prime_index = -1;    // inputs only, 0-based
        int residue = -1;
        std::vector<int> children;
    };
    int layers = 0;  // k+1 >= 1
    std::vector<Gate> gates;
    int output = -1;

    void validate() const;
    bool eval(const CrrAssignment& a) const;
};

// Gates become control locations; input gates branch into residue testers.
GadgetOcn ocn_of_circuit(const LayeredCircuit& c, const std::vector<int>& primes);

// Modality prefix EX/AX per layer followed by the residue test suffix.
Formula ef_of_circuit(const LayeredCircuit& c);

// Layered form of a DNF produced by crr_formula_of_predicate (an Or of
// And-of-leaves conjuncts); rejects empty DNFs.
LayeredCircuit circuit_of_dnf(const CrrFormula& dnf);

// `gate`/`edge`/`output` text format.
LayeredCircuit parse_circuit(std::istream& in);

struct WagnerReduction {
    Ocp ocp;
    int q0 = -1;
    Formula goal;  // an EF formula
    std::vector<int> primes;
};

// Encodes: the lexicographically largest satisfying assignment of psi over
// x_1..x_m exists and is even. Verdict read at (q0, 0).
WagnerReduction wagner_reduce(const BoolFormula& psi, int m);

// Brute-force arbiter for wagner_reduce; m <= 20.
bool lexmax_even_oracle(const BoolFormula& psi, int m);

}  // namespace ocmc
