#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ocmc {

enum class CtlOp {
    True,
    False,
    Atom,
    Not,
    And,
    ExistsNext,
    ExistsUntil,
    ExistsWeakUntil,
    // Sugar, kept in the tree for rendering and desugared for measures
    // and evaluation.
    Or,
    Implies,
    ForallNext,
    ExistsFinally,
    ExistsGlobally,
};

/// Immutable CTL formula. Copies share structure; node identity doubles as
/// a memoization key, so evaluators handle shared subtrees once.
class Formula {
public:
    Formula() = default;

    static Formula tru();
    static Formula fals();
    static Formula atom(std::string name);
    static Formula negation(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula ex(Formula f);
    static Formula ax(Formula f);
    static Formula eu(Formula a, Formula b);
    static Formula ewu(Formula a, Formula b);
    static Formula ef(Formula f);
    static Formula eg(Formula f);

    CtlOp op() const;
    const std::string& atom_name() const;
    const Formula& left() const;   // first child
    const Formula& right() const;  // second child (binary ops only)
    int arity() const;

    bool valid() const { return node_ != nullptr; }
    const void* id() const { return node_.get(); }
    bool same_node(const Formula& o) const { return node_ == o.node_; }

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(CtlOp op, std::string name, Formula a, Formula b);
    std::shared_ptr<const Node> node_;
};

// Structural equality (ignores sharing).
bool equal(const Formula& a, const Formula& b);

// Rewrites sugar into the core connectives: atoms, true/false, ~, &, EX,
// E[.U.], E[.W.]. The result is what the measures and engines operate on.
Formula desugar(const Formula& f);
bool is_core(const Formula& f);

// |phi| on the desugared tree: atoms and constants count 1, every
// connective adds 1 (binary ops add 1 plus both operands).
std::uint64_t formula_size(const Formula& f);

// Leftward until depth: only the left operand of until/weak-until deepens.
std::uint64_t lud(const Formula& f);

// Membership in the EF fragment: atoms, ~, &, EX, EF and sugar reducible
// to those.
bool is_ef(const Formula& f);

// Concrete syntax. parse_formula round-trips with render_formula.
Formula parse_formula(const std::string& text);
std::string render_formula(const Formula& f);

}  // namespace ocmc
