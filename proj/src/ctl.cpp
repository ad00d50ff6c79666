#include "ocmc/ctl.hpp"

#include <algorithm>
#include <unordered_map>

#include "ocmc/error.hpp"

namespace ocmc {

struct Formula::Node {
    CtlOp op;
    std::string name;  // Atom only
    Formula a, b;
};

namespace {

int op_arity(CtlOp op) {
    switch (op) {
        case CtlOp::True:
        case CtlOp::False:
        case CtlOp::Atom:
            return 0;
        case CtlOp::Not:
        case CtlOp::ExistsNext:
        case CtlOp::ForallNext:
        case CtlOp::ExistsFinally:
        case CtlOp::ExistsGlobally:
            return 1;
        default:
            return 2;
    }
}

}  // namespace

Formula Formula::make(CtlOp op, std::string name, Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->name = std::move(name);
    n->a = std::move(a);
    n->b = std::move(b);
    return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::tru() { return make(CtlOp::True, {}, {}, {}); }
Formula Formula::fals() { return make(CtlOp::False, {}, {}, {}); }
Formula Formula::atom(std::string name) { return make(CtlOp::Atom, std::move(name), {}, {}); }
Formula Formula::negation(Formula f) { return make(CtlOp::Not, {}, std::move(f), {}); }
Formula Formula::conj(Formula a, Formula b) { return make(CtlOp::And, {}, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return make(CtlOp::Or, {}, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) { return make(CtlOp::Implies, {}, std::move(a), std::move(b)); }
Formula Formula::ex(Formula f) { return make(CtlOp::ExistsNext, {}, std::move(f), {}); }
Formula Formula::ax(Formula f) { return make(CtlOp::ForallNext, {}, std::move(f), {}); }
Formula Formula::eu(Formula a, Formula b) { return make(CtlOp::ExistsUntil, {}, std::move(a), std::move(b)); }
Formula Formula::ewu(Formula a, Formula b) { return make(CtlOp::ExistsWeakUntil, {}, std::move(a), std::move(b)); }
Formula Formula::ef(Formula f) { return make(CtlOp::ExistsFinally, {}, std::move(f), {}); }
Formula Formula::eg(Formula f) { return make(CtlOp::ExistsGlobally, {}, std::move(f), {}); }

CtlOp Formula::op() const { return node_->op; }
const std::string& Formula::atom_name() const { return node_->name; }
const Formula& Formula::left() const { return node_->a; }
const Formula& Formula::right() const { return node_->b; }
int Formula::arity() const { return op_arity(node_->op); }

bool equal(const Formula& a, const Formula& b) {
    if (a.same_node(b)) return true;
    if (a.op() != b.op()) return false;
    switch (a.arity()) {
        case 0:
            return a.op() != CtlOp::Atom || a.atom_name() == b.atom_name();
        case 1:
            return equal(a.left(), b.left());
        default:
            return equal(a.left(), b.left()) && equal(a.right(), b.right());
    }
}

Formula desugar(const Formula& f) {
    // Memoized on node identity so shared subtrees desugar to shared nodes;
    // already-core subtrees come back unchanged, preserving identity.
    std::unordered_map<const void*, Formula> memo;
    auto go = [&](auto&& self, const Formula& g) -> Formula {
        auto it = memo.find(g.id());
        if (it != memo.end()) return it->second;
        Formula out;
        switch (g.op()) {
            case CtlOp::True:
            case CtlOp::False:
            case CtlOp::Atom:
                out = g;
                break;
            case CtlOp::Not: {
                Formula a = self(self, g.left());
                out = a.same_node(g.left()) ? g : Formula::negation(std::move(a));
                break;
            }
            case CtlOp::And: {
                Formula a = self(self, g.left());
                Formula b = self(self, g.right());
                out = a.same_node(g.left()) && b.same_node(g.right())
                          ? g
                          : Formula::conj(std::move(a), std::move(b));
                break;
            }
            case CtlOp::ExistsNext: {
                Formula a = self(self, g.left());
                out = a.same_node(g.left()) ? g : Formula::ex(std::move(a));
                break;
            }
            case CtlOp::ExistsUntil: {
                Formula a = self(self, g.left());
                Formula b = self(self, g.right());
                out = a.same_node(g.left()) && b.same_node(g.right())
                          ? g
                          : Formula::eu(std::move(a), std::move(b));
                break;
            }
            case CtlOp::ExistsWeakUntil: {
                Formula a = self(self, g.left());
                Formula b = self(self, g.right());
                out = a.same_node(g.left()) && b.same_node(g.right())
                          ? g
                          : Formula::ewu(std::move(a), std::move(b));
                break;
            }
            case CtlOp::Or:
                out = Formula::negation(Formula::conj(Formula::negation(self(self, g.left())),
                                                      Formula::negation(self(self, g.right()))));
                break;
            case CtlOp::Implies:
                out = Formula::negation(Formula::conj(self(self, g.left()),
                                                      Formula::negation(self(self, g.right()))));
                break;
            case CtlOp::ForallNext:
                out = Formula::negation(Formula::ex(Formula::negation(self(self, g.left()))));
                break;
            case CtlOp::ExistsFinally:
                out = Formula::eu(Formula::tru(), self(self, g.left()));
                break;
            case CtlOp::ExistsGlobally:
                out = Formula::ewu(self(self, g.left()), Formula::fals());
                break;
        }
        memo.emplace(g.id(), out);
        return out;
    };
    return go(go, f);
}

bool is_core(const Formula& f) {
    switch (f.op()) {
        case CtlOp::Or:
        case CtlOp::Implies:
        case CtlOp::ForallNext:
        case CtlOp::ExistsFinally:
        case CtlOp::ExistsGlobally:
            return false;
        default:
            break;
    }
    for (int i = 0; i < f.arity(); ++i) {
        if (!is_core(i == 0 ? f.left() : f.right())) return false;
    }
    return true;
}

std::uint64_t formula_size(const Formula& f) {
    const Formula core = is_core(f) ? f : desugar(f);
    auto go = [&](auto&& self, const Formula& g) -> std::uint64_t {
        switch (g.arity()) {
            case 0:
                return 1;
            case 1:
                return self(self, g.left()) + 1;
            default:
                return self(self, g.left()) + self(self, g.right()) + 1;
        }
    };
    return go(go, core);
}

std::uint64_t lud(const Formula& f) {
    const Formula core = is_core(f) ? f : desugar(f);
    auto go = [&](auto&& self, const Formula& g) -> std::uint64_t {
        switch (g.op()) {
            case CtlOp::True:
            case CtlOp::False:
            case CtlOp::Atom:
                return 0;
            case CtlOp::Not:
            case CtlOp::ExistsNext:
                return self(self, g.left());
            case CtlOp::And:
                return std::max(self(self, g.left()), self(self, g.right()));
            case CtlOp::ExistsUntil:
            case CtlOp::ExistsWeakUntil:
                return std::max(self(self, g.left()) + 1, self(self, g.right()));
            default:
                throw StructuralError("lud: non-core connective after desugaring");
        }
    };
    return go(go, core);
}

bool is_ef(const Formula& f) {
    switch (f.op()) {
        case CtlOp::ExistsUntil:
        case CtlOp::ExistsWeakUntil:
        case CtlOp::ExistsGlobally:
            return false;
        default:
            break;
    }
    for (int i = 0; i < f.arity(); ++i) {
        if (!is_ef(i == 0 ? f.left() : f.right())) return false;
    }
    return true;
}

}  // namespace ocmc
