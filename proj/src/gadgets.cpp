#include "ocmc/gadgets.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ocmc/error.hpp"

namespace ocmc {

struct CrrFormula::Node {
    Kind kind;
    int prime_index = -1;
    int residue = -1;
    std::vector<CrrFormula> children;
};

CrrFormula CrrFormula::make(Kind k, int i, int r, std::vector<CrrFormula> ch) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->prime_index = i;
    n->residue = r;
    n->children = std::move(ch);
    CrrFormula f;
    f.node_ = std::move(n);
    return f;
}

CrrFormula CrrFormula::leaf(int prime_index, int residue) {
    if (prime_index < 0 || residue < 0) throw DomainError("CrrFormula::leaf: bad indices");
    return make(Kind::Leaf, prime_index, residue, {});
}
CrrFormula CrrFormula::neg_leaf(int prime_index, int residue) {
    if (prime_index < 0 || residue < 0) throw DomainError("CrrFormula::neg_leaf: bad indices");
    return make(Kind::NegLeaf, prime_index, residue, {});
}
CrrFormula CrrFormula::conj(std::vector<CrrFormula> children) {
    return make(Kind::And, -1, -1, std::move(children));
}
CrrFormula CrrFormula::disj(std::vector<CrrFormula> children) {
    return make(Kind::Or, -1, -1, std::move(children));
}
CrrFormula CrrFormula::conj2(CrrFormula a, CrrFormula b) {
    std::vector<CrrFormula> ch;
    ch.push_back(std::move(a));
    ch.push_back(std::move(b));
    return conj(std::move(ch));
}
CrrFormula CrrFormula::disj2(CrrFormula a, CrrFormula b) {
    std::vector<CrrFormula> ch;
    ch.push_back(std::move(a));
    ch.push_back(std::move(b));
    return disj(std::move(ch));
}

CrrFormula::Kind CrrFormula::kind() const { return node_->kind; }
int CrrFormula::prime_index() const { return node_->prime_index; }
int CrrFormula::residue() const { return node_->residue; }
const std::vector<CrrFormula>& CrrFormula::children() const { return node_->children; }

bool CrrFormula::eval(const CrrAssignment& a) const {
    switch (kind()) {
        case Kind::Leaf:
            return a.bit(prime_index(), residue());
        case Kind::NegLeaf:
            return !a.bit(prime_index(), residue());
        case Kind::And:
            for (const auto& c : children())
                if (!c.eval(a)) return false;
            return true;
        case Kind::Or:
            for (const auto& c : children())
                if (c.eval(a)) return true;
            return false;
    }
    return false;
}

int CrrFormula::size() const {
    if (kind() == Kind::Leaf || kind() == Kind::NegLeaf) return 1;
    int s = 1;
    for (const auto& c : children()) s += c.size();
    return s;
}

bool CrrFormula::negation_free() const {
    if (kind() == Kind::NegLeaf) return false;
    for (const auto& c : children())
        if (!c.negation_free()) return false;
    return true;
}

int CrrFormula::conjunction_count() const {
    int s = kind() == Kind::And ? 1 : 0;
    for (const auto& c : children()) s += c.conjunction_count();
    return s;
}

std::string CrrFormula::to_string() const {
    switch (kind()) {
        case Kind::Leaf:
            return "x" + std::to_string(prime_index() + 1) + "_" + std::to_string(residue());
        case Kind::NegLeaf:
            return "~x" + std::to_string(prime_index() + 1) + "_" + std::to_string(residue());
        case Kind::And:
        case Kind::Or: {
            if (children().empty()) return kind() == Kind::And ? "TRUE" : "FALSE";
            std::string sep = kind() == Kind::And ? " & " : " | ";
            std::string out = "(";
            for (std::size_t i = 0; i < children().size(); ++i) {
                if (i) out += sep;
                out += children()[i].to_string();
            }
            return out + ")";
        }
    }
    return "?";
}

CrrFormula eliminate_negations(const CrrFormula& f, const std::vector<int>& primes) {
    switch (f.kind()) {
        case CrrFormula::Kind::Leaf:
            return f;
        case CrrFormula::Kind::NegLeaf: {
            int i = f.prime_index();
            if (i >= static_cast<int>(primes.size()))
                throw DomainError("eliminate_negations: leaf outside prime list");
            std::vector<CrrFormula> alts;
            for (int r = 0; r < primes[i]; ++r)
                if (r != f.residue()) alts.push_back(CrrFormula::leaf(i, r));
            if (alts.size() == 1) return alts[0];
            return CrrFormula::disj(std::move(alts));
        }
        case CrrFormula::Kind::And:
        case CrrFormula::Kind::Or: {
            std::vector<CrrFormula> ch;
            ch.reserve(f.children().size());
            for (const auto& c : f.children()) ch.push_back(eliminate_negations(c, primes));
            return f.kind() == CrrFormula::Kind::And ? CrrFormula::conj(std::move(ch))
                                                     : CrrFormula::disj(std::move(ch));
        }
    }
    throw DomainError("eliminate_negations: bad node");
}

namespace {

CrrFormula push_neg(const CrrFormula& f, bool negated) {
    switch (f.kind()) {
        case CrrFormula::Kind::Leaf:
            return negated ? CrrFormula::neg_leaf(f.prime_index(), f.residue()) : f;
        case CrrFormula::Kind::NegLeaf:
            return negated ? CrrFormula::leaf(f.prime_index(), f.residue()) : f;
        case CrrFormula::Kind::And:
        case CrrFormula::Kind::Or: {
            std::vector<CrrFormula> ch;
            ch.reserve(f.children().size());
            for (const auto& c : f.children()) ch.push_back(push_neg(c, negated));
            bool and_out = (f.kind() == CrrFormula::Kind::And) != negated;
            return and_out ? CrrFormula::conj(std::move(ch)) : CrrFormula::disj(std::move(ch));
        }
    }
    throw DomainError("push_neg: bad node");
}

}  // namespace

CrrFormula negate_pushed(const CrrFormula& f) { return push_neg(f, true); }

struct BoolFormula::Node {
    Kind kind;
    int var = 0;
    bool value = false;
    BoolFormula a, b;
};

BoolFormula BoolFormula::make(Kind k, int var, bool value, BoolFormula a, BoolFormula b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->var = var;
    n->value = value;
    n->a = std::move(a);
    n->b = std::move(b);
    BoolFormula f;
    f.node_ = std::move(n);
    return f;
}

BoolFormula BoolFormula::var(int index) {
    if (index < 1) throw DomainError("BoolFormula::var: 1-based index required");
    return make(Kind::Var, index, false, {}, {});
}
BoolFormula BoolFormula::negation(BoolFormula f) { return make(Kind::Not, 0, false, std::move(f), {}); }
BoolFormula BoolFormula::conj(BoolFormula a, BoolFormula b) {
    return make(Kind::And, 0, false, std::move(a), std::move(b));
}
BoolFormula BoolFormula::disj(BoolFormula a, BoolFormula b) {
    return make(Kind::Or, 0, false, std::move(a), std::move(b));
}
BoolFormula BoolFormula::constant(bool value) { return make(Kind::Const, 0, value, {}, {}); }

BoolFormula::Kind BoolFormula::kind() const { return node_->kind; }
int BoolFormula::var_index() const { return node_->var; }
bool BoolFormula::const_value() const { return node_->value; }
const BoolFormula& BoolFormula::left() const { return node_->a; }
const BoolFormula& BoolFormula::right() const { return node_->b; }

int BoolFormula::max_var() const {
    switch (kind()) {
        case Kind::Var:
            return var_index();
        case Kind::Const:
            return 0;
        case Kind::Not:
            return left().max_var();
        default:
            return std::max(left().max_var(), right().max_var());
    }
}

int BoolFormula::size() const {
    switch (kind()) {
        case Kind::Var:
        case Kind::Const:
            return 1;
        case Kind::Not:
            return 1 + left().size();
        default:
            return 1 + left().size() + right().size();
    }
}

bool BoolFormula::eval_bits(const Big& m) const {
    switch (kind()) {
        case Kind::Var:
            return bit_at(var_index(), m) == 1;
        case Kind::Const:
            return const_value();
        case Kind::Not:
            return !left().eval_bits(m);
        case Kind::And:
            return left().eval_bits(m) && right().eval_bits(m);
        case Kind::Or:
            return left().eval_bits(m) || right().eval_bits(m);
    }
    return false;
}

std::string BoolFormula::to_string() const {
    switch (kind()) {
        case Kind::Var:
            return "x" + std::to_string(var_index());
        case Kind::Const:
            return const_value() ? "true" : "false";
        case Kind::Not:
            return "~" + left().to_string();
        case Kind::And:
            return "(" + left().to_string() + " & " + right().to_string() + ")";
        case Kind::Or:
            return "(" + left().to_string() + " | " + right().to_string() + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// The fixed net and its formula families.

Ocp figure7() {
    Ocp o;
    for (const char* n : {"t", "tbar", "q0", "q1", "q2", "q3", "f", "g", "p0", "p1"}) {
        int id = o.add_location(n);
        o.add_label(n, id);
    }
    auto L = [&](const char* n) { return o.require_location(n); };
    const int t = L("t"), tbar = L("tbar"), q0 = L("q0"), q1 = L("q1"), q2 = L("q2"),
              q3 = L("q3"), f = L("f"), g = L("g"), p0 = L("p0"), p1 = L("p1");

    auto pos = [&](int a, int d, int b) { o.add_pos(a, d, b); };
    // Diamond decrements and inner loops.
    pos(q0, -1, q1);
    pos(q1, -1, q2);
    pos(q2, -1, q3);
    pos(q3, -1, q0);
    pos(q1, -1, q1);
    pos(q3, -1, q3);
    // Connections between the diamond and the two test locations.
    pos(q0, 0, t);
    pos(t, 0, q0);
    pos(q1, 0, tbar);
    pos(tbar, 0, q1);
    pos(tbar, 0, q2);
    pos(q2, 0, t);
    pos(q3, 0, tbar);
    pos(tbar, 0, q3);
    // Parity tail.
    pos(t, 0, f);
    pos(tbar, -1, f);
    pos(g, -1, f);
    pos(f, -1, g);
    // Increment widgets.
    pos(tbar, 1, p1);
    pos(p1, 0, tbar);
    pos(p1, 1, p1);
    pos(p0, 0, tbar);
    pos(tbar, 0, p0);

    o.add_zero(t, 0, q0);
    o.add_zero(t, 0, f);
    o.add_zero(tbar, 1, p1);
    o.add_zero(p0, 0, tbar);
    o.add_zero(tbar, 0, p0);
    return o;
}

namespace {

Formula fig7_test() { return Formula::disj(Formula::atom("t"), Formula::atom("tbar")); }

Formula fig7_diamond() {
    return Formula::disj(Formula::disj(Formula::atom("q0"), Formula::atom("q1")),
                         Formula::disj(Formula::atom("q2"), Formula::atom("q3")));
}

Formula mu_of(const Formula& phi_prev) {
    Formula left = Formula::conj(fig7_diamond(), Formula::ex(phi_prev));
    Formula right = Formula::conj(Formula::atom("q0"),
                                  Formula::negation(Formula::ex(Formula::atom("q1"))));
    return Formula::eu(std::move(left), std::move(right));
}

}  // namespace

std::vector<Formula> phi_div_family(int up_to) {
    if (up_to < 1) throw DomainError("phi_div_family: need i >= 1");
    std::vector<Formula> family;
    Formula phi1 = Formula::conj(
        fig7_test(),
        Formula::ex(Formula::conj(
            Formula::atom("f"),
            Formula::ef(Formula::conj(Formula::atom("f"),
                                      Formula::negation(Formula::ex(Formula::atom("g"))))))));
    family.push_back(phi1);
    for (int i = 2; i <= up_to; ++i)
        family.push_back(Formula::conj(fig7_test(), Formula::ex(mu_of(family.back()))));
    return family;
}

Formula phi_div(int i) { return phi_div_family(i).back(); }

std::vector<Formula> psi_bit_family(int up_to) {
    if (up_to < 1) throw DomainError("psi_bit_family: need i >= 1");
    std::vector<Formula> phis = phi_div_family(std::max(1, up_to - 1));
    std::vector<Formula> family;
    family.push_back(phis[0]);  // psi_1 = phi_1
    for (int i = 2; i <= up_to; ++i) {
        Formula q12 = Formula::disj(Formula::atom("q1"), Formula::atom("q2"));
        family.push_back(Formula::conj(
            Formula::atom("tbar"),
            Formula::ex(Formula::conj(std::move(q12), mu_of(phis[i - 2])))));
    }
    return family;
}

Formula psi_bit(int i) { return psi_bit_family(i).back(); }

Formula qbf_reduce(const Qbf& alpha) {
    const int k = static_cast<int>(alpha.exists.size());
    if (k < 1) throw StructuralError("qbf_reduce: empty quantifier prefix");
    if (alpha.matrix.max_var() > k)
        throw StructuralError("qbf_reduce: matrix uses a variable outside the prefix");

    std::vector<Formula> psis = psi_bit_family(k);
    std::vector<Formula> phis = phi_div_family(std::max(1, k - 1));

    // The matrix with every variable x_i replaced by psi_i.
    auto lift = [&](auto&& self, const BoolFormula& b) -> Formula {
        switch (b.kind()) {
            case BoolFormula::Kind::Var:
                return psis[b.var_index() - 1];
            case BoolFormula::Kind::Const:
                return b.const_value() ? Formula::tru() : Formula::fals();
            case BoolFormula::Kind::Not:
                return Formula::negation(self(self, b.left()));
            case BoolFormula::Kind::And:
                return Formula::conj(self(self, b.left()), self(self, b.right()));
            case BoolFormula::Kind::Or:
                return Formula::disj(self(self, b.left()), self(self, b.right()));
        }
        throw StructuralError("qbf_reduce: bad matrix node");
    };
    Formula beta_hat = lift(lift, alpha.matrix);

    Formula p01 = Formula::disj(Formula::atom("p0"), Formula::atom("p1"));
    auto quantified = [&](int i, Formula body) {
        bool ex_q = alpha.exists[i - 1];
        Formula guarded = ex_q ? Formula::conj(p01, std::move(body))
                               : Formula::implies(p01, std::move(body));
        return ex_q ? Formula::ex(std::move(guarded))
                    : Formula::ax(std::move(guarded));
    };
    auto back_at_tbar = [](Formula body) {
        // The widget states have a unique tbar successor; pinning it keeps
        // the continuation from being read off a stray widget state.
        return Formula::ex(Formula::conj(Formula::atom("tbar"), std::move(body)));
    };

    Formula theta = quantified(1, back_at_tbar(beta_hat));
    for (int i = 2; i <= k; ++i) {
        const Formula& phi_prev = phis[i - 2];
        Formula left = Formula::disj(
            Formula::atom("p0"),
            Formula::ex(Formula::conj(Formula::atom("tbar"), phi_prev)));
        // The climb ends on the widget state whose tbar successor first
        // reports divisibility; the exit check happens there, one step
        // before leaving the widget.
        Formula right = Formula::conj(
            p01, back_at_tbar(Formula::conj(Formula::negation(phi_prev), std::move(theta))));
        theta = quantified(i, Formula::eu(std::move(left), std::move(right)));
    }
    return theta;
}

Formula fixed_ef_formula() {
    return Formula::implies(
        Formula::atom("alpha"),
        Formula::ex(Formula::conj(
            Formula::atom("beta"),
            Formula::ef(Formula::negation(Formula::ex(Formula::atom("gamma")))))));
}

// ---------------------------------------------------------------------------
// Residue-test gadgets.

namespace {

// Shared residue-counting cycles: one cycle of unit decrements per prime,
// entered at the expected residue, with escape edges to a looping gamma
// sink. The only reachable state satisfying ~EX gamma is cycle node 0 at
// counter 0, so EF ~EX gamma from the entry tests the entry counter's
// residue.
struct DivCycles {
    std::vector<std::vector<int>> node;  // node[i][j]: prime i, residue j
    int bot = -1;

    static DivCycles build(Ocp& o, const std::vector<int>& primes) {
        DivCycles d;
        d.bot = o.add_location("bot");
        o.add_label("gamma", d.bot);
        o.add_label("alpha", d.bot);
        o.add_zero(d.bot, 0, d.bot);
        o.add_pos(d.bot, 0, d.bot);
        d.node.resize(primes.size());
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const int p = primes[i];
            for (int j = 0; j < p; ++j) {
                int id = o.add_location("div" + std::to_string(p) + "." + std::to_string(j));
                o.add_label("beta", id);
                d.node[i].push_back(id);
            }
            for (int j = 0; j < p; ++j) {
                o.add_pos(d.node[i][j], -1, d.node[i][(j - 1 + p) % p]);
                if (j == 0) {
                    o.add_pos(d.node[i][j], -1, d.bot);
                } else {
                    o.add_zero(d.node[i][j], 0, d.bot);
                    o.add_pos(d.node[i][j], 0, d.bot);
                }
            }
        }
        return d;
    }

    int entry(int prime_index, int residue) const { return node[prime_index][residue]; }
};

void both_sides(Ocp& o, int src, int delta, int dst) {
    o.add_zero(src, delta, dst);
    o.add_pos(src, delta, dst);
}

}  // namespace

GadgetOcn ocn_of_crr_formula(const CrrFormula& f, const std::vector<int>& primes) {
    if (!f.negation_free())
        throw StructuralError("ocn_of_crr_formula: run eliminate_negations first");
    GadgetOcn g;
    Ocp& o = g.ocp;
    DivCycles cycles = DivCycles::build(o, primes);

    // One in/out pair per subformula, named by its path in the tree.
    auto build = [&](auto&& self, const CrrFormula& node, const std::string& path)
        -> std::pair<int, int> {
        int in = o.add_location("in." + path);
        int out = o.add_location("out." + path);
        switch (node.kind()) {
            case CrrFormula::Kind::Leaf: {
                if (node.prime_index() >= static_cast<int>(primes.size()) ||
                    node.residue() >= primes[node.prime_index()])
                    throw StructuralError("ocn_of_crr_formula: leaf outside prime list");
                o.add_label("alpha", in);
                both_sides(o, in, 0, out);
                both_sides(o, in, 0, cycles.entry(node.prime_index(), node.residue()));
                break;
            }
            case CrrFormula::Kind::Or: {
                for (std::size_t i = 0; i < node.children().size(); ++i) {
                    auto [cin, cout] =
                        self(self, node.children()[i], path + "." + std::to_string(i + 1));
                    both_sides(o, in, 0, cin);
                    both_sides(o, cout, 0, out);
                }
                break;
            }
            case CrrFormula::Kind::And: {
                int prev = in;
                for (std::size_t i = 0; i < node.children().size(); ++i) {
                    auto [cin, cout] =
                        self(self, node.children()[i], path + "." + std::to_string(i + 1));
                    both_sides(o, prev, 0, cin);
                    prev = cout;
                }
                both_sides(o, prev, 0, out);
                break;
            }
            case CrrFormula::Kind::NegLeaf:
                throw StructuralError("ocn_of_crr_formula: negation survived");
        }
        return {in, out};
    };
    auto [in, out] = build(build, f, "F");
    g.in = in;
    g.out = out;
    return g;
}

CrrFormula crr_equals_formula(const std::vector<int>& primes, const Big& target) {
    if (target < 0) throw DomainError("crr_equals_formula: negative target");
    std::vector<CrrFormula> conjs;
    for (std::size_t i = 0; i < primes.size(); ++i)
        conjs.push_back(CrrFormula::leaf(static_cast<int>(i),
                                         static_cast<int>(target % primes[i])));
    return CrrFormula::conj(std::move(conjs));
}

CrrFormula crr_formula_of_predicate(const std::vector<bool>& truth,
                                    const std::vector<int>& primes, int m) {
    Big product = 1;
    for (int p : primes) product *= p;
    if (m < 0 || m > 40 || (Big(1) << m) > product)
        throw DomainError("crr_formula_of_predicate: need 2^m <= product of primes");
    if (truth.size() != (static_cast<std::size_t>(1) << m))
        throw DomainError("crr_formula_of_predicate: truth table must have 2^m entries");
    std::vector<CrrFormula> minterms;
    for (std::size_t v = 0; v < truth.size(); ++v) {
        if (!truth[v]) continue;
        minterms.push_back(crr_equals_formula(primes, Big(v)));
    }
    return CrrFormula::disj(std::move(minterms));
}

bool leafstring_oracle(const Nfa& a, const CrrFormula& f, const std::vector<int>& primes, int m) {
    Big product = 1;
    for (int p : primes) product *= p;
    if (m < 0 || (Big(1) << m) > product)
        throw DomainError("leafstring_oracle: need 2^m <= product of primes");
    std::vector<int> word;
    if (m > 0) {
        for (Big v = 0; v < (Big(1) << m); ++v) word.push_back(f.eval(crr(primes, v)) ? 1 : 0);
    }
    return nfa_accepts(a, word);
}

namespace {

// Copies every location of `part` into `into` under a name prefix;
// returns the id mapping. Labels come along unchanged.
std::vector<int> embed(Ocp& into, const Ocp& part, const std::string& prefix) {
    std::vector<int> map(part.location_count());
    for (int q = 0; q < part.location_count(); ++q)
        map[q] = into.add_location(prefix + part.location_name(q));
    for (const auto& [prop, set] : part.labeling()) {
        for (std::size_t q = 0; q < set.size(); ++q)
            if (set[q]) into.add_label(prop, map[q]);
    }
    for (const auto& t : part.zero_transitions()) into.add_zero(map[t.src], t.delta, map[t.dst]);
    for (const auto& t : part.pos_transitions()) into.add_pos(map[t.src], t.delta, map[t.dst]);
    return map;
}

void require_conjunction_of_leaves(const CrrFormula& g) {
    if (g.kind() == CrrFormula::Kind::Leaf) return;
    if (g.kind() != CrrFormula::Kind::And || g.children().empty())
        throw StructuralError("terminal test must be a conjunction of residue leaves");
    for (const auto& c : g.children())
        if (c.kind() != CrrFormula::Kind::Leaf)
            throw StructuralError("terminal test must be a conjunction of residue leaves");
}

}  // namespace

SerialComposition serial_compose(const Nfa& a, const CrrFormula& f, const CrrFormula& g,
                                 const std::vector<int>& primes, int m, SerialVariant variant) {
    if (!f.negation_free() || !g.negation_free())
        throw StructuralError("serial_compose: operands must be negation-free");
    require_conjunction_of_leaves(g);
    Big product = 1;
    for (int p : primes) product *= p;
    if ((Big(1) << m) >= product)
        throw DomainError("serial_compose: need 2^m < product of primes");

    CrrFormula not_g = eliminate_negations(negate_pushed(g), primes);
    CrrFormula not_f = eliminate_negations(negate_pushed(f), primes);
    GadgetOcn pos_gadget = ocn_of_crr_formula(CrrFormula::conj2(f, not_g), primes);
    GadgetOcn neg_gadget = ocn_of_crr_formula(CrrFormula::conj2(not_f, not_g), primes);
    GadgetOcn end_gadget = ocn_of_crr_formula(g, primes);

    SerialComposition sc;
    Ocp& o = sc.ocp;
    std::vector<int> nfa_loc(a.states.size());
    for (std::size_t s = 0; s < a.states.size(); ++s)
        nfa_loc[s] = o.add_location("n." + a.states[s]);

    for (std::size_t ti = 0; ti < a.transitions.size(); ++ti) {
        auto [src, bit, dst] = a.transitions[ti];
        const GadgetOcn& part = bit == 1 ? pos_gadget : neg_gadget;
        auto map = embed(o, part.ocp, "t" + std::to_string(ti) + ".");
        both_sides(o, nfa_loc[src], 0, map[part.in]);
        both_sides(o, map[part.out], 1, nfa_loc[dst]);
    }

    auto gmap = embed(o, end_gadget.ocp, "g.");
    for (std::size_t s = 0; s < a.states.size(); ++s)
        if (a.final_states[s]) both_sides(o, nfa_loc[s], 0, gmap[end_gadget.in]);

    sc.start = nfa_loc[a.initial];
    if (variant == SerialVariant::Until) {
        o.add_label("rho", gmap[end_gadget.out]);
        sc.goal = Formula::eu(fixed_ef_formula(), Formula::atom("rho"));
    } else {
        both_sides(o, gmap[end_gadget.out], 0, gmap[end_gadget.in]);
        sc.goal = Formula::eg(fixed_ef_formula());
    }
    return sc;
}

// ---------------------------------------------------------------------------
// Layered circuits.

void LayeredCircuit::validate() const {
    if (layers < 1) throw StructuralError("circuit: needs at least one layer");
    if (output < 0 || output >= static_cast<int>(gates.size()))
        throw StructuralError("circuit: missing output gate");
    if (gates[output].layer != 1) throw StructuralError("circuit: output must sit in layer 1");
    for (const auto& gt : gates) {
        bool input = gt.layer == layers;
        if (input) {
            if (!gt.children.empty())
                throw StructuralError("circuit: input gate with children: " + gt.name);
            if (gt.prime_index < 0 || gt.residue < 0)
                throw StructuralError("circuit: input gate without residue label: " + gt.name);
        } else {
            if (gt.children.empty())
                throw StructuralError("circuit: interior gate without children: " + gt.name);
            for (int c : gt.children) {
                if (c < 0 || c >= static_cast<int>(gates.size()) ||
                    gates[c].layer != gt.layer + 1)
                    throw StructuralError("circuit: edge must go one layer down: " + gt.name);
            }
        }
    }
}

bool LayeredCircuit::eval(const CrrAssignment& a) const {
    auto go = [&](auto&& self, int gi) -> bool {
        const Gate& gt = gates[gi];
        if (gt.layer == layers) return a.bit(gt.prime_index, gt.residue);
        bool acc = gt.is_and;
        for (int c : gt.children) {
            bool v = self(self, c);
            acc = gt.is_and ? (acc && v) : (acc || v);
        }
        return acc;
    };
    return go(go, output);
}

GadgetOcn ocn_of_circuit(const LayeredCircuit& c, const std::vector<int>& primes) {
    c.validate();
    GadgetOcn g;
    Ocp& o = g.ocp;
    DivCycles cycles = DivCycles::build(o, primes);
    std::vector<int> loc(c.gates.size());
    for (std::size_t i = 0; i < c.gates.size(); ++i) loc[i] = o.add_location(c.gates[i].name);
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto& gt = c.gates[i];
        if (gt.layer == c.layers) {
            if (gt.prime_index >= static_cast<int>(primes.size()) ||
                gt.residue >= primes[gt.prime_index])
                throw StructuralError("ocn_of_circuit: input residue outside prime list");
            both_sides(o, loc[i], 0, cycles.entry(gt.prime_index, gt.residue));
        } else {
            for (int ch : gt.children) both_sides(o, loc[i], 0, loc[ch]);
        }
    }
    g.in = loc[c.output];
    return g;
}

Formula ef_of_circuit(const LayeredCircuit& c) {
    c.validate();
    Formula suffix = Formula::ex(
        Formula::ef(Formula::negation(Formula::ex(Formula::atom("gamma")))));
    // Innermost modality corresponds to the deepest interior layer.
    std::vector<bool> is_and_by_layer(c.layers + 1, false);
    for (const auto& gt : c.gates)
        if (gt.layer < c.layers && gt.is_and) is_and_by_layer[gt.layer] = true;
    Formula out = std::move(suffix);
    for (int layer = c.layers - 1; layer >= 1; --layer)
        out = is_and_by_layer[layer] ? Formula::ax(std::move(out)) : Formula::ex(std::move(out));
    return out;
}

LayeredCircuit circuit_of_dnf(const CrrFormula& dnf) {
    if (dnf.kind() != CrrFormula::Kind::Or || dnf.children().empty())
        throw StructuralError("circuit_of_dnf: need a nonempty disjunction of conjunctions");
    LayeredCircuit c;
    c.layers = 3;
    std::map<std::pair<int, int>, int> input_of;
    auto input_gate = [&](int i, int r) {
        auto key = std::make_pair(i, r);
        auto it = input_of.find(key);
        if (it != input_of.end()) return it->second;
        LayeredCircuit::Gate gt;
        gt.name = "x" + std::to_string(i + 1) + "_" + std::to_string(r);
        gt.layer = 3;
        gt.prime_index = i;
        gt.residue = r;
        c.gates.push_back(gt);
        int id = static_cast<int>(c.gates.size()) - 1;
        input_of.emplace(key, id);
        return id;
    };

    LayeredCircuit::Gate out;
    out.name = "or0";
    out.layer = 1;
    out.is_and = false;
    c.gates.push_back(out);
    c.output = 0;

    for (std::size_t ci = 0; ci < dnf.children().size(); ++ci) {
        const CrrFormula& term = dnf.children()[ci];
        LayeredCircuit::Gate andg;
        andg.name = "and" + std::to_string(ci);
        andg.layer = 2;
        andg.is_and = true;
        c.gates.push_back(andg);
        int and_id = static_cast<int>(c.gates.size()) - 1;
        c.gates[c.output].children.push_back(and_id);
        auto add_leaf = [&](const CrrFormula& lf) {
            if (lf.kind() != CrrFormula::Kind::Leaf)
                throw StructuralError("circuit_of_dnf: conjunct must be a leaf conjunction");
            // input_gate may grow the gate vector; take the id first.
            int gid = input_gate(lf.prime_index(), lf.residue());
            c.gates[and_id].children.push_back(gid);
        };
        if (term.kind() == CrrFormula::Kind::Leaf) {
            add_leaf(term);
        } else if (term.kind() == CrrFormula::Kind::And) {
            for (const auto& lf : term.children()) add_leaf(lf);
        } else {
            throw StructuralError("circuit_of_dnf: conjunct must be a leaf conjunction");
        }
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Lex-max reduction.

bool lexmax_even_oracle(const BoolFormula& psi, int m) {
    if (m < 1 || m > 20) throw DomainError("lexmax_even_oracle: m in [1,20]");
    for (Big v = (Big(1) << m) - 1; v >= 0; --v) {
        if (psi.eval_bits(v)) return bit_at(1, v) == 0;
    }
    return false;
}

WagnerReduction wagner_reduce(const BoolFormula& psi, int m) {
    if (m < 1) throw DomainError("wagner_reduce: m must be >= 1");
    if (psi.max_var() > m) throw DomainError("wagner_reduce: formula variable beyond m");

    // Extra primes are harmless; at least two keep the terminal value 2^m
    // below the prime product.
    int nprimes = std::max(m, 2);
    std::vector<int> primes = primes_first(nprimes);
    Big product = 1;
    for (int p : primes) product *= p;
    while (product <= (Big(1) << m)) {
        primes = primes_first(++nprimes);
        product *= primes.back();
    }

    const std::size_t entries = static_cast<std::size_t>(1) << m;
    std::vector<bool> sat_even(entries), unsat(entries);
    for (std::size_t v = 0; v < entries; ++v) {
        bool holds = psi.eval_bits(Big(v));
        sat_even[v] = holds && (v % 2 == 0);
        unsat[v] = !holds;
    }

    WagnerReduction w;
    w.primes = primes;
    Ocp& o = w.ocp;
    const int q0 = o.add_location("q0");
    const int p = o.add_location("p");
    const int r = o.add_location("r");
    const int s = o.add_location("s");
    o.add_label("at_q0", q0);
    o.add_label("at_p", p);
    o.add_label("at_r", r);
    o.add_label("at_s", s);
    o.add_pos(q0, 1, q0);
    o.add_pos(q0, 0, p);
    o.add_pos(p, -1, p);
    o.add_pos(q0, 1, r);
    o.add_pos(r, 1, r);
    o.add_pos(r, 0, s);
    o.add_pos(s, -1, s);
    o.add_zero(q0, 1, q0);
    o.add_zero(q0, 0, p);
    o.add_zero(q0, 1, r);

    // Attaches a DNF gadget under `prefix`, entered from `from`, and
    // returns the probe formula: one step into the gadget, then the
    // modality prefix that evaluates the circuit on the entry counter.
    auto attach = [&](const std::vector<bool>& truth, const std::string& prefix, int from,
                      bool zero_side_too) -> Formula {
        CrrFormula dnf = crr_formula_of_predicate(truth, primes, m);
        if (dnf.children().empty()) return Formula::fals();
        LayeredCircuit circ = circuit_of_dnf(dnf);
        GadgetOcn gadget = ocn_of_circuit(circ, primes);
        auto map = embed(o, gadget.ocp, prefix);
        const std::string in_prop = prefix + "in";
        o.add_label(in_prop, map[gadget.in]);
        o.add_pos(from, 0, map[gadget.in]);
        if (zero_side_too) o.add_zero(from, 0, map[gadget.in]);
        return Formula::ex(Formula::conj(Formula::atom(in_prop), ef_of_circuit(circ)));
    };

    Formula probe_sat_even = attach(sat_even, "c.", q0, true);
    Formula probe_unsat = attach(unsat, "nc.", r, false);
    // The terminal test recognizes counter value 2^m; as a one-entry DNF
    // over the extended prime list it lives outside the truth table, so
    // build it directly.
    CrrFormula gterm = crr_equals_formula(primes, Big(1) << m);
    LayeredCircuit gcirc = circuit_of_dnf(CrrFormula::disj({gterm}));
    auto attach_term = [&](const std::string& prefix, int from) -> Formula {
        GadgetOcn gadget = ocn_of_circuit(gcirc, primes);
        auto map = embed(o, gadget.ocp, prefix);
        const std::string in_prop = prefix + "in";
        o.add_label(in_prop, map[gadget.in]);
        o.add_pos(from, 0, map[gadget.in]);
        return Formula::ex(Formula::conj(Formula::atom(in_prop), ef_of_circuit(gcirc)));
    };
    Formula probe_term_p = attach_term("gp.", p);
    Formula probe_term_s = attach_term("gs.", s);

    // The decrement cones of p and s are entered with a single step; the
    // inner reachability then ranges exactly over the counter values below
    // the entry point, which is what pins the terminal test to values
    // at most the current counter.
    Formula bullet2 = Formula::negation(Formula::ex(Formula::conj(
        Formula::atom("at_p"),
        Formula::ef(Formula::conj(Formula::atom("at_p"), probe_term_p)))));
    Formula cannot_reach_terminal_via_s = Formula::negation(Formula::ex(Formula::conj(
        Formula::atom("at_s"),
        Formula::ef(Formula::conj(Formula::atom("at_s"), probe_term_s)))));
    Formula bullet3 = Formula::negation(Formula::ef(Formula::conj(
        Formula::atom("at_r"),
        Formula::conj(std::move(cannot_reach_terminal_via_s),
                      Formula::negation(probe_unsat)))));
    w.goal = Formula::ef(Formula::conj(
        Formula::conj(Formula::atom("at_q0"), probe_sat_even),
        Formula::conj(std::move(bullet2), std::move(bullet3))));
    w.q0 = q0;
    return w;
}

}  // namespace ocmc
