#include <cctype>
#include <istream>
#include <map>
#include <sstream>

#include "ocmc/error.hpp"
#include "ocmc/gadgets.hpp"

namespace ocmc {

namespace {

// Shared scanner for the tiny boolean syntaxes: x-variables, ~, &, |, ().
struct Scan {
    const std::string& s;
    std::size_t pos = 0;

    void ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool lit(char c) {
        ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eof() {
        ws();
        return pos >= s.size();
    }
    std::string word() {
        ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos, msg); }
};

// x<i>_<r> with 1-based prime position i.
std::pair<int, int> parse_leaf_name(Scan& sc) {
    std::string w = sc.word();
    if (w.size() < 2 || w[0] != 'x') sc.fail("expected a residue variable x<i>_<r>");
    auto us = w.find('_');
    if (us == std::string::npos || us + 1 >= w.size() || us < 2) sc.fail("expected x<i>_<r>");
    try {
        int i = std::stoi(w.substr(1, us - 1));
        int r = std::stoi(w.substr(us + 1));
        if (i < 1 || r < 0) throw std::invalid_argument(w);
        return {i - 1, r};
    } catch (const std::exception&) {
        sc.fail("bad residue variable: " + w);
    }
}

CrrFormula crr_or(Scan& sc);

CrrFormula crr_atom(Scan& sc) {
    if (sc.lit('~')) {
        auto [i, r] = parse_leaf_name(sc);
        return CrrFormula::neg_leaf(i, r);
    }
    if (sc.lit('(')) {
        CrrFormula f = crr_or(sc);
        if (!sc.lit(')')) sc.fail("expected ')'");
        return f;
    }
    auto [i, r] = parse_leaf_name(sc);
    return CrrFormula::leaf(i, r);
}

CrrFormula crr_and(Scan& sc) {
    CrrFormula f = crr_atom(sc);
    while (sc.lit('&')) f = CrrFormula::conj2(std::move(f), crr_atom(sc));
    return f;
}

CrrFormula crr_or(Scan& sc) {
    CrrFormula f = crr_and(sc);
    while (sc.lit('|')) f = CrrFormula::disj2(std::move(f), crr_and(sc));
    return f;
}

BoolFormula bool_or(Scan& sc);

BoolFormula bool_atom(Scan& sc) {
    if (sc.lit('~')) return BoolFormula::negation(bool_atom(sc));
    if (sc.lit('(')) {
        BoolFormula f = bool_or(sc);
        if (!sc.lit(')')) sc.fail("expected ')'");
        return f;
    }
    std::string w = sc.word();
    if (w == "true") return BoolFormula::constant(true);
    if (w == "false") return BoolFormula::constant(false);
    if (w.size() >= 2 && w[0] == 'x') {
        try {
            int i = std::stoi(w.substr(1));
            if (i >= 1) return BoolFormula::var(i);
        } catch (const std::exception&) {
        }
    }
    sc.fail("expected a variable x<i>, constant, '~' or '('");
}

BoolFormula bool_and(Scan& sc) {
    BoolFormula f = bool_atom(sc);
    while (sc.lit('&')) f = BoolFormula::conj(std::move(f), bool_atom(sc));
    return f;
}

BoolFormula bool_or(Scan& sc) {
    BoolFormula f = bool_and(sc);
    while (sc.lit('|')) f = BoolFormula::disj(std::move(f), bool_and(sc));
    return f;
}

}  // namespace

CrrFormula parse_crr_formula(const std::string& text) {
    Scan sc{text};
    CrrFormula f = crr_or(sc);
    if (!sc.eof()) sc.fail("trailing input");
    return f;
}

BoolFormula parse_bool_formula(const std::string& text) {
    Scan sc{text};
    BoolFormula f = bool_or(sc);
    if (!sc.eof()) sc.fail("trailing input");
    return f;
}

Qbf parse_qbf(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError(0, "expected 'quantifiers : matrix'");
    std::string prefix = text.substr(0, colon);
    Qbf q;
    q.matrix = parse_bool_formula(text.substr(colon + 1));

    std::istringstream ss(prefix);
    std::string tok;
    std::map<int, bool> quant;  // variable index -> exists
    int outermost = 0;
    while (ss >> tok) {
        bool ex;
        if (tok == "exists")
            ex = true;
        else if (tok == "forall")
            ex = false;
        else
            throw ParseError(0, "expected 'exists' or 'forall', got: " + tok);
        std::string var;
        if (!(ss >> var) || var.size() < 2 || var[0] != 'x')
            throw ParseError(0, "expected a variable after quantifier");
        int idx = std::stoi(var.substr(1));
        if (idx < 1 || quant.count(idx)) throw ParseError(0, "bad or repeated variable: " + var);
        quant[idx] = ex;
        outermost = std::max(outermost, idx);
    }
    if (quant.empty()) throw ParseError(0, "empty quantifier prefix");
    // Prenex convention: variable x_k is quantified outermost, x_1 innermost.
    if (static_cast<int>(quant.size()) != outermost)
        throw ParseError(0, "quantifier prefix must bind x1..xk consecutively");
    q.exists.resize(outermost);
    for (auto [idx, ex] : quant) q.exists[idx - 1] = ex;
    if (q.matrix.max_var() > outermost)
        throw ParseError(0, "matrix uses a variable outside the prefix");
    return q;
}

BoolFormula parse_dimacs_cnf(std::istream& in, int* var_count) {
    std::string line;
    int nvars = -1, nclauses = -1;
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ss(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            ss >> p >> cnf >> nvars >> nclauses;
            if (cnf != "cnf" || nvars < 1) throw ParseError(0, "bad DIMACS header");
            continue;
        }
        int litv;
        while (ss >> litv) {
            if (litv == 0) {
                clauses.push_back(current);
                current.clear();
            } else {
                if (nvars < 0 || std::abs(litv) > nvars)
                    throw ParseError(0, "literal outside declared variable range");
                current.push_back(litv);
            }
        }
    }
    if (!current.empty()) clauses.push_back(current);
    if (nvars < 0) throw ParseError(0, "missing DIMACS header");

    BoolFormula f = BoolFormula::constant(true);
    bool first_clause = true;
    for (const auto& cl : clauses) {
        BoolFormula c = BoolFormula::constant(false);
        bool first_lit = true;
        for (int l : cl) {
            BoolFormula litf = BoolFormula::var(std::abs(l));
            if (l < 0) litf = BoolFormula::negation(std::move(litf));
            c = first_lit ? std::move(litf) : BoolFormula::disj(std::move(c), std::move(litf));
            first_lit = false;
        }
        f = first_clause ? std::move(c) : BoolFormula::conj(std::move(f), std::move(c));
        first_clause = false;
    }
    if (var_count) *var_count = nvars;
    return f;
}

LayeredCircuit parse_circuit(std::istream& in) {
    LayeredCircuit c;
    std::map<std::string, int> ids;
    std::vector<std::pair<std::string, std::string>> edges;
    std::string output_name;
    std::string line;
    bool header = false;
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        offset += line.size() + 1;
        std::istringstream ss(line.substr(0, line.find('#')));
        std::string kw;
        if (!(ss >> kw)) continue;
        if (!header) {
            if (kw != "circuit") throw ParseError(0, "expected 'circuit' header");
            header = true;
            continue;
        }
        if (kw == "gate") {
            std::string name, kind;
            if (!(ss >> name >> kind)) throw ParseError(offset, "expected 'gate name kind'");
            if (ids.count(name)) throw ParseError(offset, "duplicate gate: " + name);
            LayeredCircuit::Gate gt;
            gt.name = name;
            if (kind == "AND") {
                gt.is_and = true;
            } else if (kind == "OR") {
                gt.is_and = false;
            } else if (kind == "INPUT") {
                std::string var;
                if (!(ss >> var)) throw ParseError(offset, "input gate needs x<i>_<r>");
                Scan sc{var};
                auto [i, r] = parse_leaf_name(sc);
                gt.prime_index = i;
                gt.residue = r;
            } else {
                throw ParseError(offset, "gate kind must be AND, OR or INPUT");
            }
            ids[name] = static_cast<int>(c.gates.size());
            c.gates.push_back(gt);
        } else if (kw == "edge") {
            std::string a, b;
            if (!(ss >> a >> b)) throw ParseError(offset, "expected 'edge parent child'");
            edges.emplace_back(a, b);
        } else if (kw == "output") {
            if (!(ss >> output_name)) throw ParseError(offset, "expected 'output name'");
        } else {
            throw ParseError(offset, "unknown directive: " + kw);
        }
    }
    if (!header) throw ParseError(0, "empty input, expected 'circuit' header");
    if (output_name.empty() || !ids.count(output_name)) throw ParseError(0, "missing output gate");
    c.output = ids[output_name];

    for (const auto& [a, b] : edges) {
        if (!ids.count(a) || !ids.count(b)) throw ParseError(0, "edge mentions unknown gate");
        c.gates[ids[a]].children.push_back(ids[b]);
    }

    // Layer assignment: depth from the output along edges, which must be
    // unambiguous for a layered circuit.
    std::vector<int> depth(c.gates.size(), 0);
    depth[c.output] = 1;
    bool changed = true;
    int rounds = 0;
    while (changed) {
        if (++rounds > static_cast<int>(c.gates.size()) + 2)
            throw ParseError(0, "circuit has a cycle");
        changed = false;
        for (std::size_t i = 0; i < c.gates.size(); ++i) {
            if (depth[i] == 0) continue;
            for (int ch : c.gates[i].children) {
                int want = depth[i] + 1;
                if (depth[ch] == 0) {
                    depth[ch] = want;
                    changed = true;
                } else if (depth[ch] != want) {
                    throw ParseError(0, "gate sits in two layers: " + c.gates[ch].name);
                }
            }
        }
    }
    int max_depth = 0;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (depth[i] == 0) throw ParseError(0, "gate unreachable from output: " + c.gates[i].name);
        max_depth = std::max(max_depth, depth[i]);
        c.gates[i].layer = depth[i];
    }
    // Inputs must all sit in the deepest layer.
    for (const auto& gt : c.gates) {
        bool is_input = gt.prime_index >= 0;
        if (is_input && gt.layer != max_depth)
            throw ParseError(0, "input gate not in the deepest layer: " + gt.name);
        if (!is_input && gt.layer == max_depth)
            throw ParseError(0, "interior gate in the input layer: " + gt.name);
    }
    c.layers = max_depth;
    c.validate();
    return c;
}

}  // namespace ocmc
