#include <cctype>
#include <string>

#include "ocmc/ctl.hpp"
#include "ocmc/error.hpp"

// Grammar, precedence low to high:
//   implies := or ('->' implies)?            right associative
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '~' unary | 'EX' unary | 'AX' unary | 'EF' unary | 'EG' unary
//            | 'E' '[' implies ('U'|'W') implies ']' | '(' implies ')'
//            | 'true' | 'false' | atom

namespace ocmc {

namespace {

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool try_punct(const char* tok) {
        skip_ws();
        std::size_t n = std::char_traits<char>::length(tok);
        if (s.compare(pos, n, tok) == 0) {
            pos += n;
            return true;
        }
        return false;
    }
    // Identifier starting at the cursor, or empty if none. Dots may appear
    // after the first character; generated proposition names use them.
    std::string try_ident() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() &&
            (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                                      s[pos] == '_' || s[pos] == '.')) {
                ++pos;
            }
        }
        return s.substr(start, pos - start);
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos, msg); }
};

struct Parser {
    Lexer lx;

    Formula implies() {
        Formula a = disjunction();
        if (lx.try_punct("->")) return Formula::implies(std::move(a), implies());
        return a;
    }
    Formula disjunction() {
        Formula a = conjunction();
        while (true) {
            lx.skip_ws();
            // '|' but not '->'-like lookahead issues; '|' is a single char.
            if (lx.pos < lx.s.size() && lx.s[lx.pos] == '|') {
                ++lx.pos;
                a = Formula::disj(std::move(a), conjunction());
            } else {
                break;
            }
        }
        return a;
    }
    Formula conjunction() {
        Formula a = unary();
        while (lx.try_punct("&")) a = Formula::conj(std::move(a), unary());
        return a;
    }
    Formula unary() {
        if (lx.try_punct("~")) return Formula::negation(unary());
        if (lx.try_punct("(")) {
            Formula a = implies();
            if (!lx.try_punct(")")) lx.fail("expected ')'");
            return a;
        }
        std::size_t save = lx.pos;
        std::string id = lx.try_ident();
        if (id.empty()) lx.fail("expected a formula");
        if (id == "true") return Formula::tru();
        if (id == "false") return Formula::fals();
        if (id == "EX") return Formula::ex(unary());
        if (id == "AX") return Formula::ax(unary());
        if (id == "EF") return Formula::ef(unary());
        if (id == "EG") return Formula::eg(unary());
        if (id == "E") {
            if (!lx.try_punct("[")) lx.fail("expected '[' after E");
            Formula a = implies();
            std::string mid = lx.try_ident();
            Formula b;
            if (mid == "U") {
                b = implies();
                if (!lx.try_punct("]")) lx.fail("expected ']'");
                return Formula::eu(std::move(a), std::move(b));
            }
            if (mid == "W") {
                b = implies();
                if (!lx.try_punct("]")) lx.fail("expected ']'");
                return Formula::ewu(std::move(a), std::move(b));
            }
            lx.fail("expected 'U' or 'W' inside E[...]");
        }
        if (id == "U" || id == "W" || id == "AX" || id == "A") {
            lx.pos = save;
            lx.fail("reserved word used as atom: " + id);
        }
        return Formula::atom(std::move(id));
    }
};

enum Prec { PrecImplies = 0, PrecOr = 1, PrecAnd = 2, PrecUnary = 3 };

void render(const Formula& f, int parent_prec, std::string& out) {
    auto wrap = [&](int prec, auto&& body) {
        bool need = prec < parent_prec;
        if (need) out += '(';
        body();
        if (need) out += ')';
    };
    switch (f.op()) {
        case CtlOp::True:
            out += "true";
            break;
        case CtlOp::False:
            out += "false";
            break;
        case CtlOp::Atom:
            out += f.atom_name();
            break;
        case CtlOp::Not:
            out += '~';
            render(f.left(), PrecUnary, out);
            break;
        case CtlOp::ExistsNext:
            out += "EX ";
            render(f.left(), PrecUnary, out);
            break;
        case CtlOp::ForallNext:
            out += "AX ";
            render(f.left(), PrecUnary, out);
            break;
        case CtlOp::ExistsFinally:
            out += "EF ";
            render(f.left(), PrecUnary, out);
            break;
        case CtlOp::ExistsGlobally:
            out += "EG ";
            render(f.left(), PrecUnary, out);
            break;
        case CtlOp::And:
            wrap(PrecAnd, [&] {
                // Left associative: right-nested chains keep their parens.
                render(f.left(), PrecAnd, out);
                out += " & ";
                render(f.right(), PrecAnd + 1, out);
            });
            break;
        case CtlOp::Or:
            wrap(PrecOr, [&] {
                render(f.left(), PrecOr, out);
                out += " | ";
                render(f.right(), PrecOr + 1, out);
            });
            break;
        case CtlOp::Implies:
            wrap(PrecImplies, [&] {
                // Right associative; force parens on a nested implication
                // to the left.
                render(f.left(), PrecImplies + 1, out);
                out += " -> ";
                render(f.right(), PrecImplies, out);
            });
            break;
        case CtlOp::ExistsUntil:
        case CtlOp::ExistsWeakUntil:
            out += "E[ ";
            render(f.left(), PrecImplies, out);
            out += f.op() == CtlOp::ExistsUntil ? " U " : " W ";
            render(f.right(), PrecImplies, out);
            out += " ]";
            break;
    }
}

}  // namespace

Formula parse_formula(const std::string& text) {
    Parser p{Lexer{text}};
    Formula f = p.implies();
    if (!p.lx.eof()) p.lx.fail("trailing input after formula");
    return f;
}

std::string render_formula(const Formula& f) {
    std::string out;
    render(f, PrecImplies, out);
    return out;
}

}  // namespace ocmc
