#include <algorithm>
#include <array>
#include <sstream>

#include "ocmc/error.hpp"
#include "ocmc/ocp.hpp"

namespace ocmc {

namespace {

// Splits a line into whitespace tokens, dropping '#' comments.
std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line.substr(0, line.find('#')));
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

int parse_delta(const std::string& t, std::size_t pos) {
    if (t == "0") return 0;
    if (t == "1" || t == "+1") return 1;
    if (t == "-1") return -1;
    throw ParseError(pos, "bad transition delta: " + t);
}

long long parse_weight(const std::string& t, std::size_t pos) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError(pos, "bad weight: " + t);
    }
}

}  // namespace

Ocp parse_ocp(std::istream& in) {
    std::string line;
    std::size_t offset = 0;
    bool header = false;
    WeightedOcpSpec spec;
    bool weighted = false;
    Ocp direct;

    auto require = [&](const std::string& name, bool in_spec) {
        int id = in_spec ? spec.location_id(name) : direct.location_id(name);
        if (id < 0) throw ParseError(offset, "unknown location: " + name);
        return id;
    };

    std::vector<std::array<std::string, 3>> zero_lines, pos_lines;
    std::vector<std::array<std::string, 3>> wzero_lines, wpos_lines;
    std::vector<std::pair<std::string, std::vector<std::string>>> prop_lines;
    std::vector<std::string> loc_names;

    while (std::getline(in, line)) {
        auto toks = tokens_of(line);
        offset += line.size() + 1;
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (!header) {
            if (kw != "ocp") throw ParseError(0, "expected 'ocp' header");
            header = true;
            continue;
        }
        if (kw == "loc") {
            loc_names.insert(loc_names.end(), toks.begin() + 1, toks.end());
        } else if (kw == "prop") {
            if (toks.size() < 3 || toks[2] != ":")
                throw ParseError(offset, "expected 'prop name : loc...'");
            prop_lines.emplace_back(toks[1], std::vector<std::string>(toks.begin() + 3, toks.end()));
        } else if (kw == "zero" || kw == "pos" || kw == "wzero" || kw == "wpos") {
            if (toks.size() != 4) throw ParseError(offset, "expected '" + kw + " src delta dst'");
            std::array<std::string, 3> t{toks[1], toks[2], toks[3]};
            if (kw == "zero") zero_lines.push_back(t);
            if (kw == "pos") pos_lines.push_back(t);
            if (kw == "wzero") {
                wzero_lines.push_back(t);
                weighted = true;
            }
            if (kw == "wpos") {
                wpos_lines.push_back(t);
                weighted = true;
            }
        } else {
            throw ParseError(offset, "unknown directive: " + kw);
        }
    }
    if (!header) throw ParseError(0, "empty input, expected 'ocp' header");

    if (!weighted) {
        for (const auto& n : loc_names) direct.add_location(n);
        for (const auto& [p, locs] : prop_lines)
            for (const auto& l : locs) direct.add_label(p, require(l, false));
        for (const auto& t : zero_lines)
            direct.add_zero(require(t[0], false), parse_delta(t[1], offset), require(t[2], false));
        for (const auto& t : pos_lines)
            direct.add_pos(require(t[0], false), parse_delta(t[1], offset), require(t[2], false));
        return direct;
    }

    for (const auto& n : loc_names) spec.add_location(n);
    for (const auto& [p, locs] : prop_lines) {
        auto& set = spec.labels[p];
        set.resize(spec.names.size(), false);
        for (const auto& l : locs) set[require(l, true)] = true;
    }
    for (const auto& t : zero_lines)
        spec.zero.push_back({require(t[0], true), parse_delta(t[1], offset), require(t[2], true)});
    for (const auto& t : pos_lines)
        spec.pos.push_back({require(t[0], true), parse_delta(t[1], offset), require(t[2], true)});
    for (const auto& t : wzero_lines)
        spec.zero.push_back({require(t[0], true), parse_weight(t[1], offset), require(t[2], true)});
    for (const auto& t : wpos_lines)
        spec.pos.push_back({require(t[0], true), parse_weight(t[1], offset), require(t[2], true)});
    return normalize_weighted(spec).ocp;
}

Ocp parse_ocp_text(const std::string& text) {
    std::istringstream in(text);
    return parse_ocp(in);
}

std::string render_ocp(const Ocp& o) {
    std::ostringstream out;
    out << "ocp\n";
    if (o.location_count() > 0) {
        out << "loc";
        for (int i = 0; i < o.location_count(); ++i) out << ' ' << o.location_name(i);
        out << '\n';
    }
    for (const auto& [prop, set] : o.labeling()) {
        bool any = std::find(set.begin(), set.end(), true) != set.end();
        if (!any) continue;
        out << "prop " << prop << " :";
        for (std::size_t i = 0; i < set.size(); ++i)
            if (set[i]) out << ' ' << o.location_name(static_cast<int>(i));
        out << '\n';
    }
    auto emit = [&](const char* kw, std::vector<Transition> ts) {
        std::sort(ts.begin(), ts.end());
        for (const auto& t : ts) {
            out << kw << ' ' << o.location_name(t.src) << ' ' << (t.delta > 0 ? "+1" : t.delta < 0 ? "-1" : "0")
                << ' ' << o.location_name(t.dst) << '\n';
        }
    };
    emit("zero", o.zero_transitions());
    emit("pos", o.pos_transitions());
    return out.str();
}

Nfa parse_nfa(std::istream& in) {
    std::string line;
    std::size_t offset = 0;
    bool header = false;
    Nfa a;
    bool saw_init = false;
    while (std::getline(in, line)) {
        auto toks = tokens_of(line);
        offset += line.size() + 1;
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (!header) {
            if (kw != "nfa") throw ParseError(0, "expected 'nfa' header");
            header = true;
            continue;
        }
        auto require = [&](const std::string& n) {
            int id = a.state_id(n);
            if (id < 0) throw ParseError(offset, "unknown state: " + n);
            return id;
        };
        if (kw == "state") {
            for (std::size_t i = 1; i < toks.size(); ++i) a.add_state(toks[i]);
        } else if (kw == "init") {
            if (toks.size() != 2) throw ParseError(offset, "expected 'init name'");
            a.initial = require(toks[1]);
            saw_init = true;
        } else if (kw == "final") {
            for (std::size_t i = 1; i < toks.size(); ++i) a.final_states[require(toks[i])] = true;
        } else if (kw == "trans") {
            if (toks.size() != 4) throw ParseError(offset, "expected 'trans src bit dst'");
            int bit = toks[2] == "0" ? 0 : toks[2] == "1" ? 1 : -1;
            if (bit < 0) throw ParseError(offset, "bit must be 0 or 1");
            a.transitions.emplace_back(require(toks[1]), bit, require(toks[3]));
        } else {
            throw ParseError(offset, "unknown directive: " + kw);
        }
    }
    if (!header) throw ParseError(0, "empty input, expected 'nfa' header");
    if (!saw_init) throw ParseError(offset, "missing 'init'");
    return a;
}

Nfa parse_nfa_text(const std::string& text) {
    std::istringstream in(text);
    return parse_nfa(in);
}

std::string render_nfa(const Nfa& a) {
    std::ostringstream out;
    out << "nfa\nstate";
    for (const auto& s : a.states) out << ' ' << s;
    out << "\ninit " << a.states[a.initial] << '\n';
    bool any_final = std::find(a.final_states.begin(), a.final_states.end(), true) != a.final_states.end();
    if (any_final) {
        out << "final";
        for (std::size_t i = 0; i < a.states.size(); ++i)
            if (a.final_states[i]) out << ' ' << a.states[i];
        out << '\n';
    }
    for (auto [src, bit, dst] : a.transitions)
        out << "trans " << a.states[src] << ' ' << bit << ' ' << a.states[dst] << '\n';
    return out.str();
}

}  // namespace ocmc
