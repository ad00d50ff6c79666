// Command-line front end: satisfaction queries against one-counter
// processes, generators for the hardness constructions, exact reachability
// analysis of one-counter Markov decision processes, and the paper-anchored
// self-test suites.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ocmc/checker.hpp"
#include "ocmc/error.hpp"
#include "ocmc/gadgets.hpp"
#include "ocmc/ocmdp.hpp"
#include "ocmc/selftest.hpp"

using namespace ocmc;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;
constexpr int kExitIndeterminate = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

// LOCATION:COUNTER with the counter in decimal or 0b binary.
std::pair<std::string, Big> parse_at(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos) throw Error("--at expects LOCATION:COUNTER");
    std::string loc = text.substr(0, colon);
    std::string num = text.substr(colon + 1);
    if (loc.empty() || num.empty()) throw Error("--at expects LOCATION:COUNTER");
    Big n = 0;
    if (num.rfind("0b", 0) == 0 || num.rfind("0B", 0) == 0) {
        if (num.size() == 2) throw Error("bad binary counter: " + num);
        for (std::size_t i = 2; i < num.size(); ++i) {
            if (num[i] != '0' && num[i] != '1') throw Error("bad binary counter: " + num);
            n = (n << 1) + (num[i] - '0');
        }
    } else {
        try {
            n = Big(num);
        } catch (const std::exception&) {
            throw Error("bad counter: " + num);
        }
    }
    if (n < 0) throw Error("counter must be nonnegative");
    return {loc, n};
}

struct Verdict {
    Three answer = Three::Unknown;
    std::string engine;
    std::string steps;  // engines attempted, in order
    Big threshold = 0, period = 0, representative = 0;
    std::uint64_t bound = 0;
    double ms = 0;
};

const char* answer_name(Three v) {
    switch (v) {
        case Three::True:
            return "true";
        case Three::False:
            return "false";
        default:
            return "indeterminate";
    }
}

void print_verdict(const Verdict& v, bool porcelain) {
    if (porcelain) {
        std::cout << "answer=" << answer_name(v.answer) << '\n'
                  << "engine=" << v.engine << '\n'
                  << "steps=" << (v.steps.empty() ? v.engine : v.steps) << '\n'
                  << "threshold=" << v.threshold.str() << '\n'
                  << "period=" << v.period.str() << '\n'
                  << "representative=" << v.representative.str() << '\n'
                  << "bound=" << v.bound << '\n';
        return;
    }
    std::cout << answer_name(v.answer) << "  (engine " << v.engine;
    if (v.engine == "periodic")
        std::cout << ", t=" << v.threshold.str() << ", K=" << v.period.str()
                  << ", representative " << v.representative.str();
    if (v.bound > 0) std::cout << ", bound " << v.bound;
    std::cout << ", " << v.ms << " ms)\n";
}

int run_check(const std::string& ocp_path, const std::string& formula_text,
              const std::string& at, const std::string& engine, std::uint64_t budget,
              bool porcelain) {
    Ocp o = parse_ocp_text(slurp(ocp_path));
    Formula f = parse_formula(formula_text);
    auto [loc_name, n] = parse_at(at);
    int loc = o.require_location(loc_name);

    Verdict v;
    auto start = std::chrono::steady_clock::now();

    auto run_periodic = [&]() {
        SatTable st = evaluate_periodic(o, f, budget);
        v.answer = st.holds(loc, n) ? Three::True : Three::False;
        v.engine = "periodic";
        v.threshold = st.params().threshold;
        v.period = st.params().period;
        v.representative = st.representative(n);
    };
    auto run_oracle = [&](std::uint64_t b0) {
        BoundedOracle oracle(o, {3, budget});
        v.answer = oracle.check(f, loc, n, b0);
        v.engine = v.answer == Three::Unknown ? "indeterminate" : oracle.last_engine();
        v.bound = oracle.last_bound();
    };

    if (engine == "periodic") {
        run_periodic();
    } else if (engine.rfind("capped:", 0) == 0) {
        std::uint64_t b = std::stoull(engine.substr(7));
        if (n > b) throw Error("counter exceeds the capped bound");
        CappedTable t = evaluate_capped(o, f, b);
        v.answer = t.holds(loc, n.convert_to<std::uint64_t>()) ? Three::True : Three::False;
        v.engine = "capped";
        v.bound = b;
    } else if (engine.rfind("tv:", 0) == 0) {
        std::uint64_t b = std::stoull(engine.substr(3));
        ThreeValuedTable t = evaluate_three_valued(o, f, b);
        v.answer = t.value_big(loc, n);
        v.engine = "three-valued";
        v.bound = b;
    } else if (engine == "auto") {
        try {
            run_periodic();
            v.steps = "periodic";
        } catch (const BudgetError&) {
            v.steps = "periodic-infeasible";
            if (n > 1'000'000) {
                v.answer = Three::Unknown;
                v.engine = "indeterminate (counter too large for bounded oracles)";
            } else {
                std::uint64_t b0 =
                    std::max<std::uint64_t>(64, 2 * n.convert_to<std::uint64_t>() + 2);
                run_oracle(b0);
                v.steps += "," + v.engine;
            }
        }
    } else {
        throw Error("unknown engine: " + engine);
    }

    v.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
               .count();
    print_verdict(v, porcelain);
    switch (v.answer) {
        case Three::True:
            return kExitTrue;
        case Three::False:
            return kExitFalse;
        default:
            return kExitIndeterminate;
    }
}

std::string formula_file_text(const Formula& f) { return render_formula(f) + "\n"; }

int run_mdp(const std::string& mode, const std::string& mdp_path, const std::string& at,
            std::int64_t bound, const std::string& frontier, bool preview, std::size_t budget,
            bool complete) {
    std::vector<int> targets;
    OcMdp a = parse_ocmdp_text(slurp(mdp_path), &targets);
    if (complete) {
        auto done = complete_wellformed(a);
        for (const auto& line : done.additions) std::cerr << "completed: " << line << '\n';
        a = done.mdp;
    }
    if (targets.empty()) throw Error("the model declares no target locations");
    auto [loc_name, n_big] = parse_at(at);
    int loc = a.require_location(loc_name);
    std::int64_t n = n_big.convert_to<std::int64_t>();

    auto analyze = [&](FrontierMode mode_sel) -> std::pair<Rational, bool> {
        FiniteMdp m = induced_finite_mdp(a, loc, n, bound, mode_sel);
        auto target = m.target_vertices(targets);
        int v = m.vertex_of(loc, n);
        if (mode == "asure") {
            auto sure = almost_sure_reach(m, target);
            return {sure[v] ? 1 : 0, sure[v]};
        }
        if (preview) {
            auto values = approx_max_reach_values(m, target);
            std::cout << "preview=" << values[v] << "  (approximate, floating point)\n";
        }
        auto values = exact_max_reach_values(m, target, budget);
        return {values[v], values[v] == 1};
    };

    auto show = [&](const char* label, const Rational& r) {
        std::cout << label << '=' << boost::multiprecision::numerator(r).str() << '/'
                  << boost::multiprecision::denominator(r).str() << '\n';
    };

    if (frontier == "both") {
        auto [pess, pess_one] = analyze(FrontierMode::Pessimistic);
        auto [opt, opt_one] = analyze(FrontierMode::Optimistic);
        (void)pess_one;
        (void)opt_one;
        show("pessimistic", pess);
        show("optimistic", opt);
        std::cout << "sandwich=" << (pess <= opt ? "ok" : "VIOLATED") << '\n';
        return pess <= opt ? kExitTrue : kExitError;
    }
    if (frontier != "opt" && frontier != "pess") throw Error("frontier must be opt, pess or both");
    FrontierMode mode_sel =
        frontier == "opt" ? FrontierMode::Optimistic : FrontierMode::Pessimistic;
    auto [value, is_one] = analyze(mode_sel);
    if (mode == "asure") {
        std::cout << "almost_sure=" << (is_one ? "yes" : "no") << '\n';
        return is_one ? kExitTrue : kExitFalse;
    }
    show("value", value);
    return kExitTrue;
}

int run_selftest(const std::vector<std::string>& which, std::uint64_t seed) {
    std::vector<std::string> suites;
    if (which.empty() || (which.size() == 1 && which[0] == "all")) {
        suites = suite_names();
    } else {
        suites = which;
    }
    bool all_ok = true;
    for (const auto& name : suites) {
        SuiteResult r = run_suite(name, seed);
        std::cout << format_suite_result(r) << '\n';
        all_ok = all_ok && r.passed();
    }
    return all_ok ? kExitTrue : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-counter process model checking toolkit"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "decide a CTL query on a one-counter process");
    std::string ocp_path, formula_str, formula_file, at, engine = "auto";
    std::uint64_t budget = kDefaultStateBudget;
    bool porcelain = false;
    check->add_option("--ocp", ocp_path, "process file")->required();
    check->add_option("--formula", formula_str, "formula text");
    check->add_option("--formula-file", formula_file, "file holding the formula");
    check->add_option("--at", at, "query configuration LOCATION:COUNTER")->required();
    check->add_option("--engine", engine, "auto | periodic | capped:B | tv:B");
    check->add_option("--budget", budget, "state budget for exact evaluation");
    check->add_flag("--porcelain", porcelain, "machine-readable key=value output");

    auto* gadget = app.add_subcommand("gadget", "emit the hardness constructions as files");
    std::string out_dir = ".";
    gadget->add_option("--out", out_dir, "output directory");
    gadget->require_subcommand(1);
    auto* g_fig7 = gadget->add_subcommand("fig7", "the fixed ten-location net");
    int family_index = 1;
    auto* g_phidiv = gadget->add_subcommand("phidiv", "divisibility formula");
    g_phidiv->add_option("index", family_index, "family index i")->required();
    auto* g_psibit = gadget->add_subcommand("psibit", "bit formula");
    g_psibit->add_option("index", family_index, "family index i")->required();
    std::string in_file;
    auto* g_qbf = gadget->add_subcommand("qbf", "quantified boolean formula reduction");
    g_qbf->add_option("file", in_file, "prenex input")->required();
    auto* g_prop1 = gadget->add_subcommand("prop1", "residue formula gadget");
    std::string crr_file;
    int primes_m = 1;
    g_prop1->add_option("--crr", crr_file, "residue formula file")->required();
    g_prop1->add_option("--primes", primes_m, "number of primes")->required();
    auto* g_circuit = gadget->add_subcommand("circuit", "layered circuit gadget");
    g_circuit->add_option("file", in_file, "circuit description")->required();
    g_circuit->add_option("--primes", primes_m, "number of primes")->required();
    auto* g_serial = gadget->add_subcommand("serial", "automaton-driven composition");
    std::string nfa_file, pred_file;
    int serial_m = 2;
    bool eg_variant = false;
    g_serial->add_option("--nfa", nfa_file, "automaton file")->required();
    g_serial->add_option("--pred", pred_file, "truth-table file (line: pred BITS)")->required();
    g_serial->add_option("--m", serial_m, "window exponent")->required();
    g_serial->add_flag("--eg", eg_variant, "loop variant with an EG goal");
    auto* g_wagner = gadget->add_subcommand("wagner", "lexicographic-maximum reduction");
    int wagner_m = 1;
    g_wagner->add_option("file", in_file, "DIMACS CNF input")->required();
    g_wagner->add_option("--m", wagner_m, "number of variables")->required();
    for (auto* sub : gadget->get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    auto* mdp = app.add_subcommand("mdp", "reachability analysis of one-counter MDPs");
    mdp->require_subcommand(1);
    std::string mdp_file, mdp_at, frontier = "pess";
    std::int64_t mdp_bound = 0;
    bool preview = false, complete = false;
    std::size_t mdp_budget = 100'000;
    for (auto* sub : {mdp->add_subcommand("value", "exact maximal reachability value"),
                      mdp->add_subcommand("asure", "almost-sure reachability membership")}) {
        sub->add_option("--mdp", mdp_file, "model file")->required();
        sub->add_option("--at", mdp_at, "start configuration LOCATION:COUNTER")->required();
        sub->add_option("--bound", mdp_bound, "counter truncation bound")->required();
        sub->add_option("--frontier", frontier, "opt | pess | both");
        sub->add_flag("--preview", preview, "also print approximate floating-point values");
        sub->add_flag("--complete", complete, "add missing self-loops before analysis");
        sub->add_option("--budget", mdp_budget, "vertex budget for exact values");
    }

    auto* selftest = app.add_subcommand("selftest", "run the paper-anchored suites");
    std::vector<std::string> suites;
    std::uint64_t seed = 20240901;
    selftest->add_option("suites", suites, "suite names or 'all'");
    selftest->add_option("--seed", seed, "seed for the randomized suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            if (formula_str.empty() == formula_file.empty())
                throw Error("provide exactly one of --formula and --formula-file");
            std::string text = formula_str.empty() ? slurp(formula_file) : formula_str;
            return run_check(ocp_path, text, at, engine, budget, porcelain);
        }

        if (gadget->parsed()) {
            auto path = [&](const std::string& name) { return out_dir + "/" + name; };
            if (g_fig7->parsed()) {
                spit(path("fig7.ocp"), render_ocp(figure7()));
                std::cout << "wrote " << path("fig7.ocp") << '\n';
            } else if (g_phidiv->parsed()) {
                Formula f = phi_div(family_index);
                std::string name = "phi_div_" + std::to_string(family_index) + ".ctl";
                spit(path(name), formula_file_text(f));
                std::cout << "wrote " << path(name) << " (lud " << lud(f) << ")\n";
            } else if (g_psibit->parsed()) {
                Formula f = psi_bit(family_index);
                std::string name = "psi_bit_" + std::to_string(family_index) + ".ctl";
                spit(path(name), formula_file_text(f));
                std::cout << "wrote " << path(name) << " (lud " << lud(f) << ")\n";
            } else if (g_qbf->parsed()) {
                Qbf q = parse_qbf(slurp(in_file));
                spit(path("qbf_theta.ctl"), formula_file_text(qbf_reduce(q)));
                spit(path("qbf_fig7.ocp"), render_ocp(figure7()));
                std::cout << "wrote " << path("qbf_theta.ctl") << " and " << path("qbf_fig7.ocp")
                          << "\nquery at=tbar:0, suggested engine capped:"
                          << (std::uint64_t(1) << (q.exists.size() + 2)) << '\n';
            } else if (g_prop1->parsed()) {
                std::vector<int> primes = primes_first(primes_m);
                CrrFormula f = parse_crr_formula(slurp(crr_file));
                CrrFormula clean = eliminate_negations(f, primes);
                GadgetOcn g = ocn_of_crr_formula(clean, primes);
                g.ocp.add_label("at_in", g.in);
                g.ocp.add_label("at_out", g.out);
                spit(path("prop1.ocp"), render_ocp(g.ocp));
                Formula goal = Formula::eu(fixed_ef_formula(), Formula::atom("at_out"));
                spit(path("prop1_goal.ctl"), formula_file_text(goal));
                std::cout << "wrote " << path("prop1.ocp") << " and " << path("prop1_goal.ctl")
                          << "\nin=" << g.ocp.location_name(g.in)
                          << " out=" << g.ocp.location_name(g.out) << '\n';
            } else if (g_circuit->parsed()) {
                std::istringstream in(slurp(in_file));
                LayeredCircuit c = parse_circuit(in);
                std::vector<int> primes = primes_first(primes_m);
                GadgetOcn g = ocn_of_circuit(c, primes);
                spit(path("circuit.ocp"), render_ocp(g.ocp));
                spit(path("circuit_goal.ctl"), formula_file_text(ef_of_circuit(c)));
                std::cout << "wrote " << path("circuit.ocp") << " and "
                          << path("circuit_goal.ctl") << "\nin=" << g.ocp.location_name(g.in)
                          << '\n';
            } else if (g_serial->parsed()) {
                Nfa a = parse_nfa_text(slurp(nfa_file));
                std::istringstream pin(slurp(pred_file));
                std::string kw, bits;
                pin >> kw >> bits;
                if (kw != "pred" || bits.size() != (std::size_t(1) << serial_m))
                    throw Error("predicate file must hold 'pred' and 2^m bits");
                std::vector<bool> truth;
                for (char c : bits) truth.push_back(c == '1');
                int np = std::max(2, serial_m);
                std::vector<int> primes = primes_first(np);
                Big product = 1;
                for (int p : primes) product *= p;
                while ((Big(1) << serial_m) >= product) {
                    primes = primes_first(++np);
                    product *= primes.back();
                }
                CrrFormula f = crr_formula_of_predicate(truth, primes, serial_m);
                CrrFormula g = crr_equals_formula(primes, Big(1) << serial_m);
                SerialComposition sc =
                    serial_compose(a, f, g, primes, serial_m,
                                   eg_variant ? SerialVariant::Eg : SerialVariant::Until);
                spit(path("serial.ocp"), render_ocp(sc.ocp));
                spit(path("serial_goal.ctl"), formula_file_text(sc.goal));
                std::cout << "wrote " << path("serial.ocp") << " and " << path("serial_goal.ctl")
                          << "\nstart=" << sc.ocp.location_name(sc.start)
                          << " suggested engine capped:" << Big(product + 2).str() << '\n';
            } else if (g_wagner->parsed()) {
                std::istringstream in(slurp(in_file));
                int nvars = 0;
                BoolFormula psi = parse_dimacs_cnf(in, &nvars);
                if (nvars > wagner_m) throw Error("--m smaller than the declared variable count");
                WagnerReduction w = wagner_reduce(psi, wagner_m);
                spit(path("wagner.ocp"), render_ocp(w.ocp));
                spit(path("wagner_goal.ctl"), formula_file_text(w.goal));
                Big product = 1;
                for (int p : w.primes) product *= p;
                std::cout << "wrote " << path("wagner.ocp") << " and " << path("wagner_goal.ctl")
                          << "\nquery at=q0:0, suggested engine capped:" << Big(product + 2).str()
                          << '\n';
            }
            return kExitTrue;
        }

        if (mdp->parsed()) {
            std::string mode = mdp->get_subcommands().front()->get_name();
            return run_mdp(mode, mdp_file, mdp_at, mdp_bound, frontier, preview, mdp_budget,
                           complete);
        }

        if (selftest->parsed()) return run_selftest(suites, seed);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitError;
    } catch (const BudgetError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
