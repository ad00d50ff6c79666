#include "ocmc/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "ocmc/checker.hpp"
#include "ocmc/error.hpp"
#include "ocmc/gadgets.hpp"
#include "ocmc/ocmdp.hpp"

namespace ocmc {

namespace {

using Clock = std::chrono::steady_clock;

struct Recorder {
    SuiteResult r;

    void expect(bool ok, const std::string& what) {
        ++r.total;
        if (!ok) {
            ++r.failed;
            if (r.failures.size() < 5) r.failures.push_back(what);
        }
    }
};

Ocp random_ocp(std::mt19937_64& rng) {
    Ocp o;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) o.add_location("L" + std::to_string(i));
    int nz = static_cast<int>(rng() % (2 * n + 1));
    for (int i = 0; i < nz; ++i)
        o.add_zero(static_cast<int>(rng() % n), static_cast<int>(rng() % 2),
                   static_cast<int>(rng() % n));
    int np = static_cast<int>(rng() % (3 * n + 1));
    for (int i = 0; i < np; ++i)
        o.add_pos(static_cast<int>(rng() % n), static_cast<int>(rng() % 3) - 1,
                  static_cast<int>(rng() % n));
    for (int i = 0; i < n; ++i)
        if (rng() % 2) o.add_label(rng() % 2 ? "u" : "v", i);
    return o;
}

Formula random_core_formula(std::mt19937_64& rng, int budget, int max_lud) {
    std::uniform_int_distribution<int> pick(0, budget <= 1 ? 3 : (max_lud >= 1 ? 8 : 7));
    switch (pick(rng)) {
        case 0:
            return Formula::atom("u");
        case 1:
            return Formula::atom("v");
        case 2:
            return Formula::tru();
        case 3:
            return Formula::fals();
        case 4:
            return Formula::negation(random_core_formula(rng, budget - 1, max_lud));
        case 5:
            return Formula::conj(random_core_formula(rng, budget / 2, max_lud),
                                 random_core_formula(rng, budget / 2, max_lud));
        case 6:
            return Formula::ex(random_core_formula(rng, budget - 1, max_lud));
        case 7:
            return Formula::eu(random_core_formula(rng, budget / 2, max_lud - 1),
                               random_core_formula(rng, budget / 2, max_lud));
        default:
            return Formula::ewu(random_core_formula(rng, budget / 2, max_lud - 1),
                                random_core_formula(rng, budget / 2, max_lud));
    }
}

// ---------------------------------------------------------------------------

SuiteResult suite_lemma2(std::uint64_t) {
    Recorder rec;
    Ocp o = figure7();
    BoundedOracle oracle(o);
    auto family = phi_div_family(6);
    const int t = o.require_location("t");
    const int tbar = o.require_location("tbar");
    for (int i = 1; i <= 6; ++i) {
        const Big pow2 = Big(1) << i;
        for (Big n = 0; n <= 300; ++n) {
            bool divides = n % pow2 == 0;
            Three at_t = oracle.check(family[i - 1], t, n, 512);
            Three at_tbar = oracle.check(family[i - 1], tbar, n, 512);
            bool ok = at_t == (divides ? Three::True : Three::False) &&
                      at_tbar == (divides ? Three::False : Three::True);
            rec.expect(ok, "i=" + std::to_string(i) + " n=" + n.str());
        }
    }
    rec.r.honesty_checks = rec.r.total;
    rec.r.honesty_violations = oracle.honesty_violations();
    return rec.r;
}

SuiteResult suite_lemma4(std::uint64_t) {
    Recorder rec;
    Ocp o = figure7();
    BoundedOracle oracle(o);
    auto family = psi_bit_family(6);
    const int tbar = o.require_location("tbar");
    for (int i = 1; i <= 6; ++i) {
        for (Big n = 0; n <= 300; ++n) {
            Three got = oracle.check(family[i - 1], tbar, n, 512);
            Three want = bit_at(i, n) == 1 ? Three::True : Three::False;
            rec.expect(got == want, "i=" + std::to_string(i) + " n=" + n.str());
        }
    }
    rec.r.honesty_checks = rec.r.total;
    rec.r.honesty_violations = oracle.honesty_violations();
    return rec.r;
}

SuiteResult suite_fact14(std::uint64_t) {
    Recorder rec;
    for (int i = 1; i <= 12; ++i) {
        const Big pow_i = Big(1) << i;
        const Big pow_prev = Big(1) << (i - 1);
        for (long long n = 0; n <= 10000; ++n) {
            bool div_i = Big(n) % pow_i == 0;
            bool div_prev = Big(n) % pow_prev == 0;
            bool even_count = parity_divisible_count(i, n) == Parity::Even;
            bool fact1 = div_i == (div_prev && even_count);
            bool fact4 = (bit_at(i, n) == 1) == !even_count;
            rec.expect(fact1 && fact4, "i=" + std::to_string(i) + " n=" + std::to_string(n));
        }
    }
    for (int k = 9; k <= 64; ++k) {
        Big l = lcm_upto(k);
        rec.expect(l >= (Big(1) << k) && l <= boost::multiprecision::pow(Big(4), k),
                   "nair k=" + std::to_string(k));
    }
    return rec.r;
}

SuiteResult suite_periodicity(std::uint64_t seed) {
    Recorder rec;
    std::mt19937_64 rng(seed);
    std::uint64_t definite = 0, queried = 0;
    int instances = 0;
    while (instances < 200) {
        Ocp o = random_ocp(rng);
        Formula f = random_core_formula(rng, 9, 1);
        if (formula_size(f) > 9) continue;
        ++instances;
        SatTable st = evaluate_periodic(o, f);
        const Big& t = st.params().threshold;
        const Big& k = st.params().period;
        std::uint64_t b = (t + 3 * k).convert_to<std::uint64_t>();
        ThreeValuedTable tv = evaluate_three_valued(o, f, b);

        for (int q = 0; q < o.location_count(); ++q) {
            for (std::uint64_t n = 0; n < st.width(); ++n) {
                Three v = tv.value(q, n);
                ++queried;
                if (v == Three::Unknown) continue;
                ++definite;
                rec.expect((v == Three::True) == st.holds(q, Big(n)),
                           "instance " + std::to_string(instances) + " q=" + std::to_string(q) +
                               " n=" + std::to_string(n));
            }
        }

        // Sampled same-residue pairs above the threshold, cross-checked
        // against the bounded evaluation wherever it is definite.
        for (int q = 0; q < o.location_count(); ++q) {
            for (int s = 0; s < 20; ++s) {
                Big n = t + 1 + static_cast<int>(rng() % k.convert_to<int>());
                Big n2 = n + k * (1 + static_cast<int>(rng() % 2));
                bool same = st.holds(q, n) == st.holds(q, n2);
                Three v1 = tv.value_big(q, n);
                Three v2 = tv.value_big(q, n2);
                bool cross1 = v1 == Three::Unknown || (v1 == Three::True) == st.holds(q, n);
                bool cross2 = v2 == Three::Unknown || (v2 == Three::True) == st.holds(q, n2);
                rec.expect(same && cross1 && cross2,
                           "pair instance " + std::to_string(instances));
            }
        }

        // Raising the bound never flips a definite verdict.
        ++rec.r.honesty_checks;
        if (tv_monotonicity_violations(o, f, b, 2 * b) != 0) ++rec.r.honesty_violations;
    }
    std::ostringstream note;
    note << "definite coverage " << (definite * 100 / std::max<std::uint64_t>(1, queried)) << "%";
    rec.r.note = note.str();
    if (definite * 10 < queried * 7) {
        ++rec.r.failed;
        rec.r.failures.push_back("definite coverage below 70%");
    }
    return rec.r;
}

// Exhaustive boolean formulas over variables x1..xk, by size.
std::vector<BoolFormula> enumerate_bool(int k, int max_size) {
    std::vector<std::vector<BoolFormula>> by_size(max_size + 1);
    for (int v = 1; v <= k; ++v) by_size[1].push_back(BoolFormula::var(v));
    for (int s = 2; s <= max_size; ++s) {
        for (const auto& f : by_size[s - 1]) by_size[s].push_back(BoolFormula::negation(f));
        for (int a = 1; a + 1 < s; ++a) {
            int b = s - 1 - a;
            for (const auto& fa : by_size[a])
                for (const auto& fb : by_size[b]) {
                    by_size[s].push_back(BoolFormula::conj(fa, fb));
                    by_size[s].push_back(BoolFormula::disj(fa, fb));
                }
        }
    }
    std::vector<BoolFormula> out;
    for (const auto& bucket : by_size) out.insert(out.end(), bucket.begin(), bucket.end());
    return out;
}

BoolFormula random_bool(std::mt19937_64& rng, int k, int budget) {
    std::uniform_int_distribution<int> pick(0, budget <= 1 ? 0 : 3);
    switch (pick(rng)) {
        case 1:
            return BoolFormula::negation(random_bool(rng, k, budget - 1));
        case 2:
            return BoolFormula::conj(random_bool(rng, k, budget / 2),
                                     random_bool(rng, k, budget / 2));
        case 3:
            return BoolFormula::disj(random_bool(rng, k, budget / 2),
                                     random_bool(rng, k, budget / 2));
        default:
            return BoolFormula::var(1 + static_cast<int>(rng() % k));
    }
}

bool qbf_valid(const Qbf& q) {
    auto go = [&](auto&& self, int i, Big assignment) -> bool {
        if (i == 0) return q.matrix.eval_bits(assignment);
        Big with = assignment | (Big(1) << (i - 1));
        if (q.exists[i - 1]) return self(self, i - 1, assignment) || self(self, i - 1, with);
        return self(self, i - 1, assignment) && self(self, i - 1, with);
    };
    return go(go, static_cast<int>(q.exists.size()), 0);
}

SuiteResult suite_qbf(std::uint64_t seed) {
    Recorder rec;
    std::mt19937_64 rng(seed);
    Ocp o = figure7();
    const int tbar = o.require_location("tbar");
    for (int k = 1; k <= 3; ++k) {
        std::vector<BoolFormula> matrices = enumerate_bool(k, k == 3 ? 4 : 5);
        for (int extra = 0; extra < 60; ++extra) {
            BoolFormula f = random_bool(rng, k, 9);
            if (f.size() <= 9) matrices.push_back(f);
        }
        const std::uint64_t bound = std::uint64_t(1) << (k + 2);
        for (unsigned prefix = 0; prefix < (1u << k); ++prefix) {
            for (const auto& matrix : matrices) {
                Qbf q;
                q.matrix = matrix;
                q.exists.resize(k);
                for (int i = 0; i < k; ++i) q.exists[i] = (prefix >> i) & 1;
                Formula theta = qbf_reduce(q);
                bool got = evaluate_capped(o, theta, bound).holds(tbar, 0);
                bool stable = evaluate_capped(o, theta, 2 * bound).holds(tbar, 0);
                bool want = qbf_valid(q);
                rec.expect(got == want && stable == want,
                           "k=" + std::to_string(k) + " prefix=" + std::to_string(prefix) +
                               " matrix=" + matrix.to_string());
            }
        }
    }
    rec.r.note = "capped bound 2^(k+2), stability-checked at twice that";
    return rec.r;
}

// Exhaustive residue formulas over a prime list, by size; optionally with
// negated leaves. Only odd sizes exist beyond leaves (binary connectives).
std::vector<CrrFormula> enumerate_crr(const std::vector<int>& primes, int max_size, bool with_neg) {
    std::vector<std::vector<CrrFormula>> by_size(max_size + 1);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (int r = 0; r < primes[i]; ++r) {
            by_size[1].push_back(CrrFormula::leaf(static_cast<int>(i), r));
            if (with_neg) by_size[1].push_back(CrrFormula::neg_leaf(static_cast<int>(i), r));
        }
    }
    for (int s = 3; s <= max_size; s += 2) {
        for (int a = 1; a + 1 < s; ++a) {
            int b = s - 1 - a;
            if (b < 1 || b > max_size) continue;
            for (const auto& fa : by_size[a])
                for (const auto& fb : by_size[b]) {
                    by_size[s].push_back(CrrFormula::conj2(fa, fb));
                    by_size[s].push_back(CrrFormula::disj2(fa, fb));
                }
        }
    }
    std::vector<CrrFormula> out;
    for (const auto& bucket : by_size) out.insert(out.end(), bucket.begin(), bucket.end());
    return out;
}

CrrFormula random_crr(std::mt19937_64& rng, const std::vector<int>& primes, int budget,
                      bool with_neg) {
    std::uniform_int_distribution<int> pick(0, budget <= 1 ? 0 : 2);
    if (budget <= 1 || pick(rng) == 0) {
        int i = static_cast<int>(rng() % primes.size());
        int r = static_cast<int>(rng() % primes[i]);
        if (with_neg && rng() % 4 == 0) return CrrFormula::neg_leaf(i, r);
        return CrrFormula::leaf(i, r);
    }
    CrrFormula a = random_crr(rng, primes, budget / 2, with_neg);
    CrrFormula b = random_crr(rng, primes, budget / 2, with_neg);
    return rng() % 2 ? CrrFormula::conj2(a, b) : CrrFormula::disj2(a, b);
}

SuiteResult suite_prop1(std::uint64_t seed) {
    Recorder rec;
    std::mt19937_64 rng(seed);
    for (int m = 1; m <= 3; ++m) {
        std::vector<int> primes = primes_first(m);
        Big product = 1;
        for (int p : primes) product *= p;
        std::vector<CrrFormula> family = enumerate_crr(primes, 3, true);
        for (int extra = 0; extra < 120; ++extra) {
            CrrFormula f = random_crr(rng, primes, 12, true);
            if (f.size() <= 12) family.push_back(f);
        }
        const std::uint64_t bound = (product + 2).convert_to<std::uint64_t>();
        for (const auto& f : family) {
            CrrFormula clean = eliminate_negations(f, primes);
            GadgetOcn g = ocn_of_crr_formula(clean, primes);
            g.ocp.add_label("at_out", g.out);
            Formula goal = Formula::eu(fixed_ef_formula(), Formula::atom("at_out"));
            CappedTable table = evaluate_capped(g.ocp, goal, bound);
            for (Big v = 0; v < product; ++v) {
                bool want = f.eval(crr(primes, v));
                bool got = table.holds(g.in, v.convert_to<std::uint64_t>());
                rec.expect(got == want,
                           "m=" + std::to_string(m) + " M=" + v.str() + " F=" + f.to_string());
            }
        }
    }
    return rec.r;
}

Nfa random_nfa(std::mt19937_64& rng, int max_states) {
    Nfa a;
    int n = 1 + static_cast<int>(rng() % max_states);
    for (int i = 0; i < n; ++i) a.add_state("s" + std::to_string(i));
    a.initial = 0;
    for (int i = 0; i < n; ++i) a.final_states[i] = rng() % 3 == 0;
    int ntrans = 1 + static_cast<int>(rng() % (2 * n + 1));
    for (int i = 0; i < ntrans; ++i)
        a.transitions.emplace_back(static_cast<int>(rng() % n), static_cast<int>(rng() % 2),
                                   static_cast<int>(rng() % n));
    return a;
}

SuiteResult suite_thm8(std::uint64_t seed) {
    Recorder rec;
    std::mt19937_64 rng(seed);
    const int m = 2;
    std::vector<int> primes{2, 3};
    CrrFormula g = crr_equals_formula(primes, Big(1) << m);
    const std::uint64_t bound = 8;  // prime product plus slack
    for (int round = 0; round < 24; ++round) {
        Nfa a = random_nfa(rng, 3);
        std::vector<bool> truth(4);
        for (int v = 0; v < 4; ++v) truth[v] = rng() % 2;
        CrrFormula f = crr_formula_of_predicate(truth, primes, m);
        bool want = leafstring_oracle(a, f, primes, m);
        for (auto variant : {SerialVariant::Until, SerialVariant::Eg}) {
            SerialComposition sc = serial_compose(a, f, g, primes, m, variant);
            bool got = evaluate_capped(sc.ocp, sc.goal, bound).holds(sc.start, 0);
            rec.expect(got == want, "round " + std::to_string(round) +
                                        (variant == SerialVariant::Until ? " until" : " eg"));
        }
        // The guarded relation never drives an automaton state past 2^m.
        SerialComposition sc = serial_compose(a, f, g, primes, m, SerialVariant::Until);
        CappedTable guard = evaluate_capped(sc.ocp, fixed_ef_formula(), bound);
        std::vector<std::vector<bool>> seen(sc.ocp.location_count(),
                                            std::vector<bool>(bound + 1, false));
        std::vector<Configuration> work{{sc.start, 0}};
        seen[sc.start][0] = true;
        bool window_ok = true;
        while (!work.empty()) {
            Configuration c = work.back();
            work.pop_back();
            if (sc.ocp.location_name(c.location).rfind("n.", 0) == 0 && c.counter > (1 << m))
                window_ok = false;
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
        rec.expect(window_ok, "window round " + std::to_string(round));
    }
    return rec.r;
}

SuiteResult suite_prop2(std::uint64_t) {
    Recorder rec;
    std::vector<int> primes{2, 3};
    std::vector<std::pair<int, int>> leaves;
    for (int i = 0; i < 2; ++i)
        for (int r = 0; r < primes[i]; ++r) leaves.emplace_back(i, r);
    const int nleaves = static_cast<int>(leaves.size());

    std::vector<LayeredCircuit> circuits;

    for (auto [i, r] : leaves) {
        LayeredCircuit c;
        c.layers = 1;
        LayeredCircuit::Gate gt;
        gt.name = "x";
        gt.layer = 1;
        gt.prime_index = i;
        gt.residue = r;
        c.gates.push_back(gt);
        c.output = 0;
        circuits.push_back(c);
    }

    auto add_inputs = [&](LayeredCircuit& c, unsigned mask, int layer) {
        std::vector<int> ids;
        for (int l = 0; l < nleaves; ++l) {
            if (!(mask & (1u << l))) continue;
            LayeredCircuit::Gate gt;
            gt.name = "x" + std::to_string(l);
            gt.layer = layer;
            gt.prime_index = leaves[l].first;
            gt.residue = leaves[l].second;
            c.gates.push_back(gt);
            ids.push_back(static_cast<int>(c.gates.size()) - 1);
        }
        return ids;
    };

    for (unsigned mask = 1; mask < (1u << nleaves); ++mask) {
        if (1 + __builtin_popcount(mask) > 6) continue;
        for (bool is_and : {false, true}) {
            LayeredCircuit c;
            c.layers = 2;
            LayeredCircuit::Gate out;
            out.name = "o";
            out.layer = 1;
            out.is_and = is_and;
            c.gates.push_back(out);
            c.output = 0;
            c.gates[0].children = add_inputs(c, mask, 2);
            circuits.push_back(c);
        }
    }

    for (unsigned mask = 1; mask < (1u << nleaves); ++mask) {
        int b = __builtin_popcount(mask);
        for (int mids = 1; mids <= 2; ++mids) {
            if (1 + mids + b > 6) continue;
            int combos = 1;
            for (int i = 0; i < b; ++i) combos *= (mids == 1 ? 1 : 3);
            for (int combo = 0; combo < combos; ++combo) {
                for (bool out_and : {false, true}) {
                    for (bool mid_and : {false, true}) {
                        LayeredCircuit c;
                        c.layers = 3;
                        LayeredCircuit::Gate out;
                        out.name = "o";
                        out.layer = 1;
                        out.is_and = out_and;
                        c.gates.push_back(out);
                        c.output = 0;
                        std::vector<int> mid_ids;
                        for (int mg = 0; mg < mids; ++mg) {
                            LayeredCircuit::Gate midg;
                            midg.name = "m" + std::to_string(mg);
                            midg.layer = 2;
                            midg.is_and = mid_and;
                            c.gates.push_back(midg);
                            mid_ids.push_back(static_cast<int>(c.gates.size()) - 1);
                            c.gates[0].children.push_back(mid_ids.back());
                        }
                        auto input_ids = add_inputs(c, mask, 3);
                        int code = combo;
                        bool valid = true;
                        for (int i = 0; i < b; ++i) {
                            int assign = mids == 1 ? 2 : code % 3;  // 0: first, 1: second, 2: both
                            code /= 3;
                            if (assign == 0 || assign == 2)
                                c.gates[mid_ids[0]].children.push_back(input_ids[i]);
                            if (mids == 2 && (assign == 1 || assign == 2))
                                c.gates[mid_ids[1]].children.push_back(input_ids[i]);
                        }
                        for (int mg : mid_ids)
                            if (c.gates[mg].children.empty()) valid = false;
                        if (!valid) continue;
                        circuits.push_back(c);
                    }
                }
            }
        }
    }

    for (const auto& c : circuits) {
        c.validate();
        GadgetOcn g = ocn_of_circuit(c, primes);
        Formula phi = ef_of_circuit(c);
        CappedTable table = evaluate_capped(g.ocp, phi, 8);
        for (int v = 0; v < 6; ++v) {
            bool want = c.eval(crr(primes, v));
            bool got = table.holds(g.in, static_cast<std::uint64_t>(v));
            rec.expect(got == want, "circuit gates=" + std::to_string(c.gates.size()) +
                                        " M=" + std::to_string(v));
        }
    }
    rec.r.note = std::to_string(circuits.size()) + " circuits";
    return rec.r;
}

SuiteResult suite_wagner(std::uint64_t seed) {
    Recorder rec;
    std::mt19937_64 rng(seed);
    for (int m = 1; m <= 3; ++m) {
        std::vector<BoolFormula> formulas = enumerate_bool(m, m == 3 ? 4 : 5);
        for (int extra = 0; extra < 20; ++extra) {
            BoolFormula f = random_bool(rng, m, 9);
            if (f.size() <= 9) formulas.push_back(f);
        }
        for (const auto& psi : formulas) {
            WagnerReduction w = wagner_reduce(psi, m);
            Big product = 1;
            for (int p : w.primes) product *= p;
            std::uint64_t bound = (product + 2).convert_to<std::uint64_t>();
            bool got = evaluate_capped(w.ocp, w.goal, bound).holds(w.q0, 0);
            bool want = lexmax_even_oracle(psi, m);
            rec.expect(got == want, "m=" + std::to_string(m) + " psi=" + psi.to_string());
        }
    }
    return rec.r;
}

SuiteResult suite_lemma5mdp(std::uint64_t seed) {
    Recorder rec;
    std::mt19937_64 rng(seed);
    for (int m = 1; m <= 2; ++m) {
        std::vector<int> primes = primes_first(m);
        Big product = 1;
        for (int p : primes) product *= p;
        std::vector<CrrFormula> family = enumerate_crr(primes, 5, false);
        for (int extra = 0; extra < 60; ++extra) {
            CrrFormula f = random_crr(rng, primes, 8, false);
            if (f.size() <= 8) family.push_back(f);
        }
        for (const auto& f : family) {
            CrrMdpGadget g = mdp_of_crr_formula(f, primes);
            Rational gap = 1;
            for (int i = 0; i < f.size(); ++i) gap /= 2;
            for (Big v = 0; v < product; ++v) {
                std::int64_t c = v.convert_to<std::int64_t>();
                FiniteMdp fm =
                    induced_finite_mdp(g.mdp, g.entry, c, c, FrontierMode::Pessimistic);
                auto target = fm.target_vertices(g.targets);
                auto sure = almost_sure_reach(fm, target);
                bool want = f.eval(crr(primes, v));
                int entry_vertex = fm.vertex_of(g.entry, c);
                if (want) {
                    rec.expect(sure[entry_vertex], "sat F=" + f.to_string() + " M=" + v.str());
                } else {
                    auto values = exact_max_reach_values(fm, target);
                    rec.expect(!sure[entry_vertex] && values[entry_vertex] <= 1 - gap,
                               "unsat F=" + f.to_string() + " M=" + v.str());
                }
            }
        }
    }
    return rec.r;
}

SuiteResult suite_thm10mdp(std::uint64_t seed) {
    Recorder rec;
    std::mt19937_64 rng(seed);
    const int m = 2;
    std::vector<int> primes{2, 3};
    CrrFormula g = crr_equals_formula(primes, 4);

    auto chain_for_word = [&](const std::vector<int>& word) {
        Nfa a;
        for (std::size_t i = 0; i <= word.size(); ++i) a.add_state("c" + std::to_string(i));
        a.initial = 0;
        a.final_states[word.size()] = true;
        for (std::size_t i = 0; i < word.size(); ++i)
            a.transitions.emplace_back(static_cast<int>(i), word[i], static_cast<int>(i) + 1);
        return a;
    };

    int yes_count = 0, no_count = 0;
    for (int round = 0; round < 12; ++round) {
        std::vector<bool> truth(4);
        bool all_same;
        do {
            for (int v = 0; v < 4; ++v) truth[v] = rng() % 2;
            all_same = truth == std::vector<bool>(4, true) || truth == std::vector<bool>(4, false);
        } while (all_same);
        CrrFormula f = crr_formula_of_predicate(truth, primes, m);
        std::vector<int> word;
        for (int v = 0; v < 4; ++v) word.push_back(truth[v] ? 1 : 0);

        // Alternate between accepting the true leaf string and a corrupted
        // one.
        std::vector<int> target_word = word;
        bool expect_yes = round % 2 == 0;
        if (!expect_yes) target_word[rng() % 4] ^= 1;
        Nfa a = chain_for_word(target_word);
        bool want = leafstring_oracle(a, f, primes, m);
        rec.expect(want == expect_yes, "instance construction round " + std::to_string(round));

        SerialMdp sm = mdp_serial_compose(a, f, g, primes, m);
        CrrFormula not_g = eliminate_negations(negate_pushed(g), primes);
        CrrFormula not_f = eliminate_negations(negate_pushed(f), primes);
        int neg_size = CrrFormula::conj2(not_f, not_g).size();

        if (want) {
            ++yes_count;
            FiniteMdp fm =
                induced_finite_mdp(sm.mdp, sm.start, 0, (1 << m) + 1, FrontierMode::Pessimistic);
            auto values = exact_max_reach_values(fm, fm.target_vertices(sm.targets));
            rec.expect(values[fm.vertex_of(sm.start, 0)] == 1,
                       "yes-instance round " + std::to_string(round));
        } else {
            ++no_count;
            std::int64_t bound = (1 << m) + f.size() + 10;
            FiniteMdp fm =
                induced_finite_mdp(sm.mdp, sm.start, 0, bound, FrontierMode::Optimistic);
            auto values = exact_max_reach_values(fm, fm.target_vertices(sm.targets));
            Rational slack1 = 1;
            for (int i = 0; i < (1 << m) + 1 + neg_size; ++i) slack1 /= 2;
            Rational slack2 = 1;
            for (std::int64_t i = 0; i < bound - (1 << m); ++i) slack2 /= 2;
            rec.expect(values[fm.vertex_of(sm.start, 0)] <= 1 - slack1 + slack2,
                       "no-instance round " + std::to_string(round));
        }

        // Frontier sandwich at two bounds.
        auto value_at = [&](std::int64_t b, FrontierMode mode) {
            FiniteMdp fm = induced_finite_mdp(sm.mdp, sm.start, 0, b, mode);
            auto values = exact_max_reach_values(fm, fm.target_vertices(sm.targets));
            return values[fm.vertex_of(sm.start, 0)];
        };
        std::int64_t b1 = (1 << m) + 1, b2 = (1 << m) + 4;
        Rational p1 = value_at(b1, FrontierMode::Pessimistic);
        Rational p2 = value_at(b2, FrontierMode::Pessimistic);
        Rational o2 = value_at(b2, FrontierMode::Optimistic);
        Rational o1 = value_at(b1, FrontierMode::Optimistic);
        rec.expect(p1 <= p2 && p2 <= o2 && o2 <= o1, "sandwich round " + std::to_string(round));
    }
    rec.r.note = std::to_string(yes_count) + " yes / " + std::to_string(no_count) + " no";
    return rec.r;
}

SuiteResult suite_honesty(std::uint64_t seed) {
    Recorder rec;
    std::mt19937_64 rng(seed);

    Ocp fig = figure7();
    auto phis = phi_div_family(4);
    auto psis = psi_bit_family(4);
    for (int i = 0; i < 4; ++i) {
        rec.expect(tv_monotonicity_violations(fig, phis[i], 64, 128) == 0,
                   "phi_div " + std::to_string(i + 1));
        rec.expect(tv_monotonicity_violations(fig, psis[i], 64, 128) == 0,
                   "psi_bit " + std::to_string(i + 1));
    }

    for (int round = 0; round < 80; ++round) {
        Ocp o = random_ocp(rng);
        Formula f = random_core_formula(rng, 9, 2);
        rec.expect(tv_monotonicity_violations(o, f, 16, 37) == 0,
                   "random instance " + std::to_string(round));
    }

    std::vector<int> primes{2, 3};
    CrrFormula f = CrrFormula::conj2(CrrFormula::leaf(0, 1), CrrFormula::leaf(1, 2));
    GadgetOcn g = ocn_of_crr_formula(f, primes);
    g.ocp.add_label("at_out", g.out);
    Formula goal = Formula::eu(fixed_ef_formula(), Formula::atom("at_out"));
    rec.expect(tv_monotonicity_violations(g.ocp, goal, 8, 17) == 0, "gadget goal");

    rec.r.honesty_checks = rec.r.total;
    rec.r.honesty_violations = rec.r.failed;
    return rec.r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "lemma2", "lemma4", "fact14", "periodicity", "qbf",      "prop1",
        "thm8",   "prop2",  "wagner", "lemma5mdp",   "thm10mdp", "honesty",
    };
    return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
    auto start = Clock::now();
    SuiteResult r;
    if (name == "lemma2") {
        r = suite_lemma2(seed);
    } else if (name == "lemma4") {
        r = suite_lemma4(seed);
    } else if (name == "fact14") {
        r = suite_fact14(seed);
    } else if (name == "periodicity") {
        r = suite_periodicity(seed);
    } else if (name == "qbf") {
        r = suite_qbf(seed);
    } else if (name == "prop1") {
        r = suite_prop1(seed);
    } else if (name == "thm8") {
        r = suite_thm8(seed);
    } else if (name == "prop2") {
        r = suite_prop2(seed);
    } else if (name == "wagner") {
        r = suite_wagner(seed);
    } else if (name == "lemma5mdp") {
        r = suite_lemma5mdp(seed);
    } else if (name == "thm10mdp") {
        r = suite_thm10mdp(seed);
    } else if (name == "honesty") {
        r = suite_honesty(seed);
    } else {
        throw DomainError("unknown suite: " + name);
    }
    r.name = name;
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

std::string format_suite_result(const SuiteResult& r) {
    std::ostringstream out;
    out << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << ' ' << (r.total - r.failed) << '/'
        << r.total << " cases";
    if (r.honesty_checks > 0) out << ", " << r.honesty_violations << " honesty violations";
    if (!r.note.empty()) out << " (" << r.note << ")";
    out.setf(std::ios::fixed);
    out.precision(2);
    out << " [" << r.seconds << "s]";
    for (const auto& f : r.failures) out << "\n  counterexample: " << f;
    return out.str();
}

}  // namespace ocmc
