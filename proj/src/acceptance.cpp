#include "tiltlab/acceptance.hpp"

#include "tiltlab/congruence.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/evaluator.hpp"
#include "tiltlab/interpretation.hpp"
#include "tiltlab/untilt.hpp"
#include "tiltlab/witt_poly.hpp"
#include "tiltlab/witt_vec.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace tiltlab {

namespace {

struct Tally {
    int checks = 0;
    int failures = 0;
    std::vector<std::string> notes;
    std::ostream* log = nullptr;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failures;
            if (notes.size() < 4) notes.push_back(what);
            if (log) *log << "  failed: " << what << "\n";
        }
    }
    std::string summary() const {
        std::string s = std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks";
        for (const auto& n : notes) s += "; " + n;
        return s;
    }
};

// ---- 1: ghost identities ---------------------------------------------------------

IntPoly ghost_of(const WittPolyCache& c, const std::vector<const IntPoly*>& comps, unsigned k) {
    const auto p = c.p();
    IntPoly acc;
    mpz_class pj = 1;
    for (unsigned j = 0; j <= k; ++j) {
        std::uint64_t e = 1;
        for (unsigned r = j; r < k; ++r) e *= p;
        acc = poly::add(acc, poly::scale(poly::pow(*comps[j], e, c.term_budget()), pj));
        pj *= p;
    }
    return acc;
}

void criterion_ghost(Tally& t) {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        auto& cache = WittPolyCache::for_prime(p);
        for (unsigned i = 0; i <= 4; ++i) {
            std::string where = "p=" + std::to_string(p) + " i=" + std::to_string(i);
            try {
                for (WittKind kind : {WittKind::Sum, WittKind::Product, WittKind::Negation}) {
                    std::vector<const IntPoly*> comps;
                    for (unsigned j = 0; j <= i; ++j) comps.push_back(&cache.get(kind, j));
                    IntPoly lhs = ghost_of(cache, comps, i);
                    IntPoly gx = cache.ghost(i), gy = cache.ghost(i, true);
                    IntPoly rhs = kind == WittKind::Sum       ? poly::add(gx, gy)
                                  : kind == WittKind::Product ? poly::mul(gx, gy, cache.term_budget())
                                                              : poly::scale(gx, -1);
                    const char* label = kind == WittKind::Sum ? "S" : kind == WittKind::Product ? "P" : "I";
                    t.expect(lhs == rhs, std::string(label) + " ghost identity " + where);
                }
            } catch (const BudgetExceeded& e) {
                t.expect(false, where + " budget exceeded (" + e.what() + ")");
            }
        }
    }
}

// ---- 2: W_n(F_p) = Z/p^n ---------------------------------------------------------

void criterion_integers(Tally& t) {
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        for (unsigned n = 1; n <= 3; ++n) {
            const std::int64_t N = checked_pow(p, n);
            std::vector<WittVec> table;
            for (std::int64_t m = 0; m < N; ++m) table.push_back(from_integer(cfg, m, n, WittBase::Fq));
            std::set<std::uint32_t> seen;
            for (const auto& w : table) seen.insert(wn_index(w));
            std::string where = "p=" + std::to_string(p) + " n=" + std::to_string(n);
            t.expect(seen.size() == static_cast<std::size_t>(N), "from_integer not injective " + where);
            t.expect(from_integer(cfg, N, n, WittBase::Fq) == table[0], "p^n is not zero " + where);
            t.expect(from_integer(cfg, -1, n, WittBase::Fq) == table[N - 1], "-1 mismatch " + where);
            for (std::int64_t a = 0; a < N; ++a)
                for (std::int64_t b = 0; b < N; ++b) {
                    t.expect(witt_add(table[a], table[b]) == table[(a + b) % N], "sum table " + where);
                    t.expect(witt_mul(table[a], table[b]) == table[(a * b) % N], "product table " + where);
                }
        }
    }
}

// ---- 3: t-sharp = p --------------------------------------------------------------

void criterion_sharp(Tally& t) {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        auto cfg = PrimeConfig::make(p);
        auto u = UntiltSpec::p_power_roots(cfg);
        for (unsigned n = 1; n <= 5; ++n) {
            std::string where = "p=" + std::to_string(p) + " n=" + std::to_string(n);
            Digits a = reduce(teichmuller(PerfElem::t(cfg), n), u);
            Digits b = reduce(from_integer(cfg, p, n), u);
            t.expect(a == b, "reduce([t]) != reduce(p) " + where);
            t.expect(sharp(PerfElem::t(cfg), u, n) == digits_from_integer(p, u, n), "sharp(t) != p " + where);
        }
    }
}

// ---- 4: cyclotomic ---------------------------------------------------------------

void criterion_cyclotomic(Tally& t) {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        auto cfg = PrimeConfig::make(p);
        auto u = UntiltSpec::cyclotomic(cfg);
        PerfElem t1 = PerfElem::parse(cfg, "t+1");
        for (unsigned n = 1; n <= 4; ++n) {
            std::string where = "p=" + std::to_string(p) + " n=" + std::to_string(n);
            WittVec tl = teichmuller(t1, n);
            WittVec phi = WittVec::zero(cfg, n);
            for (std::uint32_t i = 0; i < p; ++i) phi = witt_add(phi, witt_pow(tl, i));
            t.expect(phi == u->xi(n), "xi differs from sum of powers of [t+1] " + where);
            t.expect(phi.coord(0) == PerfElem::t_pow(cfg, Exponent::integer(p - 1, p)), "c_0 != t^(p-1) " + where);
            WittResidue res = witt_res_check(phi);
            t.expect(res.value == from_integer(cfg, p, n, WittBase::Fq), "W(res) != p " + where);
            if (n >= 2) t.expect(describe_residue(res.value) == "p", "W(res) not described as p " + where);
            t.expect(reduce(phi, u).is_zero(), "reduce(xi) != 0 " + where);
            Digits s = sharp(t1, u, n);
            t.expect(digit_pow(s, p) == Digits::one(u, n), "sharp(t+1)^p != 1 " + where);
            t.expect(!(s == Digits::one(u, n)), "sharp(t+1) == 1 " + where);
        }
    }
}

// ---- 5: digits -------------------------------------------------------------------

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    std::uint64_t below(std::uint64_t m) { return g() % m; }

    PerfElem perf(const Config& cfg, unsigned max_terms = 3) {
        std::vector<PerfTerm> terms;
        unsigned k = static_cast<unsigned>(below(max_terms + 1));
        for (unsigned i = 0; i < k; ++i) {
            std::uint32_t lk = static_cast<std::uint32_t>(below(3));
            std::int64_t den = checked_pow(cfg->p(), lk);
            std::int64_t j = static_cast<std::int64_t>(below(static_cast<std::uint64_t>(2 * den + 1)));
            terms.push_back({Exponent(j, lk, cfg->p()), FqElem{static_cast<std::uint32_t>(1 + below(cfg->q() - 1))}});
        }
        return PerfElem(cfg, terms);
    }
    WittVec witt(const Config& cfg, unsigned n) {
        std::vector<PerfElem> c;
        for (unsigned i = 0; i < n; ++i) c.push_back(perf(cfg));
        return WittVec::from_coords(WittBase::Perfect, c);
    }
};

void criterion_digits(Tally& t) {
    Rng rng(0x5eed0005);
    std::vector<Untilt> untilts;
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        untilts.push_back(UntiltSpec::p_power_roots(cfg));
        untilts.push_back(UntiltSpec::cyclotomic(cfg));
        untilts.push_back(UntiltSpec::abelian(PrimeConfig::make(p, 2)));
    }
    // 300 cases per built-in untilt, split over the two primes
    for (const auto& u : untilts) {
        const Config& cfg = u->config();
        for (int c = 0; c < 150; ++c) {
            unsigned n = 1 + static_cast<unsigned>(c % 4);
            std::string where = u->name() + " p=" + std::to_string(cfg->p()) + " n=" + std::to_string(n) +
                                " case " + std::to_string(c);
            WittVec x = rng.witt(cfg, n), y = rng.witt(cfg, n), eta = rng.witt(cfg, n);
            Digits rx = reduce(x, u), ry = reduce(y, u);
            t.expect(reduce(witt_add(x, witt_mul(u->xi(n), eta)), u) == rx, "reduce(x + xi eta) " + where);
            t.expect(reduce(lift(rx), u) == rx, "round trip " + where);
            t.expect(reduce(witt_add(x, y), u) == digit_add(rx, ry), "sum compatibility " + where);
            t.expect(reduce(witt_mul(x, y), u) == digit_mul(rx, ry), "product compatibility " + where);
            Digits rz = reduce(rng.witt(cfg, n), u);
            t.expect(digit_add(rx, ry) == digit_add(ry, rx), "add commutes " + where);
            t.expect(digit_mul(rx, ry) == digit_mul(ry, rx), "mul commutes " + where);
            t.expect(digit_add(digit_add(rx, ry), rz) == digit_add(rx, digit_add(ry, rz)), "add associates " + where);
            t.expect(digit_mul(digit_mul(rx, ry), rz) == digit_mul(rx, digit_mul(ry, rz)), "mul associates " + where);
            t.expect(digit_mul(rx, digit_add(ry, rz)) == digit_add(digit_mul(rx, ry), digit_mul(rx, rz)),
                     "distributes " + where);
            t.expect(digit_add(rx, Digits::zero(u, n)) == rx, "zero " + where);
            t.expect(digit_mul(rx, Digits::one(u, n)) == rx, "one " + where);
            t.expect(digit_add(rx, digit_neg(rx)).is_zero(), "negation " + where);
            if (!in_maximal_ideal(rx)) t.expect(digit_mul(rx, digit_inv(rx)) == Digits::one(u, n), "inverse " + where);
            // a unit built on purpose: 1 + (something in m)
            Digits unit = digit_add(Digits::one(u, n), digit_mul(sharp(PerfElem::t(cfg), u, n), ry));
            t.expect(digit_mul(unit, digit_inv(unit)) == Digits::one(u, n), "inverse of 1 + t y " + where);
        }
    }
}

// ---- 6: interpretation oracle ----------------------------------------------------

void criterion_oracle(Tally& t) {
    for (std::uint32_t p : {2u, 3u})
        for (unsigned d : {1u, 2u})
            for (unsigned n : {1u, 2u, 3u}) {
                auto cfg = PrimeConfig::make(p, d);
                auto M = build_wn_structure(cfg, n);
                auto N = build_fq_structure(cfg);
                auto g = gamma_n(n, cfg, signatures::ring());
                for (const auto& s : witt_pair_corpus()) {
                    std::string where = "q=" + std::to_string(cfg->q()) + " n=" + std::to_string(n) + " " + s;
                    try {
                        Formula f = parse_formula(s, g.source);
                        bool direct = eval(M, f);
                        bool translated = eval(N, reduce_formula(g, f));
                        t.expect(direct == translated, "truth differs " + where);
                    } catch (const BudgetExceeded&) {
                        t.expect(false, "budget " + where);
                    }
                }
            }
}

// ---- 7: complexity ---------------------------------------------------------------

void collect_atoms(const Formula& f, std::vector<Formula>& out) {
    if (f->is_atomic()) {
        out.push_back(f);
        return;
    }
    for (const auto& s : f->subs) collect_atoms(s, out);
}

void criterion_complexity(Tally& t) {
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        for (unsigned n : {1u, 2u}) {
            auto g = gamma_n(n, cfg, signatures::ring());
            for (const auto& s : witt_pair_corpus()) {
                Formula f = parse_formula(s, g.source);
                Formula un = unnest(f);
                ComplexityClass out = classify(reduce_formula(g, f));
                t.expect(class_leq(out, classify(un)), "gamma output above its unnested input: " + s);
                std::vector<Formula> atoms;
                collect_atoms(un, atoms);
                for (const auto& a : atoms)
                    t.expect(classify(reduce_formula(g, a)) == ComplexityClass::QuantifierFree,
                             "atomic gamma output not quantifier-free: " + to_string(a, &g.source));
            }
        }
    }
    struct Case {
        Untilt u;
        unsigned n;
    };
    std::vector<Case> cases = {{UntiltSpec::p_power_roots(PrimeConfig::make(2)), 2},
                               {UntiltSpec::cyclotomic(PrimeConfig::make(3)), 2}};
    for (const auto& c : cases) {
        auto a = a_n(c.n, c.u);
        auto dl = delta_n(c.n, c.u);
        auto comp = residue_to_tilt(c.n, c.u);
        std::string tag = c.u->name() + " n=" + std::to_string(c.n);
        for (const auto& s : local_ring_corpus()) {
            Formula f = parse_formula(s, signatures::local());
            auto ok = [](const Formula& r) {
                return class_leq(classify(r), ComplexityClass::ExistentialPositive);
            };
            t.expect(ok(reduce_formula(a, f)), "A_n output not existential-positive (" + tag + "): " + s);
            t.expect(ok(reduce_formula(dl, parse_formula(s, dl.source))),
                     "Delta_n output not existential-positive (" + tag + "): " + s);
            t.expect(ok(reduce_formula(comp, f)), "composite output not existential-positive (" + tag + "): " + s);
        }
    }
}

// ---- 8: witnessed translation ----------------------------------------------------

// Pushes an assignment of the source variables to their coordinates.
Assignment to_coordinates(const Assignment& asg, const CoordMap& coords) {
    Assignment out;
    for (const auto& [name, vars] : coords) {
        auto it = asg.find(name);
        if (it == asg.end()) continue;
        const Value& v = it->second;
        if (vars.size() == 1) {
            if (const auto* d = std::get_if<Digits>(&v)) out[vars[0].name] = lift(*d);
            else out[vars[0].name] = v;
        } else if (const auto* w = std::get_if<WittVec>(&v)) {
            for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i].name] = w->coord(static_cast<unsigned>(i));
        }
    }
    return out;
}

Assignment merged(Assignment a, const Assignment& b) {
    for (const auto& [k, v] : b) a.insert_or_assign(k, v);
    return a;
}

bool witnessed_translation(Tally& t, const Untilt& u, unsigned n, const std::string& sentence, const PerfElem& w) {
    std::string where = u->name() + " p=" + std::to_string(u->config()->p()) + " n=" + std::to_string(n);
    Interpretation comp = residue_to_tilt(n, u);
    Formula phi = parse_formula(sentence, signatures::local());
    auto stages = reduce_staged(comp, phi);
    if (stages.size() != 3) {
        t.expect(false, "expected three stages " + where);
        return false;
    }
    std::string x = phi->bound().name;
    ResidueModel residue(u, n);
    WitnessCheck c0 = check_with_witnesses(residue, stages[0].source, {{x, sharp(w, u, n)}});
    t.expect(c0.verified, "source sentence not witnessed " + where + ": " + c0.note);
    WittPairModel pair(u, n);
    Assignment h1 = to_coordinates(c0.assignment, stages[0].coords);
    WitnessCheck ca = check_with_witnesses(pair, stages[0].result, h1);
    t.expect(ca.verified, "A stage not witnessed " + where + ": " + ca.note);
    WitnessCheck cb = check_with_witnesses(pair, stages[1].source, merged(h1, ca.assignment));
    t.expect(cb.verified, "B stage input not witnessed " + where + ": " + cb.note);
    TiltModel local = local_tilt_model(u, n);
    Assignment h2 = to_coordinates(merged(merged(h1, ca.assignment), cb.assignment), stages[1].coords);
    WitnessCheck cc = check_with_witnesses(local, stages[1].result, h2);
    t.expect(cc.verified, "B stage output not witnessed " + where + ": " + cc.note);
    WitnessCheck cd = check_with_witnesses(local, stages[2].source, merged(h2, cc.assignment));
    t.expect(cd.verified, "Delta stage input not witnessed " + where + ": " + cd.note);
    Assignment h3 = to_coordinates(merged(merged(h2, cc.assignment), cd.assignment), stages[2].coords);
    TiltModel field(u->config());
    Formula final_sentence = stages[2].result;
    WitnessCheck cf = check_with_witnesses(field, final_sentence, h3);
    t.expect(cf.verified, "translated sentence not witnessed " + where + ": " + cf.note);
    bool matrix = false;
    try {
        matrix = cf.verified && eval_qf(field, strip_existentials(final_sentence), cf.assignment);
    } catch (const Error& e) {
        t.expect(false, std::string("matrix evaluation failed: ") + e.what());
    }
    t.expect(matrix, "quantifier-free matrix false under the witness assignment " + where);
    for (const Formula& out : {final_sentence, reduce_formula(comp, phi)})
        t.expect(class_leq(classify(out), ComplexityClass::ExistentialPositive),
                 "translated sentence not existential-positive " + where);
    return matrix;
}

void criterion_witnessed(Tally& t) {
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        std::string prod = "x", pint = "1";
        for (std::uint32_t i = 1; i < p; ++i) prod += " * x", pint += " + 1";
        auto pr = UntiltSpec::p_power_roots(cfg);
        PerfElem root = PerfElem::t_pow(cfg, Exponent(1, 1, p));
        // digit oracle: (p^{1/p})^p = p in O_K/(p^2)
        t.expect(digit_pow(sharp(root, pr, 2), p) == digits_from_integer(p, pr, 2), "sharp(t^(1/p))^p != p");
        witnessed_translation(t, pr, 2, "E x (" + prod + " = " + pint + ")", root);

        auto cy = UntiltSpec::cyclotomic(cfg);
        std::string phi_p = "1";
        std::string power = "";
        for (std::uint32_t i = 1; i < p; ++i) {
            power = power.empty() ? "x" : power + " * x";
            phi_p += " + " + power;
        }
        PerfElem t1 = PerfElem::parse(cfg, "t+1");
        Digits z = sharp(t1, cy, 2);
        Digits sum = Digits::zero(cy, 2);
        for (std::uint32_t i = 0; i < p; ++i) sum = digit_add(sum, digit_pow(z, i));
        t.expect(sum.is_zero(), "sharp(t+1) is not a root of the cyclotomic polynomial");
        witnessed_translation(t, cy, 2, "E x (" + phi_p + " = 0)", t1);
    }
}

// ---- 9: congruence transfer ------------------------------------------------------

void criterion_transfer(Tally& t) {
    SearchBounds b;
    b.K = 3;
    b.S = 4;
    int witnessed = 0, inconclusive = 0;
    for (const auto& inst : transfer_corpus()) {
        auto cfg = PrimeConfig::make(inst.p);
        auto sys = PolySystem::parse(cfg, inst.equations, inst.inequations);
        TransferReport r = transfer_check(sys, inst.gamma, b);
        t.expect(r.verdict != "disagree", "disagreement on " + inst.name + ": " + sys.to_string());
        if (r.residue.status == SearchStatus::Witness || r.valuation.status == SearchStatus::Witness) ++witnessed;
        if (r.verdict == "inconclusive") ++inconclusive;
        if (t.log) *t.log << "  " << inst.name << ": " << r.verdict << "\n";
    }
    t.notes.push_back(std::to_string(witnessed) + " witnessed, " + std::to_string(inconclusive) + " inconclusive");
}

// ---- 10: Frobenius rescaling -----------------------------------------------------

void criterion_frobenius(Tally& t) {
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        for (const std::string& f : {"X^" + std::to_string(p) + " - T", std::string("X - T")}) {
            auto sys = PolySystem::parse(cfg, {f});
            for (unsigned N = 0; N <= 3; ++N) {
                std::string where = f + " p=" + std::to_string(p) + " N=" + std::to_string(N);
                SearchResult r = solve_mod_tN(sys, N, SearchBounds{});
                t.expect(r.status == SearchStatus::Witness, "no solution " + where);
                if (r.status != SearchStatus::Witness) continue;
                t.expect(verify_mod_tN(sys, N, r.witness), "solution does not verify " + where);
                // and back: x^{1/p^N} solves the substituted system mod t
                std::vector<PerfElem> back;
                for (const auto& x : r.witness) back.push_back(x.frobenius_pow(-static_cast<int>(N)));
                PerfElem tn = PerfElem::t_pow(cfg, Exponent(1, N, p));
                bool ok = true;
                for (const auto& e : sys.equations())
                    ok = ok && sys.evaluate(e, back, tn, Exponent::integer(1, p)).is_zero();
                t.expect(ok, "root does not solve the substituted system " + where);
            }
        }
    }
}

struct Entry {
    const char* name;
    double limit;
    void (*run)(Tally&);
};

const Entry kEntries[] = {
    {"ghost-identities", 10, criterion_ghost},
    {"witt-integers", 5, criterion_integers},
    {"t-sharp-equals-p", 5, criterion_sharp},
    {"cyclotomic", 10, criterion_cyclotomic},
    {"digits", 60, criterion_digits},
    {"interpretation-oracle", 120, criterion_oracle},
    {"complexity", 10, criterion_complexity},
    {"witnessed-translation", 10, criterion_witnessed},
    {"congruence-transfer", 120, criterion_transfer},
    {"frobenius-rescaling", 10, criterion_frobenius},
};

}  // namespace

int acceptance_count() { return static_cast<int>(std::size(kEntries)); }

std::string acceptance_name(int id) {
    if (id < 1 || id > acceptance_count()) throw UsageError("no criterion " + std::to_string(id));
    return kEntries[id - 1].name;
}

CriterionResult run_criterion(int id, std::ostream* log) {
    acceptance_name(id);  // validates id
    const Entry& s = kEntries[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = s.name;
    r.limit = s.limit;
    Tally t;
    t.log = log;
    auto start = std::chrono::steady_clock::now();
    try {
        s.run(t);
    } catch (const std::exception& e) {
        t.expect(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.correct = t.failures == 0 && t.checks > 0;
    r.detail = t.summary();
    return r;
}

std::string format_line(const CriterionResult& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs/%.0fs", r.seconds, r.limit);
    std::string line = std::string(r.pass() ? "PASS" : "FAIL") + " " + (r.id < 10 ? " " : "") + std::to_string(r.id) +
                       " " + r.name + " " + buf;
    if (r.correct && !r.pass()) line += " over time limit;";
    return line + " " + r.detail;
}

}  // namespace tiltlab
