#include "doctest.h"

#include "tiltlab/errors.hpp"
#include "tiltlab/evaluator.hpp"
#include "tiltlab/interpretation.hpp"

using namespace tiltlab;

namespace {

// Values for the unnested value-group variables, computed by walking the
// defining atoms (u = 0, u = vp, a + b = u) until nothing changes. An
// element of the group is represented by t raised to it.
void fill_value_group(const Formula& f, const PerfElem& vp, std::map<std::string, PerfElem>& vals) {
    const Config& cfg = vp.config();
    bool changed = true;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        for (const auto& s : g->subs) walk(s);
        if (g->kind != FormulaNode::Kind::Eq) return;
        Term a = g->terms[0], b = g->terms[1];
        if (a->kind == TermNode::Kind::Var && b->kind == TermNode::Kind::App) std::swap(a, b);
        if (b->kind != TermNode::Kind::Var || vals.count(b->name)) return;
        std::optional<PerfElem> v;
        if (a->name == "0") v = PerfElem::one(cfg);
        else if (a->name == "vp") v = vp;
        else if (a->name == "+" && vals.count(a->args[0]->name) && vals.count(a->args[1]->name))
            v = vals.at(a->args[0]->name) * vals.at(a->args[1]->name);
        if (v) {
            vals.emplace(b->name, *v);
            changed = true;
        }
    };
    while (changed) {
        changed = false;
        walk(f);
    }
}

}  // namespace

TEST_SUITE("interpretation") {

TEST_CASE("Witt pairs reduce to the base field") {
    Signature wp = signatures::witt_pair(signatures::ring());
    for (auto [p, n] : {std::pair{2u, 1u}, std::pair{2u, 2u}, std::pair{3u, 1u}}) {
        auto cfg = PrimeConfig::make(p);
        Interpretation g = gamma_n(n, cfg, signatures::ring());
        auto source = build_wn_structure(cfg, n);
        auto target = build_fq_structure(cfg);
        for (const auto& s : witt_pair_corpus()) {
            CAPTURE(s);
            Formula f = parse_formula(s, wp);
            Formula t = reduce_formula(g, f);
            CHECK(free_vars(t).empty());
            CHECK(eval(source, f) == eval(target, t));
        }
    }
}

TEST_CASE("atomic images of Witt pair reductions are quantifier-free") {
    Signature wp = signatures::witt_pair(signatures::ring());
    Interpretation g = gamma_n(2, PrimeConfig::make(3), signatures::ring());
    for (const char* s : {"E x:W (x + x = 0)", "E x:W (E y:R (x = [y]))", "E x:W (x * x = 1)"}) {
        ReductionResult r = reduce_formula_traced(g, parse_formula(s, wp));
        CHECK(classify(strip_existentials(r.result)) == ComplexityClass::QuantifierFree);
        for (const auto& [name, cs] : r.coords) CHECK(cs.size() == g.dimension(cs.size() == 2 ? "W" : "R"));
    }
    CHECK(g.dimension("W") == 2);
    CHECK(g.dimension("R") == 1);
}

TEST_CASE("composite reductions agree with the staged ones") {
    Signature wp = signatures::witt_pair(signatures::ring());
    auto cfg = PrimeConfig::make(2);
    Interpretation g = gamma_n(2, cfg, signatures::ring());
    Interpretation c = compose(g, identity_interpretation(signatures::ring()));
    CHECK(c.is_composite());
    auto source = build_wn_structure(cfg, 2);
    auto target = build_fq_structure(cfg);
    for (const auto& s : witt_pair_corpus()) {
        Formula f = parse_formula(s, wp);
        bool truth = eval(source, f);
        auto staged = reduce_staged(c, f);
        REQUIRE(staged.size() == 2);
        CHECK(eval(target, staged.back().result) == truth);
        CHECK(eval(target, reduce_formula(c, f)) == truth);
    }
}

TEST_CASE("residue rings go to the tilt with positive existential output") {
    for (auto u : {UntiltSpec::p_power_roots(PrimeConfig::make(2)), UntiltSpec::cyclotomic(PrimeConfig::make(3))}) {
        Interpretation a = a_n(2, u), d = delta_n(2, u), rt = residue_to_tilt(2, u);
        CHECK(rt.is_composite());
        for (const auto& s : {std::string("E x (x * x = 1 + 1)"), std::string("E x (1 + x = 0)")}) {
            Formula f = parse_formula(s, signatures::local());
            CHECK(class_leq(classify(reduce_formula(a, f)), ComplexityClass::ExistentialPositive));
            CHECK(class_leq(classify(reduce_formula(rt, f)), ComplexityClass::ExistentialPositive));
        }
    }
}

TEST_CASE("membership in m goes to the tilt without negation") {
    for (auto [p, d] : {std::pair{2u, 1u}, std::pair{3u, 1u}, std::pair{3u, 2u}}) {
        auto cfg = PrimeConfig::make(p, d);
        auto u = d == 1 ? UntiltSpec::p_power_roots(cfg) : UntiltSpec::abelian(cfg);
        Interpretation delta = delta_n(1, u);
        ReductionResult r = reduce_formula_traced(delta, parse_formula("x in m", delta.source));
        CHECK(classify(r.result) == ComplexityClass::ExistentialPositive);
        TiltModel tilt(cfg, tilt_signature());
        auto holds = [&](const PerfElem& x) { return check_with_witnesses(tilt, r.result, {{"x", x}}).verified; };
        PerfElem t = PerfElem::t(cfg);
        CHECK(holds(t.rescale(Exponent(1, 1, p))));
        CHECK(holds(t + t.pow(2)));
        CHECK(holds(PerfElem::zero(cfg)));
        CHECK_FALSE(holds(PerfElem::one(cfg)));
        CHECK_FALSE(holds(PerfElem::one(cfg) + t));
    }
}

TEST_CASE("Artin-Schreier roots for elements of m") {
    // y_k = -(x + x^p + ... + x^{p^{k-1}}) solves y^p - y = x up to -x^{p^k}
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        PerfElem x = PerfElem::t(cfg).rescale(Exponent(1, 1, p)) + PerfElem::t(cfg).pow(2).scale(cfg->from_int(p - 1));
        PerfElem y = PerfElem::zero(cfg), xp = x;
        for (int k = 1; k <= 3; ++k) {
            y = y - xp;
            xp = xp.frobenius();
            CHECK(y.pow(p) - y - x == -xp);
            CHECK(*xp.valuation() > *x.valuation());
        }
    }
}

TEST_CASE("some representative moves every nonzero residue off the Artin-Schreier image") {
    for (auto [p, d] : {std::pair{2u, 2u}, std::pair{2u, 3u}, std::pair{3u, 2u}, std::pair{5u, 2u}, std::pair{3u, 1u}}) {
        auto cfg = PrimeConfig::make(p, d);
        std::vector<bool> image(cfg->q(), false);
        for (std::uint32_t y = 0; y < cfg->q(); ++y) image[cfg->sub(cfg->frob({y}), {y}).code] = true;
        std::vector<FqElem> reps;
        for (std::uint32_t c = 1; c < cfg->q(); ++c) {
            auto cs = cfg->coords({c});
            std::size_t top = cs.size();
            while (cs[top - 1] == 0) --top;
            if (cs[top - 1] == 1) reps.push_back({c});
        }
        CHECK(reps.size() == (cfg->q() - 1) / (p - 1));
        for (std::uint32_t r = 1; r < cfg->q(); ++r) {
            bool escapes = false;
            for (auto c : reps) escapes = escapes || !image[cfg->mul(c, {r}).code];
            CHECK(escapes);
        }
    }
}

TEST_CASE("value group sentences through witnesses in the tilt") {
    auto cfg = PrimeConfig::make(2);
    auto u = UntiltSpec::p_power_roots(cfg);
    Interpretation vg = value_group_translation(u);
    TiltModel tilt(cfg, tilt_signature());
    const PerfElem vp = u->xi(1).coord(0);
    CHECK(vp == PerfElem::t(cfg));

    auto check = [&](const std::string& text, const std::map<std::string, PerfElem>& chosen) {
        ReductionResult r = reduce_formula_traced(vg, parse_formula(text, signatures::value_group()));
        std::map<std::string, PerfElem> vals = chosen;
        fill_value_group(r.source, vp, vals);
        Assignment hints;
        for (const auto& [name, v] : vals) hints[r.coords.at(name).at(0).name] = v;
        return check_with_witnesses(tilt, r.result, hints);
    };
    CHECK(check("0 < vp", {}).verified);
    CHECK_FALSE(check("vp < 0", {}).verified);
    CHECK(check("E g (g + g = vp)", {{"g", PerfElem::t_pow(cfg, Exponent::fraction(1, 2, 2))}}).verified);
    CHECK_FALSE(check("E g (g + g = vp)", {{"g", PerfElem::t(cfg)}}).verified);
    CHECK(check("E g (0 < g & g < vp)", {{"g", PerfElem::t_pow(cfg, Exponent::fraction(1, 4, 2))}}).verified);
}

TEST_CASE("quantifier-free evaluation in the tilt") {
    auto cfg = PrimeConfig::make(2);
    Signature sig = tilt_signature();
    auto f = [&](const char* s) { return parse_formula(s, sig); };
    PerfElem half = PerfElem::t_pow(cfg, Exponent::fraction(1, 2, 2));
    CHECK(eval_qf({{"x", half}}, f("x * x = {t}"), cfg));
    CHECK(eval_qf({{"x", half}}, f("x in O"), cfg));
    CHECK_FALSE(eval_qf({{"x", PerfElem::t_pow(cfg, Exponent::integer(-1, 2))}}, f("x in O"), cfg));
    CHECK(eval_qf({{"x", half + PerfElem::one(cfg)}}, f("x * x = {1 + t}"), cfg));
    TiltModel local = local_tilt_model(UntiltSpec::p_power_roots(cfg), 1);
    Formula in_m = parse_formula("x in m", local.signature());
    CHECK(eval_qf(local, in_m, {{"x", half}}));
    CHECK_FALSE(eval_qf(local, in_m, {{"x", PerfElem::one(cfg)}}));
}

}  // TEST_SUITE
