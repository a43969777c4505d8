#include "doctest.h"

#include "gen.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/evaluator.hpp"
#include "tiltlab/formula.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

using namespace tiltlab;

namespace {

// Plain recursive evaluator over Z/mw (sort W) and Z/mr (sort R), with [r]
// given by a table. Shares nothing with the library evaluator.
struct NaiveModel {
    std::map<std::string, unsigned> size;
    std::vector<unsigned> teich;

    unsigned term(const Term& t, std::map<std::string, unsigned>& env) const {
        if (t->kind == TermNode::Kind::Var) return env.at(t->name);
        unsigned m = size.at(t->sort);
        if (t->name == "0") return 0;
        if (t->name == "1") return 1 % m;
        if (t->name == "[]") return teich.at(term(t->args[0], env));
        unsigned a = term(t->args[0], env), b = term(t->args[1], env);
        if (t->name == "+") return (a + b) % m;
        if (t->name == "*") return (a * b) % m;
        throw std::logic_error("naive model: unknown symbol " + t->name);
    }

    bool holds(const Formula& f, std::map<std::string, unsigned>& env) const {
        using K = FormulaNode::Kind;
        switch (f->kind) {
        case K::True: return true;
        case K::False: return false;
        case K::Eq: return term(f->terms[0], env) == term(f->terms[1], env);
        case K::Rel: throw std::logic_error("naive model has no relations");
        case K::Not: return !holds(f->subs[0], env);
        case K::And:
            for (const auto& s : f->subs)
                if (!holds(s, env)) return false;
            return true;
        case K::Or:
            for (const auto& s : f->subs)
                if (holds(s, env)) return true;
            return false;
        case K::Implies: return !holds(f->subs[0], env) || holds(f->subs[1], env);
        case K::Forall:
        case K::Exists: {
            bool want = f->kind == K::Exists;
            auto saved = env.find(f->name) != env.end() ? std::optional<unsigned>(env[f->name]) : std::nullopt;
            bool result = !want;
            for (unsigned v = 0; v < size.at(f->sort); ++v) {
                env[f->name] = v;
                if (holds(f->subs[0], env) == want) {
                    result = want;
                    break;
                }
            }
            if (saved) env[f->name] = *saved;
            else env.erase(f->name);
            return result;
        }
        }
        return false;
    }

    bool holds(const Formula& f) const {
        std::map<std::string, unsigned> env;
        return holds(f, env);
    }
};

}  // namespace

TEST_SUITE("formula") {

TEST_CASE("corpora print and parse back to the same text") {
    Signature wp = signatures::witt_pair(signatures::ring());
    for (const auto& s : witt_pair_corpus()) {
        Formula f = parse_formula(s, wp);
        std::string printed = to_string(f, &wp);
        CHECK(to_string(parse_formula(printed, wp), &wp) == printed);
    }
    Signature lcr = signatures::local();
    for (const auto& s : local_ring_corpus()) {
        Formula f = parse_formula(s, lcr);
        CHECK(to_string(parse_formula(to_string(f, &lcr), lcr), &lcr) == to_string(f, &lcr));
        CHECK(class_leq(classify(f), ComplexityClass::ExistentialPositive));
    }
    CHECK(witt_pair_corpus().size() == 50);
    CHECK(local_ring_corpus().size() == 50);
}

TEST_CASE("library evaluator agrees with a naive evaluator on W_2(F_p) = Z/p^2") {
    Signature wp = signatures::witt_pair(signatures::ring());
    // Teichmuller lifts: 0, 1 in Z/4; 0, 1, -1 in Z/9
    NaiveModel z4{{{"W", 4}, {"R", 2}}, {0, 1}};
    NaiveModel z9{{{"W", 9}, {"R", 3}}, {0, 1, 8}};
    auto s2 = build_wn_structure(PrimeConfig::make(2), 2);
    auto s3 = build_wn_structure(PrimeConfig::make(3), 2);
    for (const auto& s : witt_pair_corpus()) {
        CAPTURE(s);
        Formula f = parse_formula(s, wp);
        CHECK(eval(s2, f) == z4.holds(f));
        CHECK(eval(s3, f) == z9.holds(f));
    }
}

TEST_CASE("library evaluator agrees with a naive evaluator on random F_p sentences") {
    Signature r = signatures::ring();
    testgen::Gen g{std::mt19937(41), &r};
    for (std::uint32_t p : {2u, 3u, 5u}) {
        NaiveModel zp{{{"R", p}}, {}};
        auto fp = build_fq_structure(PrimeConfig::make(p), r);
        for (int i = 0; i < 30; ++i) {
            Formula f = g.sentence(3);
            CAPTURE(to_string(f));
            CHECK(eval(fp, f) == zp.holds(f));
        }
    }
}

TEST_CASE("double negation and prenex forms keep truth values") {
    Signature r = signatures::ring();
    testgen::Gen g{std::mt19937(42), &r};
    auto f4 = build_fq_structure(PrimeConfig::make(2, 2), r);
    for (int i = 0; i < 40; ++i) {
        Formula f = g.sentence(3);
        CHECK(eval(f4, f) == eval(f4, f_not(f_not(f))));
    }
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"(E x (x * x = 1 + 1)) & (A y (y + y = 0))", "E x (A y (x * x = 1 + 1 & y + y = 0))"},
        {"(A x (x * x = x)) | (E y (y * y * y = y + 1))", "A x (E y (x * x = x | y * y * y = y + 1))"},
        {"~(A x (E y (x * y = 1)))", "E x (A y (~(x * y = 1)))"},
        {"(E x (x = 1 + 1)) -> (A y (y * y = y))", "A x (A y (~(x = 1 + 1) | y * y = y))"},
    };
    for (std::uint32_t p : {2u, 3u})
        for (unsigned d : {1u, 2u}) {
            auto m = build_fq_structure(PrimeConfig::make(p, d), r);
            for (const auto& [a, b] : pairs) CHECK(eval(m, parse_formula(a, r)) == eval(m, parse_formula(b, r)));
        }
}

TEST_CASE("unnesting keeps truth values and produces unnested atoms") {
    Signature wp = signatures::witt_pair(signatures::ring());
    testgen::Gen g{std::mt19937(43), &wp};
    auto w1 = build_wn_structure(PrimeConfig::make(2), 1);
    auto w2 = build_wn_structure(PrimeConfig::make(2), 2);
    for (int i = 0; i < 50; ++i) {
        Formula f = g.sentence(2);
        CAPTURE(to_string(f, &wp));
        Formula u = unnest(f);
        CHECK(is_unnested(u));
        CHECK(free_vars(u).empty());
        CHECK(eval(w1, f) == eval(w1, u));
        if (i < 15) CHECK(eval(w2, f) == eval(w2, u));
    }
}

TEST_CASE("complexity classes") {
    Signature lcr = signatures::local();
    auto cls = [&](const char* s) { return classify(parse_formula(s, lcr)); };
    CHECK(cls("1 + 1 = 0") == ComplexityClass::QuantifierFree);
    CHECK(cls("~(1 = 0)") == ComplexityClass::QuantifierFree);
    CHECK(cls("E x (x in m & x * x = 0)") == ComplexityClass::ExistentialPositive);
    CHECK(cls("E x (~(x in m))") == ComplexityClass::Existential);
    CHECK(cls("A x (x * x = x)") == ComplexityClass::Universal);
    CHECK(cls("~(E x (x = 1))") == ComplexityClass::Universal);
    CHECK(cls("A x (E y (x * y = 1))") == ComplexityClass::Full);
    CHECK(class_leq(ComplexityClass::ExistentialPositive, ComplexityClass::Existential));
    CHECK_FALSE(class_leq(ComplexityClass::Universal, ComplexityClass::Existential));
    CHECK(join(ComplexityClass::Existential, ComplexityClass::Universal) == ComplexityClass::Full);
}

TEST_CASE("parse errors carry positions") {
    Signature r = signatures::ring();
    CHECK_THROWS_AS(parse_formula("E x (x = )", r), ParseError);
    CHECK_THROWS_AS(parse_formula("E x (x + = 1", r), ParseError);
    CHECK_THROWS_AS(parse_formula("x in m", r), Error);  // no m in L_r
    try {
        parse_formula("1 = 0 &", r);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() >= 6);
    }
    Signature wp = signatures::witt_pair(r);
    CHECK_THROWS_AS(parse_formula("E x:W (E y:R (x = y))", wp), Error);  // sort clash
}

TEST_CASE("substitution avoids capture") {
    Signature r = signatures::ring();
    Formula f = parse_formula("E y (x * y = 1)", r);
    Formula g = substitute(f, {{"x", make_var("y", "R")}});
    auto fv = free_vars(g);
    CHECK(fv.size() == 1);
    CHECK(fv.begin()->name == "y");
    auto f4 = build_fq_structure(PrimeConfig::make(2, 2), r);
    CHECK(eval(f4, f_forall(Var{"y", "R"}, f_implies(f_not(f_eq(make_var("y", "R"), make_app("0", "R"))), g))));
    CHECK(quantifier_depth(parse_formula("E x (A y (x = y)) & E z (z = z)", r)) == 2);
}

}  // TEST_SUITE
