#include "doctest.h"

#include "tiltlab/errors.hpp"
#include "tiltlab/untilt.hpp"

#include <cmath>
#include <random>

using namespace tiltlab;

namespace {

PerfElem random_perf(std::mt19937& g, const Config& cfg) {
    std::vector<PerfTerm> terms;
    unsigned k = g() % 4;
    for (unsigned i = 0; i < k; ++i)
        terms.push_back({Exponent(static_cast<std::int64_t>(g() % 7), g() % 2, cfg->p()),
                         FqElem{1 + static_cast<std::uint32_t>(g() % (cfg->q() - 1))}});
    return PerfElem(cfg, terms);
}

WittVec random_witt(std::mt19937& g, const Config& cfg, unsigned n) {
    std::vector<PerfElem> cs;
    for (unsigned i = 0; i < n; ++i) cs.push_back(random_perf(g, cfg));
    return WittVec::from_coords(WittBase::Perfect, cs);
}

std::vector<Untilt> builtins() {
    return {UntiltSpec::p_power_roots(PrimeConfig::make(2)), UntiltSpec::p_power_roots(PrimeConfig::make(3)),
            UntiltSpec::cyclotomic(PrimeConfig::make(2)), UntiltSpec::cyclotomic(PrimeConfig::make(3)),
            UntiltSpec::abelian(PrimeConfig::make(3, 2))};
}

}  // namespace

TEST_SUITE("untilt") {

TEST_CASE("t sharp is p for the p-power-roots untilt") {
    for (std::uint32_t p : {2u, 3u}) {
        auto u = UntiltSpec::p_power_roots(PrimeConfig::make(p));
        for (unsigned n = 1; n <= 4; ++n)
            CHECK(sharp(PerfElem::t(u->config()), u, n) == digits_from_integer(p, u, n));
    }
}

TEST_CASE("(t+1) sharp is a primitive p-th root of unity for the cyclotomic untilt") {
    auto cfg = PrimeConfig::make(3);
    auto u = UntiltSpec::cyclotomic(cfg);
    for (unsigned n = 1; n <= 3; ++n) {
        Digits z = sharp(PerfElem::t(cfg) + PerfElem::one(cfg), u, n);
        Digits s = digit_add(digit_add(Digits::one(u, n), z), digit_mul(z, z));
        CHECK(s.is_zero());
        CHECK(digit_pow(z, 3) == Digits::one(u, n));
    }
    CHECK(u->gamma() == Exponent::integer(2, 3));
}

TEST_CASE("built-in generators are distinguished") {
    for (const auto& u : builtins())
        for (unsigned n = 2; n <= 3; ++n) {
            CHECK(is_distinguished(u->xi(n)));
            CHECK(witt_res_check(u->xi(n)).unit_multiple_of_p);
        }
}

TEST_CASE("custom generators") {
    auto cfg = PrimeConfig::make(2);
    PerfElem t = PerfElem::t(cfg), one = PerfElem::one(cfg);
    auto good = UntiltSpec::custom(cfg, {t, one});
    CHECK(is_distinguished(good->xi(2)));
    CHECK(sharp(t, good, 2).level() == 2);
    CHECK_FALSE(is_distinguished(WittVec::from_coords(WittBase::Perfect, {t, t})));
    CHECK_FALSE(is_distinguished(WittVec::from_coords(WittBase::Perfect, {one, one})));
    CHECK_THROWS_AS(is_distinguished(WittVec::from_coords(WittBase::Perfect, {t})), UsageError);
}

TEST_CASE("reduction is a ring map that kills xi") {
    std::mt19937 g(31);
    for (const auto& u : builtins())
        for (unsigned n = 1; n <= 3; ++n)
            for (int i = 0; i < 6; ++i) {
                const auto& cfg = u->config();
                WittVec a = random_witt(g, cfg, n), b = random_witt(g, cfg, n), e = random_witt(g, cfg, n);
                Digits ra = reduce(a, u), rb = reduce(b, u);
                CHECK(reduce(witt_add(a, witt_mul(u->xi(n), e)), u) == ra);
                CHECK(reduce(witt_add(a, b), u) == digit_add(ra, rb));
                CHECK(reduce(witt_mul(a, b), u) == digit_mul(ra, rb));
                CHECK(reduce(lift(ra), u) == ra);
                Reduction r = reduce_with_cofactor(a, u);
                CHECK(witt_add(lift(r.digits), witt_mul(u->xi(n), r.cofactor)) == a);
                for (const auto& dgt : ra.digits())
                    for (const auto& term : dgt.terms()) {
                        CHECK_FALSE(term.exp.negative());
                        CHECK(term.exp < u->gamma());
                    }
            }
}

TEST_CASE("integers in the residue ring") {
    for (const auto& u : builtins()) {
        const unsigned n = 3;
        for (std::int64_t a = -5; a <= 10; ++a)
            for (std::int64_t b = -3; b <= 4; ++b) {
                CHECK(digit_add(digits_from_integer(a, u, n), digits_from_integer(b, u, n)) ==
                      digits_from_integer(a + b, u, n));
                CHECK(digit_mul(digits_from_integer(a, u, n), digits_from_integer(b, u, n)) ==
                      digits_from_integer(a * b, u, n));
            }
        std::int64_t pn = checked_pow(u->config()->p(), n);
        CHECK(digits_from_integer(pn, u, n).is_zero());
        CHECK_FALSE(digits_from_integer(pn / u->config()->p(), u, n).is_zero());
    }
}

TEST_CASE("units, inverses and the maximal ideal") {
    auto cfg = PrimeConfig::make(3);
    auto u = UntiltSpec::p_power_roots(cfg);
    PerfElem t = PerfElem::t(cfg);
    Digits unit = sharp(PerfElem::one(cfg) + t.rescale(Exponent::fraction(1, 3, 3)), u, 2);
    CHECK(digit_mul(unit, digit_inv(unit)) == Digits::one(u, 2));
    CHECK_FALSE(in_maximal_ideal(unit));
    Digits pi = sharp(t.rescale(Exponent::fraction(1, 9, 3)), u, 2);
    CHECK(in_maximal_ideal(pi));
    CHECK_THROWS_AS(digit_inv(pi), DomainError);
    CHECK(*valuation_of_digits(pi) == Exponent::fraction(1, 9, 3));
    CHECK_FALSE(valuation_of_digits(Digits::zero(u, 2)).has_value());
}

TEST_CASE("distance between untilts") {
    auto cfg = PrimeConfig::make(3);
    auto a = UntiltSpec::p_power_roots(cfg), b = UntiltSpec::cyclotomic(cfg);
    Distance self = distance(a, a, 2);
    CHECK(self.lower_bound_only);
    Distance ab = distance(a, b, 2);
    CHECK_FALSE(ab.lower_bound_only);
    CHECK(ab.value.positive());
    CHECK(self.value == Exponent::integer(2, 3));  // n * gamma
    CHECK_FALSE(std::signbit(distance(a, a, 1).distance));  // -log 1 prints as 0
}

}  // TEST_SUITE
