#include "doctest.h"

#include "tiltlab/errors.hpp"
#include "tiltlab/exponent.hpp"
#include "tiltlab/perf_elem.hpp"
#include "tiltlab/prime_config.hpp"

#include <map>
#include <random>

using namespace tiltlab;

namespace {

// F_q product computed from coordinates: schoolbook convolution, then
// reduction by the monic modulus.
std::vector<std::uint32_t> naive_fq_mul(const PrimeConfig& c, std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
    const std::uint32_t p = c.p();
    const unsigned d = c.d();
    std::vector<std::uint32_t> prod(2 * d, 0);
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    const auto& f = c.modulus();
    for (unsigned k = 2 * d - 1; k >= d; --k) {
        std::uint32_t lead = prod[k];
        if (!lead) continue;
        for (unsigned i = 0; i <= d; ++i) prod[k - d + i] = (prod[k - d + i] + (p - lead) * f[i]) % p;
    }
    prod.resize(d);
    return prod;
}

// Sparse element as rational exponent (over p^16) -> coefficient code.
using Naive = std::map<std::int64_t, std::uint32_t>;
constexpr std::uint32_t kBig = 8;

Naive to_naive(const PerfElem& x) {
    Naive out;
    for (const auto& t : x.terms()) out[t.exp.scaled_numerator(kBig)] = t.coeff.code;
    return out;
}

Naive naive_mul(const Config& cfg, const PerfElem& a, const PerfElem& b) {
    Naive out;
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) {
            std::int64_t e = ta.exp.scaled_numerator(kBig) + tb.exp.scaled_numerator(kBig);
            FqElem cur{out.count(e) ? out[e] : 0};
            FqElem next = cfg->add(cur, cfg->mul(ta.coeff, tb.coeff));
            if (next.is_zero()) out.erase(e);
            else out[e] = next.code;
        }
    return out;
}

PerfElem random_perf(std::mt19937& g, const Config& cfg, unsigned max_terms = 4) {
    std::vector<PerfTerm> terms;
    unsigned k = g() % (max_terms + 1);
    for (unsigned i = 0; i < k; ++i) {
        std::uint32_t lk = g() % 3;
        std::int64_t num = static_cast<std::int64_t>(g() % 20);
        terms.push_back({Exponent(num, lk, cfg->p()), FqElem{1 + static_cast<std::uint32_t>(g() % (cfg->q() - 1))}});
    }
    return PerfElem(cfg, terms);
}

}  // namespace

TEST_SUITE("arith") {

TEST_CASE("finite field products agree with coordinate convolution") {
    for (std::uint32_t p : {2u, 3u, 5u})
        for (unsigned d : {1u, 2u, 3u}) {
            if (p == 5 && d == 3) continue;
            auto cfg = PrimeConfig::make(p, d);
            for (std::uint32_t a = 0; a < cfg->q(); ++a)
                for (std::uint32_t b = 0; b < cfg->q(); ++b) {
                    auto expect = naive_fq_mul(*cfg, cfg->coords({a}), cfg->coords({b}));
                    REQUIRE(cfg->coords(cfg->mul({a}, {b})) == expect);
                }
        }
}

TEST_CASE("finite field inverses, Frobenius and coordinates") {
    for (std::uint32_t p : {2u, 3u})
        for (unsigned d : {1u, 2u, 4u}) {
            auto cfg = PrimeConfig::make(p, d);
            for (std::uint32_t a = 0; a < cfg->q(); ++a) {
                FqElem x{a};
                CHECK(cfg->from_coords(cfg->coords(x)) == x);
                CHECK(cfg->frob_inv(cfg->frob(x)) == x);
                if (a) CHECK(cfg->mul(x, cfg->inv(x)) == cfg->one());
                for (std::uint32_t b = 0; b < cfg->q(); b += 3) {
                    FqElem y{b};
                    CHECK(cfg->frob(cfg->add(x, y)) == cfg->add(cfg->frob(x), cfg->frob(y)));
                }
            }
        }
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(PrimeConfig::make(4), ConfigError);
    CHECK_THROWS_AS(PrimeConfig::make(2, 2, {1, 0, 1}), ConfigError);  // z^2 + 1 = (z+1)^2 over F_2
    CHECK_NOTHROW(PrimeConfig::make(2, 2, {1, 1, 1}));
    CHECK(is_irreducible({1, 0, 1}, 3));   // z^2 + 1 has no root mod 3
    CHECK_FALSE(is_irreducible({1, 0, 1}, 5));  // z^2 + 1 has 2 as a root
}

TEST_CASE("exponents are reduced rationals with p-power denominators") {
    auto e = Exponent::fraction(3, 9, 3);
    CHECK(e.numerator() == 1);
    CHECK(e.log_denominator() == 1);
    CHECK(e.to_string() == "1/3");
    CHECK(Exponent::fraction(1, 3, 3) + Exponent::fraction(2, 3, 3) == Exponent::integer(1, 3));
    CHECK(Exponent::fraction(1, 4, 2) < Exponent::fraction(1, 2, 2));
    CHECK(Exponent::fraction(-1, 2, 2).negative());
    CHECK_THROWS_AS(Exponent::fraction(1, 2, 3), DomainError);
    CHECK(Exponent::integer(2, 2).div_p() == Exponent::integer(1, 2));
}

TEST_CASE("perfect ring products agree with naive convolution") {
    std::mt19937 g(11);
    for (std::uint32_t p : {2u, 3u, 5u})
        for (unsigned d : {1u, 2u}) {
            auto cfg = PrimeConfig::make(p, d);
            for (int i = 0; i < 60; ++i) {
                PerfElem a = random_perf(g, cfg), b = random_perf(g, cfg), c = random_perf(g, cfg);
                REQUIRE(to_naive(a * b) == naive_mul(cfg, a, b));
                CHECK((a + b) * c == a * c + b * c);
                CHECK(a - a == PerfElem::zero(cfg));
                CHECK((a * b).frobenius() == a.frobenius() * b.frobenius());
                CHECK(a.frobenius() == a.pow(p));
                CHECK(a.frobenius().frobenius_inverse() == a);
                if (!a.is_zero() && !b.is_zero()) CHECK(*(a * b).valuation() == *a.valuation() + *b.valuation());
                CHECK(PerfElem::parse(cfg, a.to_string()) == a);
            }
        }
}

TEST_CASE("truncation and monomial splitting") {
    std::mt19937 g(12);
    auto cfg = PrimeConfig::make(3);
    for (int i = 0; i < 50; ++i) {
        PerfElem x = random_perf(g, cfg, 6);
        Exponent gamma = Exponent::integer(2, 3);
        FqElem a{2};
        SplitResult s = split_mod_monomial(x, a, gamma);
        CHECK(s.b + PerfElem::monomial(cfg, a, gamma) * s.s == x);
        CHECK(s.b == x.truncate_below(gamma));
    }
}

TEST_CASE("perfect ring text form") {
    auto cfg = PrimeConfig::make(3);
    CHECK(PerfElem::parse(cfg, "t^(1/3) + 2").to_string() == PerfElem::parse(cfg, "2 + t^(1/3)").to_string());
    CHECK(PerfElem::t_pow(cfg, Exponent::fraction(1, 9, 3)).to_string() == "t^(1/9)");
    CHECK(PerfElem::zero(cfg).to_string() == "0");
    CHECK_THROWS_AS(PerfElem::parse(cfg, "t^(1/2)"), Error);
    CHECK(PerfElem::t(cfg).rescale(Exponent::fraction(1, 3, 3)) == PerfElem::t_pow(cfg, Exponent::fraction(1, 3, 3)));
}

}  // TEST_SUITE
