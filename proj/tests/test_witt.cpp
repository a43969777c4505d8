#include "doctest.h"

#include "tiltlab/errors.hpp"
#include "tiltlab/witt_poly.hpp"
#include "tiltlab/witt_vec.hpp"

#include <random>

using namespace tiltlab;

namespace {

mpz_class eval_int(const MonomialLayout& L, const IntPoly& f, const std::vector<mpz_class>& vals) {
    mpz_class acc = 0;
    for (const auto& [key, c] : f.terms) {
        mpz_class m = c;
        for (unsigned v = 0; v < L.nvars(); ++v) {
            unsigned e = L.exponent(key, v);
            if (!e) continue;
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), vals.at(v).get_mpz_t(), e);
            m *= pw;
        }
        acc += m;
    }
    return acc;
}

// sum_k p^k a_k^{p^{i-k}}, written out directly
mpz_class ghost_value(std::uint32_t p, const std::vector<mpz_class>& a, unsigned i) {
    mpz_class acc = 0;
    for (unsigned k = 0; k <= i; ++k) {
        mpz_class pk, pw;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
        unsigned long e = 1;
        for (unsigned j = 0; j < i - k; ++j) e *= p;
        mpz_pow_ui(pw.get_mpz_t(), a[k].get_mpz_t(), e);
        acc += pk * pw;
    }
    return acc;
}

PerfElem random_perf(std::mt19937& g, const Config& cfg) {
    std::vector<PerfTerm> terms;
    unsigned k = g() % 3;
    for (unsigned i = 0; i < k; ++i)
        terms.push_back({Exponent(static_cast<std::int64_t>(g() % 9), g() % 2, cfg->p()),
                         FqElem{1 + static_cast<std::uint32_t>(g() % (cfg->q() - 1))}});
    return PerfElem(cfg, terms);
}

WittVec random_witt(std::mt19937& g, const Config& cfg, unsigned n) {
    std::vector<PerfElem> cs;
    for (unsigned i = 0; i < n; ++i) cs.push_back(random_perf(g, cfg));
    return WittVec::from_coords(WittBase::Perfect, cs);
}

}  // namespace

TEST_SUITE("witt") {

TEST_CASE("second sum polynomial for p = 2") {
    auto& cache = WittPolyCache::for_prime(2);
    const auto& L = cache.layout();
    IntPoly expect = poly::sub(poly::add(poly::variable(L, L.x(1)), poly::variable(L, L.y(1))),
                               poly::mul(poly::variable(L, L.x(0)), poly::variable(L, L.y(0)), 100));
    CHECK(cache.sum(1) == expect);
    CHECK(cache.sum(0) == poly::add(poly::variable(L, L.x(0)), poly::variable(L, L.y(0))));
    CHECK(cache.prod(0) == poly::mul(poly::variable(L, L.x(0)), poly::variable(L, L.y(0)), 100));
}

TEST_CASE("universal polynomials satisfy the ghost relations at integer points") {
    std::mt19937 g(21);
    for (std::uint32_t p : {2u, 3u}) {
        auto& cache = WittPolyCache::for_prime(p);
        const unsigned top = p == 2 ? 3 : 2;
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<mpz_class> xs, ys;
            for (unsigned i = 0; i <= top; ++i) {
                xs.emplace_back(static_cast<long>(g() % 11) - 5);
                ys.emplace_back(static_cast<long>(g() % 11) - 5);
            }
            const auto& L = cache.layout();
            std::vector<mpz_class> vals(L.nvars(), 0);
            for (unsigned i = 0; i <= top && i <= L.max_index; ++i) {
                vals[L.x(i)] = xs[i];
                vals[L.y(i)] = ys[i];
            }
            std::vector<mpz_class> s, m, n;
            for (unsigned i = 0; i <= top; ++i) {
                s.push_back(eval_int(cache.layout(), cache.sum(i), vals));
                m.push_back(eval_int(cache.layout(), cache.prod(i), vals));
                n.push_back(eval_int(cache.layout(), cache.neg(i), vals));
            }
            for (unsigned i = 0; i <= top; ++i) {
                CHECK(ghost_value(p, s, i) == ghost_value(p, xs, i) + ghost_value(p, ys, i));
                CHECK(ghost_value(p, m, i) == ghost_value(p, xs, i) * ghost_value(p, ys, i));
                CHECK(ghost_value(p, n, i) == -ghost_value(p, xs, i));
            }
        }
    }
}

TEST_CASE("integers embed as Z/p^n") {
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        const unsigned n = p == 2 ? 4 : 3;
        std::int64_t mod = checked_pow(p, n);
        for (std::int64_t a = 0; a < mod; ++a) {
            WittVec wa = from_integer(cfg, a, n, WittBase::Fq);
            CHECK(wa.is_zero() == (a == 0));
            for (std::int64_t b = 0; b < mod; b += 5) {
                WittVec wb = from_integer(cfg, b, n, WittBase::Fq);
                CHECK(witt_add(wa, wb) == from_integer(cfg, (a + b) % mod, n, WittBase::Fq));
                CHECK(witt_mul(wa, wb) == from_integer(cfg, (a * b) % mod, n, WittBase::Fq));
            }
        }
        CHECK(from_integer(cfg, mod, n, WittBase::Fq).is_zero());
        CHECK(from_integer(cfg, -1, n, WittBase::Fq) == witt_neg(WittVec::one(cfg, n, WittBase::Fq)));
    }
}

TEST_CASE("expansion arithmetic agrees with the universal polynomials") {
    std::mt19937 g(22);
    for (std::uint32_t p : {2u, 3u})
        for (unsigned d : {1u, 2u})
            for (unsigned n : {1u, 2u, 3u}) {
                auto cfg = PrimeConfig::make(p, d);
                for (int i = 0; i < 6; ++i) {
                    WittVec a = random_witt(g, cfg, n), b = random_witt(g, cfg, n);
                    REQUIRE(witt_add(a, b) == witt_add_poly(a, b));
                    REQUIRE(witt_mul(a, b) == witt_mul_poly(a, b));
                    REQUIRE(witt_neg(a) == witt_neg_poly(a));
                }
            }
}

TEST_CASE("Teichmuller, Verschiebung and multiplication by p") {
    std::mt19937 g(23);
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        for (int i = 0; i < 10; ++i) {
            PerfElem x = random_perf(g, cfg), y = random_perf(g, cfg);
            CHECK(teichmuller(x * y, 3) == witt_mul(teichmuller(x, 3), teichmuller(y, 3)));
            WittVec a = random_witt(g, cfg, 3);
            WittVec sum = WittVec::zero(cfg, 3);
            for (std::uint32_t k = 0; k < p; ++k) sum = witt_add(sum, a);
            CHECK(p_times(a) == sum);
            std::vector<PerfElem> fr;
            for (const auto& c : a.coords()) fr.push_back(c.frobenius());
            CHECK(p_times(a) == verschiebung(WittVec::from_coords(WittBase::Perfect, fr)));
            CHECK(teichmuller(x, 3).coord(0) == x);
            CHECK(teichmuller(x, 3).coord(1).is_zero());
        }
    }
}

TEST_CASE("Witt vector text round trip") {
    std::mt19937 g(24);
    auto cfg = PrimeConfig::make(3, 2);
    for (int i = 0; i < 20; ++i) {
        WittVec a = random_witt(g, cfg, 2);
        CHECK(WittVec::parse(cfg, a.to_string()) == a);
    }
    CHECK_THROWS_AS(witt_add(WittVec::zero(cfg, 2), WittVec::zero(cfg, 3)), UsageError);
}

}  // TEST_SUITE
