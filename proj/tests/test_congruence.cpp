#include "doctest.h"

#include "tiltlab/congruence.hpp"
#include "tiltlab/errors.hpp"

#include "json.hpp"

#include <random>

using namespace tiltlab;

namespace {

Exponent one_over(std::uint32_t p) { return Exponent::integer(1, p); }

}  // namespace

TEST_SUITE("congruence") {

TEST_CASE("residue search examples") {
    auto f2 = PrimeConfig::make(2);
    auto sys = PolySystem::parse(f2, {"x^2 - x"}, {"x"});
    SearchResult r = solve_residue(sys, one_over(2));
    REQUIRE(r.status == SearchStatus::Witness);
    CHECK(r.witness.at(0) == PerfElem::one(f2));
    CHECK(verify_residue(sys, one_over(2), r.witness));

    auto f3 = PrimeConfig::make(3);
    auto none = PolySystem::parse(f3, {"x^2 + 1"});
    for (unsigned K : {0u, 1u, 2u}) {
        SearchResult n = solve_residue(none, one_over(3), SearchBounds{K, 0, 3, 200000});
        CHECK(n.status == SearchStatus::CertifiedNo);
        CHECK(n.witness.empty());
    }

    auto empty = PolySystem::parse(f3, {});
    SearchResult e = solve_residue(empty, one_over(3));
    REQUIRE(e.status == SearchStatus::Witness);
    CHECK(e.witness.empty());
}

TEST_CASE("valuation search examples") {
    auto f2 = PrimeConfig::make(2);
    SearchResult a = solve_valuation(PolySystem::parse(f2, {"x^2 - x"}, {"x"}));
    REQUIRE(a.status == SearchStatus::Witness);
    CHECK(a.witness.at(0) == PerfElem::one(f2));

    auto sys = PolySystem::parse(f2, {"x"}, {"1"});
    SearchResult b = solve_valuation(sys);
    REQUIRE(b.status == SearchStatus::Witness);
    CHECK(verify_valuation(sys, b.witness));
    CHECK(verify_valuation(sys, {PerfElem::t(f2)}));
    CHECK_FALSE(verify_valuation(sys, {PerfElem::one(f2)}));

    auto never = PolySystem::parse(f2, {"1"}, {"x + 1"});
    CHECK(solve_valuation(never).status != SearchStatus::Witness);
    CHECK_FALSE(verify_valuation(never, {PerfElem::zero(f2)}));
}

TEST_CASE("transfer between the two sides") {
    auto f2 = PrimeConfig::make(2);
    TransferReport a = transfer_check(PolySystem::parse(f2, {"x^2 - x"}, {"x"}), one_over(2));
    CHECK(a.verdict == "agree");
    CHECK(a.residue_to_valuation_ok);
    CHECK(a.valuation_to_residue_ok);

    auto f3 = PrimeConfig::make(3);
    TransferReport b = transfer_check(PolySystem::parse(f3, {"x^2 - x"}, {"x - 1"}), Exponent::integer(2, 3));
    CHECK(b.verdict == "agree");
    REQUIRE(b.residue.status == SearchStatus::Witness);
    CHECK(b.residue.witness.at(0).is_zero());

    TransferReport c = transfer_check(PolySystem::parse(f3, {}), one_over(3));
    CHECK(c.verdict == "agree");

    CHECK_THROWS_AS(transfer_check(PolySystem::parse(f3, {"x"}), Exponent::integer(5, 3)), Error);
}

TEST_CASE("scale choice puts gamma inside the scaled interval") {
    const std::uint32_t p = 3;
    Exponent g = one_over(p);
    Exponent lo = Exponent::fraction(1, 9, p), hi = Exponent::fraction(2, 9, p);
    Exponent q = choose_scale(g, lo, hi);
    CHECK(q * lo < g);
    CHECK(g < q * hi);
    Exponent open = choose_scale(g, Exponent::integer(0, p), std::nullopt);
    CHECK(open.positive());
}

TEST_CASE("larger bounds never lose a witness") {
    std::mt19937 rng(51);
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        for (int i = 0; i < 12; ++i) {
            std::string f = "x^" + std::to_string(1 + rng() % 3) + " + " + std::to_string(rng() % p) + "*x*y + " +
                            std::to_string(rng() % p);
            std::string g = "y + " + std::to_string(rng() % p);
            auto sys = PolySystem::parse(cfg, {f}, {g});
            CAPTURE(sys.to_string());
            SearchResult small = solve_residue(sys, one_over(p), SearchBounds{1, 0, 2, 200000});
            SearchResult big = solve_residue(sys, one_over(p), SearchBounds{2, 0, 3, 200000});
            if (small.status == SearchStatus::Witness) CHECK(big.status == SearchStatus::Witness);
            if (big.status == SearchStatus::Witness) CHECK(verify_residue(sys, one_over(p), big.witness));
            if (small.status == SearchStatus::CertifiedNo) CHECK(big.status == SearchStatus::CertifiedNo);
            SearchResult vs = solve_valuation(sys, SearchBounds{1, 0, 2, 200000});
            SearchResult vb = solve_valuation(sys, SearchBounds{2, 0, 3, 200000});
            if (vs.status == SearchStatus::Witness) CHECK(vb.status == SearchStatus::Witness);
        }
    }
}

TEST_CASE("solutions modulo t^(p^N) through Frobenius") {
    for (std::uint32_t p : {2u, 3u}) {
        auto cfg = PrimeConfig::make(p);
        auto root = PolySystem::parse(cfg, {"X^" + std::to_string(p) + " - T"});
        SearchResult r = solve_mod_tN(root, 1);
        REQUIRE(r.status == SearchStatus::Witness);
        CHECK(verify_mod_tN(root, 1, r.witness));
        CHECK(verify_mod_tN(root, 1, {PerfElem::t(cfg).rescale(Exponent::fraction(1, p, p))}));
        CHECK_FALSE(verify_mod_tN(root, 1, {PerfElem::zero(cfg)}));

        auto lin = PolySystem::parse(cfg, {"X - T"});
        for (unsigned N = 0; N <= 2; ++N) {
            SearchResult s = solve_mod_tN(lin, N);
            REQUIRE(s.status == SearchStatus::Witness);
            CHECK(verify_mod_tN(lin, N, s.witness));
            CHECK(verify_mod_tN(lin, N, {PerfElem::t(cfg)}));
        }
    }
}

TEST_CASE("forall-exists sentence for a system with T") {
    auto cfg = PrimeConfig::make(3);
    Formula f = lift_to_forall_exists(PolySystem::parse(cfg, {"X - T"}));
    CHECK(to_string(f) == "A y (y in m -> E X (X + (1 + 1) * y = 0))");
    CHECK(classify(f) == ComplexityClass::Full);
}

TEST_CASE("system parsing") {
    auto cfg = PrimeConfig::make(3);
    auto sys = PolySystem::parse(cfg, {"x*y - T", "(x + 1)^2"}, {"y"});
    CHECK(sys.variables() == std::vector<std::string>{"x", "y"});
    CHECK(sys.uses_t());
    CHECK(sys.equations().size() == 2);
    CHECK(sys.inequations().size() == 1);
    CHECK(PolySystem::parse(cfg, {"x - x"}).equations().at(0).is_zero());
    CHECK_THROWS_AS(PolySystem::parse(cfg, {"x +"}), ParseError);
    CHECK_THROWS_AS(PolySystem::parse(cfg, {"x ^ y"}), Error);
}

TEST_CASE("JSON report fields") {
    auto cfg = PrimeConfig::make(2);
    auto sys = PolySystem::parse(cfg, {"x^2 - x"}, {"x"});
    SearchBounds b;
    auto j = nlohmann::json::parse(solve_residue(sys, one_over(2), b).to_json(sys, b));
    CHECK(j.at("status") == "witness");
    CHECK(j.at("bounds").at("K") == b.K);
    CHECK(j.at("bounds").at("S") == b.S);
    CHECK(j.at("bounds").at("max_candidates") == b.max_candidates);
    CHECK(j.at("checked_count").get<std::uint64_t>() > 0);
    CHECK(j.contains("witness"));
    CHECK(to_string(SearchStatus::NoWitnessWithinBounds) == "no-witness-within-bounds");
    CHECK(to_string(SearchStatus::CertifiedNo) == "certified-no");
    CHECK(to_string(SearchStatus::CandidateBudget) == "candidate-budget-exhausted");
}

TEST_CASE("fixed transfer corpus") {
    auto corpus = transfer_corpus();
    CHECK(corpus.size() == 32);
    CHECK(corpus[30].name == "idempotent-p2");
    CHECK(corpus[31].name == "idempotent-p3-gamma2");
    // deterministic across calls
    auto again = transfer_corpus();
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(corpus[i].equations == again[i].equations);
}

}  // TEST_SUITE
