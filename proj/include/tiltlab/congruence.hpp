#pragma once

#include "tiltlab/formula.hpp"
#include "tiltlab/perf_elem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tiltlab {

// Polynomial over F_p in the system's variables, plus optionally T (last slot).
struct Poly {
    std::vector<std::pair<std::vector<std::uint32_t>, std::uint32_t>> terms;  // exponents, coefficient mod p
    bool is_zero() const { return terms.empty(); }
};

class PolySystem {
public:
    // Variables are collected in order of first appearance; "T" is the
    // constant t and never a variable.
    static PolySystem parse(const Config& cfg, const std::vector<std::string>& equations,
                            const std::vector<std::string>& inequations = {});

    const Config& config() const { return cfg_; }
    const std::vector<std::string>& variables() const { return vars_; }
    bool uses_t() const { return uses_t_; }
    const std::vector<Poly>& equations() const { return eqs_; }
    const std::vector<Poly>& inequations() const { return neqs_; }

    // T evaluates to `t_value`; with `gamma`, every product is cut below t^gamma.
    PerfElem evaluate(const Poly& f, const std::vector<PerfElem>& xs, const PerfElem& t_value,
                      const std::optional<Exponent>& gamma = std::nullopt) const;
    std::string to_string(const Poly& f) const;
    std::string to_string() const;  // "f1 = 0, ..., g1 != 0, ..."

    // Same equations with T replaced by t^{1/p^N} (kept symbolic: evaluation substitutes).
    Term to_term(const Poly& f, const std::vector<Term>& xs, const Term& t) const;

private:
    Config cfg_;
    std::vector<std::string> vars_;
    bool uses_t_ = false;
    std::vector<Poly> eqs_, neqs_;
    std::vector<std::string> eq_text_, neq_text_;
};

struct SearchBounds {
    unsigned K = 2;                        // exponents in (1/p^K) Z
    std::int64_t D = 0;                    // numerator cap j <= D; 0 picks gamma * p^K
    unsigned S = 4;                        // total number of terms over all variables
    std::uint64_t max_candidates = 200000;  // hard stop for one search
};

enum class SearchStatus { Witness, NoWitnessWithinBounds, CertifiedNo, CandidateBudget };
std::string to_string(SearchStatus s);

struct SearchResult {
    SearchStatus status = SearchStatus::NoWitnessWithinBounds;
    std::vector<PerfElem> witness;
    std::uint64_t checked_count = 0;
    std::string note;
    std::string to_json(const PolySystem& sys, const SearchBounds& b) const;
};

// F_p[t^{1/p^inf}]/(t^gamma): f_i(x) = 0 and g_j(x) != 0.
SearchResult solve_residue(const PolySystem& sys, const Exponent& gamma, const SearchBounds& b = {});
// F_p[[t]]^{1/p^inf}: v(f_i(x)) > v(g_j(x)) for all i, j. Exponents range over [0, D/p^K].
SearchResult solve_valuation(const PolySystem& sys, const SearchBounds& b = {}, const Exponent* gamma = nullptr);

bool verify_residue(const PolySystem& sys, const Exponent& gamma, const std::vector<PerfElem>& xs);
bool verify_valuation(const PolySystem& sys, const std::vector<PerfElem>& xs);

// Smallest-denominator q in Z[1/p], q > 0, with gamma in q * (lo, hi); hi absent means infinity.
Exponent choose_scale(const Exponent& gamma, const std::optional<Exponent>& lo, const std::optional<Exponent>& hi);

struct TransferReport {
    SearchResult residue, valuation;
    std::optional<std::vector<PerfElem>> residue_to_valuation;  // lifted witness
    bool residue_to_valuation_ok = false;
    std::optional<std::vector<PerfElem>> valuation_to_residue;  // rescaled and cut witness
    std::optional<Exponent> scale;
    bool valuation_to_residue_ok = false;
    std::string verdict;  // "agree", "disagree" or "inconclusive"
    std::string to_json(const PolySystem& sys, const Exponent& gamma, const SearchBounds& b) const;
};

TransferReport transfer_check(const PolySystem& sys, const Exponent& gamma, const SearchBounds& b = {});

// f_i(x, t^{1/p^N}) = 0 mod t, mapped back by the N-th Frobenius to a solution
// of f_i(x, t) = 0 mod t^{p^N}. The bound K applies to the mapped-back solution.
SearchResult solve_mod_tN(const PolySystem& sys, unsigned N, const SearchBounds& b = {});
bool verify_mod_tN(const PolySystem& sys, unsigned N, const std::vector<PerfElem>& xs);

// A y (y in m -> E x1 ... (f_1(x, y) = 0 & ...)) over L_lcr.
Formula lift_to_forall_exists(const PolySystem& sys);

struct TransferInstance {
    std::string name;
    std::uint32_t p;
    Exponent gamma;
    std::vector<std::string> equations, inequations;
};
// 30 seeded random instances followed by the two hand examples.
std::vector<TransferInstance> transfer_corpus();

}  // namespace tiltlab
