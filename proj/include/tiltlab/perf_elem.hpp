#pragma once

#include "tiltlab/exponent.hpp"
#include "tiltlab/prime_config.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tiltlab {

struct PerfTerm {
    Exponent exp;
    FqElem coeff;

    friend bool operator==(const PerfTerm&, const PerfTerm&) = default;
};

// A finitely supported element of F_q[t^{1/p^inf}] (negative exponents are
// tolerated, giving the Laurent-type elements used as witnesses outside O).
// Terms are kept sorted by exponent with no zero coefficients.
class PerfElem {
public:
    PerfElem() = default;
    explicit PerfElem(Config cfg) : cfg_(std::move(cfg)) {}
    PerfElem(Config cfg, std::vector<PerfTerm> terms);  // canonicalizes

    static PerfElem zero(const Config& cfg) { return PerfElem(cfg); }
    static PerfElem one(const Config& cfg) { return constant(cfg, cfg->one()); }
    static PerfElem constant(const Config& cfg, FqElem c);
    static PerfElem from_int(const Config& cfg, std::int64_t v) { return constant(cfg, cfg->from_int(v)); }
    static PerfElem monomial(const Config& cfg, FqElem c, const Exponent& e);
    static PerfElem t_pow(const Config& cfg, const Exponent& e) { return monomial(cfg, cfg->one(), e); }
    static PerfElem t(const Config& cfg) { return t_pow(cfg, Exponent::integer(1, cfg->p())); }
    static PerfElem parse(const Config& cfg, std::string_view text);

    const Config& config() const { return cfg_; }
    const std::vector<PerfTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.is_zero()); }
    bool is_monomial() const { return terms_.size() == 1; }
    FqElem coefficient(const Exponent& e) const;

    PerfElem operator-() const;
    friend PerfElem operator+(const PerfElem& a, const PerfElem& b);
    friend PerfElem operator-(const PerfElem& a, const PerfElem& b);
    friend PerfElem operator*(const PerfElem& a, const PerfElem& b);
    PerfElem pow(std::uint64_t m) const;
    PerfElem scale(FqElem c) const;
    PerfElem shift(const Exponent& e) const;  // multiply by t^e

    PerfElem frobenius() const;
    PerfElem frobenius_inverse() const;
    PerfElem frobenius_pow(int k) const;  // negative k applies the inverse

    std::optional<Exponent> valuation() const;
    FqElem residue() const { return coefficient(Exponent()); }
    bool is_unit() const { return !residue().is_zero(); }
    PerfElem truncate_below(const Exponent& gamma) const;  // terms with exponent < gamma
    PerfElem rescale(const Exponent& q) const;

    friend bool operator==(const PerfElem& a, const PerfElem& b);

    std::string to_string() const;

private:
    Config cfg_;
    std::vector<PerfTerm> terms_;
};

// x = b + a t^gamma s with every exponent of b below gamma
struct SplitResult {
    PerfElem b;
    PerfElem s;
};
SplitResult split_mod_monomial(const PerfElem& x, FqElem a, const Exponent& gamma);

// Free functions mirroring the operation names used in the docs.
inline PerfElem add(const PerfElem& a, const PerfElem& b) { return a + b; }
inline PerfElem mul(const PerfElem& a, const PerfElem& b) { return a * b; }
inline PerfElem neg(const PerfElem& a) { return -a; }
inline PerfElem pow(const PerfElem& a, std::uint64_t m) { return a.pow(m); }
inline std::optional<Exponent> valuation(const PerfElem& a) { return a.valuation(); }

std::string exponent_suffix(const Exponent& e);  // "t", "t^3", "t^(1/9)"

}  // namespace tiltlab
