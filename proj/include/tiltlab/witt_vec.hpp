#pragma once

#include "tiltlab/perf_elem.hpp"

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tiltlab {

// W_L(F_q) realized as (Z/p^L)[z]/(f~) where f~ is the integer lift of the
// field modulus. Elements are coefficient arrays in 0..p^L-1.
class WittScalars {
public:
    using Elem = std::array<std::uint64_t, PrimeConfig::kMaxDegree>;

    static std::shared_ptr<const WittScalars> get(const Config& cfg, unsigned level);

    WittScalars(Config cfg, unsigned level);

    unsigned level() const { return level_; }
    std::uint64_t modulus() const { return mod_; }
    const Config& config() const { return cfg_; }

    Elem zero() const { return {}; }
    Elem from_int(std::int64_t v) const;
    Elem lift(FqElem c) const;           // coordinates read as integers
    FqElem reduce(const Elem& a) const;  // mod p
    Elem teich(FqElem c) const;
    bool is_zero(const Elem& a) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem mul_int(const Elem& a, std::uint64_t m) const;
    Elem pow(Elem a, std::uint64_t e) const;

private:
    std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod_);
    }

    Config cfg_;
    unsigned level_;
    unsigned d_;
    std::uint64_t mod_;
    std::vector<Elem> teich_table_;
};

struct LiftedTerm {
    Exponent exp;
    WittScalars::Elem coeff;
};

// An element of W_L(F_q[t^{1/p^inf}]) = W_L(F_q)[t^{1/p^inf}], written as a
// finite sum of c * t^e with c in W_L(F_q). This is the strict p-ring form in
// which sum p^i [x_i^{1/p^i}] is an ordinary polynomial; the Witt coordinates
// are recovered from it exactly.
class Expansion {
public:
    Expansion() = default;
    explicit Expansion(std::shared_ptr<const WittScalars> ring) : ring_(std::move(ring)) {}
    Expansion(std::shared_ptr<const WittScalars> ring, std::vector<LiftedTerm> terms);

    const WittScalars& ring() const { return *ring_; }
    const std::shared_ptr<const WittScalars>& ring_ptr() const { return ring_; }
    unsigned level() const { return ring_->level(); }
    const std::vector<LiftedTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend Expansion operator+(const Expansion& a, const Expansion& b);
    friend Expansion operator-(const Expansion& a, const Expansion& b);
    friend Expansion operator*(const Expansion& a, const Expansion& b);
    Expansion operator-() const;
    Expansion pow(std::uint64_t e) const;
    Expansion mul_int(std::int64_t m) const;

    PerfElem mod_p() const;
    // Reinterpret at a lower level (reduction mod p^m).
    Expansion truncate(unsigned m) const;
    // Multiply by p^k and view at level `level` (requires level - k <= own level).
    Expansion scaled_up(unsigned k, unsigned level) const;
    // Exact division by p; every coefficient must be divisible by p.
    Expansion divide_by_p() const;

    friend bool operator==(const Expansion& a, const Expansion& b);

private:
    std::shared_ptr<const WittScalars> ring_;
    std::vector<LiftedTerm> terms_;
};

Expansion lift_perf(const PerfElem& x, unsigned level);  // coefficientwise integer lift
Expansion teichmuller_expansion(const PerfElem& x, unsigned level);

enum class WittBase { Perfect, Fq };

// A Witt vector of length n over F_q[t^{1/p^inf}] or over F_q. Immutable.
class WittVec {
public:
    WittVec() = default;
    WittVec(WittBase base, Expansion e);

    static WittVec zero(const Config& cfg, unsigned n, WittBase base = WittBase::Perfect);
    static WittVec one(const Config& cfg, unsigned n, WittBase base = WittBase::Perfect);
    static WittVec from_coords(WittBase base, const std::vector<PerfElem>& coords);
    static WittVec parse(const Config& cfg, std::string_view text, WittBase base = WittBase::Perfect);

    const Config& config() const { return exp_.ring().config(); }
    unsigned level() const { return exp_.level(); }
    WittBase base() const { return base_; }
    const Expansion& expansion() const { return exp_; }

    std::vector<PerfElem> coords() const;
    PerfElem coord(unsigned i) const;
    bool is_zero() const { return exp_.is_zero(); }

    std::string to_string() const;

    friend bool operator==(const WittVec& a, const WittVec& b);

private:
    WittBase base_ = WittBase::Perfect;
    Expansion exp_;
};

WittVec witt_add(const WittVec& a, const WittVec& b);
WittVec witt_sub(const WittVec& a, const WittVec& b);
WittVec witt_mul(const WittVec& a, const WittVec& b);
WittVec witt_neg(const WittVec& a);
WittVec witt_pow(const WittVec& a, std::uint64_t e);

WittVec teichmuller(const PerfElem& x, unsigned n, WittBase base = WittBase::Perfect);
WittVec verschiebung(const WittVec& a);
WittVec p_times(const WittVec& a);
WittVec divide_by_p(const WittVec& a);
WittVec truncate(const WittVec& a, unsigned m);
WittVec from_integer(const Config& cfg, std::int64_t m, unsigned n, WittBase base = WittBase::Perfect);

// The same operations computed the textbook way: coordinatewise evaluation of
// the cached universal polynomials S_i, P_i, I_i.
WittVec witt_add_poly(const WittVec& a, const WittVec& b);
WittVec witt_mul_poly(const WittVec& a, const WittVec& b);
WittVec witt_neg_poly(const WittVec& a);

}  // namespace tiltlab
