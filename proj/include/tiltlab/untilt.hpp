#pragma once

#include "tiltlab/witt_vec.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace tiltlab {

class UntiltSpec;
using Untilt = std::shared_ptr<const UntiltSpec>;

// A rule producing xi mod p^n for every n. Built-ins:
//   p-power-roots  [t] - p
//   cyclotomic     sum_{i<p} [t+1]^i over F_p
//   abelian        the same sum over F_{p^d}
// and custom generators given by explicit Witt coordinates.
class UntiltSpec {
public:
    using Generator = std::function<WittVec(unsigned n)>;

    static Untilt p_power_roots(const Config& cfg);
    static Untilt cyclotomic(const Config& cfg);
    static Untilt abelian(const Config& cfg);
    static Untilt custom(const Config& cfg, std::vector<PerfElem> coords, std::string name = "custom");
    // name is one of the built-ins; custom needs explicit coordinates
    static Untilt by_name(const std::string& name, const Config& cfg);

    UntiltSpec(std::string name, Config cfg, Generator gen, unsigned max_level);

    const std::string& name() const { return name_; }
    const Config& config() const { return cfg_; }
    unsigned max_level() const { return max_level_; }

    WittVec xi(unsigned n) const;

    // c_0 = a t^gamma; throws DomainError when c_0 is not of that shape
    FqElem leading_unit() const;
    Exponent gamma() const;
    bool has_monomial_c0() const;

private:
    std::string name_;
    Config cfg_;
    Generator gen_;
    unsigned max_level_;
    mutable std::mutex mu_;
    mutable std::map<unsigned, WittVec> cache_;
};

// Canonical representative of an element of W_n(O_F)/(xi) = O_K/(p^n):
// n digits, each in O_F/(c_0) with every exponent below gamma.
class Digits {
public:
    Digits(Untilt u, std::vector<PerfElem> digits);

    static Digits zero(const Untilt& u, unsigned n);
    static Digits one(const Untilt& u, unsigned n);

    const Untilt& untilt() const { return u_; }
    unsigned level() const { return static_cast<unsigned>(b_.size()); }
    const std::vector<PerfElem>& digits() const { return b_; }
    bool is_zero() const;

    std::string to_string() const;  // "⟨b0 | b1⟩ @ name, n=2"

    friend bool operator==(const Digits& a, const Digits& b);

private:
    Untilt u_;
    std::vector<PerfElem> b_;
};

struct Reduction {
    Digits digits;
    WittVec cofactor;  // x = lift(digits) + xi * cofactor
};

bool is_distinguished(const WittVec& xi);

struct WittResidue {
    WittVec value;  // over F_q
    bool unit_multiple_of_p = false;
};
WittResidue witt_res_check(const WittVec& xi);
// "p", "-p", an integer, or the coordinate vector
std::string describe_residue(const WittVec& value);

Reduction reduce_with_cofactor(const WittVec& x, const Untilt& u);
Digits reduce(const WittVec& x, const Untilt& u);
WittVec lift(const Digits& d);
Digits sharp(const PerfElem& x, const Untilt& u, unsigned n);
Digits digits_from_integer(std::int64_t m, const Untilt& u, unsigned n);

Digits digit_add(const Digits& a, const Digits& b);
Digits digit_sub(const Digits& a, const Digits& b);
Digits digit_mul(const Digits& a, const Digits& b);
Digits digit_neg(const Digits& a);
Digits digit_inv(const Digits& a);
Digits digit_pow(const Digits& a, std::uint64_t e);

std::optional<Exponent> valuation_of_digits(const Digits& x);
bool in_maximal_ideal(const Digits& x);

struct Distance {
    bool lower_bound_only = false;  // all digits vanished at this precision
    Exponent value;                 // v_y(theta_y(xi_x)), or n*gamma_y as a bound
    double distance = 0;            // -log_p(value) with w(t) = 1
    std::string to_string() const;
};
Distance distance(const Untilt& x, const Untilt& y, unsigned n);

}  // namespace tiltlab
