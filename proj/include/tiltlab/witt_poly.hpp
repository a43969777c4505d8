#pragma once

#include "tiltlab/perf_elem.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace tiltlab {

// Monomials in x_0..x_N, y_0..y_N packed into 128 bits: variable v owns the
// bit field [v*width, (v+1)*width). The width leaves one guard bit above p^N.
struct MonomialLayout {
    std::uint32_t p = 0;
    unsigned max_index = 0;  // N
    unsigned width = 0;

    unsigned nvars() const { return 2 * (max_index + 1); }
    unsigned x(unsigned i) const { return i; }
    unsigned y(unsigned i) const { return max_index + 1 + i; }
    unsigned exponent(unsigned __int128 key, unsigned var) const;
    unsigned __int128 unit(unsigned var) const { return static_cast<unsigned __int128>(1) << (var * width); }
    std::string var_name(unsigned var) const;

    static MonomialLayout for_prime(std::uint32_t p);
};

// Exact integer polynomial, terms sorted by packed key, no zero coefficients.
struct IntPoly {
    using Key = unsigned __int128;
    std::vector<std::pair<Key, mpz_class>> terms;

    bool is_zero() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }
    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.terms == b.terms; }
};

namespace poly {
IntPoly variable(const MonomialLayout& L, unsigned var);
IntPoly constant(long v);
IntPoly add(const IntPoly& a, const IntPoly& b);
IntPoly sub(const IntPoly& a, const IntPoly& b);
IntPoly scale(const IntPoly& a, const mpz_class& c);
// throws BudgetExceeded once the product would hold more than `budget` terms
IntPoly mul(const IntPoly& a, const IntPoly& b, std::size_t budget);
IntPoly pow(const IntPoly& a, std::uint64_t e, std::size_t budget);
// divides every coefficient by d; false if some division is inexact
bool exact_div(IntPoly& a, const mpz_class& d);
std::string to_string(const MonomialLayout& L, const IntPoly& a);
}  // namespace poly

enum class WittKind { Sum, Product, Negation };

// Lazily extended cache of the universal polynomials S_i, P_i, I_i for one
// prime. All access is serialized by an internal mutex; returned references
// stay valid for the lifetime of the cache.
class WittPolyCache {
public:
    static WittPolyCache& for_prime(std::uint32_t p);

    explicit WittPolyCache(std::uint32_t p);

    std::uint32_t p() const { return layout_.p; }
    const MonomialLayout& layout() const { return layout_; }
    unsigned max_index() const { return layout_.max_index; }

    const IntPoly& sum(unsigned i) { return get(WittKind::Sum, i); }
    const IntPoly& prod(unsigned i) { return get(WittKind::Product, i); }
    const IntPoly& neg(unsigned i) { return get(WittKind::Negation, i); }
    const IntPoly& get(WittKind kind, unsigned i);

    // W_k in the x variables (or the y variables)
    IntPoly ghost(unsigned k, bool in_y = false) const;

    std::size_t term_budget() const { return budget_; }
    void set_term_budget(std::size_t b) { budget_ = b; }

private:
    struct Family {
        std::deque<IntPoly> polys;
        std::deque<std::deque<IntPoly>> powers;  // powers[k][j] = T_k^{p^j}
    };
    void extend(WittKind kind, Family& fam);
    const IntPoly& power(Family& fam, unsigned k, unsigned j);

    MonomialLayout layout_;
    std::size_t budget_ = 3000000;
    std::mutex mu_;
    Family fams_[3];
};

inline const IntPoly& witt_sum_poly(std::uint32_t p, unsigned i) { return WittPolyCache::for_prime(p).sum(i); }
inline const IntPoly& witt_prod_poly(std::uint32_t p, unsigned i) { return WittPolyCache::for_prime(p).prod(i); }
inline const IntPoly& witt_neg_poly(std::uint32_t p, unsigned i) { return WittPolyCache::for_prime(p).neg(i); }
inline IntPoly ghost_poly(std::uint32_t p, unsigned k) { return WittPolyCache::for_prime(p).ghost(k); }

// Evaluate an integer polynomial at base-ring points, coefficients read mod p.
// xs and ys hold the values for x_0.. and y_0..; missing variables must not occur.
PerfElem evaluate(const MonomialLayout& L, const IntPoly& f, const std::vector<PerfElem>& xs,
                  const std::vector<PerfElem>& ys, const Config& cfg);

}  // namespace tiltlab
