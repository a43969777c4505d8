#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tiltlab {

// An element of F_q stored as the integer sum c_i p^i of its coordinates
// with respect to the basis 1, z, ..., z^{d-1}.
struct FqElem {
    std::uint32_t code = 0;

    bool is_zero() const { return code == 0; }
    friend bool operator==(FqElem a, FqElem b) { return a.code == b.code; }
    friend auto operator<=>(FqElem a, FqElem b) { return a.code <=> b.code; }
};

class PrimeConfig;
using Config = std::shared_ptr<const PrimeConfig>;

class PrimeConfig {
public:
    static constexpr unsigned kMaxDegree = 8;

    // modulus lists coefficients from z^0 up to the leading 1; empty picks
    // the lexicographically smallest monic irreducible of degree d.
    static Config make(std::uint32_t p, unsigned d = 1, std::vector<std::uint32_t> modulus = {});

    std::uint32_t p() const { return p_; }
    unsigned d() const { return d_; }
    std::uint32_t q() const { return q_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    FqElem zero() const { return {}; }
    FqElem one() const { return {1}; }
    FqElem from_int(std::int64_t v) const;
    FqElem generator() const;  // the class of z
    FqElem from_coords(const std::vector<std::uint32_t>& c) const;
    std::vector<std::uint32_t> coords(FqElem a) const;

    FqElem add(FqElem a, FqElem b) const;
    FqElem sub(FqElem a, FqElem b) const;
    FqElem neg(FqElem a) const;
    FqElem mul(FqElem a, FqElem b) const;
    FqElem inv(FqElem a) const;
    FqElem pow(FqElem a, std::uint64_t e) const;
    FqElem frob(FqElem a) const { return pow(a, p_); }
    FqElem frob_inv(FqElem a) const;

    // "z^2+2*z+1", "0", "2"
    std::string format(FqElem a) const;
    bool is_polynomial_term(FqElem a) const;  // more than one nonzero coordinate

    bool same_field(const PrimeConfig& o) const;
    std::string describe() const;

    PrimeConfig(std::uint32_t p, unsigned d, std::vector<std::uint32_t> modulus);

private:
    FqElem mul_slow(FqElem a, FqElem b) const;

    std::uint32_t p_;
    unsigned d_;
    std::uint32_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> add_table_, mul_table_, inv_table_, frob_inv_table_;
};

bool is_prime(std::uint64_t n);
bool is_irreducible(const std::vector<std::uint32_t>& f, std::uint32_t p);

// Throws ConfigError unless both configs describe the same field.
void require_same(const Config& a, const Config& b);

}  // namespace tiltlab
