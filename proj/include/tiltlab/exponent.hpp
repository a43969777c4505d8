#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace tiltlab {

// A rational number num / p^k in lowest terms. Negative numerators are
// allowed so that t^{-1} can serve as a witness for non-membership in O.
class Exponent {
public:
    Exponent() = default;
    Exponent(std::int64_t num, std::uint32_t log_den, std::uint32_t p);
    static Exponent integer(std::int64_t v, std::uint32_t p) { return Exponent(v, 0, p); }
    // num/den with den a power of p after cancelling; throws ParseError-free
    // DomainError otherwise
    static Exponent fraction(std::int64_t num, std::int64_t den, std::uint32_t p);

    std::int64_t numerator() const { return num_; }
    std::uint32_t log_denominator() const { return k_; }
    std::uint32_t prime() const { return p_; }
    std::int64_t denominator() const;

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return k_ == 0; }
    bool positive() const { return num_ > 0; }
    bool negative() const { return num_ < 0; }
    double to_double() const;

    // numerator of this value when written over p^k (k >= log_denominator)
    std::int64_t scaled_numerator(std::uint32_t k) const;

    Exponent operator-() const { return Exponent(-num_, k_, p_); }
    friend Exponent operator+(const Exponent& a, const Exponent& b);
    friend Exponent operator-(const Exponent& a, const Exponent& b) { return a + (-b); }
    friend Exponent operator*(const Exponent& a, const Exponent& b);
    Exponent times_p() const;
    Exponent div_p() const;

    friend bool operator==(const Exponent& a, const Exponent& b) { return a.num_ == b.num_ && a.k_ == b.k_; }
    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b);

    // "3", "-1", "1/9"
    std::string to_string() const;

private:
    std::int64_t num_ = 0;
    std::uint32_t k_ = 0;
    std::uint32_t p_ = 0;  // 0 only for a default-constructed zero
};

std::int64_t checked_pow(std::int64_t base, std::uint32_t e);

}  // namespace tiltlab
