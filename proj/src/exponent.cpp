#include "tiltlab/exponent.hpp"

#include "tiltlab/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace tiltlab {

namespace {

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw InternalError("exponent arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

std::uint32_t merge_prime(std::uint32_t a, std::uint32_t b) {
    if (a == 0)
        return b;
    if (b != 0 && a != b)
        throw ConfigError("exponents over different primes");
    return a;
}

}  // namespace

std::int64_t checked_pow(std::int64_t base, std::uint32_t e) {
    __int128 r = 1;
    for (std::uint32_t i = 0; i < e; ++i)
        r = narrow(r * base);
    return static_cast<std::int64_t>(r);
}

Exponent::Exponent(std::int64_t num, std::uint32_t log_den, std::uint32_t p) : num_(num), k_(log_den), p_(p) {
    if (num_ == 0) {
        k_ = 0;
        return;
    }
    if (p_ < 2) {
        if (k_ != 0)
            throw InternalError("fractional exponent without a prime");
        return;
    }
    while (k_ > 0 && num_ % static_cast<std::int64_t>(p_) == 0) {
        num_ /= p_;
        --k_;
    }
}

Exponent Exponent::fraction(std::int64_t num, std::int64_t den, std::uint32_t p) {
    if (den == 0)
        throw DomainError("zero denominator in exponent");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    std::uint32_t k = 0;
    while (den % p == 0) {
        den /= p;
        ++k;
    }
    if (den != 1)
        throw DomainError("exponent denominator is not a power of " + std::to_string(p));
    return Exponent(num, k, p);
}

std::int64_t Exponent::denominator() const { return checked_pow(p_ ? p_ : 1, k_); }

double Exponent::to_double() const {
    return static_cast<double>(num_) / std::pow(static_cast<double>(p_ ? p_ : 1), k_);
}

std::int64_t Exponent::scaled_numerator(std::uint32_t k) const {
    if (k < k_)
        throw InternalError("scaled_numerator below own denominator");
    if (num_ == 0)
        return 0;
    return narrow(static_cast<__int128>(num_) * checked_pow(p_, k - k_));
}

Exponent operator+(const Exponent& a, const Exponent& b) {
    const std::uint32_t p = merge_prime(a.p_, b.p_);
    if (a.num_ == 0)
        return Exponent(b.num_, b.k_, p);
    if (b.num_ == 0)
        return Exponent(a.num_, a.k_, p);
    const std::uint32_t k = std::max(a.k_, b.k_);
    return Exponent(narrow(static_cast<__int128>(a.scaled_numerator(k)) + b.scaled_numerator(k)), k, p);
}

Exponent operator*(const Exponent& a, const Exponent& b) {
    const std::uint32_t p = merge_prime(a.p_, b.p_);
    return Exponent(narrow(static_cast<__int128>(a.num_) * b.num_), a.k_ + b.k_, p);
}

Exponent Exponent::times_p() const {
    if (num_ == 0)
        return *this;
    if (k_ > 0)
        return Exponent(num_, k_ - 1, p_);
    return Exponent(narrow(static_cast<__int128>(num_) * p_), 0, p_);
}

Exponent Exponent::div_p() const {
    if (num_ == 0)
        return *this;
    return Exponent(num_, k_ + 1, p_);
}

std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    if (a.k_ == b.k_)
        return a.num_ <=> b.num_;
    const std::uint32_t k = std::max(a.k_, b.k_);
    return a.scaled_numerator(k) <=> b.scaled_numerator(k);
}

std::string Exponent::to_string() const {
    if (k_ == 0)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(denominator());
}

}  // namespace tiltlab
