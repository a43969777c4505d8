#include "tiltlab/prime_config.hpp"

#include "tiltlab/errors.hpp"

#include <sstream>

namespace tiltlab {

namespace {

using Poly = std::vector<std::uint32_t>;  // low degree first, no trailing zeros

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::uint64_t r = 1, b = a % p;
    for (std::uint32_t e = p - 2; e; e >>= 1) {
        if (e & 1)
            r = r * b % p;
        b = b * b % p;
    }
    return static_cast<std::uint32_t>(r);
}

// remainder of f modulo g over F_p
Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
    trim(f);
    const std::uint32_t lead_inv = inv_mod(g.back(), p);
    while (f.size() >= g.size()) {
        const std::uint64_t c = std::uint64_t(f.back()) * lead_inv % p;
        const std::size_t shift = f.size() - g.size();
        for (std::size_t i = 0; i < g.size(); ++i)
            f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - c * g[i] % p) % p);
        trim(f);
    }
    return f;
}

constexpr std::uint32_t kTableLimit = 256;

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t k = 2; k * k <= n; ++k)
        if (n % k == 0)
            return false;
    return true;
}

// Brute-force search for a monic factor of degree <= deg/2.
bool is_irreducible(const std::vector<std::uint32_t>& f_in, std::uint32_t p) {
    Poly f = f_in;
    trim(f);
    if (f.size() < 2)
        return false;
    const unsigned deg = static_cast<unsigned>(f.size() - 1);
    for (unsigned k = 1; 2 * k <= deg; ++k) {
        std::uint64_t count = 1;
        for (unsigned i = 0; i < k; ++i)
            count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Poly g(k + 1);
            std::uint64_t c = code;
            for (unsigned i = 0; i < k; ++i) {
                g[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            g[k] = 1;
            if (poly_mod(f, g, p).empty())
                return false;
        }
    }
    return true;
}

Config PrimeConfig::make(std::uint32_t p, unsigned d, std::vector<std::uint32_t> modulus) {
    if (!is_prime(p))
        throw ConfigError("p = " + std::to_string(p) + " is not prime");
    if (d < 1 || d > kMaxDegree)
        throw ConfigError("degree d must lie in 1.." + std::to_string(kMaxDegree));
    std::uint64_t q = 1;
    for (unsigned i = 0; i < d; ++i) {
        q *= p;
        if (q > (1u << 30))
            throw ConfigError("field size p^d too large");
    }
    if (modulus.empty()) {
        for (std::uint64_t code = 0;; ++code) {
            Poly f(d + 1);
            std::uint64_t c = code;
            for (unsigned i = 0; i < d; ++i) {
                f[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            f[d] = 1;
            if (c == 0 && is_irreducible(f, p)) {
                modulus = f;
                break;
            }
            if (c != 0)
                throw InternalError("no irreducible polynomial found");
        }
    }
    if (modulus.size() != d + 1 || modulus.back() != 1)
        throw ConfigError("modulus must be monic of degree " + std::to_string(d));
    for (auto c : modulus)
        if (c >= p)
            throw ConfigError("modulus coefficients must lie in 0..p-1");
    if (!is_irreducible(modulus, p))
        throw ConfigError("modulus is reducible over F_" + std::to_string(p));
    return std::make_shared<const PrimeConfig>(p, d, std::move(modulus));
}

PrimeConfig::PrimeConfig(std::uint32_t p, unsigned d, std::vector<std::uint32_t> modulus)
    : p_(p), d_(d), q_(1), modulus_(std::move(modulus)) {
    for (unsigned i = 0; i < d; ++i)
        q_ *= p;
    if (q_ <= kTableLimit) {
        add_table_.resize(std::size_t(q_) * q_);
        mul_table_.resize(std::size_t(q_) * q_);
        for (std::uint32_t a = 0; a < q_; ++a)
            for (std::uint32_t b = 0; b < q_; ++b) {
                auto ca = coords({a}), cb = coords({b});
                for (unsigned i = 0; i < d_; ++i)
                    ca[i] = (ca[i] + cb[i]) % p_;
                add_table_[a * q_ + b] = from_coords(ca).code;
                mul_table_[a * q_ + b] = mul_slow({a}, {b}).code;
            }
    }
    if (q_ <= (1u << 16)) {
        inv_table_.assign(q_, 0);
        frob_inv_table_.assign(q_, 0);
        for (std::uint32_t a = 1; a < q_; ++a)
            inv_table_[a] = pow({a}, q_ - 2).code;
        for (std::uint32_t a = 0; a < q_; ++a)
            frob_inv_table_[frob({a}).code] = a;
    }
}

FqElem PrimeConfig::from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0)
        r += p_;
    return {static_cast<std::uint32_t>(r)};
}

FqElem PrimeConfig::generator() const {
    if (d_ == 1) {
        // z is a root of the linear modulus z + m_0
        return from_int(-static_cast<std::int64_t>(modulus_[0]));
    }
    return {p_};
}

FqElem PrimeConfig::from_coords(const std::vector<std::uint32_t>& c) const {
    std::uint32_t code = 0, scale = 1;
    for (unsigned i = 0; i < d_; ++i) {
        const std::uint32_t v = i < c.size() ? c[i] % p_ : 0;
        code += v * scale;
        scale *= p_;
    }
    return {code};
}

std::vector<std::uint32_t> PrimeConfig::coords(FqElem a) const {
    std::vector<std::uint32_t> c(d_);
    std::uint32_t v = a.code;
    for (unsigned i = 0; i < d_; ++i) {
        c[i] = v % p_;
        v /= p_;
    }
    return c;
}

FqElem PrimeConfig::add(FqElem a, FqElem b) const {
    if (!add_table_.empty())
        return {add_table_[a.code * q_ + b.code]};
    if (d_ == 1)
        return {(a.code + b.code) % p_};
    auto ca = coords(a), cb = coords(b);
    for (unsigned i = 0; i < d_; ++i)
        ca[i] = (ca[i] + cb[i]) % p_;
    return from_coords(ca);
}

FqElem PrimeConfig::neg(FqElem a) const {
    auto c = coords(a);
    for (auto& v : c)
        v = (p_ - v) % p_;
    return from_coords(c);
}

FqElem PrimeConfig::sub(FqElem a, FqElem b) const { return add(a, neg(b)); }

FqElem PrimeConfig::mul_slow(FqElem a, FqElem b) const {
    if (d_ == 1)
        return {static_cast<std::uint32_t>(std::uint64_t(a.code) * b.code % p_)};
    const auto ca = coords(a), cb = coords(b);
    Poly prod(2 * d_ - 1, 0);
    for (unsigned i = 0; i < d_; ++i)
        for (unsigned j = 0; j < d_; ++j)
            prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t(ca[i]) * cb[j]) % p_);
    return from_coords(poly_mod(prod, modulus_, p_));
}

FqElem PrimeConfig::mul(FqElem a, FqElem b) const {
    if (!mul_table_.empty())
        return {mul_table_[a.code * q_ + b.code]};
    return mul_slow(a, b);
}

FqElem PrimeConfig::pow(FqElem a, std::uint64_t e) const {
    FqElem r = one();
    while (e) {
        if (e & 1)
            r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

FqElem PrimeConfig::inv(FqElem a) const {
    if (a.is_zero())
        throw DomainError("inverse of zero in F_q");
    if (!inv_table_.empty())
        return {inv_table_[a.code]};
    return pow(a, q_ - 2);
}

FqElem PrimeConfig::frob_inv(FqElem a) const {
    if (!frob_inv_table_.empty())
        return {frob_inv_table_[a.code]};
    return pow(a, q_ / p_);
}

bool PrimeConfig::is_polynomial_term(FqElem a) const {
    unsigned nz = 0;
    for (auto c : coords(a))
        nz += c != 0;
    return nz > 1;
}

std::string PrimeConfig::format(FqElem a) const {
    if (a.is_zero())
        return "0";
    const auto c = coords(a);
    std::string out;
    for (unsigned i = d_; i-- > 0;) {
        if (c[i] == 0)
            continue;
        if (!out.empty())
            out += "+";
        if (i == 0) {
            out += std::to_string(c[i]);
            continue;
        }
        if (c[i] != 1)
            out += std::to_string(c[i]) + "*";
        out += "z";
        if (i > 1)
            out += "^" + std::to_string(i);
    }
    return out;
}

bool PrimeConfig::same_field(const PrimeConfig& o) const {
    return p_ == o.p_ && d_ == o.d_ && modulus_ == o.modulus_;
}

std::string PrimeConfig::describe() const {
    std::ostringstream os;
    os << "F_" << q_;
    if (d_ > 1) {
        os << " = F_" << p_ << "[z]/(";
        bool first = true;
        for (unsigned i = d_ + 1; i-- > 0;) {
            if (modulus_[i] == 0)
                continue;
            if (!first)
                os << "+";
            first = false;
            if (i == 0 || modulus_[i] != 1)
                os << modulus_[i] << (i ? "*" : "");
            if (i > 0)
                os << "z" << (i > 1 ? "^" + std::to_string(i) : "");
        }
        os << ")";
    }
    return os.str();
}

void require_same(const Config& a, const Config& b) {
    if (a == b)
        return;
    if (!a || !b || !a->same_field(*b))
        throw ConfigError("operands live over different fields");
}

}  // namespace tiltlab
