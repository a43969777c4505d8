#include "tiltlab/witt_vec.hpp"

#include "tiltlab/errors.hpp"
#include "tiltlab/witt_poly.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace tiltlab {

// ---- W_L(F_q) -------------------------------------------------------------

std::shared_ptr<const WittScalars> WittScalars::get(const Config& cfg, unsigned level) {
    using Key = std::tuple<std::uint32_t, std::vector<std::uint32_t>, unsigned>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const WittScalars>> cache;
    Key key{cfg->p(), cfg->modulus(), level};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    auto ring = std::make_shared<const WittScalars>(cfg, level);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(std::move(key), std::move(ring)).first->second;
}

WittScalars::WittScalars(Config cfg, unsigned level) : cfg_(std::move(cfg)), level_(level), d_(cfg_->d()), mod_(1) {
    if (level < 1)
        throw UsageError("Witt level must be at least 1");
    for (unsigned i = 0; i < level; ++i) {
        if (mod_ > (std::uint64_t(1) << 62) / cfg_->p())
            throw UsageError("p^n exceeds 62 bits");
        mod_ *= cfg_->p();
    }
    if (cfg_->q() <= 4096) {
        teich_table_.resize(cfg_->q());
        for (std::uint32_t c = 0; c < cfg_->q(); ++c) {
            FqElem r{c};
            for (unsigned i = 1; i < level_; ++i)
                r = cfg_->frob_inv(r);
            Elem x = lift(r);
            for (unsigned i = 1; i < level_; ++i)
                x = pow(x, cfg_->p());
            teich_table_[c] = x;
        }
    }
}

WittScalars::Elem WittScalars::from_int(std::int64_t v) const {
    Elem r{};
    std::int64_t m = v % static_cast<std::int64_t>(mod_);
    if (m < 0)
        m += static_cast<std::int64_t>(mod_);
    r[0] = static_cast<std::uint64_t>(m);
    return r;
}

WittScalars::Elem WittScalars::lift(FqElem c) const {
    Elem r{};
    const auto co = cfg_->coords(c);
    for (unsigned i = 0; i < d_; ++i)
        r[i] = co[i];
    return r;
}

FqElem WittScalars::reduce(const Elem& a) const {
    std::vector<std::uint32_t> co(d_);
    for (unsigned i = 0; i < d_; ++i)
        co[i] = static_cast<std::uint32_t>(a[i] % cfg_->p());
    return cfg_->from_coords(co);
}

WittScalars::Elem WittScalars::teich(FqElem c) const {
    if (!teich_table_.empty())
        return teich_table_[c.code];
    FqElem r = c;
    for (unsigned i = 1; i < level_; ++i)
        r = cfg_->frob_inv(r);
    Elem x = lift(r);
    for (unsigned i = 1; i < level_; ++i)
        x = pow(x, cfg_->p());
    return x;
}

bool WittScalars::is_zero(const Elem& a) const {
    for (unsigned i = 0; i < d_; ++i)
        if (a[i])
            return false;
    return true;
}

WittScalars::Elem WittScalars::add(const Elem& a, const Elem& b) const {
    Elem r{};
    for (unsigned i = 0; i < d_; ++i) {
        r[i] = a[i] + b[i];
        if (r[i] >= mod_)
            r[i] -= mod_;
    }
    return r;
}

WittScalars::Elem WittScalars::neg(const Elem& a) const {
    Elem r{};
    for (unsigned i = 0; i < d_; ++i)
        r[i] = a[i] ? mod_ - a[i] : 0;
    return r;
}

WittScalars::Elem WittScalars::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

WittScalars::Elem WittScalars::mul(const Elem& a, const Elem& b) const {
    if (d_ == 1) {
        Elem r{};
        r[0] = mulmod(a[0], b[0]);
        return r;
    }
    std::array<std::uint64_t, 2 * PrimeConfig::kMaxDegree> prod{};
    for (unsigned i = 0; i < d_; ++i) {
        if (!a[i])
            continue;
        for (unsigned j = 0; j < d_; ++j)
            prod[i + j] = (prod[i + j] + mulmod(a[i], b[j])) % mod_;
    }
    const auto& f = cfg_->modulus();
    for (unsigned k = 2 * d_ - 2; k >= d_; --k) {
        const std::uint64_t c = prod[k];
        if (!c)
            continue;
        prod[k] = 0;
        for (unsigned i = 0; i < d_; ++i)
            prod[k - d_ + i] = (prod[k - d_ + i] + mod_ - mulmod(c, f[i])) % mod_;
    }
    Elem r{};
    for (unsigned i = 0; i < d_; ++i)
        r[i] = prod[i];
    return r;
}

WittScalars::Elem WittScalars::mul_int(const Elem& a, std::uint64_t m) const {
    Elem r{};
    m %= mod_;
    for (unsigned i = 0; i < d_; ++i)
        r[i] = mulmod(a[i], m);
    return r;
}

WittScalars::Elem WittScalars::pow(Elem a, std::uint64_t e) const {
    Elem r = from_int(1);
    while (e) {
        if (e & 1)
            r = mul(r, a);
        e >>= 1;
        if (e)
            a = mul(a, a);
    }
    return r;
}

// ---- expansions -----------------------------------------------------------

namespace {

bool less_exp(const LiftedTerm& a, const LiftedTerm& b) { return a.exp < b.exp; }

void require_ring(const Expansion& a, const Expansion& b) {
    if (a.level() != b.level())
        throw UsageError("Witt level mismatch: " + std::to_string(a.level()) + " vs " + std::to_string(b.level()));
    require_same(a.ring().config(), b.ring().config());
}

}  // namespace

Expansion::Expansion(std::shared_ptr<const WittScalars> ring, std::vector<LiftedTerm> terms)
    : ring_(std::move(ring)), terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end(), less_exp);
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
        auto c = terms_[i].coeff;
        std::size_t j = i + 1;
        for (; j < terms_.size() && terms_[j].exp == terms_[i].exp; ++j)
            c = ring_->add(c, terms_[j].coeff);
        if (!ring_->is_zero(c))
            terms_[out++] = {terms_[i].exp, c};
        i = j;
    }
    terms_.resize(out);
}

Expansion operator+(const Expansion& a, const Expansion& b) {
    require_ring(a, b);
    const WittScalars& R = *a.ring_;
    Expansion r(a.ring_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
        if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].exp < b.terms_[j].exp)) {
            r.terms_.push_back(a.terms_[i++]);
        } else if (i == a.terms_.size() || b.terms_[j].exp < a.terms_[i].exp) {
            r.terms_.push_back(b.terms_[j++]);
        } else {
            auto c = R.add(a.terms_[i].coeff, b.terms_[j].coeff);
            if (!R.is_zero(c))
                r.terms_.push_back({a.terms_[i].exp, c});
            ++i;
            ++j;
        }
    }
    return r;
}

Expansion Expansion::operator-() const {
    Expansion r = *this;
    for (auto& t : r.terms_)
        t.coeff = ring_->neg(t.coeff);
    return r;
}

Expansion operator-(const Expansion& a, const Expansion& b) { return a + (-b); }

Expansion operator*(const Expansion& a, const Expansion& b) {
    require_ring(a, b);
    const WittScalars& R = *a.ring_;
    if (a.is_zero() || b.is_zero())
        return Expansion(a.ring_);
    std::uint32_t K = 0;
    for (const auto& t : a.terms_)
        K = std::max(K, t.exp.log_denominator());
    for (const auto& t : b.terms_)
        K = std::max(K, t.exp.log_denominator());
    std::vector<std::int64_t> nb;
    nb.reserve(b.terms_.size());
    for (const auto& t : b.terms_)
        nb.push_back(t.exp.scaled_numerator(K));
    std::vector<std::pair<std::int64_t, WittScalars::Elem>> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_) {
        const std::int64_t na = ta.exp.scaled_numerator(K);
        for (std::size_t j = 0; j < nb.size(); ++j)
            prod.emplace_back(na + nb[j], R.mul(ta.coeff, b.terms_[j].coeff));
    }
    std::sort(prod.begin(), prod.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Expansion r(a.ring_);
    const std::uint32_t p = R.config()->p();
    for (std::size_t i = 0; i < prod.size();) {
        auto c = prod[i].second;
        std::size_t j = i + 1;
        for (; j < prod.size() && prod[j].first == prod[i].first; ++j)
            c = R.add(c, prod[j].second);
        if (!R.is_zero(c))
            r.terms_.push_back({Exponent(prod[i].first, K, p), c});
        i = j;
    }
    return r;
}

Expansion Expansion::pow(std::uint64_t e) const {
    Expansion r(ring_, {{Exponent(), ring_->from_int(1)}});
    Expansion base = *this;
    while (e) {
        if (e & 1)
            r = r * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return r;
}

Expansion Expansion::mul_int(std::int64_t m) const {
    const auto c = ring_->from_int(m);
    Expansion r(ring_);
    for (const auto& t : terms_) {
        auto v = ring_->mul(t.coeff, c);
        if (!ring_->is_zero(v))
            r.terms_.push_back({t.exp, v});
    }
    return r;
}

PerfElem Expansion::mod_p() const {
    std::vector<PerfTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        const FqElem c = ring_->reduce(t.coeff);
        if (!c.is_zero())
            out.push_back({t.exp, c});
    }
    return PerfElem(ring_->config(), std::move(out));
}

Expansion Expansion::truncate(unsigned m) const {
    if (m > level())
        throw UsageError("cannot truncate to a higher level");
    auto ring = WittScalars::get(ring_->config(), m);
    Expansion r(ring);
    for (const auto& t : terms_) {
        WittScalars::Elem c{};
        for (unsigned i = 0; i < PrimeConfig::kMaxDegree; ++i)
            c[i] = t.coeff[i] % ring->modulus();
        if (!ring->is_zero(c))
            r.terms_.push_back({t.exp, c});
    }
    return r;
}

Expansion Expansion::scaled_up(unsigned k, unsigned level) const {
    if (level > this->level() + k)
        throw UsageError("scaled_up would need more precision than available");
    auto ring = WittScalars::get(ring_->config(), level);
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < k; ++i)
        pk *= ring_->config()->p();
    Expansion r(ring);
    if (k >= level)
        return r;
    for (const auto& t : terms_) {
        WittScalars::Elem c{};
        for (unsigned i = 0; i < PrimeConfig::kMaxDegree; ++i)
            c[i] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(t.coeff[i]) * pk % ring->modulus());
        if (!ring->is_zero(c))
            r.terms_.push_back({t.exp, c});
    }
    return r;
}

Expansion Expansion::divide_by_p() const {
    if (level() < 2)
        throw UsageError("divide_by_p needs level >= 2");
    const std::uint32_t p = ring_->config()->p();
    auto ring = WittScalars::get(ring_->config(), level() - 1);
    Expansion r(ring);
    for (const auto& t : terms_) {
        WittScalars::Elem c{};
        for (unsigned i = 0; i < PrimeConfig::kMaxDegree; ++i) {
            if (t.coeff[i] % p != 0)
                throw UsageError("divide_by_p: element is not divisible by p");
            c[i] = (t.coeff[i] / p) % ring->modulus();
        }
        if (!ring->is_zero(c))
            r.terms_.push_back({t.exp, c});
    }
    return r;
}

bool operator==(const Expansion& a, const Expansion& b) {
    require_ring(a, b);
    if (a.terms_.size() != b.terms_.size())
        return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].exp == b.terms_[i].exp) || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

Expansion lift_perf(const PerfElem& x, unsigned level) {
    auto ring = WittScalars::get(x.config(), level);
    std::vector<LiftedTerm> terms;
    terms.reserve(x.size());
    for (const auto& t : x.terms())
        terms.push_back({t.exp, ring->lift(t.coeff)});
    return Expansion(ring, std::move(terms));
}

// [x] = lim (lift of x^{1/p^m})^{p^m}; at level L the limit is reached at m = L-1.
Expansion teichmuller_expansion(const PerfElem& x, unsigned level) {
    auto ring = WittScalars::get(x.config(), level);
    if (x.is_zero())
        return Expansion(ring);
    if (x.is_monomial())
        return Expansion(ring, {{x.terms()[0].exp, ring->teich(x.terms()[0].coeff)}});
    Expansion r = lift_perf(x.frobenius_pow(-static_cast<int>(level - 1)), level);
    for (unsigned i = 1; i < level; ++i)
        r = r.pow(x.config()->p());
    return r;
}

// ---- Witt vectors -----------------------------------------------------------

namespace {

void require_compatible(const WittVec& a, const WittVec& b) {
    if (a.base() != b.base())
        throw UsageError("Witt vectors over different base rings");
    if (a.level() != b.level())
        throw UsageError("Witt level mismatch: " + std::to_string(a.level()) + " vs " + std::to_string(b.level()));
    require_same(a.config(), b.config());
}

}  // namespace

WittVec::WittVec(WittBase base, Expansion e) : base_(base), exp_(std::move(e)) {
    if (base_ == WittBase::Fq)
        for (const auto& t : exp_.terms())
            if (!t.exp.is_zero())
                throw UsageError("Witt vector over F_q cannot involve t");
}

WittVec WittVec::zero(const Config& cfg, unsigned n, WittBase base) {
    return WittVec(base, Expansion(WittScalars::get(cfg, n)));
}

WittVec WittVec::one(const Config& cfg, unsigned n, WittBase base) {
    auto ring = WittScalars::get(cfg, n);
    return WittVec(base, Expansion(ring, {{Exponent(), ring->from_int(1)}}));
}

WittVec WittVec::from_coords(WittBase base, const std::vector<PerfElem>& coords) {
    if (coords.empty())
        throw UsageError("a Witt vector needs at least one coordinate");
    const Config& cfg = coords[0].config();
    const unsigned n = static_cast<unsigned>(coords.size());
    Expansion acc(WittScalars::get(cfg, n));
    for (unsigned i = 0; i < n; ++i) {
        require_same(cfg, coords[i].config());
        if (coords[i].is_zero())
            continue;
        const PerfElem root = coords[i].frobenius_pow(-static_cast<int>(i));
        acc = acc + teichmuller_expansion(root, n - i).scaled_up(i, n);
    }
    return WittVec(base, std::move(acc));
}

std::vector<PerfElem> WittVec::coords() const {
    std::vector<PerfElem> out;
    out.reserve(level());
    Expansion a = exp_;
    for (unsigned i = 0; i < level(); ++i) {
        const PerfElem r = a.mod_p();
        out.push_back(r.frobenius_pow(static_cast<int>(i)));
        if (i + 1 < level())
            a = (a - teichmuller_expansion(r, a.level())).divide_by_p();
    }
    return out;
}

PerfElem WittVec::coord(unsigned i) const {
    if (i >= level())
        throw UsageError("coordinate index out of range");
    if (i == 0)
        return exp_.mod_p();
    return coords()[i];
}

std::string WittVec::to_string() const {
    std::string out = "[";
    const auto c = coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i)
            out += "; ";
        out += c[i].to_string();
    }
    return out + "]";
}

WittVec WittVec::parse(const Config& cfg, std::string_view text, WittBase base) {
    std::size_t b = text.find_first_not_of(" \t\n");
    std::size_t e = text.find_last_not_of(" \t\n");
    if (b == std::string_view::npos || text[b] != '[' || text[e] != ']')
        throw ParseError("Witt vector must be written as [e0; e1; ...]", b == std::string_view::npos ? 0 : b);
    std::vector<PerfElem> coords;
    std::size_t start = b + 1;
    for (;;) {
        const std::size_t semi = text.find(';', start);
        const std::size_t stop = semi == std::string_view::npos || semi > e ? e : semi;
        try {
            coords.push_back(PerfElem::parse(cfg, text.substr(start, stop - start)));
        } catch (const ParseError& err) {
            throw ParseError(std::string("coordinate ") + std::to_string(coords.size()) + ": " + err.what(),
                             start + err.position());
        }
        if (stop == e)
            break;
        start = stop + 1;
    }
    return from_coords(base, coords);
}

bool operator==(const WittVec& a, const WittVec& b) {
    require_compatible(a, b);
    return a.exp_ == b.exp_;
}

WittVec witt_add(const WittVec& a, const WittVec& b) {
    require_compatible(a, b);
    return WittVec(a.base(), a.expansion() + b.expansion());
}

WittVec witt_sub(const WittVec& a, const WittVec& b) {
    require_compatible(a, b);
    return WittVec(a.base(), a.expansion() - b.expansion());
}

WittVec witt_mul(const WittVec& a, const WittVec& b) {
    require_compatible(a, b);
    return WittVec(a.base(), a.expansion() * b.expansion());
}

WittVec witt_neg(const WittVec& a) { return WittVec(a.base(), -a.expansion()); }

WittVec witt_pow(const WittVec& a, std::uint64_t e) { return WittVec(a.base(), a.expansion().pow(e)); }

WittVec teichmuller(const PerfElem& x, unsigned n, WittBase base) {
    return WittVec(base, teichmuller_expansion(x, n));
}

WittVec verschiebung(const WittVec& a) {
    auto c = a.coords();
    c.insert(c.begin(), PerfElem::zero(a.config()));
    c.pop_back();
    return WittVec::from_coords(a.base(), c);
}

WittVec p_times(const WittVec& a) { return WittVec(a.base(), a.expansion().mul_int(a.config()->p())); }

WittVec divide_by_p(const WittVec& a) {
    if (!a.expansion().mod_p().is_zero())
        throw UsageError("divide_by_p requires first Witt coordinate 0");
    return WittVec(a.base(), a.expansion().divide_by_p());
}

WittVec truncate(const WittVec& a, unsigned m) { return WittVec(a.base(), a.expansion().truncate(m)); }

// m * 1 by double-and-add on witt_add.
WittVec from_integer(const Config& cfg, std::int64_t m, unsigned n, WittBase base) {
    WittVec acc = WittVec::zero(cfg, n, base);
    WittVec unit = WittVec::one(cfg, n, base);
    const bool negative = m < 0;
    std::uint64_t k = negative ? static_cast<std::uint64_t>(-(m + 1)) + 1 : static_cast<std::uint64_t>(m);
    while (k) {
        if (k & 1)
            acc = witt_add(acc, unit);
        k >>= 1;
        if (k)
            unit = witt_add(unit, unit);
    }
    return negative ? witt_neg(acc) : acc;
}

namespace {

WittVec apply_polys(WittKind kind, const WittVec& a, const WittVec* b) {
    const Config& cfg = a.config();
    auto& cache = WittPolyCache::for_prime(cfg->p());
    const auto xs = a.coords();
    const std::vector<PerfElem> ys = b ? b->coords() : std::vector<PerfElem>{};
    std::vector<PerfElem> out;
    for (unsigned i = 0; i < a.level(); ++i)
        out.push_back(evaluate(cache.layout(), cache.get(kind, i), xs, ys, cfg));
    return WittVec::from_coords(a.base(), out);
}

}  // namespace

WittVec witt_add_poly(const WittVec& a, const WittVec& b) {
    require_compatible(a, b);
    return apply_polys(WittKind::Sum, a, &b);
}

WittVec witt_mul_poly(const WittVec& a, const WittVec& b) {
    require_compatible(a, b);
    return apply_polys(WittKind::Product, a, &b);
}

WittVec witt_neg_poly(const WittVec& a) { return apply_polys(WittKind::Negation, a, nullptr); }

}  // namespace tiltlab
