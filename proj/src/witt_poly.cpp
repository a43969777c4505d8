#include "tiltlab/witt_poly.hpp"

#include "tiltlab/errors.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace tiltlab {

namespace {

struct KeyHash {
    std::size_t operator()(unsigned __int128 k) const noexcept {
        const auto lo = static_cast<std::uint64_t>(k);
        const auto hi = static_cast<std::uint64_t>(k >> 64);
        std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
        h ^= h >> 31;
        return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
    }
};

unsigned bit_length(std::uint64_t v) {
    unsigned n = 0;
    while (v) {
        ++n;
        v >>= 1;
    }
    return n;
}

}  // namespace

MonomialLayout MonomialLayout::for_prime(std::uint32_t p) {
    MonomialLayout best;
    std::uint64_t pn = 1;
    for (unsigned n = 0; n < 64; ++n) {
        if (n > 0)
            pn *= p;
        const unsigned w = bit_length(pn) + 1;
        if (w * 2 * (n + 1) > 128)
            break;
        best = {p, n, w};
    }
    return best;
}

unsigned MonomialLayout::exponent(unsigned __int128 key, unsigned var) const {
    const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << width) - 1;
    return static_cast<unsigned>((key >> (var * width)) & mask);
}

std::string MonomialLayout::var_name(unsigned var) const {
    if (var <= max_index)
        return "x" + std::to_string(var);
    return "y" + std::to_string(var - max_index - 1);
}

namespace poly {

IntPoly variable(const MonomialLayout& L, unsigned var) {
    IntPoly r;
    r.terms.emplace_back(L.unit(var), mpz_class(1));
    return r;
}

IntPoly constant(long v) {
    IntPoly r;
    if (v != 0)
        r.terms.emplace_back(0, mpz_class(v));
    return r;
}

namespace {
IntPoly combine(const IntPoly& a, const IntPoly& b, bool subtract) {
    IntPoly r;
    r.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
        if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
            r.terms.push_back(a.terms[i++]);
        } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
            r.terms.emplace_back(b.terms[j].first, subtract ? mpz_class(-b.terms[j].second) : b.terms[j].second);
            ++j;
        } else {
            mpz_class c = subtract ? mpz_class(a.terms[i].second - b.terms[j].second)
                                   : mpz_class(a.terms[i].second + b.terms[j].second);
            if (c != 0)
                r.terms.emplace_back(a.terms[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    return r;
}
}  // namespace

IntPoly add(const IntPoly& a, const IntPoly& b) { return combine(a, b, false); }
IntPoly sub(const IntPoly& a, const IntPoly& b) { return combine(a, b, true); }

IntPoly scale(const IntPoly& a, const mpz_class& c) {
    IntPoly r;
    if (c == 0)
        return r;
    r.terms.reserve(a.terms.size());
    for (const auto& [k, v] : a.terms)
        r.terms.emplace_back(k, v * c);
    return r;
}

IntPoly mul(const IntPoly& a, const IntPoly& b, std::size_t budget) {
    IntPoly r;
    if (a.is_zero() || b.is_zero())
        return r;
    // The pair count bounds the work; refuse early instead of grinding.
    if (static_cast<double>(a.size()) * static_cast<double>(b.size()) > 100.0 * static_cast<double>(budget))
        throw BudgetExceeded("polynomial product of " + std::to_string(a.size()) + " x " +
                             std::to_string(b.size()) + " terms exceeds the work budget");
    std::unordered_map<IntPoly::Key, mpz_class, KeyHash> acc;
    acc.reserve(std::min<std::size_t>(a.size() * b.size(), budget) + 16);
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            mpz_class& slot = acc[ka + kb];
            mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
            if (acc.size() > budget)
                throw BudgetExceeded("polynomial product exceeds " + std::to_string(budget) + " terms");
        }
    r.terms.reserve(acc.size());
    for (auto& [k, c] : acc)
        if (c != 0)
            r.terms.emplace_back(k, std::move(c));
    std::sort(r.terms.begin(), r.terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return r;
}

IntPoly pow(const IntPoly& a, std::uint64_t e, std::size_t budget) {
    IntPoly result = constant(1), base = a;
    while (e) {
        if (e & 1)
            result = mul(result, base, budget);
        e >>= 1;
        if (e)
            base = mul(base, base, budget);
    }
    return result;
}

bool exact_div(IntPoly& a, const mpz_class& d) {
    for (auto& [k, c] : a.terms) {
        if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t()))
            return false;
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    }
    return true;
}

std::string to_string(const MonomialLayout& L, const IntPoly& a) {
    if (a.is_zero())
        return "0";
    std::string out;
    for (const auto& [k, c] : a.terms) {
        std::string mono;
        for (unsigned v = 0; v < L.nvars(); ++v) {
            const unsigned e = L.exponent(k, v);
            if (e == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += L.var_name(v);
            if (e > 1)
                mono += "^" + std::to_string(e);
        }
        mpz_class mag = abs(c);
        std::string term;
        if (mono.empty())
            term = mag.get_str();
        else if (mag == 1)
            term = mono;
        else
            term = mag.get_str() + "*" + mono;
        if (out.empty())
            out = (c < 0 ? "-" : "") + term;
        else
            out += (c < 0 ? " - " : " + ") + term;
    }
    return out;
}

}  // namespace poly

WittPolyCache& WittPolyCache::for_prime(std::uint32_t p) {
    static std::mutex registry_mu;
    static std::map<std::uint32_t, std::unique_ptr<WittPolyCache>> registry;
    std::lock_guard<std::mutex> lock(registry_mu);
    auto& slot = registry[p];
    if (!slot)
        slot = std::make_unique<WittPolyCache>(p);
    return *slot;
}

WittPolyCache::WittPolyCache(std::uint32_t p) : layout_(MonomialLayout::for_prime(p)) {}

IntPoly WittPolyCache::ghost(unsigned k, bool in_y) const {
    if (k > layout_.max_index)
        throw UsageError("Witt index " + std::to_string(k) + " exceeds the supported maximum for p = " +
                         std::to_string(layout_.p));
    IntPoly w;
    mpz_class pk = 1;
    std::uint64_t e = 1;
    for (unsigned i = 0; i < k; ++i)
        e *= layout_.p;
    for (unsigned i = 0; i <= k; ++i) {
        IntPoly term;
        const unsigned var = in_y ? layout_.y(i) : layout_.x(i);
        term.terms.emplace_back(layout_.unit(var) * e, pk);
        w = poly::add(w, term);
        pk *= layout_.p;
        e /= layout_.p;
    }
    return w;
}

const IntPoly& WittPolyCache::power(Family& fam, unsigned k, unsigned j) {
    auto& pw = fam.powers[k];
    while (pw.size() <= j)
        pw.push_back(poly::pow(pw.back(), layout_.p, budget_));
    return pw[j];
}

void WittPolyCache::extend(WittKind kind, Family& fam) {
    const unsigned n = static_cast<unsigned>(fam.polys.size());
    if (n > layout_.max_index)
        throw UsageError("Witt index " + std::to_string(n) + " exceeds the supported maximum " +
                         std::to_string(layout_.max_index) + " for p = " + std::to_string(layout_.p));
    IntPoly num;
    switch (kind) {
    case WittKind::Sum:
        num = poly::add(ghost(n), ghost(n, true));
        break;
    case WittKind::Product:
        num = poly::mul(ghost(n), ghost(n, true), budget_);
        break;
    case WittKind::Negation:
        num = poly::scale(ghost(n), -1);
        break;
    }
    mpz_class pk = 1;
    for (unsigned k = 0; k < n; ++k) {
        num = poly::sub(num, poly::scale(power(fam, k, n - k), pk));
        pk *= layout_.p;
    }
    if (!poly::exact_div(num, pk))
        throw InternalError("Witt recursion: division by p^" + std::to_string(n) + " is not exact");
    fam.polys.push_back(num);
    fam.powers.push_back({num});
}

const IntPoly& WittPolyCache::get(WittKind kind, unsigned i) {
    std::lock_guard<std::mutex> lock(mu_);
    Family& fam = fams_[static_cast<int>(kind)];
    while (fam.polys.size() <= i)
        extend(kind, fam);
    return fam.polys[i];
}

PerfElem evaluate(const MonomialLayout& L, const IntPoly& f, const std::vector<PerfElem>& xs,
                  const std::vector<PerfElem>& ys, const Config& cfg) {
    std::vector<std::map<unsigned, PerfElem>> powers(L.nvars());
    auto value_of = [&](unsigned var) -> const PerfElem& {
        if (var <= L.max_index) {
            if (var >= xs.size())
                throw UsageError("polynomial uses unbound variable " + L.var_name(var));
            return xs[var];
        }
        const unsigned j = var - L.max_index - 1;
        if (j >= ys.size())
            throw UsageError("polynomial uses unbound variable " + L.var_name(var));
        return ys[j];
    };
    auto power_of = [&](unsigned var, unsigned e) -> const PerfElem& {
        auto it = powers[var].find(e);
        if (it != powers[var].end())
            return it->second;
        return powers[var].emplace(e, value_of(var).pow(e)).first->second;
    };
    const mpz_class p = L.p;
    PerfElem result(cfg);
    for (const auto& [k, c] : f.terms) {
        mpz_class r = c % p;
        if (r < 0)
            r += p;
        if (r == 0)
            continue;
        PerfElem term = PerfElem::from_int(cfg, r.get_si());
        for (unsigned v = 0; v < L.nvars() && !term.is_zero(); ++v) {
            const unsigned e = L.exponent(k, v);
            if (e)
                term = term * power_of(v, e);
        }
        result = result + term;
    }
    return result;
}

}  // namespace tiltlab
