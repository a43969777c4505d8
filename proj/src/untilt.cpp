#include "tiltlab/untilt.hpp"

#include "tiltlab/errors.hpp"

#include <cmath>

namespace tiltlab {

namespace {

WittVec cyclotomic_xi(const Config& cfg, unsigned n) {
    const WittVec base = teichmuller(PerfElem::t(cfg) + PerfElem::one(cfg), n);
    WittVec acc = WittVec::zero(cfg, n);
    WittVec power = WittVec::one(cfg, n);
    for (std::uint32_t i = 0; i < cfg->p(); ++i) {
        acc = witt_add(acc, power);
        power = witt_mul(power, base);
    }
    return acc;
}

void require_same_untilt(const Digits& a, const Digits& b) {
    if (a.level() != b.level())
        throw UsageError("digit vectors at different levels");
    if (a.untilt() != b.untilt() &&
        (a.untilt()->name() != b.untilt()->name() || !a.untilt()->config()->same_field(*b.untilt()->config())))
        throw UsageError("digit vectors for different untilts");
}

}  // namespace

UntiltSpec::UntiltSpec(std::string name, Config cfg, Generator gen, unsigned max_level)
    : name_(std::move(name)), cfg_(std::move(cfg)), gen_(std::move(gen)), max_level_(max_level) {}

Untilt UntiltSpec::p_power_roots(const Config& cfg) {
    return std::make_shared<const UntiltSpec>(
        "p-power-roots", cfg,
        [cfg](unsigned n) { return witt_sub(teichmuller(PerfElem::t(cfg), n), from_integer(cfg, cfg->p(), n)); },
        ~0u);
}

Untilt UntiltSpec::cyclotomic(const Config& cfg) {
    if (cfg->d() != 1)
        throw ConfigError("the cyclotomic untilt lives over F_p; use abelian for d > 1");
    return std::make_shared<const UntiltSpec>("cyclotomic", cfg, [cfg](unsigned n) { return cyclotomic_xi(cfg, n); },
                                              ~0u);
}

Untilt UntiltSpec::abelian(const Config& cfg) {
    return std::make_shared<const UntiltSpec>("abelian", cfg, [cfg](unsigned n) { return cyclotomic_xi(cfg, n); },
                                              ~0u);
}

Untilt UntiltSpec::custom(const Config& cfg, std::vector<PerfElem> coords, std::string name) {
    if (coords.empty())
        throw UsageError("custom generator needs at least one coordinate");
    for (const auto& c : coords)
        require_same(cfg, c.config());
    const unsigned max_level = static_cast<unsigned>(coords.size());
    auto u = std::make_shared<const UntiltSpec>(
        std::move(name), cfg,
        [coords](unsigned n) {
            return WittVec::from_coords(WittBase::Perfect, std::vector<PerfElem>(coords.begin(), coords.begin() + n));
        },
        max_level);
    if (max_level >= 2 && !is_distinguished(u->xi(2)))
        throw DomainError("custom generator is not distinguished (need c_0 in m_F and c_1 a unit)");
    return u;
}

Untilt UntiltSpec::by_name(const std::string& name, const Config& cfg) {
    if (name == "p-power-roots")
        return p_power_roots(cfg);
    if (name == "cyclotomic")
        return cyclotomic(cfg);
    if (name == "abelian")
        return abelian(cfg);
    throw ConfigError("unknown untilt '" + name + "' (expected p-power-roots, cyclotomic, abelian)");
}

WittVec UntiltSpec::xi(unsigned n) const {
    if (n < 1)
        throw UsageError("level must be at least 1");
    if (n > max_level_)
        throw UsageError("generator '" + name_ + "' only provides " + std::to_string(max_level_) + " coordinates");
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(n);
    if (it == cache_.end())
        it = cache_.emplace(n, gen_(n)).first;
    return it->second;
}

bool UntiltSpec::has_monomial_c0() const {
    const PerfElem c0 = xi(1).coord(0);
    return c0.is_monomial() && c0.terms()[0].exp.positive();
}

FqElem UntiltSpec::leading_unit() const {
    if (!has_monomial_c0())
        throw DomainError("unsupported generator '" + name_ + "': c_0 = " + xi(1).coord(0).to_string() +
                          " is not a unit multiple of a positive power of t");
    return xi(1).coord(0).terms()[0].coeff;
}

Exponent UntiltSpec::gamma() const {
    leading_unit();
    return xi(1).coord(0).terms()[0].exp;
}

// ---- digits ---------------------------------------------------------------

Digits::Digits(Untilt u, std::vector<PerfElem> digits) : u_(std::move(u)), b_(std::move(digits)) {
    if (b_.empty())
        throw UsageError("digit vector needs level >= 1");
    const Exponent g = u_->gamma();
    for (const auto& b : b_) {
        require_same(u_->config(), b.config());
        for (const auto& t : b.terms())
            if (t.exp.negative() || !(t.exp < g))
                throw UsageError("digit " + b.to_string() + " is not reduced below t^" + g.to_string());
    }
}

Digits Digits::zero(const Untilt& u, unsigned n) {
    return Digits(u, std::vector<PerfElem>(n, PerfElem::zero(u->config())));
}

Digits Digits::one(const Untilt& u, unsigned n) {
    std::vector<PerfElem> b(n, PerfElem::zero(u->config()));
    b[0] = PerfElem::one(u->config());
    return Digits(u, std::move(b));
}

bool Digits::is_zero() const {
    for (const auto& b : b_)
        if (!b.is_zero())
            return false;
    return true;
}

std::string Digits::to_string() const {
    std::string out = "⟨";
    for (std::size_t i = 0; i < b_.size(); ++i) {
        if (i)
            out += " | ";
        out += b_[i].to_string();
    }
    return out + "⟩ @ " + u_->name() + ", n=" + std::to_string(b_.size());
}

bool operator==(const Digits& a, const Digits& b) {
    require_same_untilt(a, b);
    return a.b_ == b.b_;
}

bool is_distinguished(const WittVec& xi) {
    if (xi.level() < 2)
        throw UsageError("is_distinguished needs level >= 2 (c_1 is not available at level 1)");
    const auto c = xi.coords();
    const auto v0 = c[0].valuation();
    return (!v0 || v0->positive()) && c[1].is_unit();
}

WittResidue witt_res_check(const WittVec& xi) {
    std::vector<PerfElem> res;
    for (const auto& c : xi.coords())
        res.push_back(PerfElem::constant(xi.config(), c.residue()));
    WittResidue out{WittVec::from_coords(WittBase::Fq, res), false};
    out.unit_multiple_of_p = res.size() >= 2 && res[0].is_zero() && !res[1].is_zero();
    return out;
}

std::string describe_residue(const WittVec& value) {
    const auto& terms = value.expansion().terms();
    const unsigned d = value.config()->d();
    const std::uint64_t mod = value.expansion().ring().modulus();
    bool integral = true;
    std::uint64_t k = 0;
    if (!terms.empty()) {
        k = terms[0].coeff[0];
        for (unsigned i = 1; i < d; ++i)
            integral = integral && terms[0].coeff[i] == 0;
    }
    if (!integral)
        return value.to_string();
    const std::uint64_t p = value.config()->p();
    if (k == p % mod && k != 0)
        return "p";
    if (mod > p && k == mod - p)
        return "-p";
    if (k > mod / 2)
        return std::to_string(static_cast<std::int64_t>(k) - static_cast<std::int64_t>(mod));
    return std::to_string(k);
}

Reduction reduce_with_cofactor(const WittVec& x, const Untilt& u) {
    if (x.base() != WittBase::Perfect)
        throw UsageError("reduce expects a Witt vector over the perfect ring");
    require_same(x.config(), u->config());
    const unsigned n = x.level();
    const FqElem a = u->leading_unit();
    const Exponent gamma = u->gamma();
    Expansion A = x.expansion();
    Expansion eta(WittScalars::get(x.config(), n));
    std::vector<PerfElem> digits;
    for (unsigned i = 0; i < n; ++i) {
        const unsigned L = n - i;
        const auto [b, s] = split_mod_monomial(A.mod_p(), a, gamma);
        digits.push_back(b);
        const Expansion ts = teichmuller_expansion(s, L);
        eta = eta + ts.scaled_up(i, n);
        if (i + 1 == n)
            break;
        const Expansion z = A - teichmuller_expansion(b, L) - u->xi(L).expansion() * ts;
        if (!z.mod_p().is_zero())
            throw InternalError("digit recursion left a nonzero first coordinate");
        A = z.divide_by_p();
    }
    return {Digits(u, std::move(digits)), WittVec(WittBase::Perfect, std::move(eta))};
}

Digits reduce(const WittVec& x, const Untilt& u) { return reduce_with_cofactor(x, u).digits; }

WittVec lift(const Digits& d) {
    const unsigned n = d.level();
    Expansion acc(WittScalars::get(d.untilt()->config(), n));
    for (unsigned i = 0; i < n; ++i)
        if (!d.digits()[i].is_zero())
            acc = acc + teichmuller_expansion(d.digits()[i], n - i).scaled_up(i, n);
    return WittVec(WittBase::Perfect, std::move(acc));
}

Digits sharp(const PerfElem& x, const Untilt& u, unsigned n) { return reduce(teichmuller(x, n), u); }

Digits digits_from_integer(std::int64_t m, const Untilt& u, unsigned n) {
    return reduce(from_integer(u->config(), m, n), u);
}

Digits digit_add(const Digits& a, const Digits& b) {
    require_same_untilt(a, b);
    return reduce(witt_add(lift(a), lift(b)), a.untilt());
}

Digits digit_sub(const Digits& a, const Digits& b) {
    require_same_untilt(a, b);
    return reduce(witt_sub(lift(a), lift(b)), a.untilt());
}

Digits digit_mul(const Digits& a, const Digits& b) {
    require_same_untilt(a, b);
    return reduce(witt_mul(lift(a), lift(b)), a.untilt());
}

Digits digit_neg(const Digits& a) { return reduce(witt_neg(lift(a)), a.untilt()); }

Digits digit_pow(const Digits& a, std::uint64_t e) {
    Digits r = Digits::one(a.untilt(), a.level());
    Digits base = a;
    while (e) {
        if (e & 1)
            r = digit_mul(r, base);
        e >>= 1;
        if (e)
            base = digit_mul(base, base);
    }
    return r;
}

Digits digit_inv(const Digits& a) {
    const Untilt& u = a.untilt();
    const Config& cfg = u->config();
    const unsigned n = a.level();
    const Exponent gamma = u->gamma();
    const PerfElem& b0 = a.digits()[0];
    const FqElem r0 = b0.residue();
    if (r0.is_zero())
        throw DomainError("digit_inv: element lies in the maximal ideal m_n");
    const FqElem r0inv = cfg->inv(r0);

    // 1/(1+s) mod t^gamma = prod_k (1 + (-s)^{2^k}) until the powers vanish
    const PerfElem s = b0.scale(r0inv) - PerfElem::one(cfg);
    PerfElem inv = PerfElem::one(cfg);
    PerfElem power = (-s).truncate_below(gamma);
    while (!power.is_zero()) {
        inv = (inv * (PerfElem::one(cfg) + power)).truncate_below(gamma);
        power = (power * power).truncate_below(gamma);
    }
    std::vector<PerfElem> w(n, PerfElem::zero(cfg));
    w[0] = inv.scale(r0inv);
    const Digits approx(u, std::move(w));

    // a * approx = 1 + delta with delta in (p), so delta^n = 0
    const Digits one = Digits::one(u, n);
    const Digits delta = digit_sub(digit_mul(a, approx), one);
    Digits correction = one;
    Digits term = one;
    const Digits minus_delta = digit_neg(delta);
    for (unsigned j = 1; j < n; ++j) {
        term = digit_mul(term, minus_delta);
        correction = digit_add(correction, term);
    }
    Digits result = digit_mul(approx, correction);
    if (!(digit_mul(a, result) == one))
        throw InternalError("digit_inv failed to verify");
    return result;
}

std::optional<Exponent> valuation_of_digits(const Digits& x) {
    std::optional<Exponent> best;
    const Exponent gamma = x.untilt()->gamma();
    for (unsigned i = 0; i < x.level(); ++i) {
        const auto v = x.digits()[i].valuation();
        if (!v)
            continue;
        const Exponent val = *v + gamma * Exponent::integer(i, gamma.prime());
        if (!best || val < *best)
            best = val;
    }
    return best;
}

bool in_maximal_ideal(const Digits& x) { return x.digits()[0].residue().is_zero(); }

std::string Distance::to_string() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", distance);
    if (lower_bound_only)
        return "v >= " + value.to_string() + " (precision limit); distance <= " + buf;
    return "v = " + value.to_string() + "; distance = " + buf;
}

Distance distance(const Untilt& x, const Untilt& y, unsigned n) {
    require_same(x->config(), y->config());
    const Digits r = reduce(x->xi(n), y);
    Distance out;
    const double p = x->config()->p();
    if (auto v = valuation_of_digits(r)) {
        out.value = *v;
    } else {
        out.lower_bound_only = true;
        out.value = y->gamma() * Exponent::integer(n, y->gamma().prime());
    }
    out.distance = 0.0 - std::log(out.value.to_double()) / std::log(p);  // no negative zero
    return out;
}

}  // namespace tiltlab
