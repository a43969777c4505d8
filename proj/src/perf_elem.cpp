#include "tiltlab/perf_elem.hpp"

#include "tiltlab/errors.hpp"

#include <algorithm>
#include <cctype>

namespace tiltlab {

namespace {

// Sort by exponent, merge equal exponents, drop zeros.
void canonicalize(const PrimeConfig& f, std::vector<PerfTerm>& terms) {
    std::sort(terms.begin(), terms.end(), [](const PerfTerm& a, const PerfTerm& b) { return a.exp < b.exp; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size();) {
        FqElem c = terms[i].coeff;
        std::size_t j = i + 1;
        for (; j < terms.size() && terms[j].exp == terms[i].exp; ++j)
            c = f.add(c, terms[j].coeff);
        if (!c.is_zero())
            terms[out++] = {terms[i].exp, c};
        i = j;
    }
    terms.resize(out);
}

const Config& pick_config(const PerfElem& a, const PerfElem& b) {
    if (!a.config())
        return b.config();
    if (b.config())
        require_same(a.config(), b.config());
    return a.config();
}

}  // namespace

PerfElem::PerfElem(Config cfg, std::vector<PerfTerm> terms) : cfg_(std::move(cfg)), terms_(std::move(terms)) {
    canonicalize(*cfg_, terms_);
}

PerfElem PerfElem::constant(const Config& cfg, FqElem c) {
    PerfElem r(cfg);
    if (!c.is_zero())
        r.terms_.push_back({Exponent::integer(0, cfg->p()), c});
    return r;
}

PerfElem PerfElem::monomial(const Config& cfg, FqElem c, const Exponent& e) {
    PerfElem r(cfg);
    if (!c.is_zero())
        r.terms_.push_back({e, c});
    return r;
}

FqElem PerfElem::coefficient(const Exponent& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const PerfTerm& t, const Exponent& x) { return t.exp < x; });
    if (it != terms_.end() && it->exp == e)
        return it->coeff;
    return {};
}

PerfElem PerfElem::operator-() const {
    PerfElem r = *this;
    for (auto& t : r.terms_)
        t.coeff = cfg_->neg(t.coeff);
    return r;
}

PerfElem operator+(const PerfElem& a, const PerfElem& b) {
    const Config& cfg = pick_config(a, b);
    PerfElem r(cfg);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
        if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].exp < b.terms_[j].exp)) {
            r.terms_.push_back(a.terms_[i++]);
        } else if (i == a.terms_.size() || b.terms_[j].exp < a.terms_[i].exp) {
            r.terms_.push_back(b.terms_[j++]);
        } else {
            const FqElem c = cfg->add(a.terms_[i].coeff, b.terms_[j].coeff);
            if (!c.is_zero())
                r.terms_.push_back({a.terms_[i].exp, c});
            ++i;
            ++j;
        }
    }
    return r;
}

PerfElem operator-(const PerfElem& a, const PerfElem& b) { return a + (-b); }

PerfElem operator*(const PerfElem& a, const PerfElem& b) {
    const Config& cfg = pick_config(a, b);
    if (a.is_zero() || b.is_zero())
        return PerfElem(cfg);
    if (a.terms_.size() == 1 && a.terms_[0].exp.is_zero())
        return b.scale(a.terms_[0].coeff);
    if (b.terms_.size() == 1 && b.terms_[0].exp.is_zero())
        return a.scale(b.terms_[0].coeff);
    // Work over the common denominator p^K so exponent sums are plain integer adds.
    std::uint32_t K = 0;
    for (const auto& t : a.terms_)
        K = std::max(K, t.exp.log_denominator());
    for (const auto& t : b.terms_)
        K = std::max(K, t.exp.log_denominator());
    std::vector<std::int64_t> na, nb;
    na.reserve(a.terms_.size());
    nb.reserve(b.terms_.size());
    for (const auto& t : a.terms_)
        na.push_back(t.exp.scaled_numerator(K));
    for (const auto& t : b.terms_)
        nb.push_back(t.exp.scaled_numerator(K));
    std::vector<std::pair<std::int64_t, FqElem>> prod;
    prod.reserve(na.size() * nb.size());
    for (std::size_t i = 0; i < na.size(); ++i)
        for (std::size_t j = 0; j < nb.size(); ++j)
            prod.emplace_back(na[i] + nb[j], cfg->mul(a.terms_[i].coeff, b.terms_[j].coeff));
    std::sort(prod.begin(), prod.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    PerfElem r(cfg);
    const std::uint32_t p = cfg->p();
    for (std::size_t i = 0; i < prod.size();) {
        FqElem c = prod[i].second;
        std::size_t j = i + 1;
        for (; j < prod.size() && prod[j].first == prod[i].first; ++j)
            c = cfg->add(c, prod[j].second);
        if (!c.is_zero())
            r.terms_.push_back({Exponent(prod[i].first, K, p), c});
        i = j;
    }
    return r;
}

PerfElem PerfElem::scale(FqElem c) const {
    if (c.is_zero())
        return PerfElem(cfg_);
    PerfElem r = *this;
    for (auto& t : r.terms_)
        t.coeff = cfg_->mul(t.coeff, c);
    return r;
}

PerfElem PerfElem::shift(const Exponent& e) const {
    PerfElem r = *this;
    for (auto& t : r.terms_)
        t.exp = t.exp + e;
    return r;
}

// Write m in base p: a^m = prod frob^i(a)^{m_i}, each factor by binary powering.
PerfElem PerfElem::pow(std::uint64_t m) const {
    if (!cfg_)
        throw UsageError("pow of an unconfigured element");
    PerfElem result = one(cfg_);
    PerfElem base = *this;
    const std::uint32_t p = cfg_->p();
    while (m) {
        std::uint64_t digit = m % p;
        PerfElem acc = base, part = one(cfg_);
        while (digit) {
            if (digit & 1)
                part = part * acc;
            digit >>= 1;
            if (digit)
                acc = acc * acc;
        }
        result = result * part;
        m /= p;
        if (m)
            base = base.frobenius();
    }
    return result;
}

PerfElem PerfElem::frobenius() const {
    PerfElem r = *this;
    for (auto& t : r.terms_) {
        t.exp = t.exp.times_p();
        t.coeff = cfg_->frob(t.coeff);
    }
    return r;
}

PerfElem PerfElem::frobenius_inverse() const {
    PerfElem r = *this;
    for (auto& t : r.terms_) {
        t.exp = t.exp.div_p();
        t.coeff = cfg_->frob_inv(t.coeff);
    }
    return r;
}

PerfElem PerfElem::frobenius_pow(int k) const {
    PerfElem r = *this;
    for (; k > 0; --k)
        r = r.frobenius();
    for (; k < 0; ++k)
        r = r.frobenius_inverse();
    return r;
}

std::optional<Exponent> PerfElem::valuation() const {
    if (terms_.empty())
        return std::nullopt;
    return terms_.front().exp;
}

PerfElem PerfElem::truncate_below(const Exponent& gamma) const {
    PerfElem r(cfg_);
    for (const auto& t : terms_) {
        if (!(t.exp < gamma))
            break;
        r.terms_.push_back(t);
    }
    return r;
}

PerfElem PerfElem::rescale(const Exponent& q) const {
    if (!q.positive())
        throw DomainError("rescale factor must be positive");
    PerfElem r = *this;
    for (auto& t : r.terms_)
        t.exp = t.exp * q;
    return r;
}

bool operator==(const PerfElem& a, const PerfElem& b) {
    if (a.cfg_ && b.cfg_)
        require_same(a.cfg_, b.cfg_);
    return a.terms_ == b.terms_;
}

SplitResult split_mod_monomial(const PerfElem& x, FqElem a, const Exponent& gamma) {
    const Config& cfg = x.config();
    if (a.is_zero())
        throw DomainError("split_mod_monomial needs a nonzero unit a");
    if (!gamma.positive())
        throw DomainError("split_mod_monomial needs gamma > 0");
    std::vector<PerfTerm> low, high;
    const FqElem ainv = cfg->inv(a);
    for (const auto& t : x.terms()) {
        if (t.exp < gamma)
            low.push_back(t);
        else
            high.push_back({t.exp - gamma, cfg->mul(t.coeff, ainv)});
    }
    return {PerfElem(cfg, std::move(low)), PerfElem(cfg, std::move(high))};
}

std::string exponent_suffix(const Exponent& e) {
    if (e.is_integer()) {
        if (e.numerator() == 1)
            return "t";
        return "t^" + (e.negative() ? "(" + e.to_string() + ")" : e.to_string());
    }
    return "t^(" + e.to_string() + ")";
}

std::string PerfElem::to_string() const {
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty())
            out += " + ";
        std::string c = cfg_->format(t.coeff);
        if (t.exp.is_zero()) {
            out += cfg_->is_polynomial_term(t.coeff) ? "(" + c + ")" : c;
            continue;
        }
        if (t.coeff != cfg_->one())
            out += (cfg_->is_polynomial_term(t.coeff) ? "(" + c + ")" : c) + "*";
        out += exponent_suffix(t.exp);
    }
    return out;
}

// ---- parser -------------------------------------------------------------

namespace {

class PerfParser {
public:
    PerfParser(const Config& cfg, std::string_view s) : cfg_(cfg), s_(s) {}

    PerfElem run() {
        PerfElem v = expr();
        skip();
        if (pos_ != s_.size())
            throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
        return v;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::int64_t integer() {
        skip();
        const std::size_t start = pos_;
        std::int64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            if (v > 100000000000000LL)
                throw ParseError("integer literal too large", start);
            v = v * 10 + (s_[pos_++] - '0');
        }
        if (pos_ == start)
            throw ParseError("expected an integer", start);
        return v;
    }

    PerfElem expr() {
        PerfElem v = term();
        for (;;) {
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }
    PerfElem term() {
        PerfElem v = factor();
        while (eat('*'))
            v = v * factor();
        return v;
    }
    PerfElem factor() {
        if (eat('-'))
            return -factor();
        skip();
        const std::size_t at = pos_;
        if (pos_ < s_.size() && s_[pos_] == 't') {
            ++pos_;
            if (!eat('^'))
                return PerfElem::t(cfg_);
            return PerfElem::t_pow(cfg_, t_exponent());
        }
        PerfElem base = atom(at);
        if (eat('^')) {
            const std::int64_t e = integer();
            return base.pow(static_cast<std::uint64_t>(e));
        }
        return base;
    }
    Exponent t_exponent() {
        skip();
        if (!eat('('))
            return Exponent::integer(integer(), cfg_->p());
        const std::size_t at = pos_;
        const bool negative = eat('-');
        std::int64_t num = integer(), den = 1;
        if (eat('/'))
            den = integer();
        if (!eat(')'))
            throw ParseError("expected ')' in exponent", pos_);
        try {
            return Exponent::fraction(negative ? -num : num, den, cfg_->p());
        } catch (const DomainError& e) {
            throw ParseError(e.what(), at);
        }
    }
    PerfElem atom(std::size_t at) {
        if (pos_ < s_.size() && s_[pos_] == 'z') {
            ++pos_;
            return PerfElem::constant(cfg_, cfg_->generator());
        }
        if (eat('(')) {
            PerfElem v = expr();
            if (!eat(')'))
                throw ParseError("expected ')'", pos_);
            return v;
        }
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            return PerfElem::from_int(cfg_, integer() % cfg_->p());
        throw ParseError("expected a term", at);
    }

    const Config& cfg_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

PerfElem PerfElem::parse(const Config& cfg, std::string_view text) { return PerfParser(cfg, text).run(); }

}  // namespace tiltlab
