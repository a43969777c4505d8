#include "tiltlab/congruence.hpp"

#include "tiltlab/errors.hpp"
#include "tiltlab/evaluator.hpp"
#include "tiltlab/interpretation.hpp"
#include "tiltlab/untilt.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <random>

namespace tiltlab {

namespace {

using Mono = std::vector<std::uint32_t>;
using PolyMap = std::map<Mono, std::uint32_t>;

struct PolyArith {
    std::uint32_t p;
    std::size_t slots;

    PolyMap constant(std::int64_t c) const {
        PolyMap r;
        auto v = static_cast<std::uint32_t>(((c % p) + p) % p);
        if (v) r[Mono(slots, 0)] = v;
        return r;
    }
    PolyMap variable(std::size_t i) const {
        Mono m(slots, 0);
        m[i] = 1;
        return {{m, 1}};
    }
    PolyMap add(const PolyMap& a, const PolyMap& b, bool negate_b = false) const {
        PolyMap r = a;
        for (const auto& [m, c] : b) {
            std::uint32_t cb = negate_b ? (p - c) % p : c;
            std::uint32_t v = (r[m] + cb) % p;
            if (v) r[m] = v;
            else r.erase(m);
        }
        return r;
    }
    PolyMap neg(const PolyMap& a) const { return add(PolyMap{}, a, true); }
    PolyMap mul(const PolyMap& a, const PolyMap& b) const {
        PolyMap r;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) {
                Mono m(slots);
                for (std::size_t i = 0; i < slots; ++i) m[i] = ma[i] + mb[i];
                std::uint32_t v = static_cast<std::uint32_t>((r[m] + std::uint64_t(ca) * cb) % p);
                if (v) r[m] = v;
                else r.erase(m);
            }
        return r;
    }
    PolyMap pow(const PolyMap& a, std::uint64_t e) const {
        PolyMap r = constant(1);
        for (std::uint64_t i = 0; i < e; ++i) r = mul(r, a);
        return r;
    }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

void collect_idents(const std::string& s, std::vector<std::string>& out) {
    for (std::size_t i = 0; i < s.size();) {
        if (ident_start(s[i])) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            std::string id = s.substr(i, j - i);
            if (id != "T" && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
            i = j;
        } else {
            ++i;
        }
    }
}

class PolyParser {
public:
    PolyParser(const std::string& s, const PolyArith& ar, const std::vector<std::string>& vars)
        : s_(s), ar_(ar), vars_(vars) {}

    PolyMap parse() {
        PolyMap r = expr();
        skip();
        if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "' in polynomial", pos_);
        return r;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::uint64_t number() {
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            throw ParseError("expected a number", pos_);
        std::uint64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(s_[pos_] - '0');
            if (v > (1ULL << 40)) throw ParseError("number too large", pos_);
            ++pos_;
        }
        return v;
    }
    PolyMap expr() {
        PolyMap r = term();
        for (;;) {
            if (eat('+')) r = ar_.add(r, term());
            else if (eat('-')) r = ar_.add(r, term(), true);
            else return r;
        }
    }
    PolyMap term() {
        if (eat('-')) return ar_.neg(term());
        PolyMap r = factor();
        while (eat('*')) r = ar_.mul(r, factor());
        return r;
    }
    PolyMap factor() {
        PolyMap base = atom();
        if (eat('^')) return ar_.pow(base, number());
        return base;
    }
    PolyMap atom() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of polynomial", pos_);
        if (eat('(')) {
            PolyMap r = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(s_[pos_])))
            return ar_.constant(static_cast<std::int64_t>(number() % ar_.p));
        if (ident_start(s_[pos_])) {
            std::size_t j = pos_;
            while (j < s_.size() && ident_char(s_[j])) ++j;
            std::string id = s_.substr(pos_, j - pos_);
            pos_ = j;
            if (id == "T") return ar_.variable(ar_.slots - 1);
            auto it = std::find(vars_.begin(), vars_.end(), id);
            return ar_.variable(static_cast<std::size_t>(it - vars_.begin()));
        }
        throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "' in polynomial", pos_);
    }

    const std::string& s_;
    const PolyArith& ar_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

Poly to_poly(const PolyMap& m) {
    Poly r;
    for (const auto& [mono, c] : m) r.terms.emplace_back(mono, c);
    return r;
}

PerfElem mul_cut(const PerfElem& a, const PerfElem& b, const std::optional<Exponent>& gamma) {
    PerfElem r = a * b;
    return gamma ? r.truncate_below(*gamma) : r;
}

Term r_const(const std::string& c) { return make_app(c, "R"); }
Term r_add(Term a, Term b) { return make_app("+", "R", {std::move(a), std::move(b)}); }
Term r_mul(Term a, Term b) { return make_app("*", "R", {std::move(a), std::move(b)}); }

Term small_int(std::uint32_t c) {
    Term r = r_const("1");
    for (std::uint32_t i = 1; i < c; ++i) r = r_add(r, r_const("1"));
    return r;
}

bool nonneg(const PerfElem& x) {
    return std::all_of(x.terms().begin(), x.terms().end(), [](const PerfTerm& t) { return !t.exp.negative(); });
}

}  // namespace

// ---- PolySystem -----------------------------------------------------------------

PolySystem PolySystem::parse(const Config& cfg, const std::vector<std::string>& equations,
                             const std::vector<std::string>& inequations) {
    PolySystem s;
    s.cfg_ = cfg;
    for (const auto& e : equations) collect_idents(e, s.vars_);
    for (const auto& e : inequations) collect_idents(e, s.vars_);
    PolyArith ar{cfg->p(), s.vars_.size() + 1};
    auto run = [&](const std::string& text) {
        PolyParser parser(text, ar, s.vars_);
        Poly f = to_poly(parser.parse());
        for (const auto& [m, c] : f.terms)
            if (m.back() > 0) s.uses_t_ = true;
        return f;
    };
    for (const auto& e : equations) s.eqs_.push_back(run(e));
    for (const auto& e : inequations) s.neqs_.push_back(run(e));
    for (const auto& f : s.eqs_) s.eq_text_.push_back(s.to_string(f));
    for (const auto& f : s.neqs_) s.neq_text_.push_back(s.to_string(f));
    return s;
}

PerfElem PolySystem::evaluate(const Poly& f, const std::vector<PerfElem>& xs, const PerfElem& t_value,
                              const std::optional<Exponent>& gamma) const {
    if (xs.size() != vars_.size()) throw UsageError("expected " + std::to_string(vars_.size()) + " values");
    std::vector<std::vector<PerfElem>> powers(vars_.size() + 1);
    auto power = [&](std::size_t i, std::uint32_t e) -> const PerfElem& {
        auto& cache = powers[i];
        const PerfElem& base = i < xs.size() ? xs[i] : t_value;
        if (cache.empty()) cache.push_back(PerfElem::one(cfg_));
        while (cache.size() <= e) cache.push_back(mul_cut(cache.back(), base, gamma));
        return cache[e];
    };
    PerfElem sum = PerfElem::zero(cfg_);
    for (const auto& [mono, c] : f.terms) {
        PerfElem m = PerfElem::from_int(cfg_, c);
        for (std::size_t i = 0; i < mono.size(); ++i)
            if (mono[i] > 0) m = mul_cut(m, power(i, mono[i]), gamma);
        sum = sum + m;
    }
    return gamma ? sum.truncate_below(*gamma) : sum;
}

std::string PolySystem::to_string(const Poly& f) const {
    if (f.terms.empty()) return "0";
    std::string out;
    for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
        const auto& [mono, c] = *it;
        std::string m;
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (!mono[i]) continue;
            if (!m.empty()) m += "*";
            m += i < vars_.size() ? vars_[i] : std::string("T");
            if (mono[i] > 1) m += "^" + std::to_string(mono[i]);
        }
        std::string piece = m.empty() ? std::to_string(c) : (c == 1 ? m : std::to_string(c) + "*" + m);
        if (!out.empty()) out += " + ";
        out += piece;
    }
    return out;
}

std::string PolySystem::to_string() const {
    std::string out;
    auto sep = [&] {
        if (!out.empty()) out += ", ";
    };
    for (const auto& e : eq_text_) sep(), out += e + " = 0";
    for (const auto& e : neq_text_) sep(), out += e + " != 0";
    return out.empty() ? "(empty system)" : out;
}

Term PolySystem::to_term(const Poly& f, const std::vector<Term>& xs, const Term& t) const {
    if (f.terms.empty()) return r_const("0");
    Term sum;
    for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
        const auto& [mono, c] = *it;
        Term m;
        auto times = [&](Term factor) { m = m ? r_mul(m, std::move(factor)) : std::move(factor); };
        if (c != 1) times(small_int(c));
        for (std::size_t i = 0; i < mono.size(); ++i)
            for (std::uint32_t e = 0; e < mono[i]; ++e) times(i < xs.size() ? xs[i] : t);
        if (!m) m = r_const("1");
        sum = sum ? r_add(sum, m) : m;
    }
    return sum;
}

// ---- search ----------------------------------------------------------------------

std::string to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Witness: return "witness";
        case SearchStatus::NoWitnessWithinBounds: return "no-witness-within-bounds";
        case SearchStatus::CertifiedNo: return "certified-no";
        case SearchStatus::CandidateBudget: return "candidate-budget-exhausted";
    }
    return "?";
}

namespace {

nlohmann::json bounds_json(const SearchBounds& b) {
    return {{"K", b.K}, {"D", b.D}, {"S", b.S}, {"max_candidates", b.max_candidates}};
}

nlohmann::json witness_json(const PolySystem& sys, const std::vector<PerfElem>& w) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < w.size() && i < sys.variables().size(); ++i) j[sys.variables()[i]] = w[i].to_string();
    return j;
}

nlohmann::json result_json(const SearchResult& r, const PolySystem& sys, const SearchBounds& b) {
    nlohmann::json j;
    j["status"] = to_string(r.status);
    if (r.status == SearchStatus::Witness) j["witness"] = witness_json(sys, r.witness);
    j["bounds"] = bounds_json(b);
    j["checked_count"] = r.checked_count;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

// No point of the residue field satisfies the equations (T = 0 there): then
// no x in the valuation ring can satisfy them modulo any positive power of t.
bool no_residue_point(const PolySystem& sys) {
    if (sys.equations().empty()) return false;
    const Config& cfg = sys.config();
    std::size_t k = sys.variables().size();
    double space = std::pow(static_cast<double>(cfg->q()), static_cast<double>(k));
    if (space > 1e6) return false;
    std::vector<std::uint32_t> codes(k, 0);
    PerfElem zero = PerfElem::zero(cfg);
    for (;;) {
        std::vector<PerfElem> xs;
        for (auto c : codes) xs.push_back(PerfElem::constant(cfg, FqElem{c}));
        bool all = true;
        for (const auto& f : sys.equations())
            if (!sys.evaluate(f, xs, zero).is_zero()) {
                all = false;
                break;
            }
        if (all) return false;
        std::size_t i = 0;
        while (i < k && ++codes[i] == cfg->q()) codes[i++] = 0;
        if (i == k) return true;
    }
}

struct Space {
    Exponent cap;            // largest allowed exponent (inclusive unless `below`)
    bool below = false;      // cap is exclusive
};

class Enumerator {
public:
    using Test = std::function<bool(const std::vector<PerfElem>&)>;

    Enumerator(const PolySystem& sys, const SearchBounds& b, Space space, Test test)
        : sys_(sys), cfg_(sys.config()), b_(b), space_(space), test_(std::move(test)), k_(sys.variables().size()) {}

    SearchResult run() {
        SearchResult r;
        for (unsigned s = 0; s <= b_.S && !done_; ++s) {
            if (k_ == 0 && s > 0) break;
            for (unsigned level = 0; level <= b_.K && !done_; ++level) {
                if (s == 0 && level > 0) break;
                level_ = level;
                grid_.clear();
                std::uint32_t p = cfg_->p();
                for (std::int64_t j = 0;; ++j) {
                    Exponent e(j, level, p);
                    if (space_.below ? !(e < space_.cap) : space_.cap < e) break;
                    grid_.push_back(e);
                }
                std::vector<unsigned> parts(k_, 0);
                compositions(0, s, parts);
            }
        }
        r.checked_count = checked_;
        if (found_) {
            r.status = SearchStatus::Witness;
            r.witness = *found_;
        } else if (capped_) {
            r.status = SearchStatus::CandidateBudget;
            r.note = "stopped after " + std::to_string(checked_) + " candidates";
        } else {
            r.status = SearchStatus::NoWitnessWithinBounds;
        }
        return r;
    }

private:
    void compositions(std::size_t i, unsigned left, std::vector<unsigned>& parts) {
        if (done_) return;
        if (k_ == 0) {
            if (left == 0) leaf_check({});
            return;
        }
        if (i + 1 == k_) {
            parts[i] = left;
            chosen_.assign(k_, {});
            fill(0, 0, parts, 0);
            return;
        }
        for (unsigned a = 0; a <= left && !done_; ++a) {
            parts[i] = a;
            compositions(i + 1, left - a, parts);
        }
    }

    // Variable v, next grid index `from`, count of exponents at exactly this level.
    void fill(std::size_t v, std::size_t from, const std::vector<unsigned>& parts, unsigned exact) {
        if (done_) return;
        if (v == k_) {
            if (level_ > 0 && exact == 0) return;
            std::vector<PerfElem> xs;
            xs.reserve(k_);
            for (const auto& terms : chosen_) xs.emplace_back(cfg_, terms);
            leaf_check(xs);
            return;
        }
        auto& terms = chosen_[v];
        if (terms.size() == parts[v]) {
            fill(v + 1, 0, parts, exact);
            return;
        }
        std::size_t need = parts[v] - terms.size();
        for (std::size_t g = from; g + need <= grid_.size() && !done_; ++g) {
            unsigned ex = exact + (grid_[g].log_denominator() == level_ ? 1 : 0);
            for (std::uint32_t c = 1; c < cfg_->q() && !done_; ++c) {
                terms.push_back({grid_[g], FqElem{c}});
                fill(v, g + 1, parts, ex);
                terms.pop_back();
            }
        }
    }

    void leaf_check(const std::vector<PerfElem>& xs) {
        if (checked_ >= b_.max_candidates) {
            capped_ = done_ = true;
            return;
        }
        ++checked_;
        if (test_(xs)) {
            found_ = xs;
            done_ = true;
        }
    }

    const PolySystem& sys_;
    Config cfg_;
    SearchBounds b_;
    Space space_;
    Test test_;
    std::size_t k_;
    unsigned level_ = 0;
    std::vector<Exponent> grid_;
    std::vector<std::vector<PerfTerm>> chosen_;
    std::uint64_t checked_ = 0;
    bool capped_ = false, done_ = false;
    std::optional<std::vector<PerfElem>> found_;
};

bool residue_holds(const PolySystem& sys, const Exponent& gamma, const PerfElem& t_value,
                   const std::vector<PerfElem>& xs) {
    for (const auto& f : sys.equations())
        if (!sys.evaluate(f, xs, t_value, gamma).is_zero()) return false;
    for (const auto& g : sys.inequations())
        if (sys.evaluate(g, xs, t_value, gamma).is_zero()) return false;
    return true;
}

// v(a) > v(b) with v(0) = infinity
bool val_greater(const std::optional<Exponent>& a, const std::optional<Exponent>& b) {
    if (!b) return false;
    if (!a) return true;
    return *b < *a;
}

bool valuation_holds_values(const std::vector<std::optional<Exponent>>& vf,
                            const std::vector<std::optional<Exponent>>& vg, std::uint32_t p) {
    // Missing equations behave as f = 0, missing inequations as g = 1.
    std::vector<std::optional<Exponent>> fs = vf, gs = vg;
    if (fs.empty()) fs.push_back(std::nullopt);
    if (gs.empty()) gs.push_back(Exponent::integer(0, p));
    for (const auto& a : fs)
        for (const auto& b : gs)
            if (!val_greater(a, b)) return false;
    return true;
}

bool valuation_holds(const PolySystem& sys, const std::vector<PerfElem>& xs) {
    PerfElem t = PerfElem::t(sys.config());
    std::vector<std::optional<Exponent>> vf, vg;
    for (const auto& f : sys.equations()) vf.push_back(sys.evaluate(f, xs, t).valuation());
    for (const auto& g : sys.inequations()) vg.push_back(sys.evaluate(g, xs, t).valuation());
    return valuation_holds_values(vf, vg, sys.config()->p());
}

Exponent default_cap(const SearchBounds& b, const Exponent& gamma, std::uint32_t p) {
    if (b.D > 0) return Exponent(b.D, b.K, p);
    return gamma;
}

SearchResult residue_search(const PolySystem& sys, const Exponent& gamma, const PerfElem& t_value,
                            const SearchBounds& b) {
    if (!gamma.positive()) throw UsageError("gamma must be positive");
    if (no_residue_point(sys)) {
        SearchResult r;
        r.status = SearchStatus::CertifiedNo;
        r.note = "the equations have no point over the residue field";
        return r;
    }
    Space space;
    std::uint32_t p = sys.config()->p();
    Exponent cap = default_cap(b, gamma, p);
    if (cap < gamma) {
        space.cap = cap;
    } else {
        space.cap = gamma;
        space.below = true;
    }
    Enumerator en(sys, b, space, [&](const std::vector<PerfElem>& xs) { return residue_holds(sys, gamma, t_value, xs); });
    return en.run();
}

// f(x) with x, T as formula variables over the tilt.
struct TiltEnv {
    TiltModel model;
    Assignment env;
    std::vector<Term> xs;
    Term t;
};

TiltEnv tilt_env(const PolySystem& sys, const std::vector<PerfElem>& xs, const PerfElem& t_value) {
    TiltEnv e{TiltModel(sys.config(), tilt_signature()), {}, {}, nullptr};
    NameSupply names;
    for (const auto& v : sys.variables()) names.reserve(v);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        e.env[sys.variables()[i]] = xs[i];
        e.xs.push_back(make_var(sys.variables()[i], "R"));
    }
    std::string tn = names.fresh("tv");
    e.env[tn] = t_value;
    e.t = make_var(tn, "R");
    return e;
}

// f = t^gamma * u with u in O, u a fresh variable bound to f / t^gamma
Formula divisible(TiltEnv& e, const Term& f, const Exponent& gamma, const std::string& uname) {
    PerfElem fv = std::get<PerfElem>(eval_term(e.model, f, e.env));
    e.env[uname] = fv.shift(-gamma);
    Term u = make_var(uname, "R");
    Term tg = make_literal(PerfElem::t_pow(fv.config(), gamma).to_string(), "R");
    return f_and({f_eq(f, r_mul(tg, u)), f_rel("O", {u})});
}

// The congruences as a quantifier-free formula checked by eval_qf.
bool eval_qf_residue(const PolySystem& sys, const Exponent& gamma, const PerfElem& t_value,
                     const std::vector<PerfElem>& xs) {
    TiltEnv e = tilt_env(sys, xs, t_value);
    std::vector<Formula> parts;
    for (const auto& x : e.xs) parts.push_back(f_rel("O", {x}));
    unsigned idx = 0;
    for (const auto& f : sys.equations())
        parts.push_back(divisible(e, sys.to_term(f, e.xs, e.t), gamma, "u#" + std::to_string(idx++)));
    for (const auto& g : sys.inequations())
        parts.push_back(f_not(divisible(e, sys.to_term(g, e.xs, e.t), gamma, "u#" + std::to_string(idx++))));
    return eval_qf(e.model, f_and(parts), e.env);
}

// Digit arithmetic in O_K/(p) for the two untilts whose c_0 is t or t^{p-1}.
std::optional<bool> digits_residue(const PolySystem& sys, const Exponent& gamma, const std::vector<PerfElem>& xs) {
    const Config& cfg = sys.config();
    Untilt u;
    if (gamma == Exponent::integer(1, cfg->p())) u = UntiltSpec::p_power_roots(cfg);
    else if (cfg->p() > 2 && gamma == Exponent::integer(cfg->p() - 1, cfg->p()))
        u = cfg->d() == 1 ? UntiltSpec::cyclotomic(cfg) : UntiltSpec::abelian(cfg);
    else return std::nullopt;
    ResidueModel model(u, 1);
    Assignment env;
    std::vector<Term> vars;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        env[sys.variables()[i]] = sharp(xs[i], u, 1);
        vars.push_back(make_var(sys.variables()[i], "R"));
    }
    NameSupply names;
    for (const auto& v : sys.variables()) names.reserve(v);
    std::string tn = names.fresh("tv");
    env[tn] = sharp(PerfElem::t(cfg), u, 1);
    Term t = make_var(tn, "R");
    std::vector<Formula> parts;
    for (const auto& f : sys.equations()) parts.push_back(f_eq(sys.to_term(f, vars, t), r_const("0")));
    for (const auto& g : sys.inequations()) parts.push_back(f_not(f_eq(sys.to_term(g, vars, t), r_const("0"))));
    return eval_qf(model, f_and(parts), env);
}

}  // namespace

std::string SearchResult::to_json(const PolySystem& sys, const SearchBounds& b) const {
    return result_json(*this, sys, b).dump(2);
}

bool verify_residue(const PolySystem& sys, const Exponent& gamma, const std::vector<PerfElem>& xs) {
    if (xs.size() != sys.variables().size()) return false;
    if (!std::all_of(xs.begin(), xs.end(), nonneg)) return false;
    PerfElem t = PerfElem::t(sys.config());
    if (!eval_qf_residue(sys, gamma, t, xs)) return false;
    auto d = digits_residue(sys, gamma, xs);
    return !d || *d;
}

bool verify_valuation(const PolySystem& sys, const std::vector<PerfElem>& xs) {
    if (xs.size() != sys.variables().size()) return false;
    if (!std::all_of(xs.begin(), xs.end(), nonneg)) return false;
    TiltEnv e = tilt_env(sys, xs, PerfElem::t(sys.config()));
    std::vector<std::optional<Exponent>> vf, vg;
    for (const auto& f : sys.equations())
        vf.push_back(std::get<PerfElem>(eval_term(e.model, sys.to_term(f, e.xs, e.t), e.env)).valuation());
    for (const auto& g : sys.inequations())
        vg.push_back(std::get<PerfElem>(eval_term(e.model, sys.to_term(g, e.xs, e.t), e.env)).valuation());
    return valuation_holds_values(vf, vg, sys.config()->p());
}

SearchResult solve_residue(const PolySystem& sys, const Exponent& gamma, const SearchBounds& b) {
    SearchResult r = residue_search(sys, gamma, PerfElem::t(sys.config()), b);
    if (r.status == SearchStatus::Witness && !verify_residue(sys, gamma, r.witness))
        throw InternalError("residue witness failed verification");
    return r;
}

SearchResult solve_valuation(const PolySystem& sys, const SearchBounds& b, const Exponent* gamma) {
    std::uint32_t p = sys.config()->p();
    if (no_residue_point(sys)) {
        SearchResult r;
        r.status = SearchStatus::CertifiedNo;
        r.note = "the equations have no point over the residue field";
        return r;
    }
    Space space;
    space.cap = default_cap(b, gamma ? *gamma : Exponent::integer(1, p), p);
    Enumerator en(sys, b, space, [&](const std::vector<PerfElem>& xs) { return valuation_holds(sys, xs); });
    SearchResult r = en.run();
    if (r.status == SearchStatus::Witness && !verify_valuation(sys, r.witness))
        throw InternalError("valuation witness failed verification");
    return r;
}

Exponent choose_scale(const Exponent& gamma, const std::optional<Exponent>& lo, const std::optional<Exponent>& hi) {
    std::uint32_t p = gamma.prime();
    Exponent low = lo ? *lo : Exponent::integer(0, p);
    if (hi && !(low < *hi)) throw DomainError("empty interval");
    for (std::uint32_t k = 0; k <= 20; ++k) {
        std::int64_t P = checked_pow(p, k);
        std::int64_t j = 1;
        if (hi) {
            double est = gamma.to_double() / hi->to_double() * static_cast<double>(P);
            j = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(est)) - 2);
            while (!(gamma < Exponent(j, k, p) * *hi)) ++j;
        }
        Exponent q(j, k, p);
        if (low.is_zero() || q * low < gamma) return q;
    }
    throw InternalError("no scale found");
}

TransferReport transfer_check(const PolySystem& sys, const Exponent& gamma, const SearchBounds& b) {
    std::uint32_t p = sys.config()->p();
    if (!(gamma == Exponent::integer(1, p) || gamma == Exponent::integer(p - 1, p)))
        throw UsageError("transfer_check needs gamma = 1 or p - 1");
    TransferReport rep;
    rep.residue = solve_residue(sys, gamma, b);
    rep.valuation = solve_valuation(sys, b, &gamma);
    bool disagree = false;
    if (rep.residue.status == SearchStatus::Witness) {
        rep.residue_to_valuation = rep.residue.witness;
        rep.residue_to_valuation_ok = verify_valuation(sys, rep.residue.witness);
        disagree |= !rep.residue_to_valuation_ok;
    }
    if (rep.valuation.status == SearchStatus::Witness) {
        const auto& w = rep.valuation.witness;
        PerfElem t = PerfElem::t(sys.config());
        Exponent g1 = Exponent::integer(0, p);
        for (const auto& g : sys.inequations()) {
            auto v = sys.evaluate(g, w, t).valuation();
            if (v && g1 < *v) g1 = *v;
        }
        std::optional<Exponent> g2;
        for (const auto& f : sys.equations()) {
            auto v = sys.evaluate(f, w, t).valuation();
            if (v && (!g2 || *v < *g2)) g2 = v;
        }
        rep.scale = choose_scale(gamma, g1, g2);
        std::vector<PerfElem> a;
        for (const auto& x : w) a.push_back(x.rescale(*rep.scale).truncate_below(gamma));
        rep.valuation_to_residue = a;
        rep.valuation_to_residue_ok = verify_residue(sys, gamma, a);
        disagree |= !rep.valuation_to_residue_ok;
    }
    bool rw = rep.residue.status == SearchStatus::Witness, vw = rep.valuation.status == SearchStatus::Witness;
    if ((rw && rep.valuation.status == SearchStatus::CertifiedNo) ||
        (vw && rep.residue.status == SearchStatus::CertifiedNo))
        disagree = true;
    if (disagree) rep.verdict = "disagree";
    else if (rw || vw) rep.verdict = "agree";
    else if (rep.residue.status == SearchStatus::CertifiedNo && rep.valuation.status == SearchStatus::CertifiedNo)
        rep.verdict = "agree";
    else rep.verdict = "inconclusive";
    return rep;
}

std::string TransferReport::to_json(const PolySystem& sys, const Exponent& gamma, const SearchBounds& b) const {
    nlohmann::json j;
    j["system"] = sys.to_string();
    j["gamma"] = gamma.to_string();
    j["residue"] = result_json(residue, sys, b);
    j["valuation"] = result_json(valuation, sys, b);
    if (residue_to_valuation) {
        j["residue_to_valuation"] = {{"witness", witness_json(sys, *residue_to_valuation)},
                                     {"verified", residue_to_valuation_ok}};
    }
    if (valuation_to_residue) {
        j["valuation_to_residue"] = {{"scale", scale->to_string()},
                                     {"witness", witness_json(sys, *valuation_to_residue)},
                                     {"verified", valuation_to_residue_ok}};
    }
    j["verdict"] = verdict;
    return j.dump(2);
}

// ---- mod t^{p^N} ------------------------------------------------------------------

SearchResult solve_mod_tN(const PolySystem& sys, unsigned N, const SearchBounds& b) {
    const Config& cfg = sys.config();
    std::uint32_t p = cfg->p();
    Exponent one = Exponent::integer(1, p);
    SearchBounds inner = b;
    inner.K = b.K + N;  // a = x^{1/p^N} lives on the finer grid
    SearchResult r = residue_search(sys, one, PerfElem::t_pow(cfg, Exponent(1, N, p)), inner);
    if (r.status != SearchStatus::Witness) return r;
    for (auto& x : r.witness) x = x.frobenius_pow(static_cast<int>(N));
    if (!verify_mod_tN(sys, N, r.witness)) throw InternalError("mapped-back solution failed verification");
    return r;
}

bool verify_mod_tN(const PolySystem& sys, unsigned N, const std::vector<PerfElem>& xs) {
    if (xs.size() != sys.variables().size()) return false;
    if (!std::all_of(xs.begin(), xs.end(), nonneg)) return false;
    std::uint32_t p = sys.config()->p();
    return eval_qf_residue(sys, Exponent(checked_pow(p, N), 0, p), PerfElem::t(sys.config()), xs);
}

Formula lift_to_forall_exists(const PolySystem& sys) {
    NameSupply names;
    for (const auto& v : sys.variables()) names.reserve(v);
    Var y{names.fresh("y"), "R"};
    std::vector<Var> xs;
    std::vector<Term> xt;
    for (const auto& v : sys.variables()) {
        xs.push_back({v, "R"});
        xt.push_back(make_var(v, "R"));
    }
    std::vector<Formula> eqs;
    for (const auto& f : sys.equations()) eqs.push_back(f_eq(sys.to_term(f, xt, make_var(y)), r_const("0")));
    Formula body = f_and(eqs);
    if (!xs.empty()) body = f_exists(xs, body);
    return f_forall(y, f_implies(f_rel("m", {make_var(y)}), body));
}

// ---- corpus -----------------------------------------------------------------------

std::vector<TransferInstance> transfer_corpus() {
    std::mt19937 rng(20240611u);
    auto pick = [&](std::uint32_t m) { return static_cast<std::uint32_t>(rng() % m); };
    std::vector<TransferInstance> out;
    for (int i = 0; i < 30; ++i) {
        std::uint32_t p = (i % 2 == 0) ? 2 : 3;
        std::uint32_t gamma = (p == 3 && i % 4 == 1) ? 2 : 1;
        unsigned nv = 1 + pick(2);
        std::vector<std::string> names = nv == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
        // monomials of total degree <= 2
        std::vector<std::pair<std::string, unsigned>> monos = {{"1", 0}};
        for (const auto& a : names) monos.push_back({a, 1});
        for (std::size_t a = 0; a < names.size(); ++a)
            for (std::size_t c = a; c < names.size(); ++c)
                monos.push_back({a == c ? names[a] + "^2" : names[a] + "*" + names[c], 2});
        auto random_poly = [&](bool allow_constant) {
            for (;;) {
                std::string s;
                bool nonconst = false;
                for (const auto& [m, deg] : monos) {
                    if (pick(2) == 0) continue;
                    std::uint32_t c = 1 + pick(p - 1);
                    if (!s.empty()) s += " + ";
                    s += (m == "1") ? std::to_string(c) : (c == 1 ? m : std::to_string(c) + "*" + m);
                    if (deg > 0) nonconst = true;
                }
                if (!s.empty() && (nonconst || allow_constant)) return s;
            }
        };
        TransferInstance inst;
        inst.name = "random-" + std::to_string(i);
        inst.p = p;
        inst.gamma = Exponent::integer(gamma, p);
        unsigned ne = 1 + pick(2), ng = pick(2);
        for (unsigned e = 0; e < ne; ++e) inst.equations.push_back(random_poly(false));
        for (unsigned g = 0; g < ng; ++g) inst.inequations.push_back(random_poly(true));
        out.push_back(inst);
    }
    out.push_back({"idempotent-p2", 2, Exponent::integer(1, 2), {"x^2 - x"}, {"x"}});
    out.push_back({"idempotent-p3-gamma2", 3, Exponent::integer(2, 3), {"x^2 - x"}, {"x - 1"}});
    return out;
}

}  // namespace tiltlab
