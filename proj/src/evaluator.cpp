#include "tiltlab/evaluator.hpp"

#include "tiltlab/errors.hpp"
#include "tiltlab/interpretation.hpp"

#include <cstdlib>
#include <unordered_map>

namespace tiltlab {

using K = FormulaNode::Kind;

// ---- finite structures --------------------------------------------------------------

const FiniteStructure::FunctionTable& FiniteStructure::function(const std::string& name,
                                                                const std::vector<std::string>& arg_sorts) const {
    for (const auto& f : functions)
        if (f.name == name && f.args == arg_sorts)
            return f;
    throw DomainError("structure has no function " + name);
}

const FiniteStructure::RelationTable& FiniteStructure::relation(const std::string& name) const {
    for (const auto& r : relations)
        if (r.name == name)
            return r;
    throw DomainError("structure has no relation " + name);
}

std::uint32_t FiniteStructure::apply(const std::string& name, const std::vector<std::string>& arg_sorts,
                                     const std::vector<std::uint32_t>& args) const {
    const auto& f = function(name, arg_sorts);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < args.size(); ++i)
        idx = idx * sizes.at(arg_sorts[i]) + args[i];
    return f.table.at(idx);
}

namespace {

FiniteStructure::FunctionTable binary_table(const std::string& name, const std::string& sort, std::uint32_t n,
                                            const std::function<std::uint32_t(std::uint32_t, std::uint32_t)>& op) {
    FiniteStructure::FunctionTable t{name, {sort, sort}, sort, {}};
    t.table.resize(static_cast<std::size_t>(n) * n);
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
            t.table[static_cast<std::size_t>(a) * n + b] = op(a, b);
    return t;
}

void add_fq_sort(FiniteStructure& m, const Config& cfg, const std::string& sort) {
    const std::uint32_t q = static_cast<std::uint32_t>(cfg->q());
    m.sizes[sort] = q;
    m.functions.push_back(binary_table("+", sort, q, [&](std::uint32_t a, std::uint32_t b) {
        return cfg->add(FqElem{a}, FqElem{b}).code;
    }));
    m.functions.push_back(binary_table("*", sort, q, [&](std::uint32_t a, std::uint32_t b) {
        return cfg->mul(FqElem{a}, FqElem{b}).code;
    }));
    m.functions.push_back({"0", {}, sort, {cfg->zero().code}});
    m.functions.push_back({"1", {}, sort, {cfg->one().code}});
    std::vector<std::string> labels;
    for (std::uint32_t a = 0; a < q; ++a)
        labels.push_back(cfg->format(FqElem{a}));
    m.labels[sort] = labels;
}

}  // namespace

FiniteStructure build_fq_structure(const Config& cfg, const Signature& sig) {
    if (sig.sorts.size() != 1)
        throw UsageError("build_fq_structure expects a one-sorted signature");
    if (cfg->q() > 4096)
        throw BudgetExceeded("field too large for operation tables");
    FiniteStructure m;
    m.sig = sig;
    const std::string& s = sig.sorts[0];
    add_fq_sort(m, cfg, s);
    const std::uint32_t q = m.sizes[s];
    for (const auto& r : sig.relations) {
        if (r.args.size() != 1)
            throw DomainError("F_q structure: unsupported relation " + r.name);
        FiniteStructure::RelationTable t{r.name, r.args, std::vector<char>(q, 0)};
        for (std::uint32_t a = 0; a < q; ++a) {
            if (r.name == "O")
                t.table[a] = 1;  // trivial valuation
            else if (r.name == "m")
                t.table[a] = a == cfg->zero().code;
            else
                throw DomainError("F_q structure: unsupported relation " + r.name);
        }
        m.relations.push_back(std::move(t));
    }
    return m;
}

FiniteStructure build_fq_structure(const Config& cfg) { return build_fq_structure(cfg, signatures::ring()); }

std::uint32_t wn_index(const WittVec& x) {
    const auto& cfg = x.config();
    std::uint64_t idx = 0, scale = 1;
    for (const auto& c : x.coords()) {
        if (!c.is_constant())
            throw DomainError("wn_index: coordinate is not a constant");
        idx += c.coefficient(Exponent::integer(0, cfg->p())).code * scale;
        scale *= cfg->q();
    }
    return static_cast<std::uint32_t>(idx);
}

FiniteStructure build_wn_structure(const Config& cfg, unsigned n) {
    if (n < 1)
        throw UsageError("build_wn_structure needs n >= 1");
    const std::uint64_t q = cfg->q();
    std::uint64_t size = 1;
    for (unsigned i = 0; i < n; ++i)
        size *= q;
    if (size > 4096)
        throw BudgetExceeded("W_n(F_q) with " + std::to_string(size) + " elements is too large for tables");

    FiniteStructure m;
    m.sig = signatures::witt_pair(signatures::ring());
    const std::uint32_t N = static_cast<std::uint32_t>(size);
    m.sizes["W"] = N;

    // Tables come from the expansion form: W_n(F_q) = (Z/p^n)[z]/(f~).
    const auto ring = WittScalars::get(cfg, n);
    std::vector<WittScalars::Elem> scalar(N);
    std::map<WittScalars::Elem, std::uint32_t> index;
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < N; ++i) {
        std::vector<PerfElem> coords;
        std::uint64_t r = i;
        for (unsigned k = 0; k < n; ++k) {
            coords.push_back(PerfElem::constant(cfg, FqElem{static_cast<std::uint32_t>(r % q)}));
            r /= q;
        }
        const WittVec w = WittVec::from_coords(WittBase::Fq, coords);
        scalar[i] = w.expansion().terms().empty() ? ring->zero() : w.expansion().terms()[0].coeff;
        if (!index.emplace(scalar[i], i).second)
            throw InternalError("Witt coordinates are not injective");
        labels.push_back(w.to_string());
    }
    auto lookup = [&](const WittScalars::Elem& e) {
        auto it = index.find(e);
        if (it == index.end())
            throw InternalError("Witt table lookup failed");
        return it->second;
    };
    m.functions.push_back(binary_table("+", "W", N, [&](std::uint32_t a, std::uint32_t b) {
        return lookup(ring->add(scalar[a], scalar[b]));
    }));
    m.functions.push_back(binary_table("*", "W", N, [&](std::uint32_t a, std::uint32_t b) {
        return lookup(ring->mul(scalar[a], scalar[b]));
    }));
    m.functions.push_back({"0", {}, "W", {lookup(ring->zero())}});
    m.functions.push_back({"1", {}, "W", {lookup(ring->from_int(1))}});
    m.labels["W"] = labels;

    add_fq_sort(m, cfg, "R");
    FiniteStructure::FunctionTable teich{"[]", {"R"}, "W", {}};
    for (std::uint32_t a = 0; a < q; ++a)
        teich.table.push_back(lookup(ring->teich(FqElem{a})));
    m.functions.push_back(std::move(teich));
    return m;
}

std::uint64_t default_budget() {
    if (const char* env = std::getenv("TILTLAB_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            return v;
        throw ConfigError(std::string("TILTLAB_BUDGET is not a positive integer: ") + env);
    }
    return 10'000'000;
}

// ---- one-point rule ---------------------------------------------------------------------

namespace {

bool mentions(const Term& t, const std::string& v, const std::set<std::string>& blocked) {
    if (t->kind == TermNode::Kind::Var)
        return t->name == v || blocked.count(t->name);
    for (const auto& a : t->args)
        if (mentions(a, v, blocked))
            return true;
    return false;
}

std::optional<Term> definition_in_atom(const Formula& f, const std::string& v, const std::set<std::string>& blocked) {
    if (f->kind != K::Eq)
        return std::nullopt;
    for (int side = 0; side < 2; ++side) {
        const Term& a = f->terms[side];
        const Term& b = f->terms[1 - side];
        if (a->kind == TermNode::Kind::Var && a->name == v && !mentions(b, v, blocked))
            return b;
    }
    return std::nullopt;
}

// A term t with (v = t) forced by every model of `f`, free of variables bound inside f.
std::optional<Term> positive_definition(const Formula& f, const std::string& v, std::set<std::string>& blocked) {
    switch (f->kind) {
    case K::Eq:
        return definition_in_atom(f, v, blocked);
    case K::And:
        for (const auto& s : f->subs)
            if (auto t = positive_definition(s, v, blocked))
                return t;
        return std::nullopt;
    case K::Exists: {
        if (f->name == v)
            return std::nullopt;
        const bool added = blocked.insert(f->name).second;
        auto t = positive_definition(f->subs[0], v, blocked);
        if (added)
            blocked.erase(f->name);
        return t;
    }
    default:
        return std::nullopt;
    }
}

// For A v (body): a term t such that body holds trivially unless v = t.
std::optional<Term> guard_definition(const Formula& f, const std::string& v, std::set<std::string>& blocked) {
    switch (f->kind) {
    case K::Forall: {
        if (f->name == v)
            return std::nullopt;
        const bool added = blocked.insert(f->name).second;
        auto t = guard_definition(f->subs[0], v, blocked);
        if (added)
            blocked.erase(f->name);
        return t;
    }
    case K::Implies:
        // A -> (A w (C -> D)) is A w (A & C -> D) when w is not free in A
        if (auto t = positive_definition(f->subs[0], v, blocked))
            return t;
        return guard_definition(f->subs[1], v, blocked);
    default:
        return std::nullopt;
    }
}

// ---- compiled finite evaluation -------------------------------------------------------------------

struct CTerm {
    enum class Kind { Slot, Const, App } kind;
    std::uint32_t slot = 0;
    std::uint32_t value = 0;
    const FiniteStructure::FunctionTable* fn = nullptr;
    std::vector<std::uint32_t> radix;
    std::vector<CTerm> args;
};

struct CNode {
    K kind;
    CTerm a, b;
    const FiniteStructure::RelationTable* rel = nullptr;
    std::vector<CTerm> rel_args;
    std::vector<std::uint32_t> rel_radix;
    std::vector<CNode> subs;
    std::uint32_t slot = 0;
    std::uint32_t domain = 0;
    std::optional<CTerm> def;
};

class Compiler {
public:
    explicit Compiler(const FiniteStructure& m) : m_(m) {}

    std::vector<std::pair<std::string, std::uint32_t>> scope;
    std::uint32_t max_slot = 0;

    std::uint32_t push(const std::string& name) {
        const auto slot = static_cast<std::uint32_t>(scope.size());
        scope.emplace_back(name, slot);
        max_slot = std::max(max_slot, slot + 1);
        return slot;
    }

    CTerm term(const Term& t) {
        CTerm c;
        switch (t->kind) {
        case TermNode::Kind::Var:
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == t->name) {
                    c.kind = CTerm::Kind::Slot;
                    c.slot = it->second;
                    return c;
                }
            throw UsageError("unbound variable " + t->name);
        case TermNode::Kind::Literal:
            throw DomainError("finite structures have no {...} constants");
        case TermNode::Kind::App:
            break;
        }
        std::vector<std::string> sorts;
        for (const auto& a : t->args)
            sorts.push_back(a->sort);
        const auto& fn = m_.function(t->name, sorts);
        if (t->args.empty()) {
            c.kind = CTerm::Kind::Const;
            c.value = fn.table.at(0);
            return c;
        }
        c.kind = CTerm::Kind::App;
        c.fn = &fn;
        for (const auto& a : t->args) {
            c.args.push_back(term(a));
            c.radix.push_back(m_.sizes.at(a->sort));
        }
        return c;
    }

    CNode node(const Formula& f) {
        CNode n;
        n.kind = f->kind;
        switch (f->kind) {
        case K::True:
        case K::False:
            return n;
        case K::Eq:
            n.a = term(f->terms[0]);
            n.b = term(f->terms[1]);
            return n;
        case K::Rel: {
            n.rel = &m_.relation(f->name);
            for (const auto& t : f->terms) {
                n.rel_args.push_back(term(t));
                n.rel_radix.push_back(m_.sizes.at(t->sort));
            }
            return n;
        }
        case K::Not:
        case K::And:
        case K::Or:
        case K::Implies:
            for (const auto& s : f->subs)
                n.subs.push_back(node(s));
            return n;
        case K::Forall:
        case K::Exists: {
            auto it = m_.sizes.find(f->sort);
            if (it == m_.sizes.end())
                throw DomainError("structure has no sort " + f->sort);
            n.domain = it->second;
            std::set<std::string> blocked;
            auto def = f->kind == K::Exists ? positive_definition(f->subs[0], f->name, blocked)
                                            : guard_definition(f->subs[0], f->name, blocked);
            if (def)
                n.def = term(*def);  // compiled in the outer scope
            n.slot = push(f->name);
            n.subs.push_back(node(f->subs[0]));
            scope.pop_back();
            return n;
        }
        }
        throw InternalError("unhandled formula kind");
    }

private:
    const FiniteStructure& m_;
};

struct Runner {
    std::vector<std::uint32_t> env;
    std::uint64_t budget;
    std::uint64_t count = 0;

    std::uint32_t term(const CTerm& t) {
        switch (t.kind) {
        case CTerm::Kind::Slot:
            return env[t.slot];
        case CTerm::Kind::Const:
            return t.value;
        case CTerm::Kind::App: {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < t.args.size(); ++i)
                idx = idx * t.radix[i] + term(t.args[i]);
            return t.fn->table[idx];
        }
        }
        return 0;
    }

    void tick() {
        if (++count > budget)
            throw BudgetExceeded("evaluation exceeded the budget of " + std::to_string(budget) + " assignments");
    }

    bool run(const CNode& n) {
        switch (n.kind) {
        case K::True:
            return true;
        case K::False:
            return false;
        case K::Eq:
            return term(n.a) == term(n.b);
        case K::Rel: {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < n.rel_args.size(); ++i)
                idx = idx * n.rel_radix[i] + term(n.rel_args[i]);
            return n.rel->table[idx] != 0;
        }
        case K::Not:
            return !run(n.subs[0]);
        case K::And:
            for (const auto& s : n.subs)
                if (!run(s))
                    return false;
            return true;
        case K::Or:
            for (const auto& s : n.subs)
                if (run(s))
                    return true;
            return false;
        case K::Implies:
            return !run(n.subs[0]) || run(n.subs[1]);
        case K::Forall:
        case K::Exists: {
            const bool exists = n.kind == K::Exists;
            if (n.def) {
                tick();
                env[n.slot] = term(*n.def);
                return run(n.subs[0]);
            }
            for (std::uint32_t v = 0; v < n.domain; ++v) {
                tick();
                env[n.slot] = v;
                if (run(n.subs[0]) == exists)
                    return exists;
            }
            return !exists;
        }
        }
        return false;
    }
};

}  // namespace

bool eval(const FiniteStructure& m, const Formula& phi, const FiniteAssignment& env, std::uint64_t budget,
          EvalStats* stats) {
    Compiler c(m);
    std::vector<std::uint32_t> init;
    for (const auto& [name, value] : env) {
        c.push(name);
        init.push_back(value);
    }
    for (const auto& v : free_vars(phi))
        if (!env.count(v.name))
            throw UsageError("unbound variable " + v.name);
    CNode root = c.node(phi);
    Runner r{std::move(init), budget, 0};
    r.env.resize(std::max<std::size_t>(c.max_slot, r.env.size()));
    const bool out = r.run(root);
    if (stats)
        stats->assignments += r.count;
    return out;
}

bool eval(const FiniteStructure& m, const Formula& phi, std::uint64_t budget, EvalStats* stats) {
    return eval(m, phi, FiniteAssignment{}, budget, stats);
}

// ---- infinite models -------------------------------------------------------------------------

std::string to_string(const Value& v) {
    return std::visit([](const auto& x) { return x.to_string(); }, v);
}

Value InfiniteModel::literal(const std::string&, const std::string&) const {
    throw DomainError("this structure has no {...} constants");
}

std::optional<Value> InfiniteModel::solve(const Formula&, const Var&, const Assignment&) const { return std::nullopt; }

namespace {

const PerfElem& perf(const Value& v) {
    if (auto p = std::get_if<PerfElem>(&v))
        return *p;
    throw DomainError("expected a ring element of F, got " + to_string(v));
}

bool in_o(const PerfElem& x) { return x.is_zero() || !x.valuation()->negative(); }
bool in_m(const PerfElem& x) { return x.is_zero() || x.valuation()->positive(); }

bool ring_symbol(const std::string& f) { return f == "+" || f == "*"; }

}  // namespace

TiltModel::TiltModel(Config cfg, Signature sig) : cfg_(std::move(cfg)), sig_(std::move(sig)) {}
TiltModel::TiltModel(Config cfg) : TiltModel(std::move(cfg), tilt_signature()) {}

TiltModel local_tilt_model(const Untilt& u, unsigned n) {
    Signature sig = signatures::local();
    for (unsigned m = 0; m < n; ++m)
        sig = sig.with_constant("c" + std::to_string(m), "R");
    TiltModel model(u->config(), sig);
    const WittVec xi = u->xi(n);
    for (unsigned m = 0; m < n; ++m)
        model.set_constant("c" + std::to_string(m), xi.coord(m));
    return model;
}

Value TiltModel::constant(const std::string& name, const std::string&) const {
    if (name == "0")
        return PerfElem::zero(cfg_);
    if (name == "1")
        return PerfElem::one(cfg_);
    auto it = named_.find(name);
    if (it != named_.end())
        return it->second;
    throw DomainError("unknown constant " + name);
}

Value TiltModel::literal(const std::string& text, const std::string&) const { return PerfElem::parse(cfg_, text); }

Value TiltModel::apply(const std::string& f, const std::vector<Value>& args) const {
    if (!ring_symbol(f) || args.size() != 2)
        throw DomainError("unknown function " + f);
    return f == "+" ? perf(args[0]) + perf(args[1]) : perf(args[0]) * perf(args[1]);
}

bool TiltModel::relation(const std::string& r, const std::vector<Value>& args) const {
    if (r == "O")
        return in_o(perf(args.at(0)));
    if (r == "m")
        return in_m(perf(args.at(0)));
    throw DomainError("unknown relation " + r);
}

std::optional<Value> TiltModel::solve(const Formula& atom, const Var& v, const Assignment& env) const {
    // a * v = b (either factor order) with a a nonzero monomial
    if (atom->kind != K::Eq)
        return std::nullopt;
    for (int side = 0; side < 2; ++side) {
        const Term& prod = atom->terms[side];
        const Term& other = atom->terms[1 - side];
        if (prod->kind != TermNode::Kind::App || prod->name != "*" || prod->args.size() != 2)
            continue;
        for (int k = 0; k < 2; ++k) {
            const Term& unknown = prod->args[k];
            if (unknown->kind != TermNode::Kind::Var || unknown->name != v.name)
                continue;
            try {
                const PerfElem a = perf(eval_term(*this, prod->args[1 - k], env));
                const PerfElem b = perf(eval_term(*this, other, env));
                if (!a.is_monomial() || a.is_zero())
                    continue;
                const PerfTerm& lead = a.terms()[0];
                return b.shift(-lead.exp).scale(cfg_->inv(lead.coeff));
            } catch (const UsageError&) {
                continue;
            }
        }
    }
    return std::nullopt;
}

ResidueModel::ResidueModel(Untilt u, unsigned n) : u_(std::move(u)), n_(n), sig_(signatures::local()) {}

Value ResidueModel::constant(const std::string& name, const std::string&) const {
    if (name == "0")
        return Digits::zero(u_, n_);
    if (name == "1")
        return Digits::one(u_, n_);
    throw DomainError("unknown constant " + name);
}

Value ResidueModel::apply(const std::string& f, const std::vector<Value>& args) const {
    if (!ring_symbol(f) || args.size() != 2)
        throw DomainError("unknown function " + f);
    const auto& a = std::get<Digits>(args[0]);
    const auto& b = std::get<Digits>(args[1]);
    return f == "+" ? digit_add(a, b) : digit_mul(a, b);
}

bool ResidueModel::relation(const std::string& r, const std::vector<Value>& args) const {
    if (r != "m")
        throw DomainError("unknown relation " + r);
    return in_maximal_ideal(std::get<Digits>(args.at(0)));
}

WittPairModel::WittPairModel(Untilt u, unsigned n)
    : u_(std::move(u)), n_(n), sig_(witt_local_signature()), xi_(u_->xi(n)) {}

Value WittPairModel::constant(const std::string& name, const std::string& sort) const {
    const Config& cfg = u_->config();
    if (name == "c")
        return xi_;
    if (sort == "W") {
        if (name == "0")
            return WittVec::zero(cfg, n_);
        if (name == "1")
            return WittVec::one(cfg, n_);
    } else {
        if (name == "0")
            return PerfElem::zero(cfg);
        if (name == "1")
            return PerfElem::one(cfg);
    }
    throw DomainError("unknown constant " + name);
}

Value WittPairModel::apply(const std::string& f, const std::vector<Value>& args) const {
    if (f == "[]")
        return teichmuller(perf(args.at(0)), n_);
    if (!ring_symbol(f) || args.size() != 2)
        throw DomainError("unknown function " + f);
    if (std::holds_alternative<WittVec>(args[0])) {
        const auto& a = std::get<WittVec>(args[0]);
        const auto& b = std::get<WittVec>(args[1]);
        return f == "+" ? witt_add(a, b) : witt_mul(a, b);
    }
    return f == "+" ? perf(args[0]) + perf(args[1]) : perf(args[0]) * perf(args[1]);
}

bool WittPairModel::relation(const std::string& r, const std::vector<Value>& args) const {
    if (r == "m")
        return in_m(perf(args.at(0)));
    throw DomainError("unknown relation " + r);
}

std::optional<Value> WittPairModel::solve(const Formula& atom, const Var& v, const Assignment& env) const {
    if (atom->kind != K::Eq || v.sort != "W")
        return std::nullopt;
    const Term& rhs = atom->terms[1];
    if (rhs->kind != TermNode::Kind::App || rhs->name != "+" || rhs->args.size() != 2)
        return std::nullopt;
    const Term& mult = rhs->args[1];
    if (mult->kind != TermNode::Kind::App || mult->name != "*" || mult->args.size() != 2)
        return std::nullopt;
    const Term& w = mult->args[0];
    const Term& c = mult->args[1];
    if (w->kind != TermNode::Kind::Var || w->name != v.name || c->kind != TermNode::Kind::App || c->name != "c")
        return std::nullopt;
    try {
        const auto lhs = std::get<WittVec>(eval_term(*this, atom->terms[0], env));
        const auto base = std::get<WittVec>(eval_term(*this, rhs->args[0], env));
        const Reduction r = reduce_with_cofactor(witt_sub(lhs, base), u_);
        if (!r.digits.is_zero())
            return std::nullopt;
        return r.cofactor;
    } catch (const UsageError&) {
        return std::nullopt;
    }
}

Value eval_term(const InfiniteModel& m, const Term& t, const Assignment& env) {
    switch (t->kind) {
    case TermNode::Kind::Var: {
        auto it = env.find(t->name);
        if (it == env.end())
            throw UsageError("unbound variable " + t->name);
        return it->second;
    }
    case TermNode::Kind::Literal:
        return m.literal(t->name, t->sort);
    case TermNode::Kind::App:
        break;
    }
    if (t->args.empty())
        return m.constant(t->name, t->sort);
    std::vector<Value> args;
    for (const auto& a : t->args)
        args.push_back(eval_term(m, a, env));
    return m.apply(t->name, args);
}

bool eval_qf(const InfiniteModel& m, const Formula& phi, const Assignment& env) {
    switch (phi->kind) {
    case K::True:
        return true;
    case K::False:
        return false;
    case K::Eq:
        return m.equal(eval_term(m, phi->terms[0], env), eval_term(m, phi->terms[1], env));
    case K::Rel: {
        std::vector<Value> args;
        for (const auto& t : phi->terms)
            args.push_back(eval_term(m, t, env));
        return m.relation(phi->name, args);
    }
    case K::Not:
        return !eval_qf(m, phi->subs[0], env);
    case K::And:
        for (const auto& s : phi->subs)
            if (!eval_qf(m, s, env))
                return false;
        return true;
    case K::Or:
        for (const auto& s : phi->subs)
            if (eval_qf(m, s, env))
                return true;
        return false;
    case K::Implies:
        return !eval_qf(m, phi->subs[0], env) || eval_qf(m, phi->subs[1], env);
    case K::Forall:
    case K::Exists:
        throw UsageError("eval_qf: formula has quantifiers");
    }
    return false;
}

bool eval_qf(const Assignment& env, const Formula& phi, const Config& cfg) {
    return eval_qf(TiltModel(cfg), phi, env);
}

namespace {

void collect_conjunct_atoms(const Formula& f, std::vector<Formula>& out) {
    if (f->is_atomic())
        out.push_back(f);
    else if (f->kind == K::And)
        for (const auto& s : f->subs)
            collect_conjunct_atoms(s, out);
    else if (f->kind == K::Exists)
        collect_conjunct_atoms(f->subs[0], out);
}

bool is_qf(const Formula& f) { return quantifier_depth(f) == 0; }

struct WitnessRun {
    const InfiniteModel& m;
    const Assignment& hints;
    WitnessCheck& out;

    bool run(const Formula& f, Assignment& env) {
        switch (f->kind) {
        case K::True:
        case K::False:
        case K::Eq:
        case K::Rel:
            return eval_qf(m, f, env);
        case K::Not:
            if (!is_qf(f->subs[0]))
                throw UsageError("witness check: quantifier under negation");
            return !eval_qf(m, f->subs[0], env);
        case K::Implies:
            if (!is_qf(f->subs[0]))
                throw UsageError("witness check: quantifier in an antecedent");
            return !eval_qf(m, f->subs[0], env) || run(f->subs[1], env);
        case K::And:
            for (const auto& s : f->subs)
                if (!run(s, env))
                    return false;
            return true;
        case K::Or:
            for (const auto& s : f->subs)
                if (run(s, env))
                    return true;
            return false;
        case K::Forall:
            throw UsageError("witness check: universal quantifier over an infinite ring");
        case K::Exists:
            break;
        }
        const Var v = f->bound();
        std::optional<Value> val;
        if (auto h = hints.find(v.name); h != hints.end())
            val = h->second;
        if (!val) {
            std::set<std::string> blocked;
            if (auto def = positive_definition(f->subs[0], v.name, blocked)) {
                try {
                    val = eval_term(m, *def, env);
                } catch (const UsageError&) {
                }
            }
        }
        if (!val) {
            std::vector<Formula> atoms;
            collect_conjunct_atoms(f->subs[0], atoms);
            for (const auto& a : atoms)
                if ((val = m.solve(a, v, env)))
                    break;
        }
        if (!val) {
            if (out.note.empty())
                out.note = "no witness for " + v.name;
            return false;
        }
        auto saved = env.find(v.name) != env.end() ? std::optional(env.at(v.name)) : std::nullopt;
        env.insert_or_assign(v.name, *val);
        const bool ok = run(f->subs[0], env);
        if (ok)
            out.assignment.insert_or_assign(v.name, *val);
        else if (out.note.empty())
            out.note = "witness for " + v.name + " does not satisfy the body";
        if (saved)
            env.insert_or_assign(v.name, *saved);
        else
            env.erase(v.name);
        return ok;
    }
};

}  // namespace

WitnessCheck check_with_witnesses(const InfiniteModel& m, const Formula& phi, const Assignment& hints) {
    WitnessCheck out;
    Assignment env;
    for (const auto& v : free_vars(phi)) {
        auto it = hints.find(v.name);
        if (it == hints.end())
            throw UsageError("unbound variable " + v.name);
        env.insert_or_assign(v.name, it->second);
    }
    WitnessRun r{m, hints, out};
    out.verified = r.run(phi, env);
    if (out.verified)
        out.note.clear();
    return out;
}

Formula strip_existentials(const Formula& phi) {
    switch (phi->kind) {
    case K::Exists:
        return strip_existentials(phi->subs[0]);
    case K::Not:
        return f_not(strip_existentials(phi->subs[0]));
    case K::And:
    case K::Or: {
        std::vector<Formula> parts;
        for (const auto& s : phi->subs)
            parts.push_back(strip_existentials(s));
        return phi->kind == K::And ? f_and(parts) : f_or(parts);
    }
    case K::Implies:
        return f_implies(strip_existentials(phi->subs[0]), strip_existentials(phi->subs[1]));
    case K::Forall:
        throw UsageError("strip_existentials: universal quantifier");
    default:
        return phi;
    }
}

}  // namespace tiltlab
