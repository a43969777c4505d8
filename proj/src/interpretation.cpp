#include "tiltlab/interpretation.hpp"

#include "tiltlab/errors.hpp"
#include "tiltlab/witt_poly.hpp"

#include <mutex>

namespace tiltlab {

using K = FormulaNode::Kind;

std::size_t Interpretation::dimension(const std::string& sort) const {
    auto it = coord_sorts.find(sort);
    if (it == coord_sorts.end())
        throw UsageError(name + ": no coordinates for sort " + sort);
    return it->second.size();
}

std::vector<Var> coordinates_for(const Interpretation& g, const Var& x, NameSupply& names) {
    const auto& sorts = g.coord_sorts.at(x.sort);
    std::vector<Var> out;
    if (sorts.size() == 1) {
        out.push_back({names.fresh(x.name), sorts[0]});
        return out;
    }
    for (std::size_t i = 0; i < sorts.size(); ++i)
        out.push_back({names.fresh(x.name + "_" + std::to_string(i)), sorts[i]});
    return out;
}

namespace {

void reserve_constants(const Signature& sig, NameSupply& names) {
    for (const auto& f : sig.functions)
        if (f.args.empty())
            names.reserve(f.name);
}

struct Reducer {
    const Interpretation& g;
    NameSupply& names;
    CoordMap coords;
    CoordMap trace;

    Formula run(const Formula& f) {
        switch (f->kind) {
        case K::True:
        case K::False:
            return f;
        case K::Eq:
        case K::Rel:
            return g.atomic(f, coords, names);
        case K::Not:
            return f_not(run(f->subs[0]));
        case K::And:
        case K::Or: {
            std::vector<Formula> parts;
            for (const auto& s : f->subs)
                parts.push_back(run(s));
            return f->kind == K::And ? f_and(std::move(parts)) : f_or(std::move(parts));
        }
        case K::Implies: {
            Formula a = run(f->subs[0]);
            return f_implies(a, run(f->subs[1]));
        }
        case K::Forall:
        case K::Exists: {
            const Var x = f->bound();
            std::vector<Var> cs = coordinates_for(g, x, names);
            auto saved = coords.find(x.name) != coords.end() ? std::optional(coords[x.name]) : std::nullopt;
            coords[x.name] = cs;
            trace[x.name] = cs;
            Formula body = run(f->subs[0]);
            if (saved)
                coords[x.name] = *saved;
            else
                coords.erase(x.name);
            Formula dom = g.domain(x.sort, cs);
            if (f->kind == K::Forall)
                return f_forall(cs, dom->kind == K::True ? body : f_implies(dom, body));
            return f_exists(cs, dom->kind == K::True ? body : f_and({dom, body}));
        }
        }
        throw InternalError("unhandled formula kind");
    }
};

}  // namespace

ReductionResult reduce_formula_traced(const Interpretation& g, const Formula& phi, const CoordMap& free_coords,
                                      NameSupply* shared) {
    NameSupply local;
    NameSupply& names = shared ? *shared : local;
    reserve_constants(g.target, names);
    for (const auto& [x, cs] : free_coords)
        for (const auto& v : cs)
            names.reserve(v.name);

    NameSupply source_names(all_var_names(phi));
    reserve_constants(g.source, source_names);
    Formula f = unnest(phi, source_names);
    NameSupply binders;
    reserve_constants(g.source, binders);
    f = rename_binders_apart(f, binders);

    Reducer r{g, names, free_coords, {}};
    for (const auto& v : free_vars(f)) {
        if (!g.coord_sorts.count(v.sort))
            throw DomainError(g.name + ": variable " + v.name + " has foreign sort " + v.sort);
        if (!r.coords.count(v.name))
            r.coords[v.name] = coordinates_for(g, v, names);
        r.trace[v.name] = r.coords[v.name];
    }
    Formula out = r.run(f);
    return {f, out, r.trace};
}

Formula reduce_formula(const Interpretation& g, const Formula& phi) { return reduce_formula_traced(g, phi).result; }

std::vector<ReductionResult> reduce_staged(const Interpretation& g, const Formula& phi) {
    if (!g.is_composite())
        return {reduce_formula_traced(g, phi)};
    std::vector<ReductionResult> out;
    Formula cur = phi;
    for (const auto& st : g.stages) {
        auto part = reduce_staged(*st, cur);
        for (auto& r : part)
            out.push_back(std::move(r));
        cur = out.back().result;
    }
    return out;
}

Interpretation identity_interpretation(const Signature& sig) {
    Interpretation g;
    g.name = "id";
    g.source = sig;
    g.target = sig;
    for (const auto& s : sig.sorts)
        g.coord_sorts[s] = {s};
    g.domain = [](const std::string&, const std::vector<Var>&) { return f_true(); };
    g.atomic = [](const Formula& atom, const CoordMap& coords, NameSupply&) {
        std::map<std::string, Term> sub;
        for (const auto& [x, cs] : coords)
            sub[x] = make_var(cs[0]);
        return substitute(atom, sub);
    };
    g.declared = ComplexityClass::QuantifierFree;
    g.coordinate_map = "identity";
    return g;
}

Interpretation compose(const Interpretation& first, const Interpretation& second) {
    if (!first.target.same_symbols(second.source))
        throw UsageError("cannot compose " + first.name + " with " + second.name + ": " + first.target.name +
                         " is not " + second.source.name);
    auto a = std::make_shared<const Interpretation>(first);
    auto b = std::make_shared<const Interpretation>(second);

    Interpretation g;
    g.name = first.name + ";" + second.name;
    g.source = first.source;
    g.target = second.target;
    for (const auto& [s, mid] : first.coord_sorts) {
        std::vector<std::string> out;
        for (const auto& m : mid)
            for (const auto& t : second.coord_sorts.at(m))
                out.push_back(t);
        g.coord_sorts[s] = out;
    }

    // Splits composite coordinates of x into fresh intermediate variables
    // (first-level coordinates) and their second-level coordinates.
    auto split = [a, b](const Var& x, const std::vector<Var>& cs, NameSupply& mid_names, CoordMap& second_free) {
        std::vector<Var> mid;
        const auto& mid_sorts = a->coord_sorts.at(x.sort);
        std::size_t k = 0;
        for (std::size_t j = 0; j < mid_sorts.size(); ++j) {
            Var v{mid_names.fresh(x.name + "#" + std::to_string(j)), mid_sorts[j]};
            const std::size_t d = b->dimension(mid_sorts[j]);
            second_free[v.name] = std::vector<Var>(cs.begin() + k, cs.begin() + k + d);
            k += d;
            mid.push_back(v);
        }
        return mid;
    };

    g.domain = [a, b, split](const std::string& sort, const std::vector<Var>& cs) {
        NameSupply mid_names;
        for (const auto& v : cs)
            mid_names.reserve(v.name);
        CoordMap second_free;
        auto mid = split({"x", sort}, cs, mid_names, second_free);
        Formula inner = a->domain(sort, mid);
        NameSupply names = mid_names;
        std::vector<Formula> parts;
        for (const auto& v : mid) {
            Formula d = b->domain(v.sort, second_free.at(v.name));
            if (d->kind != K::True)
                parts.push_back(d);
        }
        parts.push_back(reduce_formula_traced(*b, inner, second_free, &names).result);
        return f_and(parts);
    };
    g.atomic = [a, b, split](const Formula& atom, const CoordMap& coords, NameSupply& names) {
        NameSupply mid_names = names;
        CoordMap first_coords, second_free;
        for (const auto& x : free_vars(atom)) {
            auto it = coords.find(x.name);
            if (it == coords.end())
                throw InternalError("no coordinates for " + x.name);
            first_coords[x.name] = split(x, it->second, mid_names, second_free);
        }
        Formula inner = a->atomic(atom, first_coords, mid_names);
        names.reserve(all_var_names(inner));
        return reduce_formula_traced(*b, inner, second_free, &names).result;
    };
    g.declared = join(first.declared, second.declared);
    g.coordinate_map = first.coordinate_map + " after " + second.coordinate_map;
    auto flatten = [](const InterpPtr& p) {
        return p->is_composite() ? p->stages : std::vector<InterpPtr>{p};
    };
    g.stages = flatten(a);
    for (const auto& s : flatten(b))
        g.stages.push_back(s);
    return g;
}

// ---- shared helpers for atomic rules ------------------------------------------

namespace {

struct AtomView {
    enum class Shape { VarVar, VarConst, Op, Rel } shape;
    std::string op;               // function symbol, constant name, or relation
    std::vector<Var> args;        // arguments (and, for Op, the result last)
    Term constant;                // VarConst
};

AtomView view(const Formula& atom) {
    if (!is_unnested_atom(atom))
        throw InternalError("atomic rule applied to nested atom");
    AtomView v;
    if (atom->kind == K::Rel) {
        v.shape = AtomView::Shape::Rel;
        v.op = atom->name;
        for (const auto& t : atom->terms)
            v.args.push_back({t->name, t->sort});
        return v;
    }
    const Term& l = atom->terms[0];
    const Term& r = atom->terms[1];
    if (l->kind == TermNode::Kind::Var && r->kind == TermNode::Kind::Var) {
        v.shape = AtomView::Shape::VarVar;
        v.args = {{l->name, l->sort}, {r->name, r->sort}};
    } else if (l->kind == TermNode::Kind::Var) {
        v.shape = AtomView::Shape::VarConst;
        v.op = r->name;
        v.constant = r;
        v.args = {{l->name, l->sort}};
    } else {
        v.shape = AtomView::Shape::Op;
        v.op = l->name;
        for (const auto& t : l->args)
            v.args.push_back({t->name, t->sort});
        v.args.push_back({r->name, r->sort});
    }
    return v;
}

const std::vector<Var>& coords_of(const CoordMap& m, const Var& x) {
    auto it = m.find(x.name);
    if (it == m.end())
        throw InternalError("no coordinates for " + x.name);
    return it->second;
}

Term single(const CoordMap& m, const Var& x) { return make_var(coords_of(m, x).at(0)); }

Term sum_terms(const std::vector<Term>& ts, const std::string& sort) {
    if (ts.empty())
        return make_app("0", sort);
    Term acc = ts[0];
    for (std::size_t i = 1; i < ts.size(); ++i)
        acc = make_app("+", sort, {acc, ts[i]});
    return acc;
}

// S_i / P_i as an L_r term in variables x_j, y_j (sort R), coefficients mod p.
Term witt_template(std::uint32_t p, WittKind kind, unsigned i) {
    static std::mutex mu;
    static std::map<std::tuple<std::uint32_t, int, unsigned>, Term> cache;
    const auto key = std::make_tuple(p, static_cast<int>(kind), i);
    {
        std::lock_guard lock(mu);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    auto& wc = WittPolyCache::for_prime(p);
    const IntPoly& f = wc.get(kind, i);
    const MonomialLayout& L = wc.layout();
    std::vector<Term> summands;
    const mpz_class pz = p;
    for (const auto& [k, c] : f.terms) {
        mpz_class r = c % pz;
        if (r < 0)
            r += pz;
        const unsigned long coeff = r.get_ui();
        if (coeff == 0)
            continue;
        Term mono;
        for (unsigned var = 0; var < L.nvars(); ++var) {
            const unsigned e = L.exponent(k, var);
            for (unsigned j = 0; j < e; ++j) {
                Term v = make_var(L.var_name(var), "R");
                mono = mono ? make_app("*", "R", {mono, v}) : v;
            }
        }
        if (!mono)
            mono = make_app("1", "R");
        for (unsigned long j = 0; j < coeff; ++j)
            summands.push_back(mono);
    }
    Term t = sum_terms(summands, "R");
    std::lock_guard lock(mu);
    cache.emplace(key, t);
    return t;
}

Term witt_coordinate_term(std::uint32_t p, WittKind kind, unsigned i, const std::vector<Var>& xs,
                          const std::vector<Var>& ys) {
    const auto& L = WittPolyCache::for_prime(p).layout();
    std::map<std::string, Term> sub;
    for (unsigned j = 0; j <= i; ++j) {
        sub[L.var_name(L.x(j))] = make_var(xs[j]);
        sub[L.var_name(L.y(j))] = make_var(ys[j]);
    }
    return substitute(witt_template(p, kind, i), sub);
}

Formula pass_through(const Formula& atom, const CoordMap& coords) {
    std::map<std::string, Term> sub;
    for (const auto& v : free_vars(atom))
        sub[v.name] = single(coords, v);
    return substitute(atom, sub);
}

}  // namespace

Interpretation gamma_n(unsigned n, const Config& cfg, const Signature& base, const std::vector<std::string>& w_constants) {
    if (n < 1)
        throw UsageError("gamma_n needs n >= 1");
    if (base.sorts.size() != 1 || base.sorts[0] != "R")
        throw UsageError("gamma_n expects a base signature with the single sort R");
    const std::uint32_t p = cfg->p();
    if (n - 1 > WittPolyCache::for_prime(p).max_index())
        throw BudgetExceeded("Witt polynomials of index " + std::to_string(n - 1) + " exceed the layout for p=" +
                             std::to_string(p));

    Interpretation g;
    g.name = "Gamma_" + std::to_string(n);
    g.source = signatures::witt_pair(base);
    g.target = base;
    for (const auto& c : w_constants) {
        g.source = g.source.with_constant(c, "W");
        for (unsigned i = 0; i < n; ++i)
            g.target = g.target.with_constant(c + std::to_string(i), "R");
    }
    g.coord_sorts["W"] = std::vector<std::string>(n, "R");
    g.coord_sorts["R"] = {"R"};
    g.domain = [](const std::string&, const std::vector<Var>& cs) {
        std::vector<Formula> parts;
        for (const auto& v : cs)
            parts.push_back(f_eq(make_var(v), make_var(v)));
        return f_and(parts);
    };
    const std::set<std::string> wconst(w_constants.begin(), w_constants.end());
    g.atomic = [n, p, wconst](const Formula& atom, const CoordMap& coords, NameSupply&) -> Formula {
        const AtomView v = view(atom);
        const bool on_w = !v.args.empty() && v.args.back().sort == "W";
        if (!on_w && !(v.shape == AtomView::Shape::Op && v.op == "[]"))
            return pass_through(atom, coords);
        std::vector<Formula> parts;
        switch (v.shape) {
        case AtomView::Shape::VarVar: {
            const auto& x = coords_of(coords, v.args[0]);
            const auto& y = coords_of(coords, v.args[1]);
            for (unsigned i = 0; i < n; ++i)
                parts.push_back(f_eq(make_var(x[i]), make_var(y[i])));
            break;
        }
        case AtomView::Shape::VarConst: {
            const auto& x = coords_of(coords, v.args[0]);
            for (unsigned i = 0; i < n; ++i) {
                Term c;
                if (v.op == "0")
                    c = make_app("0", "R");
                else if (v.op == "1")
                    c = make_app(i == 0 ? "1" : "0", "R");
                else if (wconst.count(v.op))
                    c = make_app(v.op + std::to_string(i), "R");
                else
                    throw DomainError("Gamma_n: no rule for the W constant " + v.op);
                parts.push_back(f_eq(make_var(x[i]), c));
            }
            break;
        }
        case AtomView::Shape::Op: {
            const auto& z = coords_of(coords, v.args.back());
            if (v.op == "[]") {
                parts.push_back(f_eq(make_var(z[0]), single(coords, v.args[0])));
                for (unsigned i = 1; i < n; ++i)
                    parts.push_back(f_eq(make_var(z[i]), make_app("0", "R")));
                break;
            }
            const WittKind kind = v.op == "+" ? WittKind::Sum : WittKind::Product;
            if (v.op != "+" && v.op != "*")
                throw DomainError("Gamma_n: no rule for " + v.op);
            const auto& x = coords_of(coords, v.args[0]);
            const auto& y = coords_of(coords, v.args[1]);
            for (unsigned i = 0; i < n; ++i)
                parts.push_back(f_eq(make_var(z[i]), witt_coordinate_term(p, kind, i, x, y)));
            break;
        }
        case AtomView::Shape::Rel:
            throw DomainError("Gamma_n: no relation on W");
        }
        return f_and(parts);
    };
    g.declared = ComplexityClass::QuantifierFree;
    g.coordinate_map = "(x_0, ..., x_{n-1}) -> Witt vector with these coordinates";
    return g;
}

Signature witt_local_signature() { return signatures::witt_pair(signatures::local()).with_constant("c", "W"); }

Signature tilt_signature() { return signatures::valued().with_literals("R", "L_val(R_0)"); }

Interpretation a_n(unsigned n, const Untilt& u) {
    if (n < 1)
        throw UsageError("a_n needs n >= 1");
    u->xi(n);  // surfaces generator errors at construction
    Interpretation g;
    g.name = "A_" + std::to_string(n);
    g.source = signatures::local();
    g.target = witt_local_signature();
    g.coord_sorts["R"] = {"W"};
    g.domain = [](const std::string&, const std::vector<Var>& cs) { return f_eq(make_var(cs[0]), make_var(cs[0])); };
    g.atomic = [](const Formula& atom, const CoordMap& coords, NameSupply& names) -> Formula {
        const AtomView v = view(atom);
        const Term c = make_app("c", "W");
        auto plus_multiple = [&](Term base, const Var& mult) {
            return make_app("+", "W", {base, make_app("*", "W", {make_var(mult), c})});
        };
        switch (v.shape) {
        case AtomView::Shape::VarVar: {
            Var z{names.fresh("z"), "W"};
            return f_exists(z, f_eq(single(coords, v.args[0]), plus_multiple(single(coords, v.args[1]), z)));
        }
        case AtomView::Shape::VarConst: {
            if (v.op != "0" && v.op != "1")
                throw DomainError("A_n: no rule for the constant " + v.op);
            Var z{names.fresh("z"), "W"};
            return f_exists(z, f_eq(single(coords, v.args[0]), plus_multiple(make_app(v.op, "W"), z)));
        }
        case AtomView::Shape::Op: {
            if (v.op != "+" && v.op != "*")
                throw DomainError("A_n: no rule for " + v.op);
            Var w{names.fresh("w"), "W"};
            Term lhs = make_app(v.op, "W", {single(coords, v.args[0]), single(coords, v.args[1])});
            return f_exists(w, f_eq(lhs, plus_multiple(single(coords, v.args[2]), w)));
        }
        case AtomView::Shape::Rel: {
            if (v.op != "m")
                throw DomainError("A_n: no rule for the relation " + v.op);
            Var z{names.fresh("z"), "W"}, w{names.fresh("w"), "W"}, y{names.fresh("y"), "R"};
            Term ty = make_app("[]", "W", {make_var(y)});
            Formula body = f_and({f_rel("m", {make_var(y)}),
                                  f_eq(single(coords, v.args[0]),
                                       make_app("+", "W", {make_app("*", "W", {ty, make_var(z)}),
                                                           make_app("*", "W", {make_var(w), c})}))});
            return f_exists(std::vector<Var>{z, w, y}, body);
        }
        }
        throw InternalError("unhandled atom");
    };
    g.declared = ComplexityClass::ExistentialPositive;
    g.coordinate_map = "x -> theta_n(x) in W_n(O_F)/(c)";
    return g;
}

Interpretation b_n(unsigned n, const Untilt& u) {
    Interpretation g = gamma_n(n, u->config(), signatures::local(), {"c"});
    g.name = "B_" + std::to_string(n);
    return g;
}

// x in m_F for x in O_F, without negation. First disjunct: x = t^(1/p^4) y
// with y in O, a shortcut whose witness is a finite sum. Second: for every c
// in a set of representatives of F_q^x / F_p^x, y^p - y = c x has a root in
// O_F. Hensel gives the root when v(x) > 0; when res(x) != 0 some c res(x)
// avoids the Artin-Schreier image, a proper F_p-subspace of F_q.
static Formula in_m_positive(const Term& x, const Config& cfg, NameSupply& names) {
    const std::uint32_t p = cfg->p();
    auto in_o = [](const Term& a) { return f_rel("O", {a}); };

    const std::string step = PerfElem::t_pow(cfg, Exponent(1, 4, p)).to_string();
    Var y0{names.fresh("y"), "R"};
    Formula shortcut = f_exists(
        y0, f_and({in_o(make_var(y0)), f_eq(make_app("*", "R", {make_literal(step, "R"), make_var(y0)}), x)}));

    std::vector<Formula> parts;
    for (std::uint32_t code = 1; code < cfg->q(); ++code) {
        const auto cs = cfg->coords(FqElem{code});
        std::size_t top = cs.size();
        while (top > 0 && cs[top - 1] == 0)
            --top;
        if (cs[top - 1] != 1)
            continue;
        Var y{names.fresh("y"), "R"};
        Term yt = make_var(y), lhs = yt;
        for (std::uint32_t i = 1; i < p; ++i)
            lhs = make_app("*", "R", {lhs, yt});
        for (std::uint32_t i = 1; i < p; ++i)  // + (p-1) y
            lhs = make_app("+", "R", {lhs, yt});
        Term rhs = code == 1 ? x
                             : make_app("*", "R", {make_literal(PerfElem::constant(cfg, FqElem{code}).to_string(), "R"), x});
        parts.push_back(f_exists(y, f_and({in_o(yt), f_eq(lhs, rhs)})));
    }
    return f_or({shortcut, f_and(parts)});
}

Interpretation delta_n(unsigned n, const Untilt& u) {
    if (n < 1)
        throw UsageError("delta_n needs n >= 1");
    const WittVec xi = u->xi(n);
    std::vector<std::string> texts;
    for (unsigned m = 0; m < n; ++m)
        texts.push_back(xi.coord(m).to_string());

    Interpretation g;
    g.name = "Delta_" + std::to_string(n);
    g.source = signatures::local();
    for (unsigned m = 0; m < n; ++m)
        g.source = g.source.with_constant("c" + std::to_string(m), "R");
    g.target = tilt_signature();
    g.coord_sorts["R"] = {"R"};
    g.domain = [](const std::string&, const std::vector<Var>& cs) { return f_rel("O", {make_var(cs[0])}); };
    const Config cfg = u->config();
    g.atomic = [texts, cfg](const Formula& atom, const CoordMap& coords, NameSupply& names) -> Formula {
        const AtomView v = view(atom);
        switch (v.shape) {
        case AtomView::Shape::VarVar:
            return pass_through(atom, coords);
        case AtomView::Shape::VarConst: {
            if (v.op == "0" || v.op == "1")
                return pass_through(atom, coords);
            if (v.op.size() > 1 && v.op[0] == 'c') {
                const std::size_t m = std::stoul(v.op.substr(1));
                if (m < texts.size())
                    return f_eq(single(coords, v.args[0]), make_literal(texts[m], "R"));
            }
            throw DomainError("Delta_n: no rule for the constant " + v.op);
        }
        case AtomView::Shape::Op: {
            std::vector<Formula> parts;
            for (const auto& a : v.args)
                parts.push_back(f_rel("O", {single(coords, a)}));
            parts.push_back(pass_through(atom, coords));
            return f_and(parts);
        }
        case AtomView::Shape::Rel: {
            if (v.op != "m")
                throw DomainError("Delta_n: no rule for the relation " + v.op);
            return in_m_positive(single(coords, v.args[0]), cfg, names);
        }
        }
        throw InternalError("unhandled atom");
    };
    g.declared = ComplexityClass::ExistentialPositive;
    g.coordinate_map = "identity on O_F";
    return g;
}

Interpretation residue_to_tilt(unsigned n, const Untilt& u) {
    Interpretation g = compose(compose(a_n(n, u), b_n(n, u)), delta_n(n, u));
    g.name = "residue_to_tilt_" + std::to_string(n);
    return g;
}

Interpretation value_group_translation(const Untilt& u) {
    const std::string xi0 = u->xi(1).coord(0).to_string();
    Interpretation g;
    g.name = "value_group";
    g.source = signatures::value_group();
    g.target = tilt_signature();
    g.coord_sorts["G"] = {"R"};
    g.domain = [](const std::string&, const std::vector<Var>& cs) {
        return f_not(f_eq(make_var(cs[0]), make_app("0", "R")));
    };
    // a ~ b: same class modulo units of O
    auto similar = [](const Term& a, const Term& b, NameSupply& names) {
        Var u1{names.fresh("u"), "R"}, u2{names.fresh("u"), "R"};
        return f_and({f_exists(u1, f_and({f_rel("O", {make_var(u1)}), f_eq(make_app("*", "R", {make_var(u1), b}), a)})),
                      f_exists(u2, f_and({f_rel("O", {make_var(u2)}), f_eq(make_app("*", "R", {make_var(u2), a}), b)}))});
    };
    g.atomic = [xi0, similar](const Formula& atom, const CoordMap& coords, NameSupply& names) -> Formula {
        const AtomView v = view(atom);
        switch (v.shape) {
        case AtomView::Shape::VarVar:
            return similar(single(coords, v.args[0]), single(coords, v.args[1]), names);
        case AtomView::Shape::VarConst:
            if (v.op == "0")
                return similar(single(coords, v.args[0]), make_app("1", "R"), names);
            if (v.op == "vp")
                return similar(single(coords, v.args[0]), make_literal(xi0, "R"), names);
            throw DomainError("value group: no rule for the constant " + v.op);
        case AtomView::Shape::Op: {
            if (v.op != "+")
                throw DomainError("value group: no rule for " + v.op);
            Term prod = make_app("*", "R", {single(coords, v.args[0]), single(coords, v.args[1])});
            return similar(prod, single(coords, v.args[2]), names);
        }
        case AtomView::Shape::Rel: {
            if (v.op != "<")
                throw DomainError("value group: no rule for the relation " + v.op);
            // v(x) < v(y): y = u x with u a nonzero element of m
            Var q{names.fresh("u"), "R"}, w{names.fresh("w"), "R"};
            const Term x = single(coords, v.args[0]), y = single(coords, v.args[1]);
            return f_exists(std::vector<Var>{q, w},
                            f_and({f_eq(make_app("*", "R", {make_var(q), x}), y),
                                   f_eq(make_app("*", "R", {make_var(q), make_var(w)}), make_app("1", "R")),
                                   f_not(f_rel("O", {make_var(w)}))}));
        }
        }
        throw InternalError("unhandled atom");
    };
    g.declared = ComplexityClass::Full;
    g.coordinate_map = "x -> w(x)";
    return g;
}

}  // namespace tiltlab
