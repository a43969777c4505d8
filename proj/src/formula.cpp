#include "tiltlab/formula.hpp"

#include "tiltlab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace tiltlab {

// ---- signatures -------------------------------------------------------------

bool Signature::has_sort(const std::string& s) const {
    return std::find(sorts.begin(), sorts.end(), s) != sorts.end();
}

const FunctionSymbol* Signature::find_function(const std::string& fname,
                                               const std::vector<std::string>& arg_sorts) const {
    for (const auto& f : functions)
        if (f.name == fname && f.args == arg_sorts)
            return &f;
    return nullptr;
}

std::vector<const FunctionSymbol*> Signature::constants_named(const std::string& cname) const {
    std::vector<const FunctionSymbol*> out;
    for (const auto& f : functions)
        if (f.name == cname && f.args.empty())
            out.push_back(&f);
    return out;
}

bool Signature::is_function_name(const std::string& fname) const {
    for (const auto& f : functions)
        if (f.name == fname)
            return true;
    return false;
}

const RelationSymbol* Signature::find_relation(const std::string& rname) const {
    for (const auto& r : relations)
        if (r.name == rname)
            return &r;
    return nullptr;
}

Signature Signature::with_constant(const std::string& cname, const std::string& sort) const {
    if (!has_sort(sort))
        throw UsageError("unknown sort " + sort);
    Signature s = *this;
    s.functions.push_back({cname, {}, sort});
    s.name += "+" + cname;
    return s;
}

Signature Signature::with_literals(const std::string& sort, const std::string& new_name) const {
    Signature s = *this;
    s.literal_sort = sort;
    s.name = new_name;
    return s;
}

bool Signature::same_symbols(const Signature& o) const {
    auto fkey = [](const FunctionSymbol& f) { return f.name + "|" + f.result + "|" + [&] {
                                                  std::string a;
                                                  for (const auto& s : f.args)
                                                      a += s + ",";
                                                  return a;
                                              }(); };
    auto rkey = [](const RelationSymbol& r) {
        std::string a = r.name + "|";
        for (const auto& s : r.args)
            a += s + ",";
        return a;
    };
    std::set<std::string> a, b, ra, rb;
    for (const auto& f : functions)
        a.insert(fkey(f));
    for (const auto& f : o.functions)
        b.insert(fkey(f));
    for (const auto& r : relations)
        ra.insert(rkey(r));
    for (const auto& r : o.relations)
        rb.insert(rkey(r));
    return sorts == o.sorts && a == b && ra == rb && literal_sort == o.literal_sort;
}

namespace signatures {

namespace {
void add_ring_symbols(Signature& s, const std::string& sort) {
    s.functions.push_back({"+", {sort, sort}, sort});
    s.functions.push_back({"*", {sort, sort}, sort});
    s.functions.push_back({"0", {}, sort});
    s.functions.push_back({"1", {}, sort});
}
}  // namespace

Signature ring() {
    Signature s{"L_r", {"R"}, {}, {}, ""};
    add_ring_symbols(s, "R");
    return s;
}

Signature valued() {
    Signature s = ring();
    s.name = "L_val";
    s.relations.push_back({"O", {"R"}});
    return s;
}

Signature local() {
    Signature s = ring();
    s.name = "L_lcr";
    s.relations.push_back({"m", {"R"}});
    return s;
}

Signature value_group() {
    Signature s{"L_oag+vp", {"G"}, {}, {}, ""};
    s.functions.push_back({"+", {"G", "G"}, "G"});
    s.functions.push_back({"0", {}, "G"});
    s.functions.push_back({"vp", {}, "G"});
    s.relations.push_back({"<", {"G", "G"}});
    return s;
}

Signature witt_pair(const Signature& base) {
    if (base.sorts.size() != 1)
        throw UsageError("witt_pair expects a one-sorted base signature");
    Signature s{"<L_r," + base.name + ">", {"W", "R"}, {}, {}, ""};
    add_ring_symbols(s, "W");
    const std::string& b = base.sorts[0];
    for (auto f : base.functions) {
        for (auto& a : f.args)
            if (a == b)
                a = "R";
        if (f.result == b)
            f.result = "R";
        s.functions.push_back(f);
    }
    for (auto r : base.relations) {
        for (auto& a : r.args)
            if (a == b)
                a = "R";
        s.relations.push_back(r);
    }
    s.functions.push_back({"[]", {"R"}, "W"});
    return s;
}

}  // namespace signatures

// ---- construction -----------------------------------------------------------

Term make_var(const std::string& name, const std::string& sort) {
    return std::make_shared<const TermNode>(TermNode{TermNode::Kind::Var, name, sort, {}});
}
Term make_var(const Var& v) { return make_var(v.name, v.sort); }
Term make_app(const std::string& f, const std::string& sort, std::vector<Term> args) {
    return std::make_shared<const TermNode>(TermNode{TermNode::Kind::App, f, sort, std::move(args)});
}
Term make_literal(const std::string& text, const std::string& sort) {
    return std::make_shared<const TermNode>(TermNode{TermNode::Kind::Literal, text, sort, {}});
}

namespace {
using K = FormulaNode::Kind;
Formula node(K k, std::string name = {}, std::string sort = {}, std::vector<Term> terms = {},
             std::vector<Formula> subs = {}) {
    return std::make_shared<const FormulaNode>(
        FormulaNode{k, std::move(name), std::move(sort), std::move(terms), std::move(subs)});
}
}  // namespace

Formula f_true() { return node(K::True); }
Formula f_false() { return node(K::False); }
Formula f_eq(Term a, Term b) {
    if (a->sort != b->sort)
        throw DomainError("equation between sorts " + a->sort + " and " + b->sort);
    return node(K::Eq, {}, {}, {std::move(a), std::move(b)});
}
Formula f_rel(const std::string& r, std::vector<Term> args) { return node(K::Rel, r, {}, std::move(args)); }
Formula f_not(Formula a) { return node(K::Not, {}, {}, {}, {std::move(a)}); }

namespace {
Formula flat(K k, std::vector<Formula> parts) {
    std::vector<Formula> out;
    for (auto& f : parts) {
        if (f->kind == k)
            out.insert(out.end(), f->subs.begin(), f->subs.end());
        else
            out.push_back(std::move(f));
    }
    if (out.empty())
        return k == K::And ? f_true() : f_false();
    if (out.size() == 1)
        return out[0];
    return node(k, {}, {}, {}, std::move(out));
}
}  // namespace

Formula f_and(std::vector<Formula> parts) { return flat(K::And, std::move(parts)); }
Formula f_or(std::vector<Formula> parts) { return flat(K::Or, std::move(parts)); }
Formula f_implies(Formula a, Formula b) { return node(K::Implies, {}, {}, {}, {std::move(a), std::move(b)}); }
Formula f_forall(const Var& v, Formula body) { return node(K::Forall, v.name, v.sort, {}, {std::move(body)}); }
Formula f_exists(const Var& v, Formula body) { return node(K::Exists, v.name, v.sort, {}, {std::move(body)}); }
Formula f_forall(const std::vector<Var>& vs, Formula body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it)
        body = f_forall(*it, std::move(body));
    return body;
}
Formula f_exists(const std::vector<Var>& vs, Formula body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it)
        body = f_exists(*it, std::move(body));
    return body;
}

// ---- parser -----------------------------------------------------------------

namespace {

enum class Tok { Ident, Number, Sym, Literal, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && ident_char(s[i]))
                ++i;
            out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
        } else if (c == '{') {
            const std::size_t close = s.find('}', i);
            if (close == std::string_view::npos)
                throw ParseError("unterminated {literal}", start);
            out.push_back({Tok::Literal, std::string(s.substr(i + 1, close - i - 1)), start});
            i = close + 1;
        } else if (s.substr(i, 2) == "->" || s.substr(i, 2) == "!=") {
            out.push_back({Tok::Sym, std::string(s.substr(i, 2)), start});
            i += 2;
        } else if (std::string_view("()[]+*=<~&|:,").find(c) != std::string_view::npos) {
            out.push_back({Tok::Sym, std::string(1, c), start});
            ++i;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

bool is_keyword(const std::string& s) { return s == "A" || s == "E" || s == "in" || s == "true" || s == "false"; }

// Untyped syntax, elaborated against the signature afterwards.
struct RawTerm {
    enum class Kind { Name, Number, Op, Bracket, Literal } kind;
    std::string text;
    std::string sort;  // explicit annotation
    std::vector<RawTerm> args;
    std::size_t pos;
};

struct RawFormula {
    enum class Kind { True, False, Eq, Neq, Less, In, Not, And, Or, Implies, Forall, Exists } kind;
    std::string name, sort;
    std::vector<RawTerm> terms;
    std::vector<RawFormula> subs;
    std::size_t pos;
};

class Parser {
public:
    explicit Parser(std::string_view s) : toks_(lex(s)) {}

    RawFormula formula_top() {
        RawFormula f = implication();
        expect_end();
        return f;
    }
    RawTerm term_top() {
        RawTerm t = sum();
        expect_end();
        return t;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    bool is_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
    bool accept(const char* s) {
        if (is_sym(s)) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(const char* s) {
        if (!accept(s))
            throw ParseError(std::string("expected '") + s + "'", peek().pos);
    }
    void expect_end() {
        if (peek().kind != Tok::End)
            throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    }

    RawFormula implication() {
        RawFormula left = disjunction();
        if (is_sym("->")) {
            const std::size_t pos = peek().pos;
            ++i_;
            RawFormula right = implication();
            return {RawFormula::Kind::Implies, {}, {}, {}, {std::move(left), std::move(right)}, pos};
        }
        return left;
    }
    RawFormula disjunction() {
        RawFormula f = conjunction();
        if (!is_sym("|"))
            return f;
        RawFormula out{RawFormula::Kind::Or, {}, {}, {}, {std::move(f)}, peek().pos};
        while (accept("|"))
            out.subs.push_back(conjunction());
        return out;
    }
    RawFormula conjunction() {
        RawFormula f = unary();
        if (!is_sym("&"))
            return f;
        RawFormula out{RawFormula::Kind::And, {}, {}, {}, {std::move(f)}, peek().pos};
        while (accept("&"))
            out.subs.push_back(unary());
        return out;
    }
    RawFormula unary() {
        const Token& t = peek();
        if (accept("~"))
            return {RawFormula::Kind::Not, {}, {}, {}, {unary()}, t.pos};
        if (t.kind == Tok::Ident && (t.text == "A" || t.text == "E")) {
            const bool all = t.text == "A";
            const std::size_t pos = t.pos;
            ++i_;
            std::vector<std::pair<std::string, std::string>> vars;
            do {
                if (peek().kind != Tok::Ident || is_keyword(peek().text))
                    throw ParseError("expected a variable after quantifier", peek().pos);
                std::string v = peek().text, sort;
                ++i_;
                if (accept(":")) {
                    if (peek().kind != Tok::Ident)
                        throw ParseError("expected a sort name", peek().pos);
                    sort = peek().text;
                    ++i_;
                }
                vars.emplace_back(v, sort);
            } while (accept(","));
            RawFormula body = unary();
            for (auto it = vars.rbegin(); it != vars.rend(); ++it)
                body = {all ? RawFormula::Kind::Forall : RawFormula::Kind::Exists, it->first, it->second, {},
                        {std::move(body)}, pos};
            return body;
        }
        if (t.kind == Tok::Ident && t.text == "true") {
            ++i_;
            return {RawFormula::Kind::True, {}, {}, {}, {}, t.pos};
        }
        if (t.kind == Tok::Ident && t.text == "false") {
            ++i_;
            return {RawFormula::Kind::False, {}, {}, {}, {}, t.pos};
        }
        if (is_sym("(")) {
            // a parenthesized formula, unless it turns out to be a term
            const std::size_t save = i_;
            try {
                ++i_;
                RawFormula f = implication();
                expect(")");
                if (!is_term_continuation())
                    return f;
            } catch (const ParseError&) {
            }
            i_ = save;
        }
        return atom();
    }
    bool is_term_continuation() const {
        return is_sym("=") || is_sym("!=") || is_sym("<") || is_sym("+") || is_sym("*") ||
               (peek().kind == Tok::Ident && peek().text == "in");
    }
    RawFormula atom() {
        const std::size_t pos = peek().pos;
        RawTerm left = sum();
        if (accept("="))
            return {RawFormula::Kind::Eq, {}, {}, {std::move(left), sum()}, {}, pos};
        if (accept("!="))
            return {RawFormula::Kind::Neq, {}, {}, {std::move(left), sum()}, {}, pos};
        if (accept("<"))
            return {RawFormula::Kind::Less, {}, {}, {std::move(left), sum()}, {}, pos};
        if (peek().kind == Tok::Ident && peek().text == "in") {
            ++i_;
            if (peek().kind != Tok::Ident)
                throw ParseError("expected a predicate name after 'in'", peek().pos);
            std::string rel = peek().text;
            ++i_;
            return {RawFormula::Kind::In, rel, {}, {std::move(left)}, {}, pos};
        }
        throw ParseError("expected '=', '!=', '<' or 'in'", peek().pos);
    }
    RawTerm sum() {
        RawTerm t = product();
        while (is_sym("+")) {
            const std::size_t pos = peek().pos;
            ++i_;
            RawTerm r = product();
            t = {RawTerm::Kind::Op, "+", {}, {std::move(t), std::move(r)}, pos};
        }
        return t;
    }
    RawTerm product() {
        RawTerm t = factor();
        while (is_sym("*")) {
            const std::size_t pos = peek().pos;
            ++i_;
            RawTerm r = factor();
            t = {RawTerm::Kind::Op, "*", {}, {std::move(t), std::move(r)}, pos};
        }
        return t;
    }
    RawTerm factor() {
        const Token& t = peek();
        if (accept("(")) {
            RawTerm inner = sum();
            expect(")");
            return inner;
        }
        if (accept("[")) {
            RawTerm inner = sum();
            expect("]");
            return {RawTerm::Kind::Bracket, "[]", {}, {std::move(inner)}, t.pos};
        }
        if (t.kind == Tok::Literal) {
            ++i_;
            return {RawTerm::Kind::Literal, t.text, {}, {}, t.pos};
        }
        if (t.kind == Tok::Number) {
            ++i_;
            return {RawTerm::Kind::Number, t.text, {}, {}, t.pos};
        }
        if (t.kind == Tok::Ident && !is_keyword(t.text)) {
            ++i_;
            RawTerm r{RawTerm::Kind::Name, t.text, {}, {}, t.pos};
            if (accept(":")) {
                if (peek().kind != Tok::Ident)
                    throw ParseError("expected a sort name", peek().pos);
                r.sort = peek().text;
                ++i_;
            }
            return r;
        }
        throw ParseError("expected a term", t.pos);
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

class Elaborator {
public:
    explicit Elaborator(const Signature& sig) : sig_(sig) {}

    Formula formula(const RawFormula& f) {
        switch (f.kind) {
        case RawFormula::Kind::True:
            return f_true();
        case RawFormula::Kind::False:
            return f_false();
        case RawFormula::Kind::Eq:
        case RawFormula::Kind::Neq: {
            auto sort = infer(f.terms[0]);
            if (!sort)
                sort = infer(f.terms[1]);
            const std::string s = sort ? *sort : sig_.default_sort();
            Formula eq = f_eq(term(f.terms[0], s), term(f.terms[1], s));
            return f.kind == RawFormula::Kind::Eq ? eq : f_not(eq);
        }
        case RawFormula::Kind::Less:
        case RawFormula::Kind::In: {
            const std::string rname = f.kind == RawFormula::Kind::Less ? "<" : f.name;
            const RelationSymbol* r = sig_.find_relation(rname);
            if (!r || r->args.size() != f.terms.size())
                throw ParseError("unknown predicate '" + rname + "' in " + sig_.name, f.pos);
            std::vector<Term> args;
            for (std::size_t i = 0; i < f.terms.size(); ++i)
                args.push_back(term(f.terms[i], r->args[i]));
            return f_rel(rname, std::move(args));
        }
        case RawFormula::Kind::Not:
            return f_not(formula(f.subs[0]));
        case RawFormula::Kind::And:
        case RawFormula::Kind::Or: {
            std::vector<Formula> parts;
            for (const auto& s : f.subs)
                parts.push_back(formula(s));
            return f.kind == RawFormula::Kind::And ? f_and(std::move(parts)) : f_or(std::move(parts));
        }
        case RawFormula::Kind::Implies:
            return f_implies(formula(f.subs[0]), formula(f.subs[1]));
        case RawFormula::Kind::Forall:
        case RawFormula::Kind::Exists: {
            const std::string sort = f.sort.empty() ? sig_.default_sort() : f.sort;
            if (!sig_.has_sort(sort))
                throw ParseError("unknown sort '" + sort + "'", f.pos);
            if (sig_.is_function_name(f.name))
                throw ParseError("cannot bind constant symbol '" + f.name + "'", f.pos);
            bound_.push_back({f.name, sort});
            Formula body = formula(f.subs[0]);
            bound_.pop_back();
            const Var v{f.name, sort};
            return f.kind == RawFormula::Kind::Forall ? f_forall(v, body) : f_exists(v, body);
        }
        }
        throw InternalError("unhandled formula kind");
    }

    std::optional<std::string> infer(const RawTerm& t) {
        switch (t.kind) {
        case RawTerm::Kind::Name: {
            if (!t.sort.empty())
                return t.sort;
            for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
                if (it->name == t.text)
                    return it->sort;
            auto consts = sig_.constants_named(t.text);
            if (consts.size() == 1)
                return consts[0]->result;
            if (!consts.empty())
                return std::nullopt;
            auto fr = free_.find(t.text);
            if (fr != free_.end())
                return fr->second;
            return std::nullopt;
        }
        case RawTerm::Kind::Number:
            return std::nullopt;
        case RawTerm::Kind::Literal:
            if (sig_.literal_sort.empty())
                return std::nullopt;
            return sig_.literal_sort;
        case RawTerm::Kind::Bracket:
            return std::string("W");
        case RawTerm::Kind::Op: {
            auto s = infer(t.args[0]);
            return s ? s : infer(t.args[1]);
        }
        }
        return std::nullopt;
    }

    Term term(const RawTerm& t, const std::string& sort) {
        switch (t.kind) {
        case RawTerm::Kind::Name: {
            for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
                if (it->name == t.text) {
                    if (it->sort != sort || (!t.sort.empty() && t.sort != sort))
                        throw ParseError("variable '" + t.text + "' has sort " + it->sort + ", expected " + sort,
                                         t.pos);
                    return make_var(t.text, sort);
                }
            auto consts = sig_.constants_named(t.text);
            if (!consts.empty()) {
                for (auto* c : consts)
                    if (c->result == sort)
                        return make_app(t.text, sort);
                throw ParseError("constant '" + t.text + "' has no version of sort " + sort, t.pos);
            }
            if (sig_.is_function_name(t.text))
                throw ParseError("function symbol '" + t.text + "' used as a variable", t.pos);
            if (!t.sort.empty() && t.sort != sort)
                throw ParseError("variable '" + t.text + "' annotated " + t.sort + ", expected " + sort, t.pos);
            auto [it, inserted] = free_.emplace(t.text, sort);
            if (!inserted && it->second != sort)
                throw ParseError("free variable '" + t.text + "' used at sorts " + it->second + " and " + sort,
                                 t.pos);
            return make_var(t.text, sort);
        }
        case RawTerm::Kind::Number: {
            const long n = std::stol(t.text);
            if (n == 0 || n == 1) {
                if (!sig_.find_function(t.text, {}) && sig_.constants_named(t.text).empty())
                    throw ParseError("no constant " + t.text + " in " + sig_.name, t.pos);
                for (auto* c : sig_.constants_named(t.text))
                    if (c->result == sort)
                        return make_app(t.text, sort);
                throw ParseError("no constant " + t.text + " of sort " + sort, t.pos);
            }
            // n = 1 + 1 + ... + 1
            RawTerm one{RawTerm::Kind::Number, "1", {}, {}, t.pos};
            Term acc = term(one, sort);
            for (long i = 1; i < n; ++i)
                acc = apply("+", sort, {acc, term(one, sort)}, t.pos);
            return acc;
        }
        case RawTerm::Kind::Literal:
            if (sig_.literal_sort.empty())
                throw ParseError("{...} constants are not part of " + sig_.name, t.pos);
            if (sig_.literal_sort != sort)
                throw ParseError("{...} constant has sort " + sig_.literal_sort + ", expected " + sort, t.pos);
            return make_literal(t.text, sort);
        case RawTerm::Kind::Bracket:
            if (sort != "W" || !sig_.find_function("[]", {"R"}))
                throw ParseError("Teichmüller bracket needs sort W in a two-sorted signature", t.pos);
            return make_app("[]", "W", {term(t.args[0], "R")});
        case RawTerm::Kind::Op:
            return apply(t.text, sort, {term(t.args[0], sort), term(t.args[1], sort)}, t.pos);
        }
        throw InternalError("unhandled term kind");
    }

private:
    Term apply(const std::string& f, const std::string& sort, std::vector<Term> args, std::size_t pos) {
        std::vector<std::string> sorts;
        for (const auto& a : args)
            sorts.push_back(a->sort);
        const FunctionSymbol* fs = sig_.find_function(f, sorts);
        if (!fs || fs->result != sort)
            throw ParseError("no symbol '" + f + "' of sort " + sort + " in " + sig_.name, pos);
        return make_app(f, sort, std::move(args));
    }

    const Signature& sig_;
    std::vector<Var> bound_;
    std::map<std::string, std::string> free_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
    Parser p(text);
    RawFormula raw = p.formula_top();
    return Elaborator(sig).formula(raw);
}

Term parse_term(std::string_view text, const Signature& sig, const std::string& sort) {
    Parser p(text);
    RawTerm raw = p.term_top();
    Elaborator e(sig);
    std::string s = sort;
    if (s.empty()) {
        auto inferred = e.infer(raw);
        s = inferred ? *inferred : sig.default_sort();
    }
    return e.term(raw, s);
}

// ---- printer ------------------------------------------------------------------

namespace {

void print_term(std::string& out, const Term& t, int prec, bool annotate) {
    switch (t->kind) {
    case TermNode::Kind::Var:
        out += t->name;
        if (annotate)
            out += ":" + t->sort;
        return;
    case TermNode::Kind::Literal:
        out += "{" + t->name + "}";
        return;
    case TermNode::Kind::App:
        break;
    }
    if (t->args.empty()) {
        out += t->name;
        return;
    }
    if (t->name == "[]") {
        out += "[";
        print_term(out, t->args[0], 0, annotate);
        out += "]";
        return;
    }
    if ((t->name == "+" || t->name == "*") && t->args.size() == 2) {
        const int my = t->name == "+" ? 1 : 2;
        if (prec > my)
            out += "(";
        print_term(out, t->args[0], my, annotate);
        out += " " + t->name + " ";
        print_term(out, t->args[1], my + 1, annotate);
        if (prec > my)
            out += ")";
        return;
    }
    out += t->name + "(";
    for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i)
            out += ", ";
        print_term(out, t->args[i], 0, annotate);
    }
    out += ")";
}

struct Printer {
    bool multi;
    std::set<std::string> bound;
    std::string out;

    void term(const Term& t) {
        // free variables carry their sort so the text re-parses identically
        if (multi && t->kind == TermNode::Kind::Var && !bound.count(t->name)) {
            out += t->name + ":" + t->sort;
            return;
        }
        if (t->kind == TermNode::Kind::App && !t->args.empty()) {
            std::string s;
            print_app(s, t, 0);
            out += s;
            return;
        }
        print_term(out, t, 0, false);
    }
    void print_app(std::string& s, const Term& t, int prec) {
        if (t->kind != TermNode::Kind::App || t->args.empty()) {
            std::string saved;
            std::swap(saved, out);
            term(t);
            std::swap(saved, out);
            s += saved;
            return;
        }
        if (t->name == "[]") {
            s += "[";
            print_app(s, t->args[0], 0);
            s += "]";
            return;
        }
        const int my = t->name == "+" ? 1 : 2;
        if (prec > my)
            s += "(";
        print_app(s, t->args[0], my);
        s += " " + t->name + " ";
        print_app(s, t->args[1], my + 1);
        if (prec > my)
            s += ")";
    }

    void formula(const Formula& f, int prec) {
        switch (f->kind) {
        case K::True:
            out += "true";
            return;
        case K::False:
            out += "false";
            return;
        case K::Eq:
            term(f->terms[0]);
            out += " = ";
            term(f->terms[1]);
            return;
        case K::Rel:
            if (f->name == "<" && f->terms.size() == 2) {
                term(f->terms[0]);
                out += " < ";
                term(f->terms[1]);
            } else if (f->terms.size() == 1) {
                term(f->terms[0]);
                out += " in " + f->name;
            } else {
                throw UsageError("relation " + f->name + " has no concrete syntax");
            }
            return;
        case K::Not: {
            const Formula& s = f->subs[0];
            out += "~";
            if (s->kind == K::Not || s->kind == K::True || s->kind == K::False) {
                formula(s, 4);
            } else {
                out += "(";
                formula(s, 0);
                out += ")";
            }
            return;
        }
        case K::And:
        case K::Or: {
            const int my = f->kind == K::And ? 3 : 2;
            if (prec > my)
                out += "(";
            for (std::size_t i = 0; i < f->subs.size(); ++i) {
                if (i)
                    out += f->kind == K::And ? " & " : " | ";
                formula(f->subs[i], my + 1);
            }
            if (prec > my)
                out += ")";
            return;
        }
        case K::Implies:
            if (prec > 1)
                out += "(";
            formula(f->subs[0], 2);
            out += " -> ";
            formula(f->subs[1], 1);
            if (prec > 1)
                out += ")";
            return;
        case K::Forall:
        case K::Exists: {
            out += f->kind == K::Forall ? "A " : "E ";
            out += f->name;
            if (multi)
                out += ":" + f->sort;
            out += " (";
            const bool had = bound.count(f->name) > 0;
            bound.insert(f->name);
            formula(f->subs[0], 0);
            if (!had)
                bound.erase(f->name);
            out += ")";
            return;
        }
        }
    }
};

void collect_sorts(const Term& t, std::set<std::string>& s) {
    s.insert(t->sort);
    for (const auto& a : t->args)
        collect_sorts(a, s);
}

void collect_sorts(const Formula& f, std::set<std::string>& s) {
    if (f->is_quantifier())
        s.insert(f->sort);
    for (const auto& t : f->terms)
        collect_sorts(t, s);
    for (const auto& g : f->subs)
        collect_sorts(g, s);
}

}  // namespace

std::string to_string(const Formula& f, const Signature* sig) {
    bool multi;
    if (sig) {
        multi = sig->sorts.size() > 1;
    } else {
        std::set<std::string> sorts;
        collect_sorts(f, sorts);
        multi = sorts.size() > 1;
    }
    Printer p{multi, {}, {}};
    p.formula(f, 0);
    return p.out;
}

std::string to_string(const Term& t, bool annotate_vars) {
    std::string out;
    print_term(out, t, 0, annotate_vars);
    return out;
}

// ---- classification ---------------------------------------------------------------

std::string to_string(ComplexityClass c) {
    switch (c) {
    case ComplexityClass::QuantifierFree:
        return "quantifier-free";
    case ComplexityClass::ExistentialPositive:
        return "existential-positive";
    case ComplexityClass::Existential:
        return "existential";
    case ComplexityClass::Universal:
        return "universal";
    case ComplexityClass::Full:
        return "full";
    }
    return "?";
}

namespace {

struct Shape {
    bool has_quantifier = false;
    bool positive = true;         // no negation, implication or universal quantifier
    bool exists_only = true;      // every quantifier existential after pushing negations
    bool forall_only = true;
};

void scan(const Formula& f, bool pos, Shape& s) {
    switch (f->kind) {
    case K::True:
    case K::False:
    case K::Eq:
    case K::Rel:
        return;
    case K::Not:
        s.positive = false;
        scan(f->subs[0], !pos, s);
        return;
    case K::And:
    case K::Or:
        for (const auto& g : f->subs)
            scan(g, pos, s);
        return;
    case K::Implies:
        s.positive = false;
        scan(f->subs[0], !pos, s);
        scan(f->subs[1], pos, s);
        return;
    case K::Forall:
    case K::Exists: {
        s.has_quantifier = true;
        const bool existential = (f->kind == K::Exists) == pos;
        if (f->kind == K::Forall)
            s.positive = false;
        if (existential)
            s.forall_only = false;
        else
            s.exists_only = false;
        scan(f->subs[0], pos, s);
        return;
    }
    }
}

int rank(ComplexityClass c) {
    switch (c) {
    case ComplexityClass::QuantifierFree:
        return 0;
    case ComplexityClass::ExistentialPositive:
        return 1;
    case ComplexityClass::Existential:
    case ComplexityClass::Universal:
        return 2;
    case ComplexityClass::Full:
        return 3;
    }
    return 3;
}

}  // namespace

ComplexityClass classify(const Formula& f) {
    Shape s;
    scan(f, true, s);
    if (!s.has_quantifier)
        return ComplexityClass::QuantifierFree;
    if (s.positive)
        return ComplexityClass::ExistentialPositive;
    if (s.exists_only)
        return ComplexityClass::Existential;
    if (s.forall_only)
        return ComplexityClass::Universal;
    return ComplexityClass::Full;
}

bool class_leq(ComplexityClass a, ComplexityClass b) {
    if (a == b || a == ComplexityClass::QuantifierFree || b == ComplexityClass::Full)
        return true;
    return a == ComplexityClass::ExistentialPositive && b == ComplexityClass::Existential;
}

ComplexityClass join(ComplexityClass a, ComplexityClass b) {
    if (class_leq(a, b))
        return b;
    if (class_leq(b, a))
        return a;
    return rank(a) == 2 && rank(b) == 2 ? ComplexityClass::Full : ComplexityClass::Full;
}

// ---- variables and substitution -------------------------------------------------------

std::set<Var> term_vars(const Term& t) {
    std::set<Var> out;
    std::function<void(const Term&)> go = [&](const Term& u) {
        if (u->kind == TermNode::Kind::Var)
            out.insert({u->name, u->sort});
        for (const auto& a : u->args)
            go(a);
    };
    go(t);
    return out;
}

namespace {
void free_vars_rec(const Formula& f, std::set<std::string>& bound, std::set<Var>& out) {
    for (const auto& t : f->terms)
        for (const auto& v : term_vars(t))
            if (!bound.count(v.name))
                out.insert(v);
    if (f->is_quantifier()) {
        const bool had = bound.count(f->name) > 0;
        bound.insert(f->name);
        free_vars_rec(f->subs[0], bound, out);
        if (!had)
            bound.erase(f->name);
        return;
    }
    for (const auto& g : f->subs)
        free_vars_rec(g, bound, out);
}
}  // namespace

std::set<Var> free_vars(const Formula& f) {
    std::set<std::string> bound;
    std::set<Var> out;
    free_vars_rec(f, bound, out);
    return out;
}

std::set<std::string> all_var_names(const Formula& f) {
    std::set<std::string> out;
    std::function<void(const Formula&)> go = [&](const Formula& g) {
        if (g->is_quantifier())
            out.insert(g->name);
        for (const auto& t : g->terms)
            for (const auto& v : term_vars(t))
                out.insert(v.name);
        for (const auto& s : g->subs)
            go(s);
    };
    go(f);
    return out;
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
    if (t->kind == TermNode::Kind::Var) {
        auto it = sub.find(t->name);
        if (it == sub.end())
            return t;
        if (it->second->sort != t->sort)
            throw DomainError("substituting a term of sort " + it->second->sort + " for " + t->name + ":" + t->sort);
        return it->second;
    }
    if (t->args.empty())
        return t;
    std::vector<Term> args;
    bool changed = false;
    for (const auto& a : t->args) {
        args.push_back(substitute(a, sub));
        changed = changed || args.back() != a;
    }
    return changed ? make_app(t->name, t->sort, std::move(args)) : t;
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& sub) {
    if (sub.empty())
        return f;
    switch (f->kind) {
    case K::True:
    case K::False:
        return f;
    case K::Eq:
        return f_eq(substitute(f->terms[0], sub), substitute(f->terms[1], sub));
    case K::Rel: {
        std::vector<Term> args;
        for (const auto& t : f->terms)
            args.push_back(substitute(t, sub));
        return f_rel(f->name, std::move(args));
    }
    case K::Not:
        return f_not(substitute(f->subs[0], sub));
    case K::And:
    case K::Or: {
        std::vector<Formula> parts;
        for (const auto& g : f->subs)
            parts.push_back(substitute(g, sub));
        return f->kind == K::And ? f_and(std::move(parts)) : f_or(std::move(parts));
    }
    case K::Implies:
        return f_implies(substitute(f->subs[0], sub), substitute(f->subs[1], sub));
    case K::Forall:
    case K::Exists: {
        std::map<std::string, Term> inner = sub;
        inner.erase(f->name);
        if (inner.empty())
            return f;
        // rename the binder if it would capture a variable of a replacement
        const auto body_free = free_vars(f->subs[0]);
        bool capture = false;
        std::set<std::string> avoid;
        for (const auto& [name, term] : inner) {
            bool occurs = false;
            for (const auto& v : body_free)
                occurs = occurs || v.name == name;
            for (const auto& v : term_vars(term)) {
                avoid.insert(v.name);
                if (occurs && v.name == f->name)
                    capture = true;
            }
        }
        Var v = f->bound();
        Formula body = f->subs[0];
        if (capture) {
            NameSupply names(all_var_names(f));
            names.reserve(avoid);
            for (const auto& [name, term] : inner)
                names.reserve(name);
            v.name = names.fresh(f->name);
            body = substitute(body, {{f->name, make_var(v)}});
        }
        body = substitute(body, inner);
        return f->kind == K::Forall ? f_forall(v, body) : f_exists(v, body);
    }
    }
    throw InternalError("unhandled formula kind");
}

std::size_t quantifier_depth(const Formula& f) {
    std::size_t d = 0;
    for (const auto& g : f->subs)
        d = std::max(d, quantifier_depth(g));
    return d + (f->is_quantifier() ? 1 : 0);
}

// ---- unnesting ------------------------------------------------------------------

std::string NameSupply::fresh(const std::string& base) {
    std::string n = base;
    while (used_.count(n))
        n += "'";
    used_.insert(n);
    return n;
}

std::string NameSupply::fresh_indexed(const std::string& prefix) {
    for (unsigned k = 1;; ++k) {
        std::string n = prefix + std::to_string(k);
        if (!used_.count(n)) {
            used_.insert(n);
            return n;
        }
    }
}

namespace {

bool is_var(const Term& t) { return t->kind == TermNode::Kind::Var; }
bool is_const(const Term& t) {
    return t->kind == TermNode::Kind::Literal || (t->kind == TermNode::Kind::App && t->args.empty());
}
bool all_vars(const std::vector<Term>& ts) { return std::all_of(ts.begin(), ts.end(), is_var); }

}  // namespace

bool is_unnested_atom(const Formula& f) {
    if (f->kind == K::Rel)
        return all_vars(f->terms);
    if (f->kind != K::Eq)
        return false;
    const Term& l = f->terms[0];
    const Term& r = f->terms[1];
    if (is_var(l) && (is_var(r) || is_const(r)))
        return true;
    return l->kind == TermNode::Kind::App && !l->args.empty() && all_vars(l->args) && is_var(r);
}

bool is_unnested(const Formula& f) {
    if (f->is_atomic())
        return is_unnested_atom(f);
    for (const auto& g : f->subs)
        if (!is_unnested(g))
            return false;
    return true;
}

namespace {

struct Flattener {
    NameSupply& names;
    std::vector<Var> fresh;
    std::vector<Formula> defs;

    Term to_var(const Term& t) {
        if (is_var(t))
            return t;
        // subterms first, so every definition only uses earlier variables
        const Term body = is_const(t) ? t : flatten_args(t);
        Var u{names.fresh_indexed("u"), t->sort};
        fresh.push_back(u);
        defs.push_back(is_const(t) ? f_eq(make_var(u), body) : f_eq(body, make_var(u)));
        return make_var(u);
    }
    Term flatten_args(const Term& t) {
        std::vector<Term> args;
        for (const auto& a : t->args)
            args.push_back(to_var(a));
        return make_app(t->name, t->sort, std::move(args));
    }
};

Formula unnest_atom(const Formula& f, bool positive, NameSupply& names) {
    if (is_unnested_atom(f))
        return f;
    Flattener fl{names, {}, {}};
    Formula core;
    if (f->kind == K::Rel) {
        std::vector<Term> args;
        for (const auto& t : f->terms)
            args.push_back(fl.to_var(t));
        core = f_rel(f->name, std::move(args));
    } else {
        Term l = f->terms[0], r = f->terms[1];
        // orient so that a variable, if any, sits on the right of an application
        if (is_var(l) && !is_var(r) && !is_const(r))
            std::swap(l, r);
        if (is_const(l) && is_var(r)) {
            core = f_eq(r, l);
        } else {
            const Term rv = fl.to_var(r);
            if (is_const(l))
                core = f_eq(rv, l);
            else if (is_var(l))
                core = f_eq(l, rv);
            else
                core = f_eq(fl.flatten_args(l), rv);
        }
    }
    if (fl.fresh.empty())
        return core;
    fl.defs.push_back(core);
    if (positive)
        return f_exists(fl.fresh, f_and(fl.defs));
    const Formula target = fl.defs.back();
    fl.defs.pop_back();
    return f_forall(fl.fresh, f_implies(f_and(fl.defs), target));
}

Formula unnest_rec(const Formula& f, bool positive, NameSupply& names) {
    switch (f->kind) {
    case K::True:
    case K::False:
        return f;
    case K::Eq:
    case K::Rel:
        return unnest_atom(f, positive, names);
    case K::Not:
        return f_not(unnest_rec(f->subs[0], !positive, names));
    case K::And:
    case K::Or: {
        std::vector<Formula> parts;
        for (const auto& g : f->subs)
            parts.push_back(unnest_rec(g, positive, names));
        return f->kind == K::And ? f_and(std::move(parts)) : f_or(std::move(parts));
    }
    case K::Implies:
        return f_implies(unnest_rec(f->subs[0], !positive, names), unnest_rec(f->subs[1], positive, names));
    case K::Forall:
        return f_forall(f->bound(), unnest_rec(f->subs[0], positive, names));
    case K::Exists:
        return f_exists(f->bound(), unnest_rec(f->subs[0], positive, names));
    }
    throw InternalError("unhandled formula kind");
}

}  // namespace

Formula unnest(const Formula& f, NameSupply& names) {
    names.reserve(all_var_names(f));
    return unnest_rec(f, true, names);
}

Formula unnest(const Formula& f) {
    NameSupply names;
    return unnest(f, names);
}

namespace {

Formula rename_rec(const Formula& f, NameSupply& names) {
    if (f->is_quantifier()) {
        Var v = f->bound();
        Formula body = f->subs[0];
        const std::string fresh = names.fresh(v.name);
        if (fresh != v.name) {
            body = substitute(body, {{v.name, make_var(fresh, v.sort)}});
            v.name = fresh;
        }
        body = rename_rec(body, names);
        return f->kind == K::Forall ? f_forall(v, body) : f_exists(v, body);
    }
    switch (f->kind) {
    case K::Not:
        return f_not(rename_rec(f->subs[0], names));
    case K::And:
    case K::Or: {
        std::vector<Formula> parts;
        for (const auto& g : f->subs)
            parts.push_back(rename_rec(g, names));
        return f->kind == K::And ? f_and(std::move(parts)) : f_or(std::move(parts));
    }
    case K::Implies:
        return f_implies(rename_rec(f->subs[0], names), rename_rec(f->subs[1], names));
    default:
        return f;
    }
}

}  // namespace

Formula rename_binders_apart(const Formula& f, NameSupply& names) {
    for (const auto& v : free_vars(f))
        names.reserve(v.name);
    return rename_rec(f, names);
}

}  // namespace tiltlab
