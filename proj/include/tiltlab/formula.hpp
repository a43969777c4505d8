#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tiltlab {

struct FunctionSymbol {
    std::string name;
    std::vector<std::string> args;
    std::string result;
};

struct RelationSymbol {
    std::string name;
    std::vector<std::string> args;
};

// A many-sorted first-order signature. Function names may be overloaded by
// argument sorts ("+" on W and on R); constants are 0-ary functions.
struct Signature {
    std::string name;
    std::vector<std::string> sorts;
    std::vector<FunctionSymbol> functions;
    std::vector<RelationSymbol> relations;
    std::string literal_sort;  // sort accepting {perf-ring text} constants; empty if none

    const std::string& default_sort() const { return sorts.front(); }
    bool has_sort(const std::string& s) const;
    const FunctionSymbol* find_function(const std::string& fname, const std::vector<std::string>& arg_sorts) const;
    std::vector<const FunctionSymbol*> constants_named(const std::string& cname) const;
    bool is_function_name(const std::string& fname) const;
    const RelationSymbol* find_relation(const std::string& rname) const;

    Signature with_constant(const std::string& cname, const std::string& sort) const;
    Signature with_literals(const std::string& sort, const std::string& new_name) const;
    bool same_symbols(const Signature& o) const;
};

namespace signatures {
Signature ring();            // L_r, sort R
Signature valued();          // L_val = L_r + O
Signature local();           // L_lcr = L_r + m
Signature value_group();     // L_oag + vp, sort G
// sorts W and R; W carries L_r, R carries `base`, plus [ ]: R -> W
Signature witt_pair(const Signature& base);
}  // namespace signatures

struct Var {
    std::string name;
    std::string sort;
    friend auto operator<=>(const Var&, const Var&) = default;
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
    enum class Kind { Var, App, Literal };
    Kind kind;
    std::string name;  // variable, function symbol, or literal text
    std::string sort;
    std::vector<Term> args;
};

Term make_var(const std::string& name, const std::string& sort);
Term make_var(const Var& v);
Term make_app(const std::string& f, const std::string& sort, std::vector<Term> args = {});
Term make_literal(const std::string& text, const std::string& sort);

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    enum class Kind { True, False, Eq, Rel, Not, And, Or, Implies, Forall, Exists };
    Kind kind;
    std::string name;  // relation name, or the bound variable
    std::string sort;  // sort of the bound variable
    std::vector<Term> terms;
    std::vector<Formula> subs;

    bool is_atomic() const { return kind == Kind::Eq || kind == Kind::Rel; }
    bool is_quantifier() const { return kind == Kind::Forall || kind == Kind::Exists; }
    Var bound() const { return {name, sort}; }
};

Formula f_true();
Formula f_false();
Formula f_eq(Term a, Term b);
Formula f_rel(const std::string& r, std::vector<Term> args);
Formula f_not(Formula a);
Formula f_and(std::vector<Formula> parts);  // flattens; empty gives true
Formula f_or(std::vector<Formula> parts);   // flattens; empty gives false
Formula f_implies(Formula a, Formula b);
Formula f_forall(const Var& v, Formula body);
Formula f_exists(const Var& v, Formula body);
Formula f_forall(const std::vector<Var>& vs, Formula body);
Formula f_exists(const std::vector<Var>& vs, Formula body);

Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig, const std::string& sort = "");

// Binder sorts are printed when the signature (or, without one, the formula)
// has more than one sort.
std::string to_string(const Formula& f, const Signature* sig = nullptr);
std::string to_string(const Term& t, bool annotate_vars = false);

enum class ComplexityClass { QuantifierFree, ExistentialPositive, Existential, Universal, Full };
std::string to_string(ComplexityClass c);
ComplexityClass classify(const Formula& f);
ComplexityClass join(ComplexityClass a, ComplexityClass b);
bool class_leq(ComplexityClass a, ComplexityClass b);

std::set<Var> free_vars(const Formula& f);
std::set<Var> term_vars(const Term& t);
std::set<std::string> all_var_names(const Formula& f);  // free and bound
Formula substitute(const Formula& f, const std::map<std::string, Term>& sub);
Term substitute(const Term& t, const std::map<std::string, Term>& sub);
std::size_t quantifier_depth(const Formula& f);
bool is_unnested_atom(const Formula& f);
bool is_unnested(const Formula& f);

// Produces fresh names that avoid everything reserved so far.
class NameSupply {
public:
    NameSupply() = default;
    explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}
    void reserve(const std::string& n) { used_.insert(n); }
    void reserve(const std::set<std::string>& ns) { used_.insert(ns.begin(), ns.end()); }
    bool used(const std::string& n) const { return used_.count(n) > 0; }
    // `base` itself if free, else base' , base'' ...
    std::string fresh(const std::string& base);
    // prefix1, prefix2, ...
    std::string fresh_indexed(const std::string& prefix);

private:
    std::set<std::string> used_;
};

// Equivalent formula whose atoms are x = y, x = c, F(x..) = y or R(x..).
// Fresh variables are bound existentially at positive polarity and
// universally (as a guard) at negative polarity.
Formula unnest(const Formula& f);
Formula unnest(const Formula& f, NameSupply& names);

// Renames binders so that no two binders share a name and none clashes with
// a free variable or a reserved name. Names are kept whenever possible.
Formula rename_binders_apart(const Formula& f, NameSupply& names);

// Standard corpora (single source of truth for tests, docs and the verify command).
std::vector<std::string> witt_pair_corpus();  // 50 sentences over witt_pair(ring())
std::vector<std::string> local_ring_corpus();  // 50 existential-positive L_lcr sentences

}  // namespace tiltlab
