#pragma once

#include "tiltlab/formula.hpp"
#include "tiltlab/untilt.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tiltlab {

// Finite many-sorted structure; elements of a sort are 0..size-1.
struct FiniteStructure {
    struct FunctionTable {
        std::string name;
        std::vector<std::string> args;
        std::string result;
        std::vector<std::uint32_t> table;  // row-major over the argument sorts
    };
    struct RelationTable {
        std::string name;
        std::vector<std::string> args;
        std::vector<char> table;
    };

    Signature sig;
    std::map<std::string, std::uint32_t> sizes;
    std::vector<FunctionTable> functions;
    std::vector<RelationTable> relations;
    std::map<std::string, std::vector<std::string>> labels;  // optional element names

    const FunctionTable& function(const std::string& name, const std::vector<std::string>& arg_sorts) const;
    const RelationTable& relation(const std::string& name) const;
    std::uint32_t apply(const std::string& name, const std::vector<std::string>& arg_sorts,
                        const std::vector<std::uint32_t>& args) const;
};

// F_q over `sig` (ring, valued or local signature; O is everything, m = {0}).
FiniteStructure build_fq_structure(const Config& cfg, const Signature& sig);
FiniteStructure build_fq_structure(const Config& cfg);
// (W_n(F_q), F_q) over witt_pair(ring()); W element index = sum code(x_i) q^i.
FiniteStructure build_wn_structure(const Config& cfg, unsigned n);
std::uint32_t wn_index(const WittVec& x);

std::uint64_t default_budget();  // TILTLAB_BUDGET or 10^7

struct EvalStats {
    std::uint64_t assignments = 0;  // quantifier instantiations performed
};

using FiniteAssignment = std::map<std::string, std::uint32_t>;

bool eval(const FiniteStructure& m, const Formula& phi, std::uint64_t budget = default_budget(),
          EvalStats* stats = nullptr);
bool eval(const FiniteStructure& m, const Formula& phi, const FiniteAssignment& env,
          std::uint64_t budget = default_budget(), EvalStats* stats = nullptr);

// ---- exact rings of infinite size -----------------------------------------------

using Value = std::variant<PerfElem, Digits, WittVec>;
using Assignment = std::map<std::string, Value>;
std::string to_string(const Value& v);

class InfiniteModel {
public:
    virtual ~InfiniteModel() = default;
    virtual const Signature& signature() const = 0;
    virtual Value constant(const std::string& name, const std::string& sort) const = 0;
    virtual Value literal(const std::string& text, const std::string& sort) const;
    virtual Value apply(const std::string& f, const std::vector<Value>& args) const = 0;
    virtual bool relation(const std::string& r, const std::vector<Value>& args) const = 0;
    virtual bool equal(const Value& a, const Value& b) const { return a == b; }
    // A value for v making `atom` true given env, when one can be computed.
    virtual std::optional<Value> solve(const Formula& atom, const Var& v, const Assignment& env) const;
};

// The field F = F_q((t^{1/p^inf})) restricted to finite sums, with O and m.
class TiltModel : public InfiniteModel {
public:
    TiltModel(Config cfg, Signature sig);
    explicit TiltModel(Config cfg);
    const Signature& signature() const override { return sig_; }
    Value constant(const std::string& name, const std::string& sort) const override;
    Value literal(const std::string& text, const std::string& sort) const override;
    Value apply(const std::string& f, const std::vector<Value>& args) const override;
    bool relation(const std::string& r, const std::vector<Value>& args) const override;
    std::optional<Value> solve(const Formula& atom, const Var& v, const Assignment& env) const override;
    void set_constant(const std::string& name, PerfElem value) { named_.insert_or_assign(name, std::move(value)); }

private:
    Config cfg_;
    Signature sig_;
    std::map<std::string, PerfElem> named_;  // c0, c1, ... when present
};

// O_F with m and the constants c0..c{n-1} for the coordinates of xi.
TiltModel local_tilt_model(const Untilt& u, unsigned n);

// O_K/(p^n) through digits, over L_lcr.
class ResidueModel : public InfiniteModel {
public:
    ResidueModel(Untilt u, unsigned n);
    const Signature& signature() const override { return sig_; }
    Value constant(const std::string& name, const std::string& sort) const override;
    Value apply(const std::string& f, const std::vector<Value>& args) const override;
    bool relation(const std::string& r, const std::vector<Value>& args) const override;

private:
    Untilt u_;
    unsigned n_;
    Signature sig_;
};

// (W_n(O_F), O_F) with c = xi mod p^n.
class WittPairModel : public InfiniteModel {
public:
    WittPairModel(Untilt u, unsigned n);
    const Signature& signature() const override { return sig_; }
    Value constant(const std::string& name, const std::string& sort) const override;
    Value apply(const std::string& f, const std::vector<Value>& args) const override;
    bool relation(const std::string& r, const std::vector<Value>& args) const override;
    // x = r + w * c: w is the cofactor of x - r
    std::optional<Value> solve(const Formula& atom, const Var& v, const Assignment& env) const override;

private:
    Untilt u_;
    unsigned n_;
    Signature sig_;
    WittVec xi_;
};

Value eval_term(const InfiniteModel& m, const Term& t, const Assignment& env);
// Quantifier-free evaluation; disjunctions and conjunctions short-circuit.
bool eval_qf(const InfiniteModel& m, const Formula& phi, const Assignment& env);
// Convenience: F over L_val(R_0) with the given assignment.
bool eval_qf(const Assignment& env, const Formula& phi, const Config& cfg);

struct WitnessCheck {
    bool verified = false;
    Assignment assignment;  // every variable instantiated along the way
    std::string note;       // why verification failed
};

// One-sided check of an existential sentence: each existential variable is
// taken from `hints`, from a defining equation, or from the model's solver.
// Universal quantifiers and quantifiers under negation are rejected.
WitnessCheck check_with_witnesses(const InfiniteModel& m, const Formula& phi, const Assignment& hints);

// The formula with every (existential) quantifier removed.
Formula strip_existentials(const Formula& phi);

}  // namespace tiltlab
