#pragma once

#include "tiltlab/formula.hpp"
#include "tiltlab/prime_config.hpp"
#include "tiltlab/untilt.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tiltlab {

// Coordinates chosen for each source variable.
using CoordMap = std::map<std::string, std::vector<Var>>;

class Interpretation;
using InterpPtr = std::shared_ptr<const Interpretation>;

class Interpretation {
public:
    // domain(source sort, coordinate variables)
    using DomainFn = std::function<Formula(const std::string&, const std::vector<Var>&)>;
    // atomic(unnested source atom, coordinates of its variables, names to avoid/extend)
    using AtomicFn = std::function<Formula(const Formula&, const CoordMap&, NameSupply&)>;

    std::string name;
    Signature source;
    Signature target;
    std::map<std::string, std::vector<std::string>> coord_sorts;  // source sort -> target sorts
    DomainFn domain;
    AtomicFn atomic;
    ComplexityClass declared = ComplexityClass::QuantifierFree;
    std::string coordinate_map;   // f_Γ, documentation only
    std::vector<InterpPtr> stages;  // non-empty for composites

    std::size_t dimension(const std::string& sort) const;
    bool is_composite() const { return !stages.empty(); }
};

// Deterministic coordinate names for x of the given sort: x itself in
// dimension one, else x_0, x_1, ...; clashes are resolved with primes.
std::vector<Var> coordinates_for(const Interpretation& g, const Var& x, NameSupply& names);

struct ReductionResult {
    Formula source;  // the unnested, binder-renamed input actually translated
    Formula result;
    CoordMap coords;  // every source variable (free and bound) -> its coordinates
};

// The reduction map. Unnests and renames binders first; free variables get
// coordinates as well, unless `free_coords` already fixes them.
ReductionResult reduce_formula_traced(const Interpretation& g, const Formula& phi, const CoordMap& free_coords = {},
                                      NameSupply* names = nullptr);
Formula reduce_formula(const Interpretation& g, const Formula& phi);

// Applies the stages of a composite one after another, keeping every step.
std::vector<ReductionResult> reduce_staged(const Interpretation& g, const Formula& phi);

Interpretation identity_interpretation(const Signature& sig);
Interpretation compose(const Interpretation& first, const Interpretation& second);

// (W_n(R), R) in R, for R carrying `base` (one-sorted, containing L_r).
// Extra W constants map to R constants named <name>0 .. <name>{n-1}.
Interpretation gamma_n(unsigned n, const Config& cfg, const Signature& base,
                       const std::vector<std::string>& w_constants = {});
// (O_K/(p^n), m_n) in (W_n(O_F), O_F) with the constant c for xi mod p^n.
Interpretation a_n(unsigned n, const Untilt& u);
// gamma_n over L_lcr carrying c to c0..c{n-1}: the middle step of residue_to_tilt
Interpretation b_n(unsigned n, const Untilt& u);
// ((O_F, m_F), c0..c{n-1}) in the valued field (F, O) with R_0 literals.
Interpretation delta_n(unsigned n, const Untilt& u);
Interpretation residue_to_tilt(unsigned n, const Untilt& u);
// (vK, vp) in (F, O): the value group as F^x modulo units.
Interpretation value_group_translation(const Untilt& u);

// Signature of the residue rings carrying the constant c.
Signature witt_local_signature();
Signature tilt_signature();  // L_val with R_0 literals

}  // namespace tiltlab
