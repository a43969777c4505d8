#pragma once

// Random terms and sentences for property tests.

#include "tiltlab/formula.hpp"

#include <random>
#include <string>
#include <vector>

namespace testgen {

using namespace tiltlab;

struct Gen {
    std::mt19937 rng;
    const Signature* sig;
    std::vector<Var> scope;
    int fresh = 0;

    unsigned pick(unsigned n) { return rng() % n; }

    Term term(const std::string& sort, int depth) {
        std::vector<Var> vs;
        for (const auto& v : scope)
            if (v.sort == sort) vs.push_back(v);
        unsigned roll = pick(10);
        if (!vs.empty() && (depth == 0 || roll < 4)) return make_var(vs[pick(vs.size())]);
        std::vector<const FunctionSymbol*> fs;
        for (const auto& f : sig->functions)
            if (f.result == sort && (depth > 0 || f.args.empty())) fs.push_back(&f);
        const FunctionSymbol* f = fs[pick(fs.size())];
        std::vector<Term> args;
        for (const auto& a : f->args) args.push_back(term(a, depth - 1));
        return make_app(f->name, f->result, args);
    }

    Formula atom() {
        const std::string& s = sig->sorts[pick(sig->sorts.size())];
        if (!sig->relations.empty() && pick(3) == 0) {
            const auto& r = sig->relations[pick(sig->relations.size())];
            std::vector<Term> args;
            for (const auto& a : r.args) args.push_back(term(a, 2));
            return f_rel(r.name, args);
        }
        return f_eq(term(s, 2), term(s, 2));
    }

    Formula formula(int depth) {
        if (depth == 0) return atom();
        switch (pick(7)) {
        case 0: return f_not(formula(depth - 1));
        case 1: return f_and({formula(depth - 1), formula(depth - 1)});
        case 2: return f_or({formula(depth - 1), formula(depth - 1)});
        case 3: return f_implies(formula(depth - 1), formula(depth - 1));
        case 4:
        case 5: {
            Var v{"v" + std::to_string(fresh++), sig->sorts[pick(sig->sorts.size())]};
            scope.push_back(v);
            Formula body = formula(depth - 1);
            scope.pop_back();
            return pick(2) ? f_exists(v, body) : f_forall(v, body);
        }
        default: return atom();
        }
    }

    // closed: only quantified variables ever enter scope
    Formula sentence(int depth) {
        scope.clear();
        Var v{"v" + std::to_string(fresh++), sig->sorts[pick(sig->sorts.size())]};
        scope.push_back(v);
        Formula body = formula(depth);
        scope.clear();
        return pick(2) ? f_exists(v, body) : f_forall(v, body);
    }
};

}  // namespace testgen
