#include "tiltlab/acceptance.hpp"
#include "tiltlab/congruence.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/evaluator.hpp"
#include "tiltlab/interpretation.hpp"
#include "tiltlab/untilt.hpp"
#include "tiltlab/witt_vec.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace tiltlab;
using nlohmann::json;

namespace {

struct Options {
    std::uint32_t p = 2;
    unsigned d = 1;
    std::vector<std::uint32_t> modulus;
    std::string untilt = "p-power-roots";
    std::string xi_file;
    unsigned n = 1;
    bool as_json = false;
    std::uint64_t budget = 0;

    Config config() const { return PrimeConfig::make(p, d, modulus); }

    Untilt make_untilt(const Config& cfg) const {
        if (xi_file.empty()) return UntiltSpec::by_name(untilt, cfg);
        std::ifstream in(xi_file);
        if (!in) throw ConfigError("cannot read " + xi_file);
        std::vector<PerfElem> coords;
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            coords.push_back(PerfElem::parse(cfg, line));
        }
        if (coords.size() < 2) throw ConfigError("custom xi needs at least two coordinates");
        auto u = UntiltSpec::custom(cfg, coords, "custom");
        if (!is_distinguished(u->xi(static_cast<unsigned>(coords.size()))))
            throw DomainError("the coordinates in " + xi_file + " do not give a distinguished element");
        return u;
    }
};

void add_field_options(CLI::App* sub, Options& o) {
    sub->add_option("--p", o.p, "prime")->capture_default_str();
    sub->add_option("--d", o.d, "residue field degree")->capture_default_str();
    sub->add_option("--modulus", o.modulus, "field modulus, coefficients from z^0 up to the leading 1")->delimiter(',');
    sub->add_flag("--json", o.as_json, "machine-readable output");
}

void add_untilt_options(CLI::App* sub, Options& o) {
    sub->add_option("--untilt", o.untilt, "p-power-roots, cyclotomic or abelian")->capture_default_str();
    sub->add_option("--xi-file", o.xi_file, "custom xi: one Witt coordinate per line");
    sub->add_option("--n", o.n, "level")->capture_default_str()->check(CLI::PositiveNumber);
}

json digits_json(const Digits& d) {
    json digits = json::array();
    for (const auto& b : d.digits()) digits.push_back(b.to_string());
    return {{"untilt", d.untilt()->name()}, {"n", d.level()}, {"digits", digits}};
}

void emit(const Options& o, const json& j, const std::string& text) {
    if (o.as_json) std::cout << j.dump(2) << "\n";
    else std::cout << text << "\n";
}

Interpretation pick_interpretation(const std::string& name, const Options& o) {
    Config cfg = o.config();
    if (name == "gamma") return gamma_n(o.n, cfg, signatures::ring());
    Untilt u = o.make_untilt(cfg);
    if (name == "a") return a_n(o.n, u);
    if (name == "b") return b_n(o.n, u);
    if (name == "delta") return delta_n(o.n, u);
    if (name == "residue-to-tilt") return residue_to_tilt(o.n, u);
    if (name == "witt-to-tilt") return compose(b_n(o.n, u), delta_n(o.n, u));
    if (name == "value-group") return value_group_translation(u);
    throw UsageError("unknown interpretation '" + name + "'");
}

Signature pick_signature(const std::string& name) {
    if (name == "ring") return signatures::ring();
    if (name == "local") return signatures::local();
    if (name == "valued") return signatures::valued();
    if (name == "witt-pair") return signatures::witt_pair(signatures::ring());
    throw UsageError("unknown signature '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tiltlab: Witt vectors, untilts, interpretations and congruence search"};
    app.require_subcommand(1);
    Options o;

    // witt
    auto* witt = app.add_subcommand("witt", "arithmetic in W_n(F_q[t^{1/p^inf}])");
    witt->require_subcommand(1);
    std::string wa, wb;
    auto* wadd = witt->add_subcommand("add", "sum of two Witt vectors");
    auto* wmul = witt->add_subcommand("mul", "product of two Witt vectors");
    auto* wteich = witt->add_subcommand("teich", "Teichmuller representative [x] at level n");
    for (auto* s : {wadd, wmul}) {
        add_field_options(s, o);
        s->add_option("a", wa, "[e0; e1; ...]")->required();
        s->add_option("b", wb, "[e0; e1; ...]")->required();
    }
    add_field_options(wteich, o);
    wteich->add_option("--n", o.n, "level")->capture_default_str()->check(CLI::PositiveNumber);
    wteich->add_option("x", wa, "perfect-ring element")->required();

    // reduce / sharp
    std::string arg;
    auto* red = app.add_subcommand("reduce", "digits of a Witt vector in O_K/(p^n)");
    add_field_options(red, o);
    add_untilt_options(red, o);
    red->add_option("x", arg, "[e0; e1; ...]")->required();
    auto* shp = app.add_subcommand("sharp", "digits of x# in O_K/(p^n)");
    add_field_options(shp, o);
    add_untilt_options(shp, o);
    shp->add_option("x", arg, "perfect-ring element")->required();

    auto* dist = app.add_subcommand("check-distinguished", "is xi distinguished, and W(res)(xi)");
    add_field_options(dist, o);
    add_untilt_options(dist, o);

    // translate
    std::string interp = "auto";
    bool emit_class = false;
    auto* tr = app.add_subcommand("translate", "reduction map of an interpretation");
    add_field_options(tr, o);
    add_untilt_options(tr, o);
    tr->add_option("--interp", interp, "auto, gamma, a, b, delta, residue-to-tilt, witt-to-tilt or value-group")->capture_default_str();
    tr->add_flag("--emit-class", emit_class, "also print the complexity class");
    tr->add_option("formula", arg, "source formula")->required();

    // eval
    std::string structure = "fq", sig_name = "ring";
    auto* ev = app.add_subcommand("eval", "truth of a sentence in a finite structure");
    add_field_options(ev, o);
    ev->add_option("--structure", structure, "fq (F_q over --sig) or wn (W_n(F_q), F_q)")->capture_default_str();
    ev->add_option("--sig", sig_name, "ring, local or valued for fq")->capture_default_str();
    ev->add_option("--n", o.n, "level for wn")->capture_default_str()->check(CLI::PositiveNumber);
    ev->add_option("--budget", o.budget, "quantifier instantiation budget");
    ev->add_option("sentence", arg, "sentence")->required();

    // solve
    std::vector<std::string> eqs, neqs;
    std::string mode = "transfer", gamma_text = "1";
    unsigned N = 1;
    SearchBounds bounds;
    auto* sol = app.add_subcommand("solve", "bounded search for polynomial congruence witnesses");
    add_field_options(sol, o);
    sol->add_option("--eq", eqs, "equation f = 0 (repeatable)");
    sol->add_option("--neq", neqs, "inequation g != 0 (repeatable)");
    sol->add_option("--mode", mode, "residue, valuation, transfer, mod-tN or lift")->capture_default_str();
    sol->add_option("--gamma", gamma_text, "residue ring F_p[t^{1/p^inf}]/(t^gamma)")->capture_default_str();
    sol->add_option("--N", N, "for mod-tN")->capture_default_str();
    sol->add_option("--K", bounds.K, "exponents in (1/p^K)Z")->capture_default_str();
    sol->add_option("--D", bounds.D, "numerator cap (0: automatic)")->capture_default_str();
    sol->add_option("--S", bounds.S, "maximal total support")->capture_default_str();
    sol->add_option("--max-candidates", bounds.max_candidates, "candidate cap")->capture_default_str();

    // distance
    std::string other;
    auto* dst = app.add_subcommand("distance", "v_y(theta_y(xi_x)) between two untilts");
    add_field_options(dst, o);
    add_untilt_options(dst, o);
    dst->add_option("--to", other, "second untilt name")->required();

    // verify
    std::vector<int> ids;
    bool verbose = false;
    auto* ver = app.add_subcommand("verify", "run the acceptance criteria");
    ver->add_option("ids", ids, "criterion numbers (default: all)");
    ver->add_flag("-v", verbose, "per-case diagnostics on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (witt->parsed()) {
            Config cfg = o.config();
            WittVec r;
            if (wteich->parsed()) {
                r = teichmuller(PerfElem::parse(cfg, wa), o.n);
            } else {
                WittVec a = WittVec::parse(cfg, wa), b = WittVec::parse(cfg, wb);
                r = wadd->parsed() ? witt_add(a, b) : witt_mul(a, b);
            }
            json coords = json::array();
            for (const auto& c : r.coords()) coords.push_back(c.to_string());
            emit(o, {{"coords", coords}}, r.to_string());
        } else if (red->parsed() || shp->parsed()) {
            Config cfg = o.config();
            Untilt u = o.make_untilt(cfg);
            Digits d = red->parsed() ? reduce(WittVec::parse(cfg, arg), u) : sharp(PerfElem::parse(cfg, arg), u, o.n);
            emit(o, digits_json(d), d.to_string());
        } else if (dist->parsed()) {
            Config cfg = o.config();
            Untilt u = o.make_untilt(cfg);
            unsigned level = std::max(2u, o.n);
            WittVec xi = u->xi(level);
            bool ok = is_distinguished(xi);
            std::string res = describe_residue(witt_res_check(xi).value);
            emit(o, {{"distinguished", ok}, {"W(res)", res}, {"n", level}},
                 std::string("distinguished: ") + (ok ? "true" : "false") + "; W(res): " + res);
        } else if (tr->parsed()) {
            // auto: residue rings first, then the Witt pair
            std::string name = interp;
            if (name == "auto") {
                name = "residue-to-tilt";
                try {
                    parse_formula(arg, signatures::local());
                } catch (const ParseError&) {
                    name = "witt-to-tilt";
                }
            }
            Interpretation g = pick_interpretation(name, o);
            Formula src = parse_formula(arg, g.source);
            Formula out = reduce_formula(g, src);
            std::string text = to_string(out, &g.target);
            std::string cls = to_string(classify(out));
            json j = {{"interpretation", g.name}, {"result", text}};
            if (emit_class) j["class"] = cls;
            emit(o, j, emit_class ? text + "\nclass: " + cls : text);
        } else if (ev->parsed()) {
            Config cfg = o.config();
            FiniteStructure m = structure == "wn" ? build_wn_structure(cfg, o.n)
                                : structure == "fq" ? build_fq_structure(cfg, pick_signature(sig_name))
                                                    : throw UsageError("unknown structure '" + structure + "'");
            Formula f = parse_formula(arg, m.sig);
            EvalStats stats;
            bool value = eval(m, f, o.budget ? o.budget : default_budget(), &stats);
            emit(o, {{"value", value}, {"assignments", stats.assignments}}, value ? "true" : "false");
        } else if (sol->parsed()) {
            Config cfg = o.config();
            PolySystem sys = PolySystem::parse(cfg, eqs, neqs);
            Exponent gamma = Exponent::integer(1, cfg->p());
            {
                auto slash = gamma_text.find('/');
                gamma = slash == std::string::npos
                            ? Exponent::integer(std::stoll(gamma_text), cfg->p())
                            : Exponent::fraction(std::stoll(gamma_text.substr(0, slash)),
                                                 std::stoll(gamma_text.substr(slash + 1)), cfg->p());
            }
            auto text_result = [&](const SearchResult& r) {
                std::string s = to_string(r.status);
                for (std::size_t i = 0; i < r.witness.size(); ++i)
                    s += (i ? ", " : ": ") + sys.variables()[i] + " = " + r.witness[i].to_string();
                return s + " (" + std::to_string(r.checked_count) + " candidates)";
            };
            if (mode == "residue" || mode == "valuation" || mode == "mod-tN") {
                SearchResult r = mode == "residue"     ? solve_residue(sys, gamma, bounds)
                                 : mode == "valuation" ? solve_valuation(sys, bounds, &gamma)
                                                       : solve_mod_tN(sys, N, bounds);
                if (o.as_json) std::cout << r.to_json(sys, bounds) << "\n";
                else std::cout << text_result(r) << "\n";
            } else if (mode == "transfer") {
                TransferReport r = transfer_check(sys, gamma, bounds);
                if (o.as_json) {
                    std::cout << r.to_json(sys, gamma, bounds) << "\n";
                } else {
                    std::cout << "residue: " << text_result(r.residue) << "\n"
                              << "valuation: " << text_result(r.valuation) << "\n"
                              << "verdict: " << r.verdict << "\n";
                }
            } else if (mode == "lift") {
                std::string text = to_string(lift_to_forall_exists(sys));
                emit(o, {{"sentence", text}}, text);
            } else {
                throw UsageError("unknown mode '" + mode + "'");
            }
        } else if (dst->parsed()) {
            Config cfg = o.config();
            Untilt x = o.make_untilt(cfg), y = UntiltSpec::by_name(other, cfg);
            Distance d = distance(x, y, o.n);
            emit(o, {{"value", d.value.to_string()}, {"distance", d.distance}, {"lower_bound_only", d.lower_bound_only}},
                 d.to_string());
        } else if (ver->parsed()) {
            if (ids.empty())
                for (int i = 1; i <= acceptance_count(); ++i) ids.push_back(i);
            int failed = 0;
            for (int id : ids) {
                CriterionResult r = run_criterion(id, verbose ? &std::cerr : nullptr);
                std::cout << format_line(r) << std::endl;
                failed += r.pass() ? 0 : 1;
            }
            return failed == 0 ? 0 : 4;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
