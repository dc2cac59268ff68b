// Command-line front end: finite-precision Iwasawa-algebra arithmetic,
// module structure deductions, Akashi-series composition and the
// order-of-vanishing calculators, with TOML scenario input and JSON or
// table output.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "iwa/akashi.hpp"
#include "iwa/errors.hpp"
#include "iwa/modules.hpp"
#include "iwa/padic.hpp"
#include "iwa/scenario.hpp"
#include "iwa/serialize.hpp"
#include "iwa/series.hpp"
#include "iwa/toml.hpp"

namespace {

using nlohmann::json;

constexpr int kDefaultCoeffPrecision = 16;
constexpr int kDefaultDegreeCap = 256;

struct Options {
    long prime = 3;
    int coeff_precision = kDefaultCoeffPrecision;
    int degree_cap = kDefaultDegreeCap;
    bool json_out = false;

    iwa::SeriesPrecision precision() const {
        return iwa::SeriesPrecision(prime, coeff_precision, degree_cap);
    }
};

void apply_env_defaults(Options& opts) {
    const char* env = std::getenv("IWA_DEFAULT_PRECISION");
    if (!env) return;
    std::string s(env);
    size_t comma = s.find(',');
    if (comma == std::string::npos) {
        throw iwa::ParseError("IWA_DEFAULT_PRECISION must be \"N,M\"");
    }
    try {
        opts.coeff_precision = std::stoi(s.substr(0, comma));
        opts.degree_cap = std::stoi(s.substr(comma + 1));
    } catch (const std::exception&) {
        throw iwa::ParseError("IWA_DEFAULT_PRECISION must be \"N,M\"");
    }
}

void render(const json& j, bool as_json) {
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    for (const auto& [key, value] : j.items()) {
        if (value.is_string()) {
            std::cout << key << ": " << value.get<std::string>() << "\n";
        } else {
            std::cout << key << ": " << value.dump() << "\n";
        }
    }
}

std::vector<iwa::LocalFactorRule> parse_locals(const std::vector<std::string>& names) {
    std::vector<iwa::LocalFactorRule> rules;
    for (const std::string& name : names) {
        if (name == "good_ordinary") {
            rules.push_back(iwa::LocalFactorRule::GoodOrdinary);
        } else if (name == "split_I") {
            rules.push_back(iwa::LocalFactorRule::SplitMultCaseI);
        } else if (name == "split_II") {
            rules.push_back(iwa::LocalFactorRule::SplitMultCaseII);
        } else if (name == "nonsplit") {
            rules.push_back(iwa::LocalFactorRule::NonSplitMult);
        } else if (name == "away_from_p") {
            rules.push_back(iwa::LocalFactorRule::AwayFromP);
        } else {
            throw iwa::ParseError("unknown local factor '" + name +
                                  "' (expected good_ordinary, split_I, split_II, "
                                  "nonsplit or away_from_p)");
        }
    }
    return rules;
}

json series_report(const iwa::IwasawaSeries& f) {
    json j = iwa::to_json(f);
    j["display"] = iwa::series_to_string(f);
    return j;
}

std::string cyclotomic_name(long p, size_t i) {
    if (i == 0) return "T";
    long pi = 1;
    for (size_t k = 0; k < i; ++k) pi *= p;
    return "Phi_" + std::to_string(pi);
}

// --- command handlers -----------------------------------------------------

json run_prep(const Options& opts, const std::string& series_text) {
    iwa::IwasawaSeries f = iwa::parse_series(series_text, opts.precision());
    iwa::WeierstrassData w = iwa::weierstrass_prepare(f);
    json out;
    out["command"] = "prep";
    out["p"] = opts.prime;
    out["input"] = iwa::series_to_string(f);
    out["mu"] = w.mu;
    out["lambda"] = w.lambda;
    out["distinguished"] = iwa::series_to_string(w.distinguished);
    out["unit"] = iwa::series_to_string(w.unit);
    out["certified_precision"] = w.certified_precision;
    return out;
}

json run_invariants(const Options& opts, const std::string& series_text) {
    iwa::IwasawaSeries f = iwa::parse_series(series_text, opts.precision());
    json out;
    out["command"] = "invariants";
    out["p"] = opts.prime;
    out["input"] = iwa::series_to_string(f);
    auto [mu, lambda] = iwa::mu_lambda(f);
    out["mu"] = mu;
    out["lambda"] = lambda;
    out["is_unit"] = iwa::is_unit(f);
    auto ord = iwa::ord_at_zero(f);
    if (ord) {
        out["ord_at_zero"] = *ord;
        out["leading_value"] = iwa::to_json(iwa::leading_value(f));
        out["leading_value_note"] = "meaningful modulo units only";
    } else {
        out["ord_at_zero"] = "indeterminate";
    }
    out["certified_precision"] = opts.coeff_precision;
    return out;
}

json run_charel(const Options& opts, const std::string& module_path) {
    iwa::ElementaryModule mod =
        iwa::module_from_toml(iwa::load_toml_file(module_path), opts.precision());
    iwa::IwasawaSeries ch = iwa::char_element(mod);
    auto [mu, lambda] = iwa::module_mu_lambda(mod);
    json out;
    out["command"] = "charel";
    out["p"] = opts.prime;
    out["char_element"] = series_report(ch);
    out["mu"] = mu;
    out["lambda"] = lambda;
    out["certified_precision"] = opts.coeff_precision;
    return out;
}

json run_coinvariants(const Options& opts, const std::string& module_path, int max_level) {
    iwa::ElementaryModule mod =
        iwa::module_from_toml(iwa::load_toml_file(module_path), opts.precision());
    json ranks = json::array();
    for (int n = 0; n <= max_level; ++n) {
        ranks.push_back(iwa::coinvariant_rank(mod, n));
    }
    json out;
    out["command"] = "coinvariants";
    out["p"] = opts.prime;
    out["max_level"] = max_level;
    out["ranks"] = ranks;
    return out;
}

json run_deduce_structure(long prime, const std::vector<long>& ranks, long lambda) {
    iwa::CorankSequence seq(prime, ranks);
    iwa::SemisimpleDecision crit = iwa::semisimple_criterion(lambda, seq);
    if (!crit.semisimple) {
        throw iwa::InvalidInput(
            "the semisimplicity criterion is inconclusive on these data; "
            "no corank entry attains lambda");
    }
    iwa::StructureDeduction ded = iwa::deduce_structure(prime, seq, lambda);
    json factors = json::array();
    for (size_t i = 0; i < ded.multiplicities.size(); ++i) {
        factors.push_back(json{{"factor", cyclotomic_name(prime, i)},
                               {"degree", iwa::cyclotomic_degree(prime, static_cast<int>(i))},
                               {"multiplicity", ded.multiplicities[i]}});
    }
    json out;
    out["command"] = "deduce-structure";
    out["p"] = prime;
    out["ranks"] = ranks;
    out["lambda"] = lambda;
    out["multiplicities"] = ded.multiplicities;
    out["residual_lambda"] = ded.residual_lambda;
    out["factors"] = factors;
    out["semisimple_witness_level"] = crit.witness_level;
    out["hypotheses"] = json::array({
        "corank inputs equal the coinvariant ranks of the dual Selmer group",
        "multiplicity-one structure certified by the rank-attainment criterion",
    });
    return out;
}

json run_akashi(const Options& opts, const std::string& chars_json) {
    json spec;
    try {
        spec = json::parse(chars_json);
    } catch (const json::exception& e) {
        throw iwa::ParseError(std::string("--chars: ") + e.what());
    }
    if (!spec.is_array()) throw iwa::ParseError("--chars must be a JSON array");
    iwa::GradedCharList chs;
    for (const auto& entry : spec) {
        if (!entry.contains("deg") || !entry.contains("coeffs")) {
            throw iwa::ParseError("each entry needs \"deg\" and \"coeffs\"");
        }
        iwa::IwasawaSeries ch =
            iwa::parse_series(entry.at("coeffs").dump(), opts.precision());
        chs.push_back({entry.at("deg").get<int>(), std::move(ch)});
    }
    iwa::FractionElement ak = iwa::akashi_compose(chs);
    json out;
    out["command"] = "akashi";
    out["p"] = opts.prime;
    out["ord"] = iwa::ord_of_fraction(ak);
    out["num"] = iwa::series_to_string(ak.num());
    out["den"] = iwa::series_to_string(ak.den());
    out["certified_precision"] = opts.coeff_precision;
    out["note"] = "well-defined up to a unit of the Iwasawa algebra";
    return out;
}

json run_akashi_selmer(const Options& opts, const std::string& ch_cyc_text,
                       const std::vector<std::string>& local_names) {
    iwa::IwasawaSeries ch = iwa::parse_series(ch_cyc_text, opts.precision());
    std::vector<iwa::LocalFactorRule> locals = parse_locals(local_names);
    iwa::FractionElement ak = iwa::akashi_selmer_formula(ch, locals, opts.precision());
    long local_ord = 0;
    for (auto rule : locals) local_ord += iwa::local_ord_contribution(rule);
    json out;
    out["command"] = "akashi-selmer";
    out["p"] = opts.prime;
    out["ord"] = iwa::ord_of_fraction(ak);
    out["ord_from_ch_cyc"] = iwa::ord_of_fraction(ak) - local_ord;
    out["ord_from_locals"] = local_ord;
    out["num"] = iwa::series_to_string(ak.num());
    out["den"] = iwa::series_to_string(ak.den());
    out["certified_precision"] = opts.coeff_precision;
    out["hypotheses"] = json::array({
        "dual Selmer group over the full extension lies in M_H(G)",
        "cyclotomic dual Selmer group is torsion",
        "the extension is pro-p over the base",
    });
    return out;
}

json vanishing_entry(const iwa::Scenario& scn, const std::string& level) {
    iwa::HypothesisFlaggedValue v = iwa::vanishing_order_regular(scn, level);
    return json{{"order_of_vanishing", v.value},
                {"corank", scn.corank.at(level)},
                {"m_p", iwa::m_p_count(scn, level)},
                {"hypotheses", v.hypotheses}};
}

json run_vanishing(const std::string& scenario_path, const std::string& level,
                   bool all_levels) {
    iwa::Scenario scn = iwa::scenario_from_toml(iwa::load_toml_file(scenario_path));
    json out;
    out["command"] = "vanishing";
    out["p"] = scn.p;
    if (!scn.curve_label.empty()) out["curve"] = scn.curve_label;
    if (all_levels) {
        json levels;
        for (const auto& [name, corank] : scn.corank) {
            (void)corank;
            levels[name] = vanishing_entry(scn, name);
        }
        out["levels"] = levels;
    } else {
        if (level.empty()) throw iwa::MissingData("pass --level or --all-levels");
        out["level"] = level;
        out.update(vanishing_entry(scn, level));
    }
    return out;
}

json run_false_tate(const Options& opts, const std::string& scenario_path, int n,
                    long corank_l, long corank_lprime, bool have_corank_l,
                    bool have_corank_lprime, bool squeeze, long lower_bound,
                    bool have_lower_bound, bool parity_odd) {
    long p = opts.prime;
    json out;
    out["command"] = "false-tate";
    if (!scenario_path.empty()) {
        iwa::Scenario scn = iwa::scenario_from_toml(iwa::load_toml_file(scenario_path));
        p = scn.p;
        if (!scn.curve_label.empty()) out["curve"] = scn.curve_label;
        if (scn.tower && n > scn.tower->levels) {
            throw iwa::MissingData("scenario tower has only " +
                                   std::to_string(scn.tower->levels) + " levels");
        }
        std::string level = "F" + std::to_string(n);
        if (!have_corank_l) {
            auto it = scn.corank.find(level);
            if (it == scn.corank.end()) {
                throw iwa::MissingData("scenario lacks corank at level " + level);
            }
            corank_l = it->second;
            have_corank_l = true;
        }
        if (!have_corank_lprime) {
            auto it = scn.corank.find("Fprime" + std::to_string(n));
            if (it != scn.corank.end()) {
                corank_lprime = it->second;
                have_corank_lprime = true;
            }
        }
        if (squeeze && !have_lower_bound) {
            auto it = scn.corank.find("F" + std::to_string(n - 1));
            if (it != scn.corank.end()) {
                lower_bound = it->second;
                have_lower_bound = true;
            }
        }
    }
    out["p"] = p;
    out["n"] = n;
    if (!have_corank_l) throw iwa::MissingData("need --corank-L or a scenario corank");
    out["corank_L"] = corank_l;
    if (squeeze) {
        if (!have_lower_bound) {
            throw iwa::MissingData("squeeze needs --corank-Lprime-lower or the corank "
                                   "one level down in the scenario");
        }
        iwa::DarmonTianResult r =
            iwa::darmon_tian_order(p, n, corank_l, lower_bound, parity_odd);
        out["corank_Lprime_lower_bound"] = lower_bound;
        out["parity_odd"] = parity_odd;
        out["candidates"] = r.candidates;
        out["determined"] = r.determined;
        if (r.determined) out["order_of_vanishing"] = r.value;
        out["hypotheses"] = json::array({
            "lower bound comes from a subfield contained in the layer",
            "parity from the root-number input when --parity-odd is set",
        });
    } else {
        if (!have_corank_lprime) {
            throw iwa::MissingData("need --corank-Lprime or an Fprime<n> scenario corank");
        }
        out["corank_Lprime"] = corank_lprime;
        out["s"] = iwa::s_via_corank_difference(p, n, corank_l, corank_lprime);
        out["hypotheses"] = json::array({
            "dual Selmer group over the full extension lies in M_H(G)",
            "Greenberg semisimplicity at the layer's cyclotomic line",
        });
    }
    return out;
}

json run_euler(const std::string& scenario_path) {
    iwa::Scenario scn = iwa::scenario_from_toml(iwa::load_toml_file(scenario_path));
    if (!scn.euler) throw iwa::MissingData("scenario has no [euler] section");
    json out;
    out["command"] = "euler";
    out["p"] = scn.p;
    if (!scn.curve_label.empty()) out["curve"] = scn.curve_label;
    out["leading_coefficient_valuation"] = iwa::euler_leading_valuation(*scn.euler, scn.p);
    out["convention"] =
        "v_lvalues is the contribution of the p-adic absolute value of the "
        "ramified local L-values: |x|_p = p^-v contributes -v";
    out["hypotheses"] = json::array({
        "good ordinary reduction at all primes above p",
        "Sha[p^infty] finite at the level",
        "Greenberg semisimplicity at the level's cyclotomic line",
    });
    return out;
}

json run_amenable(long prime, long m) {
    json out;
    out["command"] = "amenable";
    out["p"] = prime;
    out["m"] = m;
    out["amenable"] = iwa::amenable_pair(prime, m);
    return out;
}

json run_check_bsd(const Options& opts, long ord_alg, long ord_analytic, bool have_orders,
                   char uncond_case, int n) {
    long p = opts.prime;
    json out;
    out["command"] = "check-bsd";
    if (!have_orders) {
        ord_alg = iwa::uncond_orders(uncond_case, p, n);
        ord_analytic = iwa::analytic_lower_bound_false_tate(p, n);
        out["p"] = p;
        out["n"] = n;
        out["case"] = std::string(1, uncond_case);
        out["analytic_side_note"] =
            "analytic order replaced by its proven lower bound p^n - 1";
    }
    out["ord_algebraic"] = ord_alg;
    out["ord_analytic"] = ord_analytic;
    out["holds"] = iwa::bsd_inequality_check(ord_alg, ord_analytic);
    return out;
}

int map_error_to_exit(const iwa::Error& e) {
    if (dynamic_cast<const iwa::ParseError*>(&e)) return 1;
    if (dynamic_cast<const iwa::MissingData*>(&e)) return 2;
    if (dynamic_cast<const iwa::InsufficientPrecision*>(&e)) return 4;
    if (dynamic_cast<const iwa::DegreeCapExceeded*>(&e)) return 4;
    return 3;  // arithmetic obstructions
}

}  // namespace

int main(int argc, char** argv) {
    Options opts;
    try {
        apply_env_defaults(opts);
    } catch (const iwa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"Finite-precision engine for the Iwasawa algebra Zp[[T]]: "
                 "characteristic elements, mu/lambda invariants, Akashi series "
                 "and order-of-vanishing calculators"};
    app.require_subcommand(1);
    app.add_option("--prime", opts.prime, "odd prime p")->capture_default_str();
    app.add_option("--coeff-precision", opts.coeff_precision,
                   "coefficients are kept mod p^N")->capture_default_str();
    app.add_option("--degree-cap", opts.degree_cap, "series truncated below T^M")
        ->capture_default_str();
    app.add_flag("--json", opts.json_out, "machine-readable JSON output");

    std::function<json()> action;

    std::string series_text;
    auto* prep = app.add_subcommand("prep", "Weierstrass preparation of a series");
    prep->add_option("--series", series_text, "series, e.g. \"3+3*T+T^2\" or [3,3,1]")
        ->required();
    prep->callback([&] { action = [&] { return run_prep(opts, series_text); }; });

    auto* invariants = app.add_subcommand("invariants", "mu/lambda, order and unit test");
    invariants->add_option("--series", series_text, "series expression")->required();
    invariants->callback([&] { action = [&] { return run_invariants(opts, series_text); }; });

    std::string module_path;
    auto* charel = app.add_subcommand("charel", "characteristic element of a module file");
    charel->add_option("--module", module_path, "ElementaryModule TOML file")->required();
    charel->callback([&] { action = [&] { return run_charel(opts, module_path); }; });

    int max_level = 0;
    auto* coinv = app.add_subcommand("coinvariants", "coinvariant ranks along the tower");
    coinv->add_option("--module", module_path, "ElementaryModule TOML file")->required();
    coinv->add_option("--max-level", max_level, "compute ranks for n = 0..max")->required();
    coinv->callback(
        [&] { action = [&] { return run_coinvariants(opts, module_path, max_level); }; });

    std::vector<long> ranks;
    long lambda = 0;
    auto* deduce = app.add_subcommand("deduce-structure",
                                      "module structure from a corank sequence");
    deduce->add_option("--ranks", ranks, "corank sequence r_0,r_1,...")
        ->required()
        ->delimiter(',');
    deduce->add_option("--lambda", lambda, "lambda invariant")->required();
    deduce->callback(
        [&] { action = [&] { return run_deduce_structure(opts.prime, ranks, lambda); }; });

    std::string chars_json;
    auto* akashi = app.add_subcommand("akashi", "compose an Akashi series");
    akashi->add_option("--chars", chars_json,
                       "JSON list [{\"deg\":0,\"coeffs\":[...]}, ...]")->required();
    akashi->callback([&] { action = [&] { return run_akashi(opts, chars_json); }; });

    std::string ch_cyc_text;
    std::vector<std::string> local_names;
    auto* aksel = app.add_subcommand("akashi-selmer",
                                     "Akashi series of the dual Selmer group");
    aksel->add_option("--ch-cyc", ch_cyc_text, "cyclotomic characteristic element")
        ->required();
    aksel->add_option("--locals", local_names,
                      "local factors: good_ordinary,split_I,split_II,nonsplit,away_from_p")
        ->delimiter(',');
    aksel->callback(
        [&] { action = [&] { return run_akashi_selmer(opts, ch_cyc_text, local_names); }; });

    std::string scenario_path;
    std::string level;
    bool all_levels = false;
    auto* vanishing = app.add_subcommand("vanishing",
                                         "order of vanishing at a regular representation");
    vanishing->add_option("--scenario", scenario_path, "scenario TOML file")->required();
    vanishing->add_option("--level", level, "level name, e.g. Q");
    vanishing->add_flag("--all-levels", all_levels, "evaluate every recorded level");
    vanishing->callback(
        [&] { action = [&] { return run_vanishing(scenario_path, level, all_levels); }; });

    int ft_n = 1;
    long corank_l = 0, corank_lprime = 0, lower_bound = 0;
    bool squeeze = false, parity_odd = false;
    auto* ft = app.add_subcommand("false-tate",
                                  "order of vanishing at induced tower representations");
    ft->add_option("--scenario", scenario_path, "scenario TOML file");
    ft->add_option("-n,--level", ft_n, "tower level n >= 1")->required();
    auto* opt_cl = ft->add_option("--corank-L", corank_l, "Selmer corank at the layer");
    auto* opt_clp = ft->add_option("--corank-Lprime", corank_lprime,
                                   "Selmer corank at the subfield");
    ft->add_flag("--squeeze", squeeze, "interval-plus-parity squeeze");
    auto* opt_lb = ft->add_option("--corank-Lprime-lower", lower_bound,
                                  "lower bound for the subfield corank");
    ft->add_flag("--parity-odd", parity_odd, "force odd parity in the squeeze");
    ft->callback([&, opt_cl, opt_clp, opt_lb] {
        action = [&, opt_cl, opt_clp, opt_lb] {
            return run_false_tate(opts, scenario_path, ft_n, corank_l, corank_lprime,
                                  opt_cl->count() > 0, opt_clp->count() > 0, squeeze,
                                  lower_bound, opt_lb->count() > 0, parity_odd);
        };
    });

    auto* euler = app.add_subcommand("euler", "leading-coefficient valuation");
    euler->add_option("--scenario", scenario_path, "scenario TOML file with [euler]")
        ->required();
    euler->callback([&] { action = [&] { return run_euler(scenario_path); }; });

    long m_value = 0;
    auto* amenable = app.add_subcommand("amenable", "amenability of the pair (p, m)");
    amenable->add_option("-m,--m", m_value, "p-powerfree integer > 1")->required();
    amenable->callback([&] { action = [&] { return run_amenable(opts.prime, m_value); }; });

    long ord_alg = 0, ord_analytic = 0;
    std::string uncond_case;
    int bsd_n = 1;
    auto* bsd = app.add_subcommand("check-bsd",
                                   "algebraic vs analytic order inequality");
    auto* opt_oa = bsd->add_option("--ord-alg", ord_alg, "algebraic order of vanishing");
    auto* opt_on = bsd->add_option("--ord-analytic", ord_analytic, "analytic order");
    bsd->add_option("--case", uncond_case, "tower case a or b (computes both sides)");
    bsd->add_option("-n,--level", bsd_n, "tower level for --case");
    bsd->callback([&, opt_oa, opt_on] {
        action = [&, opt_oa, opt_on] {
            bool have_orders = opt_oa->count() > 0 && opt_on->count() > 0;
            if (!have_orders && uncond_case.empty()) {
                throw iwa::MissingData(
                    "pass --ord-alg/--ord-analytic or --case with -n");
            }
            char c = uncond_case.empty() ? 'a' : uncond_case[0];
            return run_check_bsd(opts, ord_alg, ord_analytic, have_orders, c, bsd_n);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        render(action(), opts.json_out);
    } catch (const iwa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error_to_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
