// Batch command-line surface over the causalhier library. Every command is
// pure: the same inputs and flags produce byte-identical output, except for
// the generated_at stamp, which --deterministic removes.
//
// Exit codes: 0 success, 2 invalid input or validation failure, 3 infeasible
// constraint system, 4 unmet operation precondition.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalhier/causalhier.hpp"

using namespace causalhier;

namespace {

struct GlobalOpts {
    std::string output;
    bool deterministic = false;
    bool vertices = false;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n\r");
    auto e = s.find_last_not_of(" \t\n\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

Intervention parse_intervention(const std::string& text) {
    std::string body = trim(text);
    if (body.rfind("do", 0) == 0) body = trim(body.substr(2));
    Intervention iv;
    std::string token;
    std::stringstream ss(body);
    while (std::getline(ss, token, ',')) {
        std::stringstream ws(token);
        std::string item;
        while (ws >> item) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw Error(ErrCode::Input, "bad intervention assignment '" + item + "'");
            std::string name = trim(item.substr(0, eq));
            std::string val = trim(item.substr(eq + 1));
            if (val != "0" && val != "1")
                throw Error(ErrCode::Input, "intervention value must be 0 or 1 in '" + item + "'");
            iv.assignments[name] = val == "1" ? 1 : 0;
        }
    }
    return iv;
}

std::vector<Intervention> parse_interventions(const std::string& spec,
                                              const std::vector<std::string>& scope) {
    if (trim(spec) == "all") return all_interventions(scope);
    std::vector<Intervention> out;
    std::string part;
    std::stringstream ss(spec);
    while (std::getline(ss, part, ';')) out.push_back(parse_intervention(part));
    if (out.empty()) out.push_back(Intervention{});
    return out;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrCode::Input, "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrCode::Input, path + ": " + e.what());
    }
    return j;
}

ScmModel load_model(const std::string& path) {
    ScmModel m = model_from_json(load_json(path));
    ValidationReport rep = validate_model(m);
    if (!rep.ok()) {
        for (const auto& p : rep.problems) std::cerr << "validation: " << p << "\n";
        throw Error(ErrCode::Input, "model file " + path + " failed validation");
    }
    return m;
}

void emit(const GlobalOpts& opts, Json j) {
    if (!opts.deterministic) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
        j["generated_at"] = buf;
    }
    std::string text = j.dump(2) + "\n";
    if (opts.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.output);
        if (!out) throw Error(ErrCode::Input, "cannot write " + opts.output);
        out << text;
    }
}

TwoVarFamily family_to_2ve(const InterventionalFamily& fam, std::string x_var, std::string y_var) {
    if (x_var.empty()) x_var = fam.scope.at(0);
    if (y_var.empty()) y_var = fam.scope.size() > 1 ? fam.scope.at(1) : fam.scope.at(0);
    return project_2ve(fam, x_var, y_var);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact causal-hierarchy toolkit over finite binary SCMs"};
    app.require_subcommand(1);
    GlobalOpts opts;
    app.add_option("--output", opts.output, "write the artifact here instead of stdout");
    app.add_flag("--deterministic", opts.deterministic, "omit the generated_at stamp");

    std::function<void()> run;

    // eval ------------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "project a model to level 1, 2, or 3");
    {
        static std::string model_path, interventions = "all";
        static int level = 1;
        eval->add_option("model", model_path, "model JSON file")->required();
        eval->add_option("--levels", level, "hierarchy level to emit")->check(CLI::Range(1, 3));
        eval->add_option("--interventions", interventions,
                         "semicolon-separated list like 'do X=1; do X=0', or 'all'");
        eval->callback([&] {
            run = [&] {
                ScmModel m = load_model(model_path);
                if (level == 1) {
                    emit(opts, dist_to_json(observational(m)));
                    return;
                }
                auto ivs = parse_interventions(interventions, m.variables);
                if (level == 2)
                    emit(opts, family_to_json(interventional_family(m, ivs)));
                else
                    emit(opts, l3_to_json(project_l3(m, ivs)));
            };
        });
    }

    // canon -----------------------------------------------------------------
    auto* canon = app.add_subcommand("canon", "canonicalize a model to standard form");
    {
        static std::string model_path;
        canon->add_option("model", model_path, "model JSON file")->required();
        canon->callback([&] {
            run = [&] { emit(opts, sf_to_json(canonicalize(load_model(model_path)))); };
        });
    }

    // pns -------------------------------------------------------------------
    auto* pns = app.add_subcommand("pns", "the six probabilities of causation");
    {
        static std::string path, x_var, y_var;
        static int x_role = 1, y_role = 1;
        pns->add_option("input", path, "model JSON file or level-3 table JSON file")->required();
        pns->add_option("--x", x_var, "cause variable (default: first)");
        pns->add_option("--y", y_var, "effect variable (default: second)");
        pns->add_option("--x-role", x_role, "which value of X plays x")->check(CLI::Range(0, 1));
        pns->add_option("--y-role", y_role, "which value of Y plays y")->check(CLI::Range(0, 1));
        pns->callback([&] {
            run = [&] {
                Json j = load_json(path);
                CausationReport rep;
                if (j.contains("interventions")) {
                    CounterfactualTable t = l3_from_json(j);
                    std::string x = x_var.empty() ? t.scope.at(0) : x_var;
                    std::string y = y_var.empty() ? t.scope.at(1) : y_var;
                    rep = causation_from_table(t, x, y, x_role, y_role);
                } else {
                    ScmModel m = model_from_json(j);
                    ValidationReport v = validate_model(m);
                    if (!v.ok()) {
                        for (const auto& p : v.problems) std::cerr << "validation: " << p << "\n";
                        throw Error(ErrCode::Input, "model failed validation");
                    }
                    std::string x = x_var.empty() ? m.variables.at(0) : x_var;
                    std::string y = y_var.empty() ? m.variables.at(1) : y_var;
                    rep = probabilities_of_causation(m, x, y, x_role, y_role);
                }
                emit(opts, causation_to_json(rep));
            };
        });
    }

    // check -----------------------------------------------------------------
    auto* check = app.add_subcommand("check", "feasibility and Y-goodness of a 2VE family");
    {
        static std::string path, x_var, y_var;
        static bool swap_roles = false;
        check->add_option("family", path, "level-2 JSON file")->required();
        check->add_option("--x", x_var, "cause variable");
        check->add_option("--y", y_var, "effect variable");
        check->add_flag("--swap-roles", swap_roles, "reverse the roles of x and x'");
        check->callback([&] {
            run = [&] {
                auto fam = family_to_2ve(family_from_json(load_json(path)), x_var, y_var);
                emit(opts, goodness_to_json(check_y_good(fam, swap_roles)));
            };
        });
    }

    // realize ---------------------------------------------------------------
    auto* realize = app.add_subcommand("realize", "standard-form witness of a 2VE family");
    {
        static std::string path, x_var, y_var;
        realize->add_option("family", path, "level-2 JSON file")->required();
        realize->add_option("--x", x_var, "cause variable");
        realize->add_option("--y", y_var, "effect variable");
        realize->callback([&] {
            run = [&] {
                auto fam = family_to_2ve(family_from_json(load_json(path)), x_var, y_var);
                emit(opts, sf_to_json(realize_2ve(fam)));
            };
        });
    }

    // separate ---------------------------------------------------------------
    auto* separate = app.add_subcommand(
        "separate", "build a Level-2-equal, Level-3-different partner model");
    {
        static std::string path, x_var, y_var, delta_text;
        static bool swap_roles = false;
        separate->add_option("model", path, "standard-form JSON file")->required();
        separate->add_option("--x", x_var, "cause variable (default: first)");
        separate->add_option("--y", y_var, "effect variable (default: last)");
        separate->add_option("--delta", delta_text, "disagreement magnitude (default: half cap)");
        separate->add_flag("--swap-roles", swap_roles, "reverse the roles of x and x'");
        separate->callback([&] {
            run = [&] {
                StandardFormModel sf = sf_from_json(load_json(path));
                ValidationReport v = validate_standard_form(sf);
                if (!v.ok()) {
                    for (const auto& p : v.problems) std::cerr << "validation: " << p << "\n";
                    throw Error(ErrCode::Input, "standard-form file failed validation");
                }
                std::string x = x_var.empty() ? sf.order.front() : x_var;
                std::string y = y_var.empty() ? sf.order.back() : y_var;
                SeparationPlan plan = find_witness_sets(sf, x, y, swap_roles);
                plan.delta = delta_text.empty() ? default_delta(plan) : parse_rational(delta_text);
                ScmModel base = to_scm(sf);
                ScmModel other = build_separated(sf, plan);
                PairReport rep = verify_pair(base, other, all_interventions(sf.order), x, y);
                emit(opts, Json{{"model_a", model_to_json(base)},
                                {"model_b", model_to_json(other)},
                                {"plan", plan_to_json(plan, sf.order)},
                                {"report", pair_report_to_json(rep)}});
            };
        });
    }

    // bounds ----------------------------------------------------------------
    auto* bounds = app.add_subcommand("bounds", "LP bounds for a counterfactual query");
    {
        static std::string path;
        static bool allow_n4 = false;
        bounds->add_option("query", path, "query JSON file with inline given_l2")->required();
        bounds->add_flag("--allow-n4", allow_n4, "enable 4-variable problems (32768 atoms)");
        bounds->add_flag("--vertices", opts.vertices, "include the optimizing vertices");
        bounds->callback([&] {
            run = [&] {
                Json j = load_json(path);
                CfQuery q = query_from_json(j);
                InterventionalFamily fam = family_from_json(jsondetail::need(j, "given_l2"));
                QueryBounds b = bound_query(fam.scope, L2Data::from_family(fam), q, allow_n4);
                emit(opts, bounds_to_json(b, opts.vertices));
            };
        });
    }

    // collapse ---------------------------------------------------------------
    auto* collapse = app.add_subcommand("collapse", "zero-width test over joint outcome cells");
    {
        static std::string path, interventions = "all";
        static bool allow_n4 = false;
        collapse->add_option("family", path, "level-2 JSON file")->required();
        collapse->add_option("--interventions", interventions,
                             "interventions whose joint cells to check");
        collapse->add_flag("--allow-n4", allow_n4, "enable 4-variable problems");
        collapse->callback([&] {
            run = [&] {
                InterventionalFamily fam = family_from_json(load_json(path));
                auto ivs = parse_interventions(interventions, fam.scope);
                CollapseReport rep =
                    check_collapse(fam.scope, L2Data::from_family(fam), ivs, allow_n4);
                emit(opts, collapse_to_json(rep, fam.scope));
            };
        });
    }

    // verify ----------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "simulate statistical verification tests");
    {
        static std::string model_path, hyp_path, epsilon = "1/20", n_grid = "100,1000,10000";
        static std::size_t trials = 400;
        static std::uint64_t seed = 0;
        verify->add_option("model", model_path, "model JSON file")->required();
        verify->add_option("--hypothesis", hyp_path, "hypothesis JSON file")->required();
        verify->add_option("--epsilon", epsilon, "type-1 error bound");
        verify->add_option("--n-grid", n_grid, "comma-separated sample sizes");
        verify->add_option("--trials", trials, "trials per sample size");
        verify->add_option("--seed", seed, "PRNG seed");
        verify->callback([&] {
            run = [&] {
                ScmModel m = load_model(model_path);
                Hypothesis h = hypothesis_from_json(load_json(hyp_path));
                TestConfig cfg;
                cfg.epsilon = parse_rational(epsilon);
                cfg.trials = trials;
                cfg.seed = seed;
                std::string part;
                std::stringstream ss(n_grid);
                while (std::getline(ss, part, ','))
                    cfg.sample_sizes.push_back(static_cast<std::size_t>(std::stoull(trim(part))));
                emit(opts, simreport_to_json(simulate_verification(m, h, cfg)));
            };
        });
    }

    // split-l1 ---------------------------------------------------------------
    auto* split = app.add_subcommand(
        "split-l1", "two models with this observational table but different effects");
    {
        static std::string path;
        split->add_option("table", path, "distribution JSON file (scope + cells)")->required();
        split->callback([&] {
            run = [&] {
                DistTable obs = dist_from_json(load_json(path));
                auto [nu, nu2] = split_l1(obs, obs.scope);
                emit(opts, Json{{"nu", sf_to_json(nu)}, {"nu_prime", sf_to_json(nu2)}});
            };
        });
    }

    // monotonic ---------------------------------------------------------------
    auto* monotonic = app.add_subcommand("monotonic", "the monotonic collapse example");
    {
        static std::size_t n = 2;
        monotonic->add_option("--n", n, "number of variables")->check(CLI::Range(1, 4));
        monotonic->callback([&] {
            run = [&] {
                static const std::vector<std::string> names{"X", "Y", "Z", "W"};
                std::vector<std::string> order(names.begin(),
                                               names.begin() + static_cast<long>(n));
                emit(opts, sf_to_json(monotonic_example(order)));
            };
        });
    }

    // let the global flags appear after the subcommand name
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    try {
        run();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
