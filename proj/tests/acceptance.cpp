// Acceptance suite: nine end-to-end criteria, one pass/fail line each.
// Everything is exact rational arithmetic except the Monte-Carlo power
// figure in criterion 9, which is deterministic under its fixed seed.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace causalhier;

namespace {

const Intervention kEmpty{};
const Intervention kDoX0{{{"X", 0}}};
const Intervention kDoX1{{{"X", 1}}};

struct Criterion {
    std::string name;
    double limit_seconds;
    std::function<bool(std::string&)> body;
};

bool expect(bool cond, std::string& why, const std::string& msg) {
    if (!cond && why.empty()) why = msg;
    return cond;
}

CfQuery pns_query(const std::string& y) {
    return CfQuery{{{kDoX1, {{y, 1}}}, {kDoX0, {{y, 0}}}}, {}};
}

// 1. Exactness on the two-variable worked example.
bool criterion_example_exactness(std::string& why) {
    bool ok = true;
    ScmModel m = fixtures::xy_uniform();
    DistTable obs = observational(m);
    ok &= expect(obs.cells.size() == 4, why, "observational support is not the full square");
    for (const auto& [v, p] : obs.cells)
        ok &= expect(p == Rational(1, 4), why, "observational cell differs from 1/4");
    // every intervention leaves the non-intervened marginal untouched
    for (const auto& iv : all_interventions(m.variables)) {
        std::vector<std::string> rest;
        for (const auto& v : m.variables)
            if (!iv.assigns(v)) rest.push_back(v);
        if (rest.empty()) continue;
        ok &= expect(interventional(m, iv).marginal(rest) == obs.marginal(rest), why,
                     "interventional marginal moved under " + intervention_key(iv, m.variables));
    }
    CausationReport rep = probabilities_of_causation(m, "X", "Y");
    ok &= expect(rep.pns == CausationValue::of(Rational(1, 2)), why, "PNS is not 1/2");
    ok &= expect(rep.pns_converse == CausationValue::of(Rational(1, 2)), why,
                 "converse PNS is not 1/2");
    return ok;
}

// 2. The worked separating pair, reproduced from the y-good fixture.
bool criterion_separating_pair(std::string& why) {
    bool ok = true;
    ScmModel base_scm = fixtures::y_good_pair();
    StandardFormModel sf = canonicalize(base_scm);
    GoodnessReport good = check_y_good(fixtures::family_of(base_scm));
    ok &= expect(good.good, why, "fixture family is not Y-good");
    SeparationPlan plan = find_witness_sets(sf, "X", "Y");
    plan.delta = Rational(1, 4);
    ScmModel other = build_separated(sf, plan);
    ok &= expect(other.units.size() == 4, why, "partner model does not have 4 units");
    for (const auto& [u, p] : other.units)
        ok &= expect(p == Rational(1, 4), why, "partner unit mass differs from 1/4");
    PairReport rep = verify_pair(to_scm(sf), other, all_interventions(sf.order), "X", "Y");
    ok &= expect(rep.l2_equal, why, "level-2 entries differ");
    ok &= expect(rep.quantities[0].a == CausationValue::of(Rational(0)), why, "base PNS not 0");
    ok &= expect(rep.quantities[0].b == CausationValue::of(Rational(1, 4)), why,
                 "partner PNS not 1/4");
    return ok;
}

// 3. The two-variable realizability characterization, both directions.
bool criterion_realizability(std::string& why) {
    bool ok = true;
    oracle::Rng rng(90003);
    for (int trial = 0; trial < 500 && ok; ++trial) {
        TwoVarFamily fam = oracle::random_feasible_2ve(rng, 24);
        StandardFormModel sf = realize_2ve(fam);
        TwoVarFamily back = project_2ve(
            std_family(sf, {kEmpty, kDoX0, kDoX1}), "X", "Y");
        ok &= expect(back == fam, why, "realize/project round trip is not the identity");
    }
    for (int trial = 0; trial < 500 && ok; ++trial) {
        TwoVarFamily fam = oracle::random_feasible_2ve(rng, 24);
        bool broke_certainty = trial % 2 == 0;
        if (broke_certainty) {
            // leak mass onto the wrong X value under do(X:=1)
            fam.do_x1.cells.clear();
            fam.do_x1.cells[{0, 0}] = Rational(1, 3);
            fam.do_x1.cells[{1, 1}] = Rational(2, 3);
        } else {
            // pin an observational joint above its interventional response
            fam.obs.cells.clear();
            fam.obs.cells[{1, 1}] = Rational(1);
            fam.do_x1.cells.clear();
            fam.do_x1.cells[{1, 1}] = Rational(1, 2);
            fam.do_x1.cells[{1, 0}] = Rational(1, 2);
        }
        try {
            realize_2ve(fam);
            ok &= expect(false, why, "an infeasible family was realized");
        } catch (const Error& e) {
            std::string msg = e.what();
            ok &= expect(e.code == ErrCode::Infeasible, why, "wrong error class");
            ok &= expect(
                msg.find(broke_certainty ? "not 1" : "below the observational joint") !=
                    std::string::npos,
                why, "rejection does not cite the violated constraint");
        }
    }
    return ok;
}

// 4. Canonicalization preserves all counterfactual tables.
bool criterion_canonicalization(std::string& why) {
    bool ok = true;
    oracle::Rng rng(90004);
    for (int trial = 0; trial < 200 && ok; ++trial) {
        std::size_t n = 2 + trial % 2;
        ScmModel m = oracle::random_model(rng, n, 8);
        auto ivs = all_interventions(m.variables);
        StandardFormModel sf = canonicalize(m);
        ok &= expect(std_project_l3(sf, ivs).cells == project_l3(m, ivs).cells, why,
                     "standard form changed a counterfactual table");
    }
    return ok;
}

// 5. The separation construction on random Y-good models.
bool criterion_separation_suite(std::string& why) {
    bool ok = true;
    oracle::Rng rng(90005);
    int built = 0, attempts = 0;
    while (built < 200 && attempts < 4000 && ok) {
        ++attempts;
        std::size_t n = 2 + built % 2;
        std::string y = n == 2 ? "Y" : "Z";
        StandardFormModel sf = oracle::random_standard_form(rng, n);
        std::vector<Intervention> axy{kEmpty, kDoX0, kDoX1};
        TwoVarFamily fam = project_2ve(std_family(sf, axy), "X", y);
        if (!check_y_good(fam).good) continue;
        ++built;
        SeparationPlan plan = find_witness_sets(sf, "X", y);
        plan.delta = default_delta(plan);
        ScmModel base = to_scm(sf);
        ScmModel other = build_separated(sf, plan);
        PairReport rep = verify_pair(base, other, all_interventions(sf.order), "X", y);
        ok &= expect(rep.l2_equal, why, "level-2 entries differ");
        Rational gap = abs(counterfactual_joint(base, pns_query(y).conjuncts) -
                           counterfactual_joint(other, pns_query(y).conjuncts));
        ok &= expect(gap == plan.delta, why, "PNS gap is not exactly delta");
        CollapseReport col = check_collapse(
            sf.order, L2Data::from_family(std_family(sf, axy)), {kDoX0, kDoX1});
        ok &= expect(!col.collapsed, why, "a Y-good family collapsed");
    }
    ok &= expect(built == 200, why, "could not sample 200 Y-good models");
    return ok;
}

// 6. Collapse witnesses and the monotonic reduction.
bool criterion_collapse_witnesses(std::string& why) {
    bool ok = true;
    for (std::size_t n : {2u, 3u}) {
        auto order = oracle::var_names(n);
        StandardFormModel sf = monotonic_example(order);
        InterventionalFamily fam = std_family(sf, all_interventions(order));
        CollapseReport rep = check_collapse(order, L2Data::from_family(fam),
                                            {kEmpty, kDoX0, kDoX1});
        ok &= expect(rep.collapsed, why,
                     "monotonic n=" + std::to_string(n) + " did not collapse");
        // the reduction matches the true joints on every atom query
        ScmModel m = to_scm(sf);
        for (std::size_t bits = 0; bits < (std::size_t(1) << n) && ok; ++bits) {
            std::vector<MonotoneConjunct> query;
            std::vector<Conjunct> conjuncts;
            for (std::size_t i = 0; i < n; ++i) {
                Intervention pred;
                for (std::size_t k = 0; k < i; ++k) pred.assignments[order[k]] = 0;
                int value = static_cast<int>((bits >> i) & 1);
                query.push_back({order[i], pred, value});
                conjuncts.push_back({pred, {{order[i], value}}});
            }
            Rational reduced = eval_combo(monotonic_reduce(query, order), fam);
            ok &= expect(reduced == counterfactual_joint(m, conjuncts), why,
                         "monotonic reduction mismatch");
        }
    }
    ScmModel det = fixtures::deterministic_chain();
    InterventionalFamily fam = interventional_family(det, all_interventions(det.variables));
    CollapseReport rep = check_collapse(det.variables, L2Data::from_family(fam),
                                        all_interventions(det.variables));
    ok &= expect(rep.collapsed, why, "deterministic model did not collapse");
    return ok;
}

// 7. Observationally identical pairs that disagree interventionally.
bool criterion_l1_split(std::string& why) {
    bool ok = true;
    oracle::Rng rng(90007);
    for (int trial = 0; trial < 100 && ok; ++trial) {
        std::size_t n = 2 + trial % 2;
        auto order = oracle::var_names(n);
        DistTable obs = oracle::random_dist(rng, order);
        auto [nu, nu2] = split_l1(obs, order);
        ok &= expect(std_interventional(nu, kEmpty) == obs, why, "nu does not reproduce obs");
        ok &= expect(std_interventional(nu2, kEmpty) == obs, why,
                     "nu-prime does not reproduce obs");
        DistTable xy = obs.marginal({order[0], order[1]});
        int xs = -1, ys = -1;
        for (int x = 0; x < 2 && xs < 0; ++x)
            for (int y = 0; y < 2; ++y)
                if (xy.at({x, y}) > 0) {
                    xs = x;
                    ys = y;
                    break;
                }
        Intervention dag{{{order[0], 1 - xs}}};
        Rational diff = std_interventional(nu2, dag).prob({{order[1], 1 - ys}}) -
                        std_interventional(nu, dag).prob({{order[1], 1 - ys}});
        ok &= expect(diff > 0, why, "the pair does not separate at level 2");
    }
    return ok;
}

// 8. LP bounds against the closed-form two-variable expressions.
bool criterion_pns_bounds(std::string& why) {
    bool ok = true;
    oracle::Rng rng(90008);
    for (int trial = 0; trial < 500 && ok; ++trial) {
        StandardFormModel sf = oracle::random_standard_form(rng, 2, 24);
        TwoVarFamily fam = project_2ve(std_family(sf, {kEmpty, kDoX0, kDoX1}), "X", "Y");
        QueryBounds b = bound_query({"X", "Y"}, L2Data::from_2ve(fam), pns_query("Y"));
        oracle::PnsBounds cf = oracle::pns_closed_form(fam);
        ok &= expect(b.lo == cf.lo && b.hi == cf.hi, why,
                     "LP bounds differ from the closed form");
        Rational truth = counterfactual_joint(to_scm(sf), pns_query("Y").conjuncts);
        ok &= expect(truth >= b.lo && truth <= b.hi, why,
                     "a model's PNS escaped its own bounds");
    }
    return ok;
}

// 9. The statistical verification harness.
bool criterion_verifiability(std::string& why) {
    bool ok = true;
    SubbasicConstraint boundary{kEmpty, {{"Y", 1}}, Rational(1, 2)};
    for (std::size_t n : {1u, 10u, 100u, 1000u})
        for (const Rational& eps : {Rational(1, 100), Rational(1, 20)})
            ok &= expect(exact_type1_bound(boundary, eps, n, Rational(1, 2)) <= eps, why,
                         "type-1 tail exceeded epsilon at n=" + std::to_string(n));

    ScmModel m = fixtures::y_good_pair();
    Hypothesis h = Hypothesis::all_of(
        {Hypothesis::constraint({kDoX1, {{"Y", 0}}, Rational(0)}),
         Hypothesis::constraint({kDoX1, {{"Y", 1}}, Rational(0)}),
         Hypothesis::constraint({kEmpty, {{"X", 0}, {"Y", 0}}, Rational(0)}),
         Hypothesis::constraint({kEmpty, {{"X", 0}, {"Y", 1}}, Rational(0)})});
    TestConfig cfg;
    cfg.epsilon = Rational(1, 20);
    cfg.sample_sizes = {10000};
    cfg.trials = 400;
    cfg.seed = 20240817;
    SimReport a = simulate_verification(m, h, cfg);
    SimReport b = simulate_verification(m, h, cfg);
    ok &= expect(a.truth_satisfies, why, "the fixture does not satisfy its own hypothesis");
    ok &= expect(a.rows[0].frequency >= 0.95, why, "power at n=10000 is below 0.95");
    ok &= expect(a.rows[0].rejections == b.rows[0].rejections, why,
                 "identical seeds disagreed");
    return ok;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"example exactness (observational, interventional, PNS)", 1.0,
         criterion_example_exactness},
        {"worked separating pair (masses, level-2 equality, PNS 0 vs 1/4)", 1.0,
         criterion_separating_pair},
        {"realizability round-trip and rejection, 500 + 500 families", 30.0,
         criterion_realizability},
        {"canonicalization preserves level 3 on 200 random models", 60.0,
         criterion_canonicalization},
        {"separation suite on 200 random Y-good models", 300.0, criterion_separation_suite},
        {"collapse witnesses and the monotonic reduction", 60.0, criterion_collapse_witnesses},
        {"level-1 splitting pairs on 100 random tables", 30.0, criterion_l1_split},
        {"PNS bounds match closed form on 500 families", 120.0, criterion_pns_bounds},
        {"verifiability harness (exact tails, power, determinism)", 120.0,
         criterion_verifiability}};

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        std::string why;
        bool pass = false;
        try {
            pass = criteria[i].body(why);
        } catch (const std::exception& e) {
            why = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        if (secs > criteria[i].limit_seconds) {
            pass = false;
            if (why.empty()) why = "time limit exceeded";
        }
        std::printf("[%s] %zu. %s (%.2fs)%s%s\n", pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), secs, why.empty() ? "" : " -- ",
                    why.c_str());
        if (!pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
