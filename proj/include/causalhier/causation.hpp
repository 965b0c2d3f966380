#ifndef CAUSALHIER_CAUSATION_HPP
#define CAUSALHIER_CAUSATION_HPP

#include <array>
#include <string>
#include <vector>

#include "causalhier/hierarchy.hpp"
#include "causalhier/lp.hpp"
#include "causalhier/standard_form.hpp"

namespace causalhier {

/// A probability of causation; conditional quantities with a zero-probability
/// conditioning event are reported undefined, never as zero.
struct CausationValue {
    bool defined = false;
    Rational value;

    static CausationValue of(const Rational& r) { return {true, r}; }
    static CausationValue undefined() { return {}; }
    bool operator==(const CausationValue&) const = default;
};

struct CausationReport {
    CausationValue pns, pns_converse, pn, ps, p_disable, p_enable;
};

/// The six classical quantities from a counterfactual table covering
/// the empty intervention and both interventions on X. Roles default to
/// x = 1, x' = 0, y = 1, y' = 0.
inline CausationReport causation_from_table(const CounterfactualTable& t, const std::string& x_var,
                                            const std::string& y_var, int x_role = 1,
                                            int y_role = 1) {
    int xp = 1 - x_role, yp = 1 - y_role;
    std::size_t idx_obs = t.interventions.size(), idx_x = idx_obs, idx_xp = idx_obs;
    for (std::size_t a = 0; a < t.interventions.size(); ++a) {
        const Intervention& iv = t.interventions[a];
        if (iv.empty()) idx_obs = a;
        if (iv == Intervention{{{x_var, x_role}}}) idx_x = a;
        if (iv == Intervention{{{x_var, xp}}}) idx_xp = a;
    }
    if (idx_obs == t.interventions.size() || idx_x == t.interventions.size() ||
        idx_xp == t.interventions.size())
        throw Error(ErrCode::Input,
                    "causation report needs the empty intervention and both interventions on " +
                        x_var);
    auto xi = static_cast<std::size_t>(
        std::find(t.scope.begin(), t.scope.end(), x_var) - t.scope.begin());
    auto yi = static_cast<std::size_t>(
        std::find(t.scope.begin(), t.scope.end(), y_var) - t.scope.begin());
    if (xi >= t.scope.size() || yi >= t.scope.size())
        throw Error(ErrCode::Input, "causation report names an unknown variable");

    // joint mass of a conjunction of per-intervention requirements
    auto mass = [&](std::initializer_list<std::tuple<std::size_t, std::size_t, int>> reqs) {
        Rational total = 0;
        for (const auto& [key, p] : t.cells) {
            bool ok = true;
            for (const auto& [a, vi, want] : reqs)
                if (key[a][vi] != want) { ok = false; break; }
            if (ok) total += p;
        }
        return total;
    };
    auto ratio = [&](const Rational& num, const Rational& den) {
        return den == 0 ? CausationValue::undefined() : CausationValue::of(num / den);
    };

    CausationReport rep;
    rep.pns = CausationValue::of(mass({{idx_x, yi, y_role}, {idx_xp, yi, yp}}));
    rep.pns_converse = CausationValue::of(mass({{idx_x, yi, yp}, {idx_xp, yi, y_role}}));
    rep.pn = ratio(mass({{idx_obs, xi, x_role}, {idx_obs, yi, y_role}, {idx_xp, yi, yp}}),
                   mass({{idx_obs, xi, x_role}, {idx_obs, yi, y_role}}));
    rep.ps = ratio(mass({{idx_obs, xi, xp}, {idx_obs, yi, yp}, {idx_x, yi, y_role}}),
                   mass({{idx_obs, xi, xp}, {idx_obs, yi, yp}}));
    rep.p_disable = ratio(mass({{idx_obs, yi, y_role}, {idx_xp, yi, yp}}),
                          mass({{idx_obs, yi, y_role}}));
    rep.p_enable = ratio(mass({{idx_obs, yi, yp}, {idx_x, yi, y_role}}),
                         mass({{idx_obs, yi, yp}}));
    return rep;
}

inline CausationReport probabilities_of_causation(const ScmModel& m, const std::string& x_var,
                                                  const std::string& y_var, int x_role = 1,
                                                  int y_role = 1) {
    if (x_var == y_var)
        throw Error(ErrCode::Input, "probabilities of causation need two distinct variables");
    std::vector<Intervention> ivs{Intervention{}, Intervention{{{x_var, 0}}},
                                  Intervention{{{x_var, 1}}}};
    return causation_from_table(project_l3(m, ivs), x_var, y_var, x_role, y_role);
}

struct FeasibilityReport {
    bool feasible = true;
    std::vector<std::string> violations;
};

/// Exact characterization of realizable two-variable families: the
/// intervened value is certain, and each do(X:=x) response dominates the
/// matching observational cell.
inline FeasibilityReport check_feasible_2ve(const TwoVarFamily& fam) {
    FeasibilityReport rep;
    auto note = [&](const std::string& s) {
        rep.feasible = false;
        rep.violations.push_back(s);
    };
    for (int x = 0; x < 2; ++x) {
        Rational certain = fam.do_x(x).prob({{fam.x_var, x}});
        if (certain != 1)
            note("do(" + fam.x_var + ":=" + std::to_string(x) + ") gives " + fam.x_var + "=" +
                 std::to_string(x) + " probability " + format_rational(certain) + ", not 1");
        for (int y = 0; y < 2; ++y) {
            Rational lhs = fam.do_x(x).prob({{fam.y_var, y}});
            Rational rhs = fam.obs.prob({{fam.x_var, x}, {fam.y_var, y}});
            if (lhs < rhs)
                note("do(" + fam.x_var + ":=" + std::to_string(x) + ") gives " + fam.y_var + "=" +
                     std::to_string(y) + " probability " + format_rational(lhs) +
                     " below the observational joint " + format_rational(rhs));
        }
    }
    return rep;
}

struct GoodnessReport {
    bool feasible = false;
    bool good = false;
    std::array<Rational, 4> margins{};
    std::vector<int> binding;  // indices of margins equal to zero
    std::vector<std::string> feasibility_violations;
};

/// The four strict inequalities guaranteeing Level-3 slack above this
/// Level-2 point. swap_x reverses the roles of x and x' (reaching the
/// necessity/disablement variants downstream).
inline GoodnessReport check_y_good(const TwoVarFamily& fam, bool swap_x = false) {
    GoodnessReport rep;
    FeasibilityReport feas = check_feasible_2ve(fam);
    rep.feasible = feas.feasible;
    rep.feasibility_violations = feas.violations;
    int x = swap_x ? 0 : 1, xp = 1 - x, yp = 0;
    rep.margins[0] = fam.do_x(x).prob({{fam.y_var, yp}}) -
                     fam.obs.prob({{fam.x_var, x}, {fam.y_var, yp}});
    rep.margins[1] = fam.obs.prob({{fam.x_var, xp}}) - rep.margins[0];
    rep.margins[2] = fam.obs.prob({{fam.x_var, xp}, {fam.y_var, yp}});
    rep.margins[3] = fam.obs.prob({{fam.x_var, xp}}) - rep.margins[2];
    for (int i = 0; i < 4; ++i)
        if (rep.margins[static_cast<std::size_t>(i)] == 0) rep.binding.push_back(i);
    bool all_positive = true;
    for (const auto& m : rep.margins) all_positive = all_positive && m > 0;
    rep.good = rep.feasible && all_positive;
    return rep;
}

/// One standard-form witness over {X, Y} reproducing the family exactly,
/// found as the first feasible vertex in canonical atom order.
inline StandardFormModel realize_2ve(const TwoVarFamily& fam) {
    FeasibilityReport feas = check_feasible_2ve(fam);
    if (!feas.feasible)
        throw Error(ErrCode::Infeasible, "family is not realizable: " + feas.violations.front());
    std::vector<std::string> order{fam.x_var, fam.y_var};
    std::vector<ResponseAtom> atoms = enumerate_atoms(order);
    std::vector<std::pair<Intervention, const DistTable*>> entries{
        {Intervention{}, &fam.obs},
        {Intervention{{{fam.x_var, 0}}}, &fam.do_x0},
        {Intervention{{{fam.x_var, 1}}}, &fam.do_x1}};
    LpProblem prob;
    prob.num_vars = atoms.size();
    for (const auto& [iv, table] : entries) {
        for (int xv = 0; xv < 2; ++xv)
            for (int yv = 0; yv < 2; ++yv) {
                std::vector<Rational> row(atoms.size(), Rational(0));
                for (std::size_t a = 0; a < atoms.size(); ++a) {
                    Valuation sol = eval_atom(order, atoms[a], iv);
                    if (sol[0] == xv && sol[1] == yv) row[a] = 1;
                }
                prob.rows.push_back(std::move(row));
                prob.rhs.push_back(table->at({xv, yv}));
            }
    }
    prob.rows.emplace_back(atoms.size(), Rational(1));
    prob.rhs.emplace_back(1);
    prob.objective.assign(atoms.size(), Rational(0));
    LpResult r = lp_solve(prob, LpSense::Minimize);
    if (r.status != LpStatus::Optimal)
        throw Error(ErrCode::Infeasible,
                    "internal: family passed the exact characterization but has no witness");
    StandardFormModel out;
    out.order = order;
    for (std::size_t a = 0; a < atoms.size(); ++a)
        if (r.point[a] != 0) out.atoms[atoms[a]] = r.point[a];
    return out;
}

}  // namespace causalhier

#endif
