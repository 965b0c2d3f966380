#ifndef CAUSALHIER_SEPARATION_HPP
#define CAUSALHIER_SEPARATION_HPP

#include <string>
#include <tuple>
#include <vector>

#include "causalhier/causation.hpp"
#include "causalhier/hierarchy.hpp"
#include "causalhier/standard_form.hpp"

namespace causalhier {

/// Recipe for building a Level-2-equal, Level-3-different partner model.
/// Omega1 holds the atoms with observational X = x' whose induced Y value is
/// y0 under do(X:=0) and y1 under do(X:=1); Omega2 the complementary
/// signature. The coupling transports mass between the two sets.
struct SeparationPlan {
    std::string x_var, y_var;
    int x_role = 1;  // the value playing "x"; x' = 1 - x_role
    int y0 = 0, y1 = 0;
    std::vector<ResponseAtom> omega1, omega2;
    Rational mass1, mass2;
    Rational delta;  // Level-3 disagreement magnitude; 0 until chosen
    Rational eps1, eps2;
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> coupling;
};

/// First (y0, y1) in lexicographic order giving both witness sets positive
/// mass. Requires X first in the order and a Y-good projection.
inline SeparationPlan find_witness_sets(const StandardFormModel& m, const std::string& x_var,
                                        const std::string& y_var, bool swap_roles = false) {
    if (m.order.empty() || m.order.front() != x_var)
        throw Error(ErrCode::Precondition,
                    "separation requires " + x_var + " to be first in the variable order");
    auto yi = static_cast<std::size_t>(
        std::find(m.order.begin(), m.order.end(), y_var) - m.order.begin());
    if (yi >= m.order.size() || y_var == x_var)
        throw Error(ErrCode::Input, "separation needs a second variable distinct from " + x_var);

    TwoVarFamily fam = project_2ve(
        std_family(m, {Intervention{}, Intervention{{{x_var, 0}}}, Intervention{{{x_var, 1}}}}),
        x_var, y_var);
    GoodnessReport good = check_y_good(fam, swap_roles);
    if (!good.good) {
        std::string msg = "family is not Y-good";
        if (!good.feasible)
            msg += " (not even realizable: " + good.feasibility_violations.front() + ")";
        else
            for (int b : good.binding)
                msg += "; margin " + std::to_string(b + 1) + " binds at zero";
        throw Error(ErrCode::Precondition, msg);
    }

    SeparationPlan plan;
    plan.x_var = x_var;
    plan.y_var = y_var;
    plan.x_role = swap_roles ? 0 : 1;
    int xp = 1 - plan.x_role;

    // induced Y behavior of each obs-X = x' atom under both X interventions
    std::vector<std::pair<const ResponseAtom*, std::pair<int, int>>> sigs;
    for (const auto& [atom, p] : m.atoms) {
        if (atom.resp[0][0] != xp) continue;
        Valuation v0 = eval_atom(m.order, atom, Intervention{{{x_var, 0}}});
        Valuation v1 = eval_atom(m.order, atom, Intervention{{{x_var, 1}}});
        sigs.emplace_back(&atom, std::make_pair(v0[yi], v1[yi]));
    }
    for (int y0 = 0; y0 < 2; ++y0)
        for (int y1 = 0; y1 < 2; ++y1) {
            Rational m1 = 0, m2 = 0;
            for (const auto& [atom, sig] : sigs) {
                if (sig == std::make_pair(y0, y1)) m1 += m.atoms.at(*atom);
                if (sig == std::make_pair(1 - y0, 1 - y1)) m2 += m.atoms.at(*atom);
            }
            if (m1 > 0 && m2 > 0) {
                plan.y0 = y0;
                plan.y1 = y1;
                plan.mass1 = m1;
                plan.mass2 = m2;
                for (const auto& [atom, sig] : sigs) {
                    if (sig == std::make_pair(y0, y1)) plan.omega1.push_back(*atom);
                    if (sig == std::make_pair(1 - y0, 1 - y1)) plan.omega2.push_back(*atom);
                }
                return plan;
            }
        }
    throw Error(ErrCode::Precondition,
                "no witness signature with positive mass on both sides; "
                "this contradicts Y-goodness and indicates a bug");
}

inline Rational default_delta(const SeparationPlan& plan) {
    return (plan.mass1 < plan.mass2 ? plan.mass1 : plan.mass2) / 2;
}

namespace detail {

/// Greedy (northwest-corner) transport plan between the normalized
/// restrictions of the atom masses to the two witness sets.
inline std::vector<std::tuple<std::size_t, std::size_t, Rational>> northwest_coupling(
    const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> out;
    std::size_t i = 0, j = 0;
    Rational ra = a[0], rb = b[0];
    while (i < a.size() && j < b.size()) {
        Rational w = ra < rb ? ra : rb;
        if (w > 0) out.emplace_back(i, j, w);
        ra -= w;
        rb -= w;
        if (ra == 0 && ++i < a.size()) ra = a[i];
        if (rb == 0 && ++j < b.size()) rb = b[j];
    }
    return out;
}

}  // namespace detail

/// Builds the partner model: tails units keep their atom's behavior at
/// rescaled mass; paired heads units borrow the partner atom's responses at
/// predecessor valuations whose X coordinate equals x. Level-2 marginals are
/// preserved exactly; the joint (Y at do(X:=0) = y0, Y at do(X:=1) = y1)
/// drops by exactly delta.
inline ScmModel build_separated(const StandardFormModel& m, SeparationPlan& plan) {
    Rational cap = plan.mass1 < plan.mass2 ? plan.mass1 : plan.mass2;
    if (!(plan.delta > 0) || !(plan.delta < cap))
        throw Error(ErrCode::Input,
                    "delta must lie strictly between 0 and min(mass1, mass2) = " +
                        format_rational(cap));
    plan.eps1 = plan.delta / plan.mass1;
    plan.eps2 = plan.delta / plan.mass2;

    std::vector<Rational> marg1, marg2;
    for (const auto& a : plan.omega1) marg1.push_back(m.atoms.at(a) / plan.mass1);
    for (const auto& a : plan.omega2) marg2.push_back(m.atoms.at(a) / plan.mass2);
    plan.coupling = detail::northwest_coupling(marg1, marg2);

    auto in_set = [](const std::vector<ResponseAtom>& set, const ResponseAtom& a) {
        for (std::size_t k = 0; k < set.size(); ++k)
            if (set[k] == a) return static_cast<long>(k);
        return -1L;
    };

    // unit k -> (base atom, swap partner or nullptr)
    std::vector<std::pair<const ResponseAtom*, const ResponseAtom*>> unit_resp;
    std::vector<Rational> unit_mass;
    for (const auto& [atom, p] : m.atoms) {
        Rational mass = p;
        if (in_set(plan.omega1, atom) >= 0)
            mass = (1 - plan.eps1) * p;
        else if (in_set(plan.omega2, atom) >= 0)
            mass = (1 - plan.eps2) * p;
        if (mass == 0) continue;
        unit_resp.emplace_back(&atom, nullptr);
        unit_mass.push_back(mass);
    }
    for (const auto& [i, j, w] : plan.coupling) {
        unit_resp.emplace_back(&plan.omega1[i], &plan.omega2[j]);
        unit_mass.push_back(plan.delta * w);
        unit_resp.emplace_back(&plan.omega2[j], &plan.omega1[i]);
        unit_mass.push_back(plan.delta * w);
    }

    ScmModel out;
    out.variables = m.order;
    out.exo_names = {"U"};
    out.exo_ranges = {static_cast<int>(unit_mass.size())};
    for (std::size_t k = 0; k < unit_mass.size(); ++k)
        out.units.emplace_back(Valuation{static_cast<int>(k)}, unit_mass[k]);
    std::size_t n = m.order.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> pa(i);
        for (std::size_t j = 0; j < i; ++j) pa[j] = static_cast<int>(j);
        out.parents.push_back(std::move(pa));
        out.exo_parents.push_back({0});
        MechanismTable table;
        std::size_t combos = std::size_t(1) << i;
        table.values.resize(combos * unit_mass.size());
        for (std::size_t key = 0; key < combos; ++key) {
            for (std::size_t k = 0; k < unit_mass.size(); ++k) {
                const auto& [base, partner] = unit_resp[k];
                const ResponseAtom* use = base;
                if (partner && i > 0) {
                    int x_coord = static_cast<int>((key >> (i - 1)) & 1);
                    if (x_coord == plan.x_role) use = partner;
                }
                table.values[key * unit_mass.size() + k] = use->resp[i][key];
            }
        }
        out.mechanisms.push_back(std::move(table));
    }
    return out;
}

struct QuantityComparison {
    std::string name;
    CausationValue a, b;
    bool differ = false;
};

struct PairReport {
    bool l2_equal = true;
    std::string first_mismatch;  // intervention key of the first unequal entry
    std::vector<QuantityComparison> quantities;
    std::string witness_name;
    Rational witness_magnitude;
};

/// Exhaustive Level-2 comparison over the given interventions plus the six
/// probabilities of causation for both models.
inline PairReport verify_pair(const ScmModel& m1, const ScmModel& m2,
                              const std::vector<Intervention>& interventions,
                              const std::string& x_var, const std::string& y_var) {
    if (m1.variables != m2.variables)
        throw Error(ErrCode::Input, "verify_pair: models have different variable scopes");
    PairReport rep;
    for (const auto& iv : interventions) {
        if (interventional(m1, iv) != interventional(m2, iv)) {
            rep.l2_equal = false;
            rep.first_mismatch = intervention_key(iv, m1.variables);
            break;
        }
    }
    CausationReport r1 = probabilities_of_causation(m1, x_var, y_var);
    CausationReport r2 = probabilities_of_causation(m2, x_var, y_var);
    auto cmp = [&](const std::string& name, const CausationValue& a, const CausationValue& b) {
        QuantityComparison q{name, a, b, false};
        q.differ = a.defined != b.defined || (a.defined && a.value != b.value);
        if (q.differ && rep.witness_name.empty()) {
            rep.witness_name = name;
            rep.witness_magnitude =
                a.defined && b.defined ? abs(a.value - b.value) : Rational(0);
        }
        rep.quantities.push_back(std::move(q));
    };
    cmp("pns", r1.pns, r2.pns);
    cmp("pns_converse", r1.pns_converse, r2.pns_converse);
    cmp("pn", r1.pn, r2.pn);
    cmp("ps", r1.ps, r2.ps);
    cmp("p_disable", r1.p_disable, r2.p_disable);
    cmp("p_enable", r1.p_enable, r2.p_enable);
    return rep;
}

}  // namespace causalhier

#endif
