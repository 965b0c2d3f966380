#ifndef CAUSALHIER_HIERARCHY_HPP
#define CAUSALHIER_HIERARCHY_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "causalhier/scm.hpp"

namespace causalhier {

/// A Level-3 point restricted to a finite intervention list: the joint
/// distribution over one full outcome per listed intervention.
struct CounterfactualTable {
    std::vector<Intervention> interventions;
    std::vector<std::string> scope;
    std::map<std::vector<Valuation>, Rational> cells;

    bool operator==(const CounterfactualTable&) const = default;
};

/// A Level-2 point: one outcome distribution per intervention. Entries keep
/// insertion order; lookups go through find().
struct InterventionalFamily {
    std::vector<std::string> scope;
    std::vector<std::pair<Intervention, DistTable>> entries;

    const DistTable* find(const Intervention& iv) const {
        for (const auto& [a, t] : entries)
            if (a == iv) return &t;
        return nullptr;
    }
    const DistTable& at(const Intervention& iv) const {
        const DistTable* t = find(iv);
        if (!t) throw Error(ErrCode::Input, "family has no entry for intervention '" +
                                                intervention_key(iv, scope) + "'");
        return *t;
    }
    bool operator==(const InterventionalFamily&) const = default;
};

/// The three-distribution summary of the effect of X on Y, marginalized to
/// {X, Y}: observational, do(X:=0), do(X:=1).
struct TwoVarFamily {
    std::string x_var, y_var;
    DistTable obs, do_x0, do_x1;

    const DistTable& do_x(int x) const { return x == 0 ? do_x0 : do_x1; }
    bool operator==(const TwoVarFamily&) const = default;
};

/// All 3^n partial assignments over `scope` (each variable unset/0/1), empty
/// intervention first, in canonical order. Refuses more than `cap` variables.
inline std::vector<Intervention> all_interventions(const std::vector<std::string>& scope,
                                                   std::size_t cap = 6) {
    if (scope.size() > cap)
        throw Error(ErrCode::Input,
                    "full intervention enumeration requires at most " + std::to_string(cap) +
                        " variables (3^n entries); pass an explicit list instead");
    std::vector<Intervention> out;
    std::size_t n = scope.size(), total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        Intervention iv;
        std::size_t c = code;
        for (std::size_t i = n; i-- > 0;) {
            std::size_t trit = c % 3;  // 0 = unset, 1 = value 0, 2 = value 1
            c /= 3;
            if (trit != 0) iv.assignments[scope[i]] = static_cast<int>(trit - 1);
        }
        out.push_back(std::move(iv));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Intervention& a, const Intervention& b) {
                         return a.assignments.size() < b.assignments.size();
                     });
    return out;
}

/// Counterfactual model over one endogenous copy per intervention, all copies
/// sharing the original exogenous units. Copy a of variable V is named "V@a".
inline ScmModel twin_model(const ScmModel& m, const std::vector<Intervention>& interventions) {
    if (interventions.empty())
        throw Error(ErrCode::Input, "twin_model: intervention list must be non-empty");
    for (std::size_t a = 0; a < interventions.size(); ++a) {
        validate_intervention(m, interventions[a]);
        for (std::size_t b = a + 1; b < interventions.size(); ++b)
            if (interventions[a] == interventions[b])
                throw Error(ErrCode::Input, "twin_model: duplicate intervention in list");
    }
    ScmModel out;
    out.exo_names = m.exo_names;
    out.exo_ranges = m.exo_ranges;
    out.units = m.units;
    std::size_t n = m.n();
    for (std::size_t a = 0; a < interventions.size(); ++a) {
        const Intervention& alpha = interventions[a];
        for (std::size_t i = 0; i < n; ++i) {
            out.variables.push_back(m.variables[i] + "@" + std::to_string(a));
            std::size_t base = a * n;
            auto it = alpha.assignments.find(m.variables[i]);
            if (it != alpha.assignments.end()) {
                out.parents.emplace_back();
                out.exo_parents.emplace_back();
                out.mechanisms.push_back(MechanismTable{{it->second}});
            } else {
                std::vector<int> pa;
                for (int p : m.parents[i]) pa.push_back(static_cast<int>(base) + p);
                out.parents.push_back(std::move(pa));
                out.exo_parents.push_back(m.exo_parents[i]);
                out.mechanisms.push_back(m.mechanisms[i]);
            }
        }
    }
    return out;
}

/// Restriction of the counterfactual distribution to a finite intervention
/// list, via the sum formula over exogenous units.
inline CounterfactualTable project_l3(const ScmModel& m,
                                      const std::vector<Intervention>& interventions) {
    for (const auto& iv : interventions) validate_intervention(m, iv);
    CounterfactualTable t;
    t.interventions = interventions;
    t.scope = m.variables;
    for (const auto& [u, p] : m.units) {
        std::vector<Valuation> key;
        key.reserve(interventions.size());
        for (const auto& iv : interventions)
            key.push_back(detail::solve_unit_unchecked(m, iv, u));
        t.cells[key] += p;
    }
    for (auto it = t.cells.begin(); it != t.cells.end();)
        it = it->second == 0 ? t.cells.erase(it) : std::next(it);
    return t;
}

/// Per-intervention marginals of the joint table. The list must contain the
/// empty intervention, else the Level-1 projection downstream is undefined.
inline InterventionalFamily project_l2(const CounterfactualTable& t) {
    bool has_empty = false;
    for (const auto& iv : t.interventions) has_empty |= iv.empty();
    if (!has_empty)
        throw Error(ErrCode::Input, "project_l2: table does not cover the empty intervention");
    InterventionalFamily fam;
    fam.scope = t.scope;
    for (std::size_t a = 0; a < t.interventions.size(); ++a) {
        DistTable d;
        d.scope = t.scope;
        for (const auto& [key, p] : t.cells) d.cells[key[a]] += p;
        fam.entries.emplace_back(t.interventions[a], std::move(d));
    }
    return fam;
}

inline DistTable project_l1(const InterventionalFamily& fam) { return fam.at(Intervention{}); }

/// The 2VE projection: restrict to {empty, X:=0, X:=1} and marginalize each
/// entry to {X, Y}.
inline TwoVarFamily project_2ve(const InterventionalFamily& fam, const std::string& x_var,
                                const std::string& y_var) {
    TwoVarFamily out;
    out.x_var = x_var;
    out.y_var = y_var;
    std::vector<std::string> sub{x_var, y_var};
    out.obs = fam.at(Intervention{}).marginal(sub);
    out.do_x0 = fam.at(Intervention{{{x_var, 0}}}).marginal(sub);
    out.do_x1 = fam.at(Intervention{{{x_var, 1}}}).marginal(sub);
    return out;
}

/// Convenience: the model's Level-2 point over an intervention list.
inline InterventionalFamily interventional_family(const ScmModel& m,
                                                  const std::vector<Intervention>& interventions) {
    InterventionalFamily fam;
    fam.scope = m.variables;
    for (const auto& iv : interventions) fam.entries.emplace_back(iv, interventional(m, iv));
    return fam;
}

/// Checks the structural invariants of a Level-2 point: an entry for the
/// empty intervention, each entry a distribution, and certainty of every
/// intervened value.
inline ValidationReport validate_family(const InterventionalFamily& fam) {
    ValidationReport rep;
    if (!fam.find(Intervention{})) rep.problems.push_back("missing empty-intervention entry");
    for (const auto& [iv, table] : fam.entries) {
        std::string key = intervention_key(iv, fam.scope);
        if (table.total() != 1)
            rep.problems.push_back("entry '" + key + "' sums to " +
                                   format_rational(table.total()) + ", not 1");
        for (const auto& [val, p] : table.cells) {
            if (p < 0) rep.problems.push_back("entry '" + key + "' has a negative cell");
            for (const auto& [name, want] : iv.assignments) {
                auto it = std::find(fam.scope.begin(), fam.scope.end(), name);
                if (it == fam.scope.end()) continue;
                if (p > 0 && val[static_cast<std::size_t>(it - fam.scope.begin())] != want) {
                    rep.problems.push_back("entry '" + key + "' gives positive mass against " +
                                           name + "=" + std::to_string(want));
                    break;
                }
            }
        }
    }
    return rep;
}

}  // namespace causalhier

#endif
