#ifndef CAUSALHIER_SCM_HPP
#define CAUSALHIER_SCM_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causalhier/rational.hpp"

namespace causalhier {

/// A joint valuation of an ordered variable list; entry i is the value of
/// the i-th variable of the scope. Endogenous values are always 0 or 1.
using Valuation = std::vector<int>;

/// A do-intervention: a finite partial assignment of endogenous variables.
/// The empty map is the (valid) empty intervention.
struct Intervention {
    std::map<std::string, int> assignments;

    bool empty() const { return assignments.empty(); }
    bool assigns(const std::string& v) const { return assignments.count(v) != 0; }
    int value_of(const std::string& v) const { return assignments.at(v); }
    auto operator<=>(const Intervention&) const = default;
};

/// Scope-ordered display key, e.g. "X=1,Z=0"; "" for the empty intervention.
inline std::string intervention_key(const Intervention& iv,
                                    const std::vector<std::string>& scope) {
    std::string out;
    for (const auto& v : scope) {
        auto it = iv.assignments.find(v);
        if (it == iv.assignments.end()) continue;
        if (!out.empty()) out += ",";
        out += v + "=" + std::to_string(it->second);
    }
    return out;
}

inline std::string bit_key(const Valuation& v) {
    std::string s(v.size(), '0');
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = static_cast<char>('0' + v[i]);
    return s;
}

/// Exact finite distribution over joint valuations of `scope`.
/// Absent cells are zero; stored cells are nonnegative and sum to one.
struct DistTable {
    std::vector<std::string> scope;
    std::map<Valuation, Rational> cells;

    Rational at(const Valuation& v) const {
        auto it = cells.find(v);
        return it == cells.end() ? Rational(0) : it->second;
    }
    Rational total() const {
        Rational t = 0;
        for (const auto& [k, p] : cells) t += p;
        return t;
    }
    /// Probability of a partial event given as var -> value.
    Rational prob(const std::map<std::string, int>& event) const {
        Rational t = 0;
        for (const auto& [val, p] : cells) {
            bool ok = true;
            for (const auto& [name, want] : event) {
                auto it = std::find(scope.begin(), scope.end(), name);
                if (it == scope.end() || val[static_cast<std::size_t>(it - scope.begin())] != want) {
                    ok = false;
                    break;
                }
            }
            if (ok) t += p;
        }
        return t;
    }
    /// Marginal onto a sub-scope (listed in the desired output order).
    DistTable marginal(const std::vector<std::string>& sub) const {
        DistTable out;
        out.scope = sub;
        std::vector<std::size_t> idx;
        for (const auto& name : sub) {
            auto it = std::find(scope.begin(), scope.end(), name);
            if (it == scope.end()) throw Error(ErrCode::Input, "marginal: unknown variable " + name);
            idx.push_back(static_cast<std::size_t>(it - scope.begin()));
        }
        for (const auto& [val, p] : cells) {
            Valuation sv;
            sv.reserve(idx.size());
            for (auto i : idx) sv.push_back(val[i]);
            out.cells[sv] += p;
        }
        out.strip_zeros();
        return out;
    }
    void strip_zeros() {
        for (auto it = cells.begin(); it != cells.end();)
            it = it->second == 0 ? cells.erase(it) : std::next(it);
    }
    bool operator==(const DistTable&) const = default;
};

/// Total lookup table for one structural function. The key combines the
/// parent valuation (parent-list order, first parent most significant) and
/// the exogenous-parent valuation (mixed radix, same convention).
struct MechanismTable {
    std::vector<int> values;  // -1 marks a missing row until filled

    static std::size_t size_for(std::size_t n_parents, const std::vector<int>& exo_ranges) {
        std::size_t s = std::size_t(1) << n_parents;
        for (int r : exo_ranges) s *= static_cast<std::size_t>(r);
        return s;
    }
};

/// Explicit finite SCM over binary endogenous variables. The variable list
/// order is the total order; parent sets must point at earlier variables.
/// Exogenous noise is a single explicit list of weighted units.
struct ScmModel {
    std::vector<std::string> variables;
    std::vector<std::vector<int>> parents;      // per variable, indices of earlier variables
    std::vector<std::string> exo_names;
    std::vector<int> exo_ranges;
    std::vector<std::vector<int>> exo_parents;  // per variable, indices into exo_names
    std::vector<std::pair<Valuation, Rational>> units;  // full exogenous valuations
    std::vector<MechanismTable> mechanisms;

    std::size_t n() const { return variables.size(); }
    int var_index(const std::string& name) const {
        auto it = std::find(variables.begin(), variables.end(), name);
        if (it == variables.end()) throw Error(ErrCode::Input, "unknown variable: " + name);
        return static_cast<int>(it - variables.begin());
    }

    std::size_t mech_index(std::size_t v, const Valuation& endo, const Valuation& unit) const {
        std::size_t key = 0;
        for (int p : parents[v]) key = (key << 1) | static_cast<std::size_t>(endo[static_cast<std::size_t>(p)]);
        for (int e : exo_parents[v]) {
            key = key * static_cast<std::size_t>(exo_ranges[static_cast<std::size_t>(e)]) +
                  static_cast<std::size_t>(unit[static_cast<std::size_t>(e)]);
        }
        return key;
    }
};

struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

/// Non-aborting structural check; reports every violation it finds.
inline ValidationReport validate_model(const ScmModel& m) {
    ValidationReport rep;
    auto note = [&](const std::string& s) { rep.problems.push_back(s); };

    std::map<std::string, int> seen;
    for (const auto& v : m.variables)
        if (++seen[v] == 2) note("duplicate variable name: " + v);
    if (m.parents.size() != m.n() || m.exo_parents.size() != m.n() || m.mechanisms.size() != m.n())
        note("per-variable field lengths do not match the variable list");

    for (std::size_t i = 0; i < m.parents.size() && i < m.n(); ++i) {
        for (int p : m.parents[i]) {
            if (p < 0 || static_cast<std::size_t>(p) >= m.n())
                note("parent index out of range for " + m.variables[i]);
            else if (static_cast<std::size_t>(p) >= i)
                note("parent " + m.variables[static_cast<std::size_t>(p)] + " does not precede " +
                     m.variables[i] + " (order violation)");
        }
    }
    for (std::size_t i = 0; i < m.exo_parents.size() && i < m.n(); ++i)
        for (int e : m.exo_parents[i])
            if (e < 0 || static_cast<std::size_t>(e) >= m.exo_names.size())
                note("exogenous parent index out of range for " + m.variables[i]);

    Rational total = 0;
    for (const auto& [u, p] : m.units) {
        if (p < 0) note("negative unit probability " + format_rational(p));
        if (u.size() != m.exo_names.size())
            note("unit valuation length does not match the exogenous variable list");
        else
            for (std::size_t e = 0; e < u.size(); ++e)
                if (u[e] < 0 || u[e] >= m.exo_ranges[e])
                    note("unit value out of range for " + m.exo_names[e]);
        total += p;
    }
    if (total != 1)
        note("unit probabilities sum to " + format_rational(total) + ", not 1");

    for (std::size_t i = 0; i < m.mechanisms.size() && i < m.n(); ++i) {
        std::vector<int> ranges;
        for (int e : m.exo_parents[i]) ranges.push_back(m.exo_ranges[static_cast<std::size_t>(e)]);
        std::size_t want = MechanismTable::size_for(m.parents[i].size(), ranges);
        if (m.mechanisms[i].values.size() != want) {
            note("mechanism table for " + m.variables[i] + " has wrong size");
            continue;
        }
        for (std::size_t k = 0; k < want; ++k) {
            int val = m.mechanisms[i].values[k];
            if (val == -1) {
                note("mechanism table for " + m.variables[i] + " is partial (missing rows)");
                break;
            }
            if (val != 0 && val != 1) {
                note("mechanism value out of {0,1} for " + m.variables[i]);
                break;
            }
        }
    }
    return rep;
}

inline void validate_intervention(const ScmModel& m, const Intervention& iv) {
    for (const auto& [name, val] : iv.assignments) {
        m.var_index(name);
        if (val != 0 && val != 1)
            throw Error(ErrCode::Input, "intervention value out of {0,1} for " + name);
    }
}

namespace detail {
/// Evaluates the manipulated structural equations for one unit, in order.
inline Valuation solve_unit_unchecked(const ScmModel& m, const Intervention& iv,
                                      const Valuation& unit) {
    Valuation out(m.n(), 0);
    for (std::size_t i = 0; i < m.n(); ++i) {
        auto it = iv.assignments.find(m.variables[i]);
        if (it != iv.assignments.end()) {
            out[i] = it->second;
        } else {
            out[i] = m.mechanisms[i].values[m.mech_index(i, out, unit)];
        }
    }
    return out;
}
}  // namespace detail

/// Unique solution of the manipulated equations for one exogenous unit.
/// The unit must be one of the model's listed units.
inline Valuation solve_unit(const ScmModel& m, const Intervention& iv, const Valuation& unit) {
    validate_intervention(m, iv);
    bool known = false;
    for (const auto& [u, p] : m.units)
        if (u == unit) { known = true; break; }
    if (!known) throw Error(ErrCode::Input, "solve_unit: unknown exogenous unit");
    return detail::solve_unit_unchecked(m, iv, unit);
}

/// The manipulated model: intervened variables get constant mechanisms.
inline ScmModel manipulate(const ScmModel& m, const Intervention& iv) {
    validate_intervention(m, iv);
    ScmModel out = m;
    for (const auto& [name, val] : iv.assignments) {
        std::size_t i = static_cast<std::size_t>(out.var_index(name));
        out.parents[i].clear();
        out.exo_parents[i].clear();
        out.mechanisms[i].values.assign(1, val);
    }
    return out;
}

inline DistTable interventional(const ScmModel& m, const Intervention& iv) {
    DistTable t;
    t.scope = m.variables;
    for (const auto& [u, p] : m.units)
        t.cells[detail::solve_unit_unchecked(m, iv, u)] += p;
    t.strip_zeros();
    return t;
}

inline DistTable observational(const ScmModel& m) { return interventional(m, Intervention{}); }

/// One counterfactual conjunct: an intervention together with a partial
/// outcome event over endogenous variables.
struct Conjunct {
    Intervention intervention;
    std::map<std::string, int> outcome;
};

inline bool satisfies(const ScmModel& m, const Valuation& full,
                      const std::map<std::string, int>& event) {
    for (const auto& [name, want] : event)
        if (full[static_cast<std::size_t>(m.var_index(name))] != want) return false;
    return true;
}

/// Joint probability that every conjunct holds when all interventions share
/// the same exogenous unit (the finite sum formula).
inline Rational counterfactual_joint(const ScmModel& m, const std::vector<Conjunct>& conjuncts) {
    for (const auto& c : conjuncts) validate_intervention(m, c.intervention);
    Rational total = 0;
    for (const auto& [u, p] : m.units) {
        bool all = true;
        for (const auto& c : conjuncts) {
            Valuation sol = detail::solve_unit_unchecked(m, c.intervention, u);
            if (!satisfies(m, sol, c.outcome)) { all = false; break; }
        }
        if (all) total += p;
    }
    return total;
}

}  // namespace causalhier

#endif
