#ifndef CAUSALHIER_STANDARD_FORM_HPP
#define CAUSALHIER_STANDARD_FORM_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "causalhier/hierarchy.hpp"
#include "causalhier/scm.hpp"

namespace causalhier {

/// One deterministic response per variable per valuation of all earlier
/// variables. resp[i] has 2^i entries, indexed with the first variable as
/// the most significant bit; resp[0] holds the single empty-key entry.
struct ResponseAtom {
    std::vector<std::vector<std::uint8_t>> resp;

    auto operator<=>(const ResponseAtom&) const = default;
};

/// Rational distribution over response atoms for a fixed variable order.
/// Zero-mass atoms are not stored.
struct StandardFormModel {
    std::vector<std::string> order;
    std::map<ResponseAtom, Rational> atoms;

    bool operator==(const StandardFormModel&) const = default;
};

inline std::size_t pred_index(const Valuation& vals, std::size_t var) {
    std::size_t key = 0;
    for (std::size_t k = 0; k < var; ++k) key = (key << 1) | static_cast<std::size_t>(vals[k]);
    return key;
}

/// Deterministic trajectory of one atom under an intervention.
inline Valuation eval_atom(const std::vector<std::string>& order, const ResponseAtom& atom,
                           const Intervention& iv) {
    Valuation out(order.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto it = iv.assignments.find(order[i]);
        out[i] = it != iv.assignments.end()
                     ? it->second
                     : static_cast<int>(atom.resp[i][pred_index(out, i)]);
    }
    return out;
}

inline ValidationReport validate_standard_form(const StandardFormModel& m) {
    ValidationReport rep;
    Rational total = 0;
    for (const auto& [atom, p] : m.atoms) {
        if (p < 0) rep.problems.push_back("negative atom mass " + format_rational(p));
        total += p;
        if (atom.resp.size() != m.order.size()) {
            rep.problems.push_back("atom has wrong number of response maps");
            continue;
        }
        for (std::size_t i = 0; i < atom.resp.size(); ++i)
            if (atom.resp[i].size() != (std::size_t(1) << i))
                rep.problems.push_back("response map for " + m.order[i] + " is not total");
    }
    if (total != 1)
        rep.problems.push_back("atom masses sum to " + format_rational(total) + ", not 1");
    return rep;
}

/// Complete enumeration of response atoms in canonical (lexicographic)
/// order. There are 2^(2^n - 1) of them, hence the size cap.
inline std::vector<ResponseAtom> enumerate_atoms(const std::vector<std::string>& order,
                                                 std::size_t cap = 4) {
    std::size_t n = order.size();
    if (n < 1) throw Error(ErrCode::Input, "enumerate_atoms: need at least one variable");
    if (n > cap)
        throw Error(ErrCode::Input, "enumerate_atoms: " + std::to_string(n) +
                                        " variables means 2^(2^n-1) atoms; cap is " +
                                        std::to_string(cap));
    ResponseAtom atom;
    for (std::size_t i = 0; i < n; ++i)
        atom.resp.emplace_back(std::size_t(1) << i, std::uint8_t(0));
    std::vector<ResponseAtom> out;
    while (true) {
        out.push_back(atom);
        // odometer with the last response coordinate fastest
        std::size_t i = n;
        bool carried = false;
        while (i-- > 0 && !carried) {
            std::size_t j = atom.resp[i].size();
            while (j-- > 0) {
                if (atom.resp[i][j] == 0) {
                    atom.resp[i][j] = 1;
                    carried = true;
                    break;
                }
                atom.resp[i][j] = 0;
            }
        }
        if (!carried) break;
    }
    return out;
}

/// Pushforward of the unit distribution onto response atoms: each unit's atom
/// records, per variable and per predecessor valuation, the value the unit
/// produces under the intervention pinning those predecessors.
inline StandardFormModel canonicalize(const ScmModel& m) {
    ValidationReport rep = validate_model(m);
    if (!rep.ok()) throw Error(ErrCode::Input, "canonicalize: invalid model: " + rep.problems[0]);
    StandardFormModel out;
    out.order = m.variables;
    std::size_t n = m.n();
    for (const auto& [u, p] : m.units) {
        ResponseAtom atom;
        atom.resp.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t combos = std::size_t(1) << i;
            atom.resp[i].resize(combos);
            for (std::size_t key = 0; key < combos; ++key) {
                Intervention iv;
                for (std::size_t k = 0; k < i; ++k)
                    iv.assignments[m.variables[k]] = static_cast<int>((key >> (i - 1 - k)) & 1);
                Valuation sol = detail::solve_unit_unchecked(m, iv, u);
                atom.resp[i][key] = static_cast<std::uint8_t>(sol[i]);
            }
        }
        out.atoms[atom] += p;
    }
    for (auto it = out.atoms.begin(); it != out.atoms.end();)
        it = it->second == 0 ? out.atoms.erase(it) : std::next(it);
    return out;
}

/// Explicit SCM encoding of a standard-form model: a single exogenous
/// selector whose range enumerates the support atoms in canonical order.
inline ScmModel to_scm(const StandardFormModel& sf) {
    ScmModel m;
    m.variables = sf.order;
    std::size_t n = sf.order.size();
    std::vector<const ResponseAtom*> support;
    for (const auto& [atom, p] : sf.atoms) support.push_back(&atom);
    if (support.empty()) throw Error(ErrCode::Input, "to_scm: model has no support atoms");
    m.exo_names = {"U"};
    m.exo_ranges = {static_cast<int>(support.size())};
    std::size_t k = 0;
    for (const auto& [atom, p] : sf.atoms) m.units.emplace_back(Valuation{static_cast<int>(k++)}, p);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> pa(i);
        for (std::size_t j = 0; j < i; ++j) pa[j] = static_cast<int>(j);
        m.parents.push_back(std::move(pa));
        m.exo_parents.push_back({0});
        MechanismTable table;
        std::size_t combos = std::size_t(1) << i;
        table.values.resize(combos * support.size());
        for (std::size_t key = 0; key < combos; ++key)
            for (std::size_t a = 0; a < support.size(); ++a)
                table.values[key * support.size() + a] = support[a]->resp[i][key];
        m.mechanisms.push_back(std::move(table));
    }
    return m;
}

inline DistTable std_interventional(const StandardFormModel& sf, const Intervention& iv) {
    DistTable t;
    t.scope = sf.order;
    for (const auto& [atom, p] : sf.atoms) t.cells[eval_atom(sf.order, atom, iv)] += p;
    t.strip_zeros();
    return t;
}

inline InterventionalFamily std_family(const StandardFormModel& sf,
                                       const std::vector<Intervention>& interventions) {
    InterventionalFamily fam;
    fam.scope = sf.order;
    for (const auto& iv : interventions) fam.entries.emplace_back(iv, std_interventional(sf, iv));
    return fam;
}

inline CounterfactualTable std_project_l3(const StandardFormModel& sf,
                                          const std::vector<Intervention>& interventions) {
    CounterfactualTable t;
    t.interventions = interventions;
    t.scope = sf.order;
    for (const auto& [atom, p] : sf.atoms) {
        std::vector<Valuation> key;
        key.reserve(interventions.size());
        for (const auto& iv : interventions) key.push_back(eval_atom(sf.order, atom, iv));
        t.cells[key] += p;
    }
    for (auto it = t.cells.begin(); it != t.cells.end();)
        it = it->second == 0 ? t.cells.erase(it) : std::next(it);
    return t;
}

/// Model with no causal effects whatsoever: each variable responds with the
/// same value at every predecessor valuation, and the constant-response atoms
/// carry exactly the observational mass of the matching outcome.
inline StandardFormModel acausal_model(const DistTable& obs,
                                       const std::vector<std::string>& order) {
    if (obs.scope != order)
        throw Error(ErrCode::Input, "acausal_model: table scope must equal the order");
    StandardFormModel out;
    out.order = order;
    for (const auto& [val, p] : obs.cells) {
        if (p == 0) continue;
        ResponseAtom atom;
        for (std::size_t i = 0; i < order.size(); ++i)
            atom.resp.emplace_back(std::size_t(1) << i,
                                   static_cast<std::uint8_t>(val[i]));
        out.atoms[atom] += p;
    }
    return out;
}

/// The monotonic collapse witness: every variable after the first responds 1
/// at every nonzero predecessor valuation; the 2^n remaining response bits
/// are uniform.
inline StandardFormModel monotonic_example(const std::vector<std::string>& order,
                                           std::size_t cap = 4) {
    std::size_t n = order.size();
    if (n < 1 || n > cap)
        throw Error(ErrCode::Input, "monotonic_example: order size out of range");
    StandardFormModel out;
    out.order = order;
    Rational mass(1, BigInt(1) << n);
    for (std::size_t bits = 0; bits < (std::size_t(1) << n); ++bits) {
        ResponseAtom atom;
        for (std::size_t i = 0; i < n; ++i) {
            atom.resp.emplace_back(std::size_t(1) << i, std::uint8_t(1));
            atom.resp[i][0] = static_cast<std::uint8_t>((bits >> i) & 1);
        }
        out.atoms[atom] = mass;
    }
    return out;
}

/// One conjunct of a monotonic-model query: the event that `var` takes
/// `value` under the intervention pinning all its predecessors to zero.
struct MonotoneConjunct {
    std::string var;
    Intervention intervention;
    int value = 0;
};

/// A signed combination of single-intervention probabilities.
struct L2Term {
    Intervention intervention;
    std::map<std::string, int> event;
};
struct LinearCombo {
    std::vector<std::pair<Rational, L2Term>> terms;
};

inline Rational eval_combo(const LinearCombo& combo, const InterventionalFamily& fam) {
    Rational total = 0;
    for (const auto& [coeff, term] : combo.terms)
        total += coeff * fam.at(term.intervention).prob(term.event);
    return total;
}

/// Inclusion-exclusion reduction of a monotonic-model counterfactual query to
/// Level-2 terms. Valid for any model that gives every non-initial variable
/// probability 1 under each nonzero predecessor intervention: all-zero
/// response events coincide with outcome events under the intervention that
/// pins the skipped earlier variables to zero, which is a single-intervention
/// (hence Level-2) quantity; with no skipped variables it is observational.
inline LinearCombo monotonic_reduce(const std::vector<MonotoneConjunct>& query,
                                    const std::vector<std::string>& order) {
    std::vector<std::size_t> vars;
    std::vector<int> values;
    std::vector<bool> used(order.size(), false);
    for (const auto& c : query) {
        auto it = std::find(order.begin(), order.end(), c.var);
        if (it == order.end())
            throw Error(ErrCode::Input, "monotonic_reduce: unknown variable " + c.var);
        std::size_t i = static_cast<std::size_t>(it - order.begin());
        if (used[i]) throw Error(ErrCode::Input, "monotonic_reduce: duplicate variable " + c.var);
        used[i] = true;
        Intervention want;
        for (std::size_t k = 0; k < i; ++k) want.assignments[order[k]] = 0;
        if (c.intervention != want)
            throw Error(ErrCode::Input,
                        "monotonic_reduce: conjunct for " + c.var +
                            " must intervene exactly on its predecessors, all set to zero");
        if (c.value != 0 && c.value != 1)
            throw Error(ErrCode::Input, "monotonic_reduce: value out of {0,1}");
        vars.push_back(i);
        values.push_back(c.value);
    }
    std::vector<std::size_t> ones, zeros;
    for (std::size_t k = 0; k < vars.size(); ++k)
        (values[k] == 1 ? ones : zeros).push_back(vars[k]);

    LinearCombo combo;
    for (std::size_t pick = 0; pick < (std::size_t(1) << ones.size()); ++pick) {
        std::vector<std::size_t> zset = zeros;
        for (std::size_t b = 0; b < ones.size(); ++b)
            if ((pick >> b) & 1) zset.push_back(ones[b]);
        std::sort(zset.begin(), zset.end());
        Rational coeff = (std::popcount(pick) % 2 == 0) ? Rational(1) : Rational(-1);
        L2Term term;
        if (!zset.empty()) {
            std::size_t top = zset.back();
            for (std::size_t j = 0; j < top; ++j)
                if (!std::binary_search(zset.begin(), zset.end(), j))
                    term.intervention.assignments[order[j]] = 0;
            for (std::size_t i : zset) term.event[order[i]] = 0;
        }
        combo.terms.emplace_back(coeff, std::move(term));
    }
    return combo;
}

/// Constructive witness that Level 1 never pins down Level 2: an acausal
/// model of `obs` paired with a tweaked copy that flips, on the mass of the
/// first positive (X,Y) cell, Y's response under the opposite X value. Both
/// project to `obs`; their do(X := x-dagger) distributions of Y differ.
inline std::pair<StandardFormModel, StandardFormModel> split_l1(
    const DistTable& obs, const std::vector<std::string>& order) {
    if (order.size() < 2)
        throw Error(ErrCode::Input, "split_l1: need at least two variables");
    StandardFormModel nu = acausal_model(obs, order);

    DistTable xy = obs.marginal({order[0], order[1]});
    int x_star = -1, y_star = -1;
    for (int x = 0; x < 2 && x_star < 0; ++x)
        for (int y = 0; y < 2; ++y)
            if (xy.at({x, y}) > 0) {
                x_star = x;
                y_star = y;
                break;
            }
    int x_dag = 1 - x_star, y_dag = 1 - y_star;

    StandardFormModel nu2;
    nu2.order = order;
    for (const auto& [atom, p] : nu.atoms) {
        ResponseAtom a = atom;
        if (a.resp[0][0] == x_star && a.resp[1][static_cast<std::size_t>(x_star)] == y_star)
            a.resp[1][static_cast<std::size_t>(x_dag)] = static_cast<std::uint8_t>(y_dag);
        nu2.atoms[a] += p;
    }
    return {std::move(nu), std::move(nu2)};
}

}  // namespace causalhier

#endif
