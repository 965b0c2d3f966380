#ifndef CAUSALHIER_BOUNDS_HPP
#define CAUSALHIER_BOUNDS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalhier/hierarchy.hpp"
#include "causalhier/lp.hpp"
#include "causalhier/standard_form.hpp"

namespace causalhier {

/// Level-2 evidence for a bounding problem: any set of interventional tables,
/// each possibly over a sub-scope of the variable order. Absent interventions
/// are simply unconstrained.
struct L2Data {
    std::vector<std::pair<Intervention, DistTable>> entries;

    static L2Data from_family(const InterventionalFamily& fam) {
        L2Data d;
        for (const auto& e : fam.entries) d.entries.push_back(e);
        return d;
    }
    static L2Data from_2ve(const TwoVarFamily& fam) {
        L2Data d;
        d.entries.emplace_back(Intervention{}, fam.obs);
        d.entries.emplace_back(Intervention{{{fam.x_var, 0}}}, fam.do_x0);
        d.entries.emplace_back(Intervention{{{fam.x_var, 1}}}, fam.do_x1);
        return d;
    }
};

/// A counterfactual query: a conjunction of (intervention, partial outcome)
/// pairs, optionally conditioned on an event determined by the Level-2 data.
struct CfQuery {
    std::vector<Conjunct> conjuncts;
    std::vector<Conjunct> condition;
};

struct QueryBounds {
    Rational lo, hi;
    StandardFormModel argmin, argmax;
    bool collapsed = false;
};

struct CollapseReport {
    bool collapsed = true;
    std::optional<CfQuery> witness;
    Rational lo, hi;
    std::size_t cells_checked = 0;
};

namespace detail {

/// The atom polytope {q >= 0 : q matches every supplied Level-2 cell}.
struct AtomSystem {
    std::vector<std::string> order;
    std::vector<ResponseAtom> atoms;
    LpProblem base;
    std::vector<std::string> row_desc;
    std::map<Intervention, std::vector<Valuation>> outcome_cache;

    const std::vector<Valuation>& outcomes(const Intervention& iv) {
        auto it = outcome_cache.find(iv);
        if (it != outcome_cache.end()) return it->second;
        std::vector<Valuation> out;
        out.reserve(atoms.size());
        for (const auto& a : atoms) out.push_back(eval_atom(order, a, iv));
        return outcome_cache.emplace(iv, std::move(out)).first->second;
    }

    /// 0/1 objective selecting the atoms whose trajectories satisfy every
    /// conjunct.
    std::vector<Rational> indicator(const std::vector<Conjunct>& cs) {
        std::vector<Rational> obj(atoms.size(), Rational(0));
        std::vector<const std::vector<Valuation>*> outs;
        std::vector<std::vector<std::pair<std::size_t, int>>> wants;
        for (const auto& c : cs) {
            outs.push_back(&outcomes(c.intervention));
            std::vector<std::pair<std::size_t, int>> w;
            for (const auto& [name, val] : c.outcome) {
                auto it = std::find(order.begin(), order.end(), name);
                if (it == order.end())
                    throw Error(ErrCode::Input, "query names unknown variable " + name);
                w.emplace_back(static_cast<std::size_t>(it - order.begin()), val);
            }
            wants.push_back(std::move(w));
        }
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            bool in = true;
            for (std::size_t k = 0; k < cs.size() && in; ++k)
                for (const auto& [idx, val] : wants[k])
                    if ((*outs[k])[a][idx] != val) { in = false; break; }
            if (in) obj[a] = 1;
        }
        return obj;
    }

    StandardFormModel vertex_model(const std::vector<Rational>& point) const {
        StandardFormModel m;
        m.order = order;
        for (std::size_t a = 0; a < atoms.size(); ++a)
            if (point[a] != 0) m.atoms[atoms[a]] = point[a];
        return m;
    }
};

inline AtomSystem build_atom_system(const std::vector<std::string>& order, const L2Data& l2,
                                    bool allow_n4) {
    if (order.size() > 4 || (order.size() > 3 && !allow_n4))
        throw Error(ErrCode::Input,
                    order.size() > 4
                        ? "bound_query supports at most 4 variables"
                        : "4-variable problems (32768 atoms) must be enabled explicitly");
    AtomSystem sys;
    sys.order = order;
    sys.atoms = enumerate_atoms(order);
    sys.base.num_vars = sys.atoms.size();
    for (const auto& [iv, table] : l2.entries) {
        const auto& outs = sys.outcomes(iv);
        std::vector<std::size_t> scope_idx;
        for (const auto& name : table.scope) {
            auto it = std::find(order.begin(), order.end(), name);
            if (it == order.end())
                throw Error(ErrCode::Input, "Level-2 table names unknown variable " + name);
            scope_idx.push_back(static_cast<std::size_t>(it - order.begin()));
        }
        // every cell of the table's scope, implicit zeros included
        std::size_t combos = std::size_t(1) << scope_idx.size();
        for (std::size_t code = 0; code < combos; ++code) {
            Valuation cell(scope_idx.size());
            for (std::size_t k = 0; k < scope_idx.size(); ++k)
                cell[k] = static_cast<int>((code >> (scope_idx.size() - 1 - k)) & 1);
            std::vector<Rational> row(sys.atoms.size(), Rational(0));
            for (std::size_t a = 0; a < sys.atoms.size(); ++a) {
                bool match = true;
                for (std::size_t k = 0; k < scope_idx.size(); ++k)
                    if (outs[a][scope_idx[k]] != cell[k]) { match = false; break; }
                if (match) row[a] = 1;
            }
            sys.base.rows.push_back(std::move(row));
            sys.base.rhs.push_back(table.at(cell));
            sys.row_desc.push_back("do{" + intervention_key(iv, order) + "} cell " +
                                   bit_key(cell));
        }
    }
    sys.base.rows.emplace_back(sys.atoms.size(), Rational(1));
    sys.base.rhs.emplace_back(1);
    sys.row_desc.push_back("total mass = 1");
    sys.base.objective.assign(sys.atoms.size(), Rational(0));
    return sys;
}

inline void throw_infeasible(const AtomSystem& sys, const LpResult& r) {
    std::string msg = "Level-2 data is not realizable; conflicting constraints:";
    for (auto i : r.certificate_rows) msg += " [" + sys.row_desc[i] + "]";
    throw Error(ErrCode::Infeasible, msg);
}

}  // namespace detail

/// Exact interval of a counterfactual query over every atom distribution
/// matching the supplied Level-2 cells, with the optimizing vertices.
inline QueryBounds bound_query(const std::vector<std::string>& order, const L2Data& l2,
                               const CfQuery& query, bool allow_n4 = false) {
    detail::AtomSystem sys = detail::build_atom_system(order, l2, allow_n4);
    std::vector<Conjunct> all = query.conjuncts;
    all.insert(all.end(), query.condition.begin(), query.condition.end());
    LpProblem prob = sys.base;
    prob.objective = sys.indicator(all);
    LpResult lo = lp_solve(prob, LpSense::Minimize);
    if (lo.status == LpStatus::Infeasible) detail::throw_infeasible(sys, lo);
    LpResult hi = lp_solve(prob, LpSense::Maximize);

    QueryBounds out;
    out.lo = lo.value;
    out.hi = hi.value;
    out.argmin = sys.vertex_model(lo.point);
    out.argmax = sys.vertex_model(hi.point);
    if (!query.condition.empty()) {
        // The conditioning probability must be pinned by the supplied data:
        // all condition conjuncts under one supplied intervention.
        const Intervention& alpha = query.condition.front().intervention;
        std::map<std::string, int> event;
        for (const auto& c : query.condition) {
            if (!(c.intervention == alpha))
                throw Error(ErrCode::Input,
                            "conditioning event spans several interventions; "
                            "it is not determined by Level-2 data");
            for (const auto& [name, val] : c.outcome) {
                auto [it, fresh] = event.emplace(name, val);
                if (!fresh && it->second != val)
                    throw Error(ErrCode::Input, "contradictory conditioning event");
            }
        }
        const DistTable* table = nullptr;
        for (const auto& [iv, t] : l2.entries)
            if (iv == alpha) { table = &t; break; }
        if (!table)
            throw Error(ErrCode::Input,
                        "conditioning intervention has no supplied Level-2 entry");
        for (const auto& [name, val] : event)
            if (std::find(table->scope.begin(), table->scope.end(), name) == table->scope.end())
                throw Error(ErrCode::Input,
                            "conditioning event is outside the supplied table's scope");
        Rational pc = table->prob(event);
        if (pc == 0)
            throw Error(ErrCode::Precondition, "conditioning event has probability zero");
        out.lo /= pc;
        out.hi /= pc;
    }
    out.collapsed = out.lo == out.hi;
    return out;
}

/// Decides whether the supplied Level-2 data pins down every joint outcome
/// cell over the listed interventions. Not-collapsed verdicts return the
/// first cell (in canonical order) with a nondegenerate interval.
inline CollapseReport check_collapse(const std::vector<std::string>& order, const L2Data& l2,
                                     const std::vector<Intervention>& interventions,
                                     bool allow_n4 = false) {
    detail::AtomSystem sys = detail::build_atom_system(order, l2, allow_n4);
    CollapseReport rep;
    std::size_t n = order.size(), k = interventions.size();
    if (k == 0) return rep;
    std::vector<std::size_t> codes(k, 0);
    std::size_t per = std::size_t(1) << n;
    while (true) {
        std::vector<Conjunct> conjuncts;
        for (std::size_t a = 0; a < k; ++a) {
            Conjunct c;
            c.intervention = interventions[a];
            for (std::size_t i = 0; i < n; ++i)
                c.outcome[order[i]] = static_cast<int>((codes[a] >> (n - 1 - i)) & 1);
            conjuncts.push_back(std::move(c));
        }
        LpProblem prob = sys.base;
        prob.objective = sys.indicator(conjuncts);
        bool all_zero = true;
        for (const auto& x : prob.objective)
            if (x != 0) { all_zero = false; break; }
        ++rep.cells_checked;
        if (!all_zero) {  // an all-zero objective is pinned to 0 outright
            LpResult lo = lp_solve(prob, LpSense::Minimize);
            if (lo.status == LpStatus::Infeasible) detail::throw_infeasible(sys, lo);
            LpResult hi = lp_solve(prob, LpSense::Maximize);
            if (lo.value != hi.value) {
                rep.collapsed = false;
                rep.witness = CfQuery{conjuncts, {}};
                rep.lo = lo.value;
                rep.hi = hi.value;
                return rep;
            }
        }
        std::size_t a = k;
        while (a-- > 0) {
            if (++codes[a] < per) break;
            codes[a] = 0;
            if (a == 0) return rep;
        }
    }
}

}  // namespace causalhier

#endif
