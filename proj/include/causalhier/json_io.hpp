#ifndef CAUSALHIER_JSON_IO_HPP
#define CAUSALHIER_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "causalhier/bounds.hpp"
#include "causalhier/causation.hpp"
#include "causalhier/hierarchy.hpp"
#include "causalhier/scm.hpp"
#include "causalhier/separation.hpp"
#include "causalhier/standard_form.hpp"
#include "causalhier/verify.hpp"

namespace causalhier {

using Json = nlohmann::ordered_json;

namespace jsondetail {

inline const Json& need(const Json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrCode::Input, "missing required field '" + key + "'");
    return *it;
}

inline Rational rat(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw Error(ErrCode::Input, "expected a rational string like \"1/4\"");
}

inline Valuation parse_bits(const std::string& key, std::size_t width) {
    if (key.size() != width)
        throw Error(ErrCode::Input, "cell key '" + key + "' has wrong length");
    Valuation v(width);
    for (std::size_t i = 0; i < width; ++i) {
        if (key[i] != '0' && key[i] != '1')
            throw Error(ErrCode::Input, "cell key '" + key + "' is not a bitstring");
        v[i] = key[i] - '0';
    }
    return v;
}

inline int parse_bit(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw Error(ErrCode::Input, what + " must be 0 or 1");
    int v = j.get<int>();
    if (v != 0 && v != 1) throw Error(ErrCode::Input, what + " must be 0 or 1");
    return v;
}

}  // namespace jsondetail

inline Json intervention_to_json(const Intervention& iv, const std::vector<std::string>& scope) {
    Json j = Json::object();
    for (const auto& name : scope) {
        auto it = iv.assignments.find(name);
        if (it != iv.assignments.end()) j[name] = it->second;
    }
    // assignments outside the scope keep map order
    for (const auto& [name, val] : iv.assignments)
        if (std::find(scope.begin(), scope.end(), name) == scope.end()) j[name] = val;
    return j;
}

inline Intervention intervention_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrCode::Input, "intervention must be a JSON object");
    Intervention iv;
    for (auto it = j.begin(); it != j.end(); ++it)
        iv.assignments[it.key()] = jsondetail::parse_bit(it.value(), "intervention value");
    return iv;
}

inline std::map<std::string, int> event_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrCode::Input, "event must be a JSON object");
    std::map<std::string, int> event;
    for (auto it = j.begin(); it != j.end(); ++it)
        event[it.key()] = jsondetail::parse_bit(it.value(), "event value");
    return event;
}

inline Json event_to_json(const std::map<std::string, int>& event) {
    Json j = Json::object();
    for (const auto& [k, v] : event) j[k] = v;
    return j;
}

inline Json dist_to_json(const DistTable& t) {
    Json j;
    j["scope"] = t.scope;
    Json cells = Json::object();
    for (const auto& [val, p] : t.cells) cells[bit_key(val)] = format_rational(p);
    j["cells"] = std::move(cells);
    return j;
}

inline DistTable dist_from_json(const Json& j) {
    DistTable t;
    t.scope = jsondetail::need(j, "scope").get<std::vector<std::string>>();
    const Json& cells = jsondetail::need(j, "cells");
    for (auto it = cells.begin(); it != cells.end(); ++it)
        t.cells[jsondetail::parse_bits(it.key(), t.scope.size())] = jsondetail::rat(it.value());
    return t;
}

// ---------------------------------------------------------------------------
// SCM model files

inline Json model_to_json(const ScmModel& m) {
    Json j;
    j["variables"] = m.variables;
    Json parents = Json::object();
    for (std::size_t i = 0; i < m.n(); ++i) {
        if (m.parents[i].empty()) continue;
        Json list = Json::array();
        for (int p : m.parents[i]) list.push_back(m.variables[static_cast<std::size_t>(p)]);
        parents[m.variables[i]] = std::move(list);
    }
    j["parents"] = std::move(parents);
    Json exo = Json::array();
    for (std::size_t e = 0; e < m.exo_names.size(); ++e)
        exo.push_back(Json{{"name", m.exo_names[e]}, {"range", m.exo_ranges[e]}});
    j["exo"] = std::move(exo);
    Json exo_parents = Json::object();
    for (std::size_t i = 0; i < m.n(); ++i) {
        if (m.exo_parents[i].empty()) continue;
        Json list = Json::array();
        for (int e : m.exo_parents[i]) list.push_back(m.exo_names[static_cast<std::size_t>(e)]);
        exo_parents[m.variables[i]] = std::move(list);
    }
    j["exo_parents"] = std::move(exo_parents);
    Json units = Json::array();
    for (const auto& [u, p] : m.units) {
        Json assign = Json::object();
        for (std::size_t e = 0; e < m.exo_names.size() && e < u.size(); ++e)
            assign[m.exo_names[e]] = u[e];
        units.push_back(Json{{"p", format_rational(p)}, {"assign", std::move(assign)}});
    }
    j["units"] = std::move(units);
    Json mechanisms = Json::object();
    for (std::size_t i = 0; i < m.n(); ++i) {
        Json rows = Json::array();
        std::vector<int> ranges;
        for (int e : m.exo_parents[i]) ranges.push_back(m.exo_ranges[static_cast<std::size_t>(e)]);
        std::size_t exo_combos = 1;
        for (int r : ranges) exo_combos *= static_cast<std::size_t>(r);
        std::size_t pa_combos = std::size_t(1) << m.parents[i].size();
        for (std::size_t pk = 0; pk < pa_combos; ++pk) {
            for (std::size_t ek = 0; ek < exo_combos; ++ek) {
                int value = m.mechanisms[i].values[pk * exo_combos + ek];
                if (value < 0) continue;
                Json pa = Json::object();
                for (std::size_t b = 0; b < m.parents[i].size(); ++b)
                    pa[m.variables[static_cast<std::size_t>(m.parents[i][b])]] =
                        static_cast<int>((pk >> (m.parents[i].size() - 1 - b)) & 1);
                Json ex = Json::object();
                std::size_t rem = ek;
                for (std::size_t b = m.exo_parents[i].size(); b-- > 0;) {
                    ex[m.exo_names[static_cast<std::size_t>(m.exo_parents[i][b])]] =
                        static_cast<int>(rem % static_cast<std::size_t>(ranges[b]));
                    rem /= static_cast<std::size_t>(ranges[b]);
                }
                // rebuild in declared order
                Json ex_ordered = Json::object();
                for (int e : m.exo_parents[i]) {
                    const std::string& name = m.exo_names[static_cast<std::size_t>(e)];
                    ex_ordered[name] = ex[name];
                }
                rows.push_back(Json{{"parents", std::move(pa)},
                                    {"exo", std::move(ex_ordered)},
                                    {"value", value}});
            }
        }
        mechanisms[m.variables[i]] = std::move(rows);
    }
    j["mechanisms"] = std::move(mechanisms);
    return j;
}

inline ScmModel model_from_json(const Json& j) {
    ScmModel m;
    m.variables = jsondetail::need(j, "variables").get<std::vector<std::string>>();
    auto index_of = [&](const std::string& name) {
        auto it = std::find(m.variables.begin(), m.variables.end(), name);
        if (it == m.variables.end())
            throw Error(ErrCode::Input, "unknown variable '" + name + "' in model file");
        return static_cast<int>(it - m.variables.begin());
    };
    m.parents.assign(m.n(), {});
    if (j.contains("parents"))
        for (auto it = j["parents"].begin(); it != j["parents"].end(); ++it) {
            auto& list = m.parents[static_cast<std::size_t>(index_of(it.key()))];
            for (const auto& p : it.value()) list.push_back(index_of(p.get<std::string>()));
        }
    for (const auto& e : jsondetail::need(j, "exo")) {
        m.exo_names.push_back(jsondetail::need(e, "name").get<std::string>());
        int range = jsondetail::need(e, "range").get<int>();
        if (range < 1) throw Error(ErrCode::Input, "exogenous range must be at least 1");
        m.exo_ranges.push_back(range);
    }
    auto exo_index = [&](const std::string& name) {
        auto it = std::find(m.exo_names.begin(), m.exo_names.end(), name);
        if (it == m.exo_names.end())
            throw Error(ErrCode::Input, "unknown exogenous variable '" + name + "'");
        return static_cast<int>(it - m.exo_names.begin());
    };
    m.exo_parents.assign(m.n(), {});
    if (j.contains("exo_parents"))
        for (auto it = j["exo_parents"].begin(); it != j["exo_parents"].end(); ++it) {
            auto& list = m.exo_parents[static_cast<std::size_t>(index_of(it.key()))];
            for (const auto& e : it.value()) list.push_back(exo_index(e.get<std::string>()));
        }
    for (const auto& u : jsondetail::need(j, "units")) {
        Valuation val(m.exo_names.size(), 0);
        const Json& assign = jsondetail::need(u, "assign");
        for (std::size_t e = 0; e < m.exo_names.size(); ++e) {
            auto it = assign.find(m.exo_names[e]);
            if (it == assign.end())
                throw Error(ErrCode::Input, "unit does not assign " + m.exo_names[e]);
            val[e] = it->get<int>();
        }
        m.units.emplace_back(std::move(val), jsondetail::rat(jsondetail::need(u, "p")));
    }
    m.mechanisms.assign(m.n(), {});
    for (std::size_t i = 0; i < m.n(); ++i) {
        std::vector<int> ranges;
        for (int e : m.exo_parents[i]) ranges.push_back(m.exo_ranges[static_cast<std::size_t>(e)]);
        m.mechanisms[i].values.assign(MechanismTable::size_for(m.parents[i].size(), ranges), -1);
    }
    if (j.contains("mechanisms")) {
        for (auto it = j["mechanisms"].begin(); it != j["mechanisms"].end(); ++it) {
            std::size_t i = static_cast<std::size_t>(index_of(it.key()));
            for (const auto& row : it.value()) {
                const Json& pa = jsondetail::need(row, "parents");
                const Json& ex = jsondetail::need(row, "exo");
                std::size_t key = 0;
                for (int p : m.parents[i]) {
                    const std::string& name = m.variables[static_cast<std::size_t>(p)];
                    auto f = pa.find(name);
                    if (f == pa.end())
                        throw Error(ErrCode::Input, "mechanism row for " + m.variables[i] +
                                                        " does not cover parent " + name);
                    key = (key << 1) |
                          static_cast<std::size_t>(jsondetail::parse_bit(*f, "parent value"));
                }
                for (const auto& [name, want] : pa.items())
                    if (std::find_if(m.parents[i].begin(), m.parents[i].end(), [&](int p) {
                            return m.variables[static_cast<std::size_t>(p)] == name;
                        }) == m.parents[i].end())
                        throw Error(ErrCode::Input, "mechanism row for " + m.variables[i] +
                                                        " mentions non-parent " + name);
                for (int e : m.exo_parents[i]) {
                    const std::string& name = m.exo_names[static_cast<std::size_t>(e)];
                    auto f = ex.find(name);
                    if (f == ex.end())
                        throw Error(ErrCode::Input, "mechanism row for " + m.variables[i] +
                                                        " does not cover exogenous " + name);
                    int v = f->get<int>();
                    if (v < 0 || v >= m.exo_ranges[static_cast<std::size_t>(e)])
                        throw Error(ErrCode::Input, "exogenous value out of range in mechanism row");
                    key = key * static_cast<std::size_t>(m.exo_ranges[static_cast<std::size_t>(e)]) +
                          static_cast<std::size_t>(v);
                }
                int value = jsondetail::parse_bit(jsondetail::need(row, "value"), "mechanism value");
                if (m.mechanisms[i].values[key] != -1)
                    throw Error(ErrCode::Input,
                                "duplicate mechanism row for " + m.variables[i]);
                m.mechanisms[i].values[key] = value;
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Level-2 / Level-3 files

inline Json family_to_json(const InterventionalFamily& fam) {
    Json j;
    j["scope"] = fam.scope;
    Json entries = Json::array();
    for (const auto& [iv, table] : fam.entries) {
        Json cells = Json::object();
        for (const auto& [val, p] : table.cells) cells[bit_key(val)] = format_rational(p);
        entries.push_back(Json{{"do", intervention_to_json(iv, fam.scope)},
                               {"cells", std::move(cells)}});
    }
    j["entries"] = std::move(entries);
    return j;
}

inline InterventionalFamily family_from_json(const Json& j) {
    InterventionalFamily fam;
    fam.scope = jsondetail::need(j, "scope").get<std::vector<std::string>>();
    for (const auto& e : jsondetail::need(j, "entries")) {
        DistTable t;
        t.scope = fam.scope;
        const Json& cells = jsondetail::need(e, "cells");
        for (auto it = cells.begin(); it != cells.end(); ++it)
            t.cells[jsondetail::parse_bits(it.key(), fam.scope.size())] =
                jsondetail::rat(it.value());
        fam.entries.emplace_back(intervention_from_json(jsondetail::need(e, "do")), std::move(t));
    }
    return fam;
}

inline Json l3_to_json(const CounterfactualTable& t) {
    Json j;
    j["scope"] = t.scope;
    Json ivs = Json::array();
    for (const auto& iv : t.interventions) ivs.push_back(intervention_to_json(iv, t.scope));
    j["interventions"] = std::move(ivs);
    Json cells = Json::object();
    for (const auto& [key, p] : t.cells) {
        std::string composite;
        for (std::size_t a = 0; a < key.size(); ++a) {
            if (a) composite += "|";
            composite += bit_key(key[a]);
        }
        cells[composite] = format_rational(p);
    }
    j["cells"] = std::move(cells);
    return j;
}

inline CounterfactualTable l3_from_json(const Json& j) {
    CounterfactualTable t;
    t.scope = jsondetail::need(j, "scope").get<std::vector<std::string>>();
    for (const auto& iv : jsondetail::need(j, "interventions"))
        t.interventions.push_back(intervention_from_json(iv));
    const Json& cells = jsondetail::need(j, "cells");
    for (auto it = cells.begin(); it != cells.end(); ++it) {
        std::vector<Valuation> key;
        std::string part;
        std::string composite = it.key() + "|";
        for (char c : composite) {
            if (c == '|') {
                key.push_back(jsondetail::parse_bits(part, t.scope.size()));
                part.clear();
            } else {
                part += c;
            }
        }
        if (key.size() != t.interventions.size())
            throw Error(ErrCode::Input, "composite key '" + it.key() +
                                            "' does not match the intervention list");
        t.cells[std::move(key)] = jsondetail::rat(it.value());
    }
    return t;
}

// ---------------------------------------------------------------------------
// Standard-form files

inline Json atom_to_json(const ResponseAtom& atom, const std::vector<std::string>& order) {
    Json responses = Json::object();
    for (std::size_t i = 0; i < order.size(); ++i) {
        Json rmap = Json::object();
        for (std::size_t key = 0; key < atom.resp[i].size(); ++key) {
            std::string bits;
            for (std::size_t b = 0; b < i; ++b)
                bits += static_cast<char>('0' + ((key >> (i - 1 - b)) & 1));
            rmap[bits] = static_cast<int>(atom.resp[i][key]);
        }
        responses[order[i]] = std::move(rmap);
    }
    return responses;
}

inline ResponseAtom atom_from_json(const Json& j, const std::vector<std::string>& order) {
    ResponseAtom atom;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto it = j.find(order[i]);
        if (it == j.end())
            throw Error(ErrCode::Input, "atom responses missing variable " + order[i]);
        std::vector<std::uint8_t> rmap(std::size_t(1) << i, 2);
        for (auto r = it->begin(); r != it->end(); ++r) {
            Valuation bits = jsondetail::parse_bits(r.key(), i);
            std::size_t key = 0;
            for (int b : bits) key = (key << 1) | static_cast<std::size_t>(b);
            rmap[key] = static_cast<std::uint8_t>(jsondetail::parse_bit(r.value(), "response"));
        }
        for (auto v : rmap)
            if (v == 2)
                throw Error(ErrCode::Input, "response map for " + order[i] + " is not total");
        atom.resp.push_back(std::move(rmap));
    }
    return atom;
}

inline Json sf_to_json(const StandardFormModel& m) {
    Json j;
    j["order"] = m.order;
    Json atoms = Json::array();
    for (const auto& [atom, p] : m.atoms) {
        if (p == 0) continue;
        atoms.push_back(Json{{"p", format_rational(p)}, {"responses", atom_to_json(atom, m.order)}});
    }
    j["atoms"] = std::move(atoms);
    return j;
}

inline StandardFormModel sf_from_json(const Json& j) {
    StandardFormModel m;
    m.order = jsondetail::need(j, "order").get<std::vector<std::string>>();
    for (const auto& a : jsondetail::need(j, "atoms"))
        m.atoms[atom_from_json(jsondetail::need(a, "responses"), m.order)] +=
            jsondetail::rat(jsondetail::need(a, "p"));
    return m;
}

// ---------------------------------------------------------------------------
// Hypotheses, queries, reports

inline Json hypothesis_to_json(const Hypothesis& h, const std::vector<std::string>& scope) {
    if (h.kind == Hypothesis::Kind::Leaf)
        return Json{{"do", intervention_to_json(h.leaf.intervention, scope)},
                    {"event", event_to_json(h.leaf.event)},
                    {"gt", format_rational(h.leaf.threshold)}};
    Json children = Json::array();
    for (const auto& c : h.children) children.push_back(hypothesis_to_json(c, scope));
    return Json{{h.kind == Hypothesis::Kind::All ? "all" : "any", std::move(children)}};
}

inline Hypothesis hypothesis_from_json(const Json& j) {
    if (j.contains("all") || j.contains("any")) {
        bool is_all = j.contains("all");
        std::vector<Hypothesis> children;
        for (const auto& c : j[is_all ? "all" : "any"]) children.push_back(hypothesis_from_json(c));
        return is_all ? Hypothesis::all_of(std::move(children))
                      : Hypothesis::any_of(std::move(children));
    }
    SubbasicConstraint c;
    c.intervention = intervention_from_json(jsondetail::need(j, "do"));
    c.event = event_from_json(jsondetail::need(j, "event"));
    c.threshold = jsondetail::rat(jsondetail::need(j, "gt"));
    return Hypothesis::constraint(std::move(c));
}

inline Json conjunct_to_json(const Conjunct& c, const std::vector<std::string>& scope) {
    return Json{{"do", intervention_to_json(c.intervention, scope)},
                {"outcome", event_to_json(c.outcome)}};
}

inline Conjunct conjunct_from_json(const Json& j) {
    Conjunct c;
    c.intervention = intervention_from_json(jsondetail::need(j, "do"));
    c.outcome = event_from_json(jsondetail::need(j, "outcome"));
    return c;
}

inline Json query_to_json(const CfQuery& q, const std::vector<std::string>& scope) {
    Json conjuncts = Json::array();
    for (const auto& c : q.conjuncts) conjuncts.push_back(conjunct_to_json(c, scope));
    Json j;
    j["maximize"] = Json{{"conjuncts", std::move(conjuncts)}};
    if (!q.condition.empty()) {
        Json cond = Json::array();
        for (const auto& c : q.condition) cond.push_back(conjunct_to_json(c, scope));
        j["condition"] = std::move(cond);
    }
    return j;
}

inline CfQuery query_from_json(const Json& j) {
    CfQuery q;
    for (const auto& c : jsondetail::need(jsondetail::need(j, "maximize"), "conjuncts"))
        q.conjuncts.push_back(conjunct_from_json(c));
    if (j.contains("condition"))
        for (const auto& c : j["condition"]) q.condition.push_back(conjunct_from_json(c));
    return q;
}

inline Json causation_value_to_json(const CausationValue& v) {
    return v.defined ? Json(format_rational(v.value)) : Json("undefined");
}

inline Json causation_to_json(const CausationReport& r) {
    return Json{{"pns", causation_value_to_json(r.pns)},
                {"pns_converse", causation_value_to_json(r.pns_converse)},
                {"pn", causation_value_to_json(r.pn)},
                {"ps", causation_value_to_json(r.ps)},
                {"p_disable", causation_value_to_json(r.p_disable)},
                {"p_enable", causation_value_to_json(r.p_enable)}};
}

inline Json goodness_to_json(const GoodnessReport& r) {
    Json margins = Json::array();
    for (const auto& m : r.margins) margins.push_back(format_rational(m));
    return Json{{"feasible", r.feasible},
                {"good", r.good},
                {"margins", std::move(margins)},
                {"binding", r.binding},
                {"violations", r.feasibility_violations}};
}

inline Json bounds_to_json(const QueryBounds& b, bool include_vertices) {
    Json j{{"lo", format_rational(b.lo)},
           {"hi", format_rational(b.hi)},
           {"collapsed", b.collapsed}};
    if (include_vertices) {
        j["argmin"] = sf_to_json(b.argmin);
        j["argmax"] = sf_to_json(b.argmax);
    }
    return j;
}

inline Json collapse_to_json(const CollapseReport& r, const std::vector<std::string>& scope) {
    Json j{{"collapsed", r.collapsed}, {"cells_checked", r.cells_checked}};
    if (!r.collapsed && r.witness) {
        Json conjuncts = Json::array();
        for (const auto& c : r.witness->conjuncts) conjuncts.push_back(conjunct_to_json(c, scope));
        j["witness"] = Json{{"conjuncts", std::move(conjuncts)}};
        j["lo"] = format_rational(r.lo);
        j["hi"] = format_rational(r.hi);
    }
    return j;
}

inline Json simreport_to_json(const SimReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"n", row.n},
                            {"trials", row.trials},
                            {"rejections", row.rejections},
                            {"frequency", row.frequency}});
    return Json{{"epsilon", format_rational(r.epsilon)},
                {"seed", r.seed},
                {"truth_satisfies", r.truth_satisfies},
                {"rows", std::move(rows)}};
}

inline Json plan_to_json(const SeparationPlan& p, const std::vector<std::string>& order) {
    Json omega1 = Json::array(), omega2 = Json::array();
    for (const auto& a : p.omega1) omega1.push_back(atom_to_json(a, order));
    for (const auto& a : p.omega2) omega2.push_back(atom_to_json(a, order));
    Json coupling = Json::array();
    for (const auto& [i, j2, w] : p.coupling)
        coupling.push_back(Json{{"from", i}, {"to", j2}, {"w", format_rational(w)}});
    return Json{{"x_var", p.x_var},
                {"y_var", p.y_var},
                {"x_role", p.x_role},
                {"y0", p.y0},
                {"y1", p.y1},
                {"mass1", format_rational(p.mass1)},
                {"mass2", format_rational(p.mass2)},
                {"delta", format_rational(p.delta)},
                {"eps1", format_rational(p.eps1)},
                {"eps2", format_rational(p.eps2)},
                {"omega1", std::move(omega1)},
                {"omega2", std::move(omega2)},
                {"coupling", std::move(coupling)}};
}

inline Json pair_report_to_json(const PairReport& r) {
    Json quantities = Json::array();
    for (const auto& q : r.quantities)
        quantities.push_back(Json{{"name", q.name},
                                  {"a", causation_value_to_json(q.a)},
                                  {"b", causation_value_to_json(q.b)},
                                  {"differ", q.differ}});
    Json j{{"l2_equal", r.l2_equal}, {"quantities", std::move(quantities)}};
    if (!r.l2_equal) j["first_mismatch"] = r.first_mismatch;
    if (!r.witness_name.empty()) {
        j["witness"] = r.witness_name;
        j["magnitude"] = format_rational(r.witness_magnitude);
    }
    return j;
}

inline Json validation_to_json(const ValidationReport& r) {
    return Json{{"valid", r.ok()}, {"problems", r.problems}};
}

}  // namespace causalhier

#endif
