#ifndef CAUSALHIER_LP_HPP
#define CAUSALHIER_LP_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causalhier/rational.hpp"

namespace causalhier {

/// Equality-constrained problem over nonnegative variables: optimize
/// objective . x subject to rows . x = rhs, x >= 0. All data exact.
struct LpProblem {
    std::size_t num_vars = 0;
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    std::vector<Rational> objective;
};

enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    Rational value;
    std::vector<Rational> point;
    /// On infeasibility: indices of input rows that jointly cannot hold.
    std::vector<std::size_t> certificate_rows;
};

namespace detail {

struct Tableau {
    // T is m x (cols + 1); the last column is the rhs. basis[i] names the
    // variable owning row i.
    std::vector<std::vector<Rational>> T;
    std::vector<std::size_t> basis;
    std::size_t cols = 0;

    void pivot(std::size_t row, std::size_t col) {
        Rational inv = T[row][col];
        for (auto& x : T[row]) x /= inv;
        for (std::size_t i = 0; i < T.size(); ++i) {
            if (i == row || T[i][col] == 0) continue;
            Rational f = T[i][col];
            for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[row][j];
        }
        basis[row] = col;
    }
};

/// One simplex phase with Bland's rule (lowest eligible index enters; ties in
/// the ratio test break toward the lowest basic variable index). `costs` has
/// one entry per tableau column; only columns < limit may enter.
inline bool run_simplex(Tableau& tab, const std::vector<Rational>& costs, std::size_t limit) {
    while (true) {
        // reduced costs r_j = c_j - c_B . column_j
        std::size_t enter = limit;
        for (std::size_t j = 0; j < limit; ++j) {
            Rational r = costs[j];
            for (std::size_t i = 0; i < tab.T.size(); ++i)
                if (costs[tab.basis[i]] != 0) r -= costs[tab.basis[i]] * tab.T[i][j];
            if (r < 0) { enter = j; break; }
        }
        if (enter == limit) return true;  // optimal
        std::size_t leave = tab.T.size();
        Rational best;
        for (std::size_t i = 0; i < tab.T.size(); ++i) {
            if (tab.T[i][enter] <= 0) continue;
            Rational ratio = tab.T[i][tab.cols] / tab.T[i][enter];
            if (leave == tab.T.size() || ratio < best ||
                (ratio == best && tab.basis[i] < tab.basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == tab.T.size()) return false;  // unbounded direction
        tab.pivot(leave, enter);
    }
}

}  // namespace detail

/// Exact simplex with a deterministic pivot rule: identical inputs give
/// identical optima and identical optimal vertices.
inline LpResult lp_solve(const LpProblem& p, LpSense sense) {
    LpResult res;
    std::size_t n = p.num_vars;
    if (p.rows.size() != p.rhs.size())
        throw Error(ErrCode::Input, "lp_solve: row/rhs size mismatch");

    // Preprocess: normalize signs, fix variables forced to zero, then drop
    // duplicate rows; conflicting duplicates give an immediate certificate.
    std::vector<std::vector<Rational>> rows = p.rows;
    std::vector<Rational> rhs = p.rhs;
    std::vector<std::size_t> origin(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        origin[i] = i;
        if (rows[i].size() != n) throw Error(ErrCode::Input, "lp_solve: bad row width");
        if (rhs[i] < 0) {
            for (auto& x : rows[i]) x = -x;
            rhs[i] = -rhs[i];
        }
    }
    std::vector<bool> fixed(n, false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rhs[i] != 0) continue;
            bool nonneg = true, nonpos = true, any = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (fixed[j] || rows[i][j] == 0) continue;
                any = true;
                nonneg = nonneg && rows[i][j] > 0;
                nonpos = nonpos && rows[i][j] < 0;
            }
            if (!any || (!nonneg && !nonpos)) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!fixed[j] && rows[i][j] != 0) {
                    fixed[j] = true;
                    changed = true;
                }
        }
    }
    std::vector<std::size_t> keep_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (!fixed[j]) keep_cols.push_back(j);

    std::vector<std::vector<Rational>> work_rows;
    std::vector<Rational> work_rhs;
    std::vector<std::size_t> work_origin;
    std::map<std::vector<Rational>, std::size_t> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<Rational> r;
        r.reserve(keep_cols.size());
        for (auto j : keep_cols) r.push_back(rows[i][j]);
        bool empty = true;
        for (const auto& x : r)
            if (x != 0) { empty = false; break; }
        if (empty) {
            if (rhs[i] != 0) {
                res.status = LpStatus::Infeasible;
                res.certificate_rows = {origin[i]};
                return res;
            }
            continue;
        }
        auto it = seen.find(r);
        if (it != seen.end()) {
            if (work_rhs[it->second] != rhs[i]) {
                res.status = LpStatus::Infeasible;
                res.certificate_rows = {work_origin[it->second], origin[i]};
                return res;
            }
            continue;
        }
        seen.emplace(r, work_rows.size());
        work_rows.push_back(std::move(r));
        work_rhs.push_back(rhs[i]);
        work_origin.push_back(origin[i]);
    }

    std::size_t m = work_rows.size(), nc = keep_cols.size();
    detail::Tableau tab;
    tab.cols = nc + m;
    tab.basis.resize(m);
    tab.T.assign(m, std::vector<Rational>(tab.cols + 1, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < nc; ++j) tab.T[i][j] = work_rows[i][j];
        tab.T[i][nc + i] = 1;
        tab.T[i][tab.cols] = work_rhs[i];
        tab.basis[i] = nc + i;
    }

    // Phase 1: minimize the artificial mass.
    std::vector<Rational> phase1(tab.cols, Rational(0));
    for (std::size_t j = nc; j < tab.cols; ++j) phase1[j] = 1;
    detail::run_simplex(tab, phase1, nc);
    Rational art_mass = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= nc) art_mass += tab.T[i][tab.cols];
    if (art_mass != 0) {
        res.status = LpStatus::Infeasible;
        // Rows with a nonzero phase-1 dual multiplier form the certificate.
        for (std::size_t i = 0; i < m; ++i) {
            Rational r = phase1[nc + i];
            for (std::size_t k = 0; k < m; ++k)
                if (phase1[tab.basis[k]] != 0) r -= phase1[tab.basis[k]] * tab.T[k][nc + i];
            if (r != 1) res.certificate_rows.push_back(work_origin[i]);
        }
        if (res.certificate_rows.empty()) res.certificate_rows = work_origin;
        return res;
    }
    // Drive leftover (degenerate) artificials out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis[i] < nc) continue;
        std::size_t col = nc;
        for (std::size_t j = 0; j < nc; ++j)
            if (tab.T[i][j] != 0) { col = j; break; }
        if (col < nc) tab.pivot(i, col);
    }
    std::vector<std::size_t> live_rows;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < nc) live_rows.push_back(i);
    if (live_rows.size() != m) {
        detail::Tableau t2;
        t2.cols = tab.cols;
        for (auto i : live_rows) {
            t2.T.push_back(tab.T[i]);
            t2.basis.push_back(tab.basis[i]);
        }
        tab = std::move(t2);
    }

    // Phase 2.
    std::vector<Rational> phase2(tab.cols, Rational(0));
    for (std::size_t j = 0; j < nc; ++j)
        phase2[j] = sense == LpSense::Maximize ? -p.objective[keep_cols[j]]
                                               : p.objective[keep_cols[j]];
    if (!detail::run_simplex(tab, phase2, nc)) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    res.point.assign(n, Rational(0));
    for (std::size_t i = 0; i < tab.T.size(); ++i)
        if (tab.basis[i] < nc) res.point[keep_cols[tab.basis[i]]] = tab.T[i][tab.cols];
    res.value = 0;
    for (std::size_t j = 0; j < n; ++j) res.value += p.objective[j] * res.point[j];
    res.status = LpStatus::Optimal;
    return res;
}

}  // namespace causalhier

#endif
