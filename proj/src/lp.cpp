// Copyright 2026 The norbip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "norbip/lp.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <vector>

namespace norbip {

namespace {

enum class ColKind { Structural, Slack, Artificial };

struct ColInfo {
  ColKind kind;
  Index ref;      // structural: original variable; slack/artificial: row
  int sign;       // structural: +1 for the positive part, -1 for the split negative part
};

// Equality-form working problem: min c~ x~, A~ x~ = b~, x~ >= 0, b~ >= 0.
struct Standardized {
  RationalMatrix a;            // m x ncols (artificials included as the last m columns)
  RationalVector b;            // m, nonnegative
  std::vector<ColInfo> cols;   // ncols
  std::vector<int> row_flip;   // +1 / -1 per original row
  Index num_structural = 0;    // structural + slack columns (artificials excluded)
};

Standardized standardize(const LinearProgram& lp) {
  const Index n = lp.num_vars();
  const Index m = static_cast<Index>(lp.rows.size());

  Standardized s;
  std::vector<std::vector<Index>> var_cols(n);
  for (Index j = 0; j < n; ++j) {
    var_cols[j].push_back(static_cast<Index>(s.cols.size()));
    s.cols.push_back({ColKind::Structural, j, +1});
    if (lp.is_free(j)) {
      var_cols[j].push_back(static_cast<Index>(s.cols.size()));
      s.cols.push_back({ColKind::Structural, j, -1});
    }
  }
  std::vector<Index> slack_col(m, -1);
  for (Index i = 0; i < m; ++i) {
    if (lp.rows[i].rel != Relation::Equal) {
      slack_col[i] = static_cast<Index>(s.cols.size());
      s.cols.push_back({ColKind::Slack, i, 0});
    }
  }
  s.num_structural = static_cast<Index>(s.cols.size());
  for (Index i = 0; i < m; ++i) s.cols.push_back({ColKind::Artificial, i, 0});

  const Index ncols = static_cast<Index>(s.cols.size());
  s.a = RationalMatrix::Zero(m, ncols);
  s.b = RationalVector::Zero(m);
  s.row_flip.assign(m, +1);

  for (Index i = 0; i < m; ++i) {
    const LpRow& row = lp.rows[i];
    if (row.coeffs.size() != n) throw std::invalid_argument("lp row width mismatch");
    int flip = row.rhs < Rational(0) ? -1 : +1;
    s.row_flip[i] = flip;
    Rational f(flip);
    for (Index j = 0; j < n; ++j) {
      for (Index c : var_cols[j]) {
        s.a(i, c) = f * Rational(s.cols[c].sign) * row.coeffs(j);
      }
    }
    if (slack_col[i] >= 0) {
      Rational slack_sign = row.rel == Relation::LessEqual ? Rational(1) : Rational(-1);
      s.a(i, slack_col[i]) = f * slack_sign;
    }
    s.a(i, s.num_structural + i) = Rational(1);
    s.b(i) = f * row.rhs;
  }
  return s;
}

// Full-tableau simplex state over the standardized problem.
struct Tableau {
  RationalMatrix t;            // m x ncols
  RationalVector rhs;          // m
  std::vector<Index> basic;    // per row: basic column
  std::vector<bool> dead_row;  // redundant rows detected after phase 1

  void pivot(Index prow, Index pcol) {
    const Rational piv = t(prow, pcol);
    assert(!piv.is_zero());
    t.row(prow) /= piv;
    rhs(prow) = rhs(prow) / piv;
    for (Index r = 0; r < t.rows(); ++r) {
      if (r == prow) continue;
      const Rational factor = t(r, pcol);
      if (factor.is_zero()) continue;
      t.row(r) -= factor * t.row(prow);
      rhs(r) -= factor * rhs(prow);
    }
    basic[prow] = pcol;
  }
};

// Reduced costs and objective value for cost vector c under the current basis.
void compute_reduced(const Tableau& tab, const RationalVector& c, RationalVector& reduced,
                     Rational& value) {
  const Index m = tab.t.rows();
  const Index ncols = tab.t.cols();
  RationalVector cb(m);
  for (Index i = 0; i < m; ++i) cb(i) = c(tab.basic[i]);
  value = cb.dot(tab.rhs);
  reduced = c;
  for (Index j = 0; j < ncols; ++j) {
    Rational z(0);
    for (Index i = 0; i < m; ++i) {
      if (!cb(i).is_zero() && !tab.t(i, j).is_zero()) z += cb(i) * tab.t(i, j);
    }
    reduced(j) -= z;
  }
}

// Bland's rule iteration until optimality or an unbounded column is found.
// Entering: lowest-index eligible column with negative reduced cost.
// Leaving: minimum ratio, ties broken by lowest basic variable index.
// Returns -1 on optimality, otherwise the unbounded entering column.
Index run_simplex(Tableau& tab, const RationalVector& c, const std::vector<bool>& allowed,
                  RationalVector& reduced, Rational& value) {
  const Index m = tab.t.rows();
  const Index ncols = tab.t.cols();
  compute_reduced(tab, c, reduced, value);
  while (true) {
    Index enter = -1;
    for (Index j = 0; j < ncols; ++j) {
      if (allowed[j] && reduced(j) < Rational(0)) { enter = j; break; }
    }
    if (enter < 0) return -1;

    Index leave = -1;
    Rational best_ratio;
    for (Index i = 0; i < m; ++i) {
      if (tab.dead_row[i]) continue;
      if (tab.t(i, enter) > Rational(0)) {
        Rational ratio = tab.rhs(i) / tab.t(i, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && tab.basic[i] < tab.basic[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return enter;

    tab.pivot(leave, enter);
    // Update reduced costs with the pivot row of the updated tableau.
    const Rational r_enter = reduced(enter);
    if (!r_enter.is_zero()) {
      for (Index j = 0; j < ncols; ++j) {
        if (!tab.t(leave, j).is_zero()) reduced(j) -= r_enter * tab.t(leave, j);
      }
      value += r_enter * tab.rhs(leave);
    }
    reduced(enter) = Rational(0);
  }
}

Rational row_activity(const LpRow& row, const RationalVector& x) {
  return row.coeffs.dot(x);
}

void verify_optimal(const LinearProgram& lp, const LpResult& res) {
  const Index n = lp.num_vars();
  for (Index j = 0; j < n; ++j) {
    if (!lp.is_free(j) && res.primal(j) < Rational(0))
      throw std::logic_error("simplex: negative primal value");
  }
  Rational dual_obj(0);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Rational act = row_activity(lp.rows[i], res.primal);
    const Rational& y = res.dual(static_cast<Index>(i));
    switch (lp.rows[i].rel) {
      case Relation::LessEqual:
        if (act > lp.rows[i].rhs) throw std::logic_error("simplex: primal row violated");
        if (y > Rational(0)) throw std::logic_error("simplex: dual sign violated");
        break;
      case Relation::GreaterEqual:
        if (act < lp.rows[i].rhs) throw std::logic_error("simplex: primal row violated");
        if (y < Rational(0)) throw std::logic_error("simplex: dual sign violated");
        break;
      case Relation::Equal:
        if (act != lp.rows[i].rhs) throw std::logic_error("simplex: primal row violated");
        break;
    }
    dual_obj += y * lp.rows[i].rhs;
  }
  // Dual feasibility: (A^T y)_j <= c_j on nonnegative vars, = on free vars.
  for (Index j = 0; j < n; ++j) {
    Rational aty(0);
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
      aty += res.dual(static_cast<Index>(i)) * lp.rows[i].coeffs(j);
    if (lp.is_free(j)) {
      if (aty != lp.objective(j)) throw std::logic_error("simplex: dual eq violated");
    } else if (aty > lp.objective(j)) {
      throw std::logic_error("simplex: dual feasibility violated");
    }
  }
  if (res.objective != lp.objective.dot(res.primal) || res.objective != dual_obj)
    throw std::logic_error("simplex: strong duality violated");
}

void verify_farkas(const LinearProgram& lp, const RationalVector& y) {
  const Index n = lp.num_vars();
  Rational yb(0);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Rational& yi = y(static_cast<Index>(i));
    if (lp.rows[i].rel == Relation::LessEqual && yi > Rational(0))
      throw std::logic_error("farkas: sign violated");
    if (lp.rows[i].rel == Relation::GreaterEqual && yi < Rational(0))
      throw std::logic_error("farkas: sign violated");
    yb += yi * lp.rows[i].rhs;
  }
  if (yb <= Rational(0)) throw std::logic_error("farkas: y^T rhs not positive");
  for (Index j = 0; j < n; ++j) {
    Rational aty(0);
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
      aty += y(static_cast<Index>(i)) * lp.rows[i].coeffs(j);
    if (lp.is_free(j)) {
      if (!aty.is_zero()) throw std::logic_error("farkas: free-variable column not zero");
    } else if (aty > Rational(0)) {
      throw std::logic_error("farkas: column condition violated");
    }
  }
}

void verify_ray(const LinearProgram& lp, const RationalVector& r) {
  const Index n = lp.num_vars();
  if (lp.objective.dot(r) >= Rational(0)) throw std::logic_error("ray: not improving");
  for (Index j = 0; j < n; ++j) {
    if (!lp.is_free(j) && r(j) < Rational(0)) throw std::logic_error("ray: sign violated");
  }
  for (const LpRow& row : lp.rows) {
    const Rational act = row.coeffs.dot(r);
    if (row.rel == Relation::LessEqual && act > Rational(0))
      throw std::logic_error("ray: row direction violated");
    if (row.rel == Relation::GreaterEqual && act < Rational(0))
      throw std::logic_error("ray: row direction violated");
    if (row.rel == Relation::Equal && !act.is_zero())
      throw std::logic_error("ray: row direction violated");
  }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const Index n = lp.num_vars();
  const Index m = static_cast<Index>(lp.rows.size());
  Standardized s = standardize(lp);
  const Index ncols = static_cast<Index>(s.cols.size());

  Tableau tab;
  tab.t = std::move(s.a);
  tab.rhs = std::move(s.b);
  tab.basic.resize(m);
  tab.dead_row.assign(m, false);
  for (Index i = 0; i < m; ++i) tab.basic[i] = s.num_structural + i;

  // Phase 1: minimize the sum of artificials.
  RationalVector phase1_cost = RationalVector::Zero(ncols);
  for (Index i = 0; i < m; ++i) phase1_cost(s.num_structural + i) = Rational(1);
  std::vector<bool> allowed(ncols, true);
  RationalVector reduced;
  Rational value;
  Index unb = run_simplex(tab, phase1_cost, allowed, reduced, value);
  assert(unb < 0);  // phase 1 is bounded below by zero
  (void)unb;

  LpResult res;
  if (value > Rational(0)) {
    // Infeasible. Phase-1 duals y_i = 1 - reduced(artificial_i), mapped back
    // through the row sign flips, certify infeasibility.
    res.status = LpStatus::Infeasible;
    res.farkas = RationalVector::Zero(m);
    for (Index i = 0; i < m; ++i) {
      Rational yi = Rational(1) - reduced(s.num_structural + i);
      res.farkas(i) = Rational(s.row_flip[i]) * yi;
    }
    verify_farkas(lp, res.farkas);
    return res;
  }

  // Drive basic artificials out of the basis; rows that cannot pivot are
  // redundant (all-zero across real columns) and are retired.
  for (Index i = 0; i < m; ++i) {
    if (s.cols[tab.basic[i]].kind != ColKind::Artificial) continue;
    Index pivot_col = -1;
    for (Index j = 0; j < s.num_structural; ++j) {
      if (!tab.t(i, j).is_zero()) { pivot_col = j; break; }
    }
    if (pivot_col >= 0) {
      assert(tab.rhs(i).is_zero());
      tab.pivot(i, pivot_col);
    } else {
      tab.dead_row[i] = true;
    }
  }

  // Phase 2 over the original costs; artificial columns may not enter.
  RationalVector phase2_cost = RationalVector::Zero(ncols);
  for (Index c = 0; c < s.num_structural; ++c) {
    if (s.cols[c].kind == ColKind::Structural)
      phase2_cost(c) = Rational(s.cols[c].sign) * lp.objective(s.cols[c].ref);
  }
  for (Index c = s.num_structural; c < ncols; ++c) allowed[c] = false;
  Index enter = run_simplex(tab, phase2_cost, allowed, reduced, value);

  if (enter >= 0) {
    // Unbounded: entering direction mapped back to the original variables.
    res.status = LpStatus::Unbounded;
    RationalVector dir = RationalVector::Zero(ncols);
    dir(enter) = Rational(1);
    for (Index i = 0; i < m; ++i) {
      if (!tab.dead_row[i]) dir(tab.basic[i]) = -tab.t(i, enter);
    }
    res.ray = RationalVector::Zero(n);
    for (Index c = 0; c < s.num_structural; ++c) {
      if (s.cols[c].kind == ColKind::Structural)
        res.ray(s.cols[c].ref) += Rational(s.cols[c].sign) * dir(c);
    }
    verify_ray(lp, res.ray);
    return res;
  }

  res.status = LpStatus::Optimal;
  res.primal = RationalVector::Zero(n);
  for (Index i = 0; i < m; ++i) {
    const ColInfo& ci = s.cols[tab.basic[i]];
    if (ci.kind == ColKind::Structural)
      res.primal(ci.ref) += Rational(ci.sign) * tab.rhs(i);
  }
  res.objective = value;
  res.dual = RationalVector::Zero(m);
  for (Index i = 0; i < m; ++i) {
    // Phase-2 reduced cost of artificial column i equals -y_i.
    res.dual(i) = Rational(s.row_flip[i]) * (-reduced(s.num_structural + i));
  }
  res.basis.reserve(m);
  for (Index i = 0; i < m; ++i) res.basis.push_back(tab.basic[i]);
  std::sort(res.basis.begin(), res.basis.end());
  verify_optimal(lp, res);
  return res;
}

}  // namespace norbip
