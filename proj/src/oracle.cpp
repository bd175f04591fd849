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

#include "norbip/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "norbip/linalg.hpp"
#include "norbip/lp.hpp"

namespace norbip {
namespace oracle {

namespace {

// All constraints of the system as rows coeffs.z >= rhs, the nonnegativity
// rows first.
std::vector<std::pair<RationalVector, Rational>> all_rows(const InequalitySystem& sys) {
  std::vector<std::pair<RationalVector, Rational>> rows;
  for (Index i = 0; i < sys.dim; ++i) {
    RationalVector e = RationalVector::Zero(sys.dim);
    e(i) = Rational(1);
    rows.emplace_back(std::move(e), Rational(0));
  }
  rows.insert(rows.end(), sys.rows.begin(), sys.rows.end());
  return rows;
}

bool satisfies_all(const std::vector<std::pair<RationalVector, Rational>>& rows,
                   const RationalVector& z) {
  for (const auto& [coeffs, rhs] : rows) {
    if (coeffs.dot(z) < rhs) return false;
  }
  return true;
}

void make_primitive(RationalVector& v) {
  mpz_class den_lcm = 1;
  for (Index i = 0; i < v.size(); ++i)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v(i).denominator().get_mpz_t());
  mpz_class num_gcd = 0;
  std::vector<mpz_class> scaled(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    scaled[i] = v(i).numerator() * (den_lcm / v(i).denominator());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled[i].get_mpz_t());
  }
  if (num_gcd == 0) return;
  for (Index i = 0; i < v.size(); ++i) v(i) = Rational(scaled[i] / num_gcd, mpz_class(1));
}

// Enumerates k-subsets of [0, n) in lexicographic order.
bool next_subset(std::vector<Index>& idx, Index n) {
  const Index k = static_cast<Index>(idx.size());
  Index i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

std::vector<RationalVector> vertices_by_subsets(const InequalitySystem& system) {
  const Index n = system.dim;
  if (n > 6) throw std::invalid_argument("vertices_by_subsets: more than 6 variables");
  auto rows = all_rows(system);
  const Index total = static_cast<Index>(rows.size());
  std::vector<RationalVector> found;
  if (total < n) return found;

  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[i] = i;
  do {
    RationalMatrix a(n, n);
    RationalVector rhs(n);
    for (Index r = 0; r < n; ++r) {
      a.row(r) = rows[idx[r]].first.transpose();
      rhs(r) = rows[idx[r]].second;
    }
    auto z = solve_unique(a, rhs);
    if (z && satisfies_all(rows, *z)) found.push_back(std::move(*z));
  } while (next_subset(idx, total));

  std::sort(found.begin(), found.end(), lex_less);
  found.erase(std::unique(found.begin(), found.end(), vec_eq), found.end());
  return found;
}

std::vector<RationalVector> rays_by_subsets(const InequalitySystem& system) {
  const Index n = system.dim;
  if (n > 6) throw std::invalid_argument("rays_by_subsets: more than 6 variables");
  std::vector<std::pair<RationalVector, Rational>> rows = all_rows(system);
  for (auto& [coeffs, rhs] : rows) rhs = Rational(0);  // recession cone
  const Index total = static_cast<Index>(rows.size());
  std::vector<RationalVector> found;
  if (n < 1 || total < n - 1) return found;

  auto consider = [&](RationalVector dir) {
    make_primitive(dir);
    for (int sign = 0; sign < 2; ++sign) {
      if (sign == 1) dir = -dir;
      if (!satisfies_all(rows, dir)) continue;
      // Extreme iff the tight rows have rank exactly n-1.
      std::vector<Index> tight;
      for (Index r = 0; r < total; ++r) {
        if (rows[r].first.dot(dir).is_zero()) tight.push_back(r);
      }
      RationalMatrix t(static_cast<Index>(tight.size()), n);
      for (std::size_t r = 0; r < tight.size(); ++r) t.row(static_cast<Index>(r)) = rows[tight[r]].first.transpose();
      if (rank(t) == n - 1) found.push_back(dir);
    }
  };

  if (n == 1) {
    RationalVector e(1);
    e(0) = Rational(1);
    consider(e);
  } else {
    std::vector<Index> idx(static_cast<std::size_t>(n - 1));
    for (Index i = 0; i < n - 1; ++i) idx[i] = i;
    do {
      RationalMatrix a(n - 1, n);
      for (Index r = 0; r < n - 1; ++r) a.row(r) = rows[idx[r]].first.transpose();
      auto dir = nullspace_direction(a);
      if (dir) consider(std::move(*dir));
    } while (next_subset(idx, total));
  }

  std::sort(found.begin(), found.end(), lex_less);
  found.erase(std::unique(found.begin(), found.end(), vec_eq), found.end());
  return found;
}

namespace {

struct PatternLp {
  LinearProgram lp;
  Index n = 0;  // x block then v block then lambda then sigma
};

// Rows shared by every pattern: both levels' primal rows and stationarity.
PatternLp base_pattern_lp(const BilevelInstance& inst) {
  PatternLp out;
  const Index n = inst.n_u + inst.n_l + inst.m_l + inst.n_l;
  out.n = n;
  const Index vx = 0, vv = inst.n_u, vl = inst.n_u + inst.n_l,
              vs = inst.n_u + inst.n_l + inst.m_l;
  out.lp.objective = RationalVector::Zero(n);
  out.lp.objective.segment(vx, inst.n_u) = inst.c_x;
  out.lp.objective.segment(vv, inst.n_l) = inst.c_y;
  for (Index i = 0; i < inst.m_u; ++i) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.coeffs.segment(vx, inst.n_u) = inst.G.row(i).transpose();
    row.coeffs.segment(vv, inst.n_l) = inst.H.row(i).transpose();
    row.rhs = inst.q(i);
    out.lp.rows.push_back(std::move(row));
  }
  for (Index i = 0; i < inst.m_l; ++i) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.coeffs.segment(vx, inst.n_u) = inst.A.row(i).transpose();
    row.coeffs.segment(vv, inst.n_l) = inst.B.row(i).transpose();
    row.rhs = inst.b(i);
    out.lp.rows.push_back(std::move(row));
  }
  for (Index j = 0; j < inst.n_l; ++j) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    for (Index i = 0; i < inst.m_l; ++i) row.coeffs(vl + i) = inst.B(i, j);
    row.coeffs(vs + j) = Rational(-1);
    row.rel = Relation::Equal;
    row.rhs = -inst.d(j);
    out.lp.rows.push_back(std::move(row));
  }
  return out;
}

// Pattern equalities: bit p of the mask decides which side of pair p is
// forced to zero (lower rows first, then variable pairs).
void add_pattern_rows(LinearProgram& lp, const BilevelInstance& inst, unsigned long mask) {
  const Index n = lp.num_vars();
  const Index vx = 0, vv = inst.n_u, vl = inst.n_u + inst.n_l,
              vs = inst.n_u + inst.n_l + inst.m_l;
  for (Index i = 0; i < inst.m_l; ++i) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.rel = Relation::Equal;
    if (mask & (1ul << i)) {
      row.coeffs.segment(vx, inst.n_u) = inst.A.row(i).transpose();
      row.coeffs.segment(vv, inst.n_l) = inst.B.row(i).transpose();
      row.rhs = inst.b(i);  // slack = 0
    } else {
      row.coeffs(vl + i) = Rational(1);
      row.rhs = Rational(0);  // lambda_i = 0
    }
    lp.rows.push_back(std::move(row));
  }
  for (Index j = 0; j < inst.n_l; ++j) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.rel = Relation::Equal;
    if (mask & (1ul << (inst.m_l + j))) {
      row.coeffs(vv + j) = Rational(1);
      row.rhs = Rational(0);  // v_j = 0
    } else {
      row.coeffs(vs + j) = Rational(1);
      row.rhs = Rational(0);  // sigma_j = 0
    }
    lp.rows.push_back(std::move(row));
  }
}

// Disjunct row for dual vertex (alpha, beta) of constraint k, over (x, v).
LpRow vertex_row(const BilevelInstance& inst, Index k, const RationalVector& vert,
                 const Rational& delta, Index n) {
  const auto alpha = vert.head(inst.m_l);
  const Rational& beta = vert(inst.m_l);
  LpRow row;
  row.coeffs = RationalVector::Zero(n);
  row.coeffs.head(inst.n_u) = inst.G.row(k).transpose() - inst.A.transpose() * alpha;
  row.coeffs.segment(inst.n_u, inst.n_l) = beta * inst.d;
  row.rhs = inst.q(k) - alpha.dot(inst.b) - beta * delta;
  return row;
}

bool point_is_robust(const BilevelInstance& inst, const Rational& delta,
                     const RationalVector& x, const RationalVector& v) {
  const RationalVector gx = inst.G * x;
  for (Index k = 0; k < inst.m_u; ++k) {
    AdversarialOutcome adv = solve_adversarial(inst, k, x, v, delta);
    if (adv.status == LpStatus::Unbounded) return false;
    if (adv.status == LpStatus::Optimal && adv.value > inst.q(k) - gx(k)) return false;
  }
  return true;
}

}  // namespace

TinyOutcome solve_tiny(const BilevelInstance& inst, const Rational& delta) {
  if (inst.m_l + inst.n_l > 12)
    throw std::invalid_argument("solve_tiny: instance exceeds the 2^(m_l+n_l) budget");
  {
    auto issues = validate(inst);
    if (!issues.empty())
      throw std::invalid_argument("solve_tiny: invalid instance: " + issues.front());
  }

  TinyOutcome outcome;
  const bool robust_phase = delta >= Rational(0);

  // Dual vertex pools per k (subset enumeration, not double description).
  std::vector<std::vector<RationalVector>> pools;
  if (robust_phase) {
    for (Index k = 0; k < inst.m_u; ++k) {
      auto pool = vertices_by_subsets(build_dual_polyhedron(inst, k));
      if (pool.empty()) {
        outcome.status = SolveStatus::DualAdversarialInfeasible;
        outcome.failed_k = k;
        return outcome;
      }
      pools.push_back(std::move(pool));
    }
  }

  // High-point feasibility, built inline.
  {
    LinearProgram hpr;
    const Index n = inst.n_u + inst.n_l;
    hpr.objective = RationalVector::Zero(n);
    for (Index i = 0; i < inst.m_u; ++i) {
      LpRow row;
      row.coeffs = RationalVector::Zero(n);
      row.coeffs.head(inst.n_u) = inst.G.row(i).transpose();
      row.coeffs.tail(inst.n_l) = inst.H.row(i).transpose();
      row.rhs = inst.q(i);
      hpr.rows.push_back(std::move(row));
    }
    for (Index i = 0; i < inst.m_l; ++i) {
      LpRow row;
      row.coeffs = RationalVector::Zero(n);
      row.coeffs.head(inst.n_u) = inst.A.row(i).transpose();
      row.coeffs.tail(inst.n_l) = inst.B.row(i).transpose();
      row.rhs = inst.b(i);
      hpr.rows.push_back(std::move(row));
    }
    if (solve_lp(hpr).status == LpStatus::Infeasible) {
      outcome.status = SolveStatus::HPRInfeasible;
      return outcome;
    }
  }

  const PatternLp base = base_pattern_lp(inst);
  const unsigned long num_patterns = 1ul << (inst.m_l + inst.n_l);

  bool optimistic_feasible = false;
  bool best_unbounded = false;
  std::optional<Rational> best;
  RationalVector best_x, best_v;

  std::vector<LpResult> pattern_results(num_patterns);
  for (unsigned long mask = 0; mask < num_patterns; ++mask) {
    LinearProgram lp = base.lp;
    add_pattern_rows(lp, inst, mask);
    pattern_results[mask] = solve_lp(lp);
    if (pattern_results[mask].status != LpStatus::Infeasible) optimistic_feasible = true;
  }
  if (!optimistic_feasible) {
    outcome.status = SolveStatus::OptimisticInfeasible;
    return outcome;
  }

  if (!robust_phase) {
    // Empty near-optimal set: the problem is the plain optimistic one.
    for (unsigned long mask = 0; mask < num_patterns; ++mask) {
      const LpResult& res = pattern_results[mask];
      if (res.status == LpStatus::Unbounded) best_unbounded = true;
      if (res.status != LpStatus::Optimal) continue;
      if (!best || res.objective < *best) {
        best = res.objective;
        best_x = res.primal.head(inst.n_u);
        best_v = res.primal.segment(inst.n_u, inst.n_l);
      }
    }
    if (best_unbounded) {
      outcome.status = SolveStatus::Unbounded;
      return outcome;
    }
    outcome.status = SolveStatus::Optimal;
    outcome.objective = best;
    outcome.x = best_x;
    outcome.v = best_v;
    return outcome;
  }

  // Robust phase: within each pattern, take the best over all choices of one
  // dual vertex row per k (the exact disjunction); the unconstrained pattern
  // optimum short-circuits the enumeration when it is already robust.
  for (unsigned long mask = 0; mask < num_patterns && !best_unbounded; ++mask) {
    const LpResult& relax = pattern_results[mask];
    if (relax.status == LpStatus::Infeasible) continue;
    if (relax.status == LpStatus::Optimal) {
      if (best && relax.objective >= *best) continue;  // cannot improve
      const RationalVector x = relax.primal.head(inst.n_u);
      const RationalVector v = relax.primal.segment(inst.n_u, inst.n_l);
      if (point_is_robust(inst, delta, x, v)) {
        best = relax.objective;
        best_x = x;
        best_v = v;
        continue;
      }
    }

    LinearProgram lp = base.lp;
    add_pattern_rows(lp, inst, mask);

    // Depth-first over one vertex choice per k; a prefix of choices that is
    // already infeasible or already no better than the incumbent prunes all
    // of its extensions (rows only shrink the feasible set).
    auto descend = [&](auto&& self, Index k) -> void {
      if (best_unbounded) return;
      LpResult res = solve_lp(lp);
      if (res.status == LpStatus::Infeasible) return;
      if (res.status == LpStatus::Optimal && best && res.objective >= *best) return;
      if (k == inst.m_u) {
        if (res.status == LpStatus::Unbounded) {
          best_unbounded = true;
          return;
        }
        if (!best || res.objective < *best) {
          best = res.objective;
          best_x = res.primal.head(inst.n_u);
          best_v = res.primal.segment(inst.n_u, inst.n_l);
        }
        return;
      }
      for (const RationalVector& vert : pools[k]) {
        lp.rows.push_back(vertex_row(inst, k, vert, delta, base.n));
        self(self, k + 1);
        lp.rows.pop_back();
        if (best_unbounded) return;
      }
    };
    descend(descend, 0);
  }

  if (best_unbounded) {
    outcome.status = SolveStatus::Unbounded;
    return outcome;
  }
  if (!best) {
    outcome.status = SolveStatus::NORBiPInfeasible;
    return outcome;
  }

  // Certify the reported optimum before returning it.
  if (!point_is_robust(inst, delta, best_x, best_v))
    throw std::logic_error("solve_tiny: candidate optimum fails the robustness recheck");
  outcome.status = SolveStatus::Optimal;
  outcome.objective = best;
  outcome.x = best_x;
  outcome.v = best_v;
  return outcome;
}

}  // namespace oracle
}  // namespace norbip
