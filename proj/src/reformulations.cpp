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

#include "norbip/reformulations.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace norbip {

LinearProgram build_hpr(const BilevelInstance& inst) {
  LinearProgram lp;
  const Index n = inst.n_u + inst.n_l;
  lp.objective = RationalVector::Zero(n);
  lp.objective.head(inst.n_u) = inst.c_x;
  lp.objective.tail(inst.n_l) = inst.c_y;
  lp.rows.reserve(static_cast<std::size_t>(inst.m_u + inst.m_l));
  for (Index i = 0; i < inst.m_u; ++i) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.coeffs.head(inst.n_u) = inst.G.row(i).transpose();
    row.coeffs.tail(inst.n_l) = inst.H.row(i).transpose();
    row.rhs = inst.q(i);
    lp.rows.push_back(std::move(row));
  }
  for (Index i = 0; i < inst.m_l; ++i) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.coeffs.head(inst.n_u) = inst.A.row(i).transpose();
    row.coeffs.tail(inst.n_l) = inst.B.row(i).transpose();
    row.rhs = inst.b(i);
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

LinearProgram build_adversarial(const BilevelInstance& inst, Index k,
                                const RationalVector& x, const RationalVector& v,
                                const Rational& delta) {
  assert(k >= 0 && k < inst.m_u);
  LinearProgram lp;
  lp.objective = -inst.H.row(k).transpose();  // min -H_k.y == max H_k.y
  lp.rows.reserve(static_cast<std::size_t>(inst.m_l) + 1);
  const RationalVector ax = inst.A * x;
  for (Index i = 0; i < inst.m_l; ++i) {
    LpRow row;
    row.coeffs = inst.B.row(i).transpose();
    row.rhs = inst.b(i) - ax(i);
    lp.rows.push_back(std::move(row));
  }
  LpRow near_opt;
  near_opt.coeffs = inst.d;
  near_opt.rhs = inst.d.dot(v) + delta;
  lp.rows.push_back(std::move(near_opt));
  return lp;
}

AdversarialOutcome solve_adversarial(const BilevelInstance& inst, Index k,
                                     const RationalVector& x, const RationalVector& v,
                                     const Rational& delta) {
  LpResult res = solve_lp(build_adversarial(inst, k, x, v, delta));
  AdversarialOutcome out;
  out.status = res.status;
  if (res.status == LpStatus::Optimal) {
    out.value = -res.objective;
    out.worst_y = res.primal;
  }
  return out;
}

namespace {

void append_instance_rows(ExtendedModel& model, const BilevelInstance& inst,
                          bool upper_rows) {
  const Index n = model.num_vars();
  const Index vx = model.x_offset(), vv = model.v_offset();
  const Index vl = model.lambda_offset(), vs = model.sigma_offset();

  if (upper_rows) {
    for (Index i = 0; i < inst.m_u; ++i) {
      LpRow row;
      row.coeffs = RationalVector::Zero(n);
      row.coeffs.segment(vx, inst.n_u) = inst.G.row(i).transpose();
      row.coeffs.segment(vv, inst.n_l) = inst.H.row(i).transpose();
      row.rhs = inst.q(i);
      model.linear_rows.push_back(std::move(row));
    }
  }
  for (Index i = 0; i < inst.m_l; ++i) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.coeffs.segment(vx, inst.n_u) = inst.A.row(i).transpose();
    row.coeffs.segment(vv, inst.n_l) = inst.B.row(i).transpose();
    row.rhs = inst.b(i);
    model.linear_rows.push_back(std::move(row));
  }
  // Stationarity of the lower level: d_j + sum_i B_ij lambda_i - sigma_j = 0.
  for (Index j = 0; j < inst.n_l; ++j) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    for (Index i = 0; i < inst.m_l; ++i) row.coeffs(vl + i) = inst.B(i, j);
    row.coeffs(vs + j) = Rational(-1);
    row.rel = Relation::Equal;
    row.rhs = -inst.d(j);
    model.linear_rows.push_back(std::move(row));
  }
  // Complementarity: (b - A x - B v)_i with lambda_i, then v_j with sigma_j.
  for (Index i = 0; i < inst.m_l; ++i) {
    ComplementarityPair pair;
    pair.left.coeffs = RationalVector::Zero(n);
    pair.left.coeffs.segment(vx, inst.n_u) = -inst.A.row(i).transpose();
    pair.left.coeffs.segment(vv, inst.n_l) = -inst.B.row(i).transpose();
    pair.left.constant = inst.b(i);
    pair.right_var = vl + i;
    model.comp_pairs.push_back(std::move(pair));
  }
  for (Index j = 0; j < inst.n_l; ++j) {
    ComplementarityPair pair;
    pair.left.coeffs = RationalVector::Zero(n);
    pair.left.coeffs(vv + j) = Rational(1);
    pair.left.constant = Rational(0);
    pair.right_var = vs + j;
    model.comp_pairs.push_back(std::move(pair));
  }
}

}  // namespace

ExtendedModel build_extended(const BilevelInstance& inst,
                             const std::vector<DualPolyhedron>& polyhedra,
                             const Rational& delta, const ExtendedOptions& options) {
  if (static_cast<Index>(polyhedra.size()) != inst.m_u)
    throw std::invalid_argument("build_extended: one polyhedron per upper row required");
  for (const auto& poly : polyhedra) {
    if (poly.empty || poly.vertices.empty())
      throw std::invalid_argument("build_extended: empty dual polyhedron");
  }

  ExtendedModel model;
  model.n_u = inst.n_u;
  model.n_l = inst.n_l;
  model.m_l = inst.m_l;
  model.radius_mode = options.radius_mode;
  if (!options.radius_mode) model.delta = delta;

  const Index n = model.num_vars();
  model.objective = RationalVector::Zero(n);
  if (options.radius_mode) {
    model.objective(model.delta_var()) = Rational(-1);  // max delta
  } else {
    model.objective.segment(model.x_offset(), inst.n_u) = inst.c_x;
    model.objective.segment(model.v_offset(), inst.n_l) = inst.c_y;
  }

  append_instance_rows(model, inst, options.include_upper_rows);

  // Disjunction rows: alpha.(b - A x) + beta (d.v + delta) <= q_k - (G x)_k
  // rearranged to (G_k - alpha^T A) x + beta d^T v [+ beta delta] <= q_k - alpha.b.
  for (Index k = 0; k < inst.m_u; ++k) {
    Disjunction disj;
    disj.k = k;
    disj.rows.reserve(polyhedra[k].vertices.size());
    for (const RationalVector& vert : polyhedra[k].vertices) {
      const auto alpha = vert.head(inst.m_l);
      const Rational& beta = vert(inst.m_l);
      DisjunctionRow row;
      row.coeffs = RationalVector::Zero(n);
      row.coeffs.segment(model.x_offset(), inst.n_u) =
          inst.G.row(k).transpose() - inst.A.transpose() * alpha;
      row.coeffs.segment(model.v_offset(), inst.n_l) = beta * inst.d;
      row.rhs = inst.q(k) - alpha.dot(inst.b);
      if (options.radius_mode) {
        row.coeffs(model.delta_var()) = beta;
      } else {
        row.rhs -= beta * delta;
      }
      disj.rows.push_back(std::move(row));
    }
    model.disjunctions.push_back(std::move(disj));
  }
  return model;
}

ExtendedModel build_optimistic(const BilevelInstance& inst) {
  ExtendedModel model;
  model.n_u = inst.n_u;
  model.n_l = inst.n_l;
  model.m_l = inst.m_l;
  model.delta = Rational(0);
  const Index n = model.num_vars();
  model.objective = RationalVector::Zero(n);
  model.objective.segment(model.x_offset(), inst.n_u) = inst.c_x;
  model.objective.segment(model.v_offset(), inst.n_l) = inst.c_y;
  append_instance_rows(model, inst, /*upper_rows=*/true);
  return model;
}

SdCut strong_duality_cut(const BilevelInstance& inst, int max_sweeps) {
  // Auxiliary feasible set over (x, v, lambda): both levels' primal rows,
  // lower dual feasibility d + B^T lambda >= 0, and all cuts added so far.
  const Index n = inst.n_u + inst.n_l + inst.m_l;
  const Index vx = 0, vv = inst.n_u, vl = inst.n_u + inst.n_l;

  std::vector<LpRow> rows;
  for (Index i = 0; i < inst.m_u; ++i) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.coeffs.segment(vx, inst.n_u) = inst.G.row(i).transpose();
    row.coeffs.segment(vv, inst.n_l) = inst.H.row(i).transpose();
    row.rhs = inst.q(i);
    rows.push_back(std::move(row));
  }
  for (Index i = 0; i < inst.m_l; ++i) {
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.coeffs.segment(vx, inst.n_u) = inst.A.row(i).transpose();
    row.coeffs.segment(vv, inst.n_l) = inst.B.row(i).transpose();
    row.rhs = inst.b(i);
    rows.push_back(std::move(row));
  }
  for (Index j = 0; j < inst.n_l; ++j) {
    LpRow row;  // d_j + (B^T lambda)_j >= 0
    row.coeffs = RationalVector::Zero(n);
    for (Index i = 0; i < inst.m_l; ++i) row.coeffs(vl + i) = inst.B(i, j);
    row.rel = Relation::GreaterEqual;
    row.rhs = -inst.d(j);
    rows.push_back(std::move(row));
  }

  auto cut_row = [&](const RationalVector& a_plus) {
    // lambda.b + v.d <= A_plus.lambda  <=>  (b - A_plus).lambda + d.v <= 0
    LpRow row;
    row.coeffs = RationalVector::Zero(n);
    row.coeffs.segment(vv, inst.n_l) = inst.d;
    for (Index i = 0; i < inst.m_l; ++i) row.coeffs(vl + i) = inst.b(i) - a_plus(i);
    row.rhs = Rational(0);
    return row;
  };

  SdCut cut;
  cut.a_plus = RationalVector::Zero(inst.m_l);
  std::vector<bool> known(inst.m_l, false);

  while (cut.sweeps < max_sweeps) {
    ++cut.sweeps;
    bool improved = false;
    RationalVector sweep_bounds = cut.a_plus;
    for (Index i = 0; i < inst.m_l; ++i) {
      LinearProgram aux;
      aux.objective = RationalVector::Zero(n);
      aux.objective.segment(vx, inst.n_u) = -inst.A.row(i).transpose();  // max A_i.x
      aux.rows = rows;
      LpResult res = solve_lp(aux);
      if (res.status == LpStatus::Unbounded) {
        cut.trivial = true;
        return cut;
      }
      Rational bound(0);  // infeasible auxiliary set: any finite bound is vacuous
      if (res.status == LpStatus::Optimal) bound = -res.objective;
      if (!known[i] || bound < cut.a_plus(i)) {
        improved = true;
        sweep_bounds(i) = bound;
      }
      known[i] = true;
    }
    cut.a_plus = sweep_bounds;
    if (!improved) break;
    ++cut.improving_sweeps;
    cut.bound_history.push_back(cut.a_plus);
    rows.push_back(cut_row(cut.a_plus));
  }
  return cut;
}

void append_sd_cut(ExtendedModel& model, const BilevelInstance& inst, const SdCut& cut) {
  if (cut.trivial) return;
  const Index n = model.num_vars();
  LpRow row;
  row.coeffs = RationalVector::Zero(n);
  row.coeffs.segment(model.v_offset(), inst.n_l) = inst.d;
  for (Index i = 0; i < inst.m_l; ++i)
    row.coeffs(model.lambda_offset() + i) = inst.b(i) - cut.a_plus(i);
  row.rhs = Rational(0);
  model.linear_rows.push_back(std::move(row));
}

LinearProgram relaxation_lp(const ExtendedModel& model, const std::vector<LpRow>& extra) {
  LinearProgram lp;
  lp.objective = model.objective;
  lp.rows = model.linear_rows;
  lp.rows.insert(lp.rows.end(), extra.begin(), extra.end());
  return lp;
}

std::string model_to_string(const ExtendedModel& model) {
  std::ostringstream os;
  auto expr = [&](const RationalVector& coeffs) {
    std::string s;
    for (Index j = 0; j < coeffs.size(); ++j) {
      if (coeffs(j).is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += coeffs(j).str() + "*z" + std::to_string(j);
    }
    return s.empty() ? std::string("0") : s;
  };
  os << "min " << expr(model.objective) << "\n";
  for (const LpRow& row : model.linear_rows) {
    const char* rel = row.rel == Relation::Equal ? " = "
                      : row.rel == Relation::LessEqual ? " <= " : " >= ";
    os << "  " << expr(row.coeffs) << rel << row.rhs << "\n";
  }
  for (std::size_t p = 0; p < model.comp_pairs.size(); ++p) {
    const auto& pair = model.comp_pairs[p];
    os << "  comp[" << p << "]: (" << expr(pair.left.coeffs) << " + " << pair.left.constant
       << ") * z" << pair.right_var << " = 0\n";
  }
  for (const Disjunction& disj : model.disjunctions) {
    os << "  disjunction k=" << disj.k + 1 << " (one of):\n";
    for (const DisjunctionRow& row : disj.rows)
      os << "    " << expr(row.coeffs) << " <= " << row.rhs << "\n";
  }
  if (model.delta) os << "  delta = " << *model.delta << "\n";
  if (model.radius_mode) os << "  radius mode: maximizing z" << model.delta_var() << "\n";
  return os.str();
}

}  // namespace norbip
