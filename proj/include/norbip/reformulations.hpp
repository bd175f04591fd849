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

#ifndef NORBIP_REFORMULATIONS_HPP_
#define NORBIP_REFORMULATIONS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "norbip/instance.hpp"
#include "norbip/lp.hpp"
#include "norbip/vertex_enum.hpp"

namespace norbip {

/// Affine expression coeffs . vars + constant over the model variables.
struct LinearExpr {
  RationalVector coeffs;
  Rational constant;

  Rational eval(const RationalVector& point) const { return coeffs.dot(point) + constant; }
};

/// Complementarity pair: left expression >= 0 (implied by the linear rows),
/// right variable >= 0, and their product must be exactly zero.
struct ComplementarityPair {
  LinearExpr left;
  Index right_var = -1;
};

/// One disjunct: coeffs . vars <= rhs, linear because the dual vertex
/// (alpha_k^l, beta_k^l) enters only as constants.
struct DisjunctionRow {
  RationalVector coeffs;
  Rational rhs;

  Rational violation(const RationalVector& point) const {
    Rational lhs = coeffs.dot(point);
    return lhs > rhs ? lhs - rhs : Rational(0);
  }
};

/// Per upper constraint k: at least one of rows must hold.
struct Disjunction {
  Index k = 0;
  std::vector<DisjunctionRow> rows;
};

/// Single-level model: variable blocks (x, v, lambda, sigma [, delta]),
/// plain linear rows, complementarity pairs (enforced by branching, never
/// big-M), and the per-k vertex disjunctions.
struct ExtendedModel {
  Index n_u = 0, n_l = 0, m_l = 0;
  bool radius_mode = false;
  RationalVector objective;  // minimization over all model variables
  std::vector<LpRow> linear_rows;
  std::vector<ComplementarityPair> comp_pairs;  // exactly m_l + n_l of them
  std::vector<Disjunction> disjunctions;
  std::optional<Rational> delta;  // fixed tolerance; nullopt in radius mode

  Index x_offset() const { return 0; }
  Index v_offset() const { return n_u; }
  Index lambda_offset() const { return n_u + n_l; }
  Index sigma_offset() const { return n_u + n_l + m_l; }
  Index delta_var() const { return radius_mode ? n_u + 2 * n_l + m_l : -1; }
  Index num_vars() const { return n_u + 2 * n_l + m_l + (radius_mode ? 1 : 0); }
};

/// High-point relaxation: min c_x.x + c_y.v over the joint constraints of
/// both levels, lower-level optimality dropped.
LinearProgram build_hpr(const BilevelInstance& inst);

/// k-th adversarial problem at fixed (x, v, delta), written as the
/// minimization of -H_k.y; robustness of constraint k at (x, v) is
/// equivalent to (max H_k.y) <= q_k - (G x)_k.
LinearProgram build_adversarial(const BilevelInstance& inst, Index k,
                                const RationalVector& x, const RationalVector& v,
                                const Rational& delta);

/// Convenience wrapper interpreting the adversarial solve in max form.
struct AdversarialOutcome {
  LpStatus status = LpStatus::Optimal;
  Rational value;         // max H_k.y when Optimal
  RationalVector worst_y; // argmax when Optimal
};
AdversarialOutcome solve_adversarial(const BilevelInstance& inst, Index k,
                                     const RationalVector& x, const RationalVector& v,
                                     const Rational& delta);

struct ExtendedOptions {
  bool include_upper_rows = true;  // primal upper rows as valid inequalities
  bool radius_mode = false;        // delta becomes a variable, objective max delta
};

/// Extended disjunctive formulation over the dual vertex lists. Requires a
/// nonempty polyhedron for every k (otherwise the pipeline has already
/// terminated). In radius mode the last variable is delta >= 0 with
/// objective max delta; each disjunction row gains the coefficient beta_k^l
/// on it.
ExtendedModel build_extended(const BilevelInstance& inst,
                             const std::vector<DualPolyhedron>& polyhedra,
                             const Rational& delta, const ExtendedOptions& options = {});

/// Optimistic single-level model: the extended model without disjunctions;
/// the primal upper rows are always present (they are not redundant here).
ExtendedModel build_optimistic(const BilevelInstance& inst);

/// Strong-duality valid inequality lambda.b + v.d <= A_plus.lambda with
/// per-row bounds A_plus_i >= max A_i.x, improved by repeated sweeps of the
/// auxiliary problems until a sweep improves no bound.
struct SdCut {
  bool trivial = false;        // some A_plus_i unbounded: the cut carries no content
  RationalVector a_plus;       // m_l, meaningful when !trivial
  int sweeps = 0;              // total sweeps run, including the confirming one
  int improving_sweeps = 0;    // sweeps that tightened at least one bound
  std::vector<RationalVector> bound_history;  // A_plus after each improving sweep
};
SdCut strong_duality_cut(const BilevelInstance& inst, int max_sweeps = 100);

/// Appends the cut as a linear row over (v, lambda); no-op on trivial cuts.
void append_sd_cut(ExtendedModel& model, const BilevelInstance& inst, const SdCut& cut);

/// Node LP for branching solvers: the plain linear rows plus any extra rows
/// (enforced disjuncts, complementarity fixings); all variables >= 0.
LinearProgram relaxation_lp(const ExtendedModel& model, const std::vector<LpRow>& extra);

/// Plain-text listing for debugging.
std::string model_to_string(const ExtendedModel& model);

}  // namespace norbip

#endif  // NORBIP_REFORMULATIONS_HPP_
