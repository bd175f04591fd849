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

#ifndef NORBIP_INSTANCE_HPP_
#define NORBIP_INSTANCE_HPP_

#include <string>
#include <vector>

#include "norbip/types.hpp"

namespace norbip {

/// Linear bilevel instance data. Sign convention:
///   upper level: min c_x^T x + c_y^T v  s.t.  G x + H v <= q,  x >= 0
///   lower level: v in argmin_y { d^T y : A x + B y <= b, y >= 0 }
/// Instances are immutable after construction; transformations return copies.
struct BilevelInstance {
  std::string name;
  Index n_u = 0;  // upper variables
  Index n_l = 0;  // lower variables
  Index m_u = 0;  // upper constraints
  Index m_l = 0;  // lower constraints
  RationalVector c_x, c_y;  // n_u, n_l
  RationalMatrix G, H;      // m_u x n_u, m_u x n_l
  RationalVector q;         // m_u
  RationalMatrix A, B;      // m_l x n_u, m_l x n_l
  RationalVector b;         // m_l
  RationalVector d;         // n_l
};

/// Returns one description per structural defect (dimension mismatches,
/// negative counts); an empty list means the instance is well formed.
/// Canonical form of the rationals themselves is enforced by the Rational
/// type, so only array shapes can go wrong in memory; malformed rationals in
/// files are reported per cell by the JSON loader.
std::vector<std::string> validate(const BilevelInstance& inst);

/// Epigraph reduction of the objective-robust problem: adds an upper
/// variable tau (last position), sets the objective to min tau, and appends
/// the row c_x^T x + c_y^T z - tau <= 0 as the last upper row. With
/// conservative = true the original upper rows are kept alongside; otherwise
/// the tau row is the only (robustified) upper row. Lower-level data is
/// unchanged except for the zero tau column appended to A.
/// Note: tau inherits the nonnegative-orthant convention for upper
/// variables; problems whose protected objective value can be negative need
/// a user-side shift.
BilevelInstance to_objective_robust(const BilevelInstance& inst, bool conservative);

/// Moves the selected lower rows (0-based indices into (A|B|b)) to the end
/// of the upper level (G|H|q), preserving relative order. Throws
/// std::out_of_range on bad indices; duplicate indices are ignored.
BilevelInstance promote_constraints(const BilevelInstance& inst,
                                    const std::vector<Index>& rows);

enum class RobustMode { ConstraintRobust, ObjectiveRobust, Conservative, Optimistic };

struct RobustnessConfig {
  Rational delta;
  RobustMode mode = RobustMode::ConstraintRobust;
};

/// Forces mode = Optimistic whenever delta < 0 (empty near-optimal set).
RobustnessConfig normalized(RobustnessConfig config);

/// One (alpha_k, beta_k) pair per upper constraint, certifying robustness:
/// alpha_k^T (b - A x) + beta_k (d^T v + delta) <= q_k - (G x)_k.
struct VertexCertificate {
  RationalVector alpha;  // m_l
  Rational beta;
};

struct Solution {
  RationalVector x;       // n_u
  RationalVector v;       // n_l
  RationalVector lambda;  // m_l, duals of the lower rows
  RationalVector sigma;   // n_l, duals of y >= 0
  Rational upper_objective;
  Rational lower_objective;
  std::vector<VertexCertificate> certificates;  // one per k; empty when vacuous
};

}  // namespace norbip

#endif  // NORBIP_INSTANCE_HPP_
