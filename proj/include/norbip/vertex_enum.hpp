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

#ifndef NORBIP_VERTEX_ENUM_HPP_
#define NORBIP_VERTEX_ENUM_HPP_

#include <iosfwd>
#include <vector>

#include "norbip/instance.hpp"
#include "norbip/types.hpp"

namespace norbip {

/// Polyhedron {z >= 0 : coeffs_r . z >= rhs_r for every row r}.
struct InequalitySystem {
  Index dim = 0;
  std::vector<std::pair<RationalVector, Rational>> rows;
};

/// Generator description of the k-th dual adversarial feasible set
/// D_k = {(alpha, beta) >= 0 : B^T alpha + beta d >= H_k}. Vertices are
/// (m_l + 1)-vectors (alpha, beta); rays are enumerated by the double
/// description pass but only their count is kept (the disjunctions range
/// over vertices only: the dual adversarial problem is bounded whenever the
/// bilevel problem is feasible, so its optimum is attained at a vertex).
struct DualPolyhedron {
  Index k = 0;
  std::vector<RationalVector> vertices;
  Index ray_count = 0;
  bool empty = false;
};

/// The n_l rows of B^T alpha + beta d >= H_k over (alpha, beta) >= 0;
/// independent of (x, v, delta). k is 0-based.
InequalitySystem build_dual_polyhedron(const BilevelInstance& inst, Index k);

/// Full generator description (vertices and extreme rays, both canonical
/// and lexicographically sorted) via exact double description.
struct GeneratorSet {
  std::vector<RationalVector> vertices;  // exact coordinates
  std::vector<RationalVector> rays;      // primitive integer directions
};
GeneratorSet enumerate_generators(const InequalitySystem& system);

/// Wraps enumerate_generators into the DualPolyhedron contract:
/// empty = true iff the system is infeasible (no vertices; the feasible set
/// of an inequality system over the nonnegative orthant is pointed).
DualPolyhedron enumerate_vertices(const InequalitySystem& system, Index k = 0);

/// CSV dump: header then one line per vertex with columns
/// k, vertex_index, alpha_1..alpha_{m_l}, beta (rationals as strings).
void write_vertices_csv(std::ostream& os, const std::vector<DualPolyhedron>& polys);

}  // namespace norbip

#endif  // NORBIP_VERTEX_ENUM_HPP_
