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

#ifndef NORBIP_ORACLE_HPP_
#define NORBIP_ORACLE_HPP_

#include "norbip/driver.hpp"
#include "norbip/vertex_enum.hpp"

namespace norbip {
namespace oracle {

/// Brute-force reference solver for tiny instances (m_l + n_l <= 12):
/// enumerates every complementarity pattern, solves the pattern LP, and
/// enforces robustness exactly through the disjunction over dual vertex
/// choices, with the vertex pools themselves produced by the subset
/// enumeration below. No double description, no branching: algorithmically
/// independent of vertex_enum and bnb.
struct TinyOutcome {
  SolveStatus status = SolveStatus::NORBiPInfeasible;
  Index failed_k = -1;
  std::optional<Rational> objective;
  RationalVector x, v;  // an optimal point when Optimal
};
TinyOutcome solve_tiny(const BilevelInstance& inst, const Rational& delta);

/// All vertices of {z >= 0 : rows}, found by solving every full-rank tight
/// subset (variable count <= 6). Deduplicated and sorted.
std::vector<RationalVector> vertices_by_subsets(const InequalitySystem& system);

/// All extreme rays of the recession cone {z >= 0 : coeffs.z >= 0}, found
/// from rank-(n-1) tight subsets; primitive integer directions, sorted.
std::vector<RationalVector> rays_by_subsets(const InequalitySystem& system);

}  // namespace oracle
}  // namespace norbip

#endif  // NORBIP_ORACLE_HPP_
