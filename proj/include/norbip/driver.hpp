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

#ifndef NORBIP_DRIVER_HPP_
#define NORBIP_DRIVER_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "norbip/bnb.hpp"
#include "norbip/instance.hpp"
#include "norbip/vertex_enum.hpp"

namespace norbip {

enum class SolveStatus {
  DualAdversarialInfeasible,
  HPRInfeasible,
  OptimisticInfeasible,
  NORBiPInfeasible,
  Optimal,
  Unbounded,
  Budget,
};

std::string to_string(SolveStatus status);

struct StageTiming {
  std::string stage;
  std::chrono::microseconds elapsed{0};
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::NORBiPInfeasible;
  Index failed_k = -1;  // set for DualAdversarialInfeasible
  std::optional<Solution> solution;
  std::optional<Rational> objective;
  std::optional<Solution> optimistic_solution;
  std::optional<Rational> optimistic_objective;
  std::vector<Index> vertex_counts;  // per k
  std::vector<Index> ray_counts;     // per k, diagnostics only
  std::vector<StageTiming> stage_timings;  // stages up to the terminating one
  std::int64_t node_count = 0;             // branch-and-bound nodes, all stages
  std::optional<Rational> best_bound;      // Budget only
};

struct SolverOptions {
  bool include_upper_rows = true;   // first valid-inequality family
  bool use_sd_cut = false;          // strong-duality valid inequality
  bool skip_optimistic_stage = false;
  std::int64_t node_budget = 1'000'000;
  std::optional<std::chrono::milliseconds> time_budget;  // per branch-and-bound run
  std::optional<Rational> delta_rel;  // delta = max(1/20, delta_rel * |opt(L)|)
  std::ostream* search_log = nullptr;
};

/// Staged solve: (1) enumerate every dual adversarial polyhedron,
/// terminating on the first empty one; (2) high-point relaxation;
/// (3) optimistic single-level model; (4) extended disjunctive model.
/// delta < 0 is accepted and solved as the plain optimistic problem (the
/// near-optimal set is empty then).
SolveOutcome norvep(const BilevelInstance& inst, Rational delta,
                    const SolverOptions& options = {});

/// Applies the robustness mode (objective-robust / conservative epigraph
/// transforms) before solving.
SolveOutcome solve_with_config(const BilevelInstance& inst, const RobustnessConfig& config,
                               const SolverOptions& options = {});

struct RobustnessVerdict {
  bool robust = false;
  bool vacuous = false;               // empty adversary (e.g. delta < 0)
  std::optional<Rational> margin;     // q_k - (G x)_k - optimum, when bounded
  std::optional<Rational> violation;  // positive when not robust
  RationalVector worst_z;             // adversarial argmax, when bounded
  bool unbounded_adversary = false;
};

struct RobustnessReport {
  bool bilevel_feasible = false;
  std::string reason;  // set when not bilevel feasible
  std::vector<RobustnessVerdict> verdicts;  // per k when bilevel feasible
};

/// Verifies (x, v) exactly: nonnegativity, lower-level feasibility, and
/// d.v equal to the lower optimum at x; then solves the m_u adversarial
/// problems at (x, v, delta).
RobustnessReport check_robustness(const BilevelInstance& inst, const Rational& delta,
                                  const RationalVector& x, const RationalVector& v);

struct RadiusResult {
  enum class Kind { Finite, Infinite, InfeasibleAtZero, Budget } kind = Kind::InfeasibleAtZero;
  Rational value;  // the radius when Finite
  std::string detail;
  std::int64_t node_count = 0;
};

/// Radius of near-optimal feasibility: max { delta >= 0 : extended model
/// feasible }, solved over the radius-mode model.
RadiusResult radius(const BilevelInstance& inst, const SolverOptions& options = {});

/// Outcome serialization (status, objective, certificates, vertex counts,
/// stage timings in microseconds, node counts). Rationals appear as "p/q"
/// strings plus advisory 12-significant-digit decimal fields.
std::string outcome_to_json_text(const BilevelInstance& inst, const Rational& delta,
                                 const SolveOutcome& outcome);

}  // namespace norbip

#endif  // NORBIP_DRIVER_HPP_
