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

#ifndef NORBIP_BNB_HPP_
#define NORBIP_BNB_HPP_

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "norbip/reformulations.hpp"

namespace norbip {

enum class CompFix { Unresolved, LeftZero, RightZero };

/// Per-disjunction branching state. Enforced(l) adds row (k, l) to the node
/// LP; Forbidden marks vertices excluded from enforcement in this subtree.
/// A node whose forbidden set covers every vertex is infeasible (the
/// disjunction's set-cover requirement cannot be met).
struct DisjunctionState {
  Index enforced = -1;          // -1 while unresolved
  std::vector<bool> forbidden;  // per vertex
  bool unresolved() const { return enforced < 0; }
};

enum class BnbStatusKind { Optimal, Infeasible, Unbounded, Budget };

struct BnbResult {
  BnbStatusKind status = BnbStatusKind::Infeasible;
  std::optional<Rational> objective;
  RationalVector point;  // model variable values of the incumbent
  std::vector<Index> chosen_vertex;  // per k: the disjunct that holds at the incumbent
  std::optional<Rational> best_bound;  // valid global lower bound on Budget
  std::int64_t nodes_explored = 0;
};

struct BnbOptions {
  std::int64_t node_budget = 1'000'000;
  std::optional<std::chrono::milliseconds> time_budget;  // none: no wall-clock limit
  std::ostream* log = nullptr;  // CSV search log: node id, depth, decision, bound, status
};

/// Depth-first branch and bound over an ExtendedModel. Node LP relaxations
/// ignore unresolved complementarities and disjunctions; branching resolves
/// them; all incumbent checks are exact rational comparisons.
BnbResult solve_extended(const ExtendedModel& model, const BnbOptions& options = {});

}  // namespace norbip

#endif  // NORBIP_BNB_HPP_
