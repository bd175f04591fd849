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

#include "norbip/bnb.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <ostream>
#include <string>
#include <utility>

namespace norbip {

namespace {

struct Node {
  std::vector<CompFix> comp;
  std::vector<DisjunctionState> disj;
  std::optional<Rational> bound;  // inherited LP bound of the parent
  std::int64_t id = 0;
  int depth = 0;
  std::string decision;  // how this node was created, for the search log
};

struct Searcher {
  const ExtendedModel& model;
  const BnbOptions& options;
  BnbResult result;
  std::vector<Node> stack;
  std::int64_t next_id = 0;
  bool done = false;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  Searcher(const ExtendedModel& m, const BnbOptions& o) : model(m), options(o) {
    result.nodes_explored = 0;
  }

  bool out_of_budget() const {
    if (result.nodes_explored >= options.node_budget) return true;
    return options.time_budget &&
           std::chrono::steady_clock::now() - started >= *options.time_budget;
  }

  void log_line(const Node& node, const std::string& bound, const std::string& status) {
    if (options.log == nullptr) return;
    *options.log << node.id << "," << node.depth << "," << node.decision << "," << bound
                 << "," << status << "\n";
  }

  std::vector<LpRow> node_rows(const Node& node) const {
    std::vector<LpRow> extra;
    for (std::size_t p = 0; p < node.comp.size(); ++p) {
      if (node.comp[p] == CompFix::Unresolved) continue;
      const ComplementarityPair& pair = model.comp_pairs[p];
      LpRow row;
      if (node.comp[p] == CompFix::LeftZero) {
        row.coeffs = pair.left.coeffs;
        row.rel = Relation::Equal;
        row.rhs = -pair.left.constant;
      } else {
        row.coeffs = RationalVector::Zero(model.num_vars());
        row.coeffs(pair.right_var) = Rational(1);
        row.rel = Relation::Equal;
        row.rhs = Rational(0);
      }
      extra.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < node.disj.size(); ++k) {
      if (node.disj[k].unresolved()) continue;
      const DisjunctionRow& drow = model.disjunctions[k].rows[node.disj[k].enforced];
      LpRow row;
      row.coeffs = drow.coeffs;
      row.rel = Relation::LessEqual;
      row.rhs = drow.rhs;
      extra.push_back(std::move(row));
    }
    return extra;
  }

  // Largest complementarity violation product at the point; -1 if all zero.
  std::pair<Index, Rational> worst_comp(const Node& node, const RationalVector& point) const {
    Index which = -1;
    Rational worst(0);
    for (std::size_t p = 0; p < node.comp.size(); ++p) {
      if (node.comp[p] != CompFix::Unresolved) continue;
      const ComplementarityPair& pair = model.comp_pairs[p];
      const Rational product = pair.left.eval(point) * point(pair.right_var);
      if (product > worst) {
        worst = product;
        which = static_cast<Index>(p);
      }
    }
    return {which, worst};
  }

  // Violation of disjunction k at the point: the smallest violation over the
  // vertices still allowed (zero means some disjunct already holds).
  Rational disjunction_violation(const Node& node, Index k,
                                 const RationalVector& point) const {
    const auto& rows = model.disjunctions[k].rows;
    std::optional<Rational> best;
    for (std::size_t l = 0; l < rows.size(); ++l) {
      if (node.disj[k].forbidden[l]) continue;
      const Rational viol = rows[l].violation(point);
      if (!best || viol < *best) best = viol;
      if (best->is_zero()) break;
    }
    // All vertices forbidden would violate the set-cover requirement; such
    // nodes are pruned before reaching this point.
    return best ? *best : Rational(0);
  }

  // Lowest-index allowed disjunct of k that holds at the point.
  Index holding_vertex(const Node& node, Index k, const RationalVector& point) const {
    const auto& rows = model.disjunctions[k].rows;
    for (std::size_t l = 0; l < rows.size(); ++l) {
      if (node.disj[k].forbidden[l]) continue;
      if (rows[l].violation(point).is_zero()) return static_cast<Index>(l);
    }
    return -1;
  }

  void maybe_update_incumbent(const Node& node, const RationalVector& point,
                              const Rational& value) {
    if (result.objective && *result.objective <= value) return;
    result.status = BnbStatusKind::Optimal;
    result.objective = value;
    result.point = point;
    result.chosen_vertex.assign(model.disjunctions.size(), -1);
    for (std::size_t k = 0; k < model.disjunctions.size(); ++k) {
      result.chosen_vertex[k] = node.disj[k].unresolved()
                                    ? holding_vertex(node, static_cast<Index>(k), point)
                                    : node.disj[k].enforced;
      assert(result.chosen_vertex[k] >= 0);
    }
  }

  void push_comp_children(const Node& node, Index pair) {
    // Explored order: LeftZero first, then RightZero (LIFO stack).
    for (CompFix fix : {CompFix::RightZero, CompFix::LeftZero}) {
      Node child = node;
      child.comp[pair] = fix;
      child.id = ++next_id;
      child.depth = node.depth + 1;
      child.decision = std::string(fix == CompFix::LeftZero ? "comp_left_zero("
                                                            : "comp_right_zero(") +
                       std::to_string(pair) + ")";
      stack.push_back(std::move(child));
    }
  }

  void push_disjunction_children(const Node& node, Index k) {
    const auto& rows = model.disjunctions[k].rows;
    // Enforced(l) children over the vertices not yet forbidden, explored in
    // ascending l; pushed in reverse so the stack pops them in order.
    for (std::size_t l = rows.size(); l-- > 0;) {
      if (node.disj[k].forbidden[l]) continue;
      Node child = node;
      child.disj[k].enforced = static_cast<Index>(l);
      child.id = ++next_id;
      child.depth = node.depth + 1;
      child.decision =
          "enforce(k=" + std::to_string(k) + ",l=" + std::to_string(l) + ")";
      stack.push_back(std::move(child));
    }
  }

  // Returns false when the node or time budget is exhausted.
  bool process(const Node& node) {
    if (out_of_budget()) return false;
    ++result.nodes_explored;

    for (std::size_t k = 0; k < node.disj.size(); ++k) {
      if (!node.disj[k].unresolved()) continue;
      bool all_forbidden = true;
      for (bool f : node.disj[k].forbidden) {
        if (!f) { all_forbidden = false; break; }
      }
      if (all_forbidden) {
        log_line(node, "-", "pruned_set_cover");
        return true;
      }
    }

    // Bound pruning against the incumbent (minimization, exact).
    if (node.bound && result.objective && *node.bound >= *result.objective) {
      log_line(node, node.bound->str(), "pruned_bound");
      return true;
    }

    LpResult lp = solve_lp(relaxation_lp(model, node_rows(node)));
    if (lp.status == LpStatus::Infeasible) {
      log_line(node, "-", "infeasible");
      return true;
    }

    if (lp.status == LpStatus::Unbounded) {
      Index comp_pair = -1;
      for (std::size_t p = 0; p < node.comp.size(); ++p) {
        if (node.comp[p] == CompFix::Unresolved) { comp_pair = static_cast<Index>(p); break; }
      }
      if (comp_pair >= 0) {
        log_line(node, "-inf", "branch_comp");
        push_comp_children(node, comp_pair);
        return true;
      }
      Index disj_k = -1;
      for (std::size_t k = 0; k < node.disj.size(); ++k) {
        if (node.disj[k].unresolved()) { disj_k = static_cast<Index>(k); break; }
      }
      if (disj_k >= 0) {
        log_line(node, "-inf", "branch_disjunction");
        push_disjunction_children(node, disj_k);
        return true;
      }
      // Fully resolved unbounded leaf: its feasible set is contained in the
      // model's, so the model itself is unbounded.
      log_line(node, "-inf", "unbounded_leaf");
      result.status = BnbStatusKind::Unbounded;
      result.objective.reset();
      done = true;
      return true;
    }

    if (result.objective && lp.objective >= *result.objective) {
      log_line(node, lp.objective.str(), "pruned_bound");
      return true;
    }

    const auto [comp_pair, comp_violation] = worst_comp(node, lp.primal);
    if (comp_pair >= 0) {
      log_line(node, lp.objective.str(), "branch_comp");
      Node branched = node;
      branched.bound = lp.objective;
      push_comp_children(branched, comp_pair);
      return true;
    }

    Index worst_k = -1;
    Rational worst_violation(0);
    for (std::size_t k = 0; k < node.disj.size(); ++k) {
      if (!node.disj[k].unresolved()) continue;
      const Rational viol = disjunction_violation(node, static_cast<Index>(k), lp.primal);
      if (viol > worst_violation) {
        worst_violation = viol;
        worst_k = static_cast<Index>(k);
      }
    }
    if (worst_k >= 0) {
      log_line(node, lp.objective.str(), "branch_disjunction");
      Node branched = node;
      branched.bound = lp.objective;
      push_disjunction_children(branched, worst_k);
      return true;
    }

    // Every complementarity product is zero and every disjunction holds at
    // the relaxation optimum: the point is feasible for the model and the
    // bound is attained, so this subtree is finished.
    log_line(node, lp.objective.str(), "incumbent");
    maybe_update_incumbent(node, lp.primal, lp.objective);
    return true;
  }
};

}  // namespace

BnbResult solve_extended(const ExtendedModel& model, const BnbOptions& options) {
  assert(static_cast<Index>(model.comp_pairs.size()) == model.m_l + model.n_l);
  Searcher searcher(model, options);
  if (options.log != nullptr) *options.log << "node,depth,decision,bound,status\n";

  Node root;
  root.comp.assign(model.comp_pairs.size(), CompFix::Unresolved);
  root.disj.resize(model.disjunctions.size());
  for (std::size_t k = 0; k < model.disjunctions.size(); ++k)
    root.disj[k].forbidden.assign(model.disjunctions[k].rows.size(), false);
  root.id = 0;
  root.decision = "root";
  searcher.stack.push_back(std::move(root));

  bool budget_hit = false;
  while (!searcher.stack.empty() && !searcher.done) {
    Node node = std::move(searcher.stack.back());
    searcher.stack.pop_back();
    if (!searcher.process(node)) {
      budget_hit = true;
      searcher.stack.push_back(std::move(node));
      break;
    }
  }

  BnbResult result = std::move(searcher.result);
  if (budget_hit) {
    // Keep the incumbent; report the weakest open bound as the global bound.
    std::optional<Rational> bound = result.objective;
    for (const Node& open : searcher.stack) {
      if (!open.bound) { bound.reset(); break; }
      if (!bound || *open.bound < *bound) bound = open.bound;
    }
    result.best_bound = bound;
    result.status = BnbStatusKind::Budget;
    return result;
  }
  if (searcher.done) return result;  // unbounded leaf found
  result.status = result.objective ? BnbStatusKind::Optimal : BnbStatusKind::Infeasible;
  return result;
}

}  // namespace norbip
