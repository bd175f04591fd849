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

#include "norbip/driver.hpp"

#include <cassert>
#include <stdexcept>

#include "json.hpp"

namespace norbip {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(std::vector<StageTiming>& sink) : sink_(sink) {}

  void start(const std::string& stage) {
    sink_.push_back({stage, std::chrono::microseconds{0}});
    begin_ = Clock::now();
  }
  void stop() {
    sink_.back().elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - begin_);
  }

 private:
  std::vector<StageTiming>& sink_;
  Clock::time_point begin_;
};

Solution extract_solution(const BilevelInstance& inst, const ExtendedModel& model,
                          const BnbResult& bnb,
                          const std::vector<DualPolyhedron>& polyhedra) {
  Solution sol;
  sol.x = bnb.point.segment(model.x_offset(), inst.n_u);
  sol.v = bnb.point.segment(model.v_offset(), inst.n_l);
  sol.lambda = bnb.point.segment(model.lambda_offset(), inst.m_l);
  sol.sigma = bnb.point.segment(model.sigma_offset(), inst.n_l);
  sol.upper_objective = inst.c_x.dot(sol.x) + inst.c_y.dot(sol.v);
  sol.lower_objective = inst.d.dot(sol.v);
  for (std::size_t k = 0; k < polyhedra.size(); ++k) {
    const Index l = bnb.chosen_vertex.empty() ? -1 : bnb.chosen_vertex[k];
    assert(l >= 0);
    const RationalVector& vert = polyhedra[k].vertices[l];
    VertexCertificate cert;
    cert.alpha = vert.head(inst.m_l);
    cert.beta = vert(inst.m_l);
    sol.certificates.push_back(std::move(cert));
  }
  return sol;
}

// The search log is attached only to the solve of interest (the extended
// stage, or the radius model) so the CSV stays single-headered.
BnbOptions bnb_options(const SolverOptions& options, bool with_log = false) {
  BnbOptions opts;
  opts.node_budget = options.node_budget;
  opts.time_budget = options.time_budget;
  if (with_log) opts.log = options.search_log;
  return opts;
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::DualAdversarialInfeasible: return "dual_adversarial_infeasible";
    case SolveStatus::HPRInfeasible: return "hpr_infeasible";
    case SolveStatus::OptimisticInfeasible: return "optimistic_infeasible";
    case SolveStatus::NORBiPInfeasible: return "norbip_infeasible";
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Budget: return "budget_exhausted";
  }
  return "unknown";
}

SolveOutcome norvep(const BilevelInstance& inst, Rational delta,
                    const SolverOptions& options) {
  {
    auto issues = validate(inst);
    if (!issues.empty())
      throw std::invalid_argument("norvep: invalid instance: " + issues.front());
  }

  SolveOutcome outcome;
  StageTimer timer(outcome.stage_timings);
  const bool optimistic_only = delta < Rational(0);

  // delta_rel protocol: solve the optimistic problem first and derive
  // delta = max(1/20, delta_rel * |opt(L)|) from its lower objective.
  std::optional<ExtendedModel> optimistic_model;
  std::optional<BnbResult> optimistic_result;
  if (options.delta_rel && !optimistic_only) {
    optimistic_model = build_optimistic(inst);
    optimistic_result = solve_extended(*optimistic_model, bnb_options(options));
    outcome.node_count += optimistic_result->nodes_explored;
    if (optimistic_result->status == BnbStatusKind::Optimal) {
      const RationalVector v =
          optimistic_result->point.segment(optimistic_model->v_offset(), inst.n_l);
      delta = max(Rational(1, 20), *options.delta_rel * abs(inst.d.dot(v)));
    }
  }

  std::vector<DualPolyhedron> polyhedra;
  if (!optimistic_only) {
    // Step 1: dual subproblems expansion & pre-solving.
    timer.start("dual_subproblems_expansion");
    for (Index k = 0; k < inst.m_u; ++k) {
      DualPolyhedron poly = enumerate_vertices(build_dual_polyhedron(inst, k), k);
      outcome.vertex_counts.push_back(static_cast<Index>(poly.vertices.size()));
      outcome.ray_counts.push_back(poly.ray_count);
      if (poly.empty) {
        timer.stop();
        outcome.status = SolveStatus::DualAdversarialInfeasible;
        outcome.failed_k = k;
        return outcome;
      }
      polyhedra.push_back(std::move(poly));
    }
    timer.stop();
  }

  // Step 2: high-point relaxation.
  timer.start("high_point_relaxation");
  LpResult hpr = solve_lp(build_hpr(inst));
  timer.stop();
  if (hpr.status == LpStatus::Infeasible) {
    outcome.status = SolveStatus::HPRInfeasible;
    return outcome;
  }

  // Step 3: optimistic relaxation.
  if (!options.skip_optimistic_stage || optimistic_only) {
    timer.start("optimistic_relaxation");
    if (!optimistic_result) {
      optimistic_model = build_optimistic(inst);
      optimistic_result =
          solve_extended(*optimistic_model, bnb_options(options, optimistic_only));
      outcome.node_count += optimistic_result->nodes_explored;
    }
    timer.stop();
    switch (optimistic_result->status) {
      case BnbStatusKind::Optimal: {
        Solution sol = extract_solution(inst, *optimistic_model, *optimistic_result, {});
        outcome.optimistic_objective = optimistic_result->objective;
        outcome.optimistic_solution = std::move(sol);
        break;
      }
      case BnbStatusKind::Infeasible:
        outcome.status = SolveStatus::OptimisticInfeasible;
        return outcome;
      case BnbStatusKind::Budget:
        outcome.status = SolveStatus::Budget;
        outcome.best_bound = optimistic_result->best_bound;
        return outcome;
      case BnbStatusKind::Unbounded:
        // The optimistic problem is a relaxation only for delta >= 0, and
        // unboundedness of a relaxation says nothing definite: continue.
        break;
    }
    if (optimistic_only) {
      if (optimistic_result->status == BnbStatusKind::Unbounded) {
        outcome.status = SolveStatus::Unbounded;
      } else {
        outcome.status = SolveStatus::Optimal;
        outcome.solution = outcome.optimistic_solution;
        outcome.objective = outcome.optimistic_objective;
      }
      return outcome;
    }
  }

  // Step 4: extended formulation.
  timer.start("extended_formulation");
  ExtendedOptions ext_options;
  ext_options.include_upper_rows = options.include_upper_rows;
  ExtendedModel model = build_extended(inst, polyhedra, delta, ext_options);
  if (options.use_sd_cut) {
    SdCut cut = strong_duality_cut(inst);
    append_sd_cut(model, inst, cut);
  }
  BnbResult extended = solve_extended(model, bnb_options(options, /*with_log=*/true));
  outcome.node_count += extended.nodes_explored;
  timer.stop();

  switch (extended.status) {
    case BnbStatusKind::Optimal:
      outcome.status = SolveStatus::Optimal;
      outcome.objective = extended.objective;
      outcome.solution = extract_solution(inst, model, extended, polyhedra);
      break;
    case BnbStatusKind::Infeasible:
      outcome.status = SolveStatus::NORBiPInfeasible;
      break;
    case BnbStatusKind::Unbounded:
      outcome.status = SolveStatus::Unbounded;
      break;
    case BnbStatusKind::Budget:
      outcome.status = SolveStatus::Budget;
      outcome.best_bound = extended.best_bound;
      break;
  }
  return outcome;
}

SolveOutcome solve_with_config(const BilevelInstance& inst, const RobustnessConfig& config,
                               const SolverOptions& options) {
  const RobustnessConfig cfg = normalized(config);
  switch (cfg.mode) {
    case RobustMode::ConstraintRobust:
      return norvep(inst, cfg.delta, options);
    case RobustMode::ObjectiveRobust:
      return norvep(to_objective_robust(inst, /*conservative=*/false), cfg.delta, options);
    case RobustMode::Conservative:
      return norvep(to_objective_robust(inst, /*conservative=*/true), cfg.delta, options);
    case RobustMode::Optimistic:
      return norvep(inst, min(cfg.delta, Rational(-1)), options);
  }
  throw std::logic_error("unreachable robustness mode");
}

RobustnessReport check_robustness(const BilevelInstance& inst, const Rational& delta,
                                  const RationalVector& x, const RationalVector& v) {
  RobustnessReport report;
  if (x.size() != inst.n_u || v.size() != inst.n_l) {
    report.reason = "dimension mismatch between the point and the instance";
    return report;
  }
  for (Index j = 0; j < inst.n_u; ++j) {
    if (x(j) < Rational(0)) {
      report.reason = "x has a negative component";
      return report;
    }
  }
  for (Index j = 0; j < inst.n_l; ++j) {
    if (v(j) < Rational(0)) {
      report.reason = "v has a negative component";
      return report;
    }
  }
  const RationalVector slack = inst.b - inst.A * x - inst.B * v;
  for (Index i = 0; i < inst.m_l; ++i) {
    if (slack(i) < Rational(0)) {
      report.reason = "v violates lower-level constraint " + std::to_string(i + 1);
      return report;
    }
  }
  // Exact lower-level optimality of v at x.
  LinearProgram lower;
  lower.objective = inst.d;
  for (Index i = 0; i < inst.m_l; ++i) {
    LpRow row;
    row.coeffs = inst.B.row(i).transpose();
    row.rhs = inst.b(i) - inst.A.row(i).dot(x);
    lower.rows.push_back(std::move(row));
  }
  LpResult lower_res = solve_lp(lower);
  if (lower_res.status == LpStatus::Unbounded) {
    report.reason = "lower level unbounded at x";
    return report;
  }
  if (lower_res.status == LpStatus::Infeasible) {
    report.reason = "lower level infeasible at x";  // unreachable given v
    return report;
  }
  if (inst.d.dot(v) != lower_res.objective) {
    report.reason = "d.v differs from the lower-level optimum at x (" +
                    inst.d.dot(v).str() + " vs " + lower_res.objective.str() + ")";
    return report;
  }

  report.bilevel_feasible = true;
  const RationalVector gx = inst.G * x;
  for (Index k = 0; k < inst.m_u; ++k) {
    RobustnessVerdict verdict;
    const Rational rhs = inst.q(k) - gx(k);
    AdversarialOutcome adv = solve_adversarial(inst, k, x, v, delta);
    switch (adv.status) {
      case LpStatus::Infeasible:
        // Empty near-optimal set (delta < 0): vacuously robust.
        verdict.robust = true;
        verdict.vacuous = true;
        break;
      case LpStatus::Unbounded:
        verdict.robust = false;
        verdict.unbounded_adversary = true;
        break;
      case LpStatus::Optimal:
        verdict.margin = rhs - adv.value;
        verdict.worst_z = adv.worst_y;
        verdict.robust = adv.value <= rhs;
        if (!verdict.robust) verdict.violation = adv.value - rhs;
        break;
    }
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

RadiusResult radius(const BilevelInstance& inst, const SolverOptions& options) {
  RadiusResult result;
  std::vector<DualPolyhedron> polyhedra;
  for (Index k = 0; k < inst.m_u; ++k) {
    DualPolyhedron poly = enumerate_vertices(build_dual_polyhedron(inst, k), k);
    if (poly.empty) {
      result.kind = RadiusResult::Kind::InfeasibleAtZero;
      result.detail = "dual adversarial problem " + std::to_string(k + 1) + " infeasible";
      return result;
    }
    polyhedra.push_back(std::move(poly));
  }

  ExtendedOptions ext_options;
  ext_options.include_upper_rows = options.include_upper_rows;
  ext_options.radius_mode = true;
  ExtendedModel model = build_extended(inst, polyhedra, Rational(0), ext_options);
  if (options.use_sd_cut) {
    SdCut cut = strong_duality_cut(inst);
    append_sd_cut(model, inst, cut);
  }
  BnbResult res = solve_extended(model, bnb_options(options, /*with_log=*/true));
  result.node_count = res.nodes_explored;
  switch (res.status) {
    case BnbStatusKind::Optimal:
      result.kind = RadiusResult::Kind::Finite;
      result.value = -*res.objective;  // the model minimizes -delta
      break;
    case BnbStatusKind::Unbounded:
      result.kind = RadiusResult::Kind::Infinite;
      break;
    case BnbStatusKind::Infeasible:
      result.kind = RadiusResult::Kind::InfeasibleAtZero;
      result.detail = "extended model infeasible for every delta >= 0";
      break;
    case BnbStatusKind::Budget:
      result.kind = RadiusResult::Kind::Budget;
      break;
  }
  return result;
}

namespace {

using nlohmann::json;

json rational_json(const Rational& r) { return r.str(); }

json vector_json(const RationalVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i).str());
  return arr;
}

json vector_decimal_json(const RationalVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(to_decimal_string(v(i)));
  return arr;
}

json solution_json(const Solution& sol) {
  json out;
  out["x"] = vector_json(sol.x);
  out["x_decimal"] = vector_decimal_json(sol.x);
  out["v"] = vector_json(sol.v);
  out["v_decimal"] = vector_decimal_json(sol.v);
  out["lambda"] = vector_json(sol.lambda);
  out["sigma"] = vector_json(sol.sigma);
  out["upper_objective"] = rational_json(sol.upper_objective);
  out["upper_objective_decimal"] = to_decimal_string(sol.upper_objective);
  out["lower_objective"] = rational_json(sol.lower_objective);
  out["lower_objective_decimal"] = to_decimal_string(sol.lower_objective);
  json certs = json::array();
  for (const auto& cert : sol.certificates) {
    json c;
    c["alpha"] = vector_json(cert.alpha);
    c["beta"] = cert.beta.str();
    certs.push_back(std::move(c));
  }
  out["certificates"] = std::move(certs);
  return out;
}

}  // namespace

std::string outcome_to_json_text(const BilevelInstance& inst, const Rational& delta,
                                 const SolveOutcome& outcome) {
  json out;
  out["instance"] = inst.name;
  out["delta"] = delta.str();
  out["delta_decimal"] = to_decimal_string(delta);
  out["status"] = to_string(outcome.status);
  if (outcome.failed_k >= 0) out["failed_k"] = outcome.failed_k + 1;
  if (outcome.objective) {
    out["objective"] = outcome.objective->str();
    out["objective_decimal"] = to_decimal_string(*outcome.objective);
  }
  if (outcome.solution) out["solution"] = solution_json(*outcome.solution);
  if (outcome.optimistic_objective) {
    out["optimistic_objective"] = outcome.optimistic_objective->str();
    out["optimistic_objective_decimal"] = to_decimal_string(*outcome.optimistic_objective);
  }
  if (outcome.optimistic_solution)
    out["optimistic_solution"] = solution_json(*outcome.optimistic_solution);
  if (outcome.best_bound) {
    out["best_bound"] = outcome.best_bound->str();
    out["best_bound_decimal"] = to_decimal_string(*outcome.best_bound);
  }
  out["vertex_counts"] = outcome.vertex_counts;
  out["ray_counts"] = outcome.ray_counts;
  json timings = json::array();
  for (const auto& t : outcome.stage_timings) {
    json entry;
    entry["stage"] = t.stage;
    entry["microseconds"] = t.elapsed.count();
    timings.push_back(std::move(entry));
  }
  out["stage_timings_us"] = std::move(timings);
  out["node_count"] = outcome.node_count;
  return out.dump(2);
}

}  // namespace norbip
