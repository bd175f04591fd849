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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "norbip/driver.hpp"
#include "norbip/generator.hpp"
#include "norbip/instance_io.hpp"
#include "norbip/oracle.hpp"

namespace {

using namespace norbip;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;

int status_exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
    case SolveStatus::Unbounded:
      return kExitOk;
    case SolveStatus::Budget:
      return kExitBudget;
    default:
      return kExitInfeasible;
  }
}

Rational parse_rational_arg(const std::string& text, const std::string& what) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw CLI::ValidationError(what, e.what());
  }
}

Dims parse_dims_arg(const std::string& text) {
  Dims dims;
  std::istringstream in(text);
  std::string part;
  std::vector<Index> values;
  while (std::getline(in, part, ',')) values.push_back(std::stoll(part));
  if (values.size() != 4)
    throw CLI::ValidationError("--dims", "expected n_u,n_l,m_u,m_l");
  dims.n_u = values[0];
  dims.n_l = values[1];
  dims.m_u = values[2];
  dims.m_l = values[3];
  return dims;
}

struct SolveArgs {
  std::string instance_path;
  std::string delta_text;
  std::string delta_rel_text;
  std::string mode = "constraint";
  bool no_upper_rows = false;
  bool sd_cut = false;
  std::int64_t node_budget = 1'000'000;
  std::string out_path;
  std::string log_path;
};

int run_solve(const SolveArgs& args) {
  BilevelInstance inst = load_instance(args.instance_path);
  if (auto issues = validate(inst); !issues.empty()) {
    for (const auto& issue : issues) std::cerr << "error: " << issue << "\n";
    return kExitUsage;
  }

  SolverOptions options;
  options.include_upper_rows = !args.no_upper_rows;
  options.use_sd_cut = args.sd_cut;
  options.node_budget = args.node_budget;
  std::ofstream log_stream;
  if (!args.log_path.empty()) {
    log_stream.open(args.log_path);
    options.search_log = &log_stream;
  }

  Rational delta(0);
  if (!args.delta_text.empty()) delta = parse_rational_arg(args.delta_text, "--delta");
  if (!args.delta_rel_text.empty())
    options.delta_rel = parse_rational_arg(args.delta_rel_text, "--delta-rel");

  RobustnessConfig config;
  config.delta = delta;
  if (args.mode == "constraint") config.mode = RobustMode::ConstraintRobust;
  else if (args.mode == "objective") config.mode = RobustMode::ObjectiveRobust;
  else if (args.mode == "conservative") config.mode = RobustMode::Conservative;
  else throw CLI::ValidationError("--mode", "one of constraint|objective|conservative");
  config = normalized(config);
  if (config.mode == RobustMode::Optimistic)
    std::cerr << "note: delta < 0 selects the plain optimistic problem\n";

  // The epigraph transforms change the instance the outcome refers to;
  // serialize against the instance actually solved.
  BilevelInstance solved = inst;
  if (config.mode == RobustMode::ObjectiveRobust)
    solved = to_objective_robust(inst, false);
  else if (config.mode == RobustMode::Conservative)
    solved = to_objective_robust(inst, true);

  SolveOutcome outcome = norvep(solved, config.delta, options);
  const std::string text = outcome_to_json_text(solved, config.delta, outcome);
  if (args.out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(args.out_path);
    out << text << "\n";
    std::cout << to_string(outcome.status) << "\n";
  }
  return status_exit_code(outcome.status);
}

int run_check(const std::string& instance_path, const std::string& solution_path,
              const std::string& delta_text) {
  BilevelInstance inst = load_instance(instance_path);
  const Rational delta = parse_rational_arg(delta_text, "--delta");

  std::ifstream in(solution_path);
  if (!in) {
    std::cerr << "error: cannot open solution file '" << solution_path << "'\n";
    return kExitUsage;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "error: invalid solution JSON: " << e.what() << "\n";
    return kExitUsage;
  }
  const nlohmann::json& sol = doc.contains("solution") ? doc["solution"] : doc;
  if (!sol.contains("x") || !sol.contains("v")) {
    std::cerr << "error: solution JSON lacks 'x'/'v' arrays\n";
    return kExitUsage;
  }
  auto read_vec = [](const nlohmann::json& arr) {
    RationalVector v(static_cast<Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
      v(static_cast<Index>(i)) = Rational::parse(arr[i].get<std::string>());
    return v;
  };
  const RationalVector x = read_vec(sol["x"]);
  const RationalVector v = read_vec(sol["v"]);

  RobustnessReport report = check_robustness(inst, delta, x, v);
  if (!report.bilevel_feasible) {
    std::cout << "not_bilevel_feasible: " << report.reason << "\n";
    return kExitInfeasible;
  }
  for (std::size_t k = 0; k < report.verdicts.size(); ++k) {
    const RobustnessVerdict& verdict = report.verdicts[k];
    std::cout << "k=" << k + 1 << ": ";
    if (verdict.vacuous) {
      std::cout << "robust (vacuous: empty adversary)\n";
    } else if (verdict.robust) {
      std::cout << "robust margin=" << verdict.margin->str() << " ("
                << to_decimal_string(*verdict.margin) << ")\n";
    } else if (verdict.unbounded_adversary) {
      std::cout << "violated (adversarial problem unbounded)\n";
    } else {
      std::cout << "violated worst_z=[";
      for (Index j = 0; j < verdict.worst_z.size(); ++j)
        std::cout << (j ? "," : "") << verdict.worst_z(j).str();
      std::cout << "] violation=" << verdict.violation->str() << " ("
                << to_decimal_string(*verdict.violation) << ")\n";
    }
  }
  return kExitOk;
}

int run_radius(const std::string& instance_path, std::int64_t node_budget) {
  BilevelInstance inst = load_instance(instance_path);
  SolverOptions options;
  options.node_budget = node_budget;
  RadiusResult result = radius(inst, options);
  switch (result.kind) {
    case RadiusResult::Kind::Finite:
      std::cout << result.value.str() << "\n";
      return kExitOk;
    case RadiusResult::Kind::Infinite:
      std::cout << "inf\n";
      return kExitOk;
    case RadiusResult::Kind::InfeasibleAtZero:
      std::cout << "infeasible (" << result.detail << ")\n";
      return kExitInfeasible;
    case RadiusResult::Kind::Budget:
      std::cout << "budget exhausted\n";
      return kExitBudget;
  }
  return kExitUsage;
}

int run_vertices(const std::string& instance_path, const std::string& out_path) {
  BilevelInstance inst = load_instance(instance_path);
  std::vector<DualPolyhedron> polys;
  bool any_empty = false;
  for (Index k = 0; k < inst.m_u; ++k) {
    polys.push_back(enumerate_vertices(build_dual_polyhedron(inst, k), k));
    if (polys.back().empty) {
      any_empty = true;
      std::cerr << "note: dual adversarial polyhedron " << k + 1 << " is empty\n";
    }
  }
  if (out_path.empty()) {
    write_vertices_csv(std::cout, polys);
  } else {
    std::ofstream out(out_path);
    write_vertices_csv(out, polys);
  }
  return any_empty ? kExitInfeasible : kExitOk;
}

int run_generate(const std::string& dims_text, int count, std::uint64_t seed,
                 const std::string& outdir) {
  const Dims dims = parse_dims_arg(dims_text);
  std::filesystem::create_directories(outdir);
  ScreenedBatch batch = generate_screened(dims, seed, count);
  for (const BilevelInstance& inst : batch.instances)
    save_instance(inst, outdir + "/" + inst.name + ".json");
  std::ofstream manifest(outdir + "/manifest.csv");
  write_manifest_csv(manifest, dims, batch);
  std::cout << "kept " << batch.instances.size() << " of " << batch.trials
            << " trials; manifest at " << outdir << "/manifest.csv\n";
  return kExitOk;
}

int run_feasibility_sweep(const std::string& dims_text, const std::string& deltas_text,
                          int count, std::uint64_t seed, const std::string& out_path,
                          std::int64_t node_budget) {
  const Dims dims = parse_dims_arg(dims_text);
  std::vector<Rational> deltas;
  {
    std::istringstream in(deltas_text);
    std::string part;
    while (std::getline(in, part, ',')) deltas.push_back(Rational::parse(part));
  }
  if (deltas.empty()) throw CLI::ValidationError("--deltas", "no tolerance values given");

  ScreenedBatch batch = generate_screened(dims, seed, count);
  std::vector<std::uint64_t> kept_seeds;
  for (const auto& record : batch.records)
    if (record.kept) kept_seeds.push_back(record.seed);

  SolverOptions options;
  options.node_budget = node_budget;

  std::ostringstream csv;
  csv << "seed,name";
  for (const Rational& delta : deltas)
    csv << ",status_delta_" << delta.str() << ",objective_delta_" << delta.str()
        << ",objective_decimal_delta_" << delta.str();
  csv << "\n";
  std::vector<int> infeasible_counts(deltas.size(), 0);
  for (std::size_t i = 0; i < batch.instances.size(); ++i) {
    const BilevelInstance& inst = batch.instances[i];
    csv << kept_seeds[i] << "," << inst.name;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
      SolveOutcome out = norvep(inst, deltas[di], options);
      const bool feasible =
          out.status == SolveStatus::Optimal || out.status == SolveStatus::Unbounded;
      if (!feasible && out.status != SolveStatus::Budget) ++infeasible_counts[di];
      csv << "," << to_string(out.status);
      if (out.objective) {
        csv << "," << out.objective->str() << "," << to_decimal_string(*out.objective);
      } else {
        csv << ",,";
      }
    }
    csv << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    out << csv.str();
  }
  std::cerr << "infeasible counts:";
  for (std::size_t di = 0; di < deltas.size(); ++di)
    std::cerr << " delta=" << deltas[di].str() << ":" << infeasible_counts[di];
  std::cerr << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for linear near-optimal robust bilevel problems"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand(
      "solve", "Solve an instance for a given near-optimality tolerance");
  solve_cmd->add_option("instance", solve_args.instance_path, "Instance JSON file")
      ->required();
  solve_cmd->add_option("--delta", solve_args.delta_text,
                        "Tolerance as an exact rational (\"1/2\", \"0.1\"); "
                        "negative selects the optimistic problem");
  solve_cmd->add_option("--delta-rel", solve_args.delta_rel_text,
                        "Relative tolerance: delta = max(1/20, delta_rel*|opt(L)|)");
  solve_cmd->add_option("--mode", solve_args.mode,
                        "constraint|objective|conservative (default constraint)");
  solve_cmd->add_flag("--no-upper-rows", solve_args.no_upper_rows,
                      "Drop the primal upper rows from the extended model");
  solve_cmd->add_flag("--sd-cut", solve_args.sd_cut,
                      "Add the strong-duality valid inequality");
  solve_cmd->add_option("--node-budget", solve_args.node_budget,
                        "Branch-and-bound node budget (default 1e6)");
  solve_cmd->add_option("--out", solve_args.out_path, "Write the result JSON here");
  solve_cmd->add_option("--search-log", solve_args.log_path,
                        "Write the branch-and-bound search log CSV here");

  std::string check_instance, check_solution, check_delta;
  auto* check_cmd =
      app.add_subcommand("check", "Verify near-optimal robustness of a solution file");
  check_cmd->add_option("instance", check_instance, "Instance JSON file")->required();
  check_cmd->add_option("solution", check_solution, "Solution JSON file")->required();
  check_cmd->add_option("--delta", check_delta, "Tolerance (exact rational)")->required();

  std::string radius_instance;
  std::int64_t radius_budget = 1'000'000;
  auto* radius_cmd =
      app.add_subcommand("radius", "Radius of near-optimal feasibility");
  radius_cmd->add_option("instance", radius_instance, "Instance JSON file")->required();
  radius_cmd->add_option("--node-budget", radius_budget, "Node budget");

  std::string vertices_instance, vertices_out;
  auto* vertices_cmd = app.add_subcommand(
      "vertices", "Enumerate the dual adversarial polyhedra vertices (CSV)");
  vertices_cmd->add_option("instance", vertices_instance, "Instance JSON file")->required();
  vertices_cmd->add_option("--out", vertices_out, "Write the CSV here");

  std::string gen_dims = "5,5,5,5", gen_outdir = ".";
  int gen_count = 1;
  std::uint64_t gen_seed = 0;
  auto* gen_cmd =
      app.add_subcommand("generate", "Generate screened random instances");
  gen_cmd->add_option("--dims", gen_dims, "n_u,n_l,m_u,m_l (default 5,5,5,5)");
  gen_cmd->add_option("--count", gen_count, "Instances to keep")->required();
  gen_cmd->add_option("--seed", gen_seed, "Base seed (consecutive seeds are drawn)");
  gen_cmd->add_option("--outdir", gen_outdir, "Output directory");

  auto* experiment_cmd = app.add_subcommand("experiment", "Batch experiment runners");
  experiment_cmd->require_subcommand(1);
  std::string sweep_dims = "5,5,5,5", sweep_deltas, sweep_out;
  int sweep_count = 100;
  std::uint64_t sweep_seed = 0;
  std::int64_t sweep_budget = 1'000'000;
  auto* sweep_cmd = experiment_cmd->add_subcommand(
      "feasibility-sweep",
      "Solve screened instances over a tolerance list; CSV of statuses");
  sweep_cmd->add_option("--deltas", sweep_deltas, "Comma-separated tolerances")->required();
  sweep_cmd->add_option("--dims", sweep_dims, "n_u,n_l,m_u,m_l");
  sweep_cmd->add_option("--count", sweep_count, "Screened instances to solve");
  sweep_cmd->add_option("--seed", sweep_seed, "Base seed");
  sweep_cmd->add_option("--out", sweep_out, "Write the CSV here");
  sweep_cmd->add_option("--node-budget", sweep_budget, "Node budget per solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (check_cmd->parsed()) return run_check(check_instance, check_solution, check_delta);
    if (radius_cmd->parsed()) return run_radius(radius_instance, radius_budget);
    if (vertices_cmd->parsed()) return run_vertices(vertices_instance, vertices_out);
    if (gen_cmd->parsed()) return run_generate(gen_dims, gen_count, gen_seed, gen_outdir);
    if (sweep_cmd->parsed())
      return run_feasibility_sweep(sweep_dims, sweep_deltas, sweep_count, sweep_seed,
                                   sweep_out, sweep_budget);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
