// percov — persistent-coverage planner CLI.
//
// Subcommands: generate, solve, experiment, plot-data.
// Exit codes: 0 solved+verified, 2 infeasible instance,
//             3 covering-solver time-limit incumbent (still verified),
//             4 I/O or input error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percov/io.hpp"
#include "percov/solve.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeLimit = 3;
constexpr int kExitIo = 4;

struct ParamFlags {
  double battery = 5000;
  double recharge = 11000;
  double latency = 20000;
  CLI::Option* battery_opt = nullptr;
  CLI::Option* recharge_opt = nullptr;
  CLI::Option* latency_opt = nullptr;

  void add(CLI::App* cmd) {
    battery_opt = cmd->add_option("--battery", battery, "flight endurance b [s]");
    recharge_opt = cmd->add_option("--recharge", recharge, "recharge time B [s]");
    latency_opt = cmd->add_option("--latency", latency, "per-node latency bound T [s]");
  }

  // CLI flags override file/preset params; otherwise keep what the source had.
  percov::InstanceParams apply(percov::InstanceParams base) const {
    if (battery_opt->count()) base.b = battery;
    if (recharge_opt->count()) base.B = recharge;
    if (latency_opt->count()) base.T = latency;
    return base;
  }

  percov::InstanceParams defaults() const {
    percov::InstanceParams p;
    p.b = battery;
    p.B = recharge;
    p.T = latency;
    return p;
  }
};

struct SourceFlags {
  std::string in_path;
  std::string preset;

  void add(CLI::App* cmd) {
    auto* in = cmd->add_option("--in", in_path, "instance JSON file");
    auto* pre = cmd->add_option("--preset", preset, "built-in instance")
                    ->check(CLI::IsMember(percov::preset_names()));
    in->excludes(pre);
    cmd->callback([this, in, pre]() {
      if (!in->count() && !pre->count())
        throw CLI::RequiredError("--in or --preset");
    });
  }

  // Returns graph + params (file params if embedded, else defaults).
  std::pair<percov::Graph, percov::InstanceParams> load(const ParamFlags& pf) const {
    if (!preset.empty()) {
      percov::PresetInstance pi = percov::make_preset(preset);
      return {std::move(pi.graph), pf.apply(pi.params)};
    }
    percov::InstanceFile f = percov::load_instance(in_path);
    percov::InstanceParams base = f.has_params ? f.params : pf.defaults();
    return {std::move(f.graph), pf.apply(base)};
  }
};

void add_run_flags(CLI::App* cmd, percov::RunConfig& cfg, std::string& method,
                   std::string& objective, std::string& replication) {
  static const std::vector<std::string> kMethods = {
      "dijkstra", "tsp-greedy", "tsp-lp-1", "tsp-lp-n", "lollipop", "hybrid"};
  static const std::vector<std::string> kObjectives = {"tour-count", "uav-count",
                                                       "total-time", "total-card"};
  static const std::vector<std::string> kReplication = {"per-tour", "paper"};
  cmd->add_option("--method", method, "candidate pool construction")
      ->check(CLI::IsMember(kMethods));
  cmd->add_option("--tsp-count", cfg.tsp_count, "distinct TSP walks for tsp-lp-n")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lollipop-n", cfg.lollipop_n,
                  "per-anchor tour cap once all nodes covered (0 = keep all)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--objective", objective, "covering objective")
      ->check(CLI::IsMember(kObjectives));
  cmd->add_option("--replication", replication, "UAVs-per-tour formula")
      ->check(CLI::IsMember(kReplication));
  cmd->add_option("--seed", cfg.seed, "RNG seed (TSP restarts)");
  cmd->add_option("--time-limit", cfg.time_limit,
                  "covering solver budget [s] (env PERCOV_TIME_LIMIT)")
      ->envname("PERCOV_TIME_LIMIT")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--state-budget", cfg.lollipop_opts.state_budget,
                  "lollipop enumeration states per anchor")
      ->check(CLI::PositiveNumber);
}

void finish_config(percov::RunConfig& cfg, const std::string& method,
                   const std::string& objective, const std::string& replication) {
  cfg.method = percov::method_from_string(method);
  cfg.objective = percov::objective_from_string(objective);
  cfg.replication = percov::replication_from_string(replication);
}

void write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + out_path);
}

int cmd_generate(const std::string& kind, const std::string& preset, int rows, int cols,
                 double edge_time, std::optional<int> station, int n_nodes, double radius,
                 double side, std::uint64_t seed, const std::string& station_policy,
                 const ParamFlags& pf, const std::string& out_path) {
  percov::Graph g({{0, 0, 0}}, {}, 0);
  percov::InstanceParams params = pf.defaults();
  if (!preset.empty()) {
    percov::PresetInstance pi = percov::make_preset(preset);
    g = std::move(pi.graph);
    params = pf.apply(pi.params);
  } else if (kind == "grid") {
    percov::NodeId st =
        station ? *station : percov::grid_centroid_node(rows, cols);
    g = percov::build_grid(rows, cols, edge_time, st);
  } else {  // geometric
    percov::StationPolicy pol = station_policy == "corner"
                                    ? percov::StationPolicy::kCornerMost
                                    : percov::StationPolicy::kCentroidMost;
    g = percov::build_random_geometric(n_nodes, radius, side, seed, pol);
  }
  percov::save_instance(out_path, g, params);
  std::cout << "wrote " << out_path << " (" << g.size() << " nodes, "
            << g.edges().size() << " edges)\n";
  return kExitOk;
}

int cmd_solve(const SourceFlags& src, const ParamFlags& pf, percov::RunConfig cfg,
              const std::string& out_path) {
  auto [g, p] = src.load(pf);
  percov::SolveResult r = percov::solve_instance(g, p, cfg);
  if (!out_path.empty()) percov::save_solution(out_path, g, p, cfg, r);
  std::printf("method=%s regime=%s N=%d K=%d wall=%.3fs sim=%s proof=%s\n",
              percov::to_string(cfg.method).c_str(),
              percov::to_string(r.feas.regime).c_str(), r.num_uavs, r.num_tours,
              r.wall_seconds, r.sim.pass ? "pass" : "FAIL",
              percov::to_string(r.selection.proof).c_str());
  return r.selection.proof == percov::Proof::kTimeLimitedIncumbent ? kExitTimeLimit
                                                                   : kExitOk;
}

int cmd_experiment(const SourceFlags& src, const ParamFlags& pf, percov::RunConfig cfg,
                   std::vector<double> latencies, std::vector<std::string> methods,
                   const std::string& out_path) {
  auto [g, p] = src.load(pf);
  if (latencies.empty()) latencies = {2500, 3000, 5000, 20000};
  std::vector<percov::Method> ms;
  if (methods.empty() || (methods.size() == 1 && methods[0] == "all")) {
    ms = percov::all_methods();
  } else {
    for (const auto& m : methods) ms.push_back(percov::method_from_string(m));
  }
  std::vector<percov::ExperimentCell> cells =
      percov::run_experiment(g, p, latencies, ms, cfg);
  write_or_print(out_path, percov::experiment_csv(cells));
  return kExitOk;
}

int cmd_plot_data(const std::string& solution_path, const std::string& instance_path,
                  const std::string& out_path) {
  percov::SolutionFile s = percov::load_solution(solution_path);
  percov::InstanceFile inst = percov::load_instance(instance_path);
  write_or_print(out_path, percov::plot_data_json(inst.graph, s));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"percov — persistent coverage planning with battery-limited UAVs"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose", verbose, "diagnostics to stderr");

  // generate
  auto* gen = app.add_subcommand("generate", "write an instance JSON file");
  std::string gen_kind = "grid";
  std::string gen_preset;
  int gen_rows = 10, gen_cols = 10, gen_nodes = 100;
  double gen_edge_time = 250, gen_radius = 420, gen_side = 2500;
  int gen_station_raw = -1;
  std::uint64_t gen_seed = 1;
  std::string gen_policy = "centroid";
  ParamFlags gen_pf;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "grid | geometric")
      ->check(CLI::IsMember({"grid", "geometric"}));
  gen->add_option("--preset", gen_preset, "copy a built-in instance instead")
      ->check(CLI::IsMember(percov::preset_names()));
  gen->add_option("--rows", gen_rows, "grid rows")->check(CLI::PositiveNumber);
  gen->add_option("--cols", gen_cols, "grid cols")->check(CLI::PositiveNumber);
  gen->add_option("--edge-time", gen_edge_time, "grid edge travel time [s]")
      ->check(CLI::PositiveNumber);
  auto* gen_station_opt =
      gen->add_option("--station", gen_station_raw, "station node id (default: centroid)");
  gen->add_option("--nodes", gen_nodes, "geometric node count")->check(CLI::PositiveNumber);
  gen->add_option("--radius", gen_radius, "geometric connection radius")
      ->check(CLI::PositiveNumber);
  gen->add_option("--side", gen_side, "geometric square side")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "geometric RNG seed");
  gen->add_option("--station-policy", gen_policy, "geometric station pick")
      ->check(CLI::IsMember({"corner", "centroid"}));
  gen_pf.add(gen);
  gen->add_option("--out", gen_out, "output instance path")->required();

  // solve
  auto* sol = app.add_subcommand("solve", "solve one instance and verify by simulation");
  SourceFlags sol_src;
  sol_src.add(sol);
  ParamFlags sol_pf;
  sol_pf.add(sol);
  percov::RunConfig sol_cfg;
  std::string sol_method = "hybrid", sol_objective = "uav-count",
              sol_replication = "per-tour";
  add_run_flags(sol, sol_cfg, sol_method, sol_objective, sol_replication);
  std::string sol_out;
  sol->add_option("--out", sol_out, "solution JSON path");

  // experiment
  auto* exp = app.add_subcommand("experiment", "method x latency sweep, CSV output");
  SourceFlags exp_src;
  exp_src.add(exp);
  ParamFlags exp_pf;
  exp_pf.add(exp);
  percov::RunConfig exp_cfg;
  std::string exp_method = "hybrid", exp_objective = "uav-count",
              exp_replication = "per-tour";
  add_run_flags(exp, exp_cfg, exp_method, exp_objective, exp_replication);
  std::vector<double> exp_latencies;
  std::vector<std::string> exp_methods;
  exp->add_option("--latencies", exp_latencies,
                  "latency sweep values [s] (default 2500,3000,5000,20000)")
      ->delimiter(',');
  exp->add_option("--methods", exp_methods, "comma list or 'all'")->delimiter(',');
  exp->add_option("--trials", exp_cfg.trials, "trials per cell (seeds vary TSP restarts)")
      ->check(CLI::PositiveNumber);
  std::string exp_out;
  exp->add_option("--out", exp_out, "CSV path (default: stdout)");

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "polylines + dispatch timeline from a solution");
  std::string plot_solution, plot_instance, plot_out;
  plot->add_option("--solution", plot_solution, "solution JSON")->required();
  plot->add_option("--instance", plot_instance, "instance JSON (node coordinates)")
      ->required();
  plot->add_option("--out", plot_out, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  percov::set_verbose(verbose);

  try {
    if (gen->parsed()) {
      std::optional<int> station;
      if (gen_station_opt->count()) station = gen_station_raw;
      return cmd_generate(gen_kind, gen_preset, gen_rows, gen_cols, gen_edge_time,
                          station, gen_nodes, gen_radius, gen_side, gen_seed, gen_policy,
                          gen_pf, gen_out);
    }
    if (sol->parsed()) {
      finish_config(sol_cfg, sol_method, sol_objective, sol_replication);
      return cmd_solve(sol_src, sol_pf, sol_cfg, sol_out);
    }
    if (exp->parsed()) {
      finish_config(exp_cfg, exp_method, exp_objective, exp_replication);
      return cmd_experiment(exp_src, exp_pf, exp_cfg, exp_latencies, exp_methods, exp_out);
    }
    if (plot->parsed()) return cmd_plot_data(plot_solution, plot_instance, plot_out);
  } catch (const percov::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::logic_error& e) {
    // Verification failure or internal inconsistency: bug trap, loud abort.
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
