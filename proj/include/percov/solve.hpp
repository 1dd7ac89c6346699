#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percov/graph.hpp"
#include "percov/lollipop.hpp"
#include "percov/scheduler.hpp"
#include "percov/setcover.hpp"
#include "percov/tours.hpp"

namespace percov {

enum class Method {
  kDijkstra,
  kTspGreedy,
  kTspLp1,
  kTspLpN,
  kLollipop,
  kHybrid,
};

std::string to_string(Method m);
Method method_from_string(const std::string& s);
std::vector<Method> all_methods();

struct RunConfig {
  Method method = Method::kHybrid;
  int tsp_count = 20;    // walks for tsp-lp-n / hybrid
  int lollipop_n = 10;   // per-anchor cap once covered (Algorithm 1's n)
  Objective objective = Objective::kUavCount;
  ReplicationMode replication = ReplicationMode::kPerTour;
  std::uint64_t seed = 1;
  double time_limit = 60.0;  // covering solver, seconds
  int trials = 1;
  LollipopOptions lollipop_opts;
  // Optional externally built lollipop pool (must match g, p.b, p.T);
  // lets experiment sweeps reuse the seed-independent enumeration.
  const std::vector<CandidateTour>* lollipop_cache = nullptr;
};

struct SolveResult {
  FeasibilityClass feas;
  std::vector<CandidateTour> pool;  // ids == positions
  Selection selection;
  Schedule schedule;
  SimReport sim;
  int num_uavs = 0;   // N
  int num_tours = 0;  // K
  double wall_seconds = 0.0;
};

// The candidate pool for a method, ids reassigned to 0..size-1:
//   dijkstra    one tour per graph edge (loops + out-and-backs)
//   tsp-greedy  greedy segmentation of one TSP walk
//   tsp-lp-1    longest segment per node of one TSP walk
//   tsp-lp-n    segment pool over tsp_count distinct TSP walks
//   lollipop    maximum lollipop tours, farthest-first collection
//   hybrid      tsp-lp-n pool united with the lollipop pool
std::vector<CandidateTour> build_pool(const Graph& g, const DistanceMap& d,
                                      const InstanceParams& p, const RunConfig& cfg);

// Full pipeline: classify, build pool, select (tsp-greedy keeps all its
// segments; other methods solve the covering program), schedule, simulate.
// Throws InfeasibleError for unreachable/uncoverable nodes and
// std::logic_error if the final simulation fails (internal bug trap).
SolveResult solve_instance(const Graph& g, const InstanceParams& p, const RunConfig& cfg);

struct PresetInstance {
  Graph graph;
  InstanceParams params;  // b = 5000, B = 11000, T = 20000
};

// Named experiment instances: "p3", "2x2", "6x6", "10x10", "grid10x10".
PresetInstance make_preset(const std::string& name);
std::vector<std::string> preset_names();

struct ExperimentCell {
  Method method = Method::kHybrid;
  Seconds latency = 0;
  int trials = 0;
  double mean_n = 0;
  double mean_k = 0;
  double mean_wall_seconds = 0;
  bool feasible = true;
};

// method x latency sweep, trial t solved with seed mix_seed(cfg.seed, t).
// The lollipop pool is built once per latency and shared across trials and
// across the lollipop/hybrid methods. Infeasible cells are marked, not
// thrown.
std::vector<ExperimentCell> run_experiment(const Graph& g, const InstanceParams& base,
                                           const std::vector<Seconds>& latencies,
                                           const std::vector<Method>& methods,
                                           const RunConfig& cfg);

// CSV with header method,latency,trials,mean_N,mean_K,mean_wall_s,status.
std::string experiment_csv(const std::vector<ExperimentCell>& cells);

}  // namespace percov
