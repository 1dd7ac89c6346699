#pragma once

#include <string>

#include "percov/graph.hpp"
#include "percov/scheduler.hpp"
#include "percov/solve.hpp"

namespace percov {

struct InstanceFile {
  Graph graph;
  InstanceParams params;
  bool has_params = false;  // params block present in the file
};

// JSON: {"nodes":[{"id","x","y"}],"edges":[{"u","v","time"}],"station",
// "params":{"b","B","T"}?}. Unknown fields warn (vlog); structural problems
// throw std::runtime_error; graph invariants are enforced by Graph itself.
InstanceFile load_instance(const std::string& path);
void save_instance(const std::string& path, const Graph& g, const InstanceParams& p);

std::string instance_to_json(const Graph& g, const InstanceParams& p);
InstanceFile instance_from_json(const std::string& text);

// Solution files embed the verified schedule: params, method, tours (walk,
// arrivals, coverage), dispatches, N, K, proof and the SimReport.
std::string solution_to_json(const Graph& g, const InstanceParams& p, const RunConfig& cfg,
                             const SolveResult& r);
void save_solution(const std::string& path, const Graph& g, const InstanceParams& p,
                   const RunConfig& cfg, const SolveResult& r);

// Parsed-back subset of a solution file sufficient for plot data.
struct SolutionFile {
  InstanceParams params;
  std::vector<CandidateTour> tours;  // ids, origins, walks, arrivals, coverage
  std::vector<Dispatch> dispatches;
  int num_uavs = 0;
  int num_tours = 0;
};

SolutionFile solution_from_json(const std::string& text);
SolutionFile load_solution(const std::string& path);

// Plot data: one polyline of (x, y) points per tour in the solution plus
// the dispatch timeline rows.
std::string plot_data_json(const Graph& g, const SolutionFile& s);

}  // namespace percov
