#pragma once

#include <cstdint>
#include <vector>

#include "percov/graph.hpp"

namespace percov {

// Closed walk anchored at the station: nodes.front() == nodes.back() ==
// station (single-node walks excepted), consecutive nodes adjacent.
struct Walk {
  std::vector<NodeId> nodes;
  Seconds total_time = 0.0;
};

// Sum of edge times along a node sequence; validates adjacency.
Seconds walk_time(const Graph& g, const std::vector<NodeId>& nodes);

// All-pairs shortest path times plus path reconstruction, used to run tour
// construction on the metric closure and expand hops back to real edges.
class MetricClosure {
 public:
  explicit MetricClosure(const Graph& g);

  Seconds dist(NodeId u, NodeId v) const {
    return dist_[static_cast<size_t>(u) * static_cast<size_t>(n_) + static_cast<size_t>(v)];
  }
  // Inclusive node sequence u..v along a shortest path (deterministic).
  std::vector<NodeId> path(NodeId u, NodeId v) const;
  int size() const { return n_; }

 private:
  int n_;
  std::vector<Seconds> dist_;
  std::vector<NodeId> parent_;  // parent_[src*n + v] in the tree rooted at src
};

// Canonical form of a closed walk: lexicographically minimal
// rotation/reflection of the cyclic node sequence (closing node dropped).
std::vector<NodeId> canonical_cycle_form(const std::vector<NodeId>& closed_walk);

// Optimal closed walk visiting all nodes (Held-Karp on the metric closure,
// hops expanded to real edges). Only for |V| <= 15.
Walk solve_tsp_exact(const Graph& g);

// Nearest-neighbor + 2-opt with a few deterministic restarts; never worse
// than the plain nearest-neighbor tour. Deterministic in seed.
Walk solve_tsp_heuristic(const Graph& g, std::uint64_t seed);

// Up to n pairwise-distinct walks (distinct canonical forms), sorted by time
// ascending. Attempt 0 is exactly solve_tsp_heuristic(g, seed); the restart
// budget is 10*n attempts, so fewer walks may be returned.
std::vector<Walk> distinct_tours(const Graph& g, int n, std::uint64_t seed);

}  // namespace percov
