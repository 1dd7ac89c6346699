#pragma once

#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace percov {

using NodeId = int;
using Seconds = double;

// Tolerance used by every feasibility comparison against b, B or T
// (x <= limit + kTimeEps). Grid arithmetic is exact in doubles; geometric
// instances accumulate rounding in path sums.
constexpr Seconds kTimeEps = 1e-9;

// splitmix64 step; used to derive independent sub-seeds deterministically.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

struct Node {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct EdgeRec {
  NodeId u = 0;
  NodeId v = 0;
  Seconds time = 0.0;
};

// Undirected weighted graph with a designated charging-station node.
// Construction enforces: ids are exactly 0..n-1, no self loops, no duplicate
// edges, strictly positive finite travel times, connected.
class Graph {
 public:
  Graph(std::vector<Node> nodes, std::vector<EdgeRec> edges, NodeId station);

  int size() const { return static_cast<int>(nodes_.size()); }
  NodeId station() const { return station_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<EdgeRec>& edges() const { return edges_; }
  const Node& node(NodeId v) const { return nodes_[static_cast<size_t>(v)]; }

  // Neighbors sorted by id.
  const std::vector<std::pair<NodeId, Seconds>>& neighbors(NodeId v) const {
    return adj_[static_cast<size_t>(v)];
  }
  bool adjacent(NodeId u, NodeId v) const;
  // Travel time of edge (u, v); throws if the edge does not exist.
  Seconds edge_time(NodeId u, NodeId v) const;

 private:
  std::vector<Node> nodes_;
  std::vector<EdgeRec> edges_;
  std::vector<std::vector<std::pair<NodeId, Seconds>>> adj_;
  NodeId station_ = 0;
};

// Flight/recharge/latency parameters. b = endurance per charge, B = recharge
// time, T = per-node visit deadline. B > b is allowed and typical.
struct InstanceParams {
  Seconds b = 0;
  Seconds B = 0;
  Seconds T = 0;
  // Optional per-node deadlines; the planner requires them uniform (== T).
  std::map<NodeId, Seconds> per_node_deadline;

  void validate() const;  // throws std::invalid_argument
};

// Single-source shortest paths from the station, with the predecessor tree.
struct DistanceMap {
  NodeId station = 0;
  std::vector<Seconds> dist;
  std::vector<NodeId> parent;  // parent[station] == -1

  // Inclusive node sequence station..v along tree edges.
  std::vector<NodeId> path_from_station(NodeId v) const;
};

enum class StationPolicy { kCornerMost, kCentroidMost };

// rows x cols 4-connected grid, uniform edge time, node ids r*cols + c,
// coordinates in seconds-at-unit-speed.
Graph build_grid(int rows, int cols, Seconds edge_time, NodeId station);

// Node nearest the grid centroid (smallest id on ties).
NodeId grid_centroid_node(int rows, int cols);

// n points uniform in [0,side]^2, edges between pairs within `radius`
// weighted by Euclidean distance (unit speed). Deterministic in seed;
// disconnected draws are retried with fresh sub-seeds (bounded).
Graph build_random_geometric(int n, double radius, double side,
                             std::uint64_t seed, StationPolicy policy);

// Dijkstra from the station. Deterministic: on equal distance the smaller
// parent id wins.
DistanceMap shortest_paths(const Graph& g);

// Library-wide diagnostics switch (CLI --verbose); messages go to stderr.
void set_verbose(bool on);
bool verbose();
void vlog(const std::string& msg);

// Thrown when an instance (or candidate pool) cannot cover every node.
class InfeasibleError : public std::exception {
 public:
  InfeasibleError(std::string what, std::vector<NodeId> nodes)
      : what_(std::move(what)), nodes_(std::move(nodes)) {}
  const char* what() const noexcept override { return what_.c_str(); }
  const std::vector<NodeId>& nodes() const { return nodes_; }

 private:
  std::string what_;
  std::vector<NodeId> nodes_;
};

}  // namespace percov
