#pragma once

#include <string>
#include <vector>

#include "percov/graph.hpp"
#include "percov/tsp.hpp"

namespace percov {

// Contiguous slice u_0..u_m of a TSP walk, with cumulative time offsets
// from u_0 (offsets[0] == 0, offsets.back() == duration).
struct Segment {
  std::vector<NodeId> nodes;
  std::vector<Seconds> offsets;
  Seconds duration = 0.0;
};

enum class TourOrigin { kTspGreedy, kTspLp, kLollipop, kDijkstra };

const char* to_string(TourOrigin o);
TourOrigin tour_origin_from_string(const std::string& s);

// A dispatchable closed walk: station -> ... -> station, with first-arrival
// times and the subset of nodes reached within the deadline T.
// Invariants: walk.total_time <= b; every coverage node's arrival <= T.
struct CandidateTour {
  int id = -1;
  TourOrigin origin = TourOrigin::kTspLp;
  Walk walk;
  std::vector<std::pair<NodeId, Seconds>> arrival;  // sorted by node id
  std::vector<NodeId> coverage;                     // sorted
  Seconds arrival_of(NodeId v) const;               // throws if not visited
  bool covers(NodeId v) const;
};

// Build a segment from walk positions [i, j] (inclusive).
Segment make_segment(const Graph& g, const std::vector<NodeId>& walk_nodes,
                     size_t i, size_t j);

// Deadline and battery checks for a segment dispatched from the station:
//   d(u_0) + duration <= T          (first-arrival deadline)
//   d(u_0) + d(u_m) + duration <= b (battery for stem + segment + return)
// Both comparisons non-strict.
bool is_valid_segment(const Segment& s, const DistanceMap& d, const InstanceParams& p);

// Materialize a tour for any closed walk (arrivals, coverage under p.T).
CandidateTour tour_from_walk(std::vector<NodeId> walk_nodes, const Graph& g,
                             const InstanceParams& p, TourOrigin origin, int id);

// Stem (shortest path) + segment + return stem. Throws if s is invalid.
CandidateTour segment_to_tour(const Segment& s, const Graph& g, const DistanceMap& d,
                              const InstanceParams& p);

// Ordered pass over w: repeatedly take the longest valid prefix of the
// unconsumed walk. Throws InfeasibleError if some node admits no valid
// segment. Together the tours cover every walk node.
std::vector<CandidateTour> segment_greedy(const Walk& w, const Graph& g,
                                          const DistanceMap& d, const InstanceParams& p);

// For each distinct non-station node (first occurrence in w), the maximal
// valid segment starting there; starts with no valid segment are dropped.
std::vector<CandidateTour> longest_segments_per_node(const Walk& w, const Graph& g,
                                                     const DistanceMap& d,
                                                     const InstanceParams& p);

// Union of longest_segments_per_node over several walks, deduplicated by
// coverage set (fastest tour kept).
std::vector<CandidateTour> multi_tsp_pool(const std::vector<Walk>& ws, const Graph& g,
                                          const DistanceMap& d, const InstanceParams& p);

// The |E| baseline closed walks: one loop per non-tree edge (station -> u ->
// v -> station via tree paths) and one out-and-back per non-station node.
// Unfiltered; loop orientation picks the larger coverage under p.
std::vector<Walk> dijkstra_closed_walks(const Graph& g, const DistanceMap& d,
                                        const InstanceParams& p);

// dijkstra_closed_walks filtered to battery-feasible tours (time <= b).
std::vector<CandidateTour> dijkstra_loop_pool(const Graph& g, const DistanceMap& d,
                                              const InstanceParams& p);

}  // namespace percov
