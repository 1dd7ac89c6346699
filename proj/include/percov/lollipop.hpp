#pragma once

#include <vector>

#include "percov/graph.hpp"
#include "percov/tours.hpp"

namespace percov {

// Uniqueness key of a cycle: its node set, sorted. Two lollipops are the
// same tour iff their cycles visit exactly the same nodes.
using CycleKey = std::vector<NodeId>;

CycleKey cycle_key(const std::vector<NodeId>& cycle);

// Stem from the station to an anchor node plus an outward cycle through the
// anchor. cycle[0] is the anchor; consecutive entries are adjacent and the
// last entry closes back to the anchor. Degenerate forms: {anchor, a} is a
// 2-node spur (is_spur), {anchor} alone is a plain out-and-back.
// Every cycle node u satisfies dist[u] >= dist[anchor].
struct LollipopTour {
  NodeId anchor = -1;
  std::vector<NodeId> stem;   // station .. anchor, inclusive
  std::vector<NodeId> cycle;  // may revisit nodes after re-optimization
  bool is_spur = false;
  // Realized walk (stem + cycle + reversed stem). Seeds from initial_cycle
  // carry a default tour; expand_all and the pool attach real ones.
  CandidateTour tour;
};

struct LollipopOptions {
  // Enumeration states per anchor; exceeding truncates (and logs) rather
  // than failing.
  long long state_budget = 50000;
  // Keep at most this many maximal tours per anchor, smallest time first
  // (0 = keep all).
  int max_tours = 0;
};

// Walk time of the realized tour: 2*dist[anchor] + cycle edges.
Seconds lollipop_time(const LollipopTour& t, const Graph& g, const DistanceMap& d);

// Seed tours at v: one triangle v-a-c per unordered pair of outward
// neighbors with edge (a, c); if no pair closes, one 2-node spur per
// outward neighbor; empty when v has no outward neighbor. Seeds are not
// feasibility-filtered (battery/latency are enforced during expansion).
std::vector<LollipopTour> initial_cycle(const Graph& g, NodeId v, const DistanceMap& d);

// Splice candidates: nodes u outside the cycle, adjacent to two consecutive
// cycle nodes, with dist[u] >= min dist of that pair. No feasibility check.
std::vector<NodeId> expand_candidates(const LollipopTour& t, const Graph& g,
                                      const DistanceMap& d);

// True when no candidate from expand_candidates admits a feasible splice
// (time <= b and first arrivals <= T in either cycle orientation).
bool is_maximal(const LollipopTour& t, const Graph& g, const DistanceMap& d,
                const InstanceParams& p);

// All maximum lollipop tours anchored at v: every feasible outward simple
// cycle through v (exhaustive, budget-capped), deduplicated by CycleKey
// keeping the fastest ordering, filtered to splice-maximal tours; when no
// cycle with >= 3 nodes is feasible, feasible 2-node spurs stand in.
// Output sorted by (time, cycle sequence).
std::vector<LollipopTour> expand_all(const Graph& g, NodeId v, const DistanceMap& d,
                                     const InstanceParams& p, const LollipopOptions& opt = {});

// Re-tours the cycle's node set with a TSP heuristic restricted to the
// outward region (dist >= dist[anchor]); adopts the reorder when strictly
// shorter, then absorbs any splice candidates that became feasible, looping
// until nothing changes. Never returns an infeasible tour.
LollipopTour reoptimize_cycle(const LollipopTour& t, const Graph& g, const DistanceMap& d,
                              const InstanceParams& p);

// Pool collection, farthest node first: while some node is uncovered, keep
// every maximal tour of the current anchor; once covered, keep at most n
// per anchor. Anchors no tour reaches fall back to a plain out-and-back.
// Tours are re-optimized, deduplicated by coverage (fastest kept) and get
// sequential ids. Throws InfeasibleError naming nodes no tour can cover.
std::vector<CandidateTour> collect_lollipop_pool(const Graph& g, const DistanceMap& d,
                                                 const InstanceParams& p, int n,
                                                 const LollipopOptions& opt = {});

}  // namespace percov
