#pragma once

#include <string>
#include <vector>

#include "percov/graph.hpp"
#include "percov/tours.hpp"

namespace percov {

// Objective for the covering program. tour-count is the plain set-cover
// objective (minimize K); uav-count weights each tour by its replication
// factor (minimize N); total-time and total-card are the two classic
// overlap-reducing variants.
enum class Objective {
  kTourCount,
  kUavCount,
  kTotalTime,
  kTotalCard,
};

// How the replication factor k_i is derived from a tour.
//   kPerTour: k_i = max(1, ceil((time(tau_i) + B) / T))
//   kPaper:   k_i = max(1, ceil((b + B) / T))        (uniform worst case)
enum class ReplicationMode {
  kPerTour,
  kPaper,
};

enum class Proof {
  kOptimal,
  kGreedy,
  kTimeLimitedIncumbent,
};

std::string to_string(Objective obj);
Objective objective_from_string(const std::string& s);
std::string to_string(ReplicationMode mode);
ReplicationMode replication_from_string(const std::string& s);
std::string to_string(Proof proof);

struct CoverSet {
  int tour_id = -1;
  std::vector<NodeId> coverage;  // sorted ascending
  double weight = 1.0;           // > 0
};

struct CoverInstance {
  std::vector<NodeId> universe;  // sorted ascending
  std::vector<CoverSet> sets;
};

struct Selection {
  std::vector<int> chosen;  // tour ids, sorted ascending
  double objective_value = 0.0;
  Proof proof = Proof::kGreedy;
};

// Weight of one tour under an objective.
double objective_weight(const CandidateTour& t, Objective obj, const InstanceParams& p,
                        ReplicationMode mode = ReplicationMode::kPerTour);

// Standard weighted greedy: repeatedly pick the set maximizing
// (newly covered)/weight, ties broken by smaller tour id.
// Throws InfeasibleError when some universe element is in no set.
Selection greedy_cover(const CoverInstance& ci);

// Exact branch-and-bound with a greedy warm start. Branches on the
// least-covered uncovered element; prunes with a disjoint-witness lower
// bound. Returns proof = optimal when the search finishes in time,
// otherwise the best incumbent with proof = time-limited-incumbent.
Selection exact_cover(const CoverInstance& ci, double time_limit_seconds = 60.0);

// Builds the covering program over a candidate pool: one constraint per
// vertex of g, one binary variable per tour.
CoverInstance make_cover_instance(const std::vector<CandidateTour>& pool, const Graph& g,
                                  Objective obj, const InstanceParams& p,
                                  ReplicationMode mode = ReplicationMode::kPerTour);

// make_cover_instance + exact_cover.
Selection solve_cover(const std::vector<CandidateTour>& pool, const Graph& g, Objective obj,
                      const InstanceParams& p, ReplicationMode mode = ReplicationMode::kPerTour,
                      double time_limit_seconds = 60.0);

// Serializes a CoverInstance in LP text format (CPLEX-style):
//   Minimize / obj: <w> x<id> + ... / Subject To / c<node>: x<id> + ... >= 1
//   / Binaries / x<id> ... / End
std::string export_lp(const CoverInstance& ci);

}  // namespace percov
