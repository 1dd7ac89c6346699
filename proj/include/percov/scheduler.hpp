#pragma once

#include <map>
#include <string>
#include <vector>

#include "percov/graph.hpp"
#include "percov/setcover.hpp"
#include "percov/tours.hpp"

namespace percov {

// Absolute tolerance used by the simulator when comparing accumulated event
// times against the constraint bounds. Looser than kTimeEps because event
// times are sums/products of many doubles; still ~1e-11 relative at the
// time magnitudes involved.
inline constexpr double kSimEps = 1e-6;

enum class GraphSize { kSmall, kLarge };

enum class Regime {
  kSingleUav,    // small and T >= B + b: one UAV on the TSP tour suffices
  kReplicated,   // small and b <= T < B + b: k clones of the TSP tour
  kPartitioned,  // T < b, or the graph is large: cover with subgraph tours
  kInfeasible,   // some node farther than b/2 from the station
};

std::string to_string(GraphSize s);
std::string to_string(Regime r);

struct FeasibilityClass {
  bool reachable = false;
  GraphSize size = GraphSize::kSmall;
  Regime regime = Regime::kInfeasible;
};

struct Dispatch {
  int uav = 0;
  int tour = 0;
  Seconds t0 = 0;      // first departure
  Seconds period = 0;  // departs at t0, t0 + period, t0 + 2*period, ...
};

struct Schedule {
  std::vector<Dispatch> dispatches;
  int num_uavs = 0;   // N
  int num_tours = 0;  // K
};

struct SimReport {
  Seconds horizon = 0;
  std::map<NodeId, Seconds> max_age;
  int battery_violations = 0;
  int latency_violations = 0;
  bool pass = false;
};

// Regime per the decision table: unreachable -> infeasible; large ->
// partitioned; T >= B+b -> single-uav; T >= b -> replicated; else
// partitioned. tsp_time decides small vs large (<= b).
FeasibilityClass classify_instance(const Graph& g, const InstanceParams& p, Seconds tsp_time);

// Minimum UAVs keeping one tour continuously served with dispatches every T:
//   per-tour: max(1, ceil((tour_time + B) / T))
//   paper:    max(1, ceil((b + B) / T))
int replication_factor(Seconds tour_time, const InstanceParams& p,
                       ReplicationMode mode = ReplicationMode::kPerTour);
int replication_factor(const CandidateTour& t, const InstanceParams& p,
                       ReplicationMode mode = ReplicationMode::kPerTour);

// Dispatches for one tour flown by k UAVs with ids uav0 .. uav0+k-1.
// Shared period max(k*T, tour_time + B), phases evenly spaced period/k
// apart; for the nominal k this is period k*T and phases 0, T, 2T, ...
std::vector<Dispatch> tour_dispatches(const CandidateTour& t, int k, const InstanceParams& p,
                                      int uav0);

// One dispatch group per chosen tour (ascending tour id); N = sum of k_i,
// K = number of chosen tours.
Schedule build_schedule(const Selection& sel, const std::vector<CandidateTour>& pool,
                        const InstanceParams& p, ReplicationMode mode = ReplicationMode::kPerTour);

// N under a selection without building the schedule.
int uav_count(const Selection& sel, const std::vector<CandidateTour>& pool,
              const InstanceParams& p, ReplicationMode mode = ReplicationMode::kPerTour);

// 2 * max period + max tour time: spans a full steady-state cycle.
Seconds default_horizon(const Schedule& sched, const std::vector<CandidateTour>& pool);

// Replays every dispatch as mission events up to the horizon, tracking the
// age of every node (all start serviced at t = 0; the station is depot
// ground and never ages). Flags ages > T, flights > b, turnarounds < B.
// Throws std::invalid_argument on overlapping missions for one UAV or an
// unknown tour id.
SimReport simulate(const Schedule& sched, const std::vector<CandidateTour>& pool, const Graph& g,
                   const InstanceParams& p, Seconds horizon);

}  // namespace percov
