#include "percov/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace percov {

std::string to_string(GraphSize s) { return s == GraphSize::kSmall ? "small" : "large"; }

std::string to_string(Regime r) {
  switch (r) {
    case Regime::kSingleUav: return "single-uav";
    case Regime::kReplicated: return "replicated";
    case Regime::kPartitioned: return "partitioned";
    case Regime::kInfeasible: return "infeasible";
  }
  return "?";
}

FeasibilityClass classify_instance(const Graph& g, const InstanceParams& p, Seconds tsp_time) {
  FeasibilityClass fc;
  DistanceMap d = shortest_paths(g);
  fc.reachable = true;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (d.dist[static_cast<std::size_t>(v)] > p.b / 2 + kTimeEps) {
      fc.reachable = false;
      break;
    }
  }
  fc.size = tsp_time <= p.b + kTimeEps ? GraphSize::kSmall : GraphSize::kLarge;
  if (!fc.reachable) {
    fc.regime = Regime::kInfeasible;
  } else if (fc.size == GraphSize::kLarge) {
    fc.regime = Regime::kPartitioned;
  } else if (p.T >= p.B + p.b - kTimeEps) {
    fc.regime = Regime::kSingleUav;
  } else if (p.T >= p.b - kTimeEps) {
    fc.regime = Regime::kReplicated;
  } else {
    fc.regime = Regime::kPartitioned;
  }
  return fc;
}

int replication_factor(Seconds tour_time, const InstanceParams& p, ReplicationMode mode) {
  Seconds cycle = (mode == ReplicationMode::kPerTour ? tour_time : p.b) + p.B;
  int k = static_cast<int>(std::ceil(cycle / p.T - kTimeEps));
  return std::max(1, k);
}

int replication_factor(const CandidateTour& t, const InstanceParams& p, ReplicationMode mode) {
  return replication_factor(t.walk.total_time, p, mode);
}

std::vector<Dispatch> tour_dispatches(const CandidateTour& t, int k, const InstanceParams& p,
                                      int uav0) {
  if (k < 1) throw std::invalid_argument("tour_dispatches: k must be >= 1");
  Seconds period = std::max(k * p.T, t.walk.total_time + p.B);
  std::vector<Dispatch> ds;
  for (int j = 0; j < k; ++j) {
    Dispatch d;
    d.uav = uav0 + j;
    d.tour = t.id;
    d.t0 = j * (period / k);
    d.period = period;
    ds.push_back(d);
  }
  return ds;
}

namespace {

const CandidateTour& tour_by_id(const std::vector<CandidateTour>& pool, int id) {
  for (const auto& t : pool)
    if (t.id == id) return t;
  throw std::invalid_argument("unknown tour id: " + std::to_string(id));
}

}  // namespace

Schedule build_schedule(const Selection& sel, const std::vector<CandidateTour>& pool,
                        const InstanceParams& p, ReplicationMode mode) {
  Schedule sched;
  std::vector<int> chosen = sel.chosen;
  std::sort(chosen.begin(), chosen.end());
  int uav0 = 0;
  for (int id : chosen) {
    const CandidateTour& t = tour_by_id(pool, id);
    int k = replication_factor(t, p, mode);
    auto ds = tour_dispatches(t, k, p, uav0);
    sched.dispatches.insert(sched.dispatches.end(), ds.begin(), ds.end());
    uav0 += k;
  }
  sched.num_uavs = uav0;
  sched.num_tours = static_cast<int>(chosen.size());
  return sched;
}

int uav_count(const Selection& sel, const std::vector<CandidateTour>& pool,
              const InstanceParams& p, ReplicationMode mode) {
  int n = 0;
  for (int id : sel.chosen) n += replication_factor(tour_by_id(pool, id), p, mode);
  return n;
}

Seconds default_horizon(const Schedule& sched, const std::vector<CandidateTour>& pool) {
  Seconds max_period = 0;
  Seconds max_time = 0;
  for (const auto& d : sched.dispatches) {
    max_period = std::max(max_period, d.period);
    max_time = std::max(max_time, tour_by_id(pool, d.tour).walk.total_time);
  }
  return 2 * max_period + max_time;
}

SimReport simulate(const Schedule& sched, const std::vector<CandidateTour>& pool, const Graph& g,
                   const InstanceParams& p, Seconds horizon) {
  SimReport rep;
  rep.horizon = horizon;

  struct Mission {
    Seconds start;
    Seconds end;
    int tour;
  };
  std::map<int, std::vector<Mission>> by_uav;
  std::map<int, std::vector<Seconds>> offsets;  // per tour id: cumulative walk offsets

  for (const auto& d : sched.dispatches) {
    const CandidateTour& t = tour_by_id(pool, d.tour);
    if (!offsets.count(d.tour)) {
      std::vector<Seconds> off{0};
      for (std::size_t i = 1; i < t.walk.nodes.size(); ++i)
        off.push_back(off.back() + g.edge_time(t.walk.nodes[i - 1], t.walk.nodes[i]));
      offsets[d.tour] = std::move(off);
    }
    if (d.period <= 0) throw std::invalid_argument("dispatch period must be positive");
    for (Seconds s = d.t0; s <= horizon + kSimEps; s += d.period)
      by_uav[d.uav].push_back({s, s + t.walk.total_time, d.tour});
  }

  // Per-UAV checks: no overlap, full recharge between missions, flight <= b.
  std::map<NodeId, std::vector<Seconds>> visits;
  for (auto& [uav, ms] : by_uav) {
    std::sort(ms.begin(), ms.end(), [](const Mission& a, const Mission& b) {
      return a.start < b.start;
    });
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const CandidateTour& t = tour_by_id(pool, ms[i].tour);
      if (t.walk.total_time > p.b + kSimEps) ++rep.battery_violations;
      if (i > 0) {
        if (ms[i].start < ms[i - 1].end - kSimEps)
          throw std::invalid_argument("overlapping missions for uav " + std::to_string(uav));
        if (ms[i].start - ms[i - 1].end < p.B - kSimEps) ++rep.battery_violations;
      }
      const auto& off = offsets[ms[i].tour];
      for (std::size_t j = 0; j < off.size(); ++j) {
        Seconds at = ms[i].start + off[j];
        if (at <= horizon + kSimEps) visits[t.walk.nodes[j]].push_back(at);
      }
    }
  }

  for (NodeId v = 0; v < g.size(); ++v) {
    if (v == g.station()) {
      rep.max_age[v] = 0;  // depot ground: continuously serviced
      continue;
    }
    auto& vs = visits[v];
    std::sort(vs.begin(), vs.end());
    Seconds worst = 0;
    Seconds prev = 0;  // all nodes serviced at t = 0
    for (Seconds at : vs) {
      worst = std::max(worst, at - prev);
      prev = at;
    }
    worst = std::max(worst, horizon - prev);
    rep.max_age[v] = worst;
    if (worst > p.T + kSimEps) {
      // Count each excessive gap as one violation.
      prev = 0;
      for (Seconds at : vs) {
        if (at - prev > p.T + kSimEps) ++rep.latency_violations;
        prev = at;
      }
      if (horizon - prev > p.T + kSimEps) ++rep.latency_violations;
    }
  }

  rep.pass = rep.battery_violations == 0 && rep.latency_violations == 0;
  return rep;
}

}  // namespace percov
