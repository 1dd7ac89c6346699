#include "percov/tours.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace percov {

const char* to_string(TourOrigin o) {
  switch (o) {
    case TourOrigin::kTspGreedy: return "tsp-greedy";
    case TourOrigin::kTspLp: return "tsp-lp";
    case TourOrigin::kLollipop: return "lollipop";
    case TourOrigin::kDijkstra: return "dijkstra";
  }
  return "?";
}

TourOrigin tour_origin_from_string(const std::string& s) {
  if (s == "tsp-greedy") return TourOrigin::kTspGreedy;
  if (s == "tsp-lp") return TourOrigin::kTspLp;
  if (s == "lollipop") return TourOrigin::kLollipop;
  if (s == "dijkstra") return TourOrigin::kDijkstra;
  throw std::invalid_argument("unknown tour origin: " + s);
}

Seconds CandidateTour::arrival_of(NodeId v) const {
  auto it = std::lower_bound(arrival.begin(), arrival.end(), v,
                             [](const auto& pr, NodeId x) { return pr.first < x; });
  if (it == arrival.end() || it->first != v)
    throw std::invalid_argument("tour does not visit node " + std::to_string(v));
  return it->second;
}

bool CandidateTour::covers(NodeId v) const {
  return std::binary_search(coverage.begin(), coverage.end(), v);
}

Segment make_segment(const Graph& g, const std::vector<NodeId>& walk_nodes,
                     size_t i, size_t j) {
  if (i > j || j >= walk_nodes.size())
    throw std::invalid_argument("make_segment: bad slice");
  Segment s;
  s.nodes.assign(walk_nodes.begin() + static_cast<long>(i),
                 walk_nodes.begin() + static_cast<long>(j) + 1);
  s.offsets.resize(s.nodes.size());
  s.offsets[0] = 0.0;
  for (size_t k = 1; k < s.nodes.size(); ++k)
    s.offsets[k] = s.offsets[k - 1] + g.edge_time(s.nodes[k - 1], s.nodes[k]);
  s.duration = s.offsets.back();
  return s;
}

bool is_valid_segment(const Segment& s, const DistanceMap& d, const InstanceParams& p) {
  if (s.nodes.empty()) return false;
  Seconds d0 = d.dist[static_cast<size_t>(s.nodes.front())];
  Seconds dm = d.dist[static_cast<size_t>(s.nodes.back())];
  if (d0 + s.duration > p.T + kTimeEps) return false;
  if (d0 + dm + s.duration > p.b + kTimeEps) return false;
  return true;
}

CandidateTour tour_from_walk(std::vector<NodeId> walk_nodes, const Graph& g,
                             const InstanceParams& p, TourOrigin origin, int id) {
  CandidateTour t;
  t.id = id;
  t.origin = origin;
  t.walk.nodes = std::move(walk_nodes);
  std::map<NodeId, Seconds> first;
  Seconds clock = 0.0;
  first[t.walk.nodes.front()] = 0.0;
  for (size_t i = 1; i < t.walk.nodes.size(); ++i) {
    clock += g.edge_time(t.walk.nodes[i - 1], t.walk.nodes[i]);
    first.emplace(t.walk.nodes[i], clock);  // keeps the earliest arrival
  }
  t.walk.total_time = clock;
  t.arrival.assign(first.begin(), first.end());
  for (const auto& [v, a] : t.arrival)
    if (a <= p.T + kTimeEps) t.coverage.push_back(v);
  return t;
}

CandidateTour segment_to_tour(const Segment& s, const Graph& g, const DistanceMap& d,
                              const InstanceParams& p) {
  if (!is_valid_segment(s, d, p))
    throw std::invalid_argument("segment_to_tour: invalid segment");
  std::vector<NodeId> walk = d.path_from_station(s.nodes.front());
  walk.insert(walk.end(), s.nodes.begin() + 1, s.nodes.end());
  std::vector<NodeId> back = d.path_from_station(s.nodes.back());
  for (auto it = back.rbegin() + 1; it != back.rend(); ++it) walk.push_back(*it);
  return tour_from_walk(std::move(walk), g, p, TourOrigin::kTspLp, -1);
}

namespace {

// Largest j >= i such that walk[i..j] is a valid segment, or i-1 if none.
// The deadline constraint is monotone in j (durations grow), the battery
// constraint is not (d(u_m) varies), so scan everything the deadline allows.
long longest_valid_end(const std::vector<NodeId>& walk, const Graph& g,
                       const DistanceMap& d, const InstanceParams& p, size_t i) {
  Seconds d0 = d.dist[static_cast<size_t>(walk[i])];
  Seconds dur = 0.0;
  long best = -1;
  for (size_t j = i; j < walk.size(); ++j) {
    if (j > i) dur += g.edge_time(walk[j - 1], walk[j]);
    if (d0 + dur > p.T + kTimeEps) break;
    Seconds dm = d.dist[static_cast<size_t>(walk[j])];
    if (d0 + dm + dur <= p.b + kTimeEps) best = static_cast<long>(j);
  }
  return best < 0 ? static_cast<long>(i) - 1 : best;
}

CandidateTour trivial_station_tour(const Graph& g, const InstanceParams& p,
                                   TourOrigin origin) {
  return tour_from_walk({g.station()}, g, p, origin, 0);
}

}  // namespace

std::vector<CandidateTour> segment_greedy(const Walk& w, const Graph& g,
                                          const DistanceMap& d, const InstanceParams& p) {
  if (g.size() == 1) return {trivial_station_tour(g, p, TourOrigin::kTspGreedy)};
  std::vector<CandidateTour> out;
  const size_t last = w.nodes.size() - 1;  // closing station position
  size_t i = 0;
  while (i < last) {
    long j = longest_valid_end(w.nodes, g, d, p, i);
    if (j < static_cast<long>(i))
      throw InfeasibleError("no valid segment starts at node " + std::to_string(w.nodes[i]) +
                                " (unreachable within constraints)",
                            {w.nodes[i]});
    Segment s = make_segment(g, w.nodes, i, static_cast<size_t>(j));
    CandidateTour t = segment_to_tour(s, g, d, p);
    t.origin = TourOrigin::kTspGreedy;
    t.id = static_cast<int>(out.size());
    out.push_back(std::move(t));
    i = static_cast<size_t>(j) + 1;
  }
  return out;
}

std::vector<CandidateTour> longest_segments_per_node(const Walk& w, const Graph& g,
                                                     const DistanceMap& d,
                                                     const InstanceParams& p) {
  if (g.size() == 1) return {trivial_station_tour(g, p, TourOrigin::kTspLp)};
  std::vector<CandidateTour> out;
  std::vector<bool> seen(static_cast<size_t>(g.size()), false);
  for (size_t i = 0; i < w.nodes.size(); ++i) {
    NodeId u = w.nodes[i];
    if (u == g.station() || seen[static_cast<size_t>(u)]) continue;
    seen[static_cast<size_t>(u)] = true;
    long j = longest_valid_end(w.nodes, g, d, p, i);
    if (j < static_cast<long>(i)) {
      vlog("longest_segments_per_node: no valid segment starts at node " + std::to_string(u));
      continue;
    }
    Segment s = make_segment(g, w.nodes, i, static_cast<size_t>(j));
    CandidateTour t = segment_to_tour(s, g, d, p);
    t.id = static_cast<int>(out.size());
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<CandidateTour> multi_tsp_pool(const std::vector<Walk>& ws, const Graph& g,
                                          const DistanceMap& d, const InstanceParams& p) {
  std::map<std::vector<NodeId>, CandidateTour> by_coverage;
  for (const Walk& w : ws) {
    for (CandidateTour& t : longest_segments_per_node(w, g, d, p)) {
      auto it = by_coverage.find(t.coverage);
      if (it == by_coverage.end()) {
        by_coverage.emplace(t.coverage, std::move(t));
      } else if (t.walk.total_time < it->second.walk.total_time - kTimeEps) {
        it->second = std::move(t);  // same coverage, keep the fastest tour
      }
    }
  }
  std::vector<CandidateTour> out;
  out.reserve(by_coverage.size());
  for (auto& [cov, t] : by_coverage) {
    t.id = static_cast<int>(out.size());
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Walk> dijkstra_closed_walks(const Graph& g, const DistanceMap& d,
                                        const InstanceParams& p) {
  std::vector<Walk> out;
  auto is_tree_edge = [&](NodeId u, NodeId v) {
    return d.parent[static_cast<size_t>(u)] == v || d.parent[static_cast<size_t>(v)] == u;
  };
  auto loop_walk = [&](NodeId u, NodeId v) {
    std::vector<NodeId> nodes = d.path_from_station(u);
    std::vector<NodeId> back = d.path_from_station(v);
    for (auto it = back.rbegin(); it != back.rend(); ++it) nodes.push_back(*it);
    Walk w;
    w.total_time = walk_time(g, nodes);
    w.nodes = std::move(nodes);
    return w;
  };
  for (const EdgeRec& e : g.edges()) {
    if (is_tree_edge(e.u, e.v)) continue;
    Walk a = loop_walk(e.u, e.v);
    Walk b = loop_walk(e.v, e.u);
    // Same length either way; keep the orientation covering more.
    size_t ca = tour_from_walk(a.nodes, g, p, TourOrigin::kDijkstra, -1).coverage.size();
    size_t cb = tour_from_walk(b.nodes, g, p, TourOrigin::kDijkstra, -1).coverage.size();
    out.push_back(cb > ca ? std::move(b) : std::move(a));
  }
  for (NodeId v = 0; v < g.size(); ++v) {
    if (v == g.station()) continue;
    std::vector<NodeId> path = d.path_from_station(v);
    std::vector<NodeId> nodes = path;
    for (auto it = path.rbegin() + 1; it != path.rend(); ++it) nodes.push_back(*it);
    Walk w;
    w.total_time = walk_time(g, nodes);
    w.nodes = std::move(nodes);
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<CandidateTour> dijkstra_loop_pool(const Graph& g, const DistanceMap& d,
                                              const InstanceParams& p) {
  if (g.size() == 1) return {trivial_station_tour(g, p, TourOrigin::kDijkstra)};
  std::vector<CandidateTour> out;
  for (const Walk& w : dijkstra_closed_walks(g, d, p)) {
    if (w.total_time > p.b + kTimeEps) continue;
    CandidateTour t = tour_from_walk(w.nodes, g, p, TourOrigin::kDijkstra,
                                     static_cast<int>(out.size()));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace percov
