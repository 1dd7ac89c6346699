#include "percov/lollipop.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <utility>

namespace percov {

CycleKey cycle_key(const std::vector<NodeId>& cycle) {
  CycleKey k(cycle.begin(), cycle.end());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

namespace {

Seconds cycle_time(const Graph& g, const std::vector<NodeId>& cycle) {
  if (cycle.size() < 2) return 0;
  Seconds t = 0;
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i) t += g.edge_time(cycle[i], cycle[i + 1]);
  t += g.edge_time(cycle.back(), cycle.front());
  return t;
}

std::vector<NodeId> full_walk(const DistanceMap& d, const std::vector<NodeId>& cycle) {
  std::vector<NodeId> stem = d.path_from_station(cycle.front());
  std::vector<NodeId> walk = stem;
  for (std::size_t i = 1; i < cycle.size(); ++i) walk.push_back(cycle[i]);
  auto it = stem.rbegin();
  if (walk.back() == stem.back()) ++it;  // plain out-and-back: no closing hop
  for (; it != stem.rend(); ++it) walk.push_back(*it);
  return walk;
}

struct Oriented {
  std::vector<NodeId> cycle;
  Seconds total_time = 0;
  Seconds max_first_arrival = 0;
};

// Max over cycle nodes of the first arrival when the tour runs stem then
// cycle in the given order.
Seconds max_first_arrival(const Graph& g, const DistanceMap& d,
                          const std::vector<NodeId>& cycle) {
  std::map<NodeId, Seconds> first;
  Seconds at = d.dist[static_cast<std::size_t>(cycle.front())];
  first[cycle.front()] = at;
  for (std::size_t i = 1; i < cycle.size(); ++i) {
    at += g.edge_time(cycle[i - 1], cycle[i]);
    first.emplace(cycle[i], at);
  }
  Seconds worst = 0;
  for (const auto& [v, a] : first) worst = std::max(worst, a);
  return worst;
}

// Battery + latency check; both cycle orientations tried, the feasible one
// with the smaller worst first-arrival kept (forward on ties).
std::optional<Oriented> orient_feasible(const Graph& g, const DistanceMap& d,
                                        const InstanceParams& p,
                                        const std::vector<NodeId>& cycle) {
  Seconds total = 2 * d.dist[static_cast<std::size_t>(cycle.front())] + cycle_time(g, cycle);
  if (total > p.b + kTimeEps) return std::nullopt;

  Seconds fwd = max_first_arrival(g, d, cycle);
  std::vector<NodeId> rev;
  rev.reserve(cycle.size());
  rev.push_back(cycle.front());
  for (std::size_t i = cycle.size(); i-- > 1;) rev.push_back(cycle[i]);
  Seconds bwd = max_first_arrival(g, d, rev);

  bool fok = fwd <= p.T + kTimeEps;
  bool bok = bwd <= p.T + kTimeEps;
  if (!fok && !bok) return std::nullopt;
  Oriented o;
  o.total_time = total;
  if (fok && (!bok || fwd <= bwd)) {
    o.cycle = cycle;
    o.max_first_arrival = fwd;
  } else {
    o.cycle = rev;
    o.max_first_arrival = bwd;
  }
  return o;
}

void attach_tour(LollipopTour* t, const Graph& g, const DistanceMap& d,
                 const InstanceParams& p) {
  t->tour = tour_from_walk(full_walk(d, t->cycle), g, p, TourOrigin::kLollipop, t->tour.id);
}

LollipopTour make_lollipop(const Graph& g, const DistanceMap& d, const InstanceParams& p,
                           NodeId v, std::vector<NodeId> oriented_cycle) {
  LollipopTour t;
  t.anchor = v;
  t.stem = d.path_from_station(v);
  t.cycle = std::move(oriented_cycle);
  t.is_spur = t.cycle.size() == 2;
  attach_tour(&t, g, d, p);
  return t;
}

std::pair<std::vector<Seconds>, std::vector<NodeId>> restricted_dijkstra(
    const Graph& g, NodeId src, const std::vector<char>& allowed) {
  const Seconds inf = std::numeric_limits<Seconds>::infinity();
  std::vector<Seconds> dist(static_cast<std::size_t>(g.size()), inf);
  std::vector<NodeId> par(static_cast<std::size_t>(g.size()), -1);
  using QE = std::pair<Seconds, NodeId>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> q;
  dist[static_cast<std::size_t>(src)] = 0;
  q.push({0, src});
  while (!q.empty()) {
    auto [du, u] = q.top();
    q.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& [w, t] : g.neighbors(u)) {
      if (!allowed[static_cast<std::size_t>(w)]) continue;
      Seconds nd = du + t;
      Seconds& dw = dist[static_cast<std::size_t>(w)];
      NodeId& pw = par[static_cast<std::size_t>(w)];
      if (nd < dw) {
        dw = nd;
        pw = u;
        q.push({nd, w});
      } else if (nd == dw && u < pw) {
        pw = u;
      }
    }
  }
  return {std::move(dist), std::move(par)};
}

// First feasible single-node splice of u into the cycle, scanning insertion
// positions in order.
std::optional<Oriented> try_splice(const Graph& g, const DistanceMap& d,
                                   const InstanceParams& p, const std::vector<NodeId>& cycle,
                                   NodeId u) {
  const std::size_t m = cycle.size();
  for (std::size_t i = 0; i < m; ++i) {
    NodeId a = cycle[i];
    NodeId b = cycle[(i + 1) % m];
    if (a == b) continue;
    if (!g.adjacent(u, a) || !g.adjacent(u, b)) continue;
    Seconds mind = std::min(d.dist[static_cast<std::size_t>(a)],
                            d.dist[static_cast<std::size_t>(b)]);
    if (d.dist[static_cast<std::size_t>(u)] < mind - kTimeEps) continue;
    std::vector<NodeId> nc = cycle;
    nc.insert(nc.begin() + static_cast<std::ptrdiff_t>(i) + 1, u);
    if (auto o = orient_feasible(g, d, p, nc)) return o;
  }
  return std::nullopt;
}

std::vector<NodeId> outward_neighbors(const Graph& g, const DistanceMap& d, NodeId v) {
  std::vector<NodeId> out;
  for (const auto& [a, t] : g.neighbors(v)) {
    (void)t;
    if (d.dist[static_cast<std::size_t>(a)] >=
        d.dist[static_cast<std::size_t>(v)] - kTimeEps)
      out.push_back(a);
  }
  return out;
}

// Exhaustive DFS over outward simple cycles through the anchor. Each
// undirected cycle is visited once (second node id < last node id);
// recorded per node set with the fastest ordering.
struct CycleEnum {
  const Graph& g;
  const DistanceMap& d;
  const InstanceParams& p;
  NodeId v;
  Seconds cycle_budget;
  std::vector<Seconds> rdist;  // to-anchor distance inside the outward region
  std::vector<char> allowed;
  std::vector<char> in_path;
  std::vector<NodeId> path;
  Seconds path_time = 0;
  long long states = 0;
  long long budget;
  bool truncated = false;
  std::map<CycleKey, std::pair<Seconds, std::vector<NodeId>>> found;

  void record(Seconds closing) {
    CycleKey k = cycle_key(path);
    Seconds ct = path_time + closing;
    auto it = found.find(k);
    if (it == found.end() || ct < it->second.first ||
        (ct == it->second.first && path < it->second.second))
      found[k] = {ct, path};
  }

  void dfs() {
    if (truncated) return;
    if (++states > budget) {
      truncated = true;
      return;
    }
    NodeId u = path.back();
    for (const auto& [w, t] : g.neighbors(u)) {
      if (w == v) {
        if (path.size() >= 3 && path[1] < u && path_time + t <= cycle_budget + kTimeEps)
          record(t);
        continue;
      }
      if (!allowed[static_cast<std::size_t>(w)]) continue;
      if (in_path[static_cast<std::size_t>(w)]) continue;
      if (d.dist[static_cast<std::size_t>(w)] > p.T + kTimeEps) continue;
      if (path_time + t + rdist[static_cast<std::size_t>(w)] > cycle_budget + kTimeEps)
        continue;
      in_path[static_cast<std::size_t>(w)] = 1;
      path.push_back(w);
      path_time += t;
      dfs();
      path_time -= t;
      path.pop_back();
      in_path[static_cast<std::size_t>(w)] = 0;
      if (truncated) return;
    }
  }
};

}  // namespace

Seconds lollipop_time(const LollipopTour& t, const Graph& g, const DistanceMap& d) {
  return 2 * d.dist[static_cast<std::size_t>(t.anchor)] + cycle_time(g, t.cycle);
}

std::vector<LollipopTour> initial_cycle(const Graph& g, NodeId v, const DistanceMap& d) {
  if (v == g.station()) throw std::invalid_argument("initial_cycle: v is the station");
  std::vector<NodeId> out = outward_neighbors(g, d, v);
  std::vector<LollipopTour> seeds;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (!g.adjacent(out[i], out[j])) continue;
      LollipopTour t;
      t.anchor = v;
      t.stem = d.path_from_station(v);
      t.cycle = {v, out[i], out[j]};
      seeds.push_back(std::move(t));
    }
  }
  if (seeds.empty()) {
    for (NodeId a : out) {
      LollipopTour t;
      t.anchor = v;
      t.stem = d.path_from_station(v);
      t.cycle = {v, a};
      t.is_spur = true;
      seeds.push_back(std::move(t));
    }
  }
  return seeds;
}

std::vector<NodeId> expand_candidates(const LollipopTour& t, const Graph& g,
                                      const DistanceMap& d) {
  std::vector<NodeId> out;
  if (t.cycle.size() < 2) return out;
  std::set<NodeId> in_cycle(t.cycle.begin(), t.cycle.end());
  std::set<NodeId> hits;
  const std::size_t m = t.cycle.size();
  for (std::size_t i = 0; i < m; ++i) {
    NodeId a = t.cycle[i];
    NodeId b = t.cycle[(i + 1) % m];
    if (a == b) continue;
    Seconds mind = std::min(d.dist[static_cast<std::size_t>(a)],
                            d.dist[static_cast<std::size_t>(b)]);
    for (const auto& [u, w] : g.neighbors(a)) {
      (void)w;
      if (in_cycle.count(u)) continue;
      if (!g.adjacent(u, b)) continue;
      if (d.dist[static_cast<std::size_t>(u)] < mind - kTimeEps) continue;
      hits.insert(u);
    }
  }
  out.assign(hits.begin(), hits.end());
  return out;
}

bool is_maximal(const LollipopTour& t, const Graph& g, const DistanceMap& d,
                const InstanceParams& p) {
  for (NodeId u : expand_candidates(t, g, d))
    if (try_splice(g, d, p, t.cycle, u)) return false;
  return true;
}

std::vector<LollipopTour> expand_all(const Graph& g, NodeId v, const DistanceMap& d,
                                     const InstanceParams& p, const LollipopOptions& opt) {
  if (v == g.station()) throw std::invalid_argument("expand_all: v is the station");
  std::vector<LollipopTour> result;
  const Seconds dv = d.dist[static_cast<std::size_t>(v)];
  if (dv > p.T + kTimeEps || 2 * dv > p.b + kTimeEps) return result;

  std::vector<char> allowed(static_cast<std::size_t>(g.size()), 0);
  for (NodeId u = 0; u < g.size(); ++u)
    allowed[static_cast<std::size_t>(u)] =
        d.dist[static_cast<std::size_t>(u)] >= dv - kTimeEps;
  allowed[static_cast<std::size_t>(v)] = 1;

  CycleEnum en{g, d, p, v, p.b - 2 * dv, {}, allowed, {}, {}, 0, 0,
               opt.state_budget, false, {}};
  en.rdist = restricted_dijkstra(g, v, allowed).first;
  en.in_path.assign(static_cast<std::size_t>(g.size()), 0);
  en.in_path[static_cast<std::size_t>(v)] = 1;
  en.path = {v};
  en.dfs();
  if (en.truncated)
    vlog("expand_all: state budget exhausted at node " + std::to_string(v));

  for (const auto& [key, rec] : en.found) {
    (void)key;
    auto o = orient_feasible(g, d, p, rec.second);
    if (!o) continue;
    LollipopTour t = make_lollipop(g, d, p, v, std::move(o->cycle));
    if (is_maximal(t, g, d, p)) result.push_back(std::move(t));
  }

  if (result.empty()) {
    for (NodeId a : outward_neighbors(g, d, v)) {
      std::vector<NodeId> spur{v, a};
      auto o = orient_feasible(g, d, p, spur);
      if (!o) continue;
      LollipopTour t = make_lollipop(g, d, p, v, std::move(o->cycle));
      if (is_maximal(t, g, d, p)) result.push_back(std::move(t));
    }
  }

  std::sort(result.begin(), result.end(), [](const LollipopTour& a, const LollipopTour& b) {
    if (a.tour.walk.total_time != b.tour.walk.total_time)
      return a.tour.walk.total_time < b.tour.walk.total_time;
    return a.cycle < b.cycle;
  });
  if (opt.max_tours > 0 && static_cast<int>(result.size()) > opt.max_tours)
    result.resize(static_cast<std::size_t>(opt.max_tours));
  return result;
}

LollipopTour reoptimize_cycle(const LollipopTour& t, const Graph& g, const DistanceMap& d,
                              const InstanceParams& p) {
  LollipopTour cur = t;
  if (cur.tour.walk.nodes.empty()) attach_tour(&cur, g, d, p);
  if (cur.cycle.size() < 3) return cur;
  const NodeId v = cur.anchor;
  const Seconds dv = d.dist[static_cast<std::size_t>(v)];

  std::vector<char> allowed(static_cast<std::size_t>(g.size()), 0);
  for (NodeId u = 0; u < g.size(); ++u)
    allowed[static_cast<std::size_t>(u)] =
        d.dist[static_cast<std::size_t>(u)] >= dv - kTimeEps;
  allowed[static_cast<std::size_t>(v)] = 1;

  for (int round = 0; round <= g.size(); ++round) {
    bool changed = false;

    // TSP reorder of the distinct cycle nodes inside the outward region.
    CycleKey S = cycle_key(cur.cycle);
    if (S.size() >= 3) {
      const std::size_t ns = S.size();
      std::vector<std::vector<Seconds>> D(ns);
      std::vector<std::vector<NodeId>> P(ns);
      bool ok = true;
      for (std::size_t i = 0; i < ns; ++i) {
        auto [di, pi] = restricted_dijkstra(g, S[i], allowed);
        D[i] = std::move(di);
        P[i] = std::move(pi);
      }
      std::size_t anchor_idx = static_cast<std::size_t>(
          std::lower_bound(S.begin(), S.end(), v) - S.begin());

      // Nearest neighbour from the anchor, ties to the smaller node id.
      std::vector<std::size_t> ord{anchor_idx};
      std::vector<char> used(ns, 0);
      used[anchor_idx] = 1;
      for (std::size_t step = 1; step < ns && ok; ++step) {
        std::size_t bestk = ns;
        for (std::size_t k = 0; k < ns; ++k) {
          if (used[k]) continue;
          if (bestk == ns ||
              D[ord.back()][static_cast<std::size_t>(S[k])] <
                  D[ord.back()][static_cast<std::size_t>(S[bestk])])
            bestk = k;
        }
        if (D[ord.back()][static_cast<std::size_t>(S[bestk])] ==
            std::numeric_limits<Seconds>::infinity()) {
          ok = false;
          break;
        }
        used[bestk] = 1;
        ord.push_back(bestk);
      }

      if (ok) {
        auto leg = [&](std::size_t from, std::size_t to) {
          return D[from][static_cast<std::size_t>(S[to])];
        };
        // 2-opt, first improvement, anchor pinned at position 0.
        bool improved = true;
        while (improved) {
          improved = false;
          for (std::size_t i = 1; i + 1 < ns && !improved; ++i) {
            for (std::size_t j = i + 1; j < ns && !improved; ++j) {
              std::size_t after = (j + 1) % ns;
              Seconds delta = leg(ord[i - 1], ord[j]) + leg(ord[i], ord[after]) -
                              leg(ord[i - 1], ord[i]) - leg(ord[j], ord[after]);
              if (delta < -kTimeEps) {
                std::reverse(ord.begin() + static_cast<std::ptrdiff_t>(i),
                             ord.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                improved = true;
              }
            }
          }
        }
        Seconds closed = 0;
        for (std::size_t i = 0; i < ns; ++i) closed += leg(ord[i], ord[(i + 1) % ns]);

        if (closed < cycle_time(g, cur.cycle) - kTimeEps) {
          // Expand closure legs through their shortest-path chains.
          std::vector<NodeId> nc{v};
          for (std::size_t i = 0; i < ns; ++i) {
            std::size_t from = ord[i];
            NodeId target = S[ord[(i + 1) % ns]];
            std::vector<NodeId> chain;
            for (NodeId x = target; x != S[from]; x = P[from][static_cast<std::size_t>(x)])
              chain.push_back(x);
            for (auto itc = chain.rbegin(); itc != chain.rend(); ++itc) nc.push_back(*itc);
          }
          if (nc.back() == v) nc.pop_back();
          if (auto o = orient_feasible(g, d, p, nc)) {
            if (o->total_time < cur.tour.walk.total_time - kTimeEps) {
              cur.cycle = std::move(o->cycle);
              cur.is_spur = cur.cycle.size() == 2;
              attach_tour(&cur, g, d, p);
              changed = true;
            }
          }
        }
      }
    }

    // Absorb any splice candidates the shorter cycle can now afford.
    for (;;) {
      bool spliced = false;
      for (NodeId u : expand_candidates(cur, g, d)) {
        if (auto o = try_splice(g, d, p, cur.cycle, u)) {
          cur.cycle = std::move(o->cycle);
          cur.is_spur = cur.cycle.size() == 2;
          attach_tour(&cur, g, d, p);
          spliced = true;
          changed = true;
          break;
        }
      }
      if (!spliced) break;
    }

    if (!changed) break;
  }
  return cur;
}

std::vector<CandidateTour> collect_lollipop_pool(const Graph& g, const DistanceMap& d,
                                                 const InstanceParams& p, int n,
                                                 const LollipopOptions& opt) {
  std::vector<CandidateTour> pool;
  if (g.size() == 1) {
    pool.push_back(tour_from_walk({g.station()}, g, p, TourOrigin::kLollipop, 0));
    return pool;
  }

  std::vector<NodeId> order;
  for (NodeId v = 0; v < g.size(); ++v)
    if (v != g.station()) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    Seconds da = d.dist[static_cast<std::size_t>(a)];
    Seconds db = d.dist[static_cast<std::size_t>(b)];
    if (da != db) return da > db;
    return a < b;
  });

  std::vector<char> covered(static_cast<std::size_t>(g.size()), 0);
  covered[static_cast<std::size_t>(g.station())] = 1;
  int num_covered = 1;
  std::map<std::vector<NodeId>, std::size_t> by_coverage;

  auto add_tour = [&](CandidateTour t) {
    auto it = by_coverage.find(t.coverage);
    if (it != by_coverage.end()) {
      if (t.walk.total_time < pool[it->second].walk.total_time - kTimeEps) {
        t.id = pool[it->second].id;
        pool[it->second] = std::move(t);
      }
      return;
    }
    t.id = static_cast<int>(pool.size());
    for (NodeId u : t.coverage) {
      if (!covered[static_cast<std::size_t>(u)]) {
        covered[static_cast<std::size_t>(u)] = 1;
        ++num_covered;
      }
    }
    by_coverage[t.coverage] = pool.size();
    pool.push_back(std::move(t));
  };

  for (NodeId v : order) {
    bool full = num_covered < g.size();
    if (!full && n == 0) break;
    LollipopOptions o = opt;
    o.max_tours = full ? 0 : n;
    for (auto& lt : expand_all(g, v, d, p, o)) {
      LollipopTour rt = reoptimize_cycle(lt, g, d, p);
      add_tour(std::move(rt.tour));
    }
    if (!covered[static_cast<std::size_t>(v)]) {
      Seconds dv = d.dist[static_cast<std::size_t>(v)];
      if (2 * dv <= p.b + kTimeEps && dv <= p.T + kTimeEps) {
        std::vector<NodeId> stem = d.path_from_station(v);
        std::vector<NodeId> walk = stem;
        for (auto it = stem.rbegin() + 1; it != stem.rend(); ++it) walk.push_back(*it);
        add_tour(tour_from_walk(std::move(walk), g, p, TourOrigin::kLollipop, -1));
      }
    }
  }

  std::vector<NodeId> missing;
  for (NodeId v = 0; v < g.size(); ++v)
    if (!covered[static_cast<std::size_t>(v)]) missing.push_back(v);
  if (!missing.empty())
    throw InfeasibleError("nodes not coverable by lollipop tours", missing);
  return pool;
}

}  // namespace percov
