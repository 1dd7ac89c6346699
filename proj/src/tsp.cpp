#include "percov/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace percov {

Seconds walk_time(const Graph& g, const std::vector<NodeId>& nodes) {
  Seconds t = 0.0;
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    t += g.edge_time(nodes[i], nodes[i + 1]);
  return t;
}

MetricClosure::MetricClosure(const Graph& g) : n_(g.size()) {
  const size_t n = static_cast<size_t>(n_);
  dist_.assign(n * n, std::numeric_limits<Seconds>::infinity());
  parent_.assign(n * n, -1);
  using Item = std::pair<Seconds, NodeId>;
  for (int src = 0; src < n_; ++src) {
    Seconds* dist = &dist_[static_cast<size_t>(src) * n];
    NodeId* par = &parent_[static_cast<size_t>(src) * n];
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    std::vector<bool> done(n, false);
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (done[static_cast<size_t>(u)]) continue;
      done[static_cast<size_t>(u)] = true;
      for (auto [v, t] : g.neighbors(u)) {
        if (done[static_cast<size_t>(v)]) continue;
        Seconds nd = du + t;
        if (nd < dist[v]) {
          dist[v] = nd;
          par[v] = u;
          pq.push({nd, v});
        } else if (nd == dist[v] && (par[v] == -1 || u < par[v])) {
          par[v] = u;
        }
      }
    }
  }
}

std::vector<NodeId> MetricClosure::path(NodeId u, NodeId v) const {
  const size_t n = static_cast<size_t>(n_);
  const NodeId* par = &parent_[static_cast<size_t>(u) * n];
  std::vector<NodeId> rev;
  NodeId cur = v;
  while (cur != -1) {
    rev.push_back(cur);
    if (cur == u) break;
    cur = par[cur];
  }
  if (rev.empty() || rev.back() != u)
    throw std::logic_error("metric closure: broken path");
  std::reverse(rev.begin(), rev.end());
  return rev;
}

std::vector<NodeId> canonical_cycle_form(const std::vector<NodeId>& closed_walk) {
  if (closed_walk.empty()) return {};
  std::vector<NodeId> cyc(closed_walk.begin(), closed_walk.end());
  if (cyc.size() > 1 && cyc.front() == cyc.back()) cyc.pop_back();
  const size_t m = cyc.size();
  std::vector<NodeId> best;
  std::vector<NodeId> cand(m);
  for (int refl = 0; refl < 2; ++refl) {
    for (size_t rot = 0; rot < m; ++rot) {
      for (size_t i = 0; i < m; ++i) cand[i] = cyc[(rot + i) % m];
      if (best.empty() || cand < best) best = cand;
    }
    std::reverse(cyc.begin(), cyc.end());
  }
  return best;
}

namespace {

// Expand an order over the metric closure into a real-edge closed walk.
Walk expand_hops(const Graph& g, const MetricClosure& mc,
                 const std::vector<NodeId>& order) {
  Walk w;
  if (order.size() == 1) {
    w.nodes = {order[0]};
    w.total_time = 0.0;
    return w;
  }
  w.nodes.push_back(order[0]);
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    std::vector<NodeId> hop = mc.path(order[i], order[i + 1]);
    w.nodes.insert(w.nodes.end(), hop.begin() + 1, hop.end());
  }
  w.total_time = walk_time(g, w.nodes);
  return w;
}

Seconds order_time(const MetricClosure& mc, const std::vector<NodeId>& order) {
  Seconds t = 0.0;
  for (size_t i = 0; i + 1 < order.size(); ++i) t += mc.dist(order[i], order[i + 1]);
  t += mc.dist(order.back(), order.front());
  return t;
}

double rand_unit(std::uint64_t& state) {
  state = mix_seed(state, 0x9E3779B97F4A7C15ULL);
  return static_cast<double>(state >> 11) * 0x1.0p-53;
}

int rand_int(std::uint64_t& state, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rand_unit(state) * (hi - lo + 1));
}

// Nearest-neighbor order starting at the station. Exact distance ties are
// broken by smallest id, or by a seeded draw when rng != nullptr.
std::vector<NodeId> nn_order(const MetricClosure& mc, NodeId station,
                             std::uint64_t* rng) {
  const int n = mc.size();
  std::vector<bool> used(static_cast<size_t>(n), false);
  std::vector<NodeId> order{station};
  used[static_cast<size_t>(station)] = true;
  for (int step = 1; step < n; ++step) {
    NodeId cur = order.back();
    Seconds best = std::numeric_limits<Seconds>::infinity();
    std::vector<NodeId> ties;
    for (NodeId v = 0; v < n; ++v) {
      if (used[static_cast<size_t>(v)]) continue;
      Seconds d = mc.dist(cur, v);
      if (d < best) {
        best = d;
        ties = {v};
      } else if (d == best) {
        ties.push_back(v);
      }
    }
    NodeId pick = ties.front();
    if (rng && ties.size() > 1) pick = ties[static_cast<size_t>(rand_int(*rng, 0, static_cast<int>(ties.size()) - 1))];
    order.push_back(pick);
    used[static_cast<size_t>(pick)] = true;
  }
  return order;
}

// First-improvement 2-opt over the cyclic order (position 0 fixed).
void two_opt(const MetricClosure& mc, std::vector<NodeId>& order) {
  const int n = static_cast<int>(order.size());
  if (n < 4) return;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1 && !improved; ++i) {
      for (int j = i + 2; j < n && !improved; ++j) {
        if (i == 0 && j == n - 1) continue;  // same edge pair
        NodeId a = order[static_cast<size_t>(i)];
        NodeId b = order[static_cast<size_t>(i + 1)];
        NodeId c = order[static_cast<size_t>(j)];
        NodeId e = order[static_cast<size_t>((j + 1) % n)];
        Seconds delta = mc.dist(a, c) + mc.dist(b, e) - mc.dist(a, b) - mc.dist(c, e);
        if (delta < -kTimeEps) {
          std::reverse(order.begin() + i + 1, order.begin() + j + 1);
          improved = true;
        }
      }
    }
  }
}

void double_bridge(std::uint64_t& rng, std::vector<NodeId>& order) {
  const int n = static_cast<int>(order.size());
  if (n < 8) {
    // Too small for a 4-cut; shuffle the interior instead.
    for (int i = n - 1; i >= 2; --i)
      std::swap(order[static_cast<size_t>(i)],
                order[static_cast<size_t>(rand_int(rng, 1, i))]);
    return;
  }
  int p1 = rand_int(rng, 1, n - 6);
  int p2 = p1 + 1 + rand_int(rng, 0, n - p1 - 5);
  int p3 = p2 + 1 + rand_int(rng, 0, n - p2 - 3);
  std::vector<NodeId> out;
  out.reserve(static_cast<size_t>(n));
  out.insert(out.end(), order.begin(), order.begin() + p1);
  out.insert(out.end(), order.begin() + p3, order.end());
  out.insert(out.end(), order.begin() + p2, order.begin() + p3);
  out.insert(out.end(), order.begin() + p1, order.begin() + p2);
  order = std::move(out);
}

struct Attempt {
  std::vector<NodeId> order;
  Seconds time = 0.0;
};

Attempt heuristic_attempt(const Graph& g, const MetricClosure& mc, int kind,
                          std::uint64_t sub_seed,
                          const std::vector<std::vector<NodeId>>& prev_orders);

// Shared by solve_tsp_heuristic and distinct_tours attempt 0.
Attempt best_heuristic_attempt(const Graph& g, const MetricClosure& mc,
                               std::uint64_t seed) {
  const int n = g.size();
  const int restarts = n <= 12 ? 8 : 4;
  Attempt best;
  std::vector<NodeId> best_canon;
  std::vector<std::vector<NodeId>> prev;
  for (int r = 0; r < restarts; ++r) {
    Attempt a = heuristic_attempt(g, mc, r == 0 ? 0 : (r % 2 ? 3 : 1),
                                  mix_seed(seed, static_cast<std::uint64_t>(r)), prev);
    prev.push_back(a.order);
    std::vector<NodeId> canon = canonical_cycle_form(a.order);
    if (best.order.empty() || a.time < best.time - kTimeEps ||
        (std::abs(a.time - best.time) <= kTimeEps && canon < best_canon)) {
      best = a;
      best_canon = canon;
    }
  }
  return best;
}

Attempt heuristic_attempt(const Graph& g, const MetricClosure& mc, int kind,
                          std::uint64_t sub_seed,
                          const std::vector<std::vector<NodeId>>& prev_orders) {
  std::uint64_t rng = sub_seed;
  std::vector<NodeId> order;
  if (kind == 2 && !prev_orders.empty()) {
    order = prev_orders[static_cast<size_t>(
        rand_int(rng, 0, static_cast<int>(prev_orders.size()) - 1))];
    double_bridge(rng, order);
  } else if (kind == 1) {
    const int n = g.size();
    order.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::swap(order[0], order[static_cast<size_t>(g.station())]);
    for (int i = n - 1; i >= 2; --i)
      std::swap(order[static_cast<size_t>(i)],
                order[static_cast<size_t>(rand_int(rng, 1, i))]);
  } else {
    order = nn_order(mc, g.station(), kind == 0 ? nullptr : &rng);
  }
  two_opt(mc, order);
  return {order, order_time(mc, order)};
}

}  // namespace

Walk solve_tsp_exact(const Graph& g) {
  const int n = g.size();
  if (n > 15) throw std::invalid_argument("tsp exact: limited to 15 nodes");
  MetricClosure mc(g);
  if (n == 1) return Walk{{g.station()}, 0.0};

  // Map non-station nodes to 0..m-1.
  std::vector<NodeId> idx;
  for (NodeId v = 0; v < n; ++v)
    if (v != g.station()) idx.push_back(v);
  const int m = n - 1;
  const size_t full = static_cast<size_t>(1) << m;
  const Seconds inf = std::numeric_limits<Seconds>::infinity();
  std::vector<Seconds> dp(full * static_cast<size_t>(m), inf);
  std::vector<int8_t> from(full * static_cast<size_t>(m), -1);
  for (int j = 0; j < m; ++j)
    dp[(static_cast<size_t>(1) << j) * static_cast<size_t>(m) + static_cast<size_t>(j)] =
        mc.dist(g.station(), idx[static_cast<size_t>(j)]);
  for (size_t mask = 1; mask < full; ++mask) {
    for (int j = 0; j < m; ++j) {
      if (!(mask & (static_cast<size_t>(1) << j))) continue;
      Seconds cur = dp[mask * static_cast<size_t>(m) + static_cast<size_t>(j)];
      if (cur == inf) continue;
      for (int k = 0; k < m; ++k) {
        if (mask & (static_cast<size_t>(1) << k)) continue;
        size_t nmask = mask | (static_cast<size_t>(1) << k);
        Seconds cand = cur + mc.dist(idx[static_cast<size_t>(j)], idx[static_cast<size_t>(k)]);
        Seconds& slot = dp[nmask * static_cast<size_t>(m) + static_cast<size_t>(k)];
        if (cand < slot) {
          slot = cand;
          from[nmask * static_cast<size_t>(m) + static_cast<size_t>(k)] = static_cast<int8_t>(j);
        }
      }
    }
  }
  Seconds best = inf;
  int best_j = -1;
  for (int j = 0; j < m; ++j) {
    Seconds cand = dp[(full - 1) * static_cast<size_t>(m) + static_cast<size_t>(j)] +
                   mc.dist(idx[static_cast<size_t>(j)], g.station());
    if (cand < best) {
      best = cand;
      best_j = j;
    }
  }
  std::vector<NodeId> order;
  size_t mask = full - 1;
  int j = best_j;
  while (j != -1) {
    order.push_back(idx[static_cast<size_t>(j)]);
    int pj = from[mask * static_cast<size_t>(m) + static_cast<size_t>(j)];
    mask &= ~(static_cast<size_t>(1) << j);
    j = pj;
  }
  order.push_back(g.station());
  std::reverse(order.begin(), order.end());
  order.push_back(g.station());
  return expand_hops(g, mc, order);
}

Walk solve_tsp_heuristic(const Graph& g, std::uint64_t seed) {
  const int n = g.size();
  if (n == 1) return Walk{{g.station()}, 0.0};
  MetricClosure mc(g);
  Attempt best = best_heuristic_attempt(g, mc, seed);
  std::vector<NodeId> closed = best.order;
  closed.push_back(g.station());
  return expand_hops(g, mc, closed);
}

std::vector<Walk> distinct_tours(const Graph& g, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("distinct_tours: n must be >= 1");
  MetricClosure mc(g);
  std::set<std::vector<NodeId>> seen;
  std::vector<Walk> out;
  std::vector<std::vector<NodeId>> orders;  // hop orders of distinct walks

  const int budget = 10 * n;
  for (int attempt = 0; attempt < budget && static_cast<int>(out.size()) < n; ++attempt) {
    Attempt a;
    if (attempt == 0) {
      if (g.size() == 1) {
        out.push_back(Walk{{g.station()}, 0.0});
        break;
      }
      a = best_heuristic_attempt(g, mc, seed);
    } else {
      a = heuristic_attempt(g, mc, attempt % 3,
                            mix_seed(seed, 0x1000 + static_cast<std::uint64_t>(attempt)),
                            orders);
    }
    std::vector<NodeId> closed = a.order;
    closed.push_back(g.station());
    Walk w = expand_hops(g, mc, closed);
    std::vector<NodeId> canon = canonical_cycle_form(w.nodes);
    if (seen.insert(canon).second) {
      out.push_back(std::move(w));
      orders.push_back(std::move(a.order));
    }
  }
  if (static_cast<int>(out.size()) < n)
    vlog("distinct_tours: restart budget exhausted with " + std::to_string(out.size()) +
         " of " + std::to_string(n) + " walks");
  std::stable_sort(out.begin(), out.end(), [](const Walk& a, const Walk& b) {
    if (a.total_time != b.total_time) return a.total_time < b.total_time;
    return canonical_cycle_form(a.nodes) < canonical_cycle_form(b.nodes);
  });
  return out;
}

}  // namespace percov
