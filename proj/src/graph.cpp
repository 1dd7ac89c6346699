#include "percov/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace percov {

namespace {
bool g_verbose = false;
}

void set_verbose(bool on) { g_verbose = on; }
bool verbose() { return g_verbose; }
void vlog(const std::string& msg) {
  if (g_verbose) std::cerr << "[percov] " + msg + "\n";  // one insertion: thread-clean lines
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Graph::Graph(std::vector<Node> nodes, std::vector<EdgeRec> edges, NodeId station)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), station_(station) {
  const int n = static_cast<int>(nodes_.size());
  if (n == 0) throw std::invalid_argument("graph: empty node set");
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (const Node& nd : nodes_) {
    if (nd.id < 0 || nd.id >= n)
      throw std::invalid_argument("graph: node id out of range: " + std::to_string(nd.id));
    if (seen[static_cast<size_t>(nd.id)])
      throw std::invalid_argument("graph: duplicate node id: " + std::to_string(nd.id));
    seen[static_cast<size_t>(nd.id)] = true;
  }
  // Store nodes indexed by id.
  std::vector<Node> byid(static_cast<size_t>(n));
  for (const Node& nd : nodes_) byid[static_cast<size_t>(nd.id)] = nd;
  nodes_ = std::move(byid);

  if (station_ < 0 || station_ >= n)
    throw std::invalid_argument("graph: station id out of range");

  adj_.assign(static_cast<size_t>(n), {});
  std::set<std::pair<NodeId, NodeId>> edge_keys;
  for (const EdgeRec& e : edges_) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("graph: self loop");
    if (!(e.time > 0.0) || !std::isfinite(e.time))
      throw std::invalid_argument("graph: edge time must be positive and finite");
    auto key = std::minmax(e.u, e.v);
    if (!edge_keys.insert(key).second)
      throw std::invalid_argument("graph: duplicate edge " + std::to_string(e.u) + "-" +
                                  std::to_string(e.v));
    adj_[static_cast<size_t>(e.u)].push_back({e.v, e.time});
    adj_[static_cast<size_t>(e.v)].push_back({e.u, e.time});
  }
  for (auto& lst : adj_) std::sort(lst.begin(), lst.end());

  // Connectivity from the station.
  std::vector<bool> vis(static_cast<size_t>(n), false);
  std::vector<NodeId> stack{station_};
  vis[static_cast<size_t>(station_)] = true;
  int count = 0;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    ++count;
    for (auto [w, t] : adj_[static_cast<size_t>(u)]) {
      (void)t;
      if (!vis[static_cast<size_t>(w)]) {
        vis[static_cast<size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  if (count != n) throw std::invalid_argument("graph: not connected");
}

bool Graph::adjacent(NodeId u, NodeId v) const {
  for (auto [w, t] : adj_[static_cast<size_t>(u)]) {
    (void)t;
    if (w == v) return true;
  }
  return false;
}

Seconds Graph::edge_time(NodeId u, NodeId v) const {
  for (auto [w, t] : adj_[static_cast<size_t>(u)])
    if (w == v) return t;
  throw std::invalid_argument("graph: no edge " + std::to_string(u) + "-" + std::to_string(v));
}

void InstanceParams::validate() const {
  if (!(b > 0.0) || !std::isfinite(b))
    throw std::invalid_argument("params: b must be > 0");
  if (B < 0.0 || !std::isfinite(B))
    throw std::invalid_argument("params: B must be >= 0");
  if (!(T > 0.0) || !std::isfinite(T))
    throw std::invalid_argument("params: T must be > 0");
  for (const auto& [v, t] : per_node_deadline)
    if (t != T)
      throw std::invalid_argument("params: per-node deadlines must be uniform (== T)");
}

std::vector<NodeId> DistanceMap::path_from_station(NodeId v) const {
  std::vector<NodeId> path;
  NodeId cur = v;
  while (cur != -1) {
    path.push_back(cur);
    if (cur == station) break;
    cur = parent[static_cast<size_t>(cur)];
  }
  std::reverse(path.begin(), path.end());
  if (path.empty() || path.front() != station)
    throw std::logic_error("distance map: broken parent chain");
  return path;
}

NodeId grid_centroid_node(int rows, int cols) {
  const double cy = (rows - 1) / 2.0;
  const double cx = (cols - 1) / 2.0;
  NodeId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double d = (r - cy) * (r - cy) + (c - cx) * (c - cx);
      NodeId id = r * cols + c;
      if (d < best_d - 1e-12) {
        best_d = d;
        best = id;
      }
    }
  return best;
}

Graph build_grid(int rows, int cols, Seconds edge_time, NodeId station) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid: rows/cols must be >= 1");
  if (!(edge_time > 0.0)) throw std::invalid_argument("grid: edge_time must be > 0");
  std::vector<Node> nodes;
  nodes.reserve(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      nodes.push_back({r * cols + c, c * edge_time, r * edge_time});
  std::vector<EdgeRec> edges;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      NodeId id = r * cols + c;
      if (c + 1 < cols) edges.push_back({id, id + 1, edge_time});
      if (r + 1 < rows) edges.push_back({id, id + cols, edge_time});
    }
  return Graph(std::move(nodes), std::move(edges), station);
}

namespace {

// Portable uniform draw in [0,1); avoids distribution implementation drift.
double rand_unit(std::uint64_t& state) {
  state = mix_seed(state, 0x2545F4914F6CDD1DULL);
  return static_cast<double>(state >> 11) * 0x1.0p-53;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(static_cast<size_t>(n)) {
    std::iota(p.begin(), p.end(), 0);
  }
  int find(int x) { return p[static_cast<size_t>(x)] == x ? x : p[static_cast<size_t>(x)] = find(p[static_cast<size_t>(x)]); }
  void unite(int a, int b) { p[static_cast<size_t>(find(a))] = find(b); }
};

}  // namespace

Graph build_random_geometric(int n, double radius, double side,
                             std::uint64_t seed, StationPolicy policy) {
  if (n < 1) throw std::invalid_argument("geometric: n must be >= 1");
  if (!(radius > 0.0) || !(side > 0.0))
    throw std::invalid_argument("geometric: radius and side must be > 0");

  const int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::uint64_t state = mix_seed(seed, static_cast<std::uint64_t>(attempt));
    std::vector<Node> nodes;
    nodes.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      double x = rand_unit(state) * side;
      double y = rand_unit(state) * side;
      nodes.push_back({i, x, y});
    }
    std::vector<EdgeRec> edges;
    UnionFind uf(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double dx = nodes[static_cast<size_t>(i)].x - nodes[static_cast<size_t>(j)].x;
        double dy = nodes[static_cast<size_t>(i)].y - nodes[static_cast<size_t>(j)].y;
        double d = std::sqrt(dx * dx + dy * dy);
        if (d <= radius && d > 0.0) {
          edges.push_back({i, j, d});
          uf.unite(i, j);
        }
      }
    bool connected = true;
    for (int i = 1; i < n && connected; ++i)
      if (uf.find(i) != uf.find(0)) connected = false;
    if (!connected) {
      vlog("geometric draw " + std::to_string(attempt) + " disconnected; retrying");
      continue;
    }

    double tx = 0.0, ty = 0.0;  // corner-most targets the origin corner
    if (policy == StationPolicy::kCentroidMost) {
      tx = side / 2.0;
      ty = side / 2.0;
    }
    NodeId station = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const Node& nd : nodes) {
      double d = (nd.x - tx) * (nd.x - tx) + (nd.y - ty) * (nd.y - ty);
      if (d < best - 1e-12) {
        best = d;
        station = nd.id;
      }
    }
    return Graph(std::move(nodes), std::move(edges), station);
  }
  throw std::runtime_error("geometric: no connected draw within retry budget");
}

DistanceMap shortest_paths(const Graph& g) {
  const int n = g.size();
  DistanceMap dm;
  dm.station = g.station();
  dm.dist.assign(static_cast<size_t>(n), std::numeric_limits<Seconds>::infinity());
  dm.parent.assign(static_cast<size_t>(n), -1);
  using Item = std::pair<Seconds, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dm.dist[static_cast<size_t>(g.station())] = 0.0;
  pq.push({0.0, g.station()});
  std::vector<bool> done(static_cast<size_t>(n), false);
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (done[static_cast<size_t>(u)]) continue;
    done[static_cast<size_t>(u)] = true;
    for (auto [v, t] : g.neighbors(u)) {
      if (done[static_cast<size_t>(v)]) continue;
      Seconds nd = du + t;
      Seconds& dv = dm.dist[static_cast<size_t>(v)];
      NodeId& pv = dm.parent[static_cast<size_t>(v)];
      if (nd < dv) {
        dv = nd;
        pv = u;
        pq.push({nd, v});
      } else if (nd == dv && (pv == -1 || u < pv)) {
        pv = u;  // equal-distance tie: smaller parent id wins
      }
    }
  }
  return dm;
}

}  // namespace percov
