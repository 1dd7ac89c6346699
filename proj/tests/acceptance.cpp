// Acceptance gate: one criterion per function, one [PASS]/[FAIL] line each.
// Run with no arguments for the full gate, or with a criterion number (1-8)
// to run that criterion alone. The exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "percov/graph.hpp"
#include "percov/lollipop.hpp"
#include "percov/scheduler.hpp"
#include "percov/setcover.hpp"
#include "percov/solve.hpp"
#include "percov/tours.hpp"
#include "percov/tsp.hpp"

using namespace percov;

namespace {

int checks_failed = 0;

void expect(bool ok, const char* what) {
  if (!ok) {
    ++checks_failed;
    std::printf("       check failed: %s\n", what);
  }
}

void expectf(bool ok, const char* fmt, ...) {
  if (!ok) {
    ++checks_failed;
    std::va_list args;
    va_start(args, fmt);
    std::printf("       check failed: ");
    std::vprintf(fmt, args);
    std::printf("\n");
    va_end(args);
  }
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// --------------------------------------------------------------------------
// Criterion 1: every produced schedule simulates clean. All preset instances,
// all methods, a sweep of latency budgets; zero tolerance on violations.
bool criterion_1() {
  const std::vector<std::string> presets{"p3", "2x2", "6x6", "10x10"};
  const std::vector<Seconds> latencies{2500, 3000, 5000, 20000};
  int solved = 0;
  for (const std::string& name : presets) {
    PresetInstance pi = make_preset(name);
    for (Seconds T : latencies) {
      InstanceParams p = pi.params;
      p.T = T;
      for (Method m : all_methods()) {
        RunConfig cfg;
        cfg.method = m;
        cfg.seed = 1;
        SolveResult r;
        try {
          r = solve_instance(pi.graph, p, cfg);
        } catch (const InfeasibleError&) {
          continue;  // infeasible cells carry no schedule to verify
        }
        ++solved;
        expectf(r.sim.pass, "%s %s T=%g: simulation failed", name.c_str(),
                to_string(m).c_str(), T);
        expectf(r.sim.battery_violations == 0, "%s %s T=%g: %d battery violations",
                name.c_str(), to_string(m).c_str(), T, r.sim.battery_violations);
        expectf(r.sim.latency_violations == 0, "%s %s T=%g: %d latency violations",
                name.c_str(), to_string(m).c_str(), T, r.sim.latency_violations);
        Seconds max_period = 0;
        for (const Dispatch& d : r.schedule.dispatches)
          max_period = std::max(max_period, d.period);
        expectf(r.sim.horizon >= 2 * max_period - kSimEps,
                "%s %s T=%g: horizon %g below two full periods", name.c_str(),
                to_string(m).c_str(), T, r.sim.horizon);
        expectf(r.num_uavs >= 1 && r.num_tours >= 1, "%s %s T=%g: empty schedule",
                name.c_str(), to_string(m).c_str(), T);
      }
    }
  }
  expectf(solved >= 80, "only %d solved cells (expected the sweep mostly feasible)", solved);
  std::printf("       %d preset/method/latency cells solved and verified\n", solved);
  return checks_failed == 0;
}

// --------------------------------------------------------------------------
// Criterion 2: optimality spot-checks on small instances where the optimum
// is known by construction.
//
// Construction: random connected graphs whose heuristic tour equals the
// exact optimum; set b to exactly the optimal tour time. Then (a) with a
// generous latency T = B + b, one UAV suffices and the cover-based methods
// must find N = 1; (b) with T = B + b - w_min, no single-tour one-UAV plan
// exists (any covering tour takes at least b, so its replication factor is
// at least ceil((b+B)/T) = 2, and multi-tour plans keep N >= 2), so every
// method must report N >= 2.
//
// Part (a) checks the methods whose pools always contain a full-coverage
// tour (the TSP-derived ones and hybrid). The dijkstra and lollipop pools
// legitimately decompose the graph into shorter loops, which is optimal for
// N only when a single walk happens to survive; they are exercised in (b),
// where the bound binds every method.
bool criterion_2() {
  int accepted = 0;
  int n1_checked = 0;
  int n2_checked = 0;
  for (std::uint64_t seed = 1; seed <= 60 && accepted < 30; ++seed) {
    oracle::Rng rng(seed * 7919);
    int n = rng.uniform(4, 7);
    Graph g = oracle::random_connected_graph(n, rng.uniform(0, 3), 100, 900, seed * 131 + 5);
    Walk exact = solve_tsp_exact(g);
    Walk heur = solve_tsp_heuristic(g, 1);
    if (std::abs(heur.total_time - exact.total_time) > 1e-9) continue;
    DistanceMap d = shortest_paths(g);
    Seconds dmax = 0;
    Seconds wmin = 1e18;
    for (int v = 0; v < g.size(); ++v) dmax = std::max(dmax, d.dist[static_cast<size_t>(v)]);
    for (const auto& e : g.edges()) wmin = std::min(wmin, e.time);
    if (2 * dmax > exact.total_time + 1e-9) continue;  // keep every node reachable at b = tsp
    ++accepted;

    InstanceParams p;
    p.b = exact.total_time;
    p.B = 3000;
    p.T = p.B + p.b;  // exactly the single-UAV threshold
    for (Method m : {Method::kTspGreedy, Method::kTspLp1, Method::kTspLpN, Method::kHybrid}) {
      RunConfig cfg;
      cfg.method = m;
      cfg.seed = 1;
      SolveResult r = solve_instance(g, p, cfg);
      ++n1_checked;
      expectf(r.num_uavs == 1, "seed %llu %s: N=%d, expected the provable optimum 1",
              static_cast<unsigned long long>(seed), to_string(m).c_str(), r.num_uavs);
      expect(r.sim.pass, "N=1 schedule must simulate clean");
    }

    InstanceParams p2 = p;
    p2.T = p.B + p.b - wmin;  // just below the threshold: one UAV cannot suffice
    for (Method m : all_methods()) {
      RunConfig cfg;
      cfg.method = m;
      cfg.seed = 1;
      SolveResult r;
      try {
        r = solve_instance(g, p2, cfg);
      } catch (const InfeasibleError&) {
        continue;  // a pool may fail to cover under the tighter latency
      }
      ++n2_checked;
      expectf(r.num_uavs >= 2, "seed %llu %s: N=%d below the provable bound 2",
              static_cast<unsigned long long>(seed), to_string(m).c_str(), r.num_uavs);
      expect(r.sim.pass, "N>=2 schedule must simulate clean");
    }
  }
  expectf(accepted == 30, "only %d instances accepted by the generator filter", accepted);
  std::printf("       30 instances: %d one-UAV checks, %d lower-bound checks\n", n1_checked,
              n2_checked);
  return checks_failed == 0;
}

// --------------------------------------------------------------------------
// Criterion 3: the replication factor is tight. For randomized tours, k
// replicas pass simulation and k-1 replicas fail it.
bool criterion_3() {
  int tight = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    oracle::Rng rng(seed * 601);
    Graph g = oracle::random_connected_graph(rng.uniform(3, 8), rng.uniform(0, 3), 100, 1500,
                                             seed * 53 + 11);
    Walk w = solve_tsp_heuristic(g, seed);
    InstanceParams p;
    p.b = w.total_time + 1000;
    p.B = 500 + 250.0 * rng.uniform(0, 40);
    p.T = 1;  // placeholder; fixed below once arrivals are known
    CandidateTour probe = tour_from_walk(w.nodes, g, InstanceParams{p.b, p.B, 1e18, {}},
                                         TourOrigin::kTspLp, 0);
    Seconds maxarr = 0;
    for (const auto& [v, a] : probe.arrival) maxarr = std::max(maxarr, a);
    p.T = maxarr + 1.0 + rng.real01() * (w.total_time + p.B + 3000 - maxarr);
    CandidateTour t = tour_from_walk(w.nodes, g, p, TourOrigin::kTspLp, 0);
    int k = replication_factor(t, p);
    Schedule pass_sched{tour_dispatches(t, k, p, 0), k, 1};
    SimReport ok = simulate(pass_sched, {t}, g, p, default_horizon(pass_sched, {t}));
    expectf(ok.pass, "seed %llu: k=%d replicas should pass",
            static_cast<unsigned long long>(seed), k);
    bool lower_fails;
    if (k >= 2) {
      Schedule under{tour_dispatches(t, k - 1, p, 0), k - 1, 1};
      lower_fails = !simulate(under, {t}, g, p, default_horizon(under, {t})).pass;
    } else {
      // k = 1: the empty schedule leaves every node stale
      Schedule none{{}, 0, 0};
      Seconds horizon = std::max(2 * (t.walk.total_time + p.B) + t.walk.total_time, 3 * p.T);
      lower_fails = !simulate(none, {t}, g, p, horizon).pass;
    }
    expectf(lower_fails, "seed %llu: k-1=%d replicas should fail",
            static_cast<unsigned long long>(seed), k - 1);
    if (ok.pass && lower_fails) ++tight;
  }
  std::printf("       %d/100 randomized tours tight at k\n", tight);
  expectf(tight == 100, "replication tight on %d/100", tight);
  return checks_failed == 0;
}

// --------------------------------------------------------------------------
// Criterion 4: the optimizers agree with brute force. Set cover against
// exhaustive enumeration; lollipop enumeration against a definition-chasing
// reference on a graph suite.
bool criterion_4() {
  int cover_cases = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    oracle::Rng rng(seed * 97);
    CoverInstance ci =
        oracle::random_cover_instance(rng.uniform(3, 16), rng.uniform(3, 20), seed * 17 + 3);
    Selection ex = exact_cover(ci);
    double ref = oracle::min_cover_cost(ci);
    ++cover_cases;
    expectf(std::abs(ex.objective_value - ref) <= 1e-9,
            "cover seed %llu: exact %.6f vs oracle %.6f",
            static_cast<unsigned long long>(seed), ex.objective_value, ref);
    expect(ex.proof == Proof::kOptimal, "exact cover must prove optimality at these sizes");
  }

  std::vector<Graph> graphs;
  graphs.push_back(build_grid(3, 3, 100, 0));
  graphs.push_back(build_grid(3, 3, 100, 4));
  graphs.push_back(build_grid(3, 4, 100, 0));
  for (std::uint64_t s = 1; s <= 10; ++s) {
    oracle::Rng rng(s * 1313);
    graphs.push_back(
        oracle::random_connected_graph(rng.uniform(10, 12), rng.uniform(2, 5), 100, 400, s * 7));
  }
  LollipopOptions wide;
  wide.state_budget = 10'000'000;
  int lollipop_cases = 0;
  for (const Graph& g : graphs) {
    std::vector<double> bf = oracle::bellman_ford(g);
    DistanceMap d = shortest_paths(g);
    for (InstanceParams p : {InstanceParams{800, 1000, 800, {}},
                             InstanceParams{1200, 1000, 900, {}},
                             InstanceParams{1600, 1000, 1600, {}}}) {
      for (NodeId v = 0; v < g.size(); ++v) {
        if (v == g.station()) continue;
        ++lollipop_cases;
        std::vector<LollipopTour> lib = expand_all(g, v, d, p, wide);
        std::vector<oracle::LollipopRef> ref = oracle::lollipop_expand_all(g, v, bf, p);
        if (lib.size() != ref.size()) {
          expectf(false, "lollipop v=%d b=%g T=%g: %zu tours vs oracle %zu", v, p.b, p.T,
                  lib.size(), ref.size());
          continue;
        }
        for (size_t i = 0; i < lib.size(); ++i) {
          expectf(lib[i].cycle == ref[i].cycle, "lollipop v=%d b=%g T=%g: cycle %zu differs",
                  v, p.b, p.T, i);
          expectf(std::abs(lib[i].tour.walk.total_time - ref[i].total_time) <= 1e-9,
                  "lollipop v=%d b=%g T=%g: time %zu differs", v, p.b, p.T, i);
        }
      }
    }
  }
  std::printf("       %d cover instances, %d lollipop enumerations matched\n", cover_cases,
              lollipop_cases);
  return checks_failed == 0;
}

// --------------------------------------------------------------------------
// Criterion 5: the headline experiment reproduces. Random geometric 100-node
// instance, five methods, four latency budgets, ten trials; the method
// ordering is strict at every latency and the tightest budget pins each
// method into its band.
bool criterion_5() {
  PresetInstance pi = make_preset("10x10");
  RunConfig cfg;
  cfg.seed = 1;
  cfg.trials = 10;
  std::vector<Method> methods{Method::kDijkstra, Method::kTspGreedy, Method::kTspLp1,
                              Method::kTspLpN, Method::kHybrid};
  std::vector<Seconds> latencies{2500, 3000, 5000, 20000};
  std::vector<ExperimentCell> cells = run_experiment(pi.graph, pi.params, latencies, methods, cfg);
  expectf(cells.size() == 20, "expected 20 cells, got %zu", cells.size());
  auto mean_n = [&](Method m, Seconds T) -> double {
    for (const auto& c : cells)
      if (c.method == m && c.latency == T && c.feasible) return c.mean_n;
    return -1;
  };
  for (Seconds T : latencies) {
    double dij = mean_n(Method::kDijkstra, T);
    double grd = mean_n(Method::kTspGreedy, T);
    double lp1 = mean_n(Method::kTspLp1, T);
    double lpn = mean_n(Method::kTspLpN, T);
    double hyb = mean_n(Method::kHybrid, T);
    expectf(dij > 0 && grd > 0 && lp1 > 0 && lpn > 0 && hyb > 0, "T=%g: infeasible cell", T);
    expectf(dij > grd, "T=%g: dijkstra %.2f not above greedy %.2f", T, dij, grd);
    expectf(grd >= lp1, "T=%g: greedy %.2f below single-walk LP %.2f", T, grd, lp1);
    expectf(lp1 >= lpn, "T=%g: single-walk LP %.2f below multi-walk %.2f", T, lp1, lpn);
    expectf(lpn >= hyb, "T=%g: multi-walk LP %.2f below hybrid %.2f", T, lpn, hyb);
    expectf(dij >= 2 * hyb, "T=%g: dijkstra %.2f not 2x hybrid %.2f", T, dij, hyb);
  }
  // calibrated bands at the loosest budget (mean over 10 trials, +/-30%
  // around the frozen means 31 / 9 / 9 / 8 / 8, floored at the trivial lower
  // bounds); hybrid additionally may never beat the best observed optimum 6
  struct Band {
    Method m;
    double lo, hi;
  };
  const Band bands[] = {{Method::kDijkstra, 22.4, 41.6},
                        {Method::kTspGreedy, 7.0, 13.0},
                        {Method::kTspLp1, 5.32, 9.88},
                        {Method::kTspLpN, 5.25, 9.75},
                        {Method::kHybrid, 6.0, 9.0}};
  for (const Band& b : bands) {
    double v = mean_n(b.m, 20000);
    expectf(v >= b.lo - 1e-9 && v <= b.hi + 1e-9, "T=20000 %s: mean N %.2f outside [%.2f, %.2f]",
            to_string(b.m).c_str(), v, b.lo, b.hi);
  }
  // at the loosest budget every tour needs one UAV: N == K
  for (const auto& c : cells)
    if (c.latency == 20000 && c.feasible)
      expectf(std::abs(c.mean_n - c.mean_k) <= 1e-9, "T=20000 %s: N %.2f != K %.2f",
              to_string(c.method).c_str(), c.mean_n, c.mean_k);
  std::printf("       20 cells, ordering strict at all 4 latencies, bands hold at T=20000\n");
  return checks_failed == 0;
}

// --------------------------------------------------------------------------
// Criterion 6: more candidate walks never hurt, and the effect saturates.
bool criterion_6() {
  PresetInstance pi = make_preset("6x6");
  const std::vector<int> counts{1, 2, 5, 10, 15, 20};
  std::map<int, std::vector<int>> by_count;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    int prev = 1 << 30;
    std::map<int, int> n_of;
    for (int c : counts) {
      RunConfig cfg;
      cfg.method = Method::kTspLpN;
      cfg.tsp_count = c;
      cfg.seed = seed;
      SolveResult r = solve_instance(pi.graph, pi.params, cfg);
      expect(r.sim.pass, "6x6 sweep run must simulate clean");
      expectf(r.num_uavs <= prev, "seed %llu: N rose from %d to %d when count grew to %d",
              static_cast<unsigned long long>(seed), prev, r.num_uavs, c);
      prev = r.num_uavs;
      n_of[c] = r.num_uavs;
      by_count[c].push_back(r.num_uavs);
    }
    expectf(n_of[10] == n_of[20], "seed %llu: no saturation between 10 and 20 walks (%d vs %d)",
            static_cast<unsigned long long>(seed), n_of[10], n_of[20]);
  }
  for (int c : counts) {
    auto [lo, hi] = std::minmax_element(by_count[c].begin(), by_count[c].end());
    expectf(*hi - *lo <= 1, "count %d: cross-seed spread %d exceeds 1", c, *hi - *lo);
  }
  std::printf("       N non-increasing in walk count for 3 seeds, saturated by 10 walks\n");
  return checks_failed == 0;
}

// --------------------------------------------------------------------------
// Criterion 7: the lollipop enumeration reaches hundred-strong families on
// the 100-node geometric instance and stays inside the time budget.
bool criterion_7() {
  PresetInstance pi = make_preset("10x10");
  InstanceParams p = pi.params;
  p.T = 6000;
  DistanceMap d = shortest_paths(pi.graph);
  size_t best = 0;
  NodeId best_anchor = -1;
  double worst_seconds = 0;
  for (NodeId v = 0; v < pi.graph.size(); ++v) {
    if (v == pi.graph.station()) continue;
    double t0 = now_seconds();
    std::vector<LollipopTour> ts = expand_all(pi.graph, v, d, p);
    double dt = now_seconds() - t0;
    worst_seconds = std::max(worst_seconds, dt);
    expectf(dt <= 120.0, "anchor %d took %.1f s (budget 120 s)", v, dt);
    if (ts.size() > best) {
      best = ts.size();
      best_anchor = v;
    }
  }
  expectf(best >= 100, "largest per-anchor family has %zu tours, expected >= 100", best);
  std::printf("       largest family: %zu maximal tours at anchor %d; slowest anchor %.2f s\n",
              best, best_anchor, worst_seconds);
  return checks_failed == 0;
}

// --------------------------------------------------------------------------
// Criterion 8: every method solves the 100-node geometric instance inside
// one minute wall clock.
bool criterion_8() {
  PresetInstance pi = make_preset("10x10");
  for (Method m : all_methods()) {
    RunConfig cfg;
    cfg.method = m;
    cfg.seed = 1;
    double t0 = now_seconds();
    SolveResult r = solve_instance(pi.graph, pi.params, cfg);
    double dt = now_seconds() - t0;
    expectf(r.sim.pass, "%s: simulation failed", to_string(m).c_str());
    expectf(dt <= 60.0, "%s took %.1f s (budget 60 s)", to_string(m).c_str(), dt);
    std::printf("       %-11s N=%-3d K=%-3d %6.2f s\n", to_string(m).c_str(), r.num_uavs,
                r.num_tours, dt);
  }
  return checks_failed == 0;
}

struct Criterion {
  int number;
  const char* description;
  bool (*run)();
};

const Criterion kCriteria[] = {
    {1, "all produced schedules pass simulation with zero violations", criterion_1},
    {2, "methods hit the provable optimum on constructed small instances", criterion_2},
    {3, "replication factor is tight: k passes, k-1 fails (100 random tours)", criterion_3},
    {4, "set cover and lollipop enumeration match brute-force oracles", criterion_4},
    {5, "100-node experiment reproduces the method ordering and bands", criterion_5},
    {6, "more candidate walks never increase N; saturates by 10 walks", criterion_6},
    {7, "lollipop families reach 100+ tours per anchor within time budget", criterion_7},
    {8, "every method solves the 100-node instance within 60 s", criterion_8},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 8) {
      std::fprintf(stderr, "usage: %s [criterion 1-8]\n", argv[0]);
      return 64;
    }
  }
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only && c.number != only) continue;
    checks_failed = 0;
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::printf("       unhandled exception: %s\n", e.what());
      ok = false;
    }
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c.number, c.description);
    if (!ok) ++failures;
  }
  return failures;
}
