#include "percov/setcover.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "percov/scheduler.hpp"

namespace percov {

std::string to_string(Objective obj) {
  switch (obj) {
    case Objective::kTourCount: return "tour-count";
    case Objective::kUavCount: return "uav-count";
    case Objective::kTotalTime: return "total-time";
    case Objective::kTotalCard: return "total-card";
  }
  return "?";
}

Objective objective_from_string(const std::string& s) {
  if (s == "tour-count") return Objective::kTourCount;
  if (s == "uav-count") return Objective::kUavCount;
  if (s == "total-time") return Objective::kTotalTime;
  if (s == "total-card") return Objective::kTotalCard;
  throw std::invalid_argument("unknown objective: " + s);
}

std::string to_string(ReplicationMode mode) {
  return mode == ReplicationMode::kPerTour ? "per-tour" : "paper";
}

ReplicationMode replication_from_string(const std::string& s) {
  if (s == "per-tour") return ReplicationMode::kPerTour;
  if (s == "paper") return ReplicationMode::kPaper;
  throw std::invalid_argument("unknown replication mode: " + s);
}

std::string to_string(Proof proof) {
  switch (proof) {
    case Proof::kOptimal: return "optimal";
    case Proof::kGreedy: return "greedy";
    case Proof::kTimeLimitedIncumbent: return "time-limited-incumbent";
  }
  return "?";
}

double objective_weight(const CandidateTour& t, Objective obj, const InstanceParams& p,
                        ReplicationMode mode) {
  switch (obj) {
    case Objective::kTourCount: return 1.0;
    case Objective::kUavCount: return static_cast<double>(replication_factor(t, p, mode));
    case Objective::kTotalTime: return t.walk.total_time;
    case Objective::kTotalCard: return static_cast<double>(t.coverage.size());
  }
  return 1.0;
}

namespace {

// Fixed-width bitset over 64-bit words.
struct Bits {
  std::vector<std::uint64_t> w;

  explicit Bits(std::size_t nbits = 0) : w((nbits + 63) / 64, 0) {}
  void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1; }
  void operator|=(const Bits& o) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] |= o.w[k];
  }
  int count() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
  }
  // |this & o|
  int count_and(const Bits& o) const {
    int c = 0;
    for (std::size_t k = 0; k < w.size(); ++k) c += std::popcount(w[k] & o.w[k]);
    return c;
  }
  Bits and_with(const Bits& o) const {
    Bits r(0);
    r.w.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) r.w[k] = w[k] & o.w[k];
    return r;
  }
  // this ⊆ o
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] & ~o.w[k]) return false;
    return true;
  }
  bool any_and(const Bits& o) const {
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] & o.w[k]) return true;
    return false;
  }
  bool operator==(const Bits& o) const { return w == o.w; }
};

struct Solver {
  // Static problem data (post-validation).
  int m = 0;                       // universe size
  std::vector<Bits> cover;         // per set: coverage mask
  std::vector<double> weight;      // per set
  std::vector<int> tour_id;        // per set
  std::vector<std::vector<int>> covered_by;  // per element: set indices
  std::vector<Bits> elem_union;    // per element: union of coverages of covered_by
  std::vector<double> elem_minw;   // per element: min weight among covered_by
  std::vector<int> elem_order;     // elements by ascending static degree

  // Search state.
  Bits uncovered{0};
  std::vector<int> partial;        // set indices on current path
  double partial_cost = 0.0;
  std::vector<int> best;           // best complete selection (set indices)
  double best_cost = std::numeric_limits<double>::infinity();
  bool complete = true;
  std::chrono::steady_clock::time_point deadline;
  long long ticks = 0;
  long long nodes = 0;

  bool out_of_time() {
    if (++ticks % 2048 != 0) return false;
    return std::chrono::steady_clock::now() >= deadline;
  }

  double lower_bound() const {
    // Disjoint witnesses: no surviving set covers two witnesses, so any
    // cover pays at least the cheapest covering set per witness.
    // Scarce elements first (few covering sets block few others).
    double lb = 0.0;
    Bits blocked(static_cast<std::size_t>(m));
    for (int e : elem_order) {
      if (!uncovered.test(static_cast<std::size_t>(e))) continue;
      if (blocked.test(static_cast<std::size_t>(e))) continue;
      lb += elem_minw[static_cast<std::size_t>(e)];
      blocked |= elem_union[static_cast<std::size_t>(e)];
    }
    // Cardinality bound: u uncovered elements at <= maxgain apiece need at
    // least ceil(u / maxgain) sets, each costing at least minw.
    int u = uncovered.count();
    int maxgain = 0;
    double minw = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < cover.size(); ++s) {
      int gain = cover[s].count_and(uncovered);
      if (gain == 0) continue;
      maxgain = std::max(maxgain, gain);
      minw = std::min(minw, weight[s]);
    }
    if (maxgain > 0) lb = std::max(lb, minw * ((u + maxgain - 1) / maxgain));
    return lb;
  }

  void dfs() {
    if (!complete) return;
    ++nodes;
    if (out_of_time()) {
      complete = false;
      return;
    }
    if (uncovered.count() == 0) {
      if (partial_cost < best_cost) {
        best_cost = partial_cost;
        best = partial;
      }
      return;
    }
    if (partial_cost + lower_bound() >= best_cost) return;

    // Branch on the uncovered element with the fewest useful sets.
    int branch_elem = -1;
    int branch_deg = std::numeric_limits<int>::max();
    for (int e = 0; e < m; ++e) {
      if (!uncovered.test(static_cast<std::size_t>(e))) continue;
      int deg = 0;
      for (int s : covered_by[static_cast<std::size_t>(e)])
        if (cover[static_cast<std::size_t>(s)].any_and(uncovered)) ++deg;
      if (deg < branch_deg) {
        branch_deg = deg;
        branch_elem = e;
      }
    }

    // Candidates covering the branch element, minus locally dominated ones:
    // if another candidate's residual coverage is a superset at no greater
    // weight, any completion through the dominated set maps to one at least
    // as good through the dominator.
    std::vector<int> cands;
    std::vector<Bits> resid;
    for (int s : covered_by[static_cast<std::size_t>(branch_elem)]) {
      Bits r = cover[static_cast<std::size_t>(s)].and_with(uncovered);
      if (r.count() == 0) continue;
      cands.push_back(s);
      resid.push_back(std::move(r));
    }
    {
      std::vector<char> drop(cands.size(), 0);
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (drop[i]) continue;
        for (std::size_t j = 0; j < cands.size(); ++j) {
          if (i == j || drop[j]) continue;
          if (!resid[i].subset_of(resid[j])) continue;
          double wi = weight[static_cast<std::size_t>(cands[i])];
          double wj = weight[static_cast<std::size_t>(cands[j])];
          if (wj > wi) continue;
          if (resid[i] == resid[j] && wj == wi &&
              tour_id[static_cast<std::size_t>(cands[j])] >
                  tour_id[static_cast<std::size_t>(cands[i])])
            continue;  // symmetric pair: keep the smaller tour id
          drop[i] = 1;
          break;
        }
      }
      std::size_t kept = 0;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (drop[i]) continue;
        cands[kept] = cands[i];
        resid[kept] = std::move(resid[i]);
        ++kept;
      }
      cands.resize(kept);
      resid.resize(kept);
    }
    // Order by gain/weight, ties by smaller tour id.
    std::vector<int> gain(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) gain[i] = resid[i].count();
    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double da = gain[a] * weight[static_cast<std::size_t>(cands[b])];
      double db = gain[b] * weight[static_cast<std::size_t>(cands[a])];
      if (da != db) return da > db;
      return tour_id[static_cast<std::size_t>(cands[a])] <
             tour_id[static_cast<std::size_t>(cands[b])];
    });

    for (std::size_t oi : order) {
      int s = cands[oi];
      Bits saved = uncovered;
      for (std::size_t k = 0; k < uncovered.w.size(); ++k)
        uncovered.w[k] &= ~cover[static_cast<std::size_t>(s)].w[k];
      partial.push_back(s);
      partial_cost += weight[static_cast<std::size_t>(s)];
      dfs();
      partial_cost -= weight[static_cast<std::size_t>(s)];
      partial.pop_back();
      uncovered = saved;
      if (!complete) return;
    }
  }
};

// Validates the instance and maps coverage sets onto universe indices.
// Throws InfeasibleError listing elements no set covers.
void index_instance(const CoverInstance& ci, std::vector<Bits>* masks,
                    std::map<NodeId, int>* elem_index) {
  for (std::size_t i = 0; i < ci.universe.size(); ++i)
    (*elem_index)[ci.universe[i]] = static_cast<int>(i);
  masks->assign(ci.sets.size(), Bits(ci.universe.size()));
  for (std::size_t s = 0; s < ci.sets.size(); ++s) {
    if (!(ci.sets[s].weight > 0))
      throw std::invalid_argument("cover set weight must be positive");
    for (NodeId v : ci.sets[s].coverage) {
      auto it = elem_index->find(v);
      if (it != elem_index->end()) (*masks)[s].set(static_cast<std::size_t>(it->second));
    }
  }
  Bits all(ci.universe.size());
  for (const auto& mk : *masks) all |= mk;
  std::vector<NodeId> missing;
  for (std::size_t i = 0; i < ci.universe.size(); ++i)
    if (!all.test(i)) missing.push_back(ci.universe[i]);
  if (!missing.empty()) throw InfeasibleError("universe elements covered by no set", missing);
}

Selection finish(const CoverInstance& ci, const std::vector<int>& set_indices, double cost,
                 Proof proof) {
  Selection sel;
  for (int s : set_indices) sel.chosen.push_back(ci.sets[static_cast<std::size_t>(s)].tour_id);
  std::sort(sel.chosen.begin(), sel.chosen.end());
  sel.objective_value = cost;
  sel.proof = proof;
  return sel;
}

std::vector<int> greedy_indices(const CoverInstance& ci, const std::vector<Bits>& masks,
                                double* cost_out) {
  Bits uncovered(ci.universe.size());
  for (std::size_t i = 0; i < ci.universe.size(); ++i) uncovered.set(i);
  std::vector<int> picked;
  double cost = 0.0;
  while (uncovered.count() > 0) {
    int best_s = -1;
    int best_gain = 0;
    for (std::size_t s = 0; s < ci.sets.size(); ++s) {
      int gain = masks[s].count_and(uncovered);
      if (gain == 0) continue;
      bool better = false;
      if (best_s < 0) {
        better = true;
      } else {
        double lhs = static_cast<double>(gain) * ci.sets[static_cast<std::size_t>(best_s)].weight;
        double rhs = static_cast<double>(best_gain) * ci.sets[s].weight;
        if (lhs != rhs)
          better = lhs > rhs;
        else
          better = ci.sets[s].tour_id < ci.sets[static_cast<std::size_t>(best_s)].tour_id;
      }
      if (better) {
        best_s = static_cast<int>(s);
        best_gain = gain;
      }
    }
    for (std::size_t k = 0; k < uncovered.w.size(); ++k)
      uncovered.w[k] &= ~masks[static_cast<std::size_t>(best_s)].w[k];
    picked.push_back(best_s);
    cost += ci.sets[static_cast<std::size_t>(best_s)].weight;
  }
  *cost_out = cost;
  return picked;
}

}  // namespace

Selection greedy_cover(const CoverInstance& ci) {
  std::vector<Bits> masks;
  std::map<NodeId, int> elem_index;
  index_instance(ci, &masks, &elem_index);
  double cost = 0.0;
  std::vector<int> picked = greedy_indices(ci, masks, &cost);
  return finish(ci, picked, cost, Proof::kGreedy);
}

Selection exact_cover(const CoverInstance& ci, double time_limit_seconds) {
  std::vector<Bits> masks;
  std::map<NodeId, int> elem_index;
  index_instance(ci, &masks, &elem_index);
  const int m = static_cast<int>(ci.universe.size());

  // --- Root reductions on live element/set index lists. ---
  std::vector<char> elem_live(static_cast<std::size_t>(m), 1);
  std::vector<char> set_live(ci.sets.size(), 1);
  std::vector<int> forced;  // set indices forced into every solution
  double forced_cost = 0.0;

  auto live_mask = [&](std::size_t s) {
    Bits b(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e)
      if (elem_live[static_cast<std::size_t>(e)] && masks[s].test(static_cast<std::size_t>(e)))
        b.set(static_cast<std::size_t>(e));
    return b;
  };

  bool changed = true;
  while (changed) {
    changed = false;

    // Set dominance: drop A when coverage(A) ⊆ coverage(B), w(B) ≤ w(A).
    std::vector<Bits> lm(ci.sets.size(), Bits(0));
    for (std::size_t s = 0; s < ci.sets.size(); ++s)
      if (set_live[s]) lm[s] = live_mask(s);
    for (std::size_t a = 0; a < ci.sets.size(); ++a) {
      if (!set_live[a]) continue;
      if (lm[a].count() == 0) {
        set_live[a] = 0;
        changed = true;
        continue;
      }
      for (std::size_t b2 = 0; b2 < ci.sets.size(); ++b2) {
        if (a == b2 || !set_live[b2]) continue;
        if (!lm[a].subset_of(lm[b2])) continue;
        if (ci.sets[b2].weight > ci.sets[a].weight) continue;
        if (lm[a] == lm[b2] && ci.sets[b2].weight == ci.sets[a].weight) {
          // Symmetric pair: keep the smaller tour id.
          if (ci.sets[b2].tour_id > ci.sets[a].tour_id) continue;
        }
        set_live[a] = 0;
        changed = true;
        break;
      }
    }

    // Element dominance: when every set covering e also covers f, f is free.
    std::vector<Bits> esets(static_cast<std::size_t>(m), Bits(ci.sets.size()));
    for (std::size_t s = 0; s < ci.sets.size(); ++s) {
      if (!set_live[s]) continue;
      for (int e = 0; e < m; ++e)
        if (elem_live[static_cast<std::size_t>(e)] && masks[s].test(static_cast<std::size_t>(e)))
          esets[static_cast<std::size_t>(e)].set(s);
    }
    for (int e = 0; e < m; ++e) {
      if (!elem_live[static_cast<std::size_t>(e)]) continue;
      for (int f = 0; f < m; ++f) {
        if (e == f || !elem_live[static_cast<std::size_t>(f)]) continue;
        const auto& se = esets[static_cast<std::size_t>(e)];
        const auto& sf = esets[static_cast<std::size_t>(f)];
        if (!se.subset_of(sf)) continue;
        if (se == sf && f < e) continue;  // equal support: drop the larger index
        elem_live[static_cast<std::size_t>(f)] = 0;
        changed = true;
      }
    }

    // Mandatory sets: a live element with a single live covering set.
    for (int e = 0; e < m; ++e) {
      if (!elem_live[static_cast<std::size_t>(e)]) continue;
      int only = -1;
      int deg = 0;
      for (std::size_t s = 0; s < ci.sets.size(); ++s) {
        if (!set_live[s] || !masks[s].test(static_cast<std::size_t>(e))) continue;
        ++deg;
        only = static_cast<int>(s);
        if (deg > 1) break;
      }
      if (deg == 1) {
        forced.push_back(only);
        forced_cost += ci.sets[static_cast<std::size_t>(only)].weight;
        set_live[static_cast<std::size_t>(only)] = 0;
        for (int f = 0; f < m; ++f)
          if (masks[static_cast<std::size_t>(only)].test(static_cast<std::size_t>(f)))
            elem_live[static_cast<std::size_t>(f)] = 0;
        changed = true;
      }
    }
  }

  // --- Residual problem for the branch and bound. ---
  std::vector<int> live_elems;
  for (int e = 0; e < m; ++e)
    if (elem_live[static_cast<std::size_t>(e)]) live_elems.push_back(e);

  if (live_elems.empty()) {
    std::sort(forced.begin(), forced.end());
    return finish(ci, forced, forced_cost, Proof::kOptimal);
  }

  Solver sv;
  sv.m = static_cast<int>(live_elems.size());
  std::vector<int> elem_pos(static_cast<std::size_t>(m), -1);
  for (std::size_t i = 0; i < live_elems.size(); ++i)
    elem_pos[static_cast<std::size_t>(live_elems[i])] = static_cast<int>(i);
  std::vector<int> resid_orig;  // residual set index -> original set index
  for (std::size_t s = 0; s < ci.sets.size(); ++s) {
    if (!set_live[s]) continue;
    Bits b(live_elems.size());
    for (int e : live_elems)
      if (masks[s].test(static_cast<std::size_t>(e)))
        b.set(static_cast<std::size_t>(elem_pos[static_cast<std::size_t>(e)]));
    if (b.count() == 0) continue;
    sv.cover.push_back(std::move(b));
    sv.weight.push_back(ci.sets[s].weight);
    sv.tour_id.push_back(ci.sets[s].tour_id);
    resid_orig.push_back(static_cast<int>(s));
  }
  sv.covered_by.assign(static_cast<std::size_t>(sv.m), {});
  sv.elem_union.assign(static_cast<std::size_t>(sv.m), Bits(static_cast<std::size_t>(sv.m)));
  sv.elem_minw.assign(static_cast<std::size_t>(sv.m),
                      std::numeric_limits<double>::infinity());
  for (std::size_t s = 0; s < sv.cover.size(); ++s) {
    for (int e = 0; e < sv.m; ++e) {
      if (!sv.cover[s].test(static_cast<std::size_t>(e))) continue;
      sv.covered_by[static_cast<std::size_t>(e)].push_back(static_cast<int>(s));
      sv.elem_union[static_cast<std::size_t>(e)] |= sv.cover[s];
      sv.elem_minw[static_cast<std::size_t>(e)] =
          std::min(sv.elem_minw[static_cast<std::size_t>(e)], sv.weight[s]);
    }
  }
  sv.elem_order.resize(static_cast<std::size_t>(sv.m));
  for (int e = 0; e < sv.m; ++e) sv.elem_order[static_cast<std::size_t>(e)] = e;
  std::sort(sv.elem_order.begin(), sv.elem_order.end(), [&](int a, int b) {
    std::size_t da = sv.covered_by[static_cast<std::size_t>(a)].size();
    std::size_t db = sv.covered_by[static_cast<std::size_t>(b)].size();
    return da != db ? da < db : a < b;
  });

  // Greedy warm starts (best-ratio and most-coverage variants); the better
  // one becomes the first incumbent.
  {
    auto run_greedy = [&](bool by_ratio) {
      Bits unc(static_cast<std::size_t>(sv.m));
      for (int e = 0; e < sv.m; ++e) unc.set(static_cast<std::size_t>(e));
      std::vector<int> picked;
      double cost = 0.0;
      while (unc.count() > 0) {
        int best_s = -1;
        int best_gain = 0;
        for (std::size_t s = 0; s < sv.cover.size(); ++s) {
          int gain = sv.cover[s].count_and(unc);
          if (gain == 0) continue;
          bool better;
          if (best_s < 0) {
            better = true;
          } else if (by_ratio) {
            double lhs = static_cast<double>(gain) * sv.weight[static_cast<std::size_t>(best_s)];
            double rhs = static_cast<double>(best_gain) * sv.weight[s];
            better = lhs != rhs ? lhs > rhs
                                : sv.tour_id[s] < sv.tour_id[static_cast<std::size_t>(best_s)];
          } else {
            better = gain != best_gain
                         ? gain > best_gain
                         : sv.tour_id[s] < sv.tour_id[static_cast<std::size_t>(best_s)];
          }
          if (better) {
            best_s = static_cast<int>(s);
            best_gain = gain;
          }
        }
        for (std::size_t k = 0; k < unc.w.size(); ++k)
          unc.w[k] &= ~sv.cover[static_cast<std::size_t>(best_s)].w[k];
        picked.push_back(best_s);
        cost += sv.weight[static_cast<std::size_t>(best_s)];
      }
      return std::make_pair(picked, cost);
    };
    auto [p1, c1] = run_greedy(true);
    auto [p2, c2] = run_greedy(false);
    if (c2 < c1) {
      sv.best = std::move(p2);
      sv.best_cost = c2;
    } else {
      sv.best = std::move(p1);
      sv.best_cost = c1;
    }
  }

  sv.uncovered = Bits(static_cast<std::size_t>(sv.m));
  for (int e = 0; e < sv.m; ++e) sv.uncovered.set(static_cast<std::size_t>(e));
  sv.deadline = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(time_limit_seconds));
  if (verbose())
    vlog("cover: " + std::to_string(ci.sets.size()) + " sets -> " +
         std::to_string(sv.cover.size()) + " after reduction, " +
         std::to_string(sv.m) + "/" + std::to_string(m) + " elements, " +
         std::to_string(forced.size()) + " forced");
  sv.dfs();
  if (verbose())
    vlog("cover: " + std::to_string(sv.nodes) + " nodes, " +
         (sv.complete ? "optimal " : "time-limited ") + std::to_string(sv.best_cost));

  std::vector<int> result = forced;
  for (int s : sv.best) result.push_back(resid_orig[static_cast<std::size_t>(s)]);
  std::sort(result.begin(), result.end());
  return finish(ci, result, forced_cost + sv.best_cost,
                sv.complete ? Proof::kOptimal : Proof::kTimeLimitedIncumbent);
}

CoverInstance make_cover_instance(const std::vector<CandidateTour>& pool, const Graph& g,
                                  Objective obj, const InstanceParams& p, ReplicationMode mode) {
  CoverInstance ci;
  for (NodeId v = 0; v < g.size(); ++v) ci.universe.push_back(v);
  for (const auto& t : pool) {
    CoverSet cs;
    cs.tour_id = t.id;
    cs.coverage = t.coverage;
    cs.weight = objective_weight(t, obj, p, mode);
    ci.sets.push_back(std::move(cs));
  }
  return ci;
}

Selection solve_cover(const std::vector<CandidateTour>& pool, const Graph& g, Objective obj,
                      const InstanceParams& p, ReplicationMode mode, double time_limit_seconds) {
  CoverInstance ci = make_cover_instance(pool, g, obj, p, mode);
  return exact_cover(ci, time_limit_seconds);
}

std::string export_lp(const CoverInstance& ci) {
  std::ostringstream out;
  out << "\\ weighted set cover: one binary per tour, one constraint per node\n";
  out << "Minimize\n obj:";
  for (std::size_t s = 0; s < ci.sets.size(); ++s) {
    out << (s == 0 ? " " : " + ") << ci.sets[s].weight << " x" << ci.sets[s].tour_id;
  }
  out << "\nSubject To\n";
  for (NodeId v : ci.universe) {
    out << " c" << v << ":";
    bool first = true;
    for (const auto& cs : ci.sets) {
      if (!std::binary_search(cs.coverage.begin(), cs.coverage.end(), v)) continue;
      out << (first ? " " : " + ") << "x" << cs.tour_id;
      first = false;
    }
    out << " >= 1\n";
  }
  out << "Binaries\n";
  for (const auto& cs : ci.sets) out << " x" << cs.tour_id;
  out << "\nEnd\n";
  return out.str();
}

}  // namespace percov
