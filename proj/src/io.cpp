#include "percov/io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace percov {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void warn_unknown(const json& obj, const std::set<std::string>& known,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) vlog("ignoring unknown field '" + it.key() + "' in " + where);
}

json params_to_json(const InstanceParams& p) {
  return json{{"b", p.b}, {"B", p.B}, {"T", p.T}};
}

InstanceParams params_from_json(const json& j) {
  warn_unknown(j, {"b", "B", "T"}, "params");
  InstanceParams p;
  p.b = j.at("b").get<Seconds>();
  p.B = j.at("B").get<Seconds>();
  p.T = j.at("T").get<Seconds>();
  return p;
}

json tour_to_json(const CandidateTour& t) {
  json arr = json::array();
  for (const auto& [v, at] : t.arrival) arr.push_back(json::array({v, at}));
  return json{{"id", t.id},
              {"origin", to_string(t.origin)},
              {"nodes", t.walk.nodes},
              {"time", t.walk.total_time},
              {"arrivals", arr},
              {"coverage", t.coverage}};
}

CandidateTour tour_from_json(const json& j) {
  warn_unknown(j, {"id", "origin", "nodes", "time", "arrivals", "coverage"}, "tour");
  CandidateTour t;
  t.id = j.at("id").get<int>();
  t.origin = tour_origin_from_string(j.at("origin").get<std::string>());
  t.walk.nodes = j.at("nodes").get<std::vector<NodeId>>();
  t.walk.total_time = j.at("time").get<Seconds>();
  for (const auto& pr : j.at("arrivals"))
    t.arrival.emplace_back(pr.at(0).get<NodeId>(), pr.at(1).get<Seconds>());
  t.coverage = j.at("coverage").get<std::vector<NodeId>>();
  return t;
}

}  // namespace

std::string instance_to_json(const Graph& g, const InstanceParams& p) {
  json nodes = json::array();
  for (const auto& n : g.nodes()) nodes.push_back(json{{"id", n.id}, {"x", n.x}, {"y", n.y}});
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back(json{{"u", e.u}, {"v", e.v}, {"time", e.time}});
  json j{{"nodes", nodes},
         {"edges", edges},
         {"station", g.station()},
         {"params", params_to_json(p)}};
  return j.dump(2) + "\n";
}

InstanceFile instance_from_json(const std::string& text) {
  json j = json::parse(text);
  warn_unknown(j, {"nodes", "edges", "station", "params"}, "instance");
  std::vector<Node> nodes;
  for (const auto& jn : j.at("nodes")) {
    warn_unknown(jn, {"id", "x", "y"}, "node");
    Node n;
    n.id = jn.at("id").get<NodeId>();
    n.x = jn.value("x", 0.0);
    n.y = jn.value("y", 0.0);
    nodes.push_back(n);
  }
  std::vector<EdgeRec> edges;
  for (const auto& je : j.at("edges")) {
    warn_unknown(je, {"u", "v", "time"}, "edge");
    edges.push_back({je.at("u").get<NodeId>(), je.at("v").get<NodeId>(),
                     je.at("time").get<Seconds>()});
  }
  NodeId station = j.at("station").get<NodeId>();
  InstanceFile f{Graph(std::move(nodes), std::move(edges), station), {}, false};
  if (j.contains("params")) {
    f.params = params_from_json(j.at("params"));
    f.has_params = true;
  }
  return f;
}

InstanceFile load_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

void save_instance(const std::string& path, const Graph& g, const InstanceParams& p) {
  write_file(path, instance_to_json(g, p));
}

std::string solution_to_json(const Graph& g, const InstanceParams& p, const RunConfig& cfg,
                             const SolveResult& r) {
  json tours = json::array();
  std::set<int> chosen(r.selection.chosen.begin(), r.selection.chosen.end());
  for (const auto& t : r.pool)
    if (chosen.count(t.id)) tours.push_back(tour_to_json(t));

  json dispatches = json::array();
  for (const auto& d : r.schedule.dispatches)
    dispatches.push_back(
        json{{"uav", d.uav}, {"tour", d.tour}, {"t0", d.t0}, {"period", d.period}});

  json ages = json::object();
  for (const auto& [v, age] : r.sim.max_age) ages[std::to_string(v)] = age;

  json j{{"params", params_to_json(p)},
         {"method", to_string(cfg.method)},
         {"objective", to_string(cfg.objective)},
         {"replication", to_string(cfg.replication)},
         {"seed", cfg.seed},
         {"regime", to_string(r.feas.regime)},
         {"graph_size", to_string(r.feas.size)},
         {"proof", to_string(r.selection.proof)},
         {"objective_value", r.selection.objective_value},
         {"tours", tours},
         {"dispatches", dispatches},
         {"N", r.num_uavs},
         {"K", r.num_tours},
         {"wall_seconds", r.wall_seconds},
         {"sim",
          json{{"pass", r.sim.pass},
               {"horizon", r.sim.horizon},
               {"battery_violations", r.sim.battery_violations},
               {"latency_violations", r.sim.latency_violations},
               {"max_age", ages}}}};
  (void)g;
  return j.dump(2) + "\n";
}

void save_solution(const std::string& path, const Graph& g, const InstanceParams& p,
                   const RunConfig& cfg, const SolveResult& r) {
  write_file(path, solution_to_json(g, p, cfg, r));
}

SolutionFile solution_from_json(const std::string& text) {
  json j = json::parse(text);
  SolutionFile s;
  s.params = params_from_json(j.at("params"));
  for (const auto& jt : j.at("tours")) s.tours.push_back(tour_from_json(jt));
  for (const auto& jd : j.at("dispatches")) {
    warn_unknown(jd, {"uav", "tour", "t0", "period"}, "dispatch");
    Dispatch d;
    d.uav = jd.at("uav").get<int>();
    d.tour = jd.at("tour").get<int>();
    d.t0 = jd.at("t0").get<Seconds>();
    d.period = jd.at("period").get<Seconds>();
    s.dispatches.push_back(d);
  }
  s.num_uavs = j.at("N").get<int>();
  s.num_tours = j.at("K").get<int>();
  return s;
}

SolutionFile load_solution(const std::string& path) {
  return solution_from_json(read_file(path));
}

std::string plot_data_json(const Graph& g, const SolutionFile& s) {
  json polylines = json::array();
  for (const auto& t : s.tours) {
    json pts = json::array();
    for (NodeId v : t.walk.nodes) {
      const Node& n = g.node(v);
      pts.push_back(json::array({n.x, n.y}));
    }
    polylines.push_back(json{{"tour", t.id}, {"points", pts}});
  }
  json timeline = json::array();
  for (const auto& d : s.dispatches)
    timeline.push_back(
        json{{"uav", d.uav}, {"tour", d.tour}, {"t0", d.t0}, {"period", d.period}});
  json j{{"polylines", polylines}, {"timeline", timeline}};
  return j.dump(2) + "\n";
}

}  // namespace percov
