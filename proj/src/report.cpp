#include "qroute/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace qroute {

using nlohmann::ordered_json;

namespace {

ordered_json solver_json(const SolverConfig& s) {
  ordered_json j;
  j["backend"] = to_string(s.backend);
  j["seed"] = s.seed;
  j["num_repeats"] = s.num_repeats;
  j["subqubo_size"] = s.subqubo_size;
  if (s.tabu_tenure) j["tabu_tenure"] = *s.tabu_tenure;
  if (s.tabu_iterations) j["tabu_iterations"] = *s.tabu_iterations;
  if (s.polish_iterations) j["polish_iterations"] = *s.polish_iterations;
  if (s.backend == Backend::Remote) {
    j["remote_endpoint"] = s.remote.endpoint;
    j["remote_num_reads"] = s.remote.num_reads;
    if (s.remote.fallback) j["remote_fallback"] = to_string(*s.remote.fallback);
  }
  return j;
}

ordered_json stage_json(const StageTiming& t) {
  return ordered_json{{"orchestration_s", t.orchestration},
                      {"backend_s", t.backend},
                      {"remote_access_us", t.remote_access_us},
                      {"total_s", t.total}};
}

ordered_json timings_json(const TimingReport& t) {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.clusters) rows.push_back(stage_json(row));
  j["clusters"] = std::move(rows);
  j["solver_sum"] = stage_json(t.solver_sum);
  j["main_procedure_s"] = t.main_procedure;
  j["total_s"] = t.total;
  return j;
}

ordered_json route_json(const RouteOutcome& r) {
  ordered_json j;
  j["nodes"] = r.tour.nodes;
  j["length"] = r.tour.length;
  j["from_qubo"] = r.from_qubo;
  j["attempts"] = r.attempts;
  j["variables"] = r.variables;
  j["best_energy"] = r.best_energy;
  j["subqubo_calls"] = r.subqubo_calls;
  if (r.remote_fallback_used) j["remote_fallback_used"] = true;
  return j;
}

std::string dump(const ordered_json& j, const ReportOptions& options) { return j.dump(options.indent) + "\n"; }

}  // namespace

std::string to_json(const CvrpSolution& s, const ReportOptions& options) {
  ordered_json j;
  j["instance"] = s.instance_name;
  j["problem"] = "cvrp";
  ordered_json config = solver_json(s.solver);
  config["core_stop"] = to_string(s.rule);
  config["improvement_iterations"] = s.improvement_iterations;
  j["config"] = std::move(config);
  j["total_distance"] = s.total_distance;
  ordered_json clusters = ordered_json::array();
  for (std::size_t c = 0; c < s.clustering.clusters.size(); ++c) {
    const Cluster& cl = s.clustering.clusters[c];
    ordered_json cj;
    cj["members"] = cl.members;
    cj["demand"] = cl.total_demand;
    cj["center"] = {cl.center.x, cl.center.y};
    if (c < s.routes.size()) cj["route"] = route_json(s.routes[c]);
    clusters.push_back(std::move(cj));
  }
  j["clusters"] = std::move(clusters);
  j["warnings"] = s.warnings;
  if (options.include_timings) j["timings"] = timings_json(s.timings);
  return dump(j, options);
}

std::string to_json(const TspSolution& s, const ReportOptions& options) {
  ordered_json j;
  j["instance"] = s.instance_name;
  j["problem"] = "tsp";
  j["config"] = solver_json(s.solver);
  j["length"] = s.route.tour.length;
  j["route"] = route_json(s.route);
  j["warnings"] = s.warnings;
  if (options.include_timings) j["timings"] = timings_json(s.timings);
  return dump(j, options);
}

std::string to_json(const BenchResult& result, const std::vector<BenchConfig>& grid, const ReportOptions& options) {
  auto quart = [](const std::optional<Quartiles>& q) -> ordered_json {
    if (!q) return nullptr;
    return ordered_json{{"min", q->min},       {"q1", q->q1},   {"median", q->median},
                        {"q3", q->q3},         {"max", q->max}, {"mean", q->mean}};
  };
  ordered_json j;
  ordered_json summaries = ordered_json::array();
  for (const auto& s : result.summaries) {
    ordered_json sj;
    sj["dataset"] = s.dataset;
    sj["config"] = s.config;
    sj["solver"] = solver_json(grid.at(s.config_index).solver);
    sj["core_stop"] = to_string(grid.at(s.config_index).rule);
    sj["runs"] = s.runs;
    sj["failed"] = s.failed;
    sj["fallback_runs"] = s.fallback_runs;
    sj["bks"] = s.bks ? ordered_json(*s.bks) : ordered_json(nullptr);
    sj["best"] = s.best ? ordered_json(*s.best) : ordered_json(nullptr);
    sj["distance"] = quart(s.distance);
    sj["deviation_pct"] = quart(s.deviation);
    summaries.push_back(std::move(sj));
  }
  j["summaries"] = std::move(summaries);
  ordered_json runs = ordered_json::array();
  for (const auto& r : result.runs) {
    ordered_json rj;
    rj["dataset"] = r.dataset;
    rj["config"] = r.config;
    rj["run"] = r.run;
    rj["seed"] = r.seed;
    rj["distance"] = r.distance ? ordered_json(*r.distance) : ordered_json(nullptr);
    rj["deviation_pct"] = r.deviation ? ordered_json(*r.deviation) : ordered_json(nullptr);
    rj["all_routes_from_qubo"] = r.all_routes_from_qubo;
    if (options.include_timings) rj["seconds"] = r.seconds;
    if (!r.error.empty()) rj["error"] = r.error;
    runs.push_back(std::move(rj));
  }
  j["runs"] = std::move(runs);
  return dump(j, options);
}

namespace {

std::string row(const char* name, double orch, double backend, std::uint64_t remote_us, double total) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %14.6f %12.6f %14.6f %12.6f\n", name, orch, backend,
                static_cast<double>(remote_us) / 1e6, total);
  return buf;
}

}  // namespace

std::string timing_table(const TimingReport& t) {
  char head[160];
  std::snprintf(head, sizeof head, "%-16s %14s %12s %14s %12s\n", "stage", "orchestration", "backend", "remote_access",
                "total");
  std::string out = head;
  for (std::size_t c = 0; c < t.clusters.size(); ++c) {
    const auto& r = t.clusters[c];
    const std::string name = "cluster " + std::to_string(c + 1);
    out += row(name.c_str(), r.orchestration, r.backend, r.remote_access_us, r.total);
  }
  const auto& s = t.solver_sum;
  out += row("solver sum", s.orchestration, s.backend, s.remote_access_us, s.total);
  out += row("main procedure", t.main_procedure, 0.0, 0, t.main_procedure);
  out += row("total", t.total - s.backend, s.backend, s.remote_access_us, t.total);
  return out;
}

std::string timing_csv(const TimingReport& t) {
  std::string out = "stage,orchestration_s,backend_s,remote_access_s,total_s\n";
  auto line = [&](const std::string& name, double orch, double backend, std::uint64_t us, double total) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f\n", name.c_str(), orch, backend,
                  static_cast<double>(us) / 1e6, total);
    out += buf;
  };
  for (std::size_t c = 0; c < t.clusters.size(); ++c) {
    const auto& r = t.clusters[c];
    line("cluster " + std::to_string(c + 1), r.orchestration, r.backend, r.remote_access_us, r.total);
  }
  const auto& s = t.solver_sum;
  line("solver sum", s.orchestration, s.backend, s.remote_access_us, s.total);
  line("main procedure", t.main_procedure, 0.0, 0, t.main_procedure);
  line("total", t.total - s.backend, s.backend, s.remote_access_us, t.total);
  return out;
}

namespace {

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t k = 0; k < ids.size(); ++k) out += (k ? " " : "") + std::to_string(ids[k]);
  return out;
}

}  // namespace

std::string routes_csv(const CvrpSolution& solution, const ProblemInstance& instance) {
  std::string out = "route,demand,length,from_qubo,nodes\n";
  for (std::size_t r = 0; r < solution.routes.size(); ++r) {
    const auto& route = solution.routes[r];
    long demand = 0;
    for (int id : route.tour.nodes) {
      if (id != instance.depot_id) demand += instance.demand(id);
    }
    out += std::to_string(r + 1) + "," + std::to_string(demand) + "," + std::to_string(route.tour.length) + "," +
           (route.from_qubo ? "1" : "0") + "," + join_ids(route.tour.nodes) + "\n";
  }
  return out;
}

std::string routes_csv(const TspSolution& solution) {
  return "route,demand,length,from_qubo,nodes\n1,0," + std::to_string(solution.route.tour.length) + "," +
         (solution.route.from_qubo ? "1" : "0") + "," + join_ids(solution.route.tour.nodes) + "\n";
}

}  // namespace qroute
