#include "qroute/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "qroute/error.hpp"
#include "stopwatch.hpp"

namespace qroute {

void add_io_time(TimingReport& timings, double seconds) {
  timings.main_procedure += seconds;
  timings.total += seconds;
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t route, std::size_t attempt) {
  if (route == 0 && attempt == 0) return base;
  // splitmix64 step over the mixed coordinates
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (route * 131 + attempt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Tour nearest_neighbor_tour(const DistanceMatrix& d, const std::vector<int>& node_ids) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    const std::size_t from = order.back();
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!used[v] && (best == n || d(from, v) < d(from, best))) best = v;
    }
    used[best] = true;
    order.push_back(best);
  }
  Tour t;
  for (auto v : order) t.nodes.push_back(node_ids[v]);
  t.length = cycle_length(d, order);
  return t;
}

RouteOutcome solve_route(const DistanceMatrix& d, const std::vector<int>& node_ids, const SolverConfig& solver,
                         std::size_t route_index, std::vector<std::string>& warnings, StageTiming& timing,
                         double& build_seconds) {
  Stopwatch build_clock;
  TspQuboSpec spec{d, node_ids, std::nullopt, 1.0};
  const TspQubo model = build_tsp_qubo(spec);
  build_seconds += build_clock.seconds();

  RouteOutcome out;
  out.variables = model.layout.dim();
  Stopwatch clock;
  for (std::size_t attempt = 0; attempt <= kDecodeRetries; ++attempt) {
    SolverConfig config = solver;
    config.seed = derive_seed(solver.seed, route_index, attempt);
    const SolveReport report = solve(model.qubo, config);
    ++out.attempts;
    out.best_energy = report.best.total_energy;
    out.subqubo_calls += report.subqubo_calls;
    out.remote_fallback_used = out.remote_fallback_used || report.fallback_used;
    timing.backend += report.backend_time;
    timing.remote_access_us += report.remote_access_us;
    for (const auto& diag : report.diagnostics) warnings.push_back("route " + std::to_string(route_index) + ": " + diag);

    const TourDecoding decoded = decode_tour(model.layout, d, report.best.bits);
    if (decoded.tour) {
      out.tour = *decoded.tour;
      out.from_qubo = true;
      break;
    }
    warnings.push_back("route " + std::to_string(route_index) + ": sample violates " +
                       std::to_string(decoded.violations.size()) + " constraint(s) on attempt " +
                       std::to_string(attempt + 1));
  }
  if (!out.from_qubo) {
    out.tour = nearest_neighbor_tour(d, node_ids);
    warnings.push_back("route " + std::to_string(route_index) + ": no valid sample after " +
                       std::to_string(out.attempts) + " attempts, using nearest-neighbour order");
  }
  timing.total += clock.seconds();
  timing.orchestration = std::max(0.0, timing.total - timing.backend);
  return out;
}

namespace {

void sum_rows(TimingReport& t) {
  t.solver_sum = {};
  for (const auto& row : t.clusters) {
    t.solver_sum.orchestration += row.orchestration;
    t.solver_sum.backend += row.backend;
    t.solver_sum.total += row.total;
    t.solver_sum.remote_access_us += row.remote_access_us;
  }
}

}  // namespace

CvrpSolution solve_cvrp(const ProblemInstance& instance, CoreStopRule rule, const SolverConfig& solver,
                        std::size_t improvement_iterations) {
  if (instance.kind != ProblemKind::Cvrp) throw InvalidInput("solve_cvrp needs a CVRP instance");
  solver.validate();
  Stopwatch overall;
  Stopwatch main_clock;

  CvrpSolution out;
  out.instance_name = instance.name;
  out.rule = rule;
  out.solver = solver;
  out.improvement_iterations = improvement_iterations;

  out.clustering = improve_clusters(instance, generate_clusters(instance, rule), improvement_iterations);
  const DistanceMatrix full = distance_matrix(instance);
  double main_seconds = main_clock.seconds();

  if (instance.min_vehicles && out.clustering.clusters.size() > static_cast<std::size_t>(*instance.min_vehicles)) {
    out.warnings.push_back("clustering uses " + std::to_string(out.clustering.clusters.size()) +
                           " vehicles, more than the " + std::to_string(*instance.min_vehicles) +
                           " in the instance name");
  }

  const auto depot = static_cast<std::size_t>(instance.depot_id - 1);
  for (std::size_t c = 0; c < out.clustering.clusters.size(); ++c) {
    Stopwatch prep;
    const Cluster& cluster = out.clustering.clusters[c];
    std::vector<std::size_t> rows{depot};
    std::vector<int> ids{instance.depot_id};
    for (int m : cluster.members) {
      rows.push_back(static_cast<std::size_t>(m - 1));
      ids.push_back(m);
    }
    const DistanceMatrix d = full.restrict(rows);
    main_seconds += prep.seconds();

    StageTiming timing;
    double build_seconds = 0.0;
    out.routes.push_back(solve_route(d, ids, solver, c, out.warnings, timing, build_seconds));
    main_seconds += build_seconds;
    out.timings.clusters.push_back(timing);
    out.total_distance += out.routes.back().tour.length;
  }
  sum_rows(out.timings);
  out.timings.main_procedure = main_seconds;
  out.timings.total = overall.seconds();
  return out;
}

TspSolution solve_tsp(const ProblemInstance& instance, const SolverConfig& solver) {
  solver.validate();
  if (instance.size() < 1) throw InvalidInput("instance has no nodes");
  Stopwatch overall;
  Stopwatch main_clock;
  TspSolution out;
  out.instance_name = instance.name;
  out.solver = solver;

  const DistanceMatrix d = distance_matrix(instance);
  std::vector<int> ids;
  for (const auto& node : instance.nodes) ids.push_back(node.id);
  double main_seconds = main_clock.seconds();

  StageTiming timing;
  double build_seconds = 0.0;
  out.route = solve_route(d, ids, solver, 0, out.warnings, timing, build_seconds);
  out.timings.clusters.push_back(timing);
  sum_rows(out.timings);
  out.timings.main_procedure = main_seconds + build_seconds;
  out.timings.total = overall.seconds();
  return out;
}

namespace {

std::int64_t closed_length(const DistanceMatrix& d, const std::vector<int>& ids) {
  std::int64_t len = 0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto a = static_cast<std::size_t>(ids[k] - 1);
    const auto b = static_cast<std::size_t>(ids[(k + 1) % ids.size()] - 1);
    len += d(a, b);
  }
  return len;
}

bool ids_in_range(const ProblemInstance& instance, const std::vector<int>& ids) {
  return std::all_of(ids.begin(), ids.end(),
                     [&](int id) { return id >= 1 && static_cast<std::size_t>(id) <= instance.size(); });
}

}  // namespace

std::vector<std::string> validate_solution(const ProblemInstance& instance, const CvrpSolution& solution) {
  std::vector<std::string> problems;
  const DistanceMatrix d = distance_matrix(instance);
  std::vector<int> seen(instance.size() + 1, 0);
  std::int64_t total = 0;
  for (std::size_t r = 0; r < solution.routes.size(); ++r) {
    const auto& nodes = solution.routes[r].tour.nodes;
    const std::string tag = "route " + std::to_string(r);
    if (nodes.empty() || nodes.front() != instance.depot_id) {
      problems.push_back(tag + " does not start at the depot");
      continue;
    }
    if (!ids_in_range(instance, nodes)) {
      problems.push_back(tag + " references an unknown node");
      continue;
    }
    long load = 0;
    for (std::size_t k = 1; k < nodes.size(); ++k) {
      if (nodes[k] == instance.depot_id) {
        problems.push_back(tag + " visits the depot twice");
        continue;
      }
      ++seen[static_cast<std::size_t>(nodes[k])];
      load += instance.demand(nodes[k]);
    }
    if (load > instance.capacity)
      problems.push_back(tag + " carries " + std::to_string(load) + " > capacity " + std::to_string(instance.capacity));
    const std::int64_t len = closed_length(d, nodes);
    if (len != solution.routes[r].tour.length)
      problems.push_back(tag + " reports length " + std::to_string(solution.routes[r].tour.length) + ", actual " +
                         std::to_string(len));
    total += len;
  }
  for (int id : instance.customers()) {
    const int count = seen[static_cast<std::size_t>(id)];
    if (count != 1) problems.push_back("customer " + std::to_string(id) + " visited " + std::to_string(count) + " times");
  }
  if (total != solution.total_distance)
    problems.push_back("total distance " + std::to_string(solution.total_distance) + " differs from the sum of routes " +
                       std::to_string(total));
  return problems;
}

std::vector<std::string> validate_solution(const ProblemInstance& instance, const TspSolution& solution) {
  std::vector<std::string> problems;
  const auto& nodes = solution.route.tour.nodes;
  if (!ids_in_range(instance, nodes)) return {"tour references an unknown node"};
  std::set<int> unique(nodes.begin(), nodes.end());
  if (nodes.size() != instance.size() || unique.size() != instance.size())
    problems.push_back("tour is not a permutation of the " + std::to_string(instance.size()) + " nodes");
  const std::int64_t len = closed_length(distance_matrix(instance), nodes);
  if (len != solution.route.tour.length)
    problems.push_back("tour reports length " + std::to_string(solution.route.tour.length) + ", actual " +
                       std::to_string(len));
  return problems;
}

}  // namespace qroute
