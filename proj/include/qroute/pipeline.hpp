#pragma once

// Hybrid routing pipeline: classical clustering, then one routing QUBO per
// cluster (depot included) handed to the decomposition solver.

#include <cstdint>
#include <string>
#include <vector>

#include "qroute/clustering.hpp"
#include "qroute/decomposition.hpp"
#include "qroute/formulations.hpp"
#include "qroute/instance.hpp"

namespace qroute {

inline constexpr std::size_t kDecodeRetries = 3;

// Timing columns: orchestration is local CPU work around the backend,
// backend is time inside subQUBO solves, remote access is what the
// sampling service reports (zero for local backends).
struct StageTiming {
  double orchestration = 0.0;
  double backend = 0.0;
  double total = 0.0;
  std::uint64_t remote_access_us = 0;
};

struct TimingReport {
  std::vector<StageTiming> clusters;
  StageTiming solver_sum;       // sum over the cluster rows
  double main_procedure = 0.0;  // clustering, QUBO construction, decoding, I/O
  double total = 0.0;           // wall clock of the whole call, I/O included
};

// Adds file loading or output time to the main procedure and the total.
void add_io_time(TimingReport& timings, double seconds);

struct RouteOutcome {
  Tour tour;                  // starts at the anchor (depot for CVRP)
  bool from_qubo = false;     // false: nearest-neighbour fallback
  std::size_t attempts = 0;   // solves run, retries included
  std::size_t variables = 0;
  double best_energy = 0.0;   // total energy of the last solve
  std::size_t subqubo_calls = 0;
  bool remote_fallback_used = false;
};

struct CvrpSolution {
  std::string instance_name;
  Clustering clustering;
  std::vector<RouteOutcome> routes;  // one per cluster
  std::int64_t total_distance = 0;
  std::vector<std::string> warnings;
  TimingReport timings;

  CoreStopRule rule = CoreStopRule::MaxDistance;
  SolverConfig solver;
  std::size_t improvement_iterations = kDefaultImprovementIterations;
};

struct TspSolution {
  std::string instance_name;
  RouteOutcome route;
  std::vector<std::string> warnings;
  TimingReport timings;
  SolverConfig solver;
};

// Seed for attempt `attempt` of route `route`; attempt 0 of route 0 uses
// the base seed itself.
std::uint64_t derive_seed(std::uint64_t base, std::size_t route, std::size_t attempt);

// Closed tour over `d` by the routing QUBO, retried with fresh seeds when
// the sample does not decode, then nearest neighbour from local node 0.
RouteOutcome solve_route(const DistanceMatrix& d, const std::vector<int>& node_ids, const SolverConfig& solver,
                         std::size_t route_index, std::vector<std::string>& warnings, StageTiming& timing,
                         double& build_seconds);

Tour nearest_neighbor_tour(const DistanceMatrix& d, const std::vector<int>& node_ids);

CvrpSolution solve_cvrp(const ProblemInstance& instance, CoreStopRule rule, const SolverConfig& solver,
                        std::size_t improvement_iterations = kDefaultImprovementIterations);

TspSolution solve_tsp(const ProblemInstance& instance, const SolverConfig& solver);

// Re-checks a solution against the raw instance; empty when valid.
std::vector<std::string> validate_solution(const ProblemInstance& instance, const CvrpSolution& solution);
std::vector<std::string> validate_solution(const ProblemInstance& instance, const TspSolution& solution);

}  // namespace qroute
