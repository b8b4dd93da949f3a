#pragma once

// Repeated seeded runs over datasets and a configuration grid, with the
// deviation statistics needed for boxplots.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qroute/clustering.hpp"
#include "qroute/decomposition.hpp"
#include "qroute/instance.hpp"

namespace qroute {

using BksTable = std::map<std::string, double>;

// CSV with a "dataset,bks" header.
BksTable parse_bks(std::string_view text);
BksTable load_bks(const std::filesystem::path& path);

// Instance name without a trailing ".tsp"/".vrp".
std::string dataset_key(const ProblemInstance& instance);

struct BenchConfig {
  std::string label;
  CoreStopRule rule = CoreStopRule::MaxDistance;  // CVRP only
  SolverConfig solver;
  std::size_t improvement_iterations = kDefaultImprovementIterations;
};

// "<rule>/<backend>/r<num_repeats>/s<subqubo_size>"
std::string default_label(const BenchConfig& config, ProblemKind kind);

struct BenchRun {
  std::string dataset;
  std::string config;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> distance;  // empty when the run failed
  std::optional<double> deviation;       // percent; empty without a BKS
  bool all_routes_from_qubo = false;
  std::size_t warnings = 0;
  double seconds = 0.0;
  std::string error;
};

struct Quartiles {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

// Linear interpolation between order statistics. Throws on empty input.
Quartiles quartiles(std::vector<double> values);

struct BenchSummary {
  std::string dataset;
  std::string config;
  std::size_t config_index = 0;  // into the grid
  std::size_t runs = 0;
  std::size_t failed = 0;
  std::size_t fallback_runs = 0;  // runs with a nearest-neighbour route
  std::optional<double> bks;
  std::optional<std::int64_t> best;
  std::optional<Quartiles> distance;
  std::optional<Quartiles> deviation;
};

struct BenchResult {
  std::vector<BenchRun> runs;  // dataset, config, run order
  std::vector<BenchSummary> summaries;
};

struct BenchDataset {
  std::string key;
  ProblemInstance instance;
};

// Run r of every configuration uses seed solver.seed + r. Runs are spread
// over `workers` threads (0: hardware concurrency).
BenchResult run_bench(const std::vector<BenchDataset>& datasets, const std::vector<BenchConfig>& grid,
                      std::size_t runs, const BksTable& bks, std::size_t workers = 0);

std::string bench_runs_csv(const BenchResult& result);
std::string bench_summary_csv(const BenchResult& result, const std::vector<BenchConfig>& grid);

// Deviation in percent, two decimals as text.
std::string format_percent(double value);

}  // namespace qroute
