#pragma once

// JSON and text renderings of solutions. Output is byte-identical for equal
// inputs once timings are left out.

#include <string>

#include "qroute/bench.hpp"
#include "qroute/oracles.hpp"
#include "qroute/pipeline.hpp"

namespace qroute {

struct ReportOptions {
  bool include_timings = true;
  int indent = 2;  // negative: single line
};

std::string to_json(const CvrpSolution& solution, const ReportOptions& options = {});
std::string to_json(const TspSolution& solution, const ReportOptions& options = {});
std::string to_json(const BenchResult& result, const std::vector<BenchConfig>& grid, const ReportOptions& options = {});

// Rows: one per cluster, the solver sum, the main procedure and the total;
// columns: orchestration, backend, remote access, total (seconds).
std::string timing_table(const TimingReport& timings);
std::string timing_csv(const TimingReport& timings);

// One row per route: index, demand, length, origin, node ids.
std::string routes_csv(const CvrpSolution& solution, const ProblemInstance& instance);
std::string routes_csv(const TspSolution& solution);

}  // namespace qroute
