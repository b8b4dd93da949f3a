#include "qroute/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "qroute/error.hpp"
#include "qroute/pipeline.hpp"
#include "stopwatch.hpp"
#include "text.hpp"

namespace qroute {

BksTable parse_bks(std::string_view text) {
  BksTable table;
  bool header = true;
  std::size_t line_no = 0;
  for (const auto& raw : text::split_lines(text)) {
    ++line_no;
    const std::string line(text::trim(raw));
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("dataset", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidInput("BKS line " + std::to_string(line_no) + ": expected dataset,bks");
    const std::string name(text::trim(std::string_view(line).substr(0, comma)));
    const std::string value(text::trim(std::string_view(line).substr(comma + 1)));
    try {
      std::size_t used = 0;
      table[name] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw InvalidInput("BKS line " + std::to_string(line_no) + ": bad value '" + value + "'");
    }
  }
  return table;
}

BksTable load_bks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open BKS file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bks(ss.str());
}

std::string dataset_key(const ProblemInstance& instance) {
  std::string key = instance.name;
  for (const char* ext : {".tsp", ".vrp"}) {
    const std::string e = ext;
    if (key.size() > e.size() && key.compare(key.size() - e.size(), e.size(), e) == 0) key.resize(key.size() - e.size());
  }
  return key;
}

std::string default_label(const BenchConfig& config, ProblemKind kind) {
  std::string label = kind == ProblemKind::Cvrp ? std::string(to_string(config.rule)) + "/" : std::string();
  label += to_string(config.solver.backend);
  label += "/r" + std::to_string(config.solver.num_repeats) + "/s" + std::to_string(config.solver.subqubo_size);
  return label;
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("quartiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  Quartiles q;
  q.min = values.front();
  q.q1 = at(0.25);
  q.median = at(0.5);
  q.q3 = at(0.75);
  q.max = values.back();
  q.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return q;
}

std::string format_percent(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  // avoid "-0.00"
  if (std::string(buf) == "-0.00") return "0.00";
  return buf;
}

namespace {

BenchRun execute(const BenchDataset& data, const BenchConfig& config, const std::string& label, std::size_t run,
                 const std::optional<double>& bks) {
  BenchRun out;
  out.dataset = data.key;
  out.config = label;
  out.run = run;
  SolverConfig solver = config.solver;
  solver.seed = config.solver.seed + run;
  out.seed = solver.seed;
  Stopwatch clock;
  try {
    if (data.instance.kind == ProblemKind::Cvrp) {
      const CvrpSolution s = solve_cvrp(data.instance, config.rule, solver, config.improvement_iterations);
      out.distance = s.total_distance;
      out.all_routes_from_qubo = std::all_of(s.routes.begin(), s.routes.end(), [](const auto& r) { return r.from_qubo; });
      out.warnings = s.warnings.size();
    } else {
      const TspSolution s = solve_tsp(data.instance, solver);
      out.distance = s.route.tour.length;
      out.all_routes_from_qubo = s.route.from_qubo;
      out.warnings = s.warnings.size();
    }
  } catch (const Error& e) {
    out.error = e.what();
  }
  out.seconds = clock.seconds();
  if (out.distance && bks && *bks > 0.0) out.deviation = (static_cast<double>(*out.distance) - *bks) / *bks * 100.0;
  return out;
}

std::optional<double> lookup(const BksTable& bks, const std::string& key) {
  const auto it = bks.find(key);
  if (it == bks.end()) return std::nullopt;
  return it->second;
}

}  // namespace

BenchResult run_bench(const std::vector<BenchDataset>& datasets, const std::vector<BenchConfig>& grid,
                      std::size_t runs, const BksTable& bks, std::size_t workers) {
  if (runs == 0) throw InvalidInput("runs must be positive");
  if (grid.empty()) throw InvalidInput("bench needs at least one configuration");
  for (const auto& config : grid) config.solver.validate();

  struct Job {
    std::size_t dataset, config, run;
  };
  std::vector<Job> jobs;
  for (std::size_t d = 0; d < datasets.size(); ++d)
    for (std::size_t c = 0; c < grid.size(); ++c)
      for (std::size_t r = 0; r < runs; ++r) jobs.push_back({d, c, r});

  auto label_of = [&](std::size_t d, std::size_t c) {
    return grid[c].label.empty() ? default_label(grid[c], datasets[d].instance.kind) : grid[c].label;
  };

  BenchResult result;
  result.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const Job& job = jobs[k];
      const auto& data = datasets[job.dataset];
      result.runs[k] = execute(data, grid[job.config], label_of(job.dataset, job.config), job.run, lookup(bks, data.key));
    }
  };
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      BenchSummary s;
      s.dataset = datasets[d].key;
      s.config = label_of(d, c);
      s.config_index = c;
      s.bks = lookup(bks, s.dataset);
      std::vector<double> distances;
      std::vector<double> deviations;
      for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (jobs[k].dataset != d || jobs[k].config != c) continue;
        const BenchRun& r = result.runs[k];
        ++s.runs;
        if (!r.distance) {
          ++s.failed;
          continue;
        }
        if (!r.all_routes_from_qubo) ++s.fallback_runs;
        distances.push_back(static_cast<double>(*r.distance));
        if (r.deviation) deviations.push_back(*r.deviation);
        if (!s.best || *r.distance < *s.best) s.best = *r.distance;
      }
      if (!distances.empty()) s.distance = quartiles(distances);
      if (!deviations.empty()) s.deviation = quartiles(deviations);
      result.summaries.push_back(std::move(s));
    }
  }
  return result;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string opt_percent(const std::optional<double>& v) { return v ? format_percent(*v) : std::string(); }

}  // namespace

std::string bench_runs_csv(const BenchResult& result) {
  std::string out = "dataset,config,run,seed,distance,deviation_pct,all_routes_from_qubo,warnings,seconds,error\n";
  for (const auto& r : result.runs) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
    out += csv_field(r.dataset) + "," + csv_field(r.config) + "," + std::to_string(r.run) + "," + std::to_string(r.seed) +
           "," + (r.distance ? std::to_string(*r.distance) : std::string()) + "," + opt_percent(r.deviation) + "," +
           (r.all_routes_from_qubo ? "1" : "0") + "," + std::to_string(r.warnings) + "," + secs + "," +
           csv_field(r.error) + "\n";
  }
  return out;
}

std::string bench_summary_csv(const BenchResult& result, const std::vector<BenchConfig>& grid) {
  std::string out =
      "dataset,config,core_stop,backend,num_repeats,subqubo_size,runs,failed,fallback_runs,bks,best,mean_distance,"
      "best_dev_pct,mean_dev_pct,min_dev_pct,q1_dev_pct,median_dev_pct,q3_dev_pct,max_dev_pct\n";
  for (const auto& s : result.summaries) {
    const BenchConfig& c = grid.at(s.config_index);
    char mean[32] = "";
    if (s.distance) std::snprintf(mean, sizeof mean, "%.2f", s.distance->mean);
    out += csv_field(s.dataset) + "," + csv_field(s.config) + "," + to_string(c.rule) + "," + to_string(c.solver.backend) +
           "," + std::to_string(c.solver.num_repeats) + "," + std::to_string(c.solver.subqubo_size) + "," +
           std::to_string(s.runs) + "," + std::to_string(s.failed) + "," + std::to_string(s.fallback_runs) + "," +
           (s.bks ? text::format_real(*s.bks) : std::string()) + "," + (s.best ? std::to_string(*s.best) : std::string()) +
           "," + mean + ",";
    if (s.deviation) {
      // the best run has the smallest deviation
      out += format_percent(s.deviation->min) + "," + format_percent(s.deviation->mean) + "," +
             format_percent(s.deviation->min) + "," + format_percent(s.deviation->q1) + "," +
             format_percent(s.deviation->median) + "," + format_percent(s.deviation->q3) + "," +
             format_percent(s.deviation->max);
    } else {
      out += ",,,,,,";
    }
    out += "\n";
  }
  return out;
}

}  // namespace qroute
