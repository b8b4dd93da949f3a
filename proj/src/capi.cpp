#include "qroute/qroute.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <variant>

#include <json.hpp>

#include "qroute/bench.hpp"
#include "qroute/clustering.hpp"
#include "qroute/decomposition.hpp"
#include "qroute/error.hpp"
#include "qroute/formulations.hpp"
#include "qroute/instance.hpp"
#include "qroute/oracles.hpp"
#include "qroute/pipeline.hpp"
#include "qroute/remote.hpp"
#include "qroute/report.hpp"

using namespace qroute;

struct qr_instance {
  ProblemInstance instance;
};

struct qr_config {
  SolverConfig solver;
  CoreStopRule rule = CoreStopRule::MaxDistance;
  std::size_t improvement_iterations = kDefaultImprovementIterations;
  std::optional<std::size_t> vehicles;
  double cluster_weight = 1.0;
  std::optional<double> route_weight;
  int capacity_divisor = 1;
};

struct qr_result {
  ProblemInstance instance;
  std::variant<CvrpSolution, TspSolution> solution;
  bool valid = false;
};

struct qr_bench {
  std::vector<BenchDataset> datasets;
  std::vector<BenchConfig> grid;
  BksTable bks;
  std::size_t runs = 1;
  std::size_t workers = 0;
  std::optional<BenchResult> result;
};

namespace {

thread_local std::string last_error;

class BadArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename F>
int guard(F&& f) {
  try {
    last_error.clear();
    f();
    return QR_OK;
  } catch (const BadArgument& e) {
    last_error = e.what();
    return QR_INVALID_ARGUMENT;
  } catch (const SolveAborted& e) {
    last_error = std::string(e.what()) + " (best energy so far " + std::to_string(e.best_so_far().total_energy) + ")";
    return QR_SOLVER_FAILURE;
  } catch (const InvalidInput& e) {
    last_error = e.what();
    return QR_INVALID_INPUT;
  } catch (const SolverError& e) {
    last_error = e.what();
    return QR_SOLVER_FAILURE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QR_SOLVER_FAILURE;
  }
}

template <typename T>
void need(const T* p, const char* what) {
  if (!p) throw BadArgument(std::string(what) + " must not be null");
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::size_t to_count(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw InvalidInput(key + ": expected a non-negative integer, got '" + value + "'");
  }
  if (used != value.size()) throw InvalidInput(key + ": expected a non-negative integer, got '" + value + "'");
  return static_cast<std::size_t>(v);
}

double to_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw InvalidInput(key + ": expected a number, got '" + value + "'");
  }
  if (used != value.size() || !std::isfinite(v)) throw InvalidInput(key + ": expected a number, got '" + value + "'");
  return v;
}

Backend to_backend(const std::string& key, const std::string& value) {
  const auto b = parse_backend(value);
  if (!b) throw InvalidInput(key + ": unknown backend '" + value + "'");
  return *b;
}

void set_key(qr_config& c, const std::string& key, const std::string& value) {
  if (key == "backend") {
    c.solver.backend = to_backend(key, value);
  } else if (key == "core_stop") {
    const auto r = parse_core_stop_rule(value);
    if (!r) throw InvalidInput("core_stop: expected max_distance or max_request, got '" + value + "'");
    c.rule = *r;
  } else if (key == "num_repeats") {
    c.solver.num_repeats = to_count(key, value);
  } else if (key == "subqubo_size") {
    c.solver.subqubo_size = to_count(key, value);
  } else if (key == "seed") {
    c.solver.seed = to_count(key, value);
  } else if (key == "improvement_iterations") {
    c.improvement_iterations = to_count(key, value);
  } else if (key == "tabu_tenure") {
    c.solver.tabu_tenure = to_count(key, value);
  } else if (key == "tabu_iterations") {
    c.solver.tabu_iterations = to_count(key, value);
  } else if (key == "polish_iterations") {
    c.solver.polish_iterations = to_count(key, value);
  } else if (key == "sa_sweeps") {
    c.solver.annealing.sweeps = to_count(key, value);
  } else if (key == "sa_cooling") {
    c.solver.annealing.cooling = to_real(key, value);
  } else if (key == "sa_initial_temperature") {
    c.solver.annealing.initial_temperature = to_real(key, value);
  } else if (key == "remote_endpoint") {
    c.solver.remote.endpoint = value;
  } else if (key == "remote_num_reads") {
    c.solver.remote.num_reads = to_count(key, value);
  } else if (key == "remote_timeout_ms") {
    c.solver.remote.timeout = std::chrono::milliseconds(to_count(key, value));
  } else if (key == "remote_fallback") {
    if (value == "none" || value.empty()) {
      c.solver.remote.fallback.reset();
    } else {
      c.solver.remote.fallback = to_backend(key, value);
    }
  } else if (key == "vehicles") {
    c.vehicles = to_count(key, value);
  } else if (key == "cluster_weight") {
    c.cluster_weight = to_real(key, value);
  } else if (key == "route_weight") {
    c.route_weight = to_real(key, value);
  } else if (key == "capacity_divisor") {
    const std::size_t d = to_count(key, value);
    if (d == 0 || d > static_cast<std::size_t>(std::numeric_limits<int>::max()))
      throw InvalidInput("capacity_divisor must be positive");
    c.capacity_divisor = static_cast<int>(d);
  } else {
    throw BadArgument("unknown configuration key '" + key + "'");
  }
}

std::string get_key(const qr_config& c, const std::string& key) {
  if (key == "backend") return to_string(c.solver.backend);
  if (key == "core_stop") return to_string(c.rule);
  if (key == "num_repeats") return std::to_string(c.solver.num_repeats);
  if (key == "subqubo_size") return std::to_string(c.solver.subqubo_size);
  if (key == "seed") return std::to_string(c.solver.seed);
  if (key == "improvement_iterations") return std::to_string(c.improvement_iterations);
  if (key == "remote_endpoint") return c.solver.remote.endpoint;
  if (key == "remote_fallback") return c.solver.remote.fallback ? to_string(*c.solver.remote.fallback) : "none";
  throw BadArgument("unknown or write-only configuration key '" + key + "'");
}

std::size_t default_vehicles(const ProblemInstance& inst, const qr_config& c) {
  if (c.vehicles) return *c.vehicles;
  if (inst.min_vehicles) return static_cast<std::size_t>(*inst.min_vehicles);
  const long total = inst.total_demand();
  return static_cast<std::size_t>(std::max<long>(1, (total + inst.capacity - 1) / inst.capacity));
}

QuboProblem build_for(const ProblemInstance& inst, const std::string& formulation, const qr_config& c) {
  const DistanceMatrix full = distance_matrix(inst);
  if (formulation == "tsp") {
    std::vector<int> ids;
    for (const auto& n : inst.nodes) ids.push_back(n.id);
    return build_tsp_qubo({full, ids, std::nullopt, 1.0}).qubo;
  }
  if (inst.kind != ProblemKind::Cvrp) throw InvalidInput(formulation + " formulation needs a CVRP instance");
  const std::vector<int> customers = inst.customers();
  std::vector<int> raw;
  for (int id : customers) raw.push_back(inst.demand(id));
  const CoarsenedDemands coarse = coarsen_demands(raw, inst.capacity, c.capacity_divisor);
  const std::size_t vehicles = default_vehicles(inst, c);

  if (formulation == "cluster") {
    std::vector<std::size_t> rows;
    for (int id : customers) rows.push_back(static_cast<std::size_t>(id - 1));
    ClusterQuboSpec spec;
    spec.vehicles = vehicles;
    spec.capacity = coarse.capacity;
    spec.weights = coarse.weights;
    spec.distances = full.restrict(rows);
    spec.customer_ids = customers;
    spec.cluster_weight = c.cluster_weight;
    return build_cluster_qubo(spec).qubo;
  }
  if (formulation == "joint") {
    if (!c.route_weight) throw InvalidInput("joint formulation needs route_weight");
    std::vector<std::size_t> rows{static_cast<std::size_t>(inst.depot_id - 1)};
    std::vector<int> ids{inst.depot_id};
    for (int id : customers) {
      rows.push_back(static_cast<std::size_t>(id - 1));
      ids.push_back(id);
    }
    JointQuboSpec spec;
    spec.vehicles = vehicles;
    spec.capacity = coarse.capacity;
    spec.weights = coarse.weights;
    spec.distances = full.restrict(rows);
    spec.node_ids = ids;
    spec.cluster_weight = c.cluster_weight;
    spec.route_weight = *c.route_weight;
    return build_joint_qubo(spec).qubo;
  }
  throw InvalidInput("unknown formulation '" + formulation + "' (expected tsp, cluster or joint)");
}

}  // namespace

extern "C" {

const char* qr_version(void) { return "0.1.0"; }

const char* qr_last_error(void) { return last_error.c_str(); }

void qr_string_free(char* s) { std::free(s); }

int qr_instance_load(const char* path, qr_instance** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new qr_instance{load_instance(path)};
  });
}

int qr_instance_parse(const char* text, qr_instance** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new qr_instance{parse_instance(text)};
  });
}

void qr_instance_free(qr_instance* instance) { delete instance; }

int qr_instance_is_cvrp(const qr_instance* instance) {
  return instance && instance->instance.kind == ProblemKind::Cvrp ? 1 : 0;
}

size_t qr_instance_size(const qr_instance* instance) { return instance ? instance->instance.size() : 0; }

int qr_instance_name(const qr_instance* instance, char** out) {
  return guard([&] {
    need(instance, "instance");
    need(out, "out");
    *out = copy_out(instance->instance.name);
  });
}

int qr_config_new(qr_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new qr_config();
  });
}

void qr_config_free(qr_config* config) { delete config; }

int qr_config_set(qr_config* config, const char* key, const char* value) {
  return guard([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    set_key(*config, key, value);
  });
}

int qr_config_get(const qr_config* config, const char* key, char** out) {
  return guard([&] {
    need(config, "config");
    need(key, "key");
    need(out, "out");
    *out = copy_out(get_key(*config, key));
  });
}

int qr_solve_cvrp(const qr_instance* instance, const qr_config* config, qr_result** out) {
  return guard([&] {
    need(instance, "instance");
    need(config, "config");
    need(out, "out");
    CvrpSolution s = solve_cvrp(instance->instance, config->rule, config->solver, config->improvement_iterations);
    const bool valid = validate_solution(instance->instance, s).empty();
    *out = new qr_result{instance->instance, std::move(s), valid};
  });
}

int qr_solve_tsp(const qr_instance* instance, const qr_config* config, qr_result** out) {
  return guard([&] {
    need(instance, "instance");
    need(config, "config");
    need(out, "out");
    TspSolution s = solve_tsp(instance->instance, config->solver);
    const bool valid = validate_solution(instance->instance, s).empty();
    *out = new qr_result{instance->instance, std::move(s), valid};
  });
}

void qr_result_free(qr_result* result) { delete result; }

int64_t qr_result_distance(const qr_result* result) {
  if (!result) return -1;
  if (const auto* c = std::get_if<CvrpSolution>(&result->solution)) return c->total_distance;
  return std::get<TspSolution>(result->solution).route.tour.length;
}

int qr_result_valid(const qr_result* result) { return result && result->valid ? 1 : 0; }

namespace {

const std::vector<std::string>& warnings_of(const qr_result& r) {
  if (const auto* c = std::get_if<CvrpSolution>(&r.solution)) return c->warnings;
  return std::get<TspSolution>(r.solution).warnings;
}

TimingReport& timings_of(qr_result& r) {
  if (auto* c = std::get_if<CvrpSolution>(&r.solution)) return c->timings;
  return std::get<TspSolution>(r.solution).timings;
}

}  // namespace

size_t qr_result_warning_count(const qr_result* result) { return result ? warnings_of(*result).size() : 0; }

const char* qr_result_warning(const qr_result* result, size_t index) {
  if (!result || index >= warnings_of(*result).size()) return nullptr;
  return warnings_of(*result)[index].c_str();
}

int qr_result_json(const qr_result* result, int include_timings, char** out) {
  return guard([&] {
    need(result, "result");
    need(out, "out");
    ReportOptions options;
    options.include_timings = include_timings != 0;
    *out = copy_out(std::visit([&](const auto& s) { return to_json(s, options); }, result->solution));
  });
}

int qr_result_timing_table(const qr_result* result, char** out) {
  return guard([&] {
    need(result, "result");
    need(out, "out");
    *out = copy_out(timing_table(timings_of(const_cast<qr_result&>(*result))));
  });
}

int qr_result_timing_csv(const qr_result* result, char** out) {
  return guard([&] {
    need(result, "result");
    need(out, "out");
    *out = copy_out(timing_csv(timings_of(const_cast<qr_result&>(*result))));
  });
}

int qr_result_routes_csv(const qr_result* result, char** out) {
  return guard([&] {
    need(result, "result");
    need(out, "out");
    if (const auto* c = std::get_if<CvrpSolution>(&result->solution)) {
      *out = copy_out(routes_csv(*c, result->instance));
    } else {
      *out = copy_out(routes_csv(std::get<TspSolution>(result->solution)));
    }
  });
}

int qr_result_add_io_time(qr_result* result, double seconds) {
  return guard([&] {
    need(result, "result");
    add_io_time(timings_of(*result), seconds);
  });
}

int qr_build_qubo(const qr_instance* instance, const char* formulation, const qr_config* config, int as_json,
                  char** out) {
  return guard([&] {
    need(instance, "instance");
    need(formulation, "formulation");
    need(config, "config");
    need(out, "out");
    const QuboProblem q = build_for(instance->instance, formulation, *config);
    *out = copy_out(as_json ? encode_request(q, config->solver.remote.num_reads) + "\n" : dump_qubo(q));
  });
}

int qr_oracle_held_karp(const qr_instance* instance, char** out) {
  return guard([&] {
    need(instance, "instance");
    need(out, "out");
    const Tour t = held_karp(distance_matrix(instance->instance));
    nlohmann::ordered_json j{{"oracle", "held_karp"}, {"instance", instance->instance.name}, {"length", t.length},
                             {"tour", t.nodes}};
    *out = copy_out(j.dump(2) + "\n");
  });
}

int qr_oracle_cvrp(const qr_instance* instance, char** out) {
  return guard([&] {
    need(instance, "instance");
    need(out, "out");
    const CvrpOptimum o = brute_force_cvrp(instance->instance);
    nlohmann::ordered_json j{{"oracle", "brute_force_cvrp"}, {"instance", instance->instance.name},
                             {"distance", o.distance}, {"routes", o.routes}};
    *out = copy_out(j.dump(2) + "\n");
  });
}

int qr_oracle_qubo(const char* dump_text, char** out) {
  return guard([&] {
    need(dump_text, "dump_text");
    need(out, "out");
    const Sample s = enumerate_qubo(parse_qubo_dump(dump_text));
    std::string bits;
    for (auto b : s.bits) bits.push_back(b ? '1' : '0');
    nlohmann::ordered_json j{{"oracle", "enumerate_qubo"}, {"dim", s.bits.size()}, {"energy", s.energy},
                             {"total_energy", s.total_energy}, {"bits", bits}};
    *out = copy_out(j.dump(2) + "\n");
  });
}

int qr_bench_new(qr_bench** out) {
  return guard([&] {
    need(out, "out");
    *out = new qr_bench();
  });
}

void qr_bench_free(qr_bench* bench) { delete bench; }

int qr_bench_add_dataset(qr_bench* bench, const char* path) {
  return guard([&] {
    need(bench, "bench");
    need(path, "path");
    ProblemInstance inst = load_instance(path);
    std::string key = dataset_key(inst);
    bench->datasets.push_back({std::move(key), std::move(inst)});
  });
}

int qr_bench_add_config(qr_bench* bench, const qr_config* config, const char* label) {
  return guard([&] {
    need(bench, "bench");
    need(config, "config");
    config->solver.validate();
    bench->grid.push_back({label ? label : "", config->rule, config->solver, config->improvement_iterations});
  });
}

int qr_bench_set_bks_file(qr_bench* bench, const char* path) {
  return guard([&] {
    need(bench, "bench");
    need(path, "path");
    bench->bks = load_bks(path);
  });
}

int qr_bench_set_runs(qr_bench* bench, size_t runs) {
  return guard([&] {
    need(bench, "bench");
    if (runs == 0) throw InvalidInput("runs must be positive");
    bench->runs = runs;
  });
}

int qr_bench_set_workers(qr_bench* bench, size_t workers) {
  return guard([&] {
    need(bench, "bench");
    bench->workers = workers;
  });
}

int qr_bench_run(qr_bench* bench) {
  return guard([&] {
    need(bench, "bench");
    if (bench->datasets.empty()) throw InvalidInput("bench has no datasets");
    bench->result = run_bench(bench->datasets, bench->grid, bench->runs, bench->bks, bench->workers);
  });
}

namespace {

const BenchResult& result_of(const qr_bench* bench) {
  need(bench, "bench");
  if (!bench->result) throw BadArgument("bench has not been run");
  return *bench->result;
}

}  // namespace

int qr_bench_summary_csv(const qr_bench* bench, char** out) {
  return guard([&] {
    need(out, "out");
    *out = copy_out(bench_summary_csv(result_of(bench), bench->grid));
  });
}

int qr_bench_runs_csv(const qr_bench* bench, char** out) {
  return guard([&] {
    need(out, "out");
    *out = copy_out(bench_runs_csv(result_of(bench)));
  });
}

int qr_bench_json(const qr_bench* bench, int include_timings, char** out) {
  return guard([&] {
    need(out, "out");
    ReportOptions options;
    options.include_timings = include_timings != 0;
    *out = copy_out(to_json(result_of(bench), bench->grid, options));
  });
}

}  // extern "C"
