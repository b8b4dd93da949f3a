// qroute command line front end. Talks to the library only through the C
// interface.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qroute/qroute.h"

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;

struct Failure {
  int code;
  std::string message;
};

int exit_code(int status) { return status == QR_SOLVER_FAILURE ? kExitSolver : kExitInvalid; }

void check(int status) {
  if (status != QR_OK) throw Failure{exit_code(status), qr_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  qr_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Instance = Handle<qr_instance, qr_instance_free>;
using Config = Handle<qr_config, qr_config_free>;
using Result = Handle<qr_result, qr_result_free>;
using Bench = Handle<qr_bench, qr_bench_free>;

struct OutSpec {
  std::string format;
  std::string path;
};

std::optional<OutSpec> parse_out(const std::vector<std::string>& raw) {
  if (raw.empty()) return std::nullopt;
  if (raw.size() != 2 || (raw[0] != "json" && raw[0] != "csv"))
    throw Failure{kExitInvalid, "--out expects {json|csv} PATH"};
  return OutSpec{raw[0], raw[1]};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitInvalid, "cannot write " + path};
  out << content;
  if (!out) throw Failure{kExitInvalid, "failed writing " + path};
}

struct SolverFlags {
  std::string core_stop = "max_distance";
  std::string backend = "tabu";
  std::size_t num_repeats = 250;
  std::size_t subqubo_size = 20;
  std::uint64_t seed = 0;
  std::size_t improvement_iterations = 50;
  std::string remote_endpoint;
  std::string remote_fallback = "none";
  std::size_t remote_timeout_ms = 30000;
  std::optional<std::size_t> tabu_tenure;
  std::optional<std::size_t> tabu_iterations;
  std::optional<std::size_t> polish_iterations;
};

const std::vector<std::string> kBackends{"tabu", "sa", "exhaustive", "remote"};
const std::vector<std::string> kRules{"max_distance", "max_request"};

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool with_rule) {
  if (with_rule)
    cmd->add_option("--core-stop", f.core_stop, "first customer of a new cluster")
        ->check(CLI::IsMember(kRules))
        ->capture_default_str();
  cmd->add_option("--backend", f.backend, "subQUBO solver")->check(CLI::IsMember(kBackends))->capture_default_str();
  cmd->add_option("--num-repeats", f.num_repeats, "non-improving rounds before stopping")->capture_default_str();
  cmd->add_option("--subqubo-size", f.subqubo_size, "variables per subQUBO")->capture_default_str();
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  if (with_rule)
    cmd->add_option("--improvement-iterations", f.improvement_iterations, "cluster improvement move budget")
        ->capture_default_str();
  cmd->add_option("--remote-endpoint", f.remote_endpoint, "sampling service URL")->envname("QROUTE_REMOTE_ENDPOINT");
  cmd->add_option("--remote-fallback", f.remote_fallback, "local backend once the service fails")
      ->check(CLI::IsMember({"none", "tabu", "sa", "exhaustive"}))
      ->capture_default_str();
  cmd->add_option("--remote-timeout-ms", f.remote_timeout_ms, "per-request timeout")->capture_default_str();
  cmd->add_option("--tabu-tenure", f.tabu_tenure, "override the tabu tenure");
  cmd->add_option("--tabu-iterations", f.tabu_iterations, "override the full-problem tabu iterations");
  cmd->add_option("--polish-iterations", f.polish_iterations, "tabu steps on the full problem after each round (0: off)");
}

void set(qr_config* c, const char* key, const std::string& value) { check(qr_config_set(c, key, value.c_str())); }

void apply(qr_config* c, const SolverFlags& f) {
  set(c, "core_stop", f.core_stop);
  set(c, "backend", f.backend);
  set(c, "num_repeats", std::to_string(f.num_repeats));
  set(c, "subqubo_size", std::to_string(f.subqubo_size));
  set(c, "seed", std::to_string(f.seed));
  set(c, "improvement_iterations", std::to_string(f.improvement_iterations));
  set(c, "remote_endpoint", f.remote_endpoint);
  set(c, "remote_fallback", f.remote_fallback);
  set(c, "remote_timeout_ms", std::to_string(f.remote_timeout_ms));
  if (f.tabu_tenure) set(c, "tabu_tenure", std::to_string(*f.tabu_tenure));
  if (f.tabu_iterations) set(c, "tabu_iterations", std::to_string(*f.tabu_iterations));
  if (f.polish_iterations) set(c, "polish_iterations", std::to_string(*f.polish_iterations));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_solve(bool cvrp, const std::string& file, const SolverFlags& flags, const std::vector<std::string>& out_raw,
              bool no_timings, bool quiet) {
  const auto out = parse_out(out_raw);
  const auto t0 = std::chrono::steady_clock::now();
  Instance inst;
  check(qr_instance_load(file.c_str(), &inst.p));
  const double load_seconds = seconds_since(t0);
  if (cvrp && !qr_instance_is_cvrp(inst.p)) throw Failure{kExitInvalid, file + " is not a CVRP instance"};

  Config cfg;
  check(qr_config_new(&cfg.p));
  apply(cfg.p, flags);

  Result res;
  check(cvrp ? qr_solve_cvrp(inst.p, cfg.p, &res.p) : qr_solve_tsp(inst.p, cfg.p, &res.p));
  check(qr_result_add_io_time(res.p, load_seconds));

  if (out) {
    char* text = nullptr;
    check(out->format == "json" ? qr_result_json(res.p, no_timings ? 0 : 1, &text) : qr_result_routes_csv(res.p, &text));
    write_file(out->path, take(text));
  }

  for (std::size_t i = 0; i < qr_result_warning_count(res.p); ++i)
    std::cerr << "warning: " << qr_result_warning(res.p, i) << "\n";
  if (!quiet) {
    char* routes = nullptr;
    check(qr_result_routes_csv(res.p, &routes));
    std::cout << take(routes);
    char* table = nullptr;
    check(qr_result_timing_table(res.p, &table));
    std::cout << "\n" << take(table);
  }
  std::cout << (cvrp ? "total_distance " : "length ") << qr_result_distance(res.p) << "\n";
  if (!qr_result_valid(res.p)) throw Failure{kExitSolver, "solution failed validation"};
  return 0;
}

std::string dump_to_csv(const std::string& dump) {
  std::istringstream in(dump);
  std::string line;
  std::string offset = "0";
  std::string rows;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string a, b, c;
    words >> a >> b;
    if (a == "offset") {
      offset = b;
    } else if (a != "dim" && a != "terms" && a != "label" && (words >> c)) {
      rows += a + "," + b + "," + c + "\n";
    }
  }
  return "# offset " + offset + "\ni,j,coefficient\n" + rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid cluster-first route-second CVRP solver with QUBO routing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qr_version());

  SolverFlags solve_flags;
  std::string file;
  std::vector<std::string> out_raw;
  bool no_timings = false;
  bool quiet = false;

  auto* cvrp = app.add_subcommand("solve-cvrp", "cluster, then route each cluster through its QUBO");
  cvrp->add_option("instance", file, "CVRPLIB file")->required()->check(CLI::ExistingFile);
  add_solver_flags(cvrp, solve_flags, true);
  cvrp->add_option("--out", out_raw, "write json (solution) or csv (routes)")->expected(2);
  cvrp->add_flag("--no-timings", no_timings, "leave timings out of the JSON");
  cvrp->add_flag("--quiet", quiet, "print only the total");

  auto* tsp = app.add_subcommand("solve-tsp", "route all nodes through one QUBO");
  tsp->add_option("instance", file, "TSPLIB file")->required()->check(CLI::ExistingFile);
  add_solver_flags(tsp, solve_flags, false);
  tsp->add_option("--out", out_raw, "write json (solution) or csv (route)")->expected(2);
  tsp->add_flag("--no-timings", no_timings, "leave timings out of the JSON");
  tsp->add_flag("--quiet", quiet, "print only the length");

  std::string formulation = "tsp";
  std::optional<std::size_t> vehicles;
  double cluster_weight = 1.0;
  std::optional<double> route_weight;
  std::size_t divisor = 1;
  auto* build = app.add_subcommand("build-qubo", "print a QUBO formulation of an instance");
  build->add_option("instance", file, "TSPLIB or CVRPLIB file")->required()->check(CLI::ExistingFile);
  build->add_option("--formulation", formulation, "tsp, cluster or joint")
      ->check(CLI::IsMember({"tsp", "cluster", "joint"}))
      ->capture_default_str();
  build->add_option("--vehicles", vehicles, "vehicle count (default from the instance)");
  build->add_option("--cluster-weight", cluster_weight, "clustering objective weight")->capture_default_str();
  build->add_option("--route-weight", route_weight, "routing objective weight (joint only)");
  build->add_option("--capacity-divisor", divisor, "scale demands and capacity down")->capture_default_str();
  build->add_option("--out", out_raw, "write json (sampler request) or csv (triples)")->expected(2);

  std::vector<std::string> datasets;
  std::vector<std::string> rules{"max_distance"};
  std::vector<std::string> backends{"tabu"};
  std::vector<std::size_t> repeats{250};
  std::vector<std::size_t> sizes{20};
  std::size_t runs = 10;
  std::size_t workers = 0;
  std::string bks_file;
  std::string runs_csv;
  auto* bench = app.add_subcommand("bench", "repeated seeded runs with deviation statistics");
  bench->add_option("datasets", datasets, "instance files")->required()->check(CLI::ExistingFile);
  bench->add_option("--runs", runs, "runs per dataset and configuration")->capture_default_str();
  bench->add_option("--seed", solve_flags.seed, "base seed; run r uses seed + r")->capture_default_str();
  bench->add_option("--core-stop", rules, "one or more rules")->check(CLI::IsMember(kRules));
  bench->add_option("--backend", backends, "one or more backends")->check(CLI::IsMember(kBackends));
  bench->add_option("--num-repeats", repeats, "one or more values");
  bench->add_option("--subqubo-size", sizes, "one or more values");
  bench->add_option("--improvement-iterations", solve_flags.improvement_iterations, "cluster improvement move budget")
      ->capture_default_str();
  bench->add_option("--remote-endpoint", solve_flags.remote_endpoint, "sampling service URL")
      ->envname("QROUTE_REMOTE_ENDPOINT");
  bench->add_option("--remote-fallback", solve_flags.remote_fallback, "local backend once the service fails")
      ->check(CLI::IsMember({"none", "tabu", "sa", "exhaustive"}));
  bench->add_option("--bks-file", bks_file, "CSV with dataset,bks")->check(CLI::ExistingFile);
  bench->add_option("--workers", workers, "parallel runs (0: one per core)")->capture_default_str();
  bench->add_option("--out", out_raw, "write json (everything) or csv (summary)")->expected(2);
  bench->add_option("--runs-csv", runs_csv, "write one row per run");

  std::string oracle_kind;
  auto* oracle = app.add_subcommand("oracle", "exact reference solvers");
  oracle->add_option("kind", oracle_kind, "held-karp, cvrp or qubo")
      ->required()
      ->check(CLI::IsMember({"held-karp", "cvrp", "qubo"}));
  oracle->add_option("input", file, "instance file, or a QUBO dump for qubo")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (cvrp->parsed()) return run_solve(true, file, solve_flags, out_raw, no_timings, quiet);
    if (tsp->parsed()) return run_solve(false, file, solve_flags, out_raw, no_timings, quiet);

    if (build->parsed()) {
      const auto out = parse_out(out_raw);
      Instance inst;
      check(qr_instance_load(file.c_str(), &inst.p));
      Config cfg;
      check(qr_config_new(&cfg.p));
      if (vehicles) set(cfg.p, "vehicles", std::to_string(*vehicles));
      set(cfg.p, "cluster_weight", std::to_string(cluster_weight));
      if (route_weight) set(cfg.p, "route_weight", std::to_string(*route_weight));
      set(cfg.p, "capacity_divisor", std::to_string(divisor));
      char* text = nullptr;
      check(qr_build_qubo(inst.p, formulation.c_str(), cfg.p, out && out->format == "json" ? 1 : 0, &text));
      std::string body = take(text);
      if (!out) {
        std::cout << body;
      } else {
        write_file(out->path, out->format == "csv" ? dump_to_csv(body) : body);
      }
      return 0;
    }

    if (bench->parsed()) {
      const auto out = parse_out(out_raw);
      Bench b;
      check(qr_bench_new(&b.p));
      for (const auto& d : datasets) check(qr_bench_add_dataset(b.p, d.c_str()));
      for (const auto& rule : rules)
        for (const auto& backend : backends)
          for (auto rep : repeats)
            for (auto size : sizes) {
              Config cfg;
              check(qr_config_new(&cfg.p));
              SolverFlags f = solve_flags;
              f.core_stop = rule;
              f.backend = backend;
              f.num_repeats = rep;
              f.subqubo_size = size;
              apply(cfg.p, f);
              check(qr_bench_add_config(b.p, cfg.p, nullptr));
            }
      if (!bks_file.empty()) check(qr_bench_set_bks_file(b.p, bks_file.c_str()));
      check(qr_bench_set_runs(b.p, runs));
      check(qr_bench_set_workers(b.p, workers));
      check(qr_bench_run(b.p));
      char* summary = nullptr;
      check(qr_bench_summary_csv(b.p, &summary));
      const std::string summary_text = take(summary);
      std::cout << summary_text;
      if (out) {
        if (out->format == "csv") {
          write_file(out->path, summary_text);
        } else {
          char* json = nullptr;
          check(qr_bench_json(b.p, 1, &json));
          write_file(out->path, take(json));
        }
      }
      if (!runs_csv.empty()) {
        char* rows = nullptr;
        check(qr_bench_runs_csv(b.p, &rows));
        write_file(runs_csv, take(rows));
      }
      return 0;
    }

    if (oracle->parsed()) {
      char* text = nullptr;
      if (oracle_kind == "qubo") {
        std::ifstream in(file);
        std::stringstream ss;
        ss << in.rdbuf();
        check(qr_oracle_qubo(ss.str().c_str(), &text));
      } else {
        Instance inst;
        check(qr_instance_load(file.c_str(), &inst.p));
        check(oracle_kind == "held-karp" ? qr_oracle_held_karp(inst.p, &text) : qr_oracle_cvrp(inst.p, &text));
      }
      std::cout << take(text);
      return 0;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return kExitInvalid;
}
