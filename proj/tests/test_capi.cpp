#include <doctest.h>

#include <string>

#include <json.hpp>

#include "qroute/qroute.h"

namespace {

const std::string data_dir = QROUTE_DATA_DIR;

std::string take(char* s) {
  std::string out = s ? s : "";
  qr_string_free(s);
  return out;
}

struct Instance {
  qr_instance* p = nullptr;
  explicit Instance(const std::string& file) { REQUIRE(qr_instance_load((data_dir + "/" + file).c_str(), &p) == QR_OK); }
  ~Instance() { qr_instance_free(p); }
};

struct Config {
  qr_config* p = nullptr;
  Config() { REQUIRE(qr_config_new(&p) == QR_OK); }
  ~Config() { qr_config_free(p); }
  void set(const char* k, const char* v) { REQUIRE(qr_config_set(p, k, v) == QR_OK); }
};

}  // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::string(qr_version()).size() > 0);
  qr_instance* inst = nullptr;
  CHECK(qr_instance_load((data_dir + "/missing.vrp").c_str(), &inst) == QR_INVALID_INPUT);
  CHECK(inst == nullptr);
  CHECK(std::string(qr_last_error()).find("missing.vrp") != std::string::npos);
  CHECK(qr_instance_parse("NAME: x\n", &inst) == QR_INVALID_INPUT);
  CHECK(qr_instance_load(nullptr, &inst) == QR_INVALID_ARGUMENT);
}

TEST_CASE("instances") {
  Instance inst("E-n22-k4.vrp");
  CHECK(qr_instance_is_cvrp(inst.p) == 1);
  CHECK(qr_instance_size(inst.p) == 22);
  char* name = nullptr;
  REQUIRE(qr_instance_name(inst.p, &name) == QR_OK);
  CHECK(take(name) == "E-n22-k4");
}

TEST_CASE("configuration keys") {
  Config c;
  c.set("backend", "sa");
  c.set("num_repeats", "7");
  c.set("polish_iterations", "0");
  c.set("remote_fallback", "tabu");
  char* v = nullptr;
  REQUIRE(qr_config_get(c.p, "backend", &v) == QR_OK);
  CHECK(take(v) == "sa");
  REQUIRE(qr_config_get(c.p, "num_repeats", &v) == QR_OK);
  CHECK(take(v) == "7");
  REQUIRE(qr_config_get(c.p, "remote_fallback", &v) == QR_OK);
  CHECK(take(v) == "tabu");
  CHECK(qr_config_set(c.p, "backend", "qpu") == QR_INVALID_INPUT);
  CHECK(qr_config_set(c.p, "num_repeats", "-3") == QR_INVALID_INPUT);
  CHECK(qr_config_set(c.p, "no_such_key", "1") == QR_INVALID_ARGUMENT);
  CHECK(qr_config_set(nullptr, "seed", "1") == QR_INVALID_ARGUMENT);
}

TEST_CASE("solve CVRP through the C interface") {
  Instance inst("E-n22-k4.vrp");
  Config c;
  c.set("num_repeats", "5");
  c.set("seed", "3");
  qr_result* r = nullptr;
  REQUIRE(qr_solve_cvrp(inst.p, c.p, &r) == QR_OK);
  CHECK(qr_result_valid(r) == 1);
  const auto distance = qr_result_distance(r);
  CHECK(distance >= 375);

  char* text = nullptr;
  REQUIRE(qr_result_json(r, 0, &text) == QR_OK);
  const auto j = nlohmann::json::parse(take(text));
  CHECK(j["total_distance"] == distance);
  CHECK_FALSE(j.contains("timings"));

  REQUIRE(qr_result_timing_table(r, &text) == QR_OK);
  CHECK(take(text).find("main procedure") != std::string::npos);
  REQUIRE(qr_result_timing_csv(r, &text) == QR_OK);
  CHECK(take(text).rfind("stage,", 0) == 0);
  REQUIRE(qr_result_routes_csv(r, &text) == QR_OK);
  CHECK(take(text).rfind("route,demand,length", 0) == 0);
  for (std::size_t w = 0; w < qr_result_warning_count(r); ++w) CHECK(qr_result_warning(r, w) != nullptr);
  qr_result_free(r);

  Instance tsp("burma14.tsp");
  CHECK(qr_solve_cvrp(tsp.p, c.p, &r) == QR_INVALID_INPUT);
}

TEST_CASE("remote backend without a service is a solver failure") {
  Instance inst("burma14.tsp");
  Config c;
  c.set("backend", "remote");
  c.set("remote_endpoint", "http://127.0.0.1:9/none");
  c.set("remote_timeout_ms", "500");
  c.set("num_repeats", "2");
  qr_result* r = nullptr;
  CHECK(qr_solve_tsp(inst.p, c.p, &r) == QR_SOLVER_FAILURE);
  CHECK(r == nullptr);

  c.set("remote_fallback", "tabu");
  REQUIRE(qr_solve_tsp(inst.p, c.p, &r) == QR_OK);
  CHECK(qr_result_valid(r) == 1);
  CHECK(qr_result_warning_count(r) > 0);
  qr_result_free(r);
}

TEST_CASE("QUBO construction and oracles") {
  Instance inst("E-n22-k4.vrp");
  Config c;
  c.set("capacity_divisor", "1000");
  char* text = nullptr;
  REQUIRE(qr_build_qubo(inst.p, "cluster", c.p, 1, &text) == QR_OK);
  const auto j = nlohmann::json::parse(take(text));
  CHECK(j["dim"] == 4 * 6 + 4 * 21);
  CHECK(qr_build_qubo(inst.p, "joint", c.p, 0, &text) == QR_INVALID_INPUT);
  CHECK(qr_build_qubo(inst.p, "nonsense", c.p, 0, &text) == QR_INVALID_INPUT);

  Instance burma("burma14.tsp");
  REQUIRE(qr_oracle_held_karp(burma.p, &text) == QR_OK);
  CHECK(nlohmann::json::parse(take(text))["length"] == 3323);

  REQUIRE(qr_oracle_qubo("dim 2\noffset 1\n0 0 -6\n1 1 -6\n0 1 10\n", &text) == QR_OK);
  const auto q = nlohmann::json::parse(take(text));
  CHECK(q["energy"] == -6.0);
  CHECK(q["total_energy"] == -5.0);
}

TEST_CASE("bench through the C interface") {
  qr_bench* b = nullptr;
  REQUIRE(qr_bench_new(&b) == QR_OK);
  REQUIRE(qr_bench_add_dataset(b, (data_dir + "/burma14.tsp").c_str()) == QR_OK);
  Config c;
  c.set("num_repeats", "3");
  REQUIRE(qr_bench_add_config(b, c.p, "quick") == QR_OK);
  REQUIRE(qr_bench_set_bks_file(b, (data_dir + "/bks.csv").c_str()) == QR_OK);
  REQUIRE(qr_bench_set_runs(b, 2) == QR_OK);
  REQUIRE(qr_bench_set_workers(b, 1) == QR_OK);
  REQUIRE(qr_bench_run(b) == QR_OK);
  char* text = nullptr;
  REQUIRE(qr_bench_summary_csv(b, &text) == QR_OK);
  const std::string summary = take(text);
  CHECK(summary.find("burma14,quick,") != std::string::npos);
  REQUIRE(qr_bench_runs_csv(b, &text) == QR_OK);
  CHECK(take(text).find("\nburma14,quick,1,1,") != std::string::npos);
  qr_bench_free(b);
}
