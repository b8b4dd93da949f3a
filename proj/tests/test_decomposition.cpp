#include <doctest.h>

#include <random>

#include "fuzz.hpp"
#include "qroute/decomposition.hpp"
#include "qroute/formulations.hpp"
#include "qroute/oracles.hpp"

using namespace qroute;
using testing::random_bits;
using testing::random_qubo;

namespace {

QuboProblem hand_table() {
  QuboProblem q(2);
  q.add_term(0, 0, -6);
  q.add_term(1, 1, -6);
  q.add_term(0, 1, 10);
  return q;
}

}  // namespace

TEST_CASE("backend names") {
  for (auto b : {Backend::Exhaustive, Backend::Tabu, Backend::SimulatedAnnealing, Backend::Remote})
    CHECK(parse_backend(to_string(b)) == b);
  CHECK_FALSE(parse_backend("qpu"));
}

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.subqubo_size = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = {};
  c.backend = Backend::Exhaustive;
  c.subqubo_size = 30;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = {};
  c.backend = Backend::Remote;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c.remote.endpoint = "http://127.0.0.1:1/x";
  CHECK_NOTHROW(c.validate());
  c.remote.fallback = Backend::Remote;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = {};
  c.annealing.cooling = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
}

TEST_CASE("exhaustive on tiny problems") {
  QuboProblem one(1);
  one.add_term(0, 0, 5);
  const auto s = solve_subqubo_exhaustive(one);
  CHECK(s.bits == Bits{0});
  CHECK(s.energy == 0.0);

  const auto t = solve_subqubo_exhaustive(hand_table());
  CHECK(t.energy == -6.0);
  CHECK(t.bits == Bits{1, 0});  // lowest bit-vector value among the two optima

  CHECK_THROWS_AS(solve_subqubo_exhaustive(QuboProblem(kMaxExhaustiveDim + 1)), InvalidInput);
}

TEST_CASE("exhaustive agrees with the enumeration oracle") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 100; ++round) {
    const auto q = random_qubo(1 + rng() % 16, rng, -50, 50, 0.7);
    const auto a = solve_subqubo_exhaustive(q);
    const auto b = enumerate_qubo(q);
    CHECK(a.energy == b.energy);
    CHECK(a.bits == b.bits);
  }
}

TEST_CASE("unit triangle routing QUBO solved exhaustively") {
  TspQuboSpec spec;
  spec.distances = DistanceMatrix(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) spec.distances.set(i, j, 1);
  const auto t = build_tsp_qubo(spec);
  const auto s = solve_subqubo_exhaustive(t.qubo);
  CHECK(s.total_energy == 3.0);
  CHECK(decode_tour(t.layout, spec.distances, s.bits).valid());
}

TEST_CASE("tabu on the hand table") {
  const auto q = hand_table();
  const auto s = tabu_improve(q, Bits{1, 1}, 1, 10, 1);
  CHECK(s.energy == -6.0);
  CHECK(s.bits[0] + s.bits[1] == 1);
}

TEST_CASE("tabu keeps a separable optimum") {
  QuboProblem q(5);
  for (std::size_t i = 0; i < 5; ++i) q.add_term(i, i, i % 2 ? -1.0 : 2.0);
  const Bits opt{0, 1, 0, 1, 0};
  const auto s = tabu_improve(q, opt, 2, 100, 3);
  CHECK(s.bits == opt);
  CHECK(s.energy == -2.0);
}

TEST_CASE("tabu is never worse than its start") {
  std::mt19937_64 rng(32);
  for (int round = 0; round < 50; ++round) {
    const auto q = random_qubo(12, rng);
    const Bits start = random_bits(12, rng);
    const auto s = tabu_improve(q, start, 3, 50, rng());
    CHECK(s.energy <= q.evaluate(start));
    CHECK(s.energy == q.evaluate(s.bits));
  }
}

TEST_CASE("tabu on 16 variables finds the minimum for most seeds") {
  std::mt19937_64 rng(33);
  const auto q = random_qubo(16, rng);
  const double target = enumerate_qubo(q).energy;
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = tabu_improve(q, Bits(16, 0), default_tabu_tenure(16), 5000, seed);
    hits += s.energy == target ? 1 : 0;
  }
  CHECK(hits >= 8);
}

TEST_CASE("annealing returns its best state") {
  std::mt19937_64 rng(34);
  const auto q = random_qubo(14, rng);
  const double target = enumerate_qubo(q).energy;
  const auto s = simulated_annealing(q, Bits(14, 0), {}, 5);
  CHECK(s.energy == q.evaluate(s.bits));
  CHECK(s.energy <= 0.0);
  CHECK(s.energy >= target);
}

TEST_CASE("solve on trivial problems") {
  SolverConfig c;
  c.num_repeats = 5;
  const auto zero = solve(QuboProblem(6), c);
  CHECK(zero.best.energy == 0.0);
  CHECK(zero.iterations == 5);

  QuboProblem diag(30);
  for (std::size_t i = 0; i < 30; ++i) diag.add_term(i, i, -1);
  const auto r = solve(diag, c);
  CHECK(r.best.energy == -30.0);
  CHECK(r.best.bits == Bits(30, 1));
}

TEST_CASE("solve on 20 variables matches the enumeration minimum") {
  std::mt19937_64 rng(35);
  const auto q = random_qubo(20, rng);
  const double target = enumerate_qubo(q).energy;
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolverConfig c;
    c.seed = seed;
    c.num_repeats = 20;
    hits += solve(q, c).best.energy == target ? 1 : 0;
  }
  CHECK(hits >= 9);
}

TEST_CASE("every backend keeps adoptions exact") {
  std::mt19937_64 rng(36);
  const auto q = random_qubo(60, rng, -50, 50, 0.2);
  for (auto backend : {Backend::Exhaustive, Backend::Tabu, Backend::SimulatedAnnealing}) {
    SolverConfig c;
    c.backend = backend;
    c.subqubo_size = 12;
    c.num_repeats = 3;
    c.polish_iterations = 0;
    c.tabu_iterations = 100;  // leave room for the subproblems
    c.seed = 9;
    const auto r = solve(q, c);
    CHECK(r.best.energy == q.evaluate(r.best.bits));
    CHECK(r.subqubo_calls > 0);
    for (const auto& a : r.adoptions) CHECK(a.predicted_delta == doctest::Approx(a.measured_delta).epsilon(1e-12));
    for (std::size_t i = 1; i < r.energy_trace.size(); ++i) CHECK(r.energy_trace[i] < r.energy_trace[i - 1]);
    CHECK(r.energy_trace.back() == r.best.energy);
  }
}

TEST_CASE("solve is reproducible") {
  std::mt19937_64 rng(37);
  const auto q = random_qubo(40, rng, -50, 50, 0.3);
  SolverConfig c;
  c.seed = 77;
  c.num_repeats = 5;
  const auto a = solve(q, c);
  const auto b = solve(q, c);
  CHECK(a.best.bits == b.best.bits);
  CHECK(a.energy_trace == b.energy_trace);
}

TEST_CASE("folded subproblems equal clamping") {
  std::mt19937_64 rng(38);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng() % 14;
    const auto q = random_qubo(n, rng, -50, 50, 0.5);
    const CompiledQubo cq(q);
    const Bits state = random_bits(n, rng);
    std::vector<std::size_t> vars;
    std::map<std::size_t, std::uint8_t> fixed;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 2)
        vars.push_back(i);
      else
        fixed[i] = state[i];
    }
    const auto folded = fold_subproblem(cq, state, vars);
    const auto clamped = clamp(q, fixed);
    CHECK(folded.coefficients() == clamped.sub.coefficients());
  }
}

TEST_CASE("impact ranking") {
  QuboProblem q(4);
  q.add_term(0, 0, 1);
  q.add_term(1, 1, -5);
  q.add_term(2, 2, 3);
  q.add_term(3, 3, -3);
  const CompiledQubo cq(q);
  CHECK(rank_by_impact(cq, Bits(4, 0)) == std::vector<std::size_t>{1, 2, 3, 0});
}
