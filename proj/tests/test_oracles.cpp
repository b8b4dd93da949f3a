#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fuzz.hpp"
#include "qroute/error.hpp"
#include "qroute/oracles.hpp"

using namespace qroute;

namespace {

std::int64_t all_cycles(const DistanceMatrix& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  do {
    best = std::min(best, cycle_length(d, order));
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

ProblemInstance line_cvrp(std::vector<double> xs, std::vector<int> demands, int capacity) {
  ProblemInstance p;
  p.kind = ProblemKind::Cvrp;
  p.nodes.push_back({1, 0, 0});
  for (std::size_t i = 0; i < xs.size(); ++i) p.nodes.push_back({static_cast<int>(i + 2), xs[i], 0});
  p.demands.push_back(0);
  for (int d : demands) p.demands.push_back(d);
  p.capacity = capacity;
  return p;
}

}  // namespace

TEST_CASE("held-karp on a triangle") {
  DistanceMatrix d(3);
  d.set(0, 1, 3);
  d.set(1, 2, 4);
  d.set(0, 2, 5);
  const auto t = held_karp(d);
  CHECK(t.length == 12);
  CHECK(t.nodes.size() == 3);
  CHECK(t.nodes.front() == 1);
}

TEST_CASE("held-karp agrees with cycle enumeration") {
  std::mt19937_64 rng(51);
  for (int round = 0; round < 10; ++round) {
    const auto d = testing::random_matrix(2 + rng() % 8, rng, 1, 100);
    const auto t = held_karp(d);
    CHECK(t.length == all_cycles(d));
    std::vector<std::size_t> order;
    for (int id : t.nodes) order.push_back(static_cast<std::size_t>(id - 1));
    CHECK(cycle_length(d, order) == t.length);
  }
  CHECK_THROWS_AS(held_karp(DistanceMatrix(kHeldKarpLimit + 1)), InvalidInput);
}

TEST_CASE("burma14 optimum") {
  const auto p = load_instance(std::string(QROUTE_DATA_DIR) + "/burma14.tsp");
  CHECK(held_karp(distance_matrix(p)).length == 3323);
}

TEST_CASE("enumeration on tiny problems") {
  CHECK(enumerate_qubo(QuboProblem(5)).energy == 0.0);
  QuboProblem q(2);
  q.add_term(0, 0, -6);
  q.add_term(1, 1, -6);
  q.add_term(0, 1, 10);
  const auto s = enumerate_qubo(q);
  CHECK(s.energy == -6.0);
  CHECK(s.bits == Bits{1, 0});
}

TEST_CASE("brute-force CVRP") {
  SUBCASE("one customer") {
    const auto p = line_cvrp({7}, {3}, 10);
    const auto o = brute_force_cvrp(p);
    CHECK(o.distance == 14);
    CHECK(o.routes == std::vector<std::vector<int>>{{2}});
  }
  SUBCASE("capacity forces two routes") {
    const auto p = line_cvrp({4, 9}, {6, 6}, 10);
    const auto o = brute_force_cvrp(p);
    CHECK(o.distance == 8 + 18);
    CHECK(o.routes.size() == 2);
  }
  SUBCASE("shared route when it fits") {
    const auto p = line_cvrp({4, 9}, {5, 5}, 10);
    CHECK(brute_force_cvrp(p).distance == 18);
  }
  SUBCASE("size guard") {
    std::mt19937_64 rng(52);
    CHECK_THROWS_AS(brute_force_cvrp(testing::random_cvrp(kBruteForceCustomers + 1, rng, 20, 5)), InvalidInput);
  }
}

TEST_CASE("brute-force routes respect capacity and visit everyone once") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 20; ++round) {
    const auto p = testing::random_cvrp(1 + rng() % 6, rng, 15, 8);
    const auto o = brute_force_cvrp(p);
    const auto d = distance_matrix(p);
    std::vector<int> seen;
    std::int64_t total = 0;
    for (const auto& r : o.routes) {
      int load = 0;
      std::size_t prev = 0;
      for (int id : r) {
        load += p.demand(id);
        total += d(prev, static_cast<std::size_t>(id - 1));
        prev = static_cast<std::size_t>(id - 1);
        seen.push_back(id);
      }
      total += d(prev, 0);
      CHECK(load <= p.capacity);
    }
    std::sort(seen.begin(), seen.end());
    CHECK(seen == p.customers());
    CHECK(total == o.distance);
  }
}
