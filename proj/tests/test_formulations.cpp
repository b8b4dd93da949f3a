#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fuzz.hpp"
#include "qroute/error.hpp"
#include "qroute/formulations.hpp"
#include "qroute/oracles.hpp"
#include "symbolic.hpp"

using namespace qroute;
using testing::random_bits;
using testing::random_matrix;

namespace {

DistanceMatrix uniform_matrix(std::size_t n, std::int64_t value) {
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, value);
  return d;
}

std::int64_t brute_force_cycle(const DistanceMatrix& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  do {
    std::int64_t len = 0;
    for (std::size_t i = 0; i < order.size(); ++i) len += d(order[i], order[(i + 1) % order.size()]);
    best = std::min(best, len);
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

// Every assignment of a small QUBO: returns the lowest total energy among
// assignments accepted by `valid` and the lowest among the rest.
template <class Valid>
std::pair<double, double> split_minima(const QuboProblem& q, Valid valid) {
  double best_valid = std::numeric_limits<double>::infinity();
  double best_invalid = std::numeric_limits<double>::infinity();
  const std::size_t n = q.dim();
  Bits x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1U;
    const double e = q.total_energy(x);
    double& slot = valid(x) ? best_valid : best_invalid;
    slot = std::min(slot, e);
  }
  return {best_valid, best_invalid};
}

}  // namespace

TEST_CASE("single node routing QUBO") {
  TspQuboSpec spec;
  spec.distances = DistanceMatrix(1);
  const auto t = build_tsp_qubo(spec);
  CHECK(t.qubo.dim() == 1);
  CHECK(t.qubo.total_energy(Bits{1}) == 0.0);
}

TEST_CASE("default routing penalties") {
  TspQuboSpec spec;
  spec.distances = uniform_matrix(4, 3);
  spec.distances.set(0, 2, 10);
  const auto t = build_tsp_qubo(spec);
  CHECK(t.penalty == 40.0);
  CHECK(t.objective_weight == 1.0);

  spec.penalty = 10.0;
  CHECK_THROWS_AS(build_tsp_qubo(spec), InvalidInput);
}

TEST_CASE("unit triangle") {
  TspQuboSpec spec;
  spec.distances = uniform_matrix(3, 1);
  const auto t = build_tsp_qubo(spec);
  std::vector<std::size_t> order{0, 1, 2};
  do {
    CHECK(t.qubo.total_energy(encode_tour(t.layout, order)) == 3.0);
  } while (std::next_permutation(order.begin(), order.end()));

  const Sample best = enumerate_qubo(t.qubo);
  CHECK(best.total_energy == 3.0);
  const auto decoded = decode_tour(t.layout, spec.distances, best.bits);
  REQUIRE(decoded.valid());
  CHECK(decoded.tour->length == 3);
}

TEST_CASE("decode identity and a broken sample") {
  std::mt19937_64 rng(11);
  TspQuboSpec spec;
  spec.distances = random_matrix(5, rng);
  spec.node_ids = {7, 3, 9, 4, 1};
  const auto t = build_tsp_qubo(spec);
  Bits bits(t.layout.dim(), 0);
  for (std::size_t i = 0; i < 5; ++i) bits[t.layout.index(i, i)] = 1;
  const auto ok = decode_tour(t.layout, spec.distances, bits);
  REQUIRE(ok.valid());
  CHECK(ok.tour->nodes == std::vector<int>{7, 3, 9, 4, 1});

  bits[t.layout.index(2, 4)] = 1;
  const auto bad = decode_tour(t.layout, spec.distances, bits);
  CHECK_FALSE(bad.valid());
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations.front().constraint == Constraint::NodeOnce);
  CHECK(bad.violations.front().index == 2);
}

TEST_CASE("decoded tours start at the anchor") {
  std::mt19937_64 rng(12);
  TspQuboSpec spec;
  spec.distances = random_matrix(5, rng);
  const auto t = build_tsp_qubo(spec);
  const std::vector<std::size_t> order{3, 1, 0, 4, 2};
  const auto dec = decode_tour(t.layout, spec.distances, encode_tour(t.layout, order));
  REQUIRE(dec.valid());
  CHECK(dec.tour->nodes == std::vector<int>{1, 5, 3, 4, 2});
  CHECK(dec.tour->length == cycle_length(spec.distances, order));
}

TEST_CASE("four node minimum decodes to the optimal cycle") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 5; ++round) {
    TspQuboSpec spec;
    spec.distances = random_matrix(4, rng);
    const auto t = build_tsp_qubo(spec);
    const Sample best = enumerate_qubo(t.qubo);
    const auto dec = decode_tour(t.layout, spec.distances, best.bits);
    REQUIRE(dec.valid());
    CHECK(dec.tour->length == brute_force_cycle(spec.distances));
    CHECK(best.total_energy == static_cast<double>(dec.tour->length));
  }
}

TEST_CASE("routing QUBO matches its symbolic Hamiltonian") {
  std::mt19937_64 rng(14);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 1 + rng() % 6;
    TspQuboSpec spec;
    spec.distances = random_matrix(n, rng);
    const auto t = build_tsp_qubo(spec);
    const Bits x = random_bits(t.qubo.dim(), rng);
    CHECK(t.qubo.total_energy(x) ==
          doctest::Approx(testing::tsp_hamiltonian(spec.distances, t.penalty, t.objective_weight, x)).epsilon(1e-12));
  }
}

TEST_CASE("cluster penalty defaults") {
  const auto p = default_cluster_penalties(7, 5, 0.5);
  CHECK(p.capacity == 35.0);
  CHECK(p.onehot == 1225.0);
  CHECK(p.cluster == 0.5);
  const auto zero = default_cluster_penalties(0, 3, 0.0);
  CHECK(zero.capacity == 1.0);
  CHECK(zero.onehot == 2.0);
}

TEST_CASE("one customer, one vehicle") {
  ClusterQuboSpec spec;
  spec.capacity = 3;
  spec.weights = {3};
  spec.distances = DistanceMatrix(1);
  const auto c = build_cluster_qubo(spec);
  CHECK(c.qubo.dim() == 4);
  const Sample best = enumerate_qubo(c.qubo);
  CHECK(best.total_energy == 0.0);
  Bits expected(4, 0);
  expected[c.layout.y(0, 3)] = 1;
  expected[c.layout.x(0, 0)] = 1;
  CHECK(best.bits == expected);
  const auto dec = decode_clusters(c.layout, best.bits);
  REQUIRE(dec.valid());
  CHECK(*dec.assignment == std::vector<std::size_t>{0});
}

TEST_CASE("double packing costs the one-hot penalty") {
  ClusterQuboSpec spec;
  spec.vehicles = 2;
  spec.capacity = 4;
  spec.weights = {2, 2};
  spec.distances = uniform_matrix(2, 5);
  const auto c = build_cluster_qubo(spec);
  const auto& lay = c.layout;
  Bits single(lay.dim(), 0);
  single[lay.x(0, 0)] = 1;
  single[lay.x(1, 1)] = 1;
  single[lay.y(0, 2)] = 1;
  single[lay.y(1, 2)] = 1;
  CHECK(c.qubo.total_energy(single) == 0.0);
  // customer 0 also on vehicle 1, whose slot follows the extra load
  Bits twice = single;
  twice[lay.x(1, 0)] = 1;
  twice[lay.y(1, 2)] = 0;
  twice[lay.y(1, 4)] = 1;
  CHECK(c.qubo.total_energy(twice) - c.qubo.total_energy(single) == c.penalties.onehot);
  const auto dec = decode_clusters(lay, twice);
  CHECK_FALSE(dec.valid());
  CHECK(dec.violations.front().constraint == Constraint::CustomerOnce);
}

TEST_CASE("decode_clusters") {
  ClusterQuboSpec spec;
  spec.vehicles = 2;
  spec.capacity = 5;
  spec.weights = {1, 2, 1};
  spec.distances = uniform_matrix(3, 1);
  const auto c = build_cluster_qubo(spec);
  const auto& lay = c.layout;
  Bits bits(lay.dim(), 0);
  for (std::size_t a = 0; a < 3; ++a) bits[lay.x(0, a)] = 1;
  bits[lay.y(0, 4)] = 1;
  bits[lay.y(1, 1)] = 1;
  auto dec = decode_clusters(lay, bits);
  CHECK_FALSE(dec.valid());  // vehicle 2 is empty but claims a load of 1

  ClusterQuboSpec one = spec;
  one.vehicles = 1;
  const auto c1 = build_cluster_qubo(one);
  Bits b1(c1.layout.dim(), 0);
  for (std::size_t a = 0; a < 3; ++a) b1[c1.layout.x(0, a)] = 1;
  b1[c1.layout.y(0, 4)] = 1;
  dec = decode_clusters(c1.layout, b1);
  REQUIRE(dec.valid());
  CHECK(*dec.assignment == std::vector<std::size_t>{0, 0, 0});
  CHECK(c1.qubo.total_energy(b1) == 0.0);

  b1[c1.layout.x(0, 1)] = 0;
  dec = decode_clusters(c1.layout, b1);
  CHECK_FALSE(dec.valid());
  CHECK(dec.violations.front().constraint == Constraint::CustomerOnce);
}

TEST_CASE("two vehicle, three customer toy matches the best partition") {
  std::mt19937_64 rng(15);
  for (int round = 0; round < 5; ++round) {
    ClusterQuboSpec spec;
    spec.vehicles = 2;
    spec.capacity = 3;
    spec.weights = {1, 1, 1};
    spec.distances = random_matrix(3, rng, 1, 9);
    spec.cluster_weight = 1.0;
    const auto c = build_cluster_qubo(spec);
    const Sample best = enumerate_qubo(c.qubo);
    const auto dec = decode_clusters(c.layout, best.bits);
    REQUIRE(dec.valid());

    auto spread = [&](const std::vector<std::size_t>& veh) {
      std::int64_t s = 0;
      for (std::size_t u = 0; u < 3; ++u)
        for (std::size_t v = u + 1; v < 3; ++v)
          if (veh[u] == veh[v]) s += spec.distances(u, v);
      return s;
    };
    std::int64_t oracle = std::numeric_limits<std::int64_t>::max();
    for (unsigned mask = 0; mask < 8; ++mask) {
      std::vector<std::size_t> veh{mask & 1U, (mask >> 1) & 1U, (mask >> 2) & 1U};
      const auto load1 = std::count(veh.begin(), veh.end(), 1U);
      if (load1 == 0 || load1 == 3) continue;  // every vehicle carries something
      oracle = std::min(oracle, spread(veh));
    }
    CHECK(spread(*dec.assignment) == oracle);
    CHECK(best.total_energy == doctest::Approx(static_cast<double>(oracle)));
  }
}

TEST_CASE("cluster QUBO matches its symbolic Hamiltonian") {
  std::mt19937_64 rng(16);
  for (int round = 0; round < 100; ++round) {
    ClusterQuboSpec spec;
    spec.vehicles = 1 + rng() % 3;
    spec.capacity = 1 + static_cast<int>(rng() % 6);
    const std::size_t nc = 1 + rng() % 5;
    for (std::size_t a = 0; a < nc; ++a) spec.weights.push_back(static_cast<int>(rng() % (spec.capacity + 1)));
    spec.distances = random_matrix(nc, rng);
    spec.cluster_weight = static_cast<double>(rng() % 3) * 0.5;
    const auto c = build_cluster_qubo(spec);
    const Bits x = random_bits(c.qubo.dim(), rng);
    CHECK(c.qubo.total_energy(x) ==
          doctest::Approx(testing::cluster_hamiltonian(c.layout, c.penalties, spec.distances, x)).epsilon(1e-12));
  }
}

TEST_CASE("cluster builder guards") {
  ClusterQuboSpec spec;
  spec.capacity = 2;
  spec.weights = {3};
  spec.distances = DistanceMatrix(1);
  CHECK_THROWS_AS(build_cluster_qubo(spec), InvalidInput);
  spec.weights = {1};
  spec.capacity_penalty = 5.0;
  spec.onehot_penalty = 4.0;
  CHECK_THROWS_AS(build_cluster_qubo(spec), InvalidInput);
}

TEST_CASE("coarsened demands") {
  const std::vector<int> w{1, 700, 1400, 1500};
  const auto c = coarsen_demands(w, 6000, 700);
  CHECK(c.capacity == 8);
  CHECK(c.weights == std::vector<int>{1, 1, 2, 3});
  CHECK_THROWS_AS(coarsen_demands(w, 6000, 0), InvalidInput);
}

TEST_CASE("joint layout size") {
  JointQuboSpec spec;
  spec.vehicles = 2;
  spec.capacity = 10;
  spec.weights = {1, 2, 3};
  spec.distances = uniform_matrix(4, 2);
  spec.route_weight = 1.0;
  const auto j = build_joint_qubo(spec);
  CHECK(j.layout.positions == 5);
  CHECK(j.layout.items() == 5);
  CHECK(j.qubo.dim() == 2 * 5 * 5 + 2 * 10);

  spec.max_variables = 69;
  CHECK_THROWS_AS(build_joint_qubo(spec), InvalidInput);
}

TEST_CASE("joint QUBO without objectives is zero on feasible samples") {
  JointQuboSpec spec;
  spec.vehicles = 2;
  spec.capacity = 4;
  spec.weights = {1, 2, 1};
  spec.distances = uniform_matrix(4, 3);
  const auto j = build_joint_qubo(spec);
  const auto& lay = j.layout;
  // route 1: depot copy, c0, c1 ; route 2: depot copy, c2
  Bits bits(lay.dim(), 0);
  bits[lay.x(0, 3, 0)] = 1;
  bits[lay.x(0, 0, 1)] = 1;
  bits[lay.x(0, 1, 2)] = 1;
  bits[lay.x(1, 4, 3)] = 1;
  bits[lay.x(1, 2, 4)] = 1;
  bits[lay.y(0, 3)] = 1;
  bits[lay.y(1, 1)] = 1;
  CHECK(j.qubo.total_energy(bits) == 0.0);
  const auto dec = decode_joint(lay, spec.distances, bits);
  CHECK(dec.feasible);
  CHECK(dec.routes_contiguous);
  CHECK(dec.route_length == 3 * 3 + 2 * 3);
}

TEST_CASE("joint QUBO matches its symbolic Hamiltonian") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 60; ++round) {
    JointQuboSpec spec;
    spec.vehicles = 1 + rng() % 2;
    spec.capacity = 1 + static_cast<int>(rng() % 4);
    const std::size_t nc = 1 + rng() % 3;
    for (std::size_t a = 0; a < nc; ++a) spec.weights.push_back(static_cast<int>(rng() % (spec.capacity + 1)));
    spec.distances = random_matrix(nc + 1, rng);
    spec.cluster_weight = static_cast<double>(rng() % 2);
    spec.route_weight = 1.0 + static_cast<double>(rng() % 2);
    const auto j = build_joint_qubo(spec);
    const Bits x = random_bits(j.qubo.dim(), rng);
    CHECK(j.qubo.total_energy(x) ==
          doctest::Approx(testing::joint_hamiltonian(j.layout, j.penalties, j.route_weight, spec.distances, x))
              .epsilon(1e-12));
  }
}

TEST_CASE("penalties dominate on small formulations") {
  std::mt19937_64 rng(18);
  SUBCASE("routing") {
    for (std::size_t n = 2; n <= 4; ++n) {
      TspQuboSpec spec;
      spec.distances = random_matrix(n, rng);
      const auto t = build_tsp_qubo(spec);
      const auto [valid, invalid] =
          split_minima(t.qubo, [&](const Bits& x) { return decode_tour(t.layout, spec.distances, x).valid(); });
      CHECK(valid < invalid);
    }
  }
  SUBCASE("clustering") {
    for (int round = 0; round < 10; ++round) {
      ClusterQuboSpec spec;
      spec.vehicles = 2;
      spec.capacity = 4;
      spec.weights = {1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2)};
      spec.distances = random_matrix(3, rng);
      spec.cluster_weight = 1.0;
      const auto c = build_cluster_qubo(spec);
      REQUIRE(c.qubo.dim() <= 20);
      const auto [valid, invalid] =
          split_minima(c.qubo, [&](const Bits& x) { return decode_clusters(c.layout, x).valid(); });
      CHECK(valid < invalid);
    }
  }
}
