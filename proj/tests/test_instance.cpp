#include <doctest.h>

#include <random>

#include "fuzz.hpp"
#include "qroute/error.hpp"
#include "qroute/instance.hpp"

using namespace qroute;

namespace {
const std::string data_dir = QROUTE_DATA_DIR;

ParseErrorKind parse_kind(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return ParseErrorKind::Malformed;
}

const char* tiny_vrp = R"(NAME : tiny-n4-k2
TYPE : CVRP
DIMENSION : 4
EDGE_WEIGHT_TYPE : EUC_2D
CAPACITY : 10
NODE_COORD_SECTION
1 0 0
2 3 4
3 0 5
4 6 8
DEMAND_SECTION
1 0
2 4
3 6
4 3
DEPOT_SECTION
1
-1
EOF
)";
}  // namespace

TEST_CASE("burma14 parses as a 14 node GEO TSP") {
  const auto p = load_instance(data_dir + "/burma14.tsp");
  CHECK(p.size() == 14);
  CHECK(p.kind == ProblemKind::Tsp);
  CHECK(p.edge_weight_kind == EdgeWeightKind::Geo);
  CHECK(p.demands.empty());
}

TEST_CASE("E-n22-k4 parses with capacity and vehicle hint") {
  const auto p = load_instance(data_dir + "/E-n22-k4.vrp");
  CHECK(p.size() == 22);
  CHECK(p.kind == ProblemKind::Cvrp);
  CHECK(p.capacity == 6000);
  REQUIRE(p.min_vehicles);
  CHECK(*p.min_vehicles == 4);
  CHECK(p.depot_id == 1);
  CHECK(p.demand(1) == 0);
  CHECK(p.customers().size() == 21);
  CHECK(p.total_demand() == 22500);
}

TEST_CASE("small CVRP text") {
  const auto p = parse_instance(tiny_vrp);
  CHECK(p.name == "tiny-n4-k2");
  CHECK(p.min_vehicles == 2);
  CHECK(p.customers() == std::vector<int>{2, 3, 4});
  const auto d = distance_matrix(p);
  CHECK(d(0, 1) == 5);
  CHECK(d(1, 0) == 5);
  CHECK(d(0, 3) == 10);
  CHECK(d(2, 2) == 0);
}

TEST_CASE("parse errors carry their kind") {
  SUBCASE("missing coordinates") {
    CHECK(parse_kind("NAME: x\nTYPE: TSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nEOF\n") ==
          ParseErrorKind::MissingSection);
  }
  SUBCASE("unsupported edge weights") {
    CHECK(parse_kind("NAME: x\nTYPE: TSP\nDIMENSION: 1\nEDGE_WEIGHT_TYPE: ATT\nNODE_COORD_SECTION\n1 0 0\nEOF\n") ==
          ParseErrorKind::UnsupportedEdgeWeight);
  }
  SUBCASE("duplicate node") {
    CHECK(parse_kind("NAME: x\nTYPE: TSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n1 1 1\nEOF\n") ==
          ParseErrorKind::DuplicateNode);
  }
  SUBCASE("demand above capacity") {
    std::string text = tiny_vrp;
    text.replace(text.find("3 6\n"), 4, "3 60\n");
    CHECK(parse_kind(text) == ParseErrorKind::DemandExceedsCapacity);
  }
  SUBCASE("non-numeric coordinate") {
    CHECK(parse_kind("NAME: x\nTYPE: TSP\nDIMENSION: 1\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 a 0\nEOF\n") ==
          ParseErrorKind::Malformed);
  }
}

TEST_CASE("missing file is invalid input") {
  CHECK_THROWS_AS(load_instance(data_dir + "/no-such-file.tsp"), InvalidInput);
}

TEST_CASE("EUC_2D rounds to the nearest integer") {
  CHECK(euc_2d_distance({1, 0, 0}, {2, 3, 4}) == 5);
  CHECK(euc_2d_distance({1, 2, 2}, {2, 2, 2}) == 0);
  CHECK(euc_2d_distance({1, 0, 0}, {2, 1, 1}) == 1);    // 1.414
  CHECK(euc_2d_distance({1, 0, 0}, {2, 1.5, 1}) == 2);  // 1.803
}

TEST_CASE("GEO distances of burma14") {
  const auto p = load_instance(data_dir + "/burma14.tsp");
  const auto d = distance_matrix(p);
  // hand-computed with the reference routine
  CHECK(d(0, 1) == 153);
  CHECK(d(0, 0) == 0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) CHECK(d(i, j) == d(j, i));
}

TEST_CASE("serialization round-trips fuzzed instances") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    auto p = round % 2 ? testing::random_cvrp(1 + rng() % 9, rng, 30, 10) : testing::random_tsp(1 + rng() % 12, rng);
    p.nodes[0].x += 0.25;
    const auto back = parse_instance(serialize_instance(p));
    CHECK(back == p);
  }
  const auto burma = load_instance(data_dir + "/burma14.tsp");
  CHECK(parse_instance(serialize_instance(burma)) == burma);
}

TEST_CASE("restricted matrix keeps the requested order") {
  std::mt19937_64 rng(3);
  const auto d = testing::random_matrix(6, rng);
  const std::vector<std::size_t> idx{4, 0, 2};
  const auto r = d.restrict(idx);
  REQUIRE(r.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(r(i, j) == d(idx[i], idx[j]));
}
