#pragma once

// TSPLIB95 / CVRPLIB instances and their integer distance matrices.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qroute {

enum class ProblemKind { Cvrp, Tsp };
enum class EdgeWeightKind { Euc2d, Geo };

const char* to_string(ProblemKind kind);
const char* to_string(EdgeWeightKind kind);

struct Node {
  int id = 0;  // 1-based
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct ProblemInstance {
  std::string name;
  std::string comment;
  ProblemKind kind = ProblemKind::Tsp;
  EdgeWeightKind edge_weight_kind = EdgeWeightKind::Euc2d;
  std::vector<Node> nodes;  // nodes[i].id == i + 1
  // Indexed by node id - 1. Empty for TSP.
  std::vector<int> demands;
  int capacity = 0;
  int depot_id = 1;
  // Parsed from a "-kY" name suffix; advisory only.
  std::optional<int> min_vehicles;

  std::size_t size() const { return nodes.size(); }
  const Node& node(int id) const { return nodes.at(static_cast<std::size_t>(id - 1)); }
  int demand(int id) const;
  // Non-depot node ids in ascending order.
  std::vector<int> customers() const;
  int total_demand() const;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

// Throws ParseError on any violation of the instance invariants.
ProblemInstance parse_instance(std::string_view text);
ProblemInstance load_instance(const std::filesystem::path& path);

// Canonical TSPLIB text; parse_instance(serialize_instance(p)) == p.
std::string serialize_instance(const ProblemInstance& instance);

// Symmetric integer distances with zero diagonal. Indices are 0-based
// positions into whatever node list the matrix was built from.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n);
  DistanceMatrix(std::size_t n, std::vector<std::int64_t> entries);

  std::size_t size() const { return n_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, std::int64_t value);
  std::int64_t max() const;

  // Matrix restricted to `indices`, in that order.
  DistanceMatrix restrict(std::span<const std::size_t> indices) const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> d_;
};

// TSPLIB95 nearest-integer EUC_2D distance.
std::int64_t euc_2d_distance(const Node& a, const Node& b);
// TSPLIB95 GEO distance (DDD.MM coordinates, radius 6378.388 km).
std::int64_t geo_distance(const Node& a, const Node& b);

DistanceMatrix distance_matrix(const ProblemInstance& instance);

}  // namespace qroute
