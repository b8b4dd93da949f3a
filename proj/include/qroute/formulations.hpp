#pragma once

// QUBO formulations of the routing problems and the decoders that map
// samples back onto tours and vehicle assignments.
//
//   routing   : Hamiltonian-cycle TSP on node/position one-hots
//   cluster   : multi-knapsack clustering with a one-hot capacity slack per
//               vehicle and an intra-cluster distance objective
//   joint     : clustering and routing in one model over global positions
//
// Every builder records the constant left over from expanding the squared
// penalty terms in QuboProblem::offset(), so total_energy of a fully
// feasible sample equals the weighted objective exactly.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qroute/instance.hpp"
#include "qroute/qubo.hpp"

namespace qroute {

struct Tour {
  std::vector<int> nodes;  // global node ids, cycle order, no repeat of the start
  std::int64_t length = 0;

  friend bool operator==(const Tour&, const Tour&) = default;
};

// Length of the closed cycle visiting local indices in `order`.
std::int64_t cycle_length(const DistanceMatrix& d, std::span<const std::size_t> order);

enum class Constraint {
  NodeOnce,          // routing: node appears at exactly one position
  PositionOnce,      // routing / joint: position holds exactly one node
  CustomerOnce,      // cluster / joint: customer in exactly one vehicle (and position)
  CapacityOneHot,    // exactly one capacity slot per vehicle
  CapacityBalance,   // selected capacity slot equals the packed weight
  DepotPerRoute,     // joint: one depot copy per route
  SampleLength,
};

const char* to_string(Constraint c);

struct Violation {
  Constraint constraint;
  std::size_t index = 0;  // the row/position/customer/vehicle concerned
  std::size_t count = 0;  // how many bits were set where exactly one was expected
  std::string detail;
};

// ---------------------------------------------------------------- routing

struct TspQuboSpec {
  DistanceMatrix distances;
  // Global ids of the cycle nodes; defaults to 1..n. The first id is the
  // anchor decoded tours are rotated to (the depot in a CVRP cluster).
  std::vector<int> node_ids;
  std::optional<double> penalty;  // A; default n * max(D)
  double objective_weight = 1.0;  // B
};

double default_tsp_penalty(std::size_t n, std::int64_t max_distance);

// x(node, position) -> node * n + position
struct TspLayout {
  std::size_t n = 0;
  std::vector<int> node_ids;

  std::size_t index(std::size_t node, std::size_t position) const { return node * n + position; }
  std::size_t dim() const { return n * n; }
};

struct TspQubo {
  QuboProblem qubo;
  TspLayout layout;
  double penalty = 0.0;
  double objective_weight = 0.0;
};

// Throws InvalidInput when the penalties violate 0 < B*max(D) < A.
TspQubo build_tsp_qubo(const TspQuboSpec& spec);

struct TourDecoding {
  std::optional<Tour> tour;
  std::vector<Violation> violations;

  bool valid() const { return tour.has_value(); }
};

TourDecoding decode_tour(const TspLayout& layout, const DistanceMatrix& distances,
                         std::span<const std::uint8_t> bits);

// Bit pattern placing node order[p] at position p.
Bits encode_tour(const TspLayout& layout, std::span<const std::size_t> order);

// ---------------------------------------------------------------- clustering

struct ClusterPenalties {
  double onehot = 0.0;    // X
  double capacity = 0.0;  // A
  double cluster = 0.0;   // C
};

// A = max(D) * customers (at least 1), X = A^2 (at least A + 1).
ClusterPenalties default_cluster_penalties(std::int64_t max_distance, std::size_t customers, double cluster_weight);

struct ClusterQuboSpec {
  std::size_t vehicles = 1;  // m
  int capacity = 0;          // W, number of capacity slots per vehicle
  std::vector<int> weights;  // one per customer
  DistanceMatrix distances;  // customer x customer
  std::vector<int> customer_ids;
  double cluster_weight = 0.0;  // C
  std::optional<double> capacity_penalty;  // A
  std::optional<double> onehot_penalty;    // X
};

// y(k, n) for n = 1..W come first, then x(k, customer).
struct ClusterLayout {
  std::size_t vehicles = 0;
  std::size_t slots = 0;
  std::size_t customers = 0;
  std::vector<int> customer_ids;
  std::vector<int> weights;

  std::size_t y(std::size_t k, std::size_t n) const { return k * slots + (n - 1); }
  std::size_t x(std::size_t k, std::size_t customer) const { return vehicles * slots + k * customers + customer; }
  std::size_t dim() const { return vehicles * slots + vehicles * customers; }
};

struct ClusterQubo {
  QuboProblem qubo;
  ClusterLayout layout;
  ClusterPenalties penalties;
};

ClusterQubo build_cluster_qubo(const ClusterQuboSpec& spec);

struct ClusterDecoding {
  // vehicle index per customer (layout order)
  std::optional<std::vector<std::size_t>> assignment;
  std::vector<Violation> violations;

  bool valid() const { return assignment.has_value(); }
};

ClusterDecoding decode_clusters(const ClusterLayout& layout, std::span<const std::uint8_t> bits);

struct CoarsenedDemands {
  std::vector<int> weights;  // ceil(w / divisor)
  int capacity = 0;          // floor(Q / divisor)
};

// Shrinks the capacity one-hot; any packing feasible after coarsening is
// feasible before it.
CoarsenedDemands coarsen_demands(std::span<const int> weights, int capacity, int divisor);

// ---------------------------------------------------------------- joint

struct JointQuboSpec {
  std::size_t vehicles = 1;  // m, also the number of depot copies
  int capacity = 0;          // W
  std::vector<int> weights;  // customers only
  // (depot + customers) x (depot + customers); index 0 is the depot.
  DistanceMatrix distances;
  std::vector<int> node_ids;
  double cluster_weight = 0.0;  // C
  double route_weight = 0.0;    // E, no default
  std::optional<double> capacity_penalty;  // A
  std::optional<double> onehot_penalty;    // X
  std::size_t max_variables = 2500;
};

// Items are customers 0..c-1 followed by depot copies c..c+m-1; positions
// are global across routes, N = c + m.
struct JointLayout {
  std::size_t vehicles = 0;
  std::size_t customers = 0;
  std::size_t positions = 0;
  std::size_t slots = 0;
  std::vector<int> node_ids;  // node_ids[0] is the depot
  std::vector<int> weights;

  std::size_t items() const { return customers + vehicles; }
  bool is_depot(std::size_t item) const { return item >= customers; }
  std::size_t x(std::size_t k, std::size_t item, std::size_t j) const { return (k * items() + item) * positions + j; }
  std::size_t y(std::size_t k, std::size_t n) const { return vehicles * items() * positions + k * slots + (n - 1); }
  std::size_t dim() const { return vehicles * items() * positions + vehicles * slots; }
  // Row/column of the item in the distance matrix.
  std::size_t distance_index(std::size_t item) const { return is_depot(item) ? 0 : item + 1; }
};

struct JointQubo {
  QuboProblem qubo;
  JointLayout layout;
  ClusterPenalties penalties;
  double route_weight = 0.0;
};

JointQubo build_joint_qubo(const JointQuboSpec& spec);

struct JointDecoding {
  bool feasible = false;  // every hard constraint satisfied
  std::vector<Violation> violations;
  // Items per vehicle, ordered by global position (empty when not feasible).
  std::vector<std::vector<std::size_t>> routes;
  // Each route occupies one contiguous cyclic block of positions led by its depot copy.
  bool routes_contiguous = false;
  // Sum of pairwise customer distances inside each vehicle.
  std::int64_t cluster_spread = 0;
  // Sum of closed route lengths (depot, customers by position, depot).
  std::int64_t route_length = 0;
};

JointDecoding decode_joint(const JointLayout& layout, const DistanceMatrix& distances,
                           std::span<const std::uint8_t> bits);

}  // namespace qroute
