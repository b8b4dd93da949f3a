#pragma once

// Exact reference solvers. They share nothing with the production solvers
// beyond the data types, so agreement between the two is evidence.

#include <cstdint>
#include <vector>

#include "qroute/formulations.hpp"
#include "qroute/instance.hpp"
#include "qroute/qubo.hpp"

namespace qroute {

inline constexpr std::size_t kHeldKarpLimit = 18;
inline constexpr std::size_t kEnumerationLimit = 24;
inline constexpr std::size_t kBruteForceCustomers = 8;

// Optimal Hamiltonian cycle. Tour ids are local index + 1, starting at 1.
Tour held_karp(const DistanceMatrix& d);

// Global minimum by plain enumeration; the lowest bit vector wins ties
// (bit i has weight 2^i).
Sample enumerate_qubo(const QuboProblem& q);

struct CvrpOptimum {
  std::int64_t distance = 0;
  // Customer ids in visiting order, depot omitted.
  std::vector<std::vector<int>> routes;
};

CvrpOptimum brute_force_cvrp(const ProblemInstance& instance);

}  // namespace qroute
