#include "fuzz.hpp"

#include <algorithm>

namespace qroute::testing {

QuboProblem random_qubo(std::size_t dim, std::mt19937_64& rng, int lo, int hi, double density) {
  std::uniform_int_distribution<int> coeff(lo, hi);
  std::bernoulli_distribution keep(density);
  QuboProblem q(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    q.add_term(i, i, coeff(rng));
    for (std::size_t j = i + 1; j < dim; ++j) {
      if (keep(rng)) q.add_term(i, j, coeff(rng));
    }
  }
  return q;
}

Bits random_bits(std::size_t dim, std::mt19937_64& rng) {
  Bits b(dim);
  std::bernoulli_distribution coin(0.5);
  for (auto& v : b) v = coin(rng) ? 1 : 0;
  return b;
}

ProblemInstance random_tsp(std::size_t n, std::mt19937_64& rng, int span) {
  std::uniform_int_distribution<int> coord(0, span);
  ProblemInstance p;
  p.name = "random" + std::to_string(n);
  p.kind = ProblemKind::Tsp;
  for (std::size_t i = 0; i < n; ++i) p.nodes.push_back({static_cast<int>(i + 1), double(coord(rng)), double(coord(rng))});
  return p;
}

ProblemInstance random_cvrp(std::size_t customers, std::mt19937_64& rng, int capacity, int max_demand, int span) {
  ProblemInstance p = random_tsp(customers + 1, rng, span);
  p.name = "random-n" + std::to_string(customers + 1);
  p.kind = ProblemKind::Cvrp;
  std::uniform_int_distribution<int> demand(1, max_demand);
  p.demands.push_back(0);
  for (std::size_t i = 0; i < customers; ++i) p.demands.push_back(demand(rng));
  p.capacity = std::max(capacity, max_demand);
  p.depot_id = 1;
  return p;
}

DistanceMatrix random_matrix(std::size_t n, std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, dist(rng));
  return d;
}

}  // namespace qroute::testing
