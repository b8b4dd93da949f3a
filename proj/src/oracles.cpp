#include "qroute/oracles.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "qroute/error.hpp"

namespace qroute {

Tour held_karp(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n == 0) throw InvalidInput("held_karp needs at least one node");
  if (n > kHeldKarpLimit)
    throw InvalidInput("held_karp is limited to " + std::to_string(kHeldKarpLimit) + " nodes, got " + std::to_string(n));
  if (n == 1) return Tour{{1}, 0};
  if (n == 2) return Tour{{1, 2}, d(0, 1) + d(1, 0)};

  // Node 0 is fixed as the start; subsets range over nodes 1..n-1.
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> cost((full + 1) * m, inf);
  std::vector<std::uint8_t> parent((full + 1) * m, 0);
  for (std::size_t v = 0; v < m; ++v) cost[(std::size_t{1} << v) * m + v] = d(0, v + 1);

  for (std::size_t set = 1; set <= full; ++set) {
    for (std::size_t last = 0; last < m; ++last) {
      if (!(set & (std::size_t{1} << last))) continue;
      const std::int64_t here = cost[set * m + last];
      if (here >= inf) continue;
      for (std::size_t next = 0; next < m; ++next) {
        if (set & (std::size_t{1} << next)) continue;
        const std::size_t grown = set | (std::size_t{1} << next);
        const std::int64_t c = here + d(last + 1, next + 1);
        if (c < cost[grown * m + next]) {
          cost[grown * m + next] = c;
          parent[grown * m + next] = static_cast<std::uint8_t>(last);
        }
      }
    }
  }

  std::int64_t best = inf;
  std::size_t last = 0;
  for (std::size_t v = 0; v < m; ++v) {
    const std::int64_t c = cost[full * m + v] + d(v + 1, 0);
    if (c < best) {
      best = c;
      last = v;
    }
  }

  std::vector<int> reversed;
  std::size_t set = full;
  while (set) {
    reversed.push_back(static_cast<int>(last) + 2);
    const std::size_t prev = parent[set * m + last];
    set &= ~(std::size_t{1} << last);
    last = prev;
  }
  Tour t;
  t.nodes.push_back(1);
  t.nodes.insert(t.nodes.end(), reversed.rbegin(), reversed.rend());
  t.length = best;
  return t;
}

Sample enumerate_qubo(const QuboProblem& q) {
  const std::size_t n = q.dim();
  if (n > kEnumerationLimit)
    throw InvalidInput("enumeration is limited to " + std::to_string(kEnumerationLimit) + " variables");
  std::vector<QuboTerm> terms = q.terms();
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double e = 0.0;
    for (const auto& t : terms) {
      if (((mask >> t.i) & 1U) && ((mask >> t.j) & 1U)) e += t.value;
    }
    if (e < best) {
      best = e;
      best_mask = mask;
    }
  }
  Bits bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((best_mask >> i) & 1U);
  return make_sample(q, std::move(bits));
}

CvrpOptimum brute_force_cvrp(const ProblemInstance& instance) {
  if (instance.kind != ProblemKind::Cvrp) throw InvalidInput("brute_force_cvrp needs a CVRP instance");
  const std::vector<int> customers = instance.customers();
  const std::size_t c = customers.size();
  if (c > kBruteForceCustomers)
    throw InvalidInput("brute_force_cvrp is limited to " + std::to_string(kBruteForceCustomers) + " customers");
  if (c == 0) return {};

  const DistanceMatrix d = distance_matrix(instance);
  const auto depot = static_cast<std::size_t>(instance.depot_id - 1);
  auto at = [](int id) { return static_cast<std::size_t>(id - 1); };

  const std::size_t subsets = std::size_t{1} << c;
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> route_cost(subsets, inf);
  std::vector<std::vector<int>> route_order(subsets);

  for (std::size_t s = 1; s < subsets; ++s) {
    std::vector<int> members;
    long load = 0;
    for (std::size_t i = 0; i < c; ++i) {
      if (s & (std::size_t{1} << i)) {
        members.push_back(customers[i]);
        load += instance.demand(customers[i]);
      }
    }
    if (load > instance.capacity) continue;
    // members is sorted, so next_permutation walks every order
    do {
      std::int64_t len = d(depot, at(members.front())) + d(at(members.back()), depot);
      for (std::size_t k = 0; k + 1 < members.size(); ++k) len += d(at(members[k]), at(members[k + 1]));
      if (len < route_cost[s]) {
        route_cost[s] = len;
        route_order[s] = members;
      }
    } while (std::next_permutation(members.begin(), members.end()));
  }

  std::vector<std::int64_t> best(subsets, inf);
  std::vector<std::size_t> choice(subsets, 0);
  best[0] = 0;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    const std::size_t low = mask & (~mask + 1);
    const std::size_t rest = mask ^ low;
    // every sub-mask of rest, joined with the lowest member
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t route = sub | low;
      if (route_cost[route] < inf && best[mask ^ route] < inf) {
        const std::int64_t total = route_cost[route] + best[mask ^ route];
        if (total < best[mask]) {
          best[mask] = total;
          choice[mask] = route;
        }
      }
      if (sub == 0) break;
    }
  }
  if (best[subsets - 1] >= inf) throw InvalidInput("no capacity-feasible partition exists");

  CvrpOptimum out;
  out.distance = best[subsets - 1];
  for (std::size_t mask = subsets - 1; mask; mask ^= choice[mask]) out.routes.push_back(route_order[choice[mask]]);
  return out;
}

}  // namespace qroute
