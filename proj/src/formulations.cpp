#include "qroute/formulations.hpp"

#include <algorithm>
#include <map>

#include "qroute/error.hpp"

namespace qroute {

const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::NodeOnce: return "node-once";
    case Constraint::PositionOnce: return "position-once";
    case Constraint::CustomerOnce: return "customer-once";
    case Constraint::CapacityOneHot: return "capacity-one-hot";
    case Constraint::CapacityBalance: return "capacity-balance";
    case Constraint::DepotPerRoute: return "depot-per-route";
    case Constraint::SampleLength: return "sample-length";
  }
  return "unknown";
}

std::int64_t cycle_length(const DistanceMatrix& d, std::span<const std::size_t> order) {
  std::int64_t total = 0;
  for (std::size_t p = 0; p < order.size(); ++p) total += d(order[p], order[(p + 1) % order.size()]);
  return total;
}

namespace {

struct LinearTerm {
  std::size_t var;
  double coeff;
};

// penalty * (constant + sum coeff_i x_i)^2 expanded with x^2 = x.
void add_squared(QuboProblem& q, std::vector<LinearTerm> terms, double constant, double penalty) {
  std::map<std::size_t, double> merged;
  for (const auto& t : terms) merged[t.var] += t.coeff;
  terms.clear();
  for (const auto& [v, c] : merged) {
    if (c != 0.0) terms.push_back({v, c});
  }

  q.add_offset(penalty * constant * constant);
  for (std::size_t a = 0; a < terms.size(); ++a) {
    const double ca = terms[a].coeff;
    q.add_term(terms[a].var, terms[a].var, penalty * (ca * ca + 2.0 * constant * ca));
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      q.add_term(terms[a].var, terms[b].var, penalty * 2.0 * ca * terms[b].coeff);
    }
  }
}

// penalty * (1 - sum x_i)^2
void add_one_hot(QuboProblem& q, std::span<const std::size_t> vars, double penalty) {
  std::vector<LinearTerm> terms;
  terms.reserve(vars.size());
  for (std::size_t v : vars) terms.push_back({v, -1.0});
  add_squared(q, std::move(terms), 1.0, penalty);
}

std::vector<int> default_ids(std::size_t n) {
  std::vector<int> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<int>(i + 1);
  return ids;
}

std::string label(const char* family, std::initializer_list<long long> parts) {
  std::string s = family;
  s += '[';
  bool first = true;
  for (long long p : parts) {
    if (!first) s += ',';
    s += std::to_string(p);
    first = false;
  }
  s += ']';
  return s;
}

}  // namespace

// ---------------------------------------------------------------- routing

double default_tsp_penalty(std::size_t n, std::int64_t max_distance) {
  if (max_distance <= 0) return 1.0;
  return static_cast<double>(n) * static_cast<double>(max_distance);
}

TspQubo build_tsp_qubo(const TspQuboSpec& spec) {
  const std::size_t n = spec.distances.size();
  if (n == 0) throw InvalidInput("routing QUBO needs at least one node");
  if (!spec.node_ids.empty() && spec.node_ids.size() != n)
    throw InvalidInput("node_ids must match the distance matrix size");

  const std::int64_t max_d = spec.distances.max();
  const double a = spec.penalty.value_or(default_tsp_penalty(n, max_d));
  const double b = spec.objective_weight;
  if (!(b > 0.0)) throw InvalidInput("objective weight B must be positive");
  if (!(a > 0.0) || !(b * static_cast<double>(max_d) < a))
    throw InvalidInput("penalties must satisfy 0 < B*max(D) < A (A=" + std::to_string(a) +
                       ", B*max(D)=" + std::to_string(b * static_cast<double>(max_d)) + ")");

  TspQubo out;
  out.layout.n = n;
  out.layout.node_ids = spec.node_ids.empty() ? default_ids(n) : spec.node_ids;
  out.penalty = a;
  out.objective_weight = b;

  const TspLayout& lay = out.layout;
  QuboProblem& q = out.qubo;
  q = QuboProblem(lay.dim());

  std::vector<std::size_t> group(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) group[j] = lay.index(i, j);
    add_one_hot(q, group, a);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) group[i] = lay.index(i, j);
    add_one_hot(q, group, a);
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      const double w = b * static_cast<double>(spec.distances(u, v));
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) q.add_term(lay.index(u, j), lay.index(v, (j + 1) % n), w);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q.set_label(lay.index(i, j), label("x", {lay.node_ids[i], static_cast<long long>(j)}));
  return out;
}

TourDecoding decode_tour(const TspLayout& lay, const DistanceMatrix& d, std::span<const std::uint8_t> bits) {
  TourDecoding out;
  const std::size_t n = lay.n;
  if (bits.size() != lay.dim()) {
    out.violations.push_back({Constraint::SampleLength, 0, bits.size(),
                              "expected " + std::to_string(lay.dim()) + " bits"});
    return out;
  }
  std::vector<std::size_t> order(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) count += bits[lay.index(i, j)] ? 1 : 0;
    if (count != 1)
      out.violations.push_back({Constraint::NodeOnce, i, count,
                                "node " + std::to_string(lay.node_ids[i]) + " occupies " + std::to_string(count) +
                                    " positions"});
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (bits[lay.index(i, j)]) {
        ++count;
        order[j] = i;
      }
    }
    if (count != 1)
      out.violations.push_back({Constraint::PositionOnce, j, count,
                                "position " + std::to_string(j) + " holds " + std::to_string(count) + " nodes"});
  }
  if (!out.violations.empty()) return out;

  const auto anchor = std::find(order.begin(), order.end(), std::size_t{0});
  std::rotate(order.begin(), anchor, order.end());
  Tour t;
  t.length = cycle_length(d, order);
  for (std::size_t local : order) t.nodes.push_back(lay.node_ids[local]);
  out.tour = std::move(t);
  return out;
}

Bits encode_tour(const TspLayout& lay, std::span<const std::size_t> order) {
  if (order.size() != lay.n) throw InvalidInput("tour order must list every node once");
  Bits bits(lay.dim(), 0);
  for (std::size_t p = 0; p < order.size(); ++p) bits[lay.index(order[p], p)] = 1;
  return bits;
}

// ---------------------------------------------------------------- clustering

ClusterPenalties default_cluster_penalties(std::int64_t max_distance, std::size_t customers, double cluster_weight) {
  ClusterPenalties p;
  p.capacity = std::max(1.0, static_cast<double>(max_distance) * static_cast<double>(customers));
  p.onehot = std::max(p.capacity * p.capacity, p.capacity + 1.0);
  p.cluster = cluster_weight;
  return p;
}

namespace {

void check_hierarchy(const ClusterPenalties& p, std::int64_t max_d) {
  if (!(p.onehot > p.capacity))
    throw InvalidInput("penalty X must exceed A (X=" + std::to_string(p.onehot) + ", A=" + std::to_string(p.capacity) + ")");
  if (!(p.capacity > p.cluster * static_cast<double>(max_d)))
    throw InvalidInput("penalty A must exceed C*max(D)");
  if (p.cluster < 0.0) throw InvalidInput("cluster weight C must be non-negative");
}

}  // namespace

ClusterQubo build_cluster_qubo(const ClusterQuboSpec& spec) {
  const std::size_t m = spec.vehicles;
  const std::size_t nc = spec.weights.size();
  if (m == 0) throw InvalidInput("cluster QUBO needs at least one vehicle");
  if (spec.capacity <= 0) throw InvalidInput("capacity slots W must be positive");
  if (spec.distances.size() != nc) throw InvalidInput("distance matrix must cover exactly the customers");
  for (int w : spec.weights) {
    if (w < 0) throw InvalidInput("customer weights must be non-negative");
    if (w > spec.capacity)
      throw InvalidInput("capacity one-hot with W=" + std::to_string(spec.capacity) + " cannot represent demand " +
                         std::to_string(w));
  }

  const std::int64_t max_d = spec.distances.max();
  ClusterPenalties pen = default_cluster_penalties(max_d, nc, spec.cluster_weight);
  if (spec.capacity_penalty) {
    pen.capacity = *spec.capacity_penalty;
    if (!spec.onehot_penalty) pen.onehot = std::max(pen.capacity * pen.capacity, pen.capacity + 1.0);
  }
  if (spec.onehot_penalty) pen.onehot = *spec.onehot_penalty;
  check_hierarchy(pen, max_d);

  ClusterQubo out;
  ClusterLayout& lay = out.layout;
  lay.vehicles = m;
  lay.slots = static_cast<std::size_t>(spec.capacity);
  lay.customers = nc;
  lay.customer_ids = spec.customer_ids.empty() ? default_ids(nc) : spec.customer_ids;
  lay.weights = spec.weights;
  out.penalties = pen;
  QuboProblem& q = out.qubo;
  q = QuboProblem(lay.dim());

  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::size_t> ys;
    std::vector<LinearTerm> balance;
    for (std::size_t n = 1; n <= lay.slots; ++n) {
      ys.push_back(lay.y(k, n));
      balance.push_back({lay.y(k, n), static_cast<double>(n)});
    }
    add_one_hot(q, ys, pen.onehot);
    for (std::size_t a = 0; a < nc; ++a) balance.push_back({lay.x(k, a), -static_cast<double>(spec.weights[a])});
    add_squared(q, std::move(balance), 0.0, pen.capacity);
  }
  for (std::size_t a = 0; a < nc; ++a) {
    std::vector<std::size_t> xs;
    for (std::size_t k = 0; k < m; ++k) xs.push_back(lay.x(k, a));
    add_one_hot(q, xs, pen.onehot);
  }
  if (pen.cluster != 0.0) {
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t u = 0; u < nc; ++u)
        for (std::size_t v = u + 1; v < nc; ++v)
          q.add_term(lay.x(k, u), lay.x(k, v), pen.cluster * static_cast<double>(spec.distances(u, v)));
  }

  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t n = 1; n <= lay.slots; ++n)
      q.set_label(lay.y(k, n), label("y", {static_cast<long long>(k + 1), static_cast<long long>(n)}));
    for (std::size_t a = 0; a < nc; ++a)
      q.set_label(lay.x(k, a), label("x", {static_cast<long long>(k + 1), lay.customer_ids[a]}));
  }
  return out;
}

ClusterDecoding decode_clusters(const ClusterLayout& lay, std::span<const std::uint8_t> bits) {
  ClusterDecoding out;
  if (bits.size() != lay.dim()) {
    out.violations.push_back({Constraint::SampleLength, 0, bits.size(), "expected " + std::to_string(lay.dim()) + " bits"});
    return out;
  }
  std::vector<std::size_t> vehicle(lay.customers, 0);
  for (std::size_t a = 0; a < lay.customers; ++a) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < lay.vehicles; ++k) {
      if (bits[lay.x(k, a)]) {
        ++count;
        vehicle[a] = k;
      }
    }
    if (count != 1)
      out.violations.push_back({Constraint::CustomerOnce, a, count,
                                "customer " + std::to_string(lay.customer_ids[a]) + " packed " + std::to_string(count) +
                                    " times"});
  }
  for (std::size_t k = 0; k < lay.vehicles; ++k) {
    std::size_t count = 0, slot = 0;
    for (std::size_t n = 1; n <= lay.slots; ++n) {
      if (bits[lay.y(k, n)]) {
        ++count;
        slot = n;
      }
    }
    if (count != 1) {
      out.violations.push_back({Constraint::CapacityOneHot, k, count,
                                "vehicle " + std::to_string(k + 1) + " selects " + std::to_string(count) + " capacity slots"});
      continue;
    }
    long long load = 0;
    for (std::size_t a = 0; a < lay.customers; ++a) {
      if (bits[lay.x(k, a)]) load += lay.weights[a];
    }
    if (load != static_cast<long long>(slot))
      out.violations.push_back({Constraint::CapacityBalance, k, 1,
                                "vehicle " + std::to_string(k + 1) + " load " + std::to_string(load) + " != slot " +
                                    std::to_string(slot)});
  }
  if (out.violations.empty()) out.assignment = std::move(vehicle);
  return out;
}

CoarsenedDemands coarsen_demands(std::span<const int> weights, int capacity, int divisor) {
  if (divisor <= 0) throw InvalidInput("coarsening divisor must be positive");
  CoarsenedDemands out;
  out.capacity = capacity / divisor;
  for (int w : weights) out.weights.push_back((w + divisor - 1) / divisor);
  return out;
}

// ---------------------------------------------------------------- joint

JointQubo build_joint_qubo(const JointQuboSpec& spec) {
  const std::size_t m = spec.vehicles;
  const std::size_t nc = spec.weights.size();
  if (m == 0) throw InvalidInput("joint QUBO needs at least one vehicle");
  if (spec.capacity <= 0) throw InvalidInput("capacity slots W must be positive");
  if (spec.distances.size() != nc + 1) throw InvalidInput("distance matrix must cover the depot and every customer");
  for (int w : spec.weights) {
    if (w < 0 || w > spec.capacity) throw InvalidInput("customer weight outside 0..W");
  }
  if (spec.route_weight < 0.0) throw InvalidInput("route weight E must be non-negative");

  JointQubo out;
  JointLayout& lay = out.layout;
  lay.vehicles = m;
  lay.customers = nc;
  lay.positions = nc + m;
  lay.slots = static_cast<std::size_t>(spec.capacity);
  lay.node_ids = spec.node_ids.empty() ? default_ids(nc + 1) : spec.node_ids;
  lay.weights = spec.weights;
  if (lay.dim() > spec.max_variables)
    throw InvalidInput("joint QUBO would need " + std::to_string(lay.dim()) + " variables (limit " +
                       std::to_string(spec.max_variables) + ")");

  std::int64_t max_customer_d = 0;
  for (std::size_t u = 1; u <= nc; ++u)
    for (std::size_t v = 1; v <= nc; ++v) max_customer_d = std::max(max_customer_d, spec.distances(u, v));
  const std::int64_t max_d = spec.distances.max();

  ClusterPenalties pen = default_cluster_penalties(max_customer_d, nc, spec.cluster_weight);
  if (spec.capacity_penalty) pen.capacity = *spec.capacity_penalty;
  // Removing one item saves at most two route edges and its cluster edges.
  const double objective_swing =
      (2.0 * spec.route_weight + spec.cluster_weight * static_cast<double>(nc)) * static_cast<double>(max_d);
  pen.onehot = spec.onehot_penalty.value_or(
      std::max({pen.capacity * pen.capacity, pen.capacity + 1.0, objective_swing + 1.0}));
  check_hierarchy(pen, max_customer_d);
  if (!(pen.onehot > objective_swing)) throw InvalidInput("penalty X must dominate the routing and clustering terms");

  out.penalties = pen;
  out.route_weight = spec.route_weight;
  QuboProblem& q = out.qubo;
  q = QuboProblem(lay.dim());
  const std::size_t items = lay.items();
  const std::size_t big_n = lay.positions;

  // capacity one-hot and balance per vehicle
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::size_t> ys;
    std::vector<LinearTerm> balance;
    for (std::size_t n = 1; n <= lay.slots; ++n) {
      ys.push_back(lay.y(k, n));
      balance.push_back({lay.y(k, n), static_cast<double>(n)});
    }
    add_one_hot(q, ys, pen.onehot);
    for (std::size_t a = 0; a < nc; ++a)
      for (std::size_t j = 0; j < big_n; ++j) balance.push_back({lay.x(k, a, j), -static_cast<double>(spec.weights[a])});
    add_squared(q, std::move(balance), 0.0, pen.capacity);
  }
  // every item on exactly one route at exactly one position
  for (std::size_t a = 0; a < items; ++a) {
    std::vector<std::size_t> xs;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < big_n; ++j) xs.push_back(lay.x(k, a, j));
    add_one_hot(q, xs, pen.onehot);
  }
  // cluster compactness
  if (pen.cluster != 0.0) {
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t u = 0; u < nc; ++u)
        for (std::size_t v = u + 1; v < nc; ++v) {
          const double w = pen.cluster * static_cast<double>(spec.distances(u + 1, v + 1));
          if (w == 0.0) continue;
          for (std::size_t j = 0; j < big_n; ++j)
            for (std::size_t jj = 0; jj < big_n; ++jj) q.add_term(lay.x(k, u, j), lay.x(k, v, jj), w);
        }
  }
  // every position holds exactly one item
  for (std::size_t j = 0; j < big_n; ++j) {
    std::vector<std::size_t> xs;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t a = 0; a < items; ++a) xs.push_back(lay.x(k, a, j));
    add_one_hot(q, xs, pen.onehot);
  }
  // successive positions, aggregated over routes
  if (spec.route_weight != 0.0) {
    for (std::size_t u = 0; u < items; ++u)
      for (std::size_t v = 0; v < items; ++v) {
        if (u == v) continue;
        const double w =
            spec.route_weight * static_cast<double>(spec.distances(lay.distance_index(u), lay.distance_index(v)));
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < big_n; ++j)
          for (std::size_t k = 0; k < m; ++k)
            for (std::size_t kk = 0; kk < m; ++kk) q.add_term(lay.x(k, u, j), lay.x(kk, v, (j + 1) % big_n), w);
      }
  }
  // one depot copy per route
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::size_t> xs;
    for (std::size_t a = nc; a < items; ++a)
      for (std::size_t j = 0; j < big_n; ++j) xs.push_back(lay.x(k, a, j));
    add_one_hot(q, xs, pen.onehot);
  }

  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t a = 0; a < items; ++a) {
      const long long id = lay.is_depot(a) ? -static_cast<long long>(a - nc + 1) : lay.node_ids[a + 1];
      for (std::size_t j = 0; j < big_n; ++j)
        q.set_label(lay.x(k, a, j), label("x", {static_cast<long long>(k + 1), id, static_cast<long long>(j)}));
    }
    for (std::size_t n = 1; n <= lay.slots; ++n)
      q.set_label(lay.y(k, n), label("y", {static_cast<long long>(k + 1), static_cast<long long>(n)}));
  }
  return out;
}

JointDecoding decode_joint(const JointLayout& lay, const DistanceMatrix& d, std::span<const std::uint8_t> bits) {
  JointDecoding out;
  if (bits.size() != lay.dim()) {
    out.violations.push_back({Constraint::SampleLength, 0, bits.size(), "expected " + std::to_string(lay.dim()) + " bits"});
    return out;
  }
  const std::size_t items = lay.items();
  const std::size_t big_n = lay.positions;
  std::vector<std::size_t> item_vehicle(items, 0), item_pos(items, 0);

  for (std::size_t a = 0; a < items; ++a) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < lay.vehicles; ++k)
      for (std::size_t j = 0; j < big_n; ++j)
        if (bits[lay.x(k, a, j)]) {
          ++count;
          item_vehicle[a] = k;
          item_pos[a] = j;
        }
    if (count != 1)
      out.violations.push_back({Constraint::CustomerOnce, a, count,
                                std::string(lay.is_depot(a) ? "depot copy " : "customer ") + std::to_string(a) +
                                    " placed " + std::to_string(count) + " times"});
  }
  for (std::size_t j = 0; j < big_n; ++j) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < lay.vehicles; ++k)
      for (std::size_t a = 0; a < items; ++a) count += bits[lay.x(k, a, j)] ? 1 : 0;
    if (count != 1)
      out.violations.push_back({Constraint::PositionOnce, j, count, "position " + std::to_string(j) + " holds " + std::to_string(count)});
  }
  for (std::size_t k = 0; k < lay.vehicles; ++k) {
    std::size_t depots = 0;
    for (std::size_t a = lay.customers; a < items; ++a)
      for (std::size_t j = 0; j < big_n; ++j) depots += bits[lay.x(k, a, j)] ? 1 : 0;
    if (depots != 1)
      out.violations.push_back({Constraint::DepotPerRoute, k, depots, "route " + std::to_string(k + 1) + " has " + std::to_string(depots) + " depot copies"});

    std::size_t count = 0, slot = 0;
    for (std::size_t n = 1; n <= lay.slots; ++n)
      if (bits[lay.y(k, n)]) {
        ++count;
        slot = n;
      }
    if (count != 1) {
      out.violations.push_back({Constraint::CapacityOneHot, k, count, "route " + std::to_string(k + 1) + " capacity slots"});
      continue;
    }
    long long load = 0;
    for (std::size_t a = 0; a < lay.customers; ++a)
      for (std::size_t j = 0; j < big_n; ++j)
        if (bits[lay.x(k, a, j)]) load += lay.weights[a];
    if (load != static_cast<long long>(slot))
      out.violations.push_back({Constraint::CapacityBalance, k, 1, "route " + std::to_string(k + 1) + " load mismatch"});
  }
  if (!out.violations.empty()) return out;

  out.feasible = true;
  out.routes.assign(lay.vehicles, {});
  std::vector<std::size_t> depot_pos(lay.vehicles, 0);
  for (std::size_t a = 0; a < items; ++a) {
    out.routes[item_vehicle[a]].push_back(a);
    if (lay.is_depot(a)) depot_pos[item_vehicle[a]] = item_pos[a];
  }
  out.routes_contiguous = true;
  for (std::size_t k = 0; k < lay.vehicles; ++k) {
    auto& r = out.routes[k];
    const std::size_t start = depot_pos[k];
    std::sort(r.begin(), r.end(), [&](std::size_t a, std::size_t b) {
      return (item_pos[a] + big_n - start) % big_n < (item_pos[b] + big_n - start) % big_n;
    });
    for (std::size_t s = 0; s < r.size(); ++s) {
      if ((item_pos[r[s]] + big_n - start) % big_n != s) out.routes_contiguous = false;
    }
    std::vector<std::size_t> cycle;
    for (std::size_t a : r) cycle.push_back(lay.distance_index(a));
    out.route_length += cycle_length(d, cycle);
    for (std::size_t s = 0; s < r.size(); ++s)
      for (std::size_t t = s + 1; t < r.size(); ++t)
        if (!lay.is_depot(r[s]) && !lay.is_depot(r[t]))
          out.cluster_spread += d(lay.distance_index(r[s]), lay.distance_index(r[t]));
  }
  return out;
}

}  // namespace qroute
