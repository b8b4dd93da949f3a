#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qroute/decomposition.hpp"

namespace qroute {

std::size_t default_tabu_tenure(std::size_t dim) { return std::max<std::size_t>(1, std::min<std::size_t>(12, dim * 3 / 5)); }

std::size_t default_polish_iterations(std::size_t dim) { return 25 * std::max<std::size_t>(dim, 1); }

std::size_t default_tabu_iterations(std::size_t dim) { return 500 * std::max<std::size_t>(dim, 1); }

Sample tabu_improve(const CompiledQubo& q, const QuboProblem& source, const Bits& start, std::size_t tenure,
                    std::size_t iterations, std::uint64_t seed) {
  const std::size_t n = q.dim();
  if (start.size() != n) throw InvalidInput("tabu start state has the wrong length");
  if (n == 0) return make_sample(source, start);

  std::mt19937_64 rng(seed);
  Bits x = start;
  // delta[i]: energy change of flipping i
  std::vector<double> delta(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = q.linear(i);
    for (const auto& nb : q.neighbors(i)) {
      if (x[nb.var]) f += nb.weight;
    }
    delta[i] = x[i] ? -f : f;
  }
  double energy = q.evaluate(x);
  Bits best = x;
  double best_energy = energy;
  std::vector<std::size_t> tabu_until(n, 0);
  constexpr double blocked = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= iterations; ++it) {
    const double aspiration = best_energy - energy;
    // scanning from a random rotation spreads ties across equal moves
    const std::size_t origin = static_cast<std::size_t>(rng() % n);
    double low = blocked;
    std::size_t pick = n;
    auto scan = [&](std::size_t from, std::size_t to) {
      for (std::size_t i = from; i < to; ++i) {
        const double k = (tabu_until[i] <= it || delta[i] < aspiration) ? delta[i] : blocked;
        if (k < low) {
          low = k;
          pick = i;
        }
      }
    };
    scan(origin, n);
    scan(0, origin);
    if (pick == n) pick = static_cast<std::size_t>(std::min_element(delta.begin(), delta.end()) - delta.begin());

    const double d = delta[pick];
    x[pick] ^= 1;
    energy += d;
    delta[pick] = -d;
    const bool on = x[pick];
    for (const auto& nb : q.neighbors(pick)) {
      // neighbour field moves by +-w; its flip delta follows its own bit
      const double w = on ? nb.weight : -nb.weight;
      delta[nb.var] += x[nb.var] ? -w : w;
    }
    tabu_until[pick] = it + tenure;

    if (energy < best_energy) {
      best_energy = energy;
      best = x;
    }
  }
  return make_sample(source, std::move(best));
}

Sample tabu_improve(const QuboProblem& q, const Bits& start, std::size_t tenure, std::size_t iterations,
                    std::uint64_t seed) {
  return tabu_improve(CompiledQubo(q), q, start, tenure, iterations, seed);
}

Sample solve_subqubo_exhaustive(const QuboProblem& q) {
  const std::size_t n = q.dim();
  if (n > kMaxExhaustiveDim)
    throw InvalidInput("exhaustive backend is limited to " + std::to_string(kMaxExhaustiveDim) + " variables, got " +
                       std::to_string(n));
  const CompiledQubo cq(q);
  Bits x(n, 0);
  std::vector<double> field(n);
  for (std::size_t i = 0; i < n; ++i) field[i] = cq.linear(i);

  double energy = 0.0;
  double best_energy = 0.0;
  std::uint64_t mask = 0;
  std::uint64_t best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto bit = static_cast<std::size_t>(__builtin_ctzll(k));
    energy += x[bit] ? -field[bit] : field[bit];
    x[bit] ^= 1;
    mask ^= std::uint64_t{1} << bit;
    const double sign = x[bit] ? 1.0 : -1.0;
    for (const auto& nb : cq.neighbors(bit)) field[nb.var] += sign * nb.weight;
    if (energy < best_energy || (energy == best_energy && mask < best_mask)) {
      best_energy = energy;
      best_mask = mask;
    }
  }
  Bits best(n, 0);
  for (std::size_t i = 0; i < n; ++i) best[i] = static_cast<std::uint8_t>((best_mask >> i) & 1U);
  return make_sample(q, std::move(best));
}

QuboProblem fold_subproblem(const CompiledQubo& q, std::span<const std::uint8_t> state,
                            std::span<const std::size_t> vars) {
  std::vector<std::size_t> local(q.dim(), static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < vars.size(); ++k) local[vars[k]] = k;

  QuboProblem sub(vars.size());
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const std::size_t v = vars[k];
    double diag = q.linear(v);
    for (const auto& nb : q.neighbors(v)) {
      const std::size_t other = local[nb.var];
      if (other == static_cast<std::size_t>(-1)) {
        if (state[nb.var]) diag += nb.weight;
      } else if (other > k) {
        sub.add_term(k, other, nb.weight);
      }
    }
    sub.add_term(k, k, diag);
  }
  return sub;
}

std::vector<std::size_t> rank_by_impact(const CompiledQubo& q, std::span<const std::uint8_t> state) {
  std::vector<double> impact(q.dim());
  for (std::size_t i = 0; i < q.dim(); ++i) impact[i] = std::abs(q.flip_delta(state, i));
  std::vector<std::size_t> order(q.dim());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return impact[a] > impact[b]; });
  return order;
}

}  // namespace qroute
