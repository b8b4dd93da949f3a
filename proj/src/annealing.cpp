#include <cmath>
#include <random>

#include "qroute/decomposition.hpp"

namespace qroute {

Sample simulated_annealing(const QuboProblem& q, const Bits& start, const AnnealingSchedule& schedule,
                           std::uint64_t seed) {
  const std::size_t n = q.dim();
  if (start.size() != n) throw InvalidInput("annealing start state has the wrong length");
  if (!(schedule.cooling > 0.0 && schedule.cooling < 1.0)) throw InvalidInput("cooling factor must lie in (0, 1)");
  if (n == 0) return make_sample(q, start);

  const CompiledQubo cq(q);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Bits x = start;
  std::vector<double> field(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = cq.linear(i);
    for (const auto& nb : cq.neighbors(i)) {
      if (x[nb.var]) f += nb.weight;
    }
    field[i] = f;
  }
  double energy = cq.evaluate(x);
  Bits best = x;
  double best_energy = energy;

  double temperature = schedule.initial_temperature.value_or(cq.max_abs_coefficient());
  if (!(temperature > 0.0)) temperature = 1.0;

  for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      const double delta = x[i] ? -field[i] : field[i];
      if (delta > 0.0 && unit(rng) >= std::exp(-delta / temperature)) continue;
      x[i] ^= 1;
      energy += delta;
      const double sign = x[i] ? 1.0 : -1.0;
      for (const auto& nb : cq.neighbors(i)) field[nb.var] += sign * nb.weight;
      if (energy < best_energy) {
        best_energy = energy;
        best = x;
      }
    }
    temperature *= schedule.cooling;
  }
  return make_sample(q, std::move(best));
}

}  // namespace qroute
