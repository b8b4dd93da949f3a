#include "qroute/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qroute/remote.hpp"
#include "stopwatch.hpp"

namespace qroute {

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::Exhaustive: return "exhaustive";
    case Backend::Tabu: return "tabu";
    case Backend::SimulatedAnnealing: return "sa";
    case Backend::Remote: return "remote";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(const std::string& text) {
  if (text == "exhaustive") return Backend::Exhaustive;
  if (text == "tabu") return Backend::Tabu;
  if (text == "sa") return Backend::SimulatedAnnealing;
  if (text == "remote") return Backend::Remote;
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (subqubo_size < 1) throw InvalidInput("subqubo_size must be at least 1");
  if (backend == Backend::Exhaustive && subqubo_size > kMaxExhaustiveDim)
    throw InvalidInput("the exhaustive backend needs subqubo_size <= " + std::to_string(kMaxExhaustiveDim));
  if (tabu_tenure && *tabu_tenure == 0) throw InvalidInput("tabu_tenure must be positive");
  if (tabu_iterations && *tabu_iterations == 0) throw InvalidInput("tabu_iterations must be positive");
  if (!(annealing.cooling > 0.0 && annealing.cooling < 1.0)) throw InvalidInput("cooling factor must lie in (0, 1)");
  if (backend == Backend::Remote) {
    if (remote.endpoint.empty()) throw InvalidInput("remote backend needs an endpoint");
    if (remote.num_reads == 0) throw InvalidInput("num_reads must be positive");
    if (remote.fallback == Backend::Remote) throw InvalidInput("the fallback backend must be local");
    if (remote.fallback == Backend::Exhaustive && subqubo_size > kMaxExhaustiveDim)
      throw InvalidInput("exhaustive fallback needs subqubo_size <= " + std::to_string(kMaxExhaustiveDim));
  }
}

namespace {

class Solver {
 public:
  Solver(const QuboProblem& q, const SolverConfig& config)
      : q_(q), cq_(q), config_(config), rng_(config.seed), backend_(config.backend) {}

  SolveReport run() {
    Stopwatch outer;
    const std::size_t n = q_.dim();
    const std::size_t tenure = config_.tabu_tenure.value_or(default_tabu_tenure(n));
    const std::size_t iterations = config_.tabu_iterations.value_or(default_tabu_iterations(n));
    const std::size_t polish = config_.polish_iterations.value_or(default_polish_iterations(n));

    Bits start(n);
    std::bernoulli_distribution coin(0.5);
    for (auto& b : start) b = coin(rng_) ? 1 : 0;
    accept(tabu_improve(cq_, q_, start, tenure, iterations, rng_()));

    std::size_t budget = config_.num_repeats;
    while (budget > 0) {
      ++report_.iterations;
      const double before = report_.best.energy;
      Bits working = report_.best.bits;
      double working_energy = report_.best.energy;

      const std::vector<std::size_t> order = rank_by_impact(cq_, report_.best.bits);
      for (std::size_t first = 0; first < order.size(); first += config_.subqubo_size) {
        const std::size_t last = std::min(order.size(), first + config_.subqubo_size);
        std::vector<std::size_t> vars(order.begin() + static_cast<std::ptrdiff_t>(first),
                                      order.begin() + static_cast<std::ptrdiff_t>(last));
        std::sort(vars.begin(), vars.end());
        try_subproblem(vars, working, working_energy);
      }

      // Polish the merged state on the full problem, as qbsolv does between
      // splitting passes.
      if (polish > 0) {
        Sample polished = tabu_improve(cq_, q_, working, tenure, polish, rng_());
        if (polished.energy < working_energy) {
          working = std::move(polished.bits);
          working_energy = polished.energy;
        }
      }

      if (working_energy < before) {
        accept(make_sample(q_, std::move(working)));
        budget = config_.num_repeats;
      } else {
        --budget;
      }
    }
    report_.outer_time = outer.seconds();
    return std::move(report_);
  }

 private:
  void accept(Sample s) {
    if (report_.energy_trace.empty() || s.energy < report_.best.energy) {
      report_.energy_trace.push_back(s.energy);
      report_.best = std::move(s);
    }
  }

  void try_subproblem(const std::vector<std::size_t>& vars, Bits& working, double& working_energy) {
    const QuboProblem sub = fold_subproblem(cq_, working, vars);
    Bits current(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) current[k] = working[vars[k]];

    Stopwatch backend_clock;
    Sample candidate = run_backend(sub, current);
    report_.backend_time += backend_clock.seconds();
    ++report_.subqubo_calls;

    const double predicted = candidate.energy - sub.evaluate(current);
    if (!(predicted < 0.0)) return;

    Bits next = working;
    for (std::size_t k = 0; k < vars.size(); ++k) next[vars[k]] = candidate.bits[k];
    const double next_energy = q_.evaluate(next);
    const double measured = next_energy - working_energy;
    report_.adoptions.push_back({predicted, measured});
    if (!(measured < 0.0)) return;
    working = std::move(next);
    working_energy = next_energy;
  }

  Sample run_backend(const QuboProblem& sub, const Bits& current) {
    const std::uint64_t seed = rng_();
    if (backend_ == Backend::Remote) {
      try {
        RemoteResult r = sample_remote(sub, config_.remote.endpoint, config_.remote.num_reads, config_.remote.timeout);
        report_.remote_access_us += r.access_time_us;
        report_.remote_energy_corrections += r.energy_corrections;
        if (r.samples.empty()) throw RemoteError(RemoteErrorKind::MalformedResponse, "service returned no samples");
        return std::move(r.samples.front());
      } catch (const RemoteError& e) {
        report_.diagnostics.push_back(std::string("remote sampler failed (") + to_string(e.kind()) + "): " + e.what());
        if (!config_.remote.fallback) throw SolveAborted(e.what(), report_.best);
        backend_ = *config_.remote.fallback;
        report_.fallback_used = true;
        report_.diagnostics.push_back(std::string("continuing with the ") + to_string(backend_) + " backend");
      }
    }
    switch (backend_) {
      case Backend::Exhaustive:
        return solve_subqubo_exhaustive(sub);
      case Backend::SimulatedAnnealing:
        return simulated_annealing(sub, current, config_.annealing, seed);
      case Backend::Tabu:
      case Backend::Remote: {
        const std::size_t m = sub.dim();
        return tabu_improve(sub, current, config_.tabu_tenure.value_or(default_tabu_tenure(m)),
                            default_tabu_iterations(m), seed);
      }
    }
    return make_sample(sub, current);
  }

  const QuboProblem& q_;
  CompiledQubo cq_;
  const SolverConfig& config_;
  std::mt19937_64 rng_;
  Backend backend_;
  SolveReport report_;
};

}  // namespace

SolveReport solve(const QuboProblem& q, const SolverConfig& config) {
  config.validate();
  if (q.dim() == 0) throw InvalidInput("cannot solve a QUBO without variables");
  return Solver(q, config).run();
}

}  // namespace qroute
