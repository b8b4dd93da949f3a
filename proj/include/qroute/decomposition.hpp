#pragma once

// Large-QUBO solver in the style of qbsolv: a full-problem tabu search seeds
// the incumbent, then rounds of impact-ranked splitting hand fixed-size
// subQUBOs (boundary folded into the diagonal) to a backend. A round that
// fails to improve the incumbent uses up one of `num_repeats`; an
// improvement resets the budget.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qroute/error.hpp"
#include "qroute/qubo.hpp"

namespace qroute {

enum class Backend { Exhaustive, Tabu, SimulatedAnnealing, Remote };

const char* to_string(Backend backend);
std::optional<Backend> parse_backend(const std::string& text);

inline constexpr std::size_t kMaxExhaustiveDim = 24;

struct AnnealingSchedule {
  std::optional<double> initial_temperature;  // default max |coefficient|
  double cooling = 0.98;                      // geometric factor per sweep
  std::size_t sweeps = 400;
};

struct RemoteConfig {
  std::string endpoint;  // http://host:port/path
  std::size_t num_reads = 10;
  std::chrono::milliseconds timeout{30000};
  // Local backend used for the rest of the solve once the service fails.
  std::optional<Backend> fallback;
};

struct SolverConfig {
  std::size_t subqubo_size = 20;
  std::size_t num_repeats = 250;
  Backend backend = Backend::Tabu;
  std::uint64_t seed = 0;
  std::optional<std::size_t> tabu_tenure;      // default min(12, 3*dim/5), at least 1
  std::optional<std::size_t> tabu_iterations;  // default 500 * dim
  // Full-problem tabu after each round of subQUBOs; 0 turns it off.
  std::optional<std::size_t> polish_iterations;  // default 25 * dim
  AnnealingSchedule annealing;
  RemoteConfig remote;

  // Throws InvalidInput.
  void validate() const;
};

std::size_t default_tabu_tenure(std::size_t dim);
std::size_t default_tabu_iterations(std::size_t dim);
std::size_t default_polish_iterations(std::size_t dim);

struct Adoption {
  double predicted_delta = 0.0;  // energy change of the subQUBO
  double measured_delta = 0.0;   // energy change of the full problem
};

struct SolveReport {
  Sample best;
  std::size_t iterations = 0;     // split rounds
  std::size_t subqubo_calls = 0;  // backend invocations
  double backend_time = 0.0;      // seconds inside backend solves
  double outer_time = 0.0;        // seconds for the whole solve
  std::vector<double> energy_trace;  // every accepted incumbent energy, in order
  std::vector<Adoption> adoptions;
  std::uint64_t remote_access_us = 0;
  std::size_t remote_energy_corrections = 0;
  bool fallback_used = false;
  std::vector<std::string> diagnostics;
};

// Raised when the backend fails and no fallback is configured.
class SolveAborted : public SolverError {
 public:
  SolveAborted(const std::string& what, Sample best_so_far)
      : SolverError(what), best_so_far_(std::move(best_so_far)) {}
  const Sample& best_so_far() const { return best_so_far_; }

 private:
  Sample best_so_far_;
};

SolveReport solve(const QuboProblem& q, const SolverConfig& config);

// Best state of a 1-flip tabu trajectory from `start` (recency tabu,
// best-so-far aspiration). Never worse than `start`.
Sample tabu_improve(const QuboProblem& q, const Bits& start, std::size_t tenure, std::size_t iterations,
                    std::uint64_t seed);
Sample tabu_improve(const CompiledQubo& q, const QuboProblem& source, const Bits& start, std::size_t tenure,
                    std::size_t iterations, std::uint64_t seed);

// Metropolis sweeps on a geometric schedule; returns the best state seen.
Sample simulated_annealing(const QuboProblem& q, const Bits& start, const AnnealingSchedule& schedule,
                           std::uint64_t seed);

// Global minimum by Gray-code enumeration; ties go to the lowest bit-vector
// value (bit i weighs 2^i). Throws InvalidInput above kMaxExhaustiveDim.
Sample solve_subqubo_exhaustive(const QuboProblem& q);

// The subQUBO over `vars` with every other variable held at `state`. Same
// coefficients as clamp(); offset and base energy are dropped.
QuboProblem fold_subproblem(const CompiledQubo& q, std::span<const std::uint8_t> state,
                            std::span<const std::size_t> vars);

// Variables ordered by |one-flip energy change| at `state`, largest first;
// equal magnitudes keep index order.
std::vector<std::size_t> rank_by_impact(const CompiledQubo& q, std::span<const std::uint8_t> state);

}  // namespace qroute
