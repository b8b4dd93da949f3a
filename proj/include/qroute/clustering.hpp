#pragma once

// Classical cluster-first phase: core-stop seeded greedy growth around the
// running geometric center, then single-customer reassignment toward
// closer centers.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qroute/instance.hpp"

namespace qroute {

enum class CoreStopRule { MaxDistance, MaxRequest };

const char* to_string(CoreStopRule rule);
std::optional<CoreStopRule> parse_core_stop_rule(const std::string& text);

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Cluster {
  std::vector<int> members;  // customer ids, ascending
  Point center;
  int total_demand = 0;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct Clustering {
  std::vector<Cluster> clusters;

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

// Arithmetic mean of the member coordinates.
Point geometric_center(const ProblemInstance& instance, const std::vector<int>& members);
double euclidean(const Point& a, const Point& b);

struct GenerationOptions {
  // When the nearest candidate does not fit, keep looking for the nearest
  // one that does instead of closing the cluster.
  bool skip_infeasible = false;
};

Clustering generate_clusters(const ProblemInstance& instance, CoreStopRule rule,
                             const GenerationOptions& options = {});

struct ClusterMove {
  int customer = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  double distance_before = 0.0;  // to the old center, at move time
  double distance_after = 0.0;   // to the new center, at move time
};

struct ImprovementResult {
  Clustering clustering;
  std::vector<ClusterMove> moves;
  bool reached_fixpoint = false;
};

inline constexpr std::size_t kDefaultImprovementIterations = 50;
inline constexpr std::size_t kUnboundedIterations = std::numeric_limits<std::size_t>::max();

// Each restart applies at most one move; stops at a fixpoint or after
// max_iterations moves.
ImprovementResult improve_clusters_logged(const ProblemInstance& instance, Clustering clustering,
                                          std::size_t max_iterations = kDefaultImprovementIterations);

Clustering improve_clusters(const ProblemInstance& instance, Clustering clustering,
                            std::size_t max_iterations = kDefaultImprovementIterations);

// Human-readable problems with a clustering; empty when it is valid.
std::vector<std::string> check_clustering(const ProblemInstance& instance, const Clustering& clustering);

}  // namespace qroute
