#include "qroute/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qroute/error.hpp"

namespace qroute {

const char* to_string(CoreStopRule rule) {
  return rule == CoreStopRule::MaxDistance ? "max_distance" : "max_request";
}

std::optional<CoreStopRule> parse_core_stop_rule(const std::string& text) {
  if (text == "max_distance") return CoreStopRule::MaxDistance;
  if (text == "max_request") return CoreStopRule::MaxRequest;
  return std::nullopt;
}

double euclidean(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point geometric_center(const ProblemInstance& inst, const std::vector<int>& members) {
  Point c;
  if (members.empty()) return c;
  for (int id : members) {
    c.x += inst.node(id).x;
    c.y += inst.node(id).y;
  }
  c.x /= static_cast<double>(members.size());
  c.y /= static_cast<double>(members.size());
  return c;
}

namespace {

Point location(const ProblemInstance& inst, int id) { return {inst.node(id).x, inst.node(id).y}; }

int pick_core_stop(const ProblemInstance& inst, const std::set<int>& unclustered, CoreStopRule rule) {
  const Point depot = location(inst, inst.depot_id);
  int best = *unclustered.begin();
  double best_score = -1.0;
  for (int id : unclustered) {  // ascending, so ties keep the lowest id
    const double score = rule == CoreStopRule::MaxRequest ? static_cast<double>(inst.demand(id))
                                                          : euclidean(location(inst, id), depot);
    if (score > best_score) {
      best_score = score;
      best = id;
    }
  }
  return best;
}

void refresh(const ProblemInstance& inst, Cluster& c) {
  std::sort(c.members.begin(), c.members.end());
  c.center = geometric_center(inst, c.members);
  c.total_demand = 0;
  for (int id : c.members) c.total_demand += inst.demand(id);
}

}  // namespace

Clustering generate_clusters(const ProblemInstance& inst, CoreStopRule rule, const GenerationOptions& options) {
  if (inst.kind != ProblemKind::Cvrp) throw InvalidInput("clustering needs a CVRP instance");
  std::set<int> unclustered;
  for (int id : inst.customers()) {
    if (inst.demand(id) > inst.capacity)
      throw InvalidInput("customer " + std::to_string(id) + " exceeds vehicle capacity");
    unclustered.insert(id);
  }

  Clustering out;
  while (!unclustered.empty()) {
    Cluster c;
    const int core = pick_core_stop(inst, unclustered, rule);
    unclustered.erase(core);
    c.members.push_back(core);
    refresh(inst, c);

    while (!unclustered.empty()) {
      int chosen = -1;
      double chosen_d = 0.0;
      for (int id : unclustered) {
        if (options.skip_infeasible && c.total_demand + inst.demand(id) > inst.capacity) continue;
        const double d = euclidean(location(inst, id), c.center);
        if (chosen == -1 || d < chosen_d) {
          chosen = id;
          chosen_d = d;
        }
      }
      if (chosen == -1 || c.total_demand + inst.demand(chosen) > inst.capacity) break;
      unclustered.erase(chosen);
      c.members.push_back(chosen);
      refresh(inst, c);
    }
    out.clusters.push_back(std::move(c));
  }
  return out;
}

ImprovementResult improve_clusters_logged(const ProblemInstance& inst, Clustering clustering,
                                          std::size_t max_iterations) {
  ImprovementResult out;
  auto& clusters = clustering.clusters;

  std::vector<std::size_t> owner(inst.size() + 1, 0);
  const auto reindex = [&] {
    for (std::size_t k = 0; k < clusters.size(); ++k)
      for (int id : clusters[k].members) owner[static_cast<std::size_t>(id)] = k;
  };
  reindex();
  const std::vector<int> customers = inst.customers();

  std::size_t iterations = 0;
  bool moved = true;
  while (moved && iterations < max_iterations) {
    moved = false;
    for (int id : customers) {
      const std::size_t from = owner[static_cast<std::size_t>(id)];
      const Point p = location(inst, id);
      const double own = euclidean(p, clusters[from].center);
      std::size_t to = from;
      double to_d = own;
      for (std::size_t k = 0; k < clusters.size(); ++k) {
        if (k == from) continue;
        if (clusters[k].total_demand + inst.demand(id) > inst.capacity) continue;
        const double d = euclidean(p, clusters[k].center);
        if (d < to_d) {
          to = k;
          to_d = d;
        }
      }
      if (to == from) continue;

      auto& src = clusters[from].members;
      src.erase(std::find(src.begin(), src.end(), id));
      clusters[to].members.push_back(id);
      refresh(inst, clusters[from]);
      refresh(inst, clusters[to]);
      owner[static_cast<std::size_t>(id)] = to;
      out.moves.push_back({id, from, to, own, to_d});
      ++iterations;
      moved = true;
      break;  // restart the scan with the new centers
    }
  }
  out.reached_fixpoint = !moved;
  out.clustering = std::move(clustering);
  return out;
}

Clustering improve_clusters(const ProblemInstance& inst, Clustering clustering, std::size_t max_iterations) {
  return improve_clusters_logged(inst, std::move(clustering), max_iterations).clustering;
}

std::vector<std::string> check_clustering(const ProblemInstance& inst, const Clustering& clustering) {
  std::vector<std::string> problems;
  std::vector<int> seen(inst.size() + 1, 0);
  for (std::size_t k = 0; k < clustering.clusters.size(); ++k) {
    const Cluster& c = clustering.clusters[k];
    if (c.members.empty()) problems.push_back("cluster " + std::to_string(k) + " is empty");
    int demand = 0;
    for (int id : c.members) {
      if (id < 1 || id > static_cast<int>(inst.size())) {
        problems.push_back("cluster " + std::to_string(k) + " has unknown node " + std::to_string(id));
        continue;
      }
      if (id == inst.depot_id) problems.push_back("depot inside cluster " + std::to_string(k));
      ++seen[static_cast<std::size_t>(id)];
      demand += inst.demand(id);
    }
    if (demand != c.total_demand) problems.push_back("cluster " + std::to_string(k) + " demand bookkeeping is stale");
    if (demand > inst.capacity) problems.push_back("cluster " + std::to_string(k) + " exceeds capacity");
    const Point center = geometric_center(inst, c.members);
    if (std::abs(center.x - c.center.x) > 1e-9 || std::abs(center.y - c.center.y) > 1e-9)
      problems.push_back("cluster " + std::to_string(k) + " center is not the member mean");
  }
  for (int id : inst.customers()) {
    if (seen[static_cast<std::size_t>(id)] != 1)
      problems.push_back("customer " + std::to_string(id) + " appears " + std::to_string(seen[static_cast<std::size_t>(id)]) +
                         " times");
  }
  return problems;
}

}  // namespace qroute
