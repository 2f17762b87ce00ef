/*
 * exact BFS distance tables, memoized per target vertex
 */
#pragma once
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <unordered_map>

#include "grid.hpp"

namespace ctspll {

constexpr int UNREACHABLE = -1;

struct DistTable {
  Vertex target = NO_VERTEX;
  std::vector<int> d;  // UNREACHABLE where no path exists
};

// tables are keyed by target so every query steering toward one goal or task
// vertex hits the same table
struct DistCache {
  explicit DistCache(const GridGraph& g) : graph(&g) {}
  DistCache(const DistCache&) = delete;
  DistCache& operator=(const DistCache&) = delete;

  const DistTable& table_for(Vertex target) const
  {
    if (!graph->passable(target))
      throw std::invalid_argument("distance query on blocked vertex");
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(target);
    if (it == tables.end()) it = tables.emplace(target, build(target)).first;
    return *it->second;
  }

  int distance(Vertex from, Vertex to) const
  {
    if (!graph->passable(from))
      throw std::invalid_argument("distance query on blocked vertex");
    return table_for(to).d[from];
  }

  // start -> order[0] -> ... -> order[k-1] -> goal; UNREACHABLE if any leg is
  int tour_cost(Vertex start, std::span<const Vertex> order, Vertex goal) const
  {
    int total = 0;
    Vertex at = start;
    for (const Vertex v : order) {
      const int leg = distance(at, v);
      if (leg == UNREACHABLE) return UNREACHABLE;
      total += leg;
      at = v;
    }
    const int leg = distance(at, goal);
    if (leg == UNREACHABLE) return UNREACHABLE;
    return total + leg;
  }

 private:
  std::unique_ptr<DistTable> build(Vertex target) const
  {
    auto t = std::make_unique<DistTable>();
    t->target = target;
    t->d.assign(graph->size(), UNREACHABLE);
    t->d[target] = 0;
    std::deque<Vertex> queue{target};
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      for (int k = 0; k < graph->degree(v); ++k) {
        const Vertex u = graph->neighbors(v)[k];
        if (t->d[u] == UNREACHABLE) {
          t->d[u] = t->d[v] + 1;
          queue.push_back(u);
        }
      }
    }
    return t;
  }

  const GridGraph* graph;
  mutable std::mutex mu;
  mutable std::unordered_map<Vertex, std::unique_ptr<DistTable>> tables;
};

}  // namespace ctspll
