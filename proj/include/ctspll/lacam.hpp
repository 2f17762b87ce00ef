/*
 * complete MAPF solver for local release instances: depth-first search over
 * configurations with lazily expanded per-node constraint trees and a
 * constrained PIBT configuration generator
 */
#pragma once
#include <deque>
#include <functional>
#include <memory>
#include <unordered_map>

#include "deadline.hpp"
#include "dist.hpp"
#include "rng.hpp"
#include "xpibt.hpp"

namespace ctspll {

struct LocalInstance {
  GridGraph graph;            // frozen agents' cells already blocked
  Configuration starts;
  Configuration goals;
  std::vector<int> agent_ids; // original agent indices, for bookkeeping
};

enum class LacamStatus { solved, unsolvable, timeout };

struct LacamResult {
  LacamStatus status = LacamStatus::timeout;
  std::vector<Configuration> configs;  // starts .. goals when solved
  long long generated = 0;
};

namespace detail {

struct ConfigHash {
  size_t operator()(const Configuration& q) const
  {
    uint64_t h = 1469598103934665603ULL;
    for (const Vertex v : q) {
      h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
      h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h);
  }
};

struct LacamLowNode {
  std::vector<int> who;
  std::vector<Vertex> where;
  int depth() const { return static_cast<int>(who.size()); }
};

struct LacamHNode {
  Configuration q;
  LacamHNode* parent;
  std::vector<int> order;          // planning order, fixed per node
  std::deque<LacamLowNode> tree;   // breadth-first constraint queue
};

// constrained one-step generator: forced (who, where) pairs are honored
// exactly, everyone else follows PIBT semantics toward its local goal
inline bool constrained_step(const GridGraph& graph, const DistCache& dist,
                             const Configuration& q_from,
                             const Configuration& goals,
                             const std::vector<int>& order,
                             const LacamLowNode& low, Rng& rng,
                             Configuration& q_to)
{
  const int n = static_cast<int>(q_from.size());
  static thread_local std::vector<int> occupant_now, taken_by;
  occupant_now.assign(graph.size(), -1);
  taken_by.assign(graph.size(), -1);
  q_to.assign(n, NO_VERTEX);
  for (int j = 0; j < n; ++j) occupant_now[q_from[j]] = j;

  auto claim = [&](int agent, Vertex v) {
    if (q_to[agent] != NO_VERTEX && taken_by[q_to[agent]] == agent)
      taken_by[q_to[agent]] = -1;
    q_to[agent] = v;
    taken_by[v] = agent;
  };
  auto conflicted = [&](int agent, Vertex v) {
    if (taken_by[v] != -1) return true;
    const int back = taken_by[q_from[agent]];
    return back != -1 && q_from[back] == v;
  };

  auto plan = [&](auto&& self, int i) -> bool {
    std::array<std::pair<int, Vertex>, 5> cand;
    int nc = 0;
    const auto& table = dist.table_for(goals[i]);
    auto key = [&](Vertex v) {
      return table.d[v] == UNREACHABLE ? INT32_MAX : table.d[v];
    };
    cand[nc++] = {key(q_from[i]), q_from[i]};
    for (int k = 0; k < graph.degree(q_from[i]); ++k) {
      const Vertex u = graph.neighbors(q_from[i])[k];
      cand[nc++] = {key(u), u};
    }
    std::sort(cand.begin(), cand.begin() + nc);
    for (int a = 0; a < nc;) {
      int b = a + 1;
      while (b < nc && cand[b].first == cand[a].first) ++b;
      if (b - a > 1) rng.shuffle(cand.begin() + a, cand.begin() + b);
      a = b;
    }
    for (int c = 0; c < nc; ++c) {
      const Vertex v = cand[c].second;
      if (conflicted(i, v)) continue;
      claim(i, v);
      const int occ = occupant_now[v];
      if (occ != -1 && occ != i && q_to[occ] == NO_VERTEX) {
        if (!self(self, occ)) continue;
      }
      return true;
    }
    claim(i, q_from[i]);
    return false;
  };

  for (int d = 0; d < low.depth(); ++d) {
    const int i = low.who[d];
    const Vertex v = low.where[d];
    if (conflicted(i, v)) return false;
    claim(i, v);
  }
  for (int d = 0; d < low.depth(); ++d) {
    const int occ = occupant_now[low.where[d]];
    if (occ != -1 && occ != low.who[d] && q_to[occ] == NO_VERTEX) {
      if (!plan(plan, occ)) return false;  // occupant stuck on a forced cell
    }
  }
  for (const int i : order)
    if (q_to[i] == NO_VERTEX) plan(plan, i);
  // a failed deep inheritance chain can strand an agent on a forced cell;
  // such configurations are invalid and the constraint tree covers the rest
  for (int d = 0; d < low.depth(); ++d)
    if (q_to[low.who[d]] != low.where[d]) return false;
  for (int i = 0; i < n; ++i)
    if (taken_by[q_to[i]] != i) return false;
  return true;
}

}  // namespace detail

// feasibility search from starts to goals; exhausting the search space
// proves unsolvability, the time budget yields a distinct timeout outcome
inline LacamResult lacam_solve(const LocalInstance& inst, double budget_s,
                               Rng& rng)
{
  using detail::LacamHNode;
  using detail::LacamLowNode;
  LacamResult result;
  const int n = static_cast<int>(inst.starts.size());
  const Deadline deadline = Deadline::after_seconds(budget_s);
  DistCache dist(inst.graph);
  for (const Vertex g : inst.goals)
    if (!inst.graph.passable(g)) {
      result.status = LacamStatus::unsolvable;
      return result;
    }

  std::deque<std::unique_ptr<LacamHNode>> arena;
  std::unordered_map<Configuration, LacamHNode*, detail::ConfigHash> explored;
  std::vector<LacamHNode*> open;

  auto make_node = [&](Configuration q, LacamHNode* parent) {
    auto node = std::make_unique<LacamHNode>();
    node->q = std::move(q);
    node->parent = parent;
    node->order.resize(n);
    for (int j = 0; j < n; ++j) node->order[j] = j;
    std::vector<int> d(n);
    for (int j = 0; j < n; ++j) d[j] = dist.distance(node->q[j], inst.goals[j]);
    std::sort(node->order.begin(), node->order.end(), [&](int a, int b) {
      if (d[a] != d[b]) return d[a] > d[b];
      return a < b;
    });
    node->tree.push_back(LacamLowNode{});
    LacamHNode* raw = node.get();
    explored.emplace(raw->q, raw);
    arena.push_back(std::move(node));
    return raw;
  };
  auto reconstruct = [&](LacamHNode* node) {
    std::vector<Configuration> configs;
    for (LacamHNode* it = node; it != nullptr; it = it->parent)
      configs.push_back(it->q);
    std::reverse(configs.begin(), configs.end());
    return configs;
  };

  open.push_back(make_node(inst.starts, nullptr));
  if (inst.starts == inst.goals) {
    result.status = LacamStatus::solved;
    result.configs = {inst.starts};
    return result;
  }

  long long loops = 0;
  Configuration q_to;
  while (!open.empty()) {
    if ((++loops & 127) == 0 && deadline.expired()) {
      result.status = LacamStatus::timeout;
      return result;
    }
    LacamHNode* node = open.back();
    if (node->tree.empty()) {
      open.pop_back();
      continue;
    }
    LacamLowNode low = std::move(node->tree.front());
    node->tree.pop_front();
    if (low.depth() < n) {
      const int agent = node->order[low.depth()];
      std::vector<std::pair<int, Vertex>> cand;
      const auto& table = dist.table_for(inst.goals[agent]);
      auto key = [&](Vertex v) {
        return table.d[v] == UNREACHABLE ? INT32_MAX : table.d[v];
      };
      cand.push_back({key(node->q[agent]), node->q[agent]});
      for (int k = 0; k < inst.graph.degree(node->q[agent]); ++k) {
        const Vertex u = inst.graph.neighbors(node->q[agent])[k];
        cand.push_back({key(u), u});
      }
      std::sort(cand.begin(), cand.end());
      for (const auto& [d, v] : cand) {
        LacamLowNode child = low;
        child.who.push_back(agent);
        child.where.push_back(v);
        node->tree.push_back(std::move(child));
      }
    }
    if (!detail::constrained_step(inst.graph, dist, node->q, inst.goals,
                                  node->order, low, rng, q_to))
      continue;
    ++result.generated;
    const auto known = explored.find(q_to);
    if (known != explored.end()) {
      open.push_back(known->second);  // refocus the search on the revisit
      continue;
    }
    LacamHNode* child = make_node(q_to, node);
    if (child->q == inst.goals) {
      result.status = LacamStatus::solved;
      result.configs = reconstruct(child);
      return result;
    }
    open.push_back(child);
  }
  result.status = LacamStatus::unsolvable;
  return result;
}

}  // namespace ctspll
