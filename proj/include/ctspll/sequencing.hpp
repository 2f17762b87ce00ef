/*
 * k-best joint task sequencing
 *
 * Per-agent orderings are exact (exhaustive) up to 8 tasks, heuristic
 * (cheapest insertion + 2-opt multistart) above. Joint sequences come from a
 * best-first search over per-agent rank vectors, the usual k-smallest-sums
 * construction, so the k-th joint sequence is produced lazily without
 * materializing the product. No randomness anywhere: the full ranking is a
 * deterministic function of the scenario.
 */
#pragma once
#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <span>

#include "dist.hpp"
#include "scenario.hpp"

namespace ctspll {

struct AgentSequence {
  int agent = 0;
  std::vector<Vertex> order;  // task vertices in visiting order
  int cost = 0;               // tour_cost(start, order, goal)
  bool operator==(const AgentSequence&) const = default;
};

struct JointSequence {
  std::vector<AgentSequence> per_agent;
  long long total_cost = 0;
  long long rank = 0;  // 1-based position in the enumeration
};

namespace detail {

constexpr int kExactOrderingTaskLimit = 8;

inline bool lex_less(const std::vector<Vertex>& a, const std::vector<Vertex>& b)
{
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// one 2-opt pass to a local optimum, endpoints fixed at start/goal
inline void two_opt(std::vector<Vertex>& order, Vertex start, Vertex goal,
                    const DistCache& dist)
{
  const int n = static_cast<int>(order.size());
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Vertex before = i == 0 ? start : order[i - 1];
        const Vertex after = j == n - 1 ? goal : order[j + 1];
        const int old_cost = dist.distance(before, order[i]) +
                             dist.distance(order[j], after);
        const int new_cost = dist.distance(before, order[j]) +
                             dist.distance(order[i], after);
        if (new_cost < old_cost) {
          std::reverse(order.begin() + i, order.begin() + j + 1);
          improved = true;
        }
      }
    }
  }
}

// ranked list of distinct orderings for one agent, cheapest first, ties
// broken lexicographically by the vertex sequence
inline std::vector<AgentSequence> ranked_orders(const Scenario& s,
                                                const GridGraph&,
                                                const DistCache& dist,
                                                int agent)
{
  const Vertex start = s.agents[agent].start;
  const Vertex goal = s.agents[agent].goal;
  std::vector<Vertex> verts;
  for (const int t : s.tasks_of(agent)) verts.push_back(s.tasks[t].vertex);

  std::vector<AgentSequence> out;
  auto push = [&](std::vector<Vertex> order) {
    const int cost = dist.tour_cost(start, order, goal);
    out.push_back({agent, std::move(order), cost});
  };

  if (static_cast<int>(verts.size()) <= kExactOrderingTaskLimit) {
    std::sort(verts.begin(), verts.end());
    do {
      push(verts);
    } while (std::next_permutation(verts.begin(), verts.end()));
  } else {
    // cheapest-insertion construction seeded from each task, then 2-opt
    for (size_t first = 0; first < verts.size(); ++first) {
      std::vector<Vertex> order{verts[first]};
      std::vector<Vertex> remaining = verts;
      remaining.erase(remaining.begin() + first);
      while (!remaining.empty()) {
        int best_task = 0, best_pos = 0, best_delta = INT32_MAX;
        for (size_t t = 0; t < remaining.size(); ++t) {
          for (size_t p = 0; p <= order.size(); ++p) {
            const Vertex before = p == 0 ? start : order[p - 1];
            const Vertex after = p == order.size() ? goal : order[p];
            const int delta = dist.distance(before, remaining[t]) +
                              dist.distance(remaining[t], after) -
                              dist.distance(before, after);
            if (delta < best_delta) {
              best_delta = delta;
              best_task = static_cast<int>(t);
              best_pos = static_cast<int>(p);
            }
          }
        }
        order.insert(order.begin() + best_pos, remaining[best_task]);
        remaining.erase(remaining.begin() + best_task);
      }
      two_opt(order, start, goal, dist);
      push(std::move(order));
    }
  }

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return lex_less(a.order, b.order);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) {
                          return a.order == b.order;
                        }),
            out.end());
  return out;
}

}  // namespace detail

// the `limit` cheapest orderings of one agent's task set
inline std::vector<AgentSequence> agent_orders(const Scenario& s,
                                               const GridGraph& g,
                                               const DistCache& dist, int agent,
                                               int limit)
{
  auto all = detail::ranked_orders(s, g, dist, agent);
  if (static_cast<int>(all.size()) > limit) all.resize(limit);
  return all;
}

// stateful enumerator over the joint ranking; one instance per solver run
struct KBestSequencer {
  KBestSequencer(const Scenario& s, const GridGraph& g, const DistCache& dist)
  {
    const int n = s.num_agents();
    lists.reserve(n);
    for (int j = 0; j < n; ++j)
      lists.push_back(detail::ranked_orders(s, g, dist, j));
    std::vector<int> first(n, 0);
    long long total = 0;
    for (int j = 0; j < n; ++j) total += lists[j][0].cost;
    open.push({total, first});
    visited.insert(first);
  }

  std::optional<JointSequence> next()
  {
    if (open.empty()) return std::nullopt;
    auto [total, ranks] = open.top();
    open.pop();
    for (size_t j = 0; j < lists.size(); ++j) {
      if (ranks[j] + 1 >= static_cast<int>(lists[j].size())) continue;
      auto succ = ranks;
      ++succ[j];
      if (visited.insert(succ).second) {
        const long long succ_total =
            total - lists[j][ranks[j]].cost + lists[j][ranks[j] + 1].cost;
        open.push({succ_total, std::move(succ)});
      }
    }
    JointSequence seq;
    seq.total_cost = total;
    seq.rank = ++emitted;
    for (size_t j = 0; j < lists.size(); ++j)
      seq.per_agent.push_back(lists[j][ranks[j]]);
    return seq;
  }

 private:
  struct Entry {
    long long total;
    std::vector<int> ranks;
    bool operator>(const Entry& o) const
    {
      if (total != o.total) return total > o.total;
      return o.ranks < ranks;  // lexicographic rank vector breaks ties
    }
  };

  std::vector<std::vector<AgentSequence>> lists;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::set<std::vector<int>> visited;
  long long emitted = 0;
};

// the k-th cheapest joint sequence (1-based), or nullopt when exhausted
inline std::optional<JointSequence> kth_joint_sequence(const Scenario& s,
                                                       const GridGraph& g,
                                                       const DistCache& dist,
                                                       long long k)
{
  KBestSequencer seq(s, g, dist);
  std::optional<JointSequence> out;
  for (long long i = 0; i < k; ++i) {
    out = seq.next();
    if (!out) return std::nullopt;
  }
  return out;
}

}  // namespace ctspll
