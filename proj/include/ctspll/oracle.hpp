/*
 * joint-state search oracles for desk-scale verification: an exact
 * minimum-flowtime solver over (positions x task bitmasks x parked flags),
 * and a plain configuration-reachability search for local instances
 */
#pragma once
#include <cstring>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "dist.hpp"
#include "lacam.hpp"
#include "plan.hpp"

namespace ctspll {

struct OracleLimits {
  size_t max_states = 5'000'000;
};

enum class OracleStatus { solved, unsolvable, limit_exceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::limit_exceeded;
  JointPlan plan;
  long long optimal_flowtime = -1;
  long long expanded = 0;
};

namespace oracle_detail {

constexpr int kMaxAgents = 5;
constexpr int kMaxTasksPerAgent = 8;

struct Key {
  uint64_t a = 0, b = 0;
  bool operator==(const Key&) const = default;
};
struct KeyHash {
  size_t operator()(const Key& k) const
  {
    uint64_t h = k.a * 0x9e3779b97f4a7c15ULL;
    h ^= k.b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<size_t>(h);
  }
};

struct State {
  std::array<uint16_t, kMaxAgents> pos{};
  std::array<uint8_t, kMaxAgents> mask{};
  uint8_t committed = 0;
  int parent = -1;

  Key key(int n) const
  {
    Key k;
    int bit = 0;
    auto put = [&](uint64_t v, int bits) {
      for (int i = 0; i < bits; ++i, ++bit) {
        const uint64_t b = (v >> i) & 1;
        if (bit < 64)
          k.a |= b << bit;
        else
          k.b |= b << (bit - 64);
      }
    };
    for (int j = 0; j < n; ++j) {
      put(pos[j], 16);
      put(mask[j], kMaxTasksPerAgent);
      put((committed >> j) & 1, 1);
    }
    return k;
  }
};

// enumerates all conflict-free joint moves; for each, visit(next_pos)
template <typename F>
inline void joint_moves(const GridGraph& g,
                        const std::array<uint16_t, kMaxAgents>& from, int n,
                        uint8_t committed, F&& visit)
{
  std::array<uint16_t, kMaxAgents> to{};
  std::function<void(int)> rec = [&](int j) {
    if (j == n) {
      visit(to);
      return;
    }
    auto ok = [&](Vertex v) {
      for (int k = 0; k < j; ++k) {
        if (to[k] == v) return false;                          // vertex
        if (to[k] == from[j] && from[k] == v) return false;    // swap
      }
      return true;
    };
    if ((committed >> j) & 1) {
      if (ok(from[j])) {
        to[j] = from[j];
        rec(j + 1);
      }
      return;
    }
    if (ok(from[j])) {
      to[j] = from[j];
      rec(j + 1);
    }
    for (int k = 0; k < g.degree(from[j]); ++k) {
      const Vertex u = g.neighbors(from[j])[k];
      if (ok(u)) {
        to[j] = static_cast<uint16_t>(u);
        rec(j + 1);
      }
    }
  };
  rec(0);
}

}  // namespace oracle_detail

// exact minimum-flowtime CTS plan via cost-ordered joint-state search; task
// visits may happen in any order, completion requires permanent arrival
inline OracleResult oracle_solve(const Scenario& s, const GridGraph& g,
                                 const OracleLimits& limits = {})
{
  using namespace oracle_detail;
  OracleResult result;
  const int n = s.num_agents();
  if (n > kMaxAgents || g.size() > 65535) return result;  // refuses

  std::vector<std::vector<Vertex>> agent_tasks(n);  // assigned task vertices
  for (int j = 0; j < n; ++j) {
    for (const int t : s.tasks_of(j))
      agent_tasks[j].push_back(s.tasks[t].vertex);
    if (static_cast<int>(agent_tasks[j].size()) > kMaxTasksPerAgent)
      return result;
  }
  const DistCache dist(g);
  auto full_mask = [&](int j) {
    return static_cast<uint8_t>((1u << agent_tasks[j].size()) - 1);
  };
  auto h_value = [&](const State& st) {
    long long h = 0;
    for (int j = 0; j < n; ++j) {
      if ((st.committed >> j) & 1) continue;
      int hj = dist.distance(st.pos[j], s.agents[j].goal);
      for (size_t t = 0; t < agent_tasks[j].size(); ++t)
        if (!((st.mask[j] >> t) & 1))
          hj = std::max(hj, dist.distance(st.pos[j], agent_tasks[j][t]) +
                                dist.distance(agent_tasks[j][t],
                                              s.agents[j].goal));
      h += hj;
    }
    return h;
  };

  std::vector<State> states;
  std::unordered_map<Key, int, KeyHash> index;
  std::vector<long long> best_g;
  std::vector<uint8_t> closed;
  using PqEntry = std::tuple<long long, long long, int>;  // f, g, id
  std::priority_queue<PqEntry, std::vector<PqEntry>, std::greater<>> open;

  auto push_state = [&](State st, long long gcost) -> bool {
    const Key k = st.key(n);
    auto it = index.find(k);
    if (it != index.end()) {
      if (gcost >= best_g[it->second]) return true;
      best_g[it->second] = gcost;
      states[it->second].parent = st.parent;
      open.push({gcost + h_value(st), gcost, it->second});
      return true;
    }
    if (states.size() >= limits.max_states) return false;
    const int id = static_cast<int>(states.size());
    states.push_back(st);
    index.emplace(k, id);
    best_g.push_back(gcost);
    closed.push_back(0);
    open.push({gcost + h_value(st), gcost, id});
    return true;
  };

  // initial states: start positions, start-cell task visits, then every
  // subset of immediately committable agents
  {
    State init;
    for (int j = 0; j < n; ++j) {
      init.pos[j] = static_cast<uint16_t>(s.agents[j].start);
      for (size_t t = 0; t < agent_tasks[j].size(); ++t)
        if (agent_tasks[j][t] == s.agents[j].start)
          init.mask[j] |= static_cast<uint8_t>(1u << t);
    }
    std::vector<int> eligible;
    for (int j = 0; j < n; ++j)
      if (init.pos[j] == s.agents[j].goal && init.mask[j] == full_mask(j))
        eligible.push_back(j);
    for (uint32_t sub = 0; sub < (1u << eligible.size()); ++sub) {
      State st = init;
      for (size_t e = 0; e < eligible.size(); ++e)
        if ((sub >> e) & 1) st.committed |= 1u << eligible[e];
      if (!push_state(st, 0)) return result;
    }
  }

  const uint8_t all_committed = static_cast<uint8_t>((1u << n) - 1);
  int goal_id = -1;
  while (!open.empty()) {
    auto [f, gcost, id] = open.top();
    open.pop();
    if (closed[id] || gcost > best_g[id]) continue;
    closed[id] = 1;
    ++result.expanded;
    const State cur = states[id];
    if (cur.committed == all_committed) {
      goal_id = id;
      result.optimal_flowtime = gcost;
      break;
    }
    int uncommitted = 0;
    for (int j = 0; j < n; ++j) uncommitted += !((cur.committed >> j) & 1);
    const long long step_cost = uncommitted;
    bool ok = true;
    joint_moves(g, cur.pos, n, cur.committed, [&](const auto& to) {
      if (!ok) return;
      State next;
      next.pos = to;
      next.mask = cur.mask;
      next.committed = cur.committed;
      next.parent = id;
      for (int j = 0; j < n; ++j)
        for (size_t t = 0; t < agent_tasks[j].size(); ++t)
          if (agent_tasks[j][t] == to[j])
            next.mask[j] |= static_cast<uint8_t>(1u << t);
      std::vector<int> eligible;
      for (int j = 0; j < n; ++j)
        if (!((next.committed >> j) & 1) && next.pos[j] == s.agents[j].goal &&
            next.mask[j] == full_mask(j))
          eligible.push_back(j);
      for (uint32_t sub = 0; sub < (1u << eligible.size()); ++sub) {
        State st = next;
        for (size_t e = 0; e < eligible.size(); ++e)
          if ((sub >> e) & 1) st.committed |= 1u << eligible[e];
        if (!push_state(st, gcost + step_cost)) {
          ok = false;
          return;
        }
      }
    });
    if (!ok) return result;  // state bound exceeded
  }

  if (goal_id < 0) {
    result.status = OracleStatus::unsolvable;
    return result;
  }
  std::vector<int> chain;
  for (int id = goal_id; id >= 0; id = states[id].parent) chain.push_back(id);
  std::reverse(chain.begin(), chain.end());
  result.plan.paths.assign(n, {});
  for (const int id : chain)
    for (int j = 0; j < n; ++j) result.plan.paths[j].push_back(states[id].pos[j]);
  result.plan.completion_time = completion_times(result.plan.paths, s);
  result.plan.feasible = true;
  result.status = OracleStatus::solved;
  return result;
}

struct ReachResult {
  OracleStatus status = OracleStatus::limit_exceeded;
  std::vector<Configuration> configs;
  long long expanded = 0;
};

// breadth-first reachability from starts to the exact goal configuration
inline ReachResult oracle_reachable(const LocalInstance& inst,
                                    const OracleLimits& limits = {})
{
  using namespace oracle_detail;
  ReachResult result;
  const int n = static_cast<int>(inst.starts.size());
  if (n > kMaxAgents || inst.graph.size() > 65535) return result;
  for (const Vertex v : inst.goals)
    if (!inst.graph.passable(v)) {
      result.status = OracleStatus::unsolvable;
      return result;
    }

  std::vector<State> states;
  std::unordered_map<Key, int, KeyHash> index;
  std::deque<int> queue;
  auto push_state = [&](State st) -> int {
    const Key k = st.key(n);
    auto it = index.find(k);
    if (it != index.end()) return -1;
    if (states.size() >= limits.max_states) return -2;
    const int id = static_cast<int>(states.size());
    states.push_back(st);
    index.emplace(k, id);
    queue.push_back(id);
    return id;
  };

  State init;
  for (int j = 0; j < n; ++j)
    init.pos[j] = static_cast<uint16_t>(inst.starts[j]);
  State goal;
  for (int j = 0; j < n; ++j)
    goal.pos[j] = static_cast<uint16_t>(inst.goals[j]);
  push_state(init);

  int goal_id = init.pos == goal.pos ? 0 : -1;
  while (!queue.empty() && goal_id < 0) {
    const int id = queue.front();
    queue.pop_front();
    ++result.expanded;
    const State cur = states[id];
    bool overflow = false;
    joint_moves(inst.graph, cur.pos, n, 0, [&](const auto& to) {
      if (overflow || goal_id >= 0) return;
      State next;
      next.pos = to;
      next.parent = id;
      const int nid = push_state(next);
      if (nid == -2) overflow = true;
      if (nid >= 0 && to == goal.pos) goal_id = nid;
    });
    if (overflow) return result;
  }
  if (goal_id < 0) {
    result.status = OracleStatus::unsolvable;
    return result;
  }
  std::vector<int> chain;
  for (int id = goal_id; id >= 0; id = states[id].parent) chain.push_back(id);
  std::reverse(chain.begin(), chain.end());
  for (const int id : chain) {
    Configuration q(n);
    for (int j = 0; j < n; ++j) q[j] = states[id].pos[j];
    result.configs.push_back(std::move(q));
  }
  result.status = OracleStatus::solved;
  return result;
}

}  // namespace ctspll
