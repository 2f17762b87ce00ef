/*
 * Extended-PIBT: one-timestep configuration stepping under priority
 * inheritance with backtracking, steering each agent to its next unvisited
 * task vertex and then its goal
 */
#pragma once
#include <cmath>
#include <optional>

#include "deadline.hpp"
#include "dist.hpp"
#include "plan.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "sequencing.hpp"

namespace ctspll {

using Configuration = std::vector<Vertex>;  // one vertex per agent

struct AgentProgress {
  int seq_cursor = 0;   // next unvisited entry of the agent's order
  int elapsed = 0;      // steps since the agent last had all targets done
  double priority = 0;  // elapsed + normalized remaining tour cost
  bool goal_event_emitted = false;
};

struct Event {
  int time;
  int agent;
  Vertex vertex;
  bool is_goal;  // false: task completion, true: first settled goal arrival
};

struct StepOutcome {
  Configuration next;
  int moved_count = 0;
  std::vector<Event> completions;
};

struct XpibtContext {
  const Scenario* scen;
  const GridGraph* graph;
  const DistCache* dist;
  const JointSequence* seq;

  Vertex goal(int j) const { return scen->agents[j].goal; }
  const std::vector<Vertex>& order(int j) const
  {
    return seq->per_agent[j].order;
  }
  Vertex target(int j, int cursor) const
  {
    const auto& o = order(j);
    return cursor < static_cast<int>(o.size()) ? o[cursor] : goal(j);
  }
  bool all_targets_done(int j, int cursor, Vertex pos) const
  {
    return cursor >= static_cast<int>(order(j).size()) && pos == goal(j);
  }
};

// remaining tour cost from the current position, normalized into [0,1),
// plus the elapsed counter; larger means planned earlier
inline void update_priorities(const XpibtContext& ctx, const Configuration& pos,
                              std::vector<AgentProgress>& prog)
{
  const int n = static_cast<int>(pos.size());
  std::vector<int> remaining(n);
  int max_remaining = 0;
  for (int j = 0; j < n; ++j) {
    const auto& order = ctx.order(j);
    const std::span<const Vertex> rest(order.data() + prog[j].seq_cursor,
                                       order.size() - prog[j].seq_cursor);
    remaining[j] = ctx.dist->tour_cost(pos[j], rest, ctx.goal(j));
    max_remaining = std::max(max_remaining, remaining[j]);
  }
  for (int j = 0; j < n; ++j)
    prog[j].priority =
        prog[j].elapsed + remaining[j] / (1.0 + max_remaining);
}

namespace detail {

struct StepWorkspace {
  std::vector<Vertex> occupant_now;  // vertex -> agent in q_from, or -1
  std::vector<int> taken_by;         // vertex -> agent holding it in q_to
  Configuration q_to;

  void reset(const GridGraph& g, const Configuration& q_from)
  {
    occupant_now.assign(g.size(), -1);
    taken_by.assign(g.size(), -1);
    q_to.assign(q_from.size(), NO_VERTEX);
    for (size_t j = 0; j < q_from.size(); ++j)
      occupant_now[q_from[j]] = static_cast<int>(j);
  }

  void claim(int agent, Vertex v)
  {
    if (q_to[agent] != NO_VERTEX && taken_by[q_to[agent]] == agent)
      taken_by[q_to[agent]] = -1;
    q_to[agent] = v;
    taken_by[v] = agent;
  }
};

// candidate vertices (neighbors plus stay) in ascending distance to the
// agent's current target; equal-distance groups are shuffled
inline void sorted_candidates(const XpibtContext& ctx, Vertex from,
                              Vertex target, Rng& rng,
                              std::vector<std::pair<int, Vertex>>& cand)
{
  cand.clear();
  const auto& table = ctx.dist->table_for(target);
  auto key = [&](Vertex v) {
    const int d = table.d[v];
    return d == UNREACHABLE ? INT32_MAX : d;
  };
  cand.push_back({key(from), from});
  for (int k = 0; k < ctx.graph->degree(from); ++k) {
    const Vertex u = ctx.graph->neighbors(from)[k];
    cand.push_back({key(u), u});
  }
  std::sort(cand.begin(), cand.end());
  for (size_t i = 0; i < cand.size();) {
    size_t j = i + 1;
    while (j < cand.size() && cand[j].first == cand[i].first) ++j;
    if (j - i > 1) rng.shuffle(cand.begin() + i, cand.begin() + j);
    i = j;
  }
}

// priority inheritance with backtracking; returns true if agent i secured a
// vertex other than by failing back to its own cell
inline bool plan_agent(const XpibtContext& ctx, const Configuration& q_from,
                       const std::vector<AgentProgress>& prog, StepWorkspace& ws,
                       Rng& rng, int i)
{
  std::vector<std::pair<int, Vertex>> cand;
  sorted_candidates(ctx, q_from[i], ctx.target(i, prog[i].seq_cursor), rng,
                    cand);
  for (const auto& [d, v] : cand) {
    if (ws.taken_by[v] != -1) continue;  // vertex conflict
    const int back = ws.taken_by[q_from[i]];
    if (back != -1 && q_from[back] == v) continue;  // swap conflict
    ws.claim(i, v);
    const int occupant = ws.occupant_now[v];
    if (occupant != -1 && occupant != i && ws.q_to[occupant] == NO_VERTEX) {
      if (!plan_agent(ctx, q_from, prog, ws, rng, occupant)) continue;
    }
    return true;
  }
  ws.claim(i, q_from[i]);
  return false;
}

}  // namespace detail

// one Extended-PIBT step; advances cursors and emits completion events for
// the resulting configuration, stamped with time_next
inline StepOutcome step(const XpibtContext& ctx, const Configuration& q_from,
                        std::vector<AgentProgress>& prog, Rng& rng,
                        int time_next)
{
  const int n = static_cast<int>(q_from.size());
  thread_local detail::StepWorkspace ws;
  ws.reset(*ctx.graph, q_from);

  std::vector<int> agents(n);
  for (int j = 0; j < n; ++j) agents[j] = j;
  std::sort(agents.begin(), agents.end(), [&](int a, int b) {
    if (prog[a].priority != prog[b].priority)
      return prog[a].priority > prog[b].priority;
    return a < b;
  });
  for (const int j : agents)
    if (ws.q_to[j] == NO_VERTEX) detail::plan_agent(ctx, q_from, prog, ws, rng, j);

  StepOutcome out;
  out.next = ws.q_to;
  for (int j = 0; j < n; ++j) {
    if (out.next[j] != q_from[j]) ++out.moved_count;
    const auto& order = ctx.order(j);
    while (prog[j].seq_cursor < static_cast<int>(order.size()) &&
           order[prog[j].seq_cursor] == out.next[j]) {
      out.completions.push_back({time_next, j, out.next[j], false});
      ++prog[j].seq_cursor;
    }
    if (ctx.all_targets_done(j, prog[j].seq_cursor, out.next[j]) &&
        !prog[j].goal_event_emitted) {
      out.completions.push_back({time_next, j, out.next[j], true});
      prog[j].goal_event_emitted = true;
    }
  }
  return out;
}

struct StagnationBudget {
  int window = 0;           // steps without a completion event before failing
  long long step_cap = 0;   // absolute step bound per episode run

  static StagnationBudget standard(const GridGraph& g, const JointSequence& seq)
  {
    StagnationBudget b;
    b.window = 4 * (g.width() + g.height());
    int lb_makespan = 0;
    for (const auto& a : seq.per_agent)
      lb_makespan = std::max(lb_makespan, a.cost);
    b.step_cap = 20LL * (lb_makespan + g.size());
    return b;
  }
};

struct Episode {
  enum class Status { running, feasible, stagnated, deadline };
  std::vector<Path> paths;
  std::vector<AgentProgress> prog;
  std::vector<Event> events;
  Status status = Status::running;

  int time() const { return static_cast<int>(paths[0].size()) - 1; }
  Configuration config_at(int t) const
  {
    Configuration q(paths.size());
    for (size_t j = 0; j < paths.size(); ++j) q[j] = paths[j][t];
    return q;
  }
  Configuration last_config() const { return config_at(time()); }
};

// fresh episode at t=0, with initial-configuration completions applied
// (a task at an agent's start counts as visited at t=0)
inline Episode make_episode(const XpibtContext& ctx)
{
  Episode e;
  const int n = ctx.scen->num_agents();
  e.paths.resize(n);
  e.prog.assign(n, {});
  for (int j = 0; j < n; ++j) {
    const Vertex start = ctx.scen->agents[j].start;
    e.paths[j].push_back(start);
    const auto& order = ctx.order(j);
    while (e.prog[j].seq_cursor < static_cast<int>(order.size()) &&
           order[e.prog[j].seq_cursor] == start) {
      e.events.push_back({0, j, start, false});
      ++e.prog[j].seq_cursor;
    }
    if (ctx.all_targets_done(j, e.prog[j].seq_cursor, start)) {
      e.events.push_back({0, j, start, true});
      e.prog[j].goal_event_emitted = true;
    }
  }
  return e;
}

// steps until every agent has finished its tasks and sits on its goal, or
// stagnation (no completion event for `window` steps, or the step cap) is
// declared; resumable after lock release
inline Episode::Status run_episode(const XpibtContext& ctx, Episode& episode,
                                   Rng& rng, const StagnationBudget& budget,
                                   const Deadline& deadline)
{
  const int n = ctx.scen->num_agents();
  int steps_since_event = 0;
  long long steps = 0;
  episode.status = Episode::Status::running;
  while (true) {
    bool all_done = true;
    const int t = episode.time();
    for (int j = 0; j < n && all_done; ++j)
      all_done = ctx.all_targets_done(j, episode.prog[j].seq_cursor,
                                      episode.paths[j][t]);
    if (all_done) {
      episode.status = Episode::Status::feasible;
      break;
    }
    if (steps_since_event >= budget.window || steps >= budget.step_cap) {
      episode.status = Episode::Status::stagnated;
      break;
    }
    if (deadline.expired()) {
      episode.status = Episode::Status::deadline;
      break;
    }
    const Configuration q_from = episode.config_at(t);
    update_priorities(ctx, q_from, episode.prog);
    StepOutcome outcome = step(ctx, q_from, episode.prog, rng, t + 1);
    for (int j = 0; j < n; ++j) episode.paths[j].push_back(outcome.next[j]);
    for (int j = 0; j < n; ++j) {
      if (ctx.all_targets_done(j, episode.prog[j].seq_cursor, outcome.next[j]))
        episode.prog[j].elapsed = 0;
      else
        ++episode.prog[j].elapsed;
    }
    ++steps;
    if (outcome.completions.empty()) {
      ++steps_since_event;
    } else {
      steps_since_event = 0;
      for (auto& ev : outcome.completions) episode.events.push_back(ev);
    }
  }
  return episode.status;
}

// feasible episode -> padded joint plan with completion times
inline JointPlan episode_to_plan(const Episode& episode, const Scenario& s)
{
  JointPlan plan;
  plan.paths = episode.paths;
  plan.completion_time = completion_times(plan.paths, s);
  plan.feasible = episode.status == Episode::Status::feasible;
  return plan;
}

}  // namespace ctspll
