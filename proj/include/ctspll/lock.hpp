/*
 * lock detection and release: identify stagnated agents from an infeasible
 * episode, localize the lock time, solve a local MAPF instance over the lock
 * agents with the complete solver, and splice the recovery into the prefix
 */
#pragma once
#include <stdexcept>

#include "lacam.hpp"
#include "xpibt.hpp"

namespace ctspll {

struct LockReport {
  std::vector<int> lock_agents;
  int t_hat = 0;
  int splice_time = 0;
  Configuration local_start;                      // lock agents at splice time
  std::vector<std::pair<Vertex, int>> frozen;     // (vertex, agent) obstacles
};

// lock agents: every unfinished agent, plus finished agents parked on some
// unfinished agent's shortest-path tree toward its current target
inline std::vector<int> detect_lock(const Episode& episode,
                                    const XpibtContext& ctx)
{
  if (episode.status == Episode::Status::feasible)
    throw std::logic_error("lock detection on a feasible episode");
  const int n = ctx.scen->num_agents();
  const int t_end = episode.time();
  std::vector<int> lock;
  std::vector<int> unfinished;
  for (int j = 0; j < n; ++j)
    if (!ctx.all_targets_done(j, episode.prog[j].seq_cursor,
                              episode.paths[j][t_end]))
      unfinished.push_back(j);
  for (int j = 0; j < n; ++j) {
    const Vertex pos = episode.paths[j][t_end];
    if (!ctx.all_targets_done(j, episode.prog[j].seq_cursor, pos)) {
      lock.push_back(j);
      continue;
    }
    for (const int u : unfinished) {
      const Vertex u_pos = episode.paths[u][t_end];
      const Vertex u_target = ctx.target(u, episode.prog[u].seq_cursor);
      if (pos == u_pos) continue;
      const int via = ctx.dist->distance(u_pos, pos);
      const int rest = ctx.dist->distance(pos, u_target);
      const int direct = ctx.dist->distance(u_pos, u_target);
      if (via != UNREACHABLE && rest != UNREACHABLE &&
          via + rest == direct) {
        lock.push_back(j);
        break;
      }
    }
  }
  return lock;
}

// t_hat: minimum over lock agents of each one's most recent task-completion
// timestep (0 if it never completed a task)
inline int find_lock_time(const Episode& episode,
                          const std::vector<int>& lock_agents)
{
  int t_hat = INT32_MAX;
  for (const int j : lock_agents) {
    int last = 0;
    for (const auto& ev : episode.events)
      if (ev.agent == j && !ev.is_goal) last = std::max(last, ev.time);
    t_hat = std::min(t_hat, last);
  }
  return lock_agents.empty() ? 0 : t_hat;
}

// a uniformly sampled non-identity permutation of the lock agents' positions
inline Configuration build_targets(const Configuration& local_start, Rng& rng)
{
  const int n = static_cast<int>(local_start.size());
  std::vector<int> perm(n);
  bool identity = true;
  do {
    for (int i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    identity = true;
    for (int i = 0; i < n; ++i) identity = identity && perm[i] == i;
  } while (identity);
  Configuration targets(n);
  for (int i = 0; i < n; ++i) targets[i] = local_start[perm[i]];
  return targets;
}

struct ReleasePolicy {
  int permutation_attempts = 10;
  double lacam_budget_s = 2.0;
};

struct LockEvent {
  int t_hat = 0;
  int splice = 0;
  int lock_size = 0;
  std::vector<int> lock_agents;
  int attempts = 0;
  bool used_fallback = false;
  bool recovered = false;
  bool anchored_at_stall = false;
};

enum class ReleaseStatus { resumed, unrecoverable, deadline };

namespace detail {

// rebuild cursors, events and flags of an episode whose paths were truncated
// and extended; everything is re-derived by scanning the paths
inline void rebuild_progress(const XpibtContext& ctx, Episode& episode)
{
  const int n = ctx.scen->num_agents();
  const int horizon = episode.time();
  episode.events.clear();
  for (int j = 0; j < n; ++j) {
    episode.prog[j] = {};
    const auto& order = ctx.order(j);
    for (int t = 0; t <= horizon; ++t) {
      const Vertex pos = episode.paths[j][t];
      while (episode.prog[j].seq_cursor < static_cast<int>(order.size()) &&
             order[episode.prog[j].seq_cursor] == pos) {
        episode.events.push_back({t, j, pos, false});
        ++episode.prog[j].seq_cursor;
      }
      if (!episode.prog[j].goal_event_emitted &&
          ctx.all_targets_done(j, episode.prog[j].seq_cursor, pos)) {
        episode.events.push_back({t, j, pos, true});
        episode.prog[j].goal_event_emitted = true;
      }
    }
  }
}

}  // namespace detail

// computes the lock set and splice point, solves the local instance against
// permuted targets (next-task targets as a final fallback), splices the
// local plan into the prefix, and leaves the episode ready to resume; with
// anchor_at_stall the release acts on the stalled configuration itself
// instead of rewinding to the lock time
inline ReleaseStatus release(const XpibtContext& ctx, Episode& episode,
                             Rng& rng, const ReleasePolicy& policy,
                             const Deadline& deadline, LockEvent* log = nullptr,
                             bool anchor_at_stall = false)
{
  const int n = ctx.scen->num_agents();
  const int t_end = episode.time();
  const std::vector<int> lock = detect_lock(episode, ctx);
  const int t_hat = find_lock_time(episode, lock);

  std::vector<uint8_t> in_lock(n, 0);
  for (const int j : lock) in_lock[j] = 1;

  // non-lock agents must be genuinely static: splice after the last of them
  // has permanently settled
  int splice = anchor_at_stall ? t_end : t_hat;
  for (int j = 0; j < n; ++j) {
    if (in_lock[j]) continue;
    int settle = 0;
    for (int t = t_end; t >= 0; --t)
      if (episode.paths[j][t] != ctx.goal(j)) {
        settle = t + 1;
        break;
      }
    splice = std::max(splice, settle);
  }

  LockReport report;
  report.lock_agents = lock;
  report.t_hat = t_hat;
  report.splice_time = splice;
  for (const int j : lock) report.local_start.push_back(episode.paths[j][splice]);
  if (log) {
    log->t_hat = t_hat;
    log->splice = splice;
    log->lock_size = static_cast<int>(lock.size());
    log->lock_agents = lock;
    log->recovered = false;
    log->anchored_at_stall = anchor_at_stall;
  }

  GridMap local_map = ctx.graph->map;
  for (int j = 0; j < n; ++j)
    if (!in_lock[j]) {
      local_map.blocked[ctx.goal(j)] = 1;
      report.frozen.push_back({ctx.goal(j), j});
    }
  LocalInstance inst{GridGraph(std::move(local_map)), report.local_start, {},
                     lock};

  // cursor state as of the truncated prefix, for next-task targets
  std::vector<int> cursor_at_splice(lock.size(), 0);
  for (size_t i = 0; i < lock.size(); ++i) {
    int c = 0;
    for (const auto& ev : episode.events)
      if (ev.agent == lock[i] && !ev.is_goal && ev.time <= splice) ++c;
    cursor_at_splice[i] = c;
  }
  auto next_task_targets = [&]() -> std::optional<Configuration> {
    Configuration targets;
    for (size_t i = 0; i < lock.size(); ++i)
      targets.push_back(ctx.target(lock[i], cursor_at_splice[i]));
    for (size_t a = 0; a < targets.size(); ++a)
      for (size_t b = a + 1; b < targets.size(); ++b)
        if (targets[a] == targets[b]) return std::nullopt;
    for (const Vertex v : targets)
      if (!inst.graph.passable(v)) return std::nullopt;
    return targets;
  };

  LacamResult local;
  bool solved = false;
  const bool single = lock.size() < 2;
  const int total_attempts = single ? 1 : policy.permutation_attempts + 1;
  for (int a = 0; a < total_attempts && !solved; ++a) {
    if (deadline.expired()) return ReleaseStatus::deadline;
    const bool fallback = single || a == policy.permutation_attempts;
    if (fallback) {
      auto targets = next_task_targets();
      if (!targets) break;
      inst.goals = *targets;
    } else {
      inst.goals = build_targets(report.local_start, rng);
    }
    if (log) {
      ++log->attempts;
      log->used_fallback = fallback;
    }
    const double budget = std::min(policy.lacam_budget_s,
                                   std::max(0.01, deadline.remaining_s()));
    local = lacam_solve(inst, budget, rng);
    solved = local.status == LacamStatus::solved;
  }
  if (!solved) return ReleaseStatus::unrecoverable;

  // splice: truncate everyone at the splice point, lock agents follow the
  // local plan, the rest pad in place
  const int local_len = static_cast<int>(local.configs.size()) - 1;
  for (int j = 0; j < n; ++j) episode.paths[j].resize(splice + 1);
  for (int t = 1; t <= local_len; ++t) {
    for (int j = 0; j < n; ++j) episode.paths[j].push_back(episode.paths[j].back());
    for (size_t i = 0; i < lock.size(); ++i)
      episode.paths[lock[i]].back() = local.configs[t][i];
  }
  detail::rebuild_progress(ctx, episode);
  episode.status = Episode::Status::running;
  if (log) log->recovered = true;
  return ReleaseStatus::resumed;
}

}  // namespace ctspll
