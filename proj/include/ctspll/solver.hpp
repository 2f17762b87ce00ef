/*
 * CTS-PLL orchestrator: anytime loop over k-best joint sequences with
 * Extended-PIBT stepping, lock release on stagnation, and per-sequence LNS
 * refinement (v3)
 */
#pragma once
#include "lns.hpp"
#include "lock.hpp"
#include "sequencing.hpp"
#include "xpibt.hpp"

namespace ctspll {

enum class Variant { v1, v2, v3 };

inline const char* variant_name(Variant v)
{
  switch (v) {
    case Variant::v1: return "v1";
    case Variant::v2: return "v2";
    default: return "v3";
  }
}

struct SolverConfig {
  Variant variant = Variant::v3;
  double time_limit_s = 60.0;
  LnsBudget lns;                  // per-sequence refinement budget (v3)
  int lock_attempt_limit = 10;    // permutation retries per release
  double lacam_budget_s = 2.0;
  bool lock_release = true;
  int max_release_rounds = 50;    // release/resume rounds per sequence
  long long max_sequences = -1;   // < 0: bounded only by time/exhaustion
  uint64_t seed = 0;
};

struct SolveResult {
  std::optional<JointPlan> best;
  long long flowtime_value = -1;
  int makespan_value = -1;
  long long sequences_tried = 0;
  long long lock_events = 0;
  long long lns_iterations = 0;
  double wall_time_s = 0;
  std::vector<std::pair<double, long long>> timeline;  // (elapsed, flowtime)
  std::vector<LockEvent> lock_log;
  long long first_feasible_flowtime = -1;
  long long first_feasible_rank = -1;
  std::optional<JointPlan> first_feasible_plan;

  bool success() const { return best.has_value(); }
};

// runs one sequence to feasibility or failure, with lock release between
// stagnations when enabled
namespace detail {

enum class SequenceOutcome { feasible, failed, deadline };

inline SequenceOutcome plan_sequence(const XpibtContext& ctx,
                                     const SolverConfig& config,
                                     const Deadline& deadline, uint64_t seed,
                                     long long k, Episode& episode,
                                     SolveResult& result)
{
  Rng episode_rng(derive_seed(seed, "episode", static_cast<uint64_t>(k)));
  Rng lock_rng(derive_seed(seed, "lock", static_cast<uint64_t>(k)));
  const StagnationBudget budget =
      StagnationBudget::standard(*ctx.graph, *ctx.seq);
  const ReleasePolicy policy{config.lock_attempt_limit, config.lacam_budget_s};

  episode = make_episode(ctx);
  long long best_progress = -1;
  bool anchor_at_stall = false;
  for (int round = 0;; ++round) {
    const auto status = run_episode(ctx, episode, episode_rng, budget, deadline);
    if (status == Episode::Status::feasible) return SequenceOutcome::feasible;
    if (status == Episode::Status::deadline) return SequenceOutcome::deadline;
    if (!config.lock_release || round >= config.max_release_rounds)
      return SequenceOutcome::failed;
    // when rewind-anchored releases stop advancing task progress, act on the
    // stalled configuration itself instead of replaying the prefix
    long long progress = 0;
    for (const auto& p : episode.prog) progress += p.seq_cursor;
    anchor_at_stall = progress <= best_progress;
    best_progress = std::max(best_progress, progress);
    LockEvent event;
    const auto released = release(ctx, episode, lock_rng, policy, deadline,
                                  &event, anchor_at_stall);
    ++result.lock_events;
    result.lock_log.push_back(event);
    if (released == ReleaseStatus::deadline) return SequenceOutcome::deadline;
    if (released == ReleaseStatus::unrecoverable)
      return SequenceOutcome::failed;
  }
}

}  // namespace detail

// v1: best sequence only, lock release, no LNS, first feasible plan.
// v2: sequences k = 1, 2, ... until the first feasible plan, no LNS.
// v3: full anytime loop, LNS per sequence, incumbent kept to the deadline.
inline SolveResult solve(const Scenario& scen, const GridGraph& graph,
                         const SolverConfig& config)
{
  const auto t_start = std::chrono::steady_clock::now();
  const Deadline deadline = Deadline::after_seconds(config.time_limit_s);
  SolveResult result;
  DistCache dist(graph);
  KBestSequencer sequencer(scen, graph, dist);

  long long lower_bound = -1;  // total cost of the rank-1 sequence
  auto consider = [&](const JointPlan& plan, double when) {
    const long long cost = flowtime(plan);
    if (!result.best || cost < result.flowtime_value) {
      result.best = plan;
      result.flowtime_value = cost;
      result.makespan_value = makespan(plan);
      result.timeline.push_back({when, cost});
    }
  };

  for (long long k = 1;; ++k) {
    if (deadline.expired()) break;
    if (config.max_sequences >= 0 && k > config.max_sequences) break;
    if (config.variant == Variant::v1 && k > 1) break;
    const auto seq = sequencer.next();
    if (!seq) break;  // exhausted
    if (lower_bound < 0) lower_bound = seq->total_cost;
    ++result.sequences_tried;

    const XpibtContext ctx{&scen, &graph, &dist, &*seq};
    Episode episode;
    const auto outcome = detail::plan_sequence(ctx, config, deadline,
                                               config.seed, k, episode, result);
    if (outcome == detail::SequenceOutcome::deadline) break;
    if (outcome == detail::SequenceOutcome::failed) {
      if (config.variant == Variant::v1) break;
      continue;
    }

    JointPlan plan = episode_to_plan(episode, scen);
    if (!validate(plan, scen, graph).empty()) continue;  // never expected
    if (result.first_feasible_flowtime < 0) {
      result.first_feasible_flowtime = flowtime(plan);
      result.first_feasible_rank = k;
      result.first_feasible_plan = plan;
    }
    consider(plan, elapsed_s(t_start));

    if (config.variant == Variant::v1 || config.variant == Variant::v2) break;

    Rng lns_rng(derive_seed(config.seed, "lns", static_cast<uint64_t>(k)));
    const JointPlan refined =
        refine(plan, scen, graph, dist, *seq, config.lns, lns_rng, deadline,
               &result.lns_iterations);
    consider(refined, elapsed_s(t_start));
    if (result.flowtime_value == lower_bound) break;  // provably optimal
  }

  result.wall_time_s = elapsed_s(t_start);
  return result;
}

}  // namespace ctspll
