/*
 * seeded random instance generation
 */
#pragma once
#include <stdexcept>

#include "rng.hpp"
#include "scenario.hpp"

namespace ctspll {

// deterministic for fixed (graph, n_agents, n_tasks, seed); starts distinct,
// goals distinct, task vertices uniform over passable cells; assignee count
// is 1/2/3 with probability 0.7/0.2/0.1 (capped by n_agents); resamples the
// whole draw until the reachability invariants hold
inline Scenario generate_instance(const GridGraph& g, int n_agents,
                                  int n_tasks, uint64_t seed)
{
  const int cells = static_cast<int>(g.passable_cells.size());
  if (n_agents < 1) throw std::invalid_argument("need at least one agent");
  if (n_tasks < 0) throw std::invalid_argument("negative task count");
  if (n_agents > cells)
    throw std::invalid_argument("not enough passable cells for " +
                                std::to_string(n_agents) + " agents");

  Rng rng(derive_seed(seed, "gen"));
  constexpr int max_attempts = 1000;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Scenario s;
    s.seed = seed;
    const auto starts = rng.sample_without_replacement(cells, n_agents);
    const auto goals = rng.sample_without_replacement(cells, n_agents);
    for (int j = 0; j < n_agents; ++j)
      s.agents.push_back(
          {g.passable_cells[starts[j]], g.passable_cells[goals[j]]});
    for (int t = 0; t < n_tasks; ++t) {
      Task task;
      task.vertex = g.passable_cells[rng.below(cells)];
      const double u = rng.unit();
      int k = u < 0.7 ? 1 : (u < 0.9 ? 2 : 3);
      k = std::min(k, n_agents);
      task.assignees = rng.sample_without_replacement(n_agents, k);
      std::sort(task.assignees.begin(), task.assignees.end());
      s.tasks.push_back(std::move(task));
    }
    try {
      check_scenario(s, g);
    } catch (const ParseError&) {
      continue;  // reachability violated on a disconnected map; redraw
    }
    return s;
  }
  throw std::runtime_error(
      "instance generation failed reachability after " +
      std::to_string(max_attempts) + " attempts");
}

}  // namespace ctspll
