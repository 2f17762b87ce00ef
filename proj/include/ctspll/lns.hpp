/*
 * anytime plan refinement by large neighborhood search: adaptive destroy
 * strategies, prioritized-planning repair against a space-time reservation
 * table, strict-improvement acceptance
 */
#pragma once
#include <map>
#include <unordered_set>

#include "deadline.hpp"
#include "dist.hpp"
#include "plan.hpp"
#include "rng.hpp"
#include "sequencing.hpp"

namespace ctspll {

enum class DestroyStrategy { random = 0, intersection = 1, random_walk = 2 };
constexpr int kNumStrategies = 3;

struct StrategyWeights {
  std::array<double, kNumStrategies> w{1.0, 1.0, 1.0};
  double gamma = 0.1;
  double delta = 1.0;  // smoothing added before normalization

  std::array<double, kNumStrategies> probs() const
  {
    std::array<double, kNumStrategies> p{};
    double sum = 0;
    for (int i = 0; i < kNumStrategies; ++i) sum += w[i] + delta;
    for (int i = 0; i < kNumStrategies; ++i) p[i] = (w[i] + delta) / sum;
    return p;
  }
};

// w_s <- (1-gamma) w_s + gamma max{Delta_s, 0},
// Delta_s = sum C(removed) - sum C(repaired)
inline void update_weight(StrategyWeights& weights, DestroyStrategy s,
                          std::span<const int> removed_costs,
                          std::span<const int> repaired_costs)
{
  double delta = 0;
  for (const int c : removed_costs) delta += c;
  for (const int c : repaired_costs) delta -= c;
  const int i = static_cast<int>(s);
  weights.w[i] = (1.0 - weights.gamma) * weights.w[i] +
                 weights.gamma * std::max(delta, 0.0);
}

struct Neighborhood {
  std::vector<int> agents;
  DestroyStrategy strategy;
};

// draws a strategy with probability proportional to w_s + delta, then picks
// the agent subset:
//   random      — uniform sample without replacement
//   intersection— agents passing through the most-visited vertices
//   random_walk — the most delayed agent plus agents adjacent to its path
inline Neighborhood select_neighborhood(const JointPlan& plan,
                                        const Scenario& s,
                                        const GridGraph& g,
                                        const JointSequence& seq,
                                        const StrategyWeights& weights,
                                        Rng& rng, int size_cap)
{
  const int n = plan.num_agents();
  const int cap = std::min(size_cap, n);
  Neighborhood nb;
  const auto p = weights.probs();
  const double u = rng.unit();
  if (u < p[0])
    nb.strategy = DestroyStrategy::random;
  else if (u < p[0] + p[1])
    nb.strategy = DestroyStrategy::intersection;
  else
    nb.strategy = DestroyStrategy::random_walk;

  switch (nb.strategy) {
    case DestroyStrategy::random: {
      nb.agents = rng.sample_without_replacement(n, cap);
      std::sort(nb.agents.begin(), nb.agents.end());
      break;
    }
    case DestroyStrategy::intersection: {
      std::vector<int> visits(g.size(), 0);
      for (int j = 0; j < n; ++j)
        for (int t = 0; t <= plan.completion_time[j]; ++t)
          ++visits[plan.paths[j][t]];
      std::vector<Vertex> ranked;
      for (Vertex v = 0; v < g.size(); ++v)
        if (visits[v] > 0) ranked.push_back(v);
      std::sort(ranked.begin(), ranked.end(), [&](Vertex a, Vertex b) {
        if (visits[a] != visits[b]) return visits[a] > visits[b];
        return a < b;
      });
      std::vector<uint8_t> chosen(n, 0);
      for (const Vertex v : ranked) {
        if (static_cast<int>(nb.agents.size()) >= cap) break;
        for (int j = 0;
             j < n && static_cast<int>(nb.agents.size()) < cap; ++j) {
          if (chosen[j]) continue;
          for (int t = 0; t <= plan.completion_time[j]; ++t)
            if (plan.paths[j][t] == v) {
              chosen[j] = 1;
              nb.agents.push_back(j);
              break;
            }
        }
      }
      std::sort(nb.agents.begin(), nb.agents.end());
      break;
    }
    case DestroyStrategy::random_walk: {
      int worst = 0;
      int worst_delay = -1;
      for (int j = 0; j < n; ++j) {
        const int delay = plan.completion_time[j] - seq.per_agent[j].cost;
        if (delay > worst_delay) {
          worst_delay = delay;
          worst = j;
        }
      }
      std::vector<uint8_t> chosen(n, 0);
      chosen[worst] = 1;
      nb.agents.push_back(worst);
      for (int t = 0; t <= plan.completion_time[worst] &&
                      static_cast<int>(nb.agents.size()) < cap;
           ++t) {
        const Vertex v = plan.paths[worst][t];
        for (int j = 0; j < n && static_cast<int>(nb.agents.size()) < cap;
             ++j) {
          if (chosen[j]) continue;
          const Vertex u = plan.paths[j][t];
          bool adjacent = u == v;
          for (int k = 0; k < g.degree(v) && !adjacent; ++k)
            adjacent = g.neighbors(v)[k] == u;
          if (adjacent) {
            chosen[j] = 1;
            nb.agents.push_back(j);
          }
        }
      }
      std::sort(nb.agents.begin(), nb.agents.end());
      break;
    }
  }
  return nb;
}

// vertex and edge occupancy of the preserved paths, with parked-forever
// semantics past each path's horizon
struct ReservationTable {
  int num_vertices = 0;
  std::unordered_set<uint64_t> occupied;  // (v, t) cells
  std::unordered_set<uint64_t> edges;     // (t, u, v) transitions
  std::vector<int> parked_from;  // per vertex: time from which it is held
  std::vector<int> last_transient;  // per vertex: last non-parked visit

  explicit ReservationTable(const GridGraph& g)
      : num_vertices(g.size()),
        parked_from(g.size(), INT32_MAX),
        last_transient(g.size(), -1)
  {
  }

  uint64_t cell_key(Vertex v, int t) const
  {
    return static_cast<uint64_t>(t) * num_vertices + v;
  }
  static uint64_t edge_key(int t, Vertex u, Vertex v)
  {
    return (static_cast<uint64_t>(t) << 40) ^
           (static_cast<uint64_t>(u) << 20) ^ static_cast<uint64_t>(v);
  }

  void add_path(int, const Path& p)
  {
    const int len = static_cast<int>(p.size()) - 1;
    for (int t = 0; t <= len; ++t) {
      occupied.insert(cell_key(p[t], t));
      if (t < len) edges.insert(edge_key(t, p[t], p[t + 1]));
      if (p[t] != p.back()) last_transient[p[t]] = std::max(last_transient[p[t]], t);
    }
    int settle = 0;
    for (int t = len; t >= 0; --t)
      if (p[t] != p.back()) {
        settle = t + 1;
        break;
      }
    parked_from[p.back()] = std::min(parked_from[p.back()], settle);
  }

  bool vertex_free(Vertex v, int t) const
  {
    if (t >= parked_from[v]) return false;
    return occupied.find(cell_key(v, t)) == occupied.end();
  }
  // move u -> v over step t -> t+1 swaps iff a reserved path did v -> u
  bool edge_free(Vertex u, Vertex v, int t) const
  {
    return edges.find(edge_key(t, v, u)) == edges.end();
  }
  // earliest time from which v stays free forever
  int settle_free_from(Vertex v) const
  {
    if (parked_from[v] != INT32_MAX) return INT32_MAX;
    return last_transient[v] + 1;
  }

  bool operator==(const ReservationTable& o) const
  {
    return occupied == o.occupied && edges == o.edges &&
           parked_from == o.parked_from && last_transient == o.last_transient;
  }
};

namespace detail {

// space-time shortest path through the agent's fixed task segments, against
// the reservation table; state is (vertex, time, segment index)
inline std::optional<Path> space_time_tour(const GridGraph& g,
                                           const DistCache& dist,
                                           const ReservationTable& res,
                                           Vertex start, Vertex goal,
                                           const std::vector<Vertex>& order,
                                           int max_time)
{
  const int segs = static_cast<int>(order.size());
  std::vector<int> suffix(segs + 1, 0);  // remaining tour cost from segment i
  suffix[segs] = 0;
  for (int i = segs - 1; i >= 0; --i) {
    const Vertex next = i + 1 < segs ? order[i + 1] : goal;
    suffix[i] = dist.distance(order[i], next) + suffix[i + 1];
  }
  const int settle_goal = res.settle_free_from(goal);
  if (settle_goal == INT32_MAX) return std::nullopt;
  auto heuristic = [&](Vertex v, int t, int seg) {
    const Vertex next = seg < segs ? order[seg] : goal;
    const int tour = dist.distance(v, next) + (seg < segs ? suffix[seg] : 0);
    return std::max(tour, settle_goal - t);  // cannot park before settle_goal
  };
  auto advance = [&](Vertex v, int seg) {
    while (seg < segs && order[seg] == v) ++seg;
    return seg;
  };

  struct Node {
    Vertex v;
    int t, seg, parent;
  };
  constexpr size_t kNodeCap = 60000;  // keeps one iteration a bounded step
  std::vector<Node> nodes;
  std::unordered_set<uint64_t> seen;
  auto state_key = [&](Vertex v, int t, int seg) {
    return (static_cast<uint64_t>(seg) << 48) ^
           (static_cast<uint64_t>(t) << 24) ^ static_cast<uint64_t>(v);
  };
  using Entry = std::tuple<int, int, int>;  // f, -t (deeper first), node id
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  const int seg0 = advance(start, 0);
  if (!res.vertex_free(start, 0)) return std::nullopt;
  if (heuristic(start, 0, seg0) > max_time) return std::nullopt;
  nodes.push_back({start, 0, seg0, -1});
  seen.insert(state_key(start, 0, seg0));
  open.push({heuristic(start, 0, seg0), 0, 0});

  while (!open.empty()) {
    if (nodes.size() > kNodeCap) return std::nullopt;
    const auto [f, neg_t, id] = open.top();
    open.pop();
    const Node cur = nodes[id];
    if (cur.seg == segs && cur.v == goal && cur.t >= settle_goal) {
      Path p;
      for (int i = id; i >= 0; i = nodes[i].parent) p.push_back(nodes[i].v);
      std::reverse(p.begin(), p.end());
      return p;
    }
    if (cur.t >= max_time) continue;
    const int nt = cur.t + 1;
    auto try_move = [&](Vertex u) {
      if (!res.vertex_free(u, nt)) return;
      if (u != cur.v && !res.edge_free(cur.v, u, cur.t)) return;
      const int nseg = advance(u, cur.seg);
      const int nf = nt + heuristic(u, nt, nseg);
      if (nf > max_time) return;  // cannot finish within the horizon bound
      const uint64_t key = state_key(u, nt, nseg);
      if (!seen.insert(key).second) return;
      nodes.push_back({u, nt, nseg, id});
      open.push({nf, -nt, static_cast<int>(nodes.size()) - 1});
    };
    try_move(cur.v);
    for (int k = 0; k < g.degree(cur.v); ++k) try_move(g.neighbors(cur.v)[k]);
  }
  return std::nullopt;
}

}  // namespace detail

// re-plans the neighborhood agents one at a time in shuffled order, each via
// the space-time tour search; fails (and discards the iteration) if any
// agent exhausts its horizon bound
inline std::optional<JointPlan> repair(const JointPlan& plan,
                                       const Neighborhood& nb,
                                       const Scenario& s, const GridGraph& g,
                                       const DistCache& dist,
                                       const JointSequence& seq, Rng& rng)
{
  if (nb.agents.empty()) return plan;
  const int n = plan.num_agents();
  std::vector<uint8_t> removed(n, 0);
  for (const int j : nb.agents) removed[j] = 1;

  ReservationTable res(g);
  for (int j = 0; j < n; ++j)
    if (!removed[j]) res.add_path(j, plan.paths[j]);

  std::vector<int> order = nb.agents;
  rng.shuffle(order);
  const int max_time = 2 * plan.horizon() + g.size();

  std::vector<Path> new_paths = plan.paths;
  for (const int j : order) {
    auto path = detail::space_time_tour(g, dist, res, s.agents[j].start,
                                        s.agents[j].goal,
                                        seq.per_agent[j].order, max_time);
    if (!path) return std::nullopt;
    new_paths[j] = std::move(*path);
    res.add_path(j, new_paths[j]);
  }

  int horizon = 0;
  for (const auto& p : new_paths)
    horizon = std::max(horizon, static_cast<int>(p.size()) - 1);
  for (auto& p : new_paths)
    while (static_cast<int>(p.size()) <= horizon) p.push_back(p.back());

  JointPlan out;
  out.paths = std::move(new_paths);
  out.completion_time = completion_times(out.paths, s);
  out.feasible = true;
  return out;
}

struct LnsBudget {
  long long iterations = -1;  // < 0 means unbounded in that dimension
  double seconds = -1;

  bool spent(long long iters_done, double seconds_done) const
  {
    if (iterations >= 0 && iters_done >= iterations) return true;
    if (seconds >= 0 && seconds_done >= seconds) return true;
    return iterations < 0 && seconds < 0;  // no budget means no iterations
  }
};

struct LnsIterRecord {
  long long iteration;
  DestroyStrategy strategy;
  double delta;
  bool accepted;
  long long incumbent_flowtime;
};

// destroy/repair loop; accepts a candidate iff it validates and strictly
// lowers flowtime, so the returned plan never costs more than the input
inline JointPlan refine(const JointPlan& plan, const Scenario& s,
                        const GridGraph& g, const DistCache& dist,
                        const JointSequence& seq, const LnsBudget& budget,
                        Rng& rng, const Deadline& deadline,
                        long long* iterations_done = nullptr,
                        std::vector<LnsIterRecord>* log = nullptr)
{
  JointPlan incumbent = plan;
  StrategyWeights weights;
  const int size_cap = std::min(8, s.num_agents());
  const auto t0 = std::chrono::steady_clock::now();
  long long iter = 0;
  while (!budget.spent(iter, elapsed_s(t0)) && !deadline.expired()) {
    ++iter;
    const Neighborhood nb =
        select_neighborhood(incumbent, s, g, seq, weights, rng, size_cap);
    std::vector<int> removed_costs;
    for (const int j : nb.agents)
      removed_costs.push_back(incumbent.completion_time[j]);
    const auto candidate = repair(incumbent, nb, s, g, dist, seq, rng);
    double delta = 0;
    bool accepted = false;
    if (candidate) {
      std::vector<int> repaired_costs;
      for (const int j : nb.agents)
        repaired_costs.push_back(candidate->completion_time[j]);
      update_weight(weights, nb.strategy, removed_costs, repaired_costs);
      for (size_t i = 0; i < removed_costs.size(); ++i)
        delta += removed_costs[i] - repaired_costs[i];
      if (flowtime(*candidate) >= 0 &&
          flowtime(*candidate) < flowtime(incumbent) &&
          validate(*candidate, s, g).empty()) {
        incumbent = *candidate;
        accepted = true;
      }
    } else {
      update_weight(weights, nb.strategy, {}, {});  // decay on failed repair
    }
    if (log)
      log->push_back({iter, nb.strategy, delta, accepted, flowtime(incumbent)});
  }
  if (iterations_done) *iterations_done += iter;
  return incumbent;
}

}  // namespace ctspll
