/*
 * joint plans, conflict semantics, cost metrics, feasibility validator
 *
 * The validator is the single source of truth for feasibility and shares no
 * code with any planner.
 */
#pragma once
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grid.hpp"
#include "scenario.hpp"

namespace ctspll {

using Path = std::vector<Vertex>;  // vertex per timestep, t = 0..T

struct JointPlan {
  std::vector<Path> paths;          // padded to a common horizon
  std::vector<int> completion_time; // T_j per agent, -1 if incomplete
  bool feasible = false;

  int num_agents() const { return static_cast<int>(paths.size()); }
  int horizon() const
  {
    return paths.empty() ? 0 : static_cast<int>(paths[0].size()) - 1;
  }
  bool operator==(const JointPlan&) const = default;
};

struct Conflict {
  enum class Kind { vertex, edge };
  Kind kind;
  int time;      // edge conflicts reported at the earlier endpoint
  int agent_a;
  int agent_b;
  Vertex u;      // the vertex, or the first endpoint of the swapped edge
  Vertex v;      // NO_VERTEX for vertex conflicts
};

// every vertex conflict pi_a(t) == pi_b(t) and edge conflict
// (pi_a(t), pi_a(t+1)) == (pi_b(t+1), pi_b(t)), sorted by time then pair
inline std::vector<Conflict> find_conflicts(const JointPlan& plan)
{
  std::vector<Conflict> out;
  const int n = plan.num_agents();
  const int h = plan.horizon();
  for (int t = 0; t <= h; ++t) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (plan.paths[a][t] == plan.paths[b][t])
          out.push_back({Conflict::Kind::vertex, t, a, b, plan.paths[a][t],
                         NO_VERTEX});
        if (t < h && plan.paths[a][t] == plan.paths[b][t + 1] &&
            plan.paths[a][t + 1] == plan.paths[b][t])
          out.push_back({Conflict::Kind::edge, t, a, b, plan.paths[a][t],
                         plan.paths[a][t + 1]});
      }
    }
  }
  return out;
}

// T_j: the smallest t from which agent j sits at its goal for the rest of
// the horizon with every assigned task visited; -1 if there is no such t
inline std::vector<int> completion_times(const std::vector<Path>& paths,
                                         const Scenario& s)
{
  std::vector<int> out(paths.size(), -1);
  for (int j = 0; j < static_cast<int>(paths.size()); ++j) {
    const Path& p = paths[j];
    if (p.empty() || p.back() != s.agents[j].goal) continue;
    bool tasks_done = true;
    for (const int t : s.tasks_of(j)) {
      bool visited = false;
      for (const Vertex v : p)
        if (v == s.tasks[t].vertex) {
          visited = true;
          break;
        }
      if (!visited) {
        tasks_done = false;
        break;
      }
    }
    if (!tasks_done) continue;
    int arrive = 0;  // permanent arrival, not first touch
    for (int t = static_cast<int>(p.size()) - 1; t >= 0; --t) {
      if (p[t] != s.agents[j].goal) {
        arrive = t + 1;
        break;
      }
    }
    out[j] = arrive;
  }
  return out;
}

inline long long flowtime(const JointPlan& plan)
{
  long long sum = 0;
  for (const int t : plan.completion_time) {
    if (t < 0) return -1;
    sum += t;
  }
  return sum;
}

inline int makespan(const JointPlan& plan)
{
  int m = 0;
  for (const int t : plan.completion_time) {
    if (t < 0) return -1;
    m = std::max(m, t);
  }
  return m;
}

// checks the three feasibility conditions plus move legality; returns every
// violation found, empty means the plan is feasible
inline std::vector<std::string> validate(const JointPlan& plan,
                                         const Scenario& s, const GridGraph& g)
{
  std::vector<std::string> out;
  const int n = s.num_agents();
  if (plan.num_agents() != n) {
    out.push_back("plan has " + std::to_string(plan.num_agents()) +
                  " paths for " + std::to_string(n) + " agents");
    return out;
  }
  const int h = plan.horizon();
  for (int j = 0; j < n; ++j) {
    const Path& p = plan.paths[j];
    if (static_cast<int>(p.size()) != h + 1) {
      out.push_back("agent " + std::to_string(j) +
                    " path not padded to the common horizon");
      return out;
    }
    if (p[0] != s.agents[j].start)
      out.push_back("agent " + std::to_string(j) +
                    " does not start at its start vertex");
    for (int t = 0; t <= h; ++t) {
      if (p[t] < 0 || p[t] >= g.size() || !g.passable(p[t])) {
        out.push_back("agent " + std::to_string(j) + " occupies an invalid " +
                      "vertex at t=" + std::to_string(t));
        continue;
      }
      if (t == 0) continue;
      if (p[t] == p[t - 1]) continue;
      bool adjacent = false;
      for (int k = 0; k < g.degree(p[t - 1]); ++k)
        if (g.neighbors(p[t - 1])[k] == p[t]) adjacent = true;
      if (!adjacent)
        out.push_back("agent " + std::to_string(j) + " makes an illegal move " +
                      "at t=" + std::to_string(t - 1));
    }
  }
  for (const auto& c : find_conflicts(plan)) {
    if (c.kind == Conflict::Kind::vertex)
      out.push_back("vertex conflict between agents " +
                    std::to_string(c.agent_a) + " and " +
                    std::to_string(c.agent_b) + " at t=" +
                    std::to_string(c.time));
    else
      out.push_back("edge conflict between agents " +
                    std::to_string(c.agent_a) + " and " +
                    std::to_string(c.agent_b) + " at t=" +
                    std::to_string(c.time));
  }
  // condition (i): every assigned agent visits each of its task vertices
  for (int t = 0; t < s.num_tasks(); ++t) {
    for (const int j : s.tasks[t].assignees) {
      bool visited = false;
      for (const Vertex v : plan.paths[j])
        if (v == s.tasks[t].vertex) {
          visited = true;
          break;
        }
      if (!visited)
        out.push_back("task " + std::to_string(t) + " never visited by agent " +
                      std::to_string(j));
    }
  }
  // condition (iii): permanent arrival at the goal
  const auto completion = completion_times(plan.paths, s);
  for (int j = 0; j < n; ++j) {
    if (completion[j] < 0)
      out.push_back("agent " + std::to_string(j) +
                    " does not settle at its goal with all tasks done");
    else if (!plan.completion_time.empty() &&
             plan.completion_time[j] != completion[j])
      out.push_back("agent " + std::to_string(j) + " completion time " +
                    std::to_string(plan.completion_time[j]) +
                    " inconsistent with its path (" +
                    std::to_string(completion[j]) + ")");
  }
  return out;
}

// trace format: `plan <n> <horizon> <flowtime> <makespan>`, one
// `t <time> <r0> <c0> ...` line per timestep, then `done <agent> <Tj>` lines
inline std::string serialize_plan(const JointPlan& plan, const GridMap& m)
{
  std::ostringstream out;
  out << "plan " << plan.num_agents() << " " << plan.horizon() << " "
      << flowtime(plan) << " " << makespan(plan) << "\n";
  for (int t = 0; t <= plan.horizon(); ++t) {
    out << "t " << t;
    for (int j = 0; j < plan.num_agents(); ++j)
      out << " " << m.row(plan.paths[j][t]) << " " << m.col(plan.paths[j][t]);
    out << "\n";
  }
  for (int j = 0; j < plan.num_agents(); ++j)
    out << "done " << j << " " << plan.completion_time[j] << "\n";
  return out.str();
}

inline JointPlan parse_plan(const std::string& text, const GridMap& m)
{
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("line " + std::to_string(lineno) + ": " + why);
  };
  JointPlan plan;
  int n = 0, horizon = 0;
  long long ft = 0;
  int ms = 0;
  {
    if (!std::getline(in, line)) throw ParseError("empty plan trace");
    ++lineno;
    std::istringstream ls(detail::strip_cr(line));
    std::string head;
    if (!(ls >> head >> n >> horizon >> ft >> ms) || head != "plan" || n < 1 ||
        horizon < 0)
      throw fail("expected 'plan <n> <horizon> <flowtime> <makespan>'");
  }
  plan.paths.assign(n, Path(horizon + 1, NO_VERTEX));
  plan.completion_time.assign(n, -1);
  for (int t = 0; t <= horizon; ++t) {
    if (!std::getline(in, line)) throw ParseError("plan trace truncated");
    ++lineno;
    std::istringstream ls(detail::strip_cr(line));
    std::string head;
    int time;
    if (!(ls >> head >> time) || head != "t" || time != t)
      throw fail("expected 't " + std::to_string(t) + " ...'");
    for (int j = 0; j < n; ++j) {
      int r, c;
      if (!(ls >> r >> c)) throw fail("missing agent coordinates");
      if (!m.in_bounds(r, c)) throw fail("coordinates out of bounds");
      plan.paths[j][t] = m.id(r, c);
    }
  }
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string head;
    int j, tj;
    if (!(ls >> head >> j >> tj) || head != "done" || j < 0 || j >= n)
      throw fail("expected 'done <agent> <Tj>'");
    plan.completion_time[j] = tj;
  }
  plan.feasible = true;
  return plan;
}

}  // namespace ctspll
