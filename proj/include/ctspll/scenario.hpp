/*
 * scenario model: agents with starts/goals, tasks with assignee sets
 */
#pragma once
#include <algorithm>
#include <cstdint>
#include <deque>
#include <sstream>
#include <string>
#include <vector>

#include "grid.hpp"

namespace ctspll {

struct AgentSpec {
  Vertex start = NO_VERTEX;
  Vertex goal = NO_VERTEX;
  bool operator==(const AgentSpec&) const = default;
};

struct Task {
  Vertex vertex = NO_VERTEX;
  std::vector<int> assignees;  // sorted, unique, non-empty
  bool operator==(const Task&) const = default;
};

struct Scenario {
  std::vector<AgentSpec> agents;
  std::vector<Task> tasks;
  uint64_t seed = 0;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_tasks() const { return static_cast<int>(tasks.size()); }

  // task indices assigned to one agent, in task order
  std::vector<int> tasks_of(int agent) const
  {
    std::vector<int> out;
    for (int t = 0; t < num_tasks(); ++t)
      if (std::binary_search(tasks[t].assignees.begin(),
                             tasks[t].assignees.end(), agent))
        out.push_back(t);
    return out;
  }

  bool operator==(const Scenario&) const = default;
};

// throws ParseError describing the first violated invariant
inline void check_scenario(const Scenario& s, const GridGraph& g)
{
  const GridMap& m = g.map;
  auto cell = [&](Vertex v) {
    return "(" + std::to_string(m.row(v)) + "," + std::to_string(m.col(v)) +
           ")";
  };
  if (s.agents.empty()) throw ParseError("scenario has no agents");
  for (int j = 0; j < s.num_agents(); ++j) {
    const auto& a = s.agents[j];
    if (a.start < 0 || a.start >= m.size() || a.goal < 0 || a.goal >= m.size())
      throw ParseError("agent " + std::to_string(j) +
                       " has an out-of-bounds vertex");
    if (!m.passable(a.start))
      throw ParseError("agent " + std::to_string(j) + " start " +
                       cell(a.start) + " is on a blocked cell");
    if (!m.passable(a.goal))
      throw ParseError("agent " + std::to_string(j) + " goal " + cell(a.goal) +
                       " is on a blocked cell");
    for (int k = 0; k < j; ++k) {
      if (s.agents[k].start == a.start)
        throw ParseError("duplicate start " + cell(a.start) + " for agents " +
                         std::to_string(k) + " and " + std::to_string(j));
      if (s.agents[k].goal == a.goal)
        throw ParseError("duplicate goal " + cell(a.goal) + " for agents " +
                         std::to_string(k) + " and " + std::to_string(j));
    }
  }
  for (int t = 0; t < s.num_tasks(); ++t) {
    const auto& task = s.tasks[t];
    if (task.vertex < 0 || task.vertex >= m.size())
      throw ParseError("task " + std::to_string(t) +
                       " has an out-of-bounds vertex");
    if (!m.passable(task.vertex))
      throw ParseError("task " + std::to_string(t) + " at " +
                       cell(task.vertex) + " is on a blocked cell");
    if (task.assignees.empty())
      throw ParseError("task " + std::to_string(t) + " has an empty assignee set");
    if (!std::is_sorted(task.assignees.begin(), task.assignees.end()) ||
        std::adjacent_find(task.assignees.begin(), task.assignees.end()) !=
            task.assignees.end())
      throw ParseError("task " + std::to_string(t) +
                       " assignee set is not sorted and unique");
    for (int a : task.assignees)
      if (a < 0 || a >= s.num_agents())
        throw ParseError("task " + std::to_string(t) + " assignee " +
                         std::to_string(a) + " references an invalid agent");
  }
  // per agent, its goal and every assigned task must share the start's
  // component
  std::vector<int> reach(m.size());
  std::deque<Vertex> queue;
  constexpr int dr[4] = {-1, 1, 0, 0};
  constexpr int dc[4] = {0, 0, -1, 1};
  for (int j = 0; j < s.num_agents(); ++j) {
    std::fill(reach.begin(), reach.end(), 0);
    reach[s.agents[j].start] = 1;
    queue.assign(1, s.agents[j].start);
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      const int r = m.row(v), c = m.col(v);
      for (int k = 0; k < 4; ++k) {
        const int rr = r + dr[k], cc = c + dc[k];
        if (!m.in_bounds(rr, cc)) continue;
        const Vertex u = m.id(rr, cc);
        if (m.passable(u) && !reach[u]) {
          reach[u] = 1;
          queue.push_back(u);
        }
      }
    }
    if (!reach[s.agents[j].goal])
      throw ParseError("agent " + std::to_string(j) + " goal " +
                       cell(s.agents[j].goal) + " unreachable from its start");
    for (int t = 0; t < s.num_tasks(); ++t)
      if (std::binary_search(s.tasks[t].assignees.begin(),
                             s.tasks[t].assignees.end(), j) &&
          !reach[s.tasks[t].vertex])
        throw ParseError("task " + std::to_string(t) + " at " +
                         cell(s.tasks[t].vertex) +
                         " unreachable from agent " + std::to_string(j) +
                         "'s start");
  }
}

// format: `cts 1`, optional `seed S`, `agent <id> <sr> <sc> <gr> <gc>` lines,
// `task <id> <r> <c> <a0>[,<a1>...]` lines; `#` starts a comment
inline Scenario parse_scenario(const std::string& text, const GridGraph& g)
{
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool versioned = false;
  std::vector<std::pair<int, AgentSpec>> agents;
  std::vector<std::pair<int, Task>> tasks;
  Scenario s;

  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto fail = [&](const std::string& why) -> ParseError {
      return ParseError("line " + std::to_string(lineno) + ": " + why);
    };
    if (!versioned) {
      int version = 0;
      if (head != "cts" || !(ls >> version) || version != 1)
        throw fail("expected version line 'cts 1'");
      versioned = true;
      continue;
    }
    if (head == "agent") {
      int id, sr, sc, gr, gc;
      if (!(ls >> id >> sr >> sc >> gr >> gc))
        throw fail("expected 'agent <id> <sr> <sc> <gr> <gc>'");
      if (!g.map.in_bounds(sr, sc) || !g.map.in_bounds(gr, gc))
        throw fail("agent " + std::to_string(id) + " vertex out of bounds");
      agents.push_back({id, {g.map.id(sr, sc), g.map.id(gr, gc)}});
    } else if (head == "task") {
      int id, r, c;
      std::string who;
      if (!(ls >> id >> r >> c >> who))
        throw fail("expected 'task <id> <r> <c> <assignees>'");
      if (!g.map.in_bounds(r, c))
        throw fail("task " + std::to_string(id) + " vertex out of bounds");
      Task task;
      task.vertex = g.map.id(r, c);
      std::istringstream ws(who);
      std::string tok;
      while (std::getline(ws, tok, ',')) {
        try {
          task.assignees.push_back(std::stoi(tok));
        } catch (const std::exception&) {
          throw fail("bad assignee '" + tok + "'");
        }
      }
      std::sort(task.assignees.begin(), task.assignees.end());
      task.assignees.erase(
          std::unique(task.assignees.begin(), task.assignees.end()),
          task.assignees.end());
      tasks.push_back({id, std::move(task)});
    } else if (head == "seed") {
      unsigned long long v;
      if (!(ls >> v)) throw fail("expected 'seed <u64>'");
      s.seed = v;
    } else {
      throw fail("unknown directive '" + head + "'");
    }
  }
  if (!versioned) throw ParseError("missing version line 'cts 1'");

  auto by_id = [](const auto& a, const auto& b) { return a.first < b.first; };
  std::sort(agents.begin(), agents.end(), by_id);
  std::sort(tasks.begin(), tasks.end(), by_id);
  for (size_t i = 0; i < agents.size(); ++i)
    if (agents[i].first != static_cast<int>(i))
      throw ParseError("agent ids must be exactly 0..n-1");
  for (size_t i = 0; i < tasks.size(); ++i)
    if (tasks[i].first != static_cast<int>(i))
      throw ParseError("task ids must be exactly 0..n-1");
  for (auto& [id, a] : agents) s.agents.push_back(a);
  for (auto& [id, t] : tasks) s.tasks.push_back(std::move(t));

  check_scenario(s, g);
  return s;
}

inline std::string serialize_scenario(const Scenario& s, const GridMap& m)
{
  std::string out = "cts 1\nseed " + std::to_string(s.seed) + "\n";
  for (int j = 0; j < s.num_agents(); ++j) {
    const auto& a = s.agents[j];
    out += "agent " + std::to_string(j) + " " + std::to_string(m.row(a.start)) +
           " " + std::to_string(m.col(a.start)) + " " +
           std::to_string(m.row(a.goal)) + " " + std::to_string(m.col(a.goal)) +
           "\n";
  }
  for (int t = 0; t < s.num_tasks(); ++t) {
    const auto& task = s.tasks[t];
    out += "task " + std::to_string(t) + " " +
           std::to_string(m.row(task.vertex)) + " " +
           std::to_string(m.col(task.vertex)) + " ";
    for (size_t i = 0; i < task.assignees.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(task.assignees[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace ctspll
