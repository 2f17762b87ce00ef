#include <catch2/catch_amalgamated.hpp>

#include "ctspll/fixtures.hpp"
#include "ctspll/generator.hpp"
#include "ctspll/maps.hpp"
#include "ctspll/oracle.hpp"
#include "test_support.hpp"

using namespace ctspll;
using test_support::graph_from;
using test_support::open_map;

TEST_CASE("single agent tour", "[oracle]")
{
  const GridGraph g = graph_from(open_map(5, 1));
  Scenario s;
  s.agents = {{g.map.id(0, 0), g.map.id(0, 4)}};
  s.tasks = {{g.map.id(0, 2), {0}}};
  const auto res = oracle_solve(s, g);
  REQUIRE(res.status == OracleStatus::solved);
  CHECK(res.optimal_flowtime == 4);
  CHECK(validate(res.plan, s, g).empty());
}

TEST_CASE("task behind the agent", "[oracle]")
{
  const GridGraph g = graph_from(open_map(5, 1));
  Scenario s;
  s.agents = {{g.map.id(0, 1), g.map.id(0, 4)}};
  s.tasks = {{g.map.id(0, 0), {0}}};
  const auto res = oracle_solve(s, g);
  REQUIRE(res.status == OracleStatus::solved);
  CHECK(res.optimal_flowtime == 5);  // back up one, then across
}

TEST_CASE("corridor crossing with one passing bay", "[oracle]")
{
  // hand-derived optimum: the yielding agent detours through the bay (cost
  // 4), the other waits one step before entering the corridor (cost 3)
  const GridGraph g = graph_from("type octile\nheight 2\nwidth 3\nmap\n...\n@.@\n");
  Scenario s;
  s.agents = {{g.map.id(0, 0), g.map.id(0, 2)},
              {g.map.id(0, 2), g.map.id(0, 0)}};
  const auto res = oracle_solve(s, g);
  REQUIRE(res.status == OracleStatus::solved);
  CHECK(res.optimal_flowtime == 7);
  CHECK(validate(res.plan, s, g).empty());
}

TEST_CASE("deadlock fixture is solvable", "[oracle]")
{
  const GridGraph g = graph_from(fixtures::kDeadlockMap);
  const Scenario s = parse_scenario(fixtures::kDeadlockScenario, g);
  const auto res = oracle_solve(s, g);
  REQUIRE(res.status == OracleStatus::solved);
  CHECK(res.optimal_flowtime > 0);
  CHECK(validate(res.plan, s, g).empty());
}

TEST_CASE("unsolvable swap detected", "[oracle]")
{
  const GridGraph g = graph_from(open_map(2, 1));
  Scenario s;
  s.agents = {{g.map.id(0, 0), g.map.id(0, 1)},
              {g.map.id(0, 1), g.map.id(0, 0)}};
  const auto res = oracle_solve(s, g);
  CHECK(res.status == OracleStatus::unsolvable);
}

TEST_CASE("state bound refusal", "[oracle]")
{
  const GridGraph g = graph_from(open_map(6, 6));
  const Scenario s = generate_instance(g, 3, 3, 1);
  OracleLimits limits;
  limits.max_states = 10;
  const auto res = oracle_solve(s, g, limits);
  CHECK(res.status == OracleStatus::limit_exceeded);
}

TEST_CASE("optimal flowtime uses permanent arrival", "[oracle]")
{
  // agent 0 starts on its own goal but must dodge into the pocket so agent 1
  // can pass; it pays for the round trip: T = {2, 2}, flowtime 4
  const GridGraph g = graph_from("type octile\nheight 2\nwidth 3\nmap\n...\n@.@\n");
  Scenario s;
  s.agents = {{g.map.id(0, 1), g.map.id(0, 1)},
              {g.map.id(0, 0), g.map.id(0, 2)}};
  const auto res = oracle_solve(s, g);
  REQUIRE(res.status == OracleStatus::solved);
  CHECK(res.optimal_flowtime == 4);
  CHECK(validate(res.plan, s, g).empty());
  CHECK(flowtime(res.plan) == res.optimal_flowtime);
}

TEST_CASE("reachability search matches plan legality", "[oracle]")
{
  const GridGraph g = graph_from(open_map(3, 3));
  LocalInstance inst;
  inst.graph = GridGraph(g.map);
  inst.starts = {g.map.id(0, 0), g.map.id(2, 2)};
  inst.goals = {g.map.id(2, 2), g.map.id(0, 0)};
  inst.agent_ids = {0, 1};
  const auto res = oracle_reachable(inst);
  REQUIRE(res.status == OracleStatus::solved);
  CHECK(res.configs.front() == inst.starts);
  CHECK(res.configs.back() == inst.goals);
}
