#include <catch2/catch_amalgamated.hpp>

#include "ctspll/fixtures.hpp"
#include "ctspll/generator.hpp"
#include "ctspll/maps.hpp"
#include "ctspll/oracle.hpp"
#include "ctspll/solver.hpp"
#include "test_support.hpp"

using namespace ctspll;
using test_support::graph_from;
using test_support::open_map;

TEST_CASE("all variants solve an open instance", "[solver]")
{
  const GridGraph g = graph_from(open_map(8, 8));
  const Scenario s = generate_instance(g, 4, 6, 11);
  SolveResult results[3];
  for (const Variant v : {Variant::v1, Variant::v2, Variant::v3}) {
    SolverConfig cfg;
    cfg.variant = v;
    cfg.time_limit_s = 10;
    cfg.lns.iterations = 50;
    cfg.seed = 5;
    cfg.max_sequences = 50;
    results[static_cast<int>(v)] = solve(s, g, cfg);
    const auto& r = results[static_cast<int>(v)];
    REQUIRE(r.success());
    CHECK(validate(*r.best, s, g).empty());
    CHECK(r.flowtime_value >= makespan(*r.best));
  }
  CHECK(results[2].flowtime_value <= results[1].flowtime_value);
}

TEST_CASE("regression fixtures need lock release", "[solver]")
{
  for (const auto& [map_text, scen_text] :
       {std::pair{fixtures::kDeadlockMap, fixtures::kDeadlockScenario},
        std::pair{fixtures::kLivelockMap, fixtures::kLivelockScenario}}) {
    const GridGraph g = graph_from(map_text);
    const Scenario s = parse_scenario(scen_text, g);
    for (const uint64_t seed : {0u, 7u, 123u}) {
      SolverConfig plain;
      plain.variant = Variant::v1;
      plain.lock_release = false;
      plain.time_limit_s = 10;
      plain.seed = seed;
      CHECK_FALSE(solve(s, g, plain).success());

      SolverConfig v1 = plain;
      v1.lock_release = true;
      const auto r = solve(s, g, v1);
      REQUIRE(r.success());
      CHECK(r.lock_events >= 1);
      CHECK(validate(*r.best, s, g).empty());
    }
  }
}

TEST_CASE("v2 equals v3's first incumbent before refinement", "[solver]")
{
  const GridGraph g(builtin_map("random"));
  for (const uint64_t seed : {1u, 2u, 3u}) {
    const Scenario s = generate_instance(g, 6, 10, seed);
    SolverConfig v2;
    v2.variant = Variant::v2;
    v2.time_limit_s = 20;
    v2.seed = 99;
    SolverConfig v3 = v2;
    v3.variant = Variant::v3;
    v3.lns.iterations = 30;
    v3.max_sequences = 8;
    const auto r2 = solve(s, g, v2);
    const auto r3 = solve(s, g, v3);
    REQUIRE(r2.success());
    REQUIRE(r3.success());
    REQUIRE(r3.first_feasible_plan.has_value());
    CHECK(r3.first_feasible_flowtime == r2.flowtime_value);
    CHECK(r3.first_feasible_plan->paths == r2.best->paths);
    CHECK(r3.flowtime_value <= r2.flowtime_value);
  }
}

TEST_CASE("deterministic results for a fixed seed", "[solver]")
{
  const GridGraph g(builtin_map("room"));
  const Scenario s = generate_instance(g, 5, 8, 21);
  SolverConfig cfg;
  cfg.variant = Variant::v3;
  cfg.time_limit_s = 30;
  cfg.lns.iterations = 25;
  cfg.max_sequences = 6;
  cfg.seed = 17;
  const auto a = solve(s, g, cfg);
  const auto b = solve(s, g, cfg);
  REQUIRE(a.success());
  REQUIRE(b.success());
  CHECK(a.best->paths == b.best->paths);
  CHECK(a.flowtime_value == b.flowtime_value);
  CHECK(a.sequences_tried == b.sequences_tried);
  CHECK(a.lns_iterations == b.lns_iterations);
  REQUIRE(a.timeline.size() == b.timeline.size());
  for (size_t i = 0; i < a.timeline.size(); ++i)
    CHECK(a.timeline[i].second == b.timeline[i].second);
}

TEST_CASE("incumbent timeline is non-increasing", "[solver]")
{
  const GridGraph g(builtin_map("maze"));
  const Scenario s = generate_instance(g, 8, 12, 2);
  SolverConfig cfg;
  cfg.variant = Variant::v3;
  cfg.time_limit_s = 5;
  cfg.lns.iterations = 40;
  cfg.seed = 3;
  const auto r = solve(s, g, cfg);
  REQUIRE(r.success());
  long long prev = LLONG_MAX;
  for (const auto& [t, f] : r.timeline) {
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("flowtime never beats the oracle", "[solver]")
{
  int solved = 0;
  for (uint64_t seed = 0; seed < 12; ++seed) {
    const GridMap m = make_random_map(5, 5, 0.15, seed);
    const GridGraph g(m);
    if (static_cast<int>(g.passable_cells.size()) < 8) continue;
    const Scenario s = generate_instance(g, 2, 2, seed);
    const auto oracle = oracle_solve(s, g);
    if (oracle.status != OracleStatus::solved) continue;
    SolverConfig cfg;
    cfg.variant = Variant::v3;
    cfg.time_limit_s = 10;
    cfg.lns.iterations = 50;
    cfg.seed = seed;
    const auto r = solve(s, g, cfg);
    REQUIRE(r.success());
    CHECK(r.flowtime_value >= oracle.optimal_flowtime);
    ++solved;
  }
  CHECK(solved >= 8);
}

TEST_CASE("deadline compliance", "[solver]")
{
  const GridGraph g(builtin_map("maze"));
  const Scenario s = generate_instance(g, 30, 60, 4);
  SolverConfig cfg;
  cfg.variant = Variant::v3;
  cfg.time_limit_s = 0.3;
  cfg.lns.iterations = 1000000;
  cfg.seed = 1;
  const auto t0 = std::chrono::steady_clock::now();
  solve(s, g, cfg);
  CHECK(elapsed_s(t0) < 5.0);  // bounded by one atomic step past the limit
}

TEST_CASE("sequence exhaustion ends the loop", "[solver]")
{
  const GridGraph g = graph_from(open_map(4, 4));
  Scenario s;
  s.agents = {{g.map.id(0, 0), g.map.id(3, 3)}};
  s.tasks = {{g.map.id(1, 1), {0}}, {g.map.id(2, 2), {0}}};
  SolverConfig cfg;
  cfg.variant = Variant::v3;
  cfg.time_limit_s = 30;
  cfg.lns.iterations = 5;
  cfg.seed = 2;
  const auto r = solve(s, g, cfg);
  REQUIRE(r.success());
  CHECK(r.sequences_tried <= 2);  // two orderings exist; lower-bound stop may
  CHECK(r.wall_time_s < 10.0);    // fire on the first
}
