#include <catch2/catch_amalgamated.hpp>

#include "ctspll/lacam.hpp"
#include "ctspll/maps.hpp"
#include "ctspll/oracle.hpp"
#include "test_support.hpp"

using namespace ctspll;
using test_support::graph_from;
using test_support::open_map;

namespace {

bool configs_valid(const std::vector<Configuration>& configs,
                   const GridGraph& g)
{
  for (size_t t = 0; t < configs.size(); ++t) {
    const auto& q = configs[t];
    for (size_t a = 0; a < q.size(); ++a) {
      if (!g.passable(q[a])) return false;
      for (size_t b = a + 1; b < q.size(); ++b)
        if (q[a] == q[b]) return false;
    }
    if (t == 0) continue;
    const auto& p = configs[t - 1];
    for (size_t a = 0; a < q.size(); ++a) {
      if (q[a] == p[a]) continue;
      bool adjacent = false;
      for (int k = 0; k < g.degree(p[a]); ++k)
        adjacent = adjacent || g.neighbors(p[a])[k] == q[a];
      if (!adjacent) return false;
      for (size_t b = 0; b < q.size(); ++b)
        if (b != a && q[a] == p[b] && q[b] == p[a]) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("swap through a degree-3 vertex", "[lacam]")
{
  // T junction: corridor (0,0)-(0,1)-(0,2) with pocket (1,1) under the middle
  const GridGraph g = graph_from("type octile\nheight 2\nwidth 3\nmap\n...\n@.@\n");
  LocalInstance inst{GridGraph(g.map),
                     {g.map.id(0, 0), g.map.id(0, 1)},
                     {g.map.id(0, 1), g.map.id(0, 0)},
                     {0, 1}};
  Rng rng(3);
  const LacamResult res = lacam_solve(inst, 5.0, rng);
  REQUIRE(res.status == LacamStatus::solved);
  CHECK(res.configs.front() == inst.starts);
  CHECK(res.configs.back() == inst.goals);
  CHECK(configs_valid(res.configs, inst.graph));
}

TEST_CASE("swap inside a two-cell pocket is proven unsolvable", "[lacam]")
{
  const GridGraph g = graph_from("type octile\nheight 1\nwidth 2\nmap\n..\n");
  LocalInstance inst{GridGraph(g.map),
                     {g.map.id(0, 0), g.map.id(0, 1)},
                     {g.map.id(0, 1), g.map.id(0, 0)},
                     {0, 1}};
  Rng rng(3);
  const LacamResult res = lacam_solve(inst, 5.0, rng);
  CHECK(res.status == LacamStatus::unsolvable);
}

TEST_CASE("already at the goals", "[lacam]")
{
  const GridGraph g = graph_from(open_map(2, 2));
  LocalInstance inst{GridGraph(g.map),
                     {g.map.id(0, 0)},
                     {g.map.id(0, 0)},
                     {0}};
  Rng rng(1);
  const LacamResult res = lacam_solve(inst, 1.0, rng);
  REQUIRE(res.status == LacamStatus::solved);
  CHECK(res.configs.size() == 1);
}

TEST_CASE("agrees with the joint-state oracle on random local instances",
          "[lacam]")
{
  int solvable = 0, unsolvable = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const GridMap m = make_random_map(4, 4, 0.3, seed);
    const GridGraph g(m);
    const int n = 2 + static_cast<int>(seed % 2);
    if (static_cast<int>(g.passable_cells.size()) < 2 * n) continue;
    Rng rng(derive_seed(seed, "pick"));
    const auto si =
        rng.sample_without_replacement((int)g.passable_cells.size(), n);
    const auto gi =
        rng.sample_without_replacement((int)g.passable_cells.size(), n);
    LocalInstance inst;
    inst.graph = GridGraph(m);
    for (const int i : si) inst.starts.push_back(g.passable_cells[i]);
    for (const int i : gi) inst.goals.push_back(g.passable_cells[i]);
    inst.agent_ids.assign(n, 0);

    const ReachResult ref = oracle_reachable(inst);
    REQUIRE(ref.status != OracleStatus::limit_exceeded);
    Rng srng(derive_seed(seed, "solve"));
    const LacamResult res = lacam_solve(inst, 10.0, srng);
    REQUIRE(res.status != LacamStatus::timeout);
    if (ref.status == OracleStatus::solved) {
      ++solvable;
      REQUIRE(res.status == LacamStatus::solved);
      CHECK(res.configs.front() == inst.starts);
      CHECK(res.configs.back() == inst.goals);
      CHECK(configs_valid(res.configs, inst.graph));
    } else {
      ++unsolvable;
      REQUIRE(res.status == LacamStatus::unsolvable);
    }
  }
  CHECK(solvable > 0);
  CHECK(unsolvable > 0);  // the suite must exercise both outcomes
}

TEST_CASE("deterministic by seed", "[lacam]")
{
  const GridGraph g(make_random_map(5, 5, 0.2, 9));
  Rng pick(4);
  const auto si = pick.sample_without_replacement((int)g.passable_cells.size(), 3);
  const auto gi = pick.sample_without_replacement((int)g.passable_cells.size(), 3);
  LocalInstance inst;
  inst.graph = GridGraph(g.map);
  for (const int i : si) inst.starts.push_back(g.passable_cells[i]);
  for (const int i : gi) inst.goals.push_back(g.passable_cells[i]);
  inst.agent_ids = {0, 1, 2};
  Rng r1(42), r2(42);
  const LacamResult a = lacam_solve(inst, 5.0, r1);
  const LacamResult b = lacam_solve(inst, 5.0, r2);
  REQUIRE(a.status == b.status);
  CHECK(a.configs == b.configs);
}
