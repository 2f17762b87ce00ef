#include <catch2/catch_amalgamated.hpp>

#include "ctspll/dist.hpp"
#include "ctspll/maps.hpp"
#include "ctspll/rng.hpp"
#include "test_support.hpp"

using namespace ctspll;
using test_support::graph_from;
using test_support::open_map;

TEST_CASE("distances", "[dist]")
{
  SECTION("manhattan on an empty grid")
  {
    const GridGraph g = graph_from(open_map(3, 3));
    const DistCache dist(g);
    CHECK(dist.distance(g.map.id(0, 0), g.map.id(2, 2)) == 4);
  }
  SECTION("identity")
  {
    const GridGraph g = graph_from(open_map(3, 3));
    const DistCache dist(g);
    CHECK(dist.distance(g.map.id(1, 1), g.map.id(1, 1)) == 0);
  }
  SECTION("separated components")
  {
    const GridGraph g =
        graph_from("type octile\nheight 1\nwidth 5\nmap\n..@..\n");
    const DistCache dist(g);
    CHECK(dist.distance(g.map.id(0, 0), g.map.id(0, 4)) == UNREACHABLE);
  }
  SECTION("blocked endpoint rejected")
  {
    const GridGraph g =
        graph_from("type octile\nheight 1\nwidth 3\nmap\n.@.\n");
    const DistCache dist(g);
    CHECK_THROWS_AS(dist.distance(g.map.id(0, 1), g.map.id(0, 0)),
                    std::invalid_argument);
  }
}

TEST_CASE("tour cost", "[dist]")
{
  SECTION("additive legs on an empty grid")
  {
    const GridGraph g = graph_from(open_map(5, 5));
    const DistCache dist(g);
    const std::vector<Vertex> order{g.map.id(0, 2)};
    CHECK(dist.tour_cost(g.map.id(0, 0), order, g.map.id(0, 4)) == 4);
  }
  SECTION("empty order is the plain distance")
  {
    const GridGraph g = graph_from(open_map(5, 5));
    const DistCache dist(g);
    CHECK(dist.tour_cost(g.map.id(0, 0), {}, g.map.id(4, 4)) == 8);
  }
  SECTION("matches the fixed-order joint BFS oracle")
  {
    const GridGraph g = graph_from(open_map(4, 4));
    const DistCache dist(g);
    const std::vector<Vertex> order{g.map.id(0, 3), g.map.id(3, 3),
                                    g.map.id(3, 0)};
    const int expected = test_support::ref_fixed_order_walk(
        g.map, g.map.id(0, 0), order, g.map.id(0, 0));
    REQUIRE(expected >= 0);
    CHECK(dist.tour_cost(g.map.id(0, 0), order, g.map.id(0, 0)) == expected);
  }
  SECTION("fixed-order oracle agreement on obstacle maps")
  {
    const GridGraph g(make_random_map(8, 8, 0.25, 11));
    const DistCache dist(g);
    Rng rng(5);
    const int cells = static_cast<int>(g.passable_cells.size());
    for (int trial = 0; trial < 30; ++trial) {
      const Vertex s = g.passable_cells[rng.below(cells)];
      const Vertex a = g.passable_cells[rng.below(cells)];
      const Vertex b = g.passable_cells[rng.below(cells)];
      const Vertex goal = g.passable_cells[rng.below(cells)];
      const std::vector<Vertex> order{a, b};
      CHECK(dist.tour_cost(s, order, goal) ==
            test_support::ref_fixed_order_walk(g.map, s, order, goal));
    }
  }
}

TEST_CASE("distance metric properties", "[dist]")
{
  for (const uint64_t seed : {1u, 2u, 3u}) {
    const GridGraph g(make_random_map(10, 10, 0.2, seed));
    const DistCache dist(g);
    Rng rng(seed);
    const int cells = static_cast<int>(g.passable_cells.size());
    for (int trial = 0; trial < 60; ++trial) {
      const Vertex a = g.passable_cells[rng.below(cells)];
      const Vertex b = g.passable_cells[rng.below(cells)];
      const Vertex c = g.passable_cells[rng.below(cells)];
      const int ab = dist.distance(a, b);
      const int ba = dist.distance(b, a);
      CHECK(ab == ba);  // symmetry (connected map, both finite)
      const int bc = dist.distance(b, c);
      const int ac = dist.distance(a, c);
      CHECK(ac <= ab + bc);  // triangle inequality
      CHECK(dist.tour_cost(a, std::vector<Vertex>{b}, c) >= ac);
    }
  }
}

TEST_CASE("cache transparency", "[dist]")
{
  const GridGraph g(make_random_map(8, 8, 0.2, 4));
  const DistCache warm(g);
  Rng rng(9);
  const int cells = static_cast<int>(g.passable_cells.size());
  for (int trial = 0; trial < 40; ++trial) {
    const Vertex a = g.passable_cells[rng.below(cells)];
    const Vertex b = g.passable_cells[rng.below(cells)];
    const int first = warm.distance(a, b);
    const DistCache cold(g);
    CHECK(first == cold.distance(a, b));   // fresh cache
    CHECK(first == warm.distance(a, b));   // repeated query
    CHECK(first == test_support::ref_distance(g.map, a, b));
  }
}

TEST_CASE("table structure", "[dist]")
{
  const GridGraph g(make_random_map(8, 8, 0.3, 21));
  const DistCache dist(g);
  const Vertex target = g.passable_cells[3];
  const DistTable& t = dist.table_for(target);
  CHECK(t.d[target] == 0);
  for (const Vertex v : g.passable_cells) {
    if (t.d[v] <= 0) continue;
    bool has_descent = false;
    for (int k = 0; k < g.degree(v); ++k)
      if (t.d[g.neighbors(v)[k]] == t.d[v] - 1) has_descent = true;
    CHECK(has_descent);
  }
}
