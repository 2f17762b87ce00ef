#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ctspll/bench.hpp"
#include "test_support.hpp"

using namespace ctspll;

namespace {

std::string csv_without_wall(const std::vector<BenchRow>& rows)
{
  std::string out;
  for (const auto& r : rows) {
    std::string line = csv_line(r);
    // strip column 8 (wall_s)
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    cols.erase(cols.begin() + 7);
    for (size_t i = 0; i < cols.size(); ++i)
      out += (i ? "," : "") + cols[i];
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("grid config parsing", "[bench]")
{
  const BenchGrid grid = parse_grid(
      "# comment\n"
      "maps = random, maze\n"
      "agents = 5, 10\n"
      "tasks = 8\n"
      "instances = 3\n"
      "variants = v1, v2, v3-nolns\n"
      "time_limit = 12.5\n"
      "lns_iters = 40\n"
      "seed = 99\n");
  CHECK(grid.maps == std::vector<std::string>{"random", "maze"});
  CHECK(grid.agent_counts == std::vector<int>{5, 10});
  CHECK(grid.task_counts == std::vector<int>{8});
  CHECK(grid.instances_per_cell == 3);
  CHECK(grid.time_limit_s == 12.5);
  CHECK(grid.lns_iterations == 40);
  CHECK(grid.root_seed == 99);

  CHECK_THROWS_AS(parse_grid("maps = empty\n"), ParseError);
  CHECK_THROWS_AS(parse_grid("bogus_key = 1\n"), ParseError);
  CHECK_THROWS_AS(
      parse_grid("maps = empty\nagents = 1\ntasks = 1\nvariants = v9\n"),
      ParseError);
}

TEST_CASE("variant tokens", "[bench]")
{
  BenchGrid grid;
  grid.time_limit_s = 7;
  grid.lns_iterations = 11;
  const SolverConfig plain = variant_config("plain", grid);
  CHECK(plain.variant == Variant::v1);
  CHECK_FALSE(plain.lock_release);
  const SolverConfig v3 = variant_config("v3", grid);
  CHECK(v3.lns.iterations == 11);
  const SolverConfig nolns = variant_config("v3-nolns", grid);
  CHECK(nolns.variant == Variant::v3);
  CHECK(nolns.lns.iterations == 0);
}

TEST_CASE("single cell run with aggregates", "[bench]")
{
  const BenchGrid grid = parse_grid(
      "maps = empty\nagents = 3\ntasks = 4\ninstances = 2\n"
      "variants = v1\ntime_limit = 10\nseed = 5\n");
  const auto rows = run_bench(grid, 1);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.success);
    CHECK(r.flowtime > 0);
    CHECK(r.variant == "v1");
  }
  const auto aggs = aggregate(rows);
  REQUIRE(aggs.size() == 1);
  CHECK(aggs[0].solved == 2);
  CHECK(aggs[0].total == 2);
  CHECK(aggs[0].common_solved == 2);
  std::ostringstream out;
  print_aggregates(aggs, out);
  CHECK(out.str().find("success 100%") != std::string::npos);
}

TEST_CASE("identical rows for any worker count", "[bench]")
{
  const BenchGrid grid = parse_grid(
      "maps = random\nagents = 4\ntasks = 5\ninstances = 3\n"
      "variants = v1, v2\ntime_limit = 10\nseed = 31\n");
  const auto rows1 = run_bench(grid, 1);
  const auto rows3 = run_bench(grid, 3);
  CHECK(csv_without_wall(rows1) == csv_without_wall(rows3));
}

TEST_CASE("worker failures are isolated to their rows", "[bench]")
{
  // 2000 agents cannot fit on a 32x32 map: generation throws per row
  const BenchGrid grid = parse_grid(
      "maps = empty\nagents = 2000\ntasks = 1\ninstances = 2\n"
      "variants = v1\ntime_limit = 5\nseed = 1\n");
  const auto rows = run_bench(grid, 2);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK_FALSE(r.success);
}

TEST_CASE("instance seeds are stable identifiers", "[bench]")
{
  const uint64_t a = instance_seed_for(7, "maze", 10, 20, 3);
  CHECK(a == instance_seed_for(7, "maze", 10, 20, 3));
  CHECK(a != instance_seed_for(7, "maze", 10, 20, 4));
  CHECK(a != instance_seed_for(7, "room", 10, 20, 3));
  CHECK(a != instance_seed_for(8, "maze", 10, 20, 3));
}
