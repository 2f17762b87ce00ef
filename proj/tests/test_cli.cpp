#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ctspll/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

const std::string cli = CTSPLL_CLI_PATH;

int run(const std::string& args)
{
  const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir()
  {
    path = fs::temp_directory_path() /
           ("ctspll_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const
  {
    const fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p)
{
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("solve, validate and gen pipeline", "[cli]")
{
  TempDir tmp;
  const std::string scen = tmp.file(
      "a.scen", "cts 1\nagent 0 0 0 0 3\nagent 1 3 3 3 0\ntask 0 0 2 0\n");
  const std::string trace = tmp.sub("a.plan");

  SECTION("solve then validate exits 0")
  {
    REQUIRE(run("solve --map empty --scen " + scen +
                " --variant v1 --time-limit 10 --seed 1 --out " + trace) == 0);
    CHECK(run("validate --map empty --scen " + scen + " --plan " + trace) ==
          0);
    CHECK(slurp(trace).rfind("plan 2 ", 0) == 0);
    CHECK(fs::exists(trace + ".json"));
  }
  SECTION("corrupted trace fails validation with exit 2")
  {
    REQUIRE(run("solve --map empty --scen " + scen +
                " --variant v1 --time-limit 10 --seed 1 --out " + trace) == 0);
    std::string text = slurp(trace);
    const auto pos = text.find("t 1 ");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 7, "t 1 9 9");  // teleport agent 0
    std::ofstream(trace) << text;
    CHECK(run("validate --map empty --scen " + scen + " --plan " + trace) ==
          2);
  }
  SECTION("gen writes deterministic files")
  {
    const std::string d1 = tmp.sub("g1"), d2 = tmp.sub("g2");
    REQUIRE(run("gen --map random --agents 4 --tasks 6 --count 3 --seed 9 "
                "--out " + d1) == 0);
    REQUIRE(run("gen --map random --agents 4 --tasks 6 --count 3 --seed 9 "
                "--out " + d2) == 0);
    int files = 0;
    for (const auto& e : fs::directory_iterator(d1)) {
      ++files;
      const auto other = fs::path(d2) / e.path().filename();
      REQUIRE(fs::exists(other));
      CHECK(slurp(e.path().string()) == slurp(other.string()));
    }
    CHECK(files == 3);
  }
}

TEST_CASE("exit codes", "[cli]")
{
  TempDir tmp;
  SECTION("missing file is a usage error")
  {
    CHECK(run("solve --map empty --scen /nonexistent.scen") == 1);
    CHECK(run("validate --map /nonexistent.map --scen x --plan y") == 1);
  }
  SECTION("bad arguments")
  {
    CHECK(run("solve --map empty") == 1);        // missing --scen
    CHECK(run("frobnicate") == 1);               // unknown subcommand
  }
  SECTION("deadlock fixture without lock release exits 2")
  {
    const std::string map = tmp.file("d.map", ctspll::fixtures::kDeadlockMap);
    const std::string scen =
        tmp.file("d.scen", ctspll::fixtures::kDeadlockScenario);
    CHECK(run("solve --map " + map + " --scen " + scen +
              " --variant v1 --no-lock-release --time-limit 5 --seed 1") == 2);
    CHECK(run("solve --map " + map + " --scen " + scen +
              " --variant v1 --time-limit 5 --seed 1") == 0);
  }
}

TEST_CASE("bench subcommand", "[cli]")
{
  TempDir tmp;
  const std::string grid = tmp.file(
      "g.grid",
      "maps = empty\nagents = 3\ntasks = 3\ninstances = 2\n"
      "variants = v1\ntime_limit = 10\nseed = 3\n");
  const std::string csv = tmp.sub("out.csv");
  REQUIRE(run("bench --grid " + grid + " --workers 2 --out " + csv) == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("# ctspll bench csv v1", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header x2 + rows
}
