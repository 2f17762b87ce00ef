/*
 * command-line interface: solve, gen, validate, bench
 *
 * exit codes: 0 success, 1 usage or input error, 2 solve/validate failure
 */
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctspll/bench.hpp"
#include "ctspll/generator.hpp"
#include "ctspll/maps.hpp"
#include "ctspll/plan.hpp"
#include "ctspll/solver.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

// map argument: a builtin name (empty/random/room/maze) or a file path
ctspll::GridMap load_map(const std::string& arg)
{
  if (ctspll::is_builtin_map(arg)) return ctspll::builtin_map(arg);
  return ctspll::parse_map(read_file(arg));
}

json result_record(const ctspll::SolveResult& r, const std::string& variant)
{
  json j;
  j["variant"] = variant;
  j["success"] = r.success();
  j["flowtime"] = r.flowtime_value;
  j["makespan"] = r.makespan_value;
  j["sequences_tried"] = r.sequences_tried;
  j["lock_events"] = r.lock_events;
  j["lns_iterations"] = r.lns_iterations;
  j["wall_time_s"] = r.wall_time_s;
  j["first_feasible_flowtime"] = r.first_feasible_flowtime;
  j["first_feasible_rank"] = r.first_feasible_rank;
  j["timeline"] = json::array();
  for (const auto& [t, f] : r.timeline) j["timeline"].push_back({t, f});
  j["lock_log"] = json::array();
  for (const auto& ev : r.lock_log)
    j["lock_log"].push_back({{"t_hat", ev.t_hat},
                             {"splice", ev.splice},
                             {"lock_agents", ev.lock_agents},
                             {"attempts", ev.attempts},
                             {"used_fallback", ev.used_fallback},
                             {"anchored_at_stall", ev.anchored_at_stall},
                             {"recovered", ev.recovered}});
  return j;
}

struct SolveArgs {
  std::string map, scen, variant = "v3", out;
  double time_limit = 60.0;
  uint64_t seed = 0;
  long long lns_iters = 300;
  double lns_time = -1;
  int lock_attempts = 10;
  bool no_lock_release = false;
  bool trace = false;
};

int cmd_solve(const SolveArgs& args)
{
  const ctspll::GridGraph graph(load_map(args.map));
  const ctspll::Scenario scen =
      ctspll::parse_scenario(read_file(args.scen), graph);

  ctspll::SolverConfig config;
  config.variant = args.variant == "v1"   ? ctspll::Variant::v1
                   : args.variant == "v2" ? ctspll::Variant::v2
                                          : ctspll::Variant::v3;
  config.time_limit_s = args.time_limit;
  config.seed = args.seed;
  config.lock_attempt_limit = args.lock_attempts;
  config.lock_release = !args.no_lock_release;
  if (args.lns_time > 0)
    config.lns.seconds = args.lns_time;
  else
    config.lns.iterations = args.lns_iters;

  const ctspll::SolveResult result = ctspll::solve(scen, graph, config);
  std::cout << result_record(result, args.variant).dump(2) << std::endl;
  if (!result.success()) return 2;

  const std::string trace_text =
      ctspll::serialize_plan(*result.best, graph.map);
  if (!args.out.empty()) {
    write_file(args.out, trace_text);
    write_file(args.out + ".json", result_record(result, args.variant).dump(2));
  }
  if (args.trace) std::cerr << trace_text;
  return 0;
}

struct GenArgs {
  std::string map, out_dir = ".";
  int agents = 1, tasks = 0, count = 1;
  uint64_t seed = 0;
};

int cmd_gen(const GenArgs& args)
{
  const ctspll::GridGraph graph(load_map(args.map));
  std::filesystem::create_directories(args.out_dir);
  for (int i = 0; i < args.count; ++i) {
    const uint64_t seed = ctspll::derive_seed(args.seed, "gen-file", i);
    const ctspll::Scenario scen =
        ctspll::generate_instance(graph, args.agents, args.tasks, seed);
    write_file(args.out_dir + "/s" + std::to_string(seed) + ".scen",
               ctspll::serialize_scenario(scen, graph.map));
  }
  std::cout << "wrote " << args.count << " scenarios to " << args.out_dir
            << std::endl;
  return 0;
}

struct ValidateArgs {
  std::string map, scen, plan;
};

int cmd_validate(const ValidateArgs& args)
{
  const ctspll::GridGraph graph(load_map(args.map));
  const ctspll::Scenario scen =
      ctspll::parse_scenario(read_file(args.scen), graph);
  const ctspll::JointPlan plan =
      ctspll::parse_plan(read_file(args.plan), graph.map);
  const auto violations = ctspll::validate(plan, scen, graph);
  if (violations.empty()) {
    std::cout << "valid: flowtime " << ctspll::flowtime(plan) << " makespan "
              << ctspll::makespan(plan) << std::endl;
    return 0;
  }
  for (const auto& v : violations) std::cout << "violation: " << v << "\n";
  return 2;
}

struct BenchArgs {
  std::string grid, out;
  int workers = 1;
};

int cmd_bench(const BenchArgs& args)
{
  const ctspll::BenchGrid grid = ctspll::parse_grid(read_file(args.grid));
  const auto rows = ctspll::run_bench(grid, args.workers, &std::cerr);
  std::ostringstream csv;
  csv << ctspll::kBenchCsvHeader;
  for (const auto& r : rows) csv << ctspll::csv_line(r) << "\n";
  if (args.out.empty())
    std::cout << csv.str();
  else
    write_file(args.out, csv.str());
  ctspll::print_aggregates(ctspll::aggregate(rows), std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"CTS-MAPF solver and benchmark harness"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("--map", solve_args.map, "map file or builtin name")
      ->required();
  solve->add_option("--scen", solve_args.scen, "scenario file")->required();
  solve->add_option("--variant", solve_args.variant, "v1 | v2 | v3")
      ->check(CLI::IsMember({"v1", "v2", "v3"}));
  solve->add_option("--time-limit", solve_args.time_limit, "seconds");
  solve->add_option("--seed", solve_args.seed, "solver seed");
  solve->add_option("--lns-iters", solve_args.lns_iters,
                    "LNS iterations per sequence (v3)");
  solve->add_option("--lns-time", solve_args.lns_time,
                    "LNS seconds per sequence (v3)");
  solve->add_option("--lock-attempts", solve_args.lock_attempts,
                    "permutation retries per lock release");
  solve->add_flag("--no-lock-release", solve_args.no_lock_release,
                  "disable lock release (plain stepping baseline)");
  solve->add_flag("--trace", solve_args.trace, "print the trace to stderr");
  solve->add_option("--out", solve_args.out, "write the plan trace here");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate scenario files");
  gen->add_option("--map", gen_args.map, "map file or builtin name")
      ->required();
  gen->add_option("--agents", gen_args.agents, "agent count")->required();
  gen->add_option("--tasks", gen_args.tasks, "task count")->required();
  gen->add_option("--count", gen_args.count, "number of instances");
  gen->add_option("--seed", gen_args.seed, "root seed");
  gen->add_option("--out", gen_args.out_dir, "output directory");

  ValidateArgs validate_args;
  auto* val = app.add_subcommand("validate", "validate a plan trace");
  val->add_option("--map", validate_args.map, "map file or builtin name")
      ->required();
  val->add_option("--scen", validate_args.scen, "scenario file")->required();
  val->add_option("--plan", validate_args.plan, "plan trace file")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "run a benchmark grid");
  bench->add_option("--grid", bench_args.grid, "grid config file")->required();
  bench->add_option("--workers", bench_args.workers, "worker threads");
  bench->add_option("--out", bench_args.out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_args);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (val->parsed()) return cmd_validate(validate_args);
    if (bench->parsed()) return cmd_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
