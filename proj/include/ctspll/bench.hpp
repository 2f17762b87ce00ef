/*
 * benchmark harness: deterministic instance grids, a bounded worker pool,
 * CSV rows and per-cell aggregates
 *
 * Per-row RNG streams derive from (root seed, map, N, M, instance index), so
 * results are identical for any worker count; wall-time columns are the only
 * nondeterministic output.
 */
#pragma once
#include <atomic>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "generator.hpp"
#include "maps.hpp"
#include "solver.hpp"

namespace ctspll {

struct BenchGrid {
  std::vector<std::string> maps;
  std::vector<int> agent_counts;
  std::vector<int> task_counts;
  int instances_per_cell = 1;
  std::vector<std::string> variants;  // v1 | v2 | v3 | plain | v3-nolns
  double time_limit_s = 60.0;
  long long lns_iterations = 300;
  int lock_attempt_limit = 10;
  uint64_t root_seed = 0;
};

inline bool known_variant_token(const std::string& v)
{
  return v == "v1" || v == "v2" || v == "v3" || v == "plain" ||
         v == "v3-nolns";
}

inline SolverConfig variant_config(const std::string& token,
                                   const BenchGrid& grid)
{
  SolverConfig c;
  c.time_limit_s = grid.time_limit_s;
  c.lock_attempt_limit = grid.lock_attempt_limit;
  c.lns.iterations = grid.lns_iterations;
  if (token == "plain") {
    c.variant = Variant::v1;
    c.lock_release = false;
  } else if (token == "v1") {
    c.variant = Variant::v1;
  } else if (token == "v2") {
    c.variant = Variant::v2;
  } else if (token == "v3-nolns") {
    c.variant = Variant::v3;
    c.lns.iterations = 0;
  } else if (token == "v3") {
    c.variant = Variant::v3;
  } else {
    throw ParseError("unknown variant '" + token + "'");
  }
  return c;
}

// plain `key = value` lines; `#` starts a comment
inline BenchGrid parse_grid(const std::string& text)
{
  BenchGrid grid;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto split_list = [](const std::string& v) {
    std::vector<std::string> out;
    std::istringstream ls(v);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      const auto a = tok.find_first_not_of(" \t");
      const auto b = tok.find_last_not_of(" \t");
      if (a != std::string::npos) out.push_back(tok.substr(a, b - a + 1));
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ParseError("grid line " + std::to_string(lineno) +
                         ": expected 'key = value'");
      continue;
    }
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(value);
    try {
      if (key == "maps")
        grid.maps = split_list(value);
      else if (key == "agents")
        for (const auto& t : split_list(value))
          grid.agent_counts.push_back(std::stoi(t));
      else if (key == "tasks")
        for (const auto& t : split_list(value))
          grid.task_counts.push_back(std::stoi(t));
      else if (key == "instances")
        grid.instances_per_cell = std::stoi(value);
      else if (key == "variants")
        grid.variants = split_list(value);
      else if (key == "time_limit")
        grid.time_limit_s = std::stod(value);
      else if (key == "lns_iters")
        grid.lns_iterations = std::stoll(value);
      else if (key == "lock_attempts")
        grid.lock_attempt_limit = std::stoi(value);
      else if (key == "seed")
        grid.root_seed = std::stoull(value);
      else
        throw ParseError("grid line " + std::to_string(lineno) +
                         ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ParseError("grid line " + std::to_string(lineno) +
                       ": bad value for '" + key + "'");
    }
  }
  if (grid.maps.empty() || grid.agent_counts.empty() ||
      grid.task_counts.empty() || grid.variants.empty())
    throw ParseError("grid config needs maps, agents, tasks and variants");
  if (grid.instances_per_cell < 1)
    throw ParseError("instances must be positive");
  for (const auto& v : grid.variants)
    if (!known_variant_token(v)) throw ParseError("unknown variant '" + v + "'");
  return grid;
}

struct BenchRow {
  std::string map;
  int n_agents = 0;
  int n_tasks = 0;
  int instance_idx = 0;
  uint64_t instance_seed = 0;
  std::string variant;
  bool success = false;
  double wall_s = 0;
  long long flowtime = -1;
  int makespan = -1;
  long long sequences_tried = 0;
  long long lock_events = 0;
  long long lns_iterations = 0;
};

inline uint64_t instance_seed_for(uint64_t root, const std::string& map, int n,
                                  int m, int idx)
{
  uint64_t s = derive_seed(root, "map");
  for (const char c : map) s = mix64(s ^ static_cast<unsigned char>(c));
  s = derive_seed(s, "cell", static_cast<uint64_t>(n) * 100000u + m);
  return derive_seed(s, "instance", static_cast<uint64_t>(idx));
}

constexpr const char* kBenchCsvHeader =
    "# ctspll bench csv v1\n"
    "map,agents,tasks,instance,seed,variant,success,wall_s,flowtime,makespan,"
    "sequences,lock_events,lns_iterations\n";

inline std::string csv_line(const BenchRow& r)
{
  std::ostringstream out;
  out << r.map << "," << r.n_agents << "," << r.n_tasks << ","
      << r.instance_idx << "," << r.instance_seed << "," << r.variant << ","
      << (r.success ? 1 : 0) << "," << r.wall_s << "," << r.flowtime << ","
      << r.makespan << "," << r.sequences_tried << "," << r.lock_events << ","
      << r.lns_iterations;
  return out.str();
}

// runs every (map, N, M, instance, variant) combination on `workers`
// threads; rows come back in a fixed order regardless of the worker count,
// and a worker failure is recorded as a failed row
inline std::vector<BenchRow> run_bench(const BenchGrid& grid, int workers,
                                       std::ostream* progress = nullptr)
{
  struct Job {
    std::string map;
    int n, m, idx;
    uint64_t seed;
    std::string variant;
  };
  std::vector<Job> jobs;
  for (const auto& map : grid.maps)
    for (const int n : grid.agent_counts)
      for (const int m : grid.task_counts)
        for (int i = 0; i < grid.instances_per_cell; ++i) {
          const uint64_t seed = instance_seed_for(grid.root_seed, map, n, m, i);
          for (const auto& variant : grid.variants)
            jobs.push_back({map, n, m, i, seed, variant});
        }

  std::vector<BenchRow> rows(jobs.size());
  std::atomic<size_t> cursor{0};
  std::atomic<long long> done{0};
  std::mutex progress_mu;

  auto worker = [&]() {
    while (true) {
      const size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      BenchRow row;
      row.map = job.map;
      row.n_agents = job.n;
      row.n_tasks = job.m;
      row.instance_idx = job.idx;
      row.instance_seed = job.seed;
      row.variant = job.variant;
      try {
        const GridGraph graph(builtin_map(job.map));
        const Scenario scen = generate_instance(graph, job.n, job.m, job.seed);
        SolverConfig config = variant_config(job.variant, grid);
        config.seed = derive_seed(job.seed, "solver");
        const SolveResult result = solve(scen, graph, config);
        row.success = result.success();
        row.wall_s = result.wall_time_s;
        row.flowtime = result.flowtime_value;
        row.makespan = result.makespan_value;
        row.sequences_tried = result.sequences_tried;
        row.lock_events = result.lock_events;
        row.lns_iterations = result.lns_iterations;
      } catch (const std::exception& e) {
        row.success = false;
        if (progress) {
          std::lock_guard<std::mutex> lk(progress_mu);
          *progress << "[bench] row error: " << e.what() << "\n";
        }
      }
      rows[i] = std::move(row);
      const long long k = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lk(progress_mu);
        *progress << "[bench] " << k << "/" << jobs.size() << " " << job.map
                  << " N=" << job.n << " M=" << job.m << " i=" << job.idx
                  << " " << job.variant
                  << (rows[i].success ? " ok ft=" + std::to_string(rows[i].flowtime)
                                      : " fail")
                  << std::endl;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < std::max(1, workers); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

struct BenchAggregate {
  std::string map;
  int n_agents = 0;
  int n_tasks = 0;
  std::string variant;
  int solved = 0;
  int total = 0;
  double mean_wall_s = 0;           // over solved rows
  double mean_flowtime = -1;        // over instances solved by all variants
  int common_solved = 0;
};

// per-cell success rates; mean flowtime only over instances every compared
// variant solved
inline std::vector<BenchAggregate> aggregate(const std::vector<BenchRow>& rows)
{
  std::map<std::tuple<std::string, int, int, std::string>,
           std::vector<const BenchRow*>>
      cells;
  std::map<std::tuple<std::string, int, int, int>, int> solved_variants;
  std::map<std::tuple<std::string, int, int>, std::set<std::string>> variants;
  for (const auto& r : rows) {
    cells[{r.map, r.n_agents, r.n_tasks, r.variant}].push_back(&r);
    variants[{r.map, r.n_agents, r.n_tasks}].insert(r.variant);
    if (r.success) ++solved_variants[{r.map, r.n_agents, r.n_tasks, r.instance_idx}];
  }
  std::vector<BenchAggregate> out;
  for (const auto& [key, cell_rows] : cells) {
    BenchAggregate a;
    a.map = std::get<0>(key);
    a.n_agents = std::get<1>(key);
    a.n_tasks = std::get<2>(key);
    a.variant = std::get<3>(key);
    const int num_variants = static_cast<int>(
        variants[{a.map, a.n_agents, a.n_tasks}].size());
    double wall = 0, flow = 0;
    for (const auto* r : cell_rows) {
      ++a.total;
      if (!r->success) continue;
      ++a.solved;
      wall += r->wall_s;
      if (solved_variants[{a.map, a.n_agents, a.n_tasks, r->instance_idx}] ==
          num_variants) {
        ++a.common_solved;
        flow += static_cast<double>(r->flowtime);
      }
    }
    if (a.solved > 0) a.mean_wall_s = wall / a.solved;
    if (a.common_solved > 0) a.mean_flowtime = flow / a.common_solved;
    out.push_back(a);
  }
  return out;
}

inline void print_aggregates(const std::vector<BenchAggregate>& aggs,
                             std::ostream& out)
{
  for (const auto& a : aggs) {
    out << "cell " << a.map << " N=" << a.n_agents << " M=" << a.n_tasks
        << " " << a.variant << ": success "
        << (100.0 * a.solved / std::max(1, a.total)) << "% (" << a.solved
        << "/" << a.total << ")";
    if (a.solved > 0) out << " mean_wall " << a.mean_wall_s << "s";
    if (a.common_solved > 0)
      out << " mean_flowtime " << a.mean_flowtime << " (over "
          << a.common_solved << " common)";
    out << "\n";
  }
}

}  // namespace ctspll
