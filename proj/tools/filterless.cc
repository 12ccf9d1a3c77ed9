// Command-line front end: solve, validate, oracle, bench.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "filterless/master.h"
#include "filterless/oracle.h"
#include "filterless/orchestrator.h"
#include "filterless/solution_io.h"
#include "filterless/topology.h"

namespace fs = std::filesystem;
using namespace filterless;

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kInfeasible = 2, kLimit = 3 };

constexpr const char* kTimeLimitEnv = "FILTERLESS_TIME_LIMIT";

struct SolveArgs {
  std::string topology;
  std::string demands;
  int max_fsn = 0;  // 0: unbounded.
  double reach_km = 1500.0;
  int max_iters = 500;
  double time_limit_s = 3600.0;
  int seed = 0;
  std::string out;
  std::string dot;
  std::string dump_models;
  bool quiet = false;
};

SolverConfig ConfigFrom(const SolveArgs& a) {
  SolverConfig cfg;
  if (a.max_fsn > 0) cfg.max_fsn = a.max_fsn;
  cfg.reach_km = a.reach_km;
  cfg.max_cg_iterations = a.max_iters;
  cfg.time_limit_s = a.time_limit_s;
  cfg.seed = a.seed;
  cfg.dump_models_dir = a.dump_models;
  return cfg;
}

std::string FormatEpsilon(double epsilon) {
  if (!std::isfinite(epsilon)) return "inf";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", epsilon);
  return buffer;
}

int ExitFor(const RunResult& r) {
  return r.log.certified && r.design.integer_optimal ? kOk : kLimit;
}

int Solve(const SolveArgs& a) {
  const Network net = LoadTopologyFile(a.topology);
  const std::vector<Request> requests = LoadDemandFile(a.demands, net);
  const SolverConfig cfg = ConfigFrom(a);
  if (!cfg.dump_models_dir.empty()) fs::create_directories(cfg.dump_models_dir);
  RunResult result;
  try {
    result = Run(net, requests, cfg, a.quiet ? nullptr : &std::cerr);
  } catch (const InfeasibleMaster& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const NoDesignWithinLimits& e) {
    std::cerr << "no design: " << e.what() << "\n";
    return kLimit;
  }
  const SolutionDocument doc = MakeSolutionDocument(requests, cfg, result);
  if (a.out.empty() || a.out == "-") {
    WriteSolution(doc, net, std::cout);
  } else {
    std::ofstream out(a.out);
    WriteSolution(doc, net, out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
  }
  if (!a.dot.empty()) {
    std::ofstream dot(a.dot);
    WriteDot(result.design, net, dot);
    if (!dot) throw std::runtime_error("cannot write " + a.dot);
  }
  const DesignSolution& d = result.design;
  std::cerr << "W " << d.W << "  z_lp " << d.z_lp << "  epsilon "
            << FormatEpsilon(d.epsilon) << "  fsns " << d.selected_fsns.size()
            << "  max load " << d.loads.max_filtered << '/'
            << d.loads.max_total << "  " << ToString(result.log.termination)
            << (ExitFor(result) == kOk ? "" : "  (not certified)") << "\n";
  return ExitFor(result);
}

int Validate(const std::string& solution_path, const std::string& topology) {
  const Network net = LoadTopologyFile(topology);
  std::ifstream in(solution_path);
  if (!in) throw std::runtime_error("cannot read " + solution_path);
  const SolutionDocument doc = ReadSolution(in, net);
  const std::vector<std::string> issues = ValidateSolution(doc, net);
  for (const std::string& issue : issues) std::cout << issue << "\n";
  if (!issues.empty()) return kInvalid;
  std::cout << "valid: W " << doc.design.W << ", "
            << doc.design.selected_fsns.size() << " sub-network(s), "
            << doc.requests.size() << " request(s)\n";
  return kOk;
}

int Oracle(const std::string& topology, const std::string& demands, int max_fsn,
           double reach_km) {
  const Network net = LoadTopologyFile(topology);
  const std::vector<Request> requests = LoadDemandFile(demands, net);
  SolverConfig cfg;
  cfg.max_fsn = max_fsn;
  cfg.reach_km = reach_km;
  const std::optional<int> optimum = OracleOptimum(net, requests, cfg);
  if (!optimum) {
    std::cout << "infeasible\n";
    return kInfeasible;
  }
  std::cout << "W* = " << *optimum << "\n";
  return kOk;
}

struct BenchRow {
  std::string name;
  std::string cells;
  int code = kOk;
};

BenchRow BenchOne(const fs::path& topology, const fs::path& demands,
                  SolveArgs args) {
  BenchRow row;
  row.name = topology.stem().string();
  char line[256];
  try {
    const Network net = LoadTopologyFile(topology.string());
    const std::vector<Request> requests =
        LoadDemandFile(demands.string(), net);
    const SolverConfig cfg = ConfigFrom(args);
    const auto start = std::chrono::steady_clock::now();
    RunResult r;
    try {
      r = Run(net, requests, cfg);
    } catch (const InfeasibleMaster&) {
      std::snprintf(line, sizeof(line), "%4d %4d %5zu  %s", net.num_nodes(),
                    net.num_edges(), requests.size(), "infeasible");
      row.cells = line;
      row.code = kInfeasible;
      return row;
    } catch (const NoDesignWithinLimits&) {
      std::snprintf(line, sizeof(line), "%4d %4d %5zu  %s", net.num_nodes(),
                    net.num_edges(), requests.size(), "no design within limits");
      row.cells = line;
      row.code = kLimit;
      return row;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const DesignSolution& d = r.design;
    row.code = ExitFor(r);
    std::snprintf(line, sizeof(line),
                  "%4d %4d %5zu %10.3f %5d %8s %4zu %6d %6d %9.2f  %s",
                  net.num_nodes(), net.num_edges(), requests.size(), d.z_lp,
                  d.W, FormatEpsilon(d.epsilon).c_str(), d.selected_fsns.size(),
                  d.loads.max_filtered, d.loads.max_total, seconds,
                  row.code == kOk ? "certified" : ToString(r.log.termination));
    row.cells = line;
  } catch (const std::exception& e) {
    row.cells = std::string("error: ") + e.what();
    row.code = kInvalid;
  }
  return row;
}

int Bench(const std::string& dir, const SolveArgs& args, int jobs) {
  std::vector<std::pair<fs::path, fs::path>> instances;
  std::vector<fs::path> tops;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".top") tops.push_back(entry.path());
  }
  std::sort(tops.begin(), tops.end());
  for (const fs::path& top : tops) {
    fs::path dem = top;
    dem.replace_extension(".dem");
    if (!fs::exists(dem)) dem = fs::path(dir) / "uniform.dem";
    if (!fs::exists(dem)) {
      std::cerr << "skipping " << top.filename().string()
                << ": no matching .dem and no uniform.dem\n";
      continue;
    }
    instances.push_back({top, dem});
  }
  if (instances.empty()) throw std::runtime_error("no instances in " + dir);

  std::printf("%-16s %4s %4s %5s %10s %5s %8s %4s %6s %6s %9s  %s\n",
              "instance", "|V|", "|E|", "|K|", "z*_LP", "W", "epsilon",
              "FSNs", "maxF", "maxU", "time_s", "status");
  std::vector<BenchRow> rows;
  size_t next = 0;
  while (next < instances.size()) {
    std::vector<std::future<BenchRow>> batch;
    for (int j = 0; j < jobs && next < instances.size(); ++j, ++next) {
      batch.push_back(std::async(std::launch::async, BenchOne,
                                 instances[next].first, instances[next].second,
                                 args));
    }
    for (auto& f : batch) {
      const BenchRow row = f.get();
      std::printf("%-16s %s\n", row.name.c_str(), row.cells.c_str());
      std::fflush(stdout);
      rows.push_back(row);
    }
  }
  int code = kOk;
  for (const BenchRow& row : rows) code = std::max(code, row.code);
  return code;
}

void AddSolverOptions(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("--max-fsn", a.max_fsn,
                  "Maximum number of sub-networks (0 = unbounded)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--reach-km", a.reach_km, "Optical reach in km")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iters", a.max_iters, "Column generation iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--time-limit", a.time_limit_s, "Time limit in seconds")
      ->check(CLI::PositiveNumber)
      ->envname(kTimeLimitEnv)
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact column-generation design of filterless optical networks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Design a network");
  solve_cmd->add_option("topology", solve.topology, "Topology file")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("demands", solve.demands, "Demand file")
      ->required()
      ->check(CLI::ExistingFile);
  AddSolverOptions(solve_cmd, solve);
  solve_cmd->add_option("--out", solve.out, "Solution file (default: stdout)");
  solve_cmd->add_option("--dot", solve.dot, "Graphviz export of the design");
  solve_cmd->add_option("--dump-models", solve.dump_models,
                        "Directory for every LP/ILP model solved");
  solve_cmd->add_flag("--quiet", solve.quiet, "No progress output");

  std::string solution_path, validate_topology;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a solution file");
  validate_cmd->add_option("solution", solution_path, "Solution file")
      ->required()
      ->check(CLI::ExistingFile);
  validate_cmd->add_option("topology", validate_topology, "Topology file")
      ->required()
      ->check(CLI::ExistingFile);

  std::string oracle_topology, oracle_demands;
  int oracle_fsn = 1;
  double oracle_reach = 1500.0;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Exhaustive optimum for tiny instances");
  oracle_cmd->add_option("topology", oracle_topology, "Topology file")
      ->required()
      ->check(CLI::ExistingFile);
  oracle_cmd->add_option("demands", oracle_demands, "Demand file")
      ->required()
      ->check(CLI::ExistingFile);
  oracle_cmd->add_option("--max-fsn", oracle_fsn, "Maximum sub-networks")
      ->check(CLI::Range(1, kOracleMaxFsn))
      ->capture_default_str();
  oracle_cmd->add_option("--reach-km", oracle_reach, "Optical reach in km")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string bench_dir;
  SolveArgs bench;
  bench.max_fsn = 1;
  int jobs = 1;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Solve every <name>.top with <name>.dem or uniform.dem");
  bench_cmd->add_option("dir", bench_dir, "Instance directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  AddSolverOptions(bench_cmd, bench);
  bench_cmd->add_option("--jobs", jobs, "Instances solved concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (CLI::App* sub : app.get_subcommands()) failing = sub;
    std::cerr << failing->help();
    return kInvalid;
  }

  try {
    if (*solve_cmd) return Solve(solve);
    if (*validate_cmd) return Validate(solution_path, validate_topology);
    if (*oracle_cmd) {
      return Oracle(oracle_topology, oracle_demands, oracle_fsn, oracle_reach);
    }
    if (*bench_cmd) return Bench(bench_dir, bench, jobs);
  } catch (const SolutionFormatError& e) {
    std::cerr << "invalid solution file: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kInvalid;
}
