#include "filterless/orchestrator.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "filterless/pricing.h"

namespace filterless {
namespace {

class Clock {
 public:
  double Elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void DumpModel(const milp::LinearModel& model, const std::string& path) {
  std::ofstream out(path);
  model.WriteLp(out);
}

}  // namespace

std::vector<int> WelshPowell(int num_vertices,
                             const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adjacent(num_vertices);
  for (auto [a, b] : edges) {
    if (a == b) continue;
    adjacent[a].push_back(b);
    adjacent[b].push_back(a);
  }
  for (auto& list : adjacent) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  std::vector<int> order(num_vertices);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&adjacent](int a, int b) {
    return adjacent[a].size() > adjacent[b].size();
  });
  std::vector<int> color(num_vertices, -1);
  std::vector<char> used;
  for (int v : order) {
    used.assign(adjacent[v].size() + 1, 0);
    for (int w : adjacent[v]) {
      if (color[w] >= 0 && color[w] < static_cast<int>(used.size())) {
        used[color[w]] = 1;
      }
    }
    color[v] = static_cast<int>(std::find(used.begin(), used.end(), 0) -
                                used.begin());
  }
  return color;
}

std::vector<int> MinimumSpanningTree(const Network& net) {
  std::vector<int> order(net.num_edges());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&net](int e) {
    const Edge& edge = net.edge(e);
    return std::make_tuple(edge.length_km, std::min(edge.u, edge.v),
                           std::max(edge.u, edge.v));
  };
  std::sort(order.begin(), order.end(),
            [&key](int a, int b) { return key(a) < key(b); });
  std::vector<int> parent(net.num_nodes());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> tree;
  for (int e : order) {
    const int a = find(net.edge(e).u);
    const int b = find(net.edge(e).v);
    if (a == b) continue;
    parent[a] = b;
    tree.push_back(e);
  }
  if (net.num_nodes() == 0 ||
      static_cast<int>(tree.size()) != net.num_nodes() - 1) {
    throw std::invalid_argument("network is not connected");
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

InitialSolution BuildInitialSolution(const Network& net,
                                     const std::vector<Request>& requests,
                                     const SolverConfig& cfg) {
  InitialSolution initial;
  const std::vector<int> tree = MinimumSpanningTree(net);
  std::vector<int> links;
  for (int e : tree) {
    links.push_back(net.edge(e).forward_link());
    links.push_back(net.edge(e).backward_link());
  }
  const std::vector<char> mask = LinkMask(net, links);
  std::vector<int> served;
  for (const Request& request : requests) {
    std::optional<std::vector<int>> route =
        RouteInTree(net, mask, tree, request);
    if (route && RouteLength(net, *route) <= cfg.reach_km) {
      served.push_back(request.id);
    } else {
      initial.excluded.push_back(request.id);
    }
  }
  FsnConfig full = BuildFsnConfig(net, requests, tree, links, served);
  // Keep only links some flood uses.
  std::vector<char> carried(net.num_links(), 0);
  for (const auto& [k, flood] : full.propagation) {
    for (int l : flood) carried[l] = 1;
  }
  std::vector<int> used;
  for (int l : links) {
    if (carried[l]) used.push_back(l);
  }
  initial.fsn = BuildFsnConfig(net, requests, tree, used, served);

  std::vector<std::pair<int, int>> edges(initial.fsn.conflicts.pairs().begin(),
                                         initial.fsn.conflicts.pairs().end());
  const std::vector<int> color =
      WelshPowell(static_cast<int>(requests.size()), edges);
  const int num_colors =
      color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
  initial.colors.resize(num_colors);
  for (size_t k = 0; k < color.size(); ++k) {
    initial.colors[color[k]].members.push_back(static_cast<int>(k));
  }
  return initial;
}

const char* ToString(Termination termination) {
  switch (termination) {
    case Termination::kOptimal:
      return "optimal";
    case Termination::kIterationLimit:
      return "iteration limit";
    case Termination::kTimeLimit:
      return "time limit";
  }
  return "?";
}

RunResult Run(const Network& net, const std::vector<Request>& requests,
              const SolverConfig& cfg, std::ostream* progress) {
  cfg.Validate();
  if (requests.empty()) throw std::invalid_argument("no requests");
  const Clock clock;
  auto remaining = [&] {
    return std::max(0.0, cfg.time_limit_s - clock.Elapsed());
  };
  const bool dump = !cfg.dump_models_dir.empty();
  if (dump) std::filesystem::create_directories(cfg.dump_models_dir);
  auto dump_path = [&](const std::string& name, int iteration) {
    if (!dump) return std::string();
    return (std::filesystem::path(cfg.dump_models_dir) /
            (name + "_" + std::to_string(iteration) + ".lp"))
        .string();
  };

  RunResult result;
  CgLog& log = result.log;
  ColumnPool& pool = result.pool;
  InitialSolution initial = BuildInitialSolution(net, requests, cfg);
  for (int k : initial.excluded) {
    log.warnings.push_back("request " + std::to_string(k) +
                           " exceeds the reach on the spanning tree");
  }
  pool.AddFsn(initial.fsn);
  std::vector<int> start_colors;
  for (WavelengthConfig& column : initial.colors) {
    if (pool.AddColor(column)) {
      start_colors.push_back(static_cast<int>(pool.color_columns().size()) - 1);
    }
  }
  log.initial_fsn_columns = 1;
  log.initial_color_columns = static_cast<int>(pool.color_columns().size());

  // Requests left out of the initial FSN: first find columns that make the
  // master feasible, minimising their total cover. Singleton wavelength
  // columns keep the coloring side always completable, so only FSN columns
  // need pricing here.
  Duals duals;
  int iteration = 0;
  if (!initial.excluded.empty()) {
    for (int k = 0; k < static_cast<int>(requests.size()); ++k) {
      pool.AddColor(WavelengthConfig{{k}});
    }
    while (true) {
      Rmp rmp = BuildFeasibilityRmp(pool, net, requests, cfg, initial.excluded);
      if (dump) DumpModel(rmp.model, dump_path("rmp_feasibility", iteration));
      milp::LpSolution lp = milp::SolveLp(rmp.model);
      if (lp.status != milp::SolveStatus::kOptimal) {
        throw std::logic_error(std::string("feasibility master LP: ") +
                               milp::ToString(lp.status));
      }
      if (lp.objective <= 1e-9) break;
      if (iteration >= cfg.max_cg_iterations || remaining() <= 0.0) {
        throw NoDesignWithinLimits(
            "limits reached before a feasible master was found");
      }
      duals = ExtractDuals(rmp, lp);
      PricingResult fsn = PriceFsn(net, requests, duals, cfg, remaining(),
                                   dump_path("pp_fsn", iteration));
      CgIteration record;
      record.iteration = iteration;
      record.lp_value = lp.objective;
      record.pricer = "fsn";
      record.pricing_nodes = fsn.nodes;
      if (!fsn.fsn) {
        if (!fsn.proven) {
          throw NoDesignWithinLimits(
              "time limit reached before a feasible master was found");
        }
        std::string list;
        for (size_t i = 0; i < rmp.artificial.size(); ++i) {
          if (lp.primal[rmp.num_fsn_columns + rmp.num_color_columns + i] >
              1e-9) {
            list += " " + std::to_string(rmp.artificial[i]);
          }
        }
        throw InfeasibleMaster("no design serves request(s)" + list);
      }
      record.pricing_objective = fsn.objective;
      record.reduced_cost = FsnReducedCost(*fsn.fsn, duals);
      if (!pool.AddFsn(*fsn.fsn)) {
        throw std::logic_error("FSN pricing returned a pooled column");
      }
      record.column = static_cast<int>(pool.fsn_columns().size()) - 1;
      record.elapsed_s = clock.Elapsed();
      log.feasibility_iterations.push_back(record);
      if (progress) {
        char line[160];
        std::snprintf(line, sizeof(line),
                      "feas %4d  cover %9.6f  rc %12.6f  nodes %7ld  %8.2fs\n",
                      record.iteration, record.lp_value, record.reduced_cost,
                      record.pricing_nodes, record.elapsed_s);
        *progress << line << std::flush;
      }
      ++iteration;
    }
  }

  while (true) {
    Rmp rmp = BuildRmp(pool, net, requests, cfg, /*integer=*/false);
    if (dump) DumpModel(rmp.model, dump_path("rmp", iteration));
    milp::LpSolution lp = milp::SolveLp(rmp.model);
    if (lp.status != milp::SolveStatus::kOptimal) {
      throw InfeasibleMaster(std::string("master LP: ") +
                             milp::ToString(lp.status));
    }
    duals = ExtractDuals(rmp, lp);
    log.z_lp = lp.objective;

    CgIteration record;
    record.iteration = iteration;
    record.lp_value = lp.objective;
    record.pricer = "none";
    auto finish = [&](Termination termination) {
      record.elapsed_s = clock.Elapsed();
      log.iterations.push_back(record);
      log.termination = termination;
    };
    if (iteration >= cfg.max_cg_iterations) {
      finish(Termination::kIterationLimit);
      break;
    }
    if (remaining() <= 0.0) {
      finish(Termination::kTimeLimit);
      break;
    }

    bool proven = true;
    PricingResult fsn = PriceFsn(net, requests, duals, cfg, remaining(),
                                 dump_path("pp_fsn", iteration));
    proven = proven && fsn.proven;
    record.pricing_nodes += fsn.nodes;
    bool accepted = false;
    if (fsn.fsn) {
      record.pricer = "fsn";
      record.pricing_objective = fsn.objective;
      record.reduced_cost = FsnReducedCost(*fsn.fsn, duals);
      if (!pool.AddFsn(*fsn.fsn)) {
        throw std::logic_error("FSN pricing returned a pooled column");
      }
      record.column = static_cast<int>(pool.fsn_columns().size()) - 1;
      accepted = true;
    } else {
      std::vector<double> z(lp.primal.begin(),
                            lp.primal.begin() + rmp.num_fsn_columns);
      ConflictState state =
          ComputeConflictState(pool, z, static_cast<int>(requests.size()));
      PricingResult color = PriceColorHeuristic(
          state, duals, cfg, remaining(), dump_path("pp_color_h", iteration));
      proven = proven && color.proven;
      record.pricing_nodes += color.nodes;
      record.pricer = "color_heuristic";
      if (!color.color) {
        color = PriceColorExact(state, duals, cfg, remaining(),
                                dump_path("pp_color_e", iteration));
        proven = proven && color.proven;
        record.pricing_nodes += color.nodes;
        record.pricer = "color_exact";
      }
      if (color.color) {
        record.pricing_objective = color.objective;
        record.reduced_cost = ColorReducedCost(*color.color, duals);
        if (!pool.AddColor(*color.color)) {
          throw std::logic_error("wavelength pricing returned a pooled column");
        }
        record.column = static_cast<int>(pool.color_columns().size()) - 1;
        accepted = true;
      }
    }

    if (!accepted) {
      record.pricer = "none";
      finish(proven ? Termination::kOptimal : Termination::kTimeLimit);
      log.certified = proven;
      break;
    }
    record.elapsed_s = clock.Elapsed();
    log.iterations.push_back(record);
    if (progress) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "iter %4d  lp %12.6f  %-15s  rc %12.6f  nodes %7ld  %8.2fs\n",
                    record.iteration, record.lp_value, record.pricer.c_str(),
                    record.reduced_cost, record.pricing_nodes,
                    record.elapsed_s);
      *progress << line << std::flush;
    }
    ++iteration;
  }

  double min_rc = milp::kInfinity;
  for (const FsnConfig& column : pool.fsn_columns()) {
    min_rc = std::min(min_rc, FsnReducedCost(column, duals));
  }
  for (const WavelengthConfig& column : pool.color_columns()) {
    min_rc = std::min(min_rc, ColorReducedCost(column, duals));
  }
  log.min_pooled_reduced_cost = min_rc;
  if (progress) {
    *progress << "stop: " << ToString(log.termination) << "  z_lp "
              << log.z_lp << (log.certified ? "  certified" : "") << "\n";
  }

  if (dump) {
    DumpModel(BuildRmp(pool, net, requests, cfg, true).model,
              (std::filesystem::path(cfg.dump_models_dir) / "rmp_integer.lp")
                  .string());
  }
  // The integer master always gets some time: it starts from the initial
  // columns, which form a feasible design.
  const double ilp_time = std::max(remaining(), 0.05 * cfg.time_limit_s);
  std::vector<int> start_fsn;
  if (initial.excluded.empty()) start_fsn.push_back(0);
  result.design =
      Finalize(pool, net, requests, cfg, log.z_lp, ilp_time, start_fsn,
               initial.excluded.empty() ? start_colors : std::vector<int>{});
  log.elapsed_s = clock.Elapsed();
  if (progress) {
    *progress << "W " << result.design.W << "  epsilon "
              << result.design.epsilon << "\n";
  }
  return result;
}

}  // namespace filterless
