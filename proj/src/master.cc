#include "filterless/master.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace filterless {

bool ColumnPool::AddFsn(FsnConfig column) {
  for (const FsnConfig& existing : fsn_) {
    if (existing.links == column.links && existing.served == column.served &&
        existing.conflicts == column.conflicts) {
      return false;
    }
  }
  fsn_.push_back(std::move(column));
  return true;
}

bool ColumnPool::AddColor(WavelengthConfig column) {
  if (column.members.empty()) {
    throw std::invalid_argument("empty wavelength column");
  }
  std::sort(column.members.begin(), column.members.end());
  column.members.erase(
      std::unique(column.members.begin(), column.members.end()),
      column.members.end());
  if (std::find(color_.begin(), color_.end(), column) != color_.end()) {
    return false;
  }
  color_.push_back(std::move(column));
  return true;
}

int PairCount(int num_requests) {
  return num_requests * (num_requests - 1) / 2;
}

int PairIndex(int k, int k2, int num_requests) {
  if (k > k2) std::swap(k, k2);
  // Pairs (0,1) (0,2) ... (0,K-1) (1,2) ...
  return k * num_requests - k * (k + 1) / 2 + (k2 - k - 1);
}

double FsnReducedCost(const FsnConfig& column, const Duals& duals) {
  const int num_requests = static_cast<int>(duals.u2.size());
  double rc = -duals.u4;
  for (int k : column.served) rc -= duals.u2[k];
  for (int l : column.links) rc -= duals.u3[l];
  for (auto [k, k2] : column.conflicts.pairs()) {
    rc -= duals.u5[PairIndex(k, k2, num_requests)];
  }
  return rc;
}

double ColorReducedCost(const WavelengthConfig& column, const Duals& duals) {
  const int num_requests = static_cast<int>(duals.u6.size());
  double rc = 1.0;
  for (size_t i = 0; i < column.members.size(); ++i) {
    rc -= duals.u6[column.members[i]];
    for (size_t j = i + 1; j < column.members.size(); ++j) {
      rc -= duals.u5[PairIndex(column.members[i], column.members[j],
                               num_requests)];
    }
  }
  return rc;
}

namespace {

// `artificial` non-null selects the feasibility objective.
Rmp BuildMaster(const ColumnPool& pool, const Network& net,
                const std::vector<Request>& requests, const SolverConfig& cfg,
                bool integer, const std::vector<int>* artificial) {
  const int num_requests = static_cast<int>(requests.size());
  std::vector<char> routed(num_requests, 0);
  std::vector<char> colored(num_requests, 0);
  for (const FsnConfig& column : pool.fsn_columns()) {
    for (int k : column.served) routed[k] = 1;
  }
  for (const WavelengthConfig& column : pool.color_columns()) {
    for (int k : column.members) colored[k] = 1;
  }
  for (int k = 0; k < num_requests; ++k) {
    const bool covered =
        artificial && std::find(artificial->begin(), artificial->end(), k) !=
                          artificial->end();
    if (!routed[k] && !covered) {
      throw InfeasibleMaster("request " + std::to_string(k) +
                             " is not served by any FSN column");
    }
    if (!colored[k]) {
      throw InfeasibleMaster("request " + std::to_string(k) +
                             " is not covered by any wavelength column");
    }
  }

  Rmp rmp;
  rmp.num_requests = num_requests;
  rmp.num_links = net.num_links();
  rmp.num_fsn_columns = static_cast<int>(pool.fsn_columns().size());
  rmp.num_color_columns = static_cast<int>(pool.color_columns().size());
  milp::LinearModel& model = rmp.model;
  const double upper = integer ? 1.0 : milp::kInfinity;
  for (int c = 0; c < rmp.num_fsn_columns; ++c) {
    model.AddVariable("z" + std::to_string(c), 0.0, upper, 0.0, integer);
  }
  for (int c = 0; c < rmp.num_color_columns; ++c) {
    model.AddVariable("x" + std::to_string(c), 0.0, upper,
                      artificial ? 0.0 : 1.0, integer);
  }
  if (artificial) {
    rmp.artificial = *artificial;
    for (int k : rmp.artificial) {
      model.AddVariable("s" + std::to_string(k), 0.0, upper, 1.0, integer);
    }
  }

  const int num_pairs = PairCount(num_requests);
  std::vector<milp::Constraint> route_rows(num_requests);
  std::vector<milp::Constraint> link_rows(net.num_links());
  milp::Constraint count_row;
  std::vector<milp::Constraint> pair_rows(num_pairs);
  std::vector<milp::Constraint> color_rows(num_requests);
  for (size_t i = 0; i < rmp.artificial.size(); ++i) {
    route_rows[rmp.artificial[i]].indices.push_back(
        rmp.num_fsn_columns + rmp.num_color_columns + static_cast<int>(i));
    route_rows[rmp.artificial[i]].values.push_back(1.0);
  }
  for (int c = 0; c < rmp.num_fsn_columns; ++c) {
    const FsnConfig& column = pool.fsn_columns()[c];
    const int var = rmp.fsn_var(c);
    for (int k : column.served) {
      route_rows[k].indices.push_back(var);
      route_rows[k].values.push_back(1.0);
    }
    for (int l : column.links) {
      link_rows[l].indices.push_back(var);
      link_rows[l].values.push_back(1.0);
    }
    count_row.indices.push_back(var);
    count_row.values.push_back(1.0);
    for (auto [k, k2] : column.conflicts.pairs()) {
      milp::Constraint& row = pair_rows[PairIndex(k, k2, num_requests)];
      row.indices.push_back(var);
      row.values.push_back(1.0);
    }
  }
  for (int c = 0; c < rmp.num_color_columns; ++c) {
    const std::vector<int>& members = pool.color_columns()[c].members;
    const int var = rmp.color_var(c);
    for (size_t i = 0; i < members.size(); ++i) {
      color_rows[members[i]].indices.push_back(var);
      color_rows[members[i]].values.push_back(1.0);
      for (size_t j = i + 1; j < members.size(); ++j) {
        milp::Constraint& row =
            pair_rows[PairIndex(members[i], members[j], num_requests)];
        row.indices.push_back(var);
        row.values.push_back(1.0);
      }
    }
  }

  for (int k = 0; k < num_requests; ++k) {
    route_rows[k].name = "route_" + std::to_string(k);
    route_rows[k].sense = milp::RowSense::kGreaterEqual;
    route_rows[k].rhs = 1.0;
    model.AddConstraint(std::move(route_rows[k]));
  }
  for (int l = 0; l < net.num_links(); ++l) {
    link_rows[l].name = "link_" + std::to_string(l);
    link_rows[l].sense = milp::RowSense::kLessEqual;
    link_rows[l].rhs = 1.0;
    model.AddConstraint(std::move(link_rows[l]));
  }
  count_row.name = "fsn_count";
  count_row.sense = milp::RowSense::kLessEqual;
  // Without a limit the row is kept but can never bind: disjoint FSNs that
  // serve anything use at least one link each.
  count_row.rhs = cfg.max_fsn ? *cfg.max_fsn : std::max(1, net.num_links());
  model.AddConstraint(std::move(count_row));
  for (int k = 0; k < num_requests; ++k) {
    for (int k2 = k + 1; k2 < num_requests; ++k2) {
      const int p = PairIndex(k, k2, num_requests);
      pair_rows[p].name = "pair_" + std::to_string(k) + "_" + std::to_string(k2);
      pair_rows[p].sense = milp::RowSense::kLessEqual;
      pair_rows[p].rhs = 1.0;
      model.AddConstraint(std::move(pair_rows[p]));
    }
  }
  for (int k = 0; k < num_requests; ++k) {
    color_rows[k].name = "color_" + std::to_string(k);
    color_rows[k].sense = milp::RowSense::kGreaterEqual;
    color_rows[k].rhs = 1.0;
    model.AddConstraint(std::move(color_rows[k]));
  }
  return rmp;
}

}  // namespace

Rmp BuildRmp(const ColumnPool& pool, const Network& net,
             const std::vector<Request>& requests, const SolverConfig& cfg,
             bool integer) {
  return BuildMaster(pool, net, requests, cfg, integer, nullptr);
}

Rmp BuildFeasibilityRmp(const ColumnPool& pool, const Network& net,
                        const std::vector<Request>& requests,
                        const SolverConfig& cfg,
                        const std::vector<int>& artificial) {
  return BuildMaster(pool, net, requests, cfg, false, &artificial);
}

Duals ExtractDuals(const Rmp& rmp, const milp::LpSolution& solution) {
  if (solution.status != milp::SolveStatus::kOptimal) {
    throw std::invalid_argument(std::string("master LP not optimal: ") +
                                milp::ToString(solution.status));
  }
  const std::vector<double>& y = solution.duals;
  Duals duals;
  const int num_pairs = PairCount(rmp.num_requests);
  duals.u2.resize(rmp.num_requests);
  duals.u6.resize(rmp.num_requests);
  duals.u3.resize(rmp.num_links);
  duals.u5.resize(num_pairs);
  for (int k = 0; k < rmp.num_requests; ++k) {
    duals.u2[k] = std::max(0.0, y[rmp.route_row(k)]);
    duals.u6[k] = std::max(0.0, y[rmp.color_row(k)]);
  }
  for (int l = 0; l < rmp.num_links; ++l) {
    duals.u3[l] = std::min(0.0, y[rmp.link_row(l)]);
  }
  duals.u4 = std::min(0.0, y[rmp.count_row()]);
  for (int p = 0; p < num_pairs; ++p) {
    duals.u5[p] = std::min(0.0, y[rmp.pair_row(p)]);
  }
  return duals;
}

double Epsilon(int W, double z_lp) {
  if (z_lp <= 0.0) return W == 0 ? 0.0 : milp::kInfinity;
  // Absorbs LP round-off when the bound is attained.
  if (std::abs(W - z_lp) <= 1e-9 * z_lp) return 0.0;
  return (W - z_lp) / z_lp;
}

DesignSolution Finalize(const ColumnPool& pool, const Network& net,
                        const std::vector<Request>& requests,
                        const SolverConfig& cfg, double z_lp,
                        double time_limit_s, const std::vector<int>& start_fsn,
                        const std::vector<int>& start_colors) {
  Rmp rmp = BuildRmp(pool, net, requests, cfg, /*integer=*/true);
  milp::IlpOptions options;
  options.time_limit_seconds = time_limit_s;
  if (!start_fsn.empty() || !start_colors.empty()) {
    options.start.assign(rmp.model.num_variables(), 0.0);
    for (int c : start_fsn) options.start[rmp.fsn_var(c)] = 1.0;
    for (int c : start_colors) options.start[rmp.color_var(c)] = 1.0;
  }
  milp::IlpSolution ilp = milp::SolveIlp(rmp.model, {}, options);
  if (ilp.primal.empty()) {
    throw InfeasibleMaster(
        std::string("integer master over the column pool: ") +
        milp::ToString(ilp.status) +
        (ilp.diagnostics.empty() ? "" : " (" + ilp.diagnostics + ")"));
  }

  const int num_requests = static_cast<int>(requests.size());
  DesignSolution design;
  design.integer_optimal = ilp.status == milp::SolveStatus::kOptimal;
  design.z_lp = z_lp;

  // One serving FSN per request: the lowest selected column index.
  std::vector<int> serving_column(num_requests, -1);
  for (int c = 0; c < rmp.num_fsn_columns; ++c) {
    if (ilp.primal[rmp.fsn_var(c)] < 0.5) continue;
    for (int k : pool.fsn_columns()[c].served) {
      if (serving_column[k] < 0) serving_column[k] = c;
    }
  }
  std::vector<int> color_column(num_requests, -1);
  for (int c = 0; c < rmp.num_color_columns; ++c) {
    if (ilp.primal[rmp.color_var(c)] < 0.5) continue;
    for (int k : pool.color_columns()[c].members) {
      if (color_column[k] < 0) color_column[k] = c;
    }
  }

  design.serving_fsn.assign(num_requests, -1);
  for (int c = 0; c < rmp.num_fsn_columns; ++c) {
    const FsnConfig& column = pool.fsn_columns()[c];
    FsnConfig reduced;
    reduced.tree_edges = column.tree_edges;
    reduced.nodes = column.nodes;
    std::set<int> carried;
    for (int k : column.served) {
      if (serving_column[k] != c) continue;
      reduced.served.push_back(k);
      reduced.routes[k] = column.routes.at(k);
      reduced.propagation[k] = column.propagation.at(k);
      carried.insert(column.propagation.at(k).begin(),
                     column.propagation.at(k).end());
    }
    if (reduced.served.empty()) continue;
    reduced.links.assign(carried.begin(), carried.end());
    reduced.conflicts = DetectConflicts(reduced);
    for (int k : reduced.served) {
      design.serving_fsn[k] = static_cast<int>(design.selected_fsns.size());
    }
    design.selected_fsns.push_back(std::move(reduced));
    design.fsn_columns.push_back(c);
  }

  std::vector<int> color_index(rmp.num_color_columns, -1);
  design.wavelength.assign(num_requests, -1);
  for (int c = 0; c < rmp.num_color_columns; ++c) {
    for (int k = 0; k < num_requests; ++k) {
      if (color_column[k] == c && color_index[c] < 0) {
        color_index[c] = static_cast<int>(design.color_columns.size());
        design.color_columns.push_back(c);
      }
    }
  }
  for (int k = 0; k < num_requests; ++k) {
    if (serving_column[k] < 0 || color_column[k] < 0) {
      throw InfeasibleMaster("integer master left request " +
                             std::to_string(k) + " unserved");
    }
    design.wavelength[k] = color_index[color_column[k]];
  }
  design.W = static_cast<int>(design.color_columns.size());
  design.epsilon = Epsilon(design.W, z_lp);
  design.loads = LinkLoads(net, design.selected_fsns, design.wavelength);
  return design;
}

}  // namespace filterless
