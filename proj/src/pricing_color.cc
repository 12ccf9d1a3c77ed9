#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "filterless/pricing.h"

namespace filterless {
namespace {

using milp::RowSense;

PricingResult PriceColor(const ConflictState& state, const Duals& duals,
                         const SolverConfig& cfg, double time_limit_s,
                         const std::string& dump_path, bool forbid) {
  milp::LinearModel model = BuildColorPricing(duals, state, forbid);
  if (!dump_path.empty()) {
    std::ofstream out(dump_path);
    model.WriteLp(out);
  }
  milp::IlpOptions options;
  options.time_limit_seconds = time_limit_s;
  options.cutoff = -cfg.rc_tolerance;
  milp::IlpSolution ilp = milp::SolveIlp(model, {}, options);

  PricingResult result;
  result.nodes = ilp.nodes;
  result.proven = ilp.status != milp::SolveStatus::kLimit;
  if (ilp.primal.empty()) return result;
  result.objective = ilp.objective;

  const int K = static_cast<int>(duals.u6.size());
  WavelengthConfig column;
  for (int k = 0; k < K; ++k) {
    if (ilp.primal[k] > 0.5) column.members.push_back(k);
  }
  result.reduced_cost = ColorReducedCost(column, duals);
  if (std::abs(result.reduced_cost - result.objective) > 1e-6) {
    throw std::logic_error("wavelength column reduced cost mismatch");
  }
  if (result.objective >= -cfg.rc_tolerance) return result;

  if (cfg.maximalize_color_columns) {
    for (int k = 0; k < K; ++k) {
      if (std::binary_search(column.members.begin(), column.members.end(), k)) {
        continue;
      }
      double delta = -duals.u6[k];
      bool allowed = duals.u6[k] >= 0.0;
      for (int m : column.members) {
        delta -= duals.u5[PairIndex(k, m, K)];
        if (state.Get(k, m) > kConflictThreshold) allowed = false;
      }
      if (allowed && delta <= 0.0) {
        column.members.insert(
            std::upper_bound(column.members.begin(), column.members.end(), k),
            k);
      }
    }
    result.reduced_cost = ColorReducedCost(column, duals);
  }
  result.color = std::move(column);
  return result;
}

}  // namespace

ConflictState ComputeConflictState(const ColumnPool& pool,
                                   const std::vector<double>& fsn_values,
                                   int num_requests) {
  ConflictState state;
  state.num_requests = num_requests;
  state.value.assign(PairCount(num_requests), 0.0);
  for (size_t c = 0; c < pool.fsn_columns().size(); ++c) {
    const double z = fsn_values[c];
    if (z == 0.0) continue;
    for (auto [k, k2] : pool.fsn_columns()[c].conflicts.pairs()) {
      state.value[PairIndex(k, k2, num_requests)] += z;
    }
  }
  return state;
}

milp::LinearModel BuildColorPricing(const Duals& duals,
                                    const ConflictState& state, bool forbid) {
  const int K = static_cast<int>(duals.u6.size());
  milp::LinearModel model;
  model.set_objective_offset(1.0);
  for (int k = 0; k < K; ++k) {
    model.AddBinary("beta_" + std::to_string(k), -duals.u6[k]);
  }
  milp::Constraint nonempty{"nonempty", {}, {}, RowSense::kGreaterEqual, 1.0};
  for (int k = 0; k < K; ++k) {
    nonempty.indices.push_back(k);
    nonempty.values.push_back(1.0);
  }
  model.AddConstraint(std::move(nonempty));
  for (int k = 0; k < K; ++k) {
    for (int k2 = k + 1; k2 < K; ++k2) {
      const std::string suffix = std::to_string(k) + "_" + std::to_string(k2);
      if (forbid && state.Get(k, k2) > kConflictThreshold) {
        model.AddConstraint("forbid_" + suffix, {k, k2}, {1.0, 1.0},
                            RowSense::kLessEqual, 1.0);
      }
      const double u5 = duals.u5[PairIndex(k, k2, K)];
      if (u5 == 0.0) continue;
      const int alpha = model.AddBinary("alpha_" + suffix, -u5);
      model.AddConstraint("alpha_le_" + std::to_string(k) + "_" + suffix,
                          {alpha, k}, {1.0, -1.0}, RowSense::kLessEqual, 0.0);
      model.AddConstraint("alpha_le_" + std::to_string(k2) + "_" + suffix,
                          {alpha, k2}, {1.0, -1.0}, RowSense::kLessEqual, 0.0);
      model.AddConstraint("alpha_ge_" + suffix, {k, k2, alpha},
                          {1.0, 1.0, -1.0}, RowSense::kLessEqual, 1.0);
    }
  }
  return model;
}

PricingResult PriceColorHeuristic(const ConflictState& state,
                                  const Duals& duals, const SolverConfig& cfg,
                                  double time_limit_s,
                                  const std::string& dump_path) {
  return PriceColor(state, duals, cfg, time_limit_s, dump_path, true);
}

PricingResult PriceColorExact(const ConflictState& state, const Duals& duals,
                              const SolverConfig& cfg, double time_limit_s,
                              const std::string& dump_path) {
  return PriceColor(state, duals, cfg, time_limit_s, dump_path, false);
}

}  // namespace filterless
