#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterless/milp.h"
#include "lp_engine.h"

namespace filterless::milp {
namespace {

struct BoundChange {
  int var;
  double lower;
  double upper;
};

// An open node of the search tree. Bound changes are stored relative to the
// root, ordered root to leaf.
struct Node {
  double bound;
  int depth;
  long id;
  std::vector<BoundChange> changes;
};

// Best bound first, deeper nodes first among ties, then creation order.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

bool HasIntegralObjective(const LinearModel& model) {
  for (const Variable& v : model.variables()) {
    if (v.objective == 0.0) continue;
    if (!v.integer || v.objective != std::round(v.objective)) return false;
  }
  return true;
}

}  // namespace

LpSolution SolveLp(const LinearModel& model, const LpOptions& options) {
  model.Validate();
  LpSolution solution;
  internal::LpEngine engine(model);
  solution.status = engine.Solve(options.iteration_limit);
  solution.iterations = engine.iterations();
  solution.diagnostics = engine.diagnostics();
  if (solution.status == SolveStatus::kOptimal) {
    solution.primal = engine.Primal();
    solution.duals = engine.Duals();
    solution.objective = model.Evaluate(solution.primal);
  }
  return solution;
}

IlpSolution SolveIlp(const LinearModel& model, const Separator& separator,
                     const IlpOptions& options) {
  model.Validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  const int n = model.num_variables();
  std::vector<int> integer_vars;
  std::vector<double> root_lower(n);
  std::vector<double> root_upper(n);
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variable(j);
    root_lower[j] = v.lower;
    root_upper[j] = v.upper;
    if (!v.integer) continue;
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
      throw std::invalid_argument("integer variable " + v.name +
                                  " must have finite bounds");
    }
    root_lower[j] = std::ceil(v.lower - kIntegralityTolerance);
    root_upper[j] = std::floor(v.upper + kIntegralityTolerance);
    integer_vars.push_back(j);
  }

  IlpSolution result;
  internal::LpEngine engine(model);
  for (int j : integer_vars) {
    if (root_lower[j] != model.variable(j).lower ||
        root_upper[j] != model.variable(j).upper) {
      engine.SetBounds(j, root_lower[j], root_upper[j]);
    }
  }
  std::vector<double> current_lower = root_lower;
  std::vector<double> current_upper = root_upper;

  const bool integral_objective = HasIntegralObjective(model);
  const double offset = model.objective_offset();
  double incumbent = kInfinity;
  auto threshold = [&] { return std::min(incumbent, options.cutoff); };
  // True when a node with LP value `value` cannot beat the threshold.
  auto dominated = [&](double value) {
    const double limit = threshold();
    if (limit == kInfinity) return false;
    if (integral_objective) {
      const double rounded = std::ceil(value - offset - kIntegralityTolerance);
      return rounded + offset >= limit - 1e-9;
    }
    return value >= limit - 1e-9;
  };

  if (static_cast<int>(options.start.size()) == n &&
      model.MaxViolation(options.start) <= kFeasibilityTolerance) {
    bool integral = true;
    for (int j : integer_vars) {
      integral = integral && options.start[j] == std::round(options.start[j]);
    }
    const double objective = model.Evaluate(options.start);
    if (integral && objective < threshold()) {
      incumbent = objective;
      result.objective = objective;
      result.primal = options.start;
    }
  }

  const bool prioritized = static_cast<int>(options.branch_priority.size()) == n;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push(Node{-kInfinity, 0, next_id++, {}});
  bool limit_hit = false;

  std::vector<double> desired_lower(n);
  std::vector<double> desired_upper(n);
  while (!open.empty()) {
    if (result.nodes >= options.node_limit) {
      limit_hit = true;
      result.diagnostics = "node limit";
      break;
    }
    if (elapsed() > options.time_limit_seconds) {
      limit_hit = true;
      result.diagnostics = "time limit";
      break;
    }
    Node node = open.top();
    open.pop();
    if (dominated(node.bound)) continue;
    ++result.nodes;

    for (int j : integer_vars) {
      desired_lower[j] = root_lower[j];
      desired_upper[j] = root_upper[j];
    }
    for (const BoundChange& change : node.changes) {
      desired_lower[change.var] = change.lower;
      desired_upper[change.var] = change.upper;
    }
    for (int j : integer_vars) {
      if (desired_lower[j] != current_lower[j] ||
          desired_upper[j] != current_upper[j]) {
        engine.SetBounds(j, desired_lower[j], desired_upper[j]);
        current_lower[j] = desired_lower[j];
        current_upper[j] = desired_upper[j];
      }
    }

    while (true) {
      const SolveStatus status = engine.Solve(1'000'000);
      if (status == SolveStatus::kInfeasible) break;
      if (status == SolveStatus::kUnbounded) {
        result.status = SolveStatus::kUnbounded;
        result.diagnostics = "LP relaxation unbounded";
        return result;
      }
      if (status != SolveStatus::kOptimal) {
        result.status = SolveStatus::kLimit;
        result.diagnostics = "LP failure: " + engine.diagnostics();
        result.bound = -kInfinity;
        return result;
      }
      const double value = engine.objective() + offset;
      if (dominated(value)) break;
      std::vector<double> primal = engine.Primal();

      // Most fractional integer variable of the highest priority, lowest
      // index on ties.
      int branch_var = -1;
      int best_priority = 0;
      double best_fraction = kIntegralityTolerance;
      for (int j : integer_vars) {
        const double fraction =
            std::abs(primal[j] - std::round(primal[j]));
        if (fraction <= kIntegralityTolerance) continue;
        const int priority = prioritized ? options.branch_priority[j] : 0;
        if (branch_var < 0 || priority > best_priority ||
            (priority == best_priority && fraction > best_fraction + 1e-12)) {
          best_priority = priority;
          best_fraction = fraction;
          branch_var = j;
        }
      }
      if (branch_var < 0) {
        if (separator) {
          std::vector<Constraint> cuts = separator(primal);
          if (!cuts.empty()) {
            for (const Constraint& cut : cuts) engine.AddRow(cut);
            result.lazy_cuts += static_cast<int>(cuts.size());
            continue;
          }
        }
        for (int j : integer_vars) primal[j] = std::round(primal[j]);
        const double objective = model.Evaluate(primal);
        if (objective < threshold()) {
          incumbent = objective;
          result.objective = objective;
          result.primal = std::move(primal);
        }
        break;
      }

      const double x = primal[branch_var];
      Node down{value, node.depth + 1, next_id++, node.changes};
      down.changes.push_back(
          {branch_var, current_lower[branch_var], std::floor(x)});
      Node up{value, node.depth + 1, next_id++, std::move(node.changes)};
      up.changes.push_back(
          {branch_var, std::ceil(x), current_upper[branch_var]});
      open.push(std::move(down));
      open.push(std::move(up));
      break;
    }
  }

  if (limit_hit) {
    double bound = incumbent;
    while (!open.empty()) {
      bound = std::min(bound, open.top().bound);
      open.pop();
    }
    result.bound = bound;
    result.status = SolveStatus::kLimit;
    return result;
  }
  if (incumbent < kInfinity) {
    result.status = SolveStatus::kOptimal;
    result.bound = incumbent;
  } else if (options.cutoff < kInfinity) {
    result.status = SolveStatus::kCutoff;
    result.bound = options.cutoff;
  } else {
    result.status = SolveStatus::kInfeasible;
    result.bound = kInfinity;
  }
  return result;
}

}  // namespace filterless::milp
