// Exact LP/ILP layer: sparse linear models, a bounded dual simplex with row
// duals, and best-bound branch-and-bound with a lazy-constraint hook.
//
// All models are minimizations. Row duals follow the usual convention for a
// minimization: nonnegative on binding >= rows, nonpositive on binding <= rows.

#ifndef FILTERLESS_MILP_H_
#define FILTERLESS_MILP_H_

#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace filterless::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Feasibility and integrality tolerances shared by the LP and ILP solvers.
inline constexpr double kFeasibilityTolerance = 1e-7;
inline constexpr double kIntegralityTolerance = 1e-6;

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;
  double objective = 0.0;
};

// A sparse row: sum_i values[i] * x[indices[i]] <sense> rhs.
struct Constraint {
  std::string name;
  std::vector<int> indices;
  std::vector<double> values;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

class LinearModel {
 public:
  int AddVariable(std::string name, double lower, double upper,
                  double objective, bool integer = false);
  int AddBinary(std::string name, double objective) {
    return AddVariable(std::move(name), 0.0, 1.0, objective, true);
  }
  int AddConstraint(Constraint row);
  int AddConstraint(std::string name, std::vector<int> indices,
                    std::vector<double> values, RowSense sense, double rhs);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  Variable& variable(int index) { return variables_[index]; }
  const Variable& variable(int index) const { return variables_[index]; }
  const Constraint& constraint(int index) const { return constraints_[index]; }

  // Constant added to the objective.
  double objective_offset() const { return objective_offset_; }
  void set_objective_offset(double offset) { objective_offset_ = offset; }

  // Evaluates the objective (including the offset) at `values`.
  double Evaluate(std::span<const double> values) const;

  // Largest bound or row violation of `values` (0 when feasible).
  double MaxViolation(std::span<const double> values) const;

  // Throws std::invalid_argument when a row references a missing variable,
  // a coefficient or bound is NaN, or lower > upper.
  void Validate() const;

  // Writes the model in CPLEX LP text format.
  void WriteLp(std::ostream& out) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  double objective_offset_ = 0.0;
};

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  // Iteration, node, or time limit, or numerical failure. See diagnostics.
  kLimit,
  // ILP only: no integer point with objective below the requested cutoff.
  kCutoff,
};

const char* ToString(SolveStatus status);

struct LpSolution {
  SolveStatus status = SolveStatus::kLimit;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> duals;  // One per constraint.
  int iterations = 0;
  std::string diagnostics;
};

struct LpOptions {
  int iteration_limit = 1'000'000;
};

// Integrality flags are ignored.
LpSolution SolveLp(const LinearModel& model, const LpOptions& options = {});

struct IlpSolution {
  SolveStatus status = SolveStatus::kLimit;
  double objective = kInfinity;  // Incumbent value; +inf when none.
  std::vector<double> primal;    // Incumbent, integer entries rounded.
  double bound = -kInfinity;     // Best proven lower bound.
  long nodes = 0;
  int lazy_cuts = 0;
  std::string diagnostics;
};

// Invoked on every integral LP point. Returning a non-empty list rejects the
// point; the rows are added to the model for the rest of the search.
using Separator =
    std::function<std::vector<Constraint>(std::span<const double> values)>;

struct IlpOptions {
  double time_limit_seconds = kInfinity;
  long node_limit = 10'000'000;
  // Only integer points with objective strictly below this value are
  // accepted. With no such point the status is kCutoff.
  double cutoff = kInfinity;
  // Optional feasible integer point used as the first incumbent. Ignored when
  // infeasible or not below the cutoff.
  std::vector<double> start;
  // Optional, one entry per variable: fractional variables of the highest
  // priority are branched on first.
  std::vector<int> branch_priority;
};

// Integer variables must have finite bounds.
IlpSolution SolveIlp(const LinearModel& model, const Separator& separator = {},
                     const IlpOptions& options = {});

}  // namespace filterless::milp

#endif  // FILTERLESS_MILP_H_
