// Warm-started LP engine behind the LP and branch-and-bound entry points.
// Bound changes and appended rows keep the current basis, so re-solves after
// branching or adding cuts start from the previous optimum.

#ifndef FILTERLESS_SRC_LP_ENGINE_H_
#define FILTERLESS_SRC_LP_ENGINE_H_

#include <memory>
#include <string>
#include <vector>

#include "filterless/milp.h"

class Highs;

namespace filterless::milp::internal {

class LpEngine {
 public:
  explicit LpEngine(const LinearModel& model);
  ~LpEngine();
  LpEngine(const LpEngine&) = delete;
  LpEngine& operator=(const LpEngine&) = delete;

  // Changes the bounds of structural variable `var`.
  void SetBounds(int var, double lower, double upper);
  void AddRow(const Constraint& row);

  // Integrality flags are ignored.
  SolveStatus Solve(int iteration_limit);

  // Objective without the model's constant offset.
  double objective() const;
  std::vector<double> Primal() const;
  // One per row; >= rows have nonnegative duals, <= rows nonpositive.
  std::vector<double> Duals() const;
  int iterations() const { return iterations_; }
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::unique_ptr<Highs> highs_;
  int iterations_ = 0;
  std::string diagnostics_;
};

}  // namespace filterless::milp::internal

#endif  // FILTERLESS_SRC_LP_ENGINE_H_
