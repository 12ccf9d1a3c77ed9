#include "lp_engine.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "Highs.h"

namespace filterless::milp::internal {
namespace {

double Bound(double value) {
  if (value == kInfinity) return kHighsInf;
  if (value == -kInfinity) return -kHighsInf;
  return value;
}

// Merges repeated indices and drops zeros.
std::pair<std::vector<HighsInt>, std::vector<double>> Compress(
    const Constraint& row) {
  std::map<int, double> merged;
  for (size_t t = 0; t < row.indices.size(); ++t) {
    merged[row.indices[t]] += row.values[t];
  }
  std::pair<std::vector<HighsInt>, std::vector<double>> out;
  for (auto [index, value] : merged) {
    if (value == 0.0) continue;
    out.first.push_back(index);
    out.second.push_back(value);
  }
  return out;
}

std::pair<double, double> RowBounds(const Constraint& row) {
  switch (row.sense) {
    case RowSense::kLessEqual:
      return {-kHighsInf, row.rhs};
    case RowSense::kGreaterEqual:
      return {row.rhs, kHighsInf};
    case RowSense::kEqual:
      break;
  }
  return {row.rhs, row.rhs};
}

}  // namespace

LpEngine::LpEngine(const LinearModel& model) : highs_(std::make_unique<Highs>()) {
  Highs& h = *highs_;
  h.setOptionValue("output_flag", false);
  h.setOptionValue("presolve", "off");
  h.setOptionValue("solver", "simplex");
  h.setOptionValue("random_seed", 0);

  HighsLp lp;
  const int n = model.num_variables();
  const int m = model.num_constraints();
  lp.num_col_ = n;
  lp.num_row_ = m;
  lp.sense_ = ObjSense::kMinimize;
  for (const Variable& v : model.variables()) {
    lp.col_cost_.push_back(v.objective);
    lp.col_lower_.push_back(Bound(v.lower));
    lp.col_upper_.push_back(Bound(v.upper));
  }
  lp.a_matrix_.format_ = MatrixFormat::kRowwise;
  lp.a_matrix_.num_col_ = n;
  lp.a_matrix_.num_row_ = m;
  lp.a_matrix_.start_.assign(1, 0);
  for (int i = 0; i < m; ++i) {
    const Constraint& row = model.constraint(i);
    auto [lower, upper] = RowBounds(row);
    lp.row_lower_.push_back(lower);
    lp.row_upper_.push_back(upper);
    auto [indices, values] = Compress(row);
    lp.a_matrix_.index_.insert(lp.a_matrix_.index_.end(), indices.begin(),
                               indices.end());
    lp.a_matrix_.value_.insert(lp.a_matrix_.value_.end(), values.begin(),
                               values.end());
    lp.a_matrix_.start_.push_back(
        static_cast<HighsInt>(lp.a_matrix_.index_.size()));
  }
  if (h.passModel(std::move(lp)) == HighsStatus::kError) {
    diagnostics_ = "model rejected";
  }
}

LpEngine::~LpEngine() = default;

void LpEngine::SetBounds(int var, double lower, double upper) {
  highs_->changeColBounds(var, Bound(lower), Bound(upper));
}

void LpEngine::AddRow(const Constraint& row) {
  auto [lower, upper] = RowBounds(row);
  auto [indices, values] = Compress(row);
  highs_->addRow(lower, upper, static_cast<HighsInt>(indices.size()),
                 indices.data(), values.data());
}

SolveStatus LpEngine::Solve(int iteration_limit) {
  Highs& h = *highs_;
  if (!diagnostics_.empty() && diagnostics_ == "model rejected") {
    return SolveStatus::kLimit;
  }
  h.setOptionValue("simplex_iteration_limit", iteration_limit);
  const HighsStatus run = h.run();
  iterations_ += std::max<HighsInt>(0, h.getInfo().simplex_iteration_count);
  const HighsModelStatus status = h.getModelStatus();
  diagnostics_ = h.modelStatusToString(status);
  if (run == HighsStatus::kError) return SolveStatus::kLimit;
  switch (status) {
    case HighsModelStatus::kOptimal:
    case HighsModelStatus::kModelEmpty:
      return SolveStatus::kOptimal;
    case HighsModelStatus::kInfeasible:
      return SolveStatus::kInfeasible;
    case HighsModelStatus::kUnbounded:
      return SolveStatus::kUnbounded;
    case HighsModelStatus::kUnboundedOrInfeasible: {
      // Decide with a zero objective: feasible means unbounded.
      Highs probe;
      probe.setOptionValue("output_flag", false);
      HighsLp lp = h.getLp();
      std::fill(lp.col_cost_.begin(), lp.col_cost_.end(), 0.0);
      probe.passModel(std::move(lp));
      probe.run();
      return probe.getModelStatus() == HighsModelStatus::kOptimal
                 ? SolveStatus::kUnbounded
                 : SolveStatus::kInfeasible;
    }
    default:
      return SolveStatus::kLimit;
  }
}

double LpEngine::objective() const {
  const std::vector<double>& x = highs_->getSolution().col_value;
  const std::vector<double>& c = highs_->getLp().col_cost_;
  double total = 0.0;
  for (size_t j = 0; j < x.size() && j < c.size(); ++j) total += c[j] * x[j];
  return total;
}

std::vector<double> LpEngine::Primal() const {
  std::vector<double> x = highs_->getSolution().col_value;
  x.resize(highs_->getLp().num_col_, 0.0);
  return x;
}

std::vector<double> LpEngine::Duals() const {
  std::vector<double> y = highs_->getSolution().row_dual;
  y.resize(highs_->getLp().num_row_, 0.0);
  return y;
}

}  // namespace filterless::milp::internal
