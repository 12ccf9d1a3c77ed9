#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "filterless/milp.h"

namespace filterless::milp {

int LinearModel::AddVariable(std::string name, double lower, double upper,
                             double objective, bool integer) {
  variables_.push_back(
      Variable{std::move(name), lower, upper, integer, objective});
  return num_variables() - 1;
}

int LinearModel::AddConstraint(Constraint row) {
  constraints_.push_back(std::move(row));
  return num_constraints() - 1;
}

int LinearModel::AddConstraint(std::string name, std::vector<int> indices,
                               std::vector<double> values, RowSense sense,
                               double rhs) {
  return AddConstraint(Constraint{std::move(name), std::move(indices),
                                  std::move(values), sense, rhs});
}

double LinearModel::Evaluate(std::span<const double> values) const {
  double total = objective_offset_;
  for (int j = 0; j < num_variables(); ++j) {
    total += variables_[j].objective * values[j];
  }
  return total;
}

double LinearModel::MaxViolation(std::span<const double> values) const {
  double worst = 0.0;
  for (int j = 0; j < num_variables(); ++j) {
    worst = std::max(worst, variables_[j].lower - values[j]);
    worst = std::max(worst, values[j] - variables_[j].upper);
  }
  for (const Constraint& row : constraints_) {
    double activity = 0.0;
    for (size_t i = 0; i < row.indices.size(); ++i) {
      activity += row.values[i] * values[row.indices[i]];
    }
    if (row.sense != RowSense::kGreaterEqual) {
      worst = std::max(worst, activity - row.rhs);
    }
    if (row.sense != RowSense::kLessEqual) {
      worst = std::max(worst, row.rhs - activity);
    }
  }
  return worst;
}

void LinearModel::Validate() const {
  for (const Variable& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) ||
        std::isnan(v.objective)) {
      throw std::invalid_argument("NaN in variable " + v.name);
    }
    if (v.lower > v.upper) {
      throw std::invalid_argument("empty domain for variable " + v.name);
    }
  }
  for (const Constraint& row : constraints_) {
    if (row.indices.size() != row.values.size()) {
      throw std::invalid_argument("ragged row " + row.name);
    }
    if (std::isnan(row.rhs)) {
      throw std::invalid_argument("NaN right-hand side in row " + row.name);
    }
    for (size_t i = 0; i < row.indices.size(); ++i) {
      if (row.indices[i] < 0 || row.indices[i] >= num_variables()) {
        throw std::invalid_argument("row " + row.name +
                                    " references a missing variable");
      }
      if (std::isnan(row.values[i])) {
        throw std::invalid_argument("NaN coefficient in row " + row.name);
      }
    }
  }
}

namespace {

// LP-format identifiers may not contain spaces or some punctuation.
std::string LpName(const std::string& name, char prefix, int index) {
  if (name.empty()) return prefix + std::to_string(index);
  std::string out = name;
  for (char& c : out) {
    if (c == ' ' || c == ':' || c == '+' || c == '-' || c == '*' ||
        c == '<' || c == '>' || c == '=') {
      c = '_';
    }
  }
  return out;
}

void WriteTerm(std::ostream& out, double coefficient, const std::string& var,
               bool first) {
  if (coefficient < 0) {
    out << " - ";
  } else if (!first) {
    out << " + ";
  } else {
    out << " ";
  }
  double magnitude = std::abs(coefficient);
  if (magnitude != 1.0) out << magnitude << ' ';
  out << var;
}

}  // namespace

void LinearModel::WriteLp(std::ostream& out) const {
  std::vector<std::string> names(variables_.size());
  for (int j = 0; j < num_variables(); ++j) {
    names[j] = LpName(variables_[j].name, 'x', j);
  }
  out.precision(17);
  out << "\\ objective offset " << objective_offset_ << "\n";
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < num_variables(); ++j) {
    if (variables_[j].objective == 0.0) continue;
    WriteTerm(out, variables_[j].objective, names[j], first);
    first = false;
  }
  if (first) out << " 0 " << (names.empty() ? "x0" : names[0]);
  out << "\nSubject To\n";
  for (int i = 0; i < num_constraints(); ++i) {
    const Constraint& row = constraints_[i];
    out << ' ' << LpName(row.name, 'r', i) << ':';
    first = true;
    for (size_t t = 0; t < row.indices.size(); ++t) {
      WriteTerm(out, row.values[t], names[row.indices[t]], first);
      first = false;
    }
    if (first) out << " 0 " << (names.empty() ? "x0" : names[0]);
    switch (row.sense) {
      case RowSense::kLessEqual: out << " <= "; break;
      case RowSense::kGreaterEqual: out << " >= "; break;
      case RowSense::kEqual: out << " = "; break;
    }
    out << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < num_variables(); ++j) {
    const Variable& v = variables_[j];
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      out << ' ' << names[j] << " free\n";
      continue;
    }
    out << ' ';
    if (v.lower == -kInfinity) {
      out << "-inf";
    } else {
      out << v.lower;
    }
    out << " <= " << names[j] << " <= ";
    if (v.upper == kInfinity) {
      out << "+inf";
    } else {
      out << v.upper;
    }
    out << '\n';
  }
  bool any_integer = std::any_of(variables_.begin(), variables_.end(),
                                 [](const Variable& v) { return v.integer; });
  if (any_integer) {
    out << "General\n";
    for (int j = 0; j < num_variables(); ++j) {
      if (variables_[j].integer) out << ' ' << names[j] << '\n';
    }
  }
  out << "End\n";
}

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimit: return "limit";
    case SolveStatus::kCutoff: return "cutoff";
  }
  return "unknown";
}

}  // namespace filterless::milp
