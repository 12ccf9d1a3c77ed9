#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "filterless/milp.h"
#include "gtest/gtest.h"

namespace filterless::milp {
namespace {

TEST(SolveLpTest, SingleRowHasUnitDual) {
  LinearModel model;
  int x = model.AddVariable("x", 0.0, kInfinity, 1.0);
  model.AddConstraint("lb", {x}, {1.0}, RowSense::kGreaterEqual, 3.0);
  LpSolution sol = SolveLp(model);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 3.0, 1e-9);
  EXPECT_NEAR(sol.duals[0], 1.0, 1e-9);
}

TEST(SolveLpTest, DetectsInfeasibility) {
  LinearModel model;
  int x = model.AddVariable("x", 0.0, kInfinity, 0.0);
  model.AddConstraint("neg", {x}, {1.0}, RowSense::kLessEqual, -1.0);
  EXPECT_EQ(SolveLp(model).status, SolveStatus::kInfeasible);
}

TEST(SolveLpTest, DetectsUnboundedness) {
  LinearModel model;
  int x = model.AddVariable("x", 0.0, kInfinity, -1.0);
  int y = model.AddVariable("y", 0.0, kInfinity, 0.0);
  model.AddConstraint("r", {x, y}, {1.0, -1.0}, RowSense::kLessEqual, 2.0);
  EXPECT_EQ(SolveLp(model).status, SolveStatus::kUnbounded);
}

TEST(SolveLpTest, LessEqualRowHasNonpositiveDual) {
  // max x s.t. x <= 4.
  LinearModel model;
  int x = model.AddVariable("x", 0.0, kInfinity, -1.0);
  model.AddConstraint("cap", {x}, {1.0}, RowSense::kLessEqual, 4.0);
  LpSolution sol = SolveLp(model);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -4.0, 1e-9);
  EXPECT_NEAR(sol.duals[0], -1.0, 1e-9);
}

TEST(SolveLpTest, BealeCyclingExample) {
  LinearModel model;
  int x4 = model.AddVariable("x4", 0.0, kInfinity, -0.75);
  int x5 = model.AddVariable("x5", 0.0, kInfinity, 20.0);
  int x6 = model.AddVariable("x6", 0.0, kInfinity, -0.5);
  int x7 = model.AddVariable("x7", 0.0, kInfinity, 6.0);
  model.AddConstraint("r1", {x4, x5, x6, x7}, {0.25, -8.0, -1.0, 9.0},
                      RowSense::kLessEqual, 0.0);
  model.AddConstraint("r2", {x4, x5, x6, x7}, {0.5, -12.0, -0.5, 3.0},
                      RowSense::kLessEqual, 0.0);
  model.AddConstraint("r3", {x6}, {1.0}, RowSense::kLessEqual, 1.0);
  LpSolution sol = SolveLp(model);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -1.25, 1e-9);
}

TEST(SolveLpTest, EqualityRowsAndFreeVariable) {
  // min x - y, x + y = 4, x - y >= -2, y free, x >= 0 -> x = 1, y = 3.
  LinearModel model;
  int x = model.AddVariable("x", 0.0, kInfinity, 1.0);
  int y = model.AddVariable("y", -kInfinity, kInfinity, -1.0);
  model.AddConstraint("sum", {x, y}, {1.0, 1.0}, RowSense::kEqual, 4.0);
  model.AddConstraint("gap", {x, y}, {1.0, -1.0}, RowSense::kGreaterEqual,
                      -2.0);
  LpSolution sol = SolveLp(model);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -2.0, 1e-9);
  EXPECT_NEAR(sol.primal[x], 1.0, 1e-9);
  EXPECT_NEAR(sol.primal[y], 3.0, 1e-9);
}

TEST(SolveIlpTest, CoveringPair) {
  LinearModel model;
  int x = model.AddBinary("x", 1.0);
  int y = model.AddBinary("y", 1.0);
  model.AddConstraint("cover", {x, y}, {1.0, 1.0}, RowSense::kGreaterEqual,
                      1.0);
  IlpSolution sol = SolveIlp(model);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 1.0, 1e-9);
}

TEST(SolveIlpTest, Knapsack) {
  LinearModel model;
  int a = model.AddBinary("a", -3.0);
  int b = model.AddBinary("b", -2.0);
  model.AddConstraint("cap", {a, b}, {1.0, 1.0}, RowSense::kLessEqual, 1.0);
  IlpSolution sol = SolveIlp(model);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(-sol.objective, 3.0, 1e-9);
  EXPECT_EQ(sol.primal[a], 1.0);
}

TEST(SolveIlpTest, CutoffWithoutImprovingPoint) {
  LinearModel model;
  int a = model.AddBinary("a", 1.0);
  model.AddConstraint("need", {a}, {1.0}, RowSense::kGreaterEqual, 1.0);
  IlpOptions options;
  options.cutoff = 0.5;
  EXPECT_EQ(SolveIlp(model, {}, options).status, SolveStatus::kCutoff);
}

TEST(SolveIlpTest, StartingPointSeedsIncumbent) {
  LinearModel model;
  int a = model.AddBinary("a", -3.0);
  int b = model.AddBinary("b", -2.0);
  model.AddConstraint("cap", {a, b}, {1.0, 1.0}, RowSense::kLessEqual, 1.0);
  IlpOptions options;
  options.start = {0.0, 1.0};
  options.node_limit = 0;
  IlpSolution sol = SolveIlp(model, {}, options);
  EXPECT_EQ(sol.status, SolveStatus::kLimit);
  EXPECT_NEAR(sol.objective, -2.0, 1e-9);
  options.node_limit = 1000;
  EXPECT_NEAR(SolveIlp(model, {}, options).objective, -3.0, 1e-9);
  // Infeasible start is ignored.
  options.start = {1.0, 1.0};
  options.node_limit = 0;
  EXPECT_TRUE(SolveIlp(model, {}, options).primal.empty());
}

// Directed 4-node tour: arcs inside the clusters {0,1} and {2,3} cost 1,
// crossing arcs cost 5. Degree rows alone admit the two 2-cycles (cost 4).
TEST(SolveIlpTest, LazySubtourSeparation) {
  constexpr int kNodes = 4;
  LinearModel model;
  int arc[kNodes][kNodes];
  for (int i = 0; i < kNodes; ++i) {
    for (int j = 0; j < kNodes; ++j) {
      arc[i][j] = -1;
      if (i == j) continue;
      const double cost = (i / 2 == j / 2) ? 1.0 : 5.0;
      arc[i][j] = model.AddBinary("a" + std::to_string(i) + std::to_string(j),
                                  cost);
    }
  }
  for (int i = 0; i < kNodes; ++i) {
    std::vector<int> out;
    std::vector<int> in;
    for (int j = 0; j < kNodes; ++j) {
      if (i == j) continue;
      out.push_back(arc[i][j]);
      in.push_back(arc[j][i]);
    }
    model.AddConstraint("out", out, std::vector<double>(out.size(), 1.0),
                        RowSense::kEqual, 1.0);
    model.AddConstraint("in", in, std::vector<double>(in.size(), 1.0),
                        RowSense::kEqual, 1.0);
  }
  int calls = 0;
  auto separator = [&](std::span<const double> x) {
    ++calls;
    std::vector<Constraint> cuts;
    // Follow successors from node 0.
    int length = 0;
    int node = 0;
    do {
      for (int j = 0; j < kNodes; ++j) {
        if (j != node && x[arc[node][j]] > 0.5) {
          node = j;
          break;
        }
      }
      ++length;
    } while (node != 0 && length <= kNodes);
    if (length == kNodes) return cuts;
    for (int base : {0, 2}) {
      Constraint cut;
      cut.sense = RowSense::kLessEqual;
      cut.rhs = 1.0;
      cut.indices = {arc[base][base + 1], arc[base + 1][base]};
      cut.values = {1.0, 1.0};
      cuts.push_back(cut);
    }
    return cuts;
  };
  IlpSolution sol = SolveIlp(model, separator);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_GE(sol.lazy_cuts, 1);
  EXPECT_GE(calls, 2);

  // Brute-force oracle over the 3! tours starting at node 0.
  std::vector<int> order = {1, 2, 3};
  double best = kInfinity;
  do {
    double cost = 0;
    int prev = 0;
    for (int v : order) {
      cost += (prev / 2 == v / 2) ? 1.0 : 5.0;
      prev = v;
    }
    cost += (prev / 2 == 0) ? 1.0 : 5.0;
    best = std::min(best, cost);
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_NEAR(sol.objective, best, 1e-9);
  EXPECT_NEAR(best, 12.0, 1e-12);
}

struct RandomModel {
  LinearModel model;
  int num_vars;
};

RandomModel MakeRandomBinaryModel(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> vars(2, 8);
  std::uniform_int_distribution<int> rows(1, 5);
  RandomModel out;
  out.num_vars = vars(rng);
  for (int j = 0; j < out.num_vars; ++j) {
    out.model.AddBinary("x" + std::to_string(j), coef(rng));
  }
  const int m = rows(rng);
  for (int i = 0; i < m; ++i) {
    Constraint row;
    double positive_mass = 0.0;
    for (int j = 0; j < out.num_vars; ++j) {
      int c = coef(rng);
      if (c == 0) continue;
      row.indices.push_back(j);
      row.values.push_back(c);
      positive_mass += std::max(c, 0);
    }
    row.sense = (rng() % 2) ? RowSense::kLessEqual : RowSense::kGreaterEqual;
    row.rhs = std::uniform_int_distribution<int>(-3, 4)(rng);
    out.model.AddConstraint(row);
  }
  return out;
}

double EnumerateOptimum(const RandomModel& rm) {
  double best = kInfinity;
  std::vector<double> x(rm.num_vars);
  for (int mask = 0; mask < (1 << rm.num_vars); ++mask) {
    for (int j = 0; j < rm.num_vars; ++j) x[j] = (mask >> j) & 1;
    if (rm.model.MaxViolation(x) > 1e-9) continue;
    best = std::min(best, rm.model.Evaluate(x));
  }
  return best;
}

TEST(SolveIlpTest, MatchesEnumerationAndBoundsLp) {
  std::mt19937 rng(20240601);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    RandomModel rm = MakeRandomBinaryModel(rng);
    const double expected = EnumerateOptimum(rm);
    IlpSolution ilp = SolveIlp(rm.model);
    LpSolution lp = SolveLp(rm.model);
    if (expected == kInfinity) {
      EXPECT_EQ(ilp.status, SolveStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ++feasible;
    ASSERT_EQ(ilp.status, SolveStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(ilp.objective, expected, 1e-7) << "trial " << trial;
    ASSERT_EQ(lp.status, SolveStatus::kOptimal) << "trial " << trial;
    EXPECT_LE(lp.objective, expected + 1e-7) << "trial " << trial;
    EXPECT_LE(rm.model.MaxViolation(ilp.primal), 1e-6);
  }
  EXPECT_GT(feasible, 100);
}

// Vars in [0, inf): optimality means dual feasibility, complementary
// slackness and c.x = b.y.
TEST(SolveLpTest, RandomLpsSatisfyDuality) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  int optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    LinearModel model;
    const int n = 3 + trial % 6;
    const int m = 2 + trial % 5;
    for (int j = 0; j < n; ++j) {
      model.AddVariable("x", 0.0, kInfinity,
                        std::uniform_real_distribution<double>(0.1, 4.0)(rng));
    }
    for (int i = 0; i < m; ++i) {
      Constraint row;
      for (int j = 0; j < n; ++j) {
        row.indices.push_back(j);
        row.values.push_back(coef(rng));
      }
      const int kind = rng() % 3;
      row.sense = kind == 0   ? RowSense::kLessEqual
                  : kind == 1 ? RowSense::kGreaterEqual
                              : RowSense::kEqual;
      row.rhs = coef(rng);
      model.AddConstraint(row);
    }
    LpSolution sol = SolveLp(model);
    if (sol.status != SolveStatus::kOptimal) continue;
    ++optimal;
    EXPECT_LE(model.MaxViolation(sol.primal), 1e-7);
    double dual_objective = 0.0;
    std::vector<double> reduced(n);
    for (int j = 0; j < n; ++j) reduced[j] = model.variable(j).objective;
    for (int i = 0; i < m; ++i) {
      const Constraint& row = model.constraint(i);
      const double y = sol.duals[i];
      if (row.sense == RowSense::kLessEqual) {
        EXPECT_LE(y, 1e-9);
      }
      if (row.sense == RowSense::kGreaterEqual) {
        EXPECT_GE(y, -1e-9);
      }
      dual_objective += y * row.rhs;
      double activity = 0.0;
      for (size_t t = 0; t < row.indices.size(); ++t) {
        reduced[row.indices[t]] -= y * row.values[t];
        activity += row.values[t] * sol.primal[row.indices[t]];
      }
      EXPECT_NEAR(y * (activity - row.rhs), 0.0, 1e-6);
    }
    for (int j = 0; j < n; ++j) {
      EXPECT_GE(reduced[j], -1e-7);
      EXPECT_NEAR(reduced[j] * sol.primal[j], 0.0, 1e-6);
    }
    EXPECT_NEAR(sol.objective, dual_objective, 1e-6);
  }
  EXPECT_GT(optimal, 30);
}

// Bounded variables and sparse rows, large enough to force several
// refactorizations. Optimality is certified by the KKT conditions.
TEST(SolveLpTest, LargeSparseLpsSatisfyKkt) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  int optimal = 0;
  for (int trial = 0; trial < 6; ++trial) {
    LinearModel model;
    const int n = 120;
    const int m = 300;
    for (int j = 0; j < n; ++j) {
      const double upper = (j % 3 == 0) ? kInfinity : 1.0 + j % 4;
      model.AddVariable("x", 0.0, upper, coef(rng));
    }
    for (int i = 0; i < m; ++i) {
      Constraint row;
      for (int t = 0; t < 4; ++t) {
        const int j = static_cast<int>(rng() % n);
        row.indices.push_back(j);
        row.values.push_back(coef(rng));
      }
      row.sense = (i % 4 == 0) ? RowSense::kGreaterEqual : RowSense::kLessEqual;
      row.rhs = row.sense == RowSense::kLessEqual ? 1.0 + std::abs(coef(rng))
                                                  : -1.0;
      model.AddConstraint(row);
    }
    LpSolution sol = SolveLp(model);
    if (sol.status != SolveStatus::kOptimal) continue;
    ++optimal;
    EXPECT_LE(model.MaxViolation(sol.primal), 1e-7);
    std::vector<double> reduced(n);
    for (int j = 0; j < n; ++j) reduced[j] = model.variable(j).objective;
    for (int i = 0; i < m; ++i) {
      const Constraint& row = model.constraint(i);
      for (size_t t = 0; t < row.indices.size(); ++t) {
        reduced[row.indices[t]] -= sol.duals[i] * row.values[t];
      }
    }
    for (int j = 0; j < n; ++j) {
      const Variable& v = model.variable(j);
      const double x = sol.primal[j];
      if (x <= v.lower + 1e-9) {
        EXPECT_GE(reduced[j], -1e-7);
      } else if (x >= v.upper - 1e-9) {
        EXPECT_LE(reduced[j], 1e-7);
      } else {
        EXPECT_NEAR(reduced[j], 0.0, 1e-7);
      }
    }
  }
  EXPECT_GE(optimal, 3);
}

TEST(SolveIlpTest, Deterministic) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    RandomModel rm = MakeRandomBinaryModel(rng);
    IlpSolution a = SolveIlp(rm.model);
    IlpSolution b = SolveIlp(rm.model);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.nodes, b.nodes);
  }
}

TEST(LinearModelTest, WritesLpFormat) {
  LinearModel model;
  int x = model.AddBinary("x", 2.0);
  int y = model.AddVariable("y", 0.0, kInfinity, -1.0);
  model.AddConstraint("c1", {x, y}, {1.0, 3.0}, RowSense::kLessEqual, 4.0);
  std::ostringstream out;
  model.WriteLp(out);
  const std::string text = out.str();
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("c1: x + 3 y <= 4"), std::string::npos);
  EXPECT_NE(text.find("General\n x"), std::string::npos);
}

TEST(LinearModelTest, RejectsDanglingIndex) {
  LinearModel model;
  model.AddVariable("x", 0.0, 1.0, 0.0);
  model.AddConstraint("bad", {3}, {1.0}, RowSense::kLessEqual, 1.0);
  EXPECT_THROW(model.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace filterless::milp
