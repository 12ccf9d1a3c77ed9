#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "filterless/master.h"

namespace filterless {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(FILTERLESS_TEST_DATA) + "/" + name;
}

// Seven requests on the seven-node network, served on the tree
// {1,3},{2,3},{3,4},{3,5}; see fsn_test.cc for the ids.
struct TreeInstance {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  std::vector<Request> requests = LoadDemandFile(DataPath("tree5.dem"), net);
  SolverConfig cfg;

  std::vector<int> Tree() const {
    return {net.FindEdge(0, 2), net.FindEdge(1, 2), net.FindEdge(2, 3),
            net.FindEdge(2, 4)};
  }
  std::vector<int> TreeLinks() const {
    std::vector<int> links;
    for (int e : Tree()) {
      links.push_back(net.edge(e).forward_link());
      links.push_back(net.edge(e).backward_link());
    }
    return links;
  }
  FsnConfig WholeTree() const {
    return BuildFsnConfig(net, requests, Tree(), TreeLinks(),
                          {0, 1, 2, 3, 4, 5, 6});
  }
  // Four colors: {k13,k53} {k21,k12} {k42,k34} {k35}.
  ColumnPool FourColorPool() const {
    ColumnPool pool;
    pool.AddFsn(WholeTree());
    pool.AddColor({{0, 1}});
    pool.AddColor({{3, 4}});
    pool.AddColor({{5, 6}});
    pool.AddColor({{2}});
    return pool;
  }
};

double DualObjective(const milp::LinearModel& model,
                     const std::vector<double>& duals) {
  double total = 0.0;
  for (int i = 0; i < model.num_constraints(); ++i) {
    total += model.constraint(i).rhs * duals[i];
  }
  return total;
}

TEST(PairIndexTest, EnumeratesUnorderedPairs) {
  const int n = 7;
  int expected = 0;
  for (int k = 0; k < n; ++k) {
    for (int k2 = k + 1; k2 < n; ++k2) {
      EXPECT_EQ(PairIndex(k, k2, n), expected);
      EXPECT_EQ(PairIndex(k2, k, n), expected);
      ++expected;
    }
  }
  EXPECT_EQ(PairCount(n), expected);
}

TEST(ColumnPoolTest, RejectsDuplicates) {
  TreeInstance t;
  ColumnPool pool;
  EXPECT_TRUE(pool.AddFsn(t.WholeTree()));
  EXPECT_FALSE(pool.AddFsn(t.WholeTree()));
  EXPECT_TRUE(pool.AddColor({{2, 1}}));
  EXPECT_FALSE(pool.AddColor({{1, 2}}));
  EXPECT_THROW(pool.AddColor({{}}), std::invalid_argument);
  EXPECT_EQ(pool.color_columns()[0].members, std::vector<int>({1, 2}));
}

TEST(BuildRmpTest, RowCountOnTreeInstance) {
  TreeInstance t;
  Rmp rmp = BuildRmp(t.FourColorPool(), t.net, t.requests, t.cfg, false);
  EXPECT_EQ(rmp.model.num_constraints(), 7 + 22 + 1 + 21 + 7);
  EXPECT_EQ(rmp.model.num_variables(), 5);
  EXPECT_EQ(rmp.color_row(6), 57);
  for (const milp::Variable& v : rmp.model.variables()) {
    EXPECT_FALSE(v.integer);
    EXPECT_EQ(v.upper, milp::kInfinity);
  }
  Rmp integer = BuildRmp(t.FourColorPool(), t.net, t.requests, t.cfg, true);
  for (const milp::Variable& v : integer.model.variables()) {
    EXPECT_TRUE(v.integer);
    EXPECT_EQ(v.upper, 1.0);
  }
}

TEST(BuildRmpTest, UncoveredRequestIsReported) {
  TreeInstance t;
  ColumnPool pool;
  pool.AddFsn(t.WholeTree());
  try {
    BuildRmp(pool, t.net, t.requests, t.cfg, false);
    FAIL();
  } catch (const InfeasibleMaster& e) {
    EXPECT_NE(std::string(e.what()).find("wavelength"), std::string::npos);
  }
  ColumnPool colors_only;
  colors_only.AddColor({{0, 1, 2, 3, 4, 5, 6}});
  EXPECT_THROW(BuildRmp(colors_only, t.net, t.requests, t.cfg, false),
               InfeasibleMaster);
}

TEST(BuildRmpTest, SingleRequestToy) {
  Network net = LoadTopologyFile(DataPath("two_node.top"));
  std::vector<Request> requests = {{0, 0, 1}};
  ColumnPool pool;
  pool.AddFsn(BuildFsnConfig(net, requests, {0}, {0}, {0}));
  pool.AddColor({{0}});
  SolverConfig cfg;
  cfg.max_fsn = 1;
  Rmp rmp = BuildRmp(pool, net, requests, cfg, false);
  milp::LpSolution lp = milp::SolveLp(rmp.model);
  ASSERT_EQ(lp.status, milp::SolveStatus::kOptimal);
  EXPECT_NEAR(lp.objective, 1.0, 1e-9);
  Duals duals = ExtractDuals(rmp, lp);
  // Strong duality: u2 + u3 + u4 + u6 over unit right-hand sides.
  EXPECT_NEAR(duals.u2[0] + duals.u3[0] + duals.u3[1] + duals.u4 + duals.u6[0],
              1.0, 1e-9);
  EXPECT_NEAR(duals.u6[0], 1.0, 1e-9);
}

TEST(ExtractDualsTest, RejectsNonOptimal) {
  TreeInstance t;
  Rmp rmp = BuildRmp(t.FourColorPool(), t.net, t.requests, t.cfg, false);
  milp::LpSolution bad;
  bad.status = milp::SolveStatus::kInfeasible;
  EXPECT_THROW(ExtractDuals(rmp, bad), std::invalid_argument);
}

TEST(ExtractDualsTest, PooledColumnsPriceOut) {
  TreeInstance t;
  ColumnPool pool = t.FourColorPool();
  // Extra redundant columns so some are nonbasic.
  pool.AddColor({{0}});
  pool.AddColor({{1, 3}});
  pool.AddColor({{0, 2}});
  Rmp rmp = BuildRmp(pool, t.net, t.requests, t.cfg, false);
  milp::LpSolution lp = milp::SolveLp(rmp.model);
  ASSERT_EQ(lp.status, milp::SolveStatus::kOptimal);
  Duals duals = ExtractDuals(rmp, lp);
  for (const FsnConfig& c : pool.fsn_columns()) {
    EXPECT_GE(FsnReducedCost(c, duals), -1e-6);
  }
  for (const WavelengthConfig& c : pool.color_columns()) {
    EXPECT_GE(ColorReducedCost(c, duals), -1e-6);
  }
  EXPECT_NEAR(DualObjective(rmp.model, lp.duals), lp.objective, 1e-7);
  // Reduced costs from the normalized duals equal the LP reduced costs.
  for (int c = 0; c < rmp.num_color_columns; ++c) {
    double rc = 1.0;
    for (int i = 0; i < rmp.model.num_constraints(); ++i) {
      const milp::Constraint& row = rmp.model.constraint(i);
      for (size_t j = 0; j < row.indices.size(); ++j) {
        if (row.indices[j] == rmp.color_var(c)) rc -= row.values[j] * lp.duals[i];
      }
    }
    EXPECT_NEAR(rc, ColorReducedCost(pool.color_columns()[c], duals), 1e-7);
  }
}

TEST(FinalizeTest, TreeInstanceNeedsFourWavelengths) {
  TreeInstance t;
  ColumnPool pool = t.FourColorPool();
  Rmp rmp = BuildRmp(pool, t.net, t.requests, t.cfg, false);
  milp::LpSolution lp = milp::SolveLp(rmp.model);
  ASSERT_EQ(lp.status, milp::SolveStatus::kOptimal);
  EXPECT_NEAR(lp.objective, 4.0, 1e-9);
  DesignSolution design = Finalize(pool, t.net, t.requests, t.cfg,
                                   lp.objective, 60.0);
  EXPECT_TRUE(design.integer_optimal);
  EXPECT_EQ(design.W, 4);
  EXPECT_NEAR(design.epsilon, 0.0, 1e-12);
  ASSERT_EQ(design.selected_fsns.size(), 1u);
  const FsnConfig& fsn = design.selected_fsns[0];
  EXPECT_TRUE(VerifyFsnConfig(fsn, t.net, t.requests, 1500).empty());
  for (auto [k, k2] : fsn.conflicts.pairs()) {
    EXPECT_NE(design.wavelength[k], design.wavelength[k2]);
  }
  EXPECT_EQ(design.loads.total[t.net.FindLink(2, 4)], 4);
}

TEST(FinalizeTest, OverlappingColorsKeepLowestIndex) {
  Network net = LoadTopologyFile(DataPath("path3.top"));
  // A->B, C->B, B->C: only A->B and B->C conflict (broadcast past B).
  std::vector<Request> requests = {{0, 0, 1}, {1, 2, 1}, {2, 1, 2}};
  SolverConfig cfg;
  ColumnPool pool;
  pool.AddFsn(BuildFsnConfig(net, requests, {0, 1}, {0, 2, 3}, {0, 1, 2}));
  ASSERT_EQ(pool.fsn_columns()[0].conflicts.pairs(),
            (std::set<std::pair<int, int>>{{0, 2}}));
  pool.AddColor({{0, 1}});
  pool.AddColor({{1, 2}});
  DesignSolution design = Finalize(pool, net, requests, cfg, 2.0, 60.0);
  EXPECT_EQ(design.W, 2);
  EXPECT_EQ(design.wavelength, std::vector<int>({0, 0, 1}));
  EXPECT_EQ(design.serving_fsn, std::vector<int>({0, 0, 0}));
}

TEST(FinalizeTest, SelfConflictingColumnIsInfeasible) {
  TreeInstance t;
  ColumnPool pool;
  pool.AddFsn(t.WholeTree());
  pool.AddColor({{0, 1, 2, 3, 4, 5, 6}});
  // The single wavelength column conflicts with itself; only the exact
  // pair rows rule it out, so the integer master is infeasible.
  EXPECT_THROW(Finalize(pool, t.net, t.requests, t.cfg, 1.0, 60.0),
               InfeasibleMaster);
}

TEST(EpsilonTest, Values) {
  EXPECT_NEAR(Epsilon(23, 20.0), 0.15, 1e-12);
  EXPECT_EQ(Epsilon(4, 4.0), 0.0);
}

TEST(MasterPropertyTest, IntegerValueBoundsLpValue) {
  TreeInstance t;
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    ColumnPool pool = t.FourColorPool();
    for (int c = 0; c < 6; ++c) {
      WavelengthConfig column;
      for (int k = 0; k < 7; ++k) {
        if (rng() % 3 == 0) column.members.push_back(k);
      }
      if (!column.members.empty()) pool.AddColor(column);
    }
    Rmp rmp = BuildRmp(pool, t.net, t.requests, t.cfg, false);
    milp::LpSolution lp = milp::SolveLp(rmp.model);
    ASSERT_EQ(lp.status, milp::SolveStatus::kOptimal);
    DesignSolution design =
        Finalize(pool, t.net, t.requests, t.cfg, lp.objective, 60.0);
    EXPECT_GE(design.W + 1e-9, lp.objective);
    const FsnConfig& fsn = design.selected_fsns[0];
    for (auto [k, k2] : fsn.conflicts.pairs()) {
      EXPECT_NE(design.wavelength[k], design.wavelength[k2]);
    }
  }
}

}  // namespace
}  // namespace filterless
