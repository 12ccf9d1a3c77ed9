#include "filterless/oracle.h"

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "filterless/orchestrator.h"

namespace filterless {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(FILTERLESS_TEST_DATA) + "/" + name;
}

// Smallest k such that some assignment in k^n is proper.
int NaiveChromatic(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n == 0) return 0;
  for (int k = 1;; ++k) {
    std::vector<int> color(n, 0);
    while (true) {
      bool proper = true;
      for (auto [a, b] : edges) proper = proper && color[a] != color[b];
      if (proper) return k;
      int i = 0;
      while (i < n && ++color[i] == k) color[i++] = 0;
      if (i == n) break;
    }
  }
}

TEST(OracleMinColoringTest, SmallGraphs) {
  EXPECT_EQ(OracleMinColoring(0, {}), 0);
  EXPECT_EQ(OracleMinColoring(7, {}), 1);
  std::vector<std::pair<int, int>> k5;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) k5.push_back({a, b});
  }
  EXPECT_EQ(OracleMinColoring(5, k5), 5);
  EXPECT_EQ(OracleMinColoring(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}), 3);
}

TEST(OracleMinColoringTest, TreeInstanceConflictGraph) {
  // Conflicts of k13 k53 k35 k21 k12 k42 k34 on the bidirectional tree.
  const std::vector<std::pair<int, int>> conflicts = {
      {0, 2}, {0, 4}, {0, 5}, {0, 6}, {1, 3}, {1, 4}, {1, 5}, {1, 6},
      {2, 3}, {2, 4}, {2, 5}, {3, 5}, {3, 6}, {4, 5}, {4, 6}};
  EXPECT_EQ(OracleMinColoring(7, conflicts), 4);
}

TEST(OracleMinColoringTest, SizeLimit) {
  EXPECT_NO_THROW(OracleMinColoring(16, {}));
  EXPECT_THROW(OracleMinColoring(17, {}), std::invalid_argument);
}

TEST(OracleMinColoringTest, MatchesNaiveEnumeration) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = static_cast<int>(rng() % 8);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng() % 2) edges.push_back({a, b});
      }
    }
    ASSERT_EQ(OracleMinColoring(n, edges), NaiveChromatic(n, edges))
        << "trial " << trial;
  }
}

SolverConfig OneFsn() {
  SolverConfig cfg;
  cfg.max_fsn = 1;
  return cfg;
}

TEST(OracleOptimumTest, SingleRequest) {
  const Network net = LoadTopologyFile(DataPath("two_node.top"));
  EXPECT_EQ(OracleOptimum(net, {{0, 0, 1}}, OneFsn()), 1);
}

TEST(OracleOptimumTest, OppositeDirectionsShare) {
  const Network net = LoadTopologyFile(DataPath("path3.top"));
  EXPECT_EQ(OracleOptimum(net, {{0, 0, 2}, {1, 2, 0}}, OneFsn()), 1);
}

TEST(OracleOptimumTest, SharedFilteredLinkConflicts) {
  const Network net = LoadTopologyFile(DataPath("path3.top"));
  EXPECT_EQ(OracleOptimum(net, {{0, 0, 2}, {1, 1, 2}}, OneFsn()), 2);
}

TEST(OracleOptimumTest, TreeInstanceNeedsFour) {
  const Network net = LoadTopologyFile(DataPath("tree5.top"));
  const std::vector<Request> requests =
      LoadDemandFile(DataPath("tree5.dem"), net);
  EXPECT_EQ(OracleOptimum(net, requests, OneFsn()), 4);
}

TEST(OracleOptimumTest, SecondFsnCanOnlyHelp) {
  const Network net = LoadTopologyFile(DataPath("tree5.top"));
  const std::vector<Request> requests =
      LoadDemandFile(DataPath("tree5.dem"), net);
  SolverConfig two;
  two.max_fsn = 2;
  const std::optional<int> w2 = OracleOptimum(net, requests, two);
  ASSERT_TRUE(w2);
  EXPECT_LE(*w2, 4);
}

TEST(OracleOptimumTest, OutOfReachIsInfeasible) {
  const Network net = LoadTopologyFile(DataPath("path3.top"));
  SolverConfig cfg = OneFsn();
  cfg.reach_km = 500;
  EXPECT_EQ(OracleOptimum(net, {{0, 0, 2}}, cfg), std::nullopt);
}

TEST(OracleOptimumTest, Limits) {
  const Network net = LoadTopologyFile(DataPath("fig1.top"));
  EXPECT_THROW(OracleOptimum(net, {{0, 0, 1}}, OneFsn()),
               std::invalid_argument);
  const Network small = LoadTopologyFile(DataPath("path3.top"));
  EXPECT_THROW(OracleOptimum(small, {{0, 0, 1}}, SolverConfig{}),
               std::invalid_argument);
  SolverConfig three;
  three.max_fsn = 3;
  EXPECT_THROW(OracleOptimum(small, {{0, 0, 1}}, three), std::invalid_argument);
}

TEST(OracleSandwichTest, PipelineBracketsOptimum) {
  std::mt19937 rng(17);
  int certified_tight = 0;
  for (int trial = 0; trial < 12; ++trial) {
    Network net;
    const int n = 3 + static_cast<int>(rng() % 3);
    for (int v = 0; v < n; ++v) net.AddNode("n" + std::to_string(v));
    for (int v = 1; v < n; ++v) {
      net.AddEdge(static_cast<int>(rng() % v), v, 10.0 + rng() % 291);
    }
    for (int extra = 0; extra < 2; ++extra) {
      const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      if (a != b && net.FindEdge(a, b) < 0) net.AddEdge(a, b, 10.0 + rng() % 291);
    }
    std::vector<Request> requests;
    const int K = 1 + static_cast<int>(rng() % 5);
    while (static_cast<int>(requests.size()) < K) {
      const int s = static_cast<int>(rng() % n), d = static_cast<int>(rng() % n);
      if (s != d) requests.push_back({static_cast<int>(requests.size()), s, d});
    }
    SolverConfig cfg;
    cfg.max_fsn = 1 + static_cast<int>(rng() % 2);
    const std::optional<int> optimum = OracleOptimum(net, requests, cfg);
    ASSERT_TRUE(optimum);
    const RunResult r = filterless::Run(net, requests, cfg);
    EXPECT_LE(r.design.z_lp, *optimum + 1e-6) << "trial " << trial;
    EXPECT_LE(*optimum, r.design.W) << "trial " << trial;
    if (r.log.certified && r.design.epsilon == 0.0) {
      EXPECT_EQ(r.design.W, *optimum) << "trial " << trial;
      ++certified_tight;
    }
  }
  EXPECT_GT(certified_tight, 0);
}

}  // namespace
}  // namespace filterless
