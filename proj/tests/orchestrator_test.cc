#include "filterless/orchestrator.h"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace filterless {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(FILTERLESS_TEST_DATA) + "/" + name;
}

int NumColors(const std::vector<int>& color) {
  return color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
}

bool Proper(const std::vector<int>& color,
            const std::vector<std::pair<int, int>>& edges) {
  for (auto [a, b] : edges) {
    if (color[a] == color[b]) return false;
  }
  return true;
}

TEST(WelshPowellTest, SmallGraphs) {
  EXPECT_EQ(NumColors(WelshPowell(7, {})), 1);

  std::vector<std::pair<int, int>> k4;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) k4.push_back({a, b});
  }
  EXPECT_EQ(NumColors(WelshPowell(4, k4)), 4);

  std::vector<std::pair<int, int>> star;
  for (int leaf = 1; leaf <= 5; ++leaf) star.push_back({0, leaf});
  std::vector<int> color = WelshPowell(6, star);
  EXPECT_EQ(NumColors(color), 2);
  EXPECT_EQ(color[0], 0);

  std::vector<std::pair<int, int>> c5;
  for (int v = 0; v < 5; ++v) c5.push_back({v, (v + 1) % 5});
  color = WelshPowell(5, c5);
  EXPECT_EQ(NumColors(color), 3);
  EXPECT_TRUE(Proper(color, c5));
}

TEST(WelshPowellTest, OrderIsDegreeThenId) {
  // Path 0-1-2: the middle vertex goes first.
  EXPECT_EQ(WelshPowell(3, {{0, 1}, {1, 2}}), (std::vector<int>{1, 0, 1}));
  // Equal degrees: ascending ids.
  EXPECT_EQ(WelshPowell(4, {{0, 1}, {2, 3}}), (std::vector<int>{0, 1, 0, 1}));
}

TEST(WelshPowellTest, ProperAndWithinMaxDegreePlusOne) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 50);
    const double density = (rng() % 100) / 100.0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(n, 0);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if ((rng() % 1000) / 1000.0 < density) {
          edges.push_back({a, b});
          ++degree[a];
          ++degree[b];
        }
      }
    }
    const std::vector<int> color = WelshPowell(n, edges);
    ASSERT_TRUE(Proper(color, edges));
    EXPECT_LE(NumColors(color), *std::max_element(degree.begin(), degree.end()) + 1);
  }
}

double TreeLength(const Network& net, const std::vector<int>& edges) {
  double total = 0.0;
  for (int e : edges) total += net.edge(e).length_km;
  return total;
}

TEST(MinimumSpanningTreeTest, MatchesEnumeration) {
  const Network net = LoadTopologyFile(DataPath("fig1.top"));
  const std::vector<int> tree = MinimumSpanningTree(net);
  ASSERT_EQ(static_cast<int>(tree.size()), net.num_nodes() - 1);

  double best = 1e18;
  const int m = net.num_edges();
  for (int mask = 0; mask < (1 << m); ++mask) {
    if (__builtin_popcount(mask) != net.num_nodes() - 1) continue;
    std::vector<int> parent(net.num_nodes());
    for (int v = 0; v < net.num_nodes(); ++v) parent[v] = v;
    auto find = [&parent](int x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    bool acyclic = true;
    std::vector<int> edges;
    for (int e = 0; e < m && acyclic; ++e) {
      if (!(mask >> e & 1)) continue;
      const int a = find(net.edge(e).u), b = find(net.edge(e).v);
      if (a == b) acyclic = false;
      parent[a] = b;
      edges.push_back(e);
    }
    if (acyclic) best = std::min(best, TreeLength(net, edges));
  }
  EXPECT_DOUBLE_EQ(TreeLength(net, tree), best);
}

TEST(MinimumSpanningTreeTest, DisconnectedThrows) {
  Network net;
  net.AddNode("a");
  net.AddNode("b");
  net.AddNode("c");
  net.AddEdge(0, 1, 10);
  EXPECT_THROW(MinimumSpanningTree(net), std::invalid_argument);
}

TEST(InitialSolutionTest, TreeInstance) {
  const Network net = LoadTopologyFile(DataPath("tree5.top"));
  const std::vector<Request> requests =
      LoadDemandFile(DataPath("tree5.dem"), net);
  const InitialSolution initial =
      BuildInitialSolution(net, requests, SolverConfig{});
  EXPECT_TRUE(initial.excluded.empty());
  EXPECT_EQ(initial.fsn.links.size(), 8u);
  EXPECT_EQ(initial.fsn.served.size(), 7u);
  EXPECT_LE(initial.colors.size(), 4u);
  std::vector<int> color(requests.size(), -1);
  for (size_t c = 0; c < initial.colors.size(); ++c) {
    for (int k : initial.colors[c].members) {
      EXPECT_EQ(color[k], -1);
      color[k] = static_cast<int>(c);
    }
  }
  for (auto [k, k2] : initial.fsn.conflicts.pairs()) {
    EXPECT_NE(color[k], color[k2]);
  }
}

TEST(InitialSolutionTest, SingleRequest) {
  const Network net = LoadTopologyFile(DataPath("fig1.top"));
  const std::vector<Request> requests = {{0, 0, 6}};
  const InitialSolution initial =
      BuildInitialSolution(net, requests, SolverConfig{});
  ASSERT_EQ(initial.colors.size(), 1u);
  EXPECT_EQ(initial.colors[0].members, std::vector<int>{0});
  EXPECT_EQ(initial.fsn.served, std::vector<int>{0});
}

TEST(InitialSolutionTest, OutOfReachRequestIsExcluded) {
  const Network net = LoadTopologyFile(DataPath("path3.top"));
  const std::vector<Request> requests = {{0, 0, 1}, {1, 0, 2}};
  SolverConfig cfg;
  cfg.reach_km = 500;
  const InitialSolution initial = BuildInitialSolution(net, requests, cfg);
  EXPECT_EQ(initial.excluded, std::vector<int>{1});
  EXPECT_EQ(initial.fsn.served, std::vector<int>{0});
  // The A->B broadcast spills onto B->C; nothing uses the reverse links.
  EXPECT_EQ(initial.fsn.links,
            (std::vector<int>{net.FindLink(0, 1), net.FindLink(1, 2)}));
}

struct TreeRun {
  Network net = LoadTopologyFile(DataPath("tree5.top"));
  std::vector<Request> requests = LoadDemandFile(DataPath("tree5.dem"), net);
  SolverConfig cfg;
  TreeRun() { cfg.max_fsn = 1; }
};

TEST(RunTest, TreeInstanceNeedsFourWavelengths) {
  TreeRun t;
  const RunResult r = filterless::Run(t.net, t.requests, t.cfg);
  EXPECT_EQ(r.log.termination, Termination::kOptimal);
  EXPECT_TRUE(r.log.certified);
  EXPECT_EQ(r.design.W, 4);
  EXPECT_NEAR(r.design.z_lp, 4.0, 1e-6);
  EXPECT_NEAR(r.design.epsilon, 0.0, 1e-9);
  EXPECT_TRUE(r.design.integer_optimal);
  ASSERT_EQ(r.design.selected_fsns.size(), 1u);
  EXPECT_EQ(r.design.loads.max_total, 4);
}

TEST(RunTest, LogInvariants) {
  TreeRun t;
  t.cfg.max_fsn.reset();
  const RunResult r = filterless::Run(t.net, t.requests, t.cfg);
  ASSERT_FALSE(r.log.iterations.empty());
  for (size_t i = 1; i < r.log.iterations.size(); ++i) {
    EXPECT_LE(r.log.iterations[i].lp_value,
              r.log.iterations[i - 1].lp_value + 1e-9);
  }
  int fsn_added = 0, color_added = 0;
  for (size_t i = 0; i + 1 < r.log.iterations.size(); ++i) {
    const CgIteration& it = r.log.iterations[i];
    EXPECT_NE(it.pricer, "none");
    EXPECT_LT(it.reduced_cost, -t.cfg.rc_tolerance);
    EXPECT_NEAR(it.reduced_cost, it.pricing_objective, 1e-6);
    (it.pricer == "fsn" ? fsn_added : color_added)++;
  }
  EXPECT_EQ(r.log.iterations.back().pricer, "none");
  EXPECT_EQ(static_cast<int>(r.pool.fsn_columns().size()),
            r.log.initial_fsn_columns + fsn_added);
  EXPECT_EQ(static_cast<int>(r.pool.color_columns().size()),
            r.log.initial_color_columns + color_added);
  EXPECT_TRUE(r.log.certified);
  EXPECT_GE(r.log.min_pooled_reduced_cost, -t.cfg.rc_tolerance);
  EXPECT_GE(r.design.epsilon, 0.0);
  EXPECT_GE(r.design.W, 1);
}

TEST(RunTest, Deterministic) {
  TreeRun t;
  t.cfg.max_fsn = 2;
  const RunResult a = filterless::Run(t.net, t.requests, t.cfg);
  const RunResult b = filterless::Run(t.net, t.requests, t.cfg);
  ASSERT_EQ(a.log.iterations.size(), b.log.iterations.size());
  for (size_t i = 0; i < a.log.iterations.size(); ++i) {
    EXPECT_EQ(a.log.iterations[i].lp_value, b.log.iterations[i].lp_value);
    EXPECT_EQ(a.log.iterations[i].pricer, b.log.iterations[i].pricer);
    EXPECT_EQ(a.log.iterations[i].column, b.log.iterations[i].column);
  }
  EXPECT_EQ(a.design.wavelength, b.design.wavelength);
  EXPECT_EQ(a.design.serving_fsn, b.design.serving_fsn);
}

TEST(RunTest, SingleRequest) {
  const Network net = LoadTopologyFile(DataPath("two_node.top"));
  const RunResult r = filterless::Run(net, {{0, 0, 1}}, SolverConfig{});
  EXPECT_NEAR(r.log.z_lp, 1.0, 1e-9);
  EXPECT_EQ(r.design.W, 1);
  EXPECT_TRUE(r.log.certified);
}

TEST(RunTest, ProgressLinePerIteration) {
  const Network net = LoadTopologyFile(DataPath("path3.top"));
  std::ostringstream progress;
  const RunResult r =
      filterless::Run(net, {{0, 0, 2}, {1, 2, 0}, {2, 1, 2}}, SolverConfig{}, &progress);
  const std::string text = progress.str();
  EXPECT_EQ(static_cast<size_t>(std::count(text.begin(), text.end(), '\n')),
            r.log.iterations.size() + 1);
}

TEST(RunTest, PricingCoversRequestOutsideInitialTree) {
  // The spanning tree routes a->c over 200 km; only the direct edge fits.
  Network net;
  net.AddNode("a");
  net.AddNode("b");
  net.AddNode("c");
  net.AddEdge(0, 1, 100);
  net.AddEdge(1, 2, 100);
  net.AddEdge(0, 2, 140);
  SolverConfig cfg;
  cfg.reach_km = 150;
  const RunResult r = filterless::Run(net, {{0, 0, 1}, {1, 0, 2}}, cfg);
  EXPECT_FALSE(r.log.warnings.empty());
  EXPECT_TRUE(r.log.certified);
  const FsnConfig& serving = r.design.selected_fsns[r.design.serving_fsn[1]];
  EXPECT_EQ(serving.routes.at(1), std::vector<int>{net.FindLink(0, 2)});
}

TEST(RunTest, UnservableRequestIsInfeasible) {
  const Network net = LoadTopologyFile(DataPath("path3.top"));
  SolverConfig cfg;
  cfg.reach_km = 500;
  EXPECT_THROW(filterless::Run(net, {{0, 0, 1}, {1, 0, 2}}, cfg), InfeasibleMaster);
}

TEST(RunTest, IterationLimitIsReported) {
  TreeRun t;
  t.cfg.max_fsn = 2;
  t.cfg.max_cg_iterations = 1;
  const RunResult r = filterless::Run(t.net, t.requests, t.cfg);
  if (r.log.iterations.size() == 2) {
    EXPECT_EQ(r.log.termination, Termination::kIterationLimit);
    EXPECT_FALSE(r.log.certified);
  }
  EXPECT_GE(r.design.W, 1);
}

// With one FSN allowed, the spanning tree leaves requests beyond the reach and
// the master only becomes feasible once a single tree serves all of them.
TEST(RunTest, FeasibilityPhaseFindsSingleServingTree) {
  std::istringstream top(
      "NODES 6\nn0\nn1\nn2\nn3\nn4\nn5\nEDGES 7\n"
      "n0 n1 540\nn0 n2 777\nn1 n3 652\nn0 n4 627\n"
      "n1 n5 180\nn2 n4 646\nn3 n5 217\n");
  const Network net = ParseTopology(top);
  const std::vector<Request> requests = {{0, 5, 3}, {1, 3, 5}, {2, 4, 0},
                                         {3, 5, 4}, {4, 2, 1}, {5, 3, 0}};
  SolverConfig cfg;
  cfg.max_fsn = 1;
  ASSERT_FALSE(BuildInitialSolution(net, requests, cfg).excluded.empty());
  const RunResult r = filterless::Run(net, requests, cfg);
  EXPECT_FALSE(r.log.feasibility_iterations.empty());
  EXPECT_TRUE(r.log.certified);
  ASSERT_EQ(r.design.selected_fsns.size(), 1u);
  EXPECT_TRUE(VerifyFsnConfig(r.design.selected_fsns[0], net, requests,
                              cfg.reach_km)
                  .empty());
  EXPECT_EQ(r.design.W, 3);
  EXPECT_LE(r.design.z_lp, 3.0 + 1e-6);
  for (size_t i = 1; i < r.log.feasibility_iterations.size(); ++i) {
    EXPECT_LE(r.log.feasibility_iterations[i].lp_value,
              r.log.feasibility_iterations[i - 1].lp_value + 1e-9);
  }
}

}  // namespace
}  // namespace filterless
