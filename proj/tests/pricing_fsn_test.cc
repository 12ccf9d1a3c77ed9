#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "filterless/pricing.h"

namespace filterless {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(FILTERLESS_TEST_DATA) + "/" + name;
}

Duals ZeroDuals(const Network& net, int num_requests) {
  Duals d;
  d.u2.assign(num_requests, 0.0);
  d.u6.assign(num_requests, 0.0);
  d.u3.assign(net.num_links(), 0.0);
  d.u5.assign(PairCount(num_requests), 0.0);
  return d;
}

bool IsTree(const Network& net, const std::vector<int>& edges) {
  std::vector<int> parent(net.num_nodes());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (int e : edges) {
    const int a = find(net.edge(e).u);
    const int b = find(net.edge(e).v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;  // A forest; connectivity is checked by the caller.
}

// Minimum reduced cost over every FSN, by enumeration.
double BruteForceMinReducedCost(const Network& net,
                                const std::vector<Request>& requests,
                                const Duals& duals, double reach) {
  const int E = net.num_edges();
  const int K = static_cast<int>(requests.size());
  double best = -duals.u4;  // Single edge, nothing served.
  for (int edge_mask = 1; edge_mask < (1 << E); ++edge_mask) {
    std::vector<int> tree;
    for (int e = 0; e < E; ++e) {
      if (edge_mask >> e & 1) tree.push_back(e);
    }
    if (!IsTree(net, tree)) continue;
    std::vector<int> nodes;
    for (int e : tree) {
      nodes.push_back(net.edge(e).u);
      nodes.push_back(net.edge(e).v);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.size() != tree.size() + 1) continue;  // Disconnected forest.
    std::vector<int> candidates;
    for (int e : tree) {
      candidates.push_back(net.edge(e).forward_link());
      candidates.push_back(net.edge(e).backward_link());
    }
    const int C = static_cast<int>(candidates.size());
    for (int link_mask = 0; link_mask < (1 << C); ++link_mask) {
      std::vector<int> links;
      for (int i = 0; i < C; ++i) {
        if (link_mask >> i & 1) links.push_back(candidates[i]);
      }
      std::vector<char> mask = LinkMask(net, links);
      std::vector<int> routable;
      for (int k = 0; k < K; ++k) {
        auto route = RouteInTree(net, mask, tree, requests[k]);
        if (route && RouteLength(net, *route) <= reach) routable.push_back(k);
      }
      const int R = static_cast<int>(routable.size());
      for (int served_mask = 0; served_mask < (1 << R); ++served_mask) {
        std::vector<int> served;
        for (int i = 0; i < R; ++i) {
          if (served_mask >> i & 1) served.push_back(routable[i]);
        }
        FsnConfig cfg = BuildFsnConfig(net, requests, tree, links, served);
        std::vector<char> carried(net.num_links(), 0);
        for (const auto& [k, flood] : cfg.propagation) {
          for (int l : flood) carried[l] = 1;
        }
        bool ok = true;
        for (int l : links) ok = ok && carried[l];
        if (!ok) continue;
        best = std::min(best, FsnReducedCost(cfg, duals));
      }
    }
  }
  return best;
}

TEST(BuildPpFsnTest, VariableCountsOnSevenNodeNetwork) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  std::vector<Request> requests = LoadDemandFile(DataPath("tree5.dem"), net);
  FsnPricingModel pp =
      BuildPpFsn(net, requests, ZeroDuals(net, 7), SolverConfig{});
  EXPECT_EQ(pp.num_edges, 11);
  EXPECT_EQ(pp.num_links, 22);
  EXPECT_EQ(pp.num_requests, 7);
  EXPECT_EQ(pp.model.num_variables(),
            11 + 7 + 22 + 7 + 2 * 7 * 22 + 21 + 7 * 6 * 22);
  EXPECT_EQ(pp.model.variable(pp.x(6)).name, "x_6");
  EXPECT_EQ(pp.model.variable(pp.theta(5, 6)).name, "theta_5_6");
  EXPECT_EQ(pp.model.variable(pp.omega(6, 5, 21)).name, "omega_6_5_21");
  EXPECT_EQ(pp.model.variable(pp.omega(0, 1, 0)).name, "omega_0_1_0");
  for (const milp::Variable& v : pp.model.variables()) {
    EXPECT_TRUE(v.integer);
    EXPECT_EQ(v.upper, 1.0);
  }
  EXPECT_NO_THROW(pp.model.Validate());
}

TEST(SeparateSubtoursTest, Examples) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  std::vector<double> alpha(net.num_edges(), 0.0);
  auto select = [&](int u, int v) { alpha[net.FindEdge(u - 1, v - 1)] = 1; };
  // Triangle 1-2-3.
  select(1, 2);
  select(1, 3);
  select(2, 3);
  std::vector<SubtourCut> cuts = SeparateSubtours(net, alpha);
  ASSERT_EQ(cuts.size(), 1u);
  EXPECT_EQ(cuts[0].rhs, 2);
  EXPECT_EQ(cuts[0].edges.size(), 3u);

  // Forest.
  std::fill(alpha.begin(), alpha.end(), 0.0);
  select(1, 2);
  select(3, 4);
  select(4, 6);
  EXPECT_TRUE(SeparateSubtours(net, alpha).empty());

  // Two disjoint triangles plus a bridge.
  Network two;
  for (int v = 0; v < 6; ++v) two.AddNode("n" + std::to_string(v));
  two.AddEdge(0, 1, 1);
  two.AddEdge(1, 2, 1);
  two.AddEdge(0, 2, 1);
  two.AddEdge(3, 4, 1);
  two.AddEdge(4, 5, 1);
  two.AddEdge(3, 5, 1);
  two.AddEdge(2, 3, 1);
  std::vector<double> both = {1, 1, 1, 1, 1, 1, 0};
  cuts = SeparateSubtours(two, both);
  ASSERT_EQ(cuts.size(), 2u);
  EXPECT_EQ(cuts[0].rhs, 2);
  EXPECT_EQ(cuts[1].rhs, 2);
  // The bridge belongs to neither node set.
  for (const SubtourCut& cut : cuts) {
    EXPECT_EQ(std::count(cut.edges.begin(), cut.edges.end(), 6), 0);
  }
  // Joined by the bridge: one component, one cut over all seven edges.
  both[6] = 1;
  cuts = SeparateSubtours(two, both);
  ASSERT_EQ(cuts.size(), 1u);
  EXPECT_EQ(cuts[0].rhs, 5);
  EXPECT_EQ(cuts[0].edges.size(), 7u);
}

TEST(PriceFsnTest, ZeroDualsGiveNoColumn) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  std::vector<Request> requests = LoadDemandFile(DataPath("tree5.dem"), net);
  PricingResult r = PriceFsn(net, requests, ZeroDuals(net, 7), SolverConfig{},
                             60.0);
  EXPECT_FALSE(r.fsn);
  EXPECT_TRUE(r.proven);
}

TEST(PriceFsnTest, TwoNodeSingleRequest) {
  Network net = LoadTopologyFile(DataPath("two_node.top"));
  std::vector<Request> requests = {{0, 0, 1}};
  Duals duals = ZeroDuals(net, 1);
  duals.u2[0] = 1.0;
  PricingResult r = PriceFsn(net, requests, duals, SolverConfig{}, 60.0);
  ASSERT_TRUE(r.fsn);
  EXPECT_NEAR(r.objective, -1.0, 1e-9);
  EXPECT_NEAR(r.reduced_cost, -1.0, 1e-9);
  EXPECT_EQ(r.fsn->tree_edges, std::vector<int>({0}));
  EXPECT_EQ(r.fsn->links, std::vector<int>({0}));
  EXPECT_EQ(r.fsn->served, std::vector<int>({0}));
}

TEST(PriceFsnTest, LargeDualAttractsItsRequest) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  std::vector<Request> requests = LoadDemandFile(DataPath("tree5.dem"), net);
  Duals duals = ZeroDuals(net, 7);
  duals.u2[5] = 10.0;
  // Make every link slightly expensive so the column stays small.
  std::fill(duals.u3.begin(), duals.u3.end(), -0.1);
  PricingResult r = PriceFsn(net, requests, duals, SolverConfig{}, 60.0);
  ASSERT_TRUE(r.fsn);
  EXPECT_TRUE(r.fsn->Serves(5));
  EXPECT_NEAR(r.objective, -10.0 + 0.2, 1e-9);
  EXPECT_TRUE(VerifyFsnConfig(*r.fsn, net, requests, 1500).empty());
}

TEST(PriceFsnTest, ReachLimitsTheRoute) {
  Network net = LoadTopologyFile(DataPath("path3.top"));
  std::vector<Request> requests = {{0, 0, 2}};
  Duals duals = ZeroDuals(net, 1);
  duals.u2[0] = 1.0;
  SolverConfig cfg;
  cfg.reach_km = 700.0;
  EXPECT_FALSE(PriceFsn(net, requests, duals, cfg, 60.0).fsn);
  cfg.restrict_routing_variables = true;
  EXPECT_FALSE(PriceFsn(net, requests, duals, cfg, 60.0).fsn);
  cfg.reach_km = 800.0;
  PricingResult r = PriceFsn(net, requests, duals, cfg, 60.0);
  ASSERT_TRUE(r.fsn);
  EXPECT_EQ(r.fsn->routes.at(0).size(), 2u);
}

TEST(PriceFsnTest, FourCycleNeedsSubtourCuts) {
  // A 4-cycle where every link is attractive: the best column is a spanning
  // path, and the cycle must be cut off lazily.
  Network net;
  for (int v = 0; v < 4; ++v) net.AddNode("n" + std::to_string(v));
  for (int v = 0; v < 4; ++v) net.AddEdge(v, (v + 1) % 4, 100);
  std::vector<Request> requests;
  for (int v = 0; v < 4; ++v) {
    requests.push_back({v, v, (v + 1) % 4});
  }
  Duals duals = ZeroDuals(net, 4);
  std::fill(duals.u2.begin(), duals.u2.end(), 1.0);
  PricingResult r = PriceFsn(net, requests, duals, SolverConfig{}, 60.0);
  ASSERT_TRUE(r.fsn);
  EXPECT_EQ(r.fsn->tree_edges.size(), 3u);
  EXPECT_NEAR(r.objective,
              BruteForceMinReducedCost(net, requests, duals, 1500), 1e-9);
}

TEST(PriceFsnPropertyTest, MatchesEnumerationOnTinyNetworks) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int improving = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Network net;
    const int n = 3 + static_cast<int>(rng() % 2);
    for (int v = 0; v < n; ++v) net.AddNode("n" + std::to_string(v));
    for (int v = 1; v < n; ++v) {
      net.AddEdge(static_cast<int>(rng() % v), v, 100.0 + rng() % 900);
    }
    if (n == 4 && rng() % 2 == 0 && net.FindLink(0, 3) < 0) {
      net.AddEdge(0, 3, 300.0);
    }
    std::vector<Request> requests;
    const int K = 2 + static_cast<int>(rng() % 2);
    while (static_cast<int>(requests.size()) < K) {
      const int s = static_cast<int>(rng() % n);
      const int d = static_cast<int>(rng() % n);
      if (s != d) requests.push_back({static_cast<int>(requests.size()), s, d});
    }
    Duals duals = ZeroDuals(net, K);
    for (double& u : duals.u2) u = unit(rng) * 2.0;
    for (double& u : duals.u3) u = -unit(rng) * 0.8;
    for (double& u : duals.u5) u = unit(rng) < 0.5 ? -unit(rng) : 0.0;
    duals.u4 = unit(rng) < 0.3 ? -unit(rng) * 0.5 : 0.0;
    SolverConfig cfg;
    cfg.reach_km = 1200.0;
    cfg.restrict_routing_variables = trial % 2 == 1;

    const double brute = BruteForceMinReducedCost(net, requests, duals, 1200.0);
    PricingResult r = PriceFsn(net, requests, duals, cfg, 60.0);
    ASSERT_TRUE(r.proven);
    if (brute < -cfg.rc_tolerance) {
      ASSERT_TRUE(r.fsn) << "trial " << trial;
      EXPECT_NEAR(r.objective, brute, 1e-7) << "trial " << trial;
      EXPECT_NEAR(r.reduced_cost, brute, 1e-7);
      EXPECT_TRUE(VerifyFsnConfig(*r.fsn, net, requests, 1200.0).empty());
      ++improving;
    } else {
      EXPECT_FALSE(r.fsn) << "trial " << trial;
    }
  }
  EXPECT_GT(improving, 20);
}

}  // namespace
}  // namespace filterless
