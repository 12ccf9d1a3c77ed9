#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "filterless/fsn.h"
#include "filterless/topology.h"

namespace filterless {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(FILTERLESS_TEST_DATA) + "/" + name;
}

// Five-node tree instance with seven requests, ids in file order:
// 0 k13, 1 k53, 2 k35, 3 k21, 4 k12, 5 k42, 6 k34.
struct TreeInstance {
  Network net = LoadTopologyFile(DataPath("tree5.top"));
  std::vector<Request> requests = LoadDemandFile(DataPath("tree5.dem"), net);

  int L(const std::string& u, const std::string& v) const {
    return net.FindLink(*net.FindNode("v" + u), *net.FindNode("v" + v));
  }
  std::vector<int> Links(std::initializer_list<const char*> pairs) const {
    std::vector<int> out;
    for (const char* p : pairs) out.push_back(L(std::string(1, p[0]), std::string(1, p[1])));
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<int> AllEdges() const { return {0, 1, 2, 3}; }
  std::vector<int> AllLinks() const {
    std::vector<int> out(net.num_links());
    for (int l = 0; l < net.num_links(); ++l) out[l] = l;
    return out;
  }
};

// Fixed-point iteration of the flood rule, kept naive on purpose.
std::set<int> NaiveFlood(const Network& net, const std::vector<char>& fsn,
                         int first) {
  std::set<int> flood = {first};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int l = 0; l < net.num_links(); ++l) {
      if (!fsn[l] || flood.count(l) || flood.count(ReverseLink(l))) continue;
      for (int in : flood) {
        if (net.link(in).to == net.link(l).from) {
          flood.insert(l);
          changed = true;
          break;
        }
      }
    }
  }
  return flood;
}

TEST(RouteInTreeTest, TreeExamples) {
  TreeInstance t;
  std::vector<char> all = LinkMask(t.net, t.AllLinks());
  EXPECT_EQ(*RouteInTree(t.net, all, t.AllEdges(), t.requests[1]),
            std::vector<int>({t.L("5", "3")}));
  EXPECT_EQ(*RouteInTree(t.net, all, t.AllEdges(), t.requests[5]),
            std::vector<int>({t.L("4", "3"), t.L("3", "2")}));
  std::vector<char> missing = all;
  missing[t.L("1", "3")] = 0;
  EXPECT_FALSE(RouteInTree(t.net, missing, t.AllEdges(), t.requests[0]));
  // Endpoint off the tree.
  EXPECT_FALSE(RouteInTree(t.net, all, {1, 2, 3}, t.requests[0]));
}

TEST(PropagateTest, TreeExamples) {
  TreeInstance t;
  std::vector<char> all = LinkMask(t.net, t.AllLinks());
  EXPECT_EQ(Propagate(t.net, all, {t.L("1", "3")}),
            t.Links({"13", "32", "34", "35"}));
  std::vector<char> only = LinkMask(t.net, {t.L("5", "3")});
  EXPECT_EQ(Propagate(t.net, only, {t.L("5", "3")}),
            std::vector<int>({t.L("5", "3")}));
  EXPECT_EQ(Propagate(t.net, all, {t.L("2", "3"), t.L("3", "1")}),
            t.Links({"23", "31", "34", "35"}));
  EXPECT_THROW(Propagate(t.net, only, {t.L("3", "5")}), std::invalid_argument);
  EXPECT_THROW(Propagate(t.net, all, {}), std::invalid_argument);
}

TEST(FsnConfigTest, SevenRequestInstance) {
  TreeInstance t;
  FsnConfig cfg = BuildFsnConfig(t.net, t.requests, t.AllEdges(),
                                 t.AllLinks(), {0, 1, 2, 3, 4, 5, 6});
  const std::vector<std::vector<int>> floods = {
      t.Links({"13", "32", "34", "35"}), t.Links({"53", "31", "32", "34"}),
      t.Links({"35"}),                   t.Links({"23", "31", "34", "35"}),
      t.Links({"13", "32", "34", "35"}), t.Links({"43", "31", "32", "35"}),
      t.Links({"34"})};
  for (int k = 0; k < 7; ++k) EXPECT_EQ(cfg.propagation.at(k), floods[k]) << k;

  // Hand-derived conflict pairs.
  ConflictMatrix expected;
  for (auto [a, b] : std::vector<std::pair<int, int>>{
           {0, 2}, {0, 4}, {0, 5}, {0, 6}, {1, 3}, {1, 4}, {1, 5}, {1, 6},
           {2, 3}, {2, 4}, {2, 5}, {3, 5}, {3, 6}, {4, 5}, {4, 6}}) {
    expected.Set(a, b);
  }
  EXPECT_EQ(cfg.conflicts, expected);
  EXPECT_FALSE(cfg.conflicts.Get(0, 1));
  EXPECT_TRUE(cfg.conflicts.Get(5, 4));
  EXPECT_TRUE(VerifyFsnConfig(cfg, t.net, t.requests, 1500.0).empty());

  // Coloring 13:0 53:0 35:3 21:1 12:1 42:2 34:2.
  std::vector<int> wavelength = {0, 0, 3, 1, 1, 2, 2};
  for (auto [a, b] : expected.pairs()) {
    ASSERT_NE(wavelength[a], wavelength[b]);
  }
  LoadReport loads = LinkLoads(t.net, {cfg}, wavelength);
  EXPECT_EQ(loads.total[t.L("3", "5")], 4);
  EXPECT_EQ(loads.filtered[t.L("3", "5")], 1);
  for (int l = 0; l < t.net.num_links(); ++l) {
    EXPECT_LE(loads.filtered[l], loads.total[l]);
  }
  EXPECT_EQ(loads.max_total,
            *std::max_element(loads.total.begin(), loads.total.end()));
}

TEST(FsnConfigTest, SingleRequestHasNoConflicts) {
  TreeInstance t;
  FsnConfig cfg = BuildFsnConfig(t.net, t.requests, {0, 1, 2, 3},
                                 t.AllLinks(), {3});
  EXPECT_TRUE(cfg.conflicts.empty());
  LoadReport loads = LinkLoads(t.net, {cfg}, {-1, -1, -1, 0});
  EXPECT_EQ(loads.max_filtered, 1);
}

TEST(LinkLoadsTest, EmptySelection) {
  TreeInstance t;
  LoadReport loads = LinkLoads(t.net, {}, {});
  EXPECT_EQ(loads.max_total, 0);
  EXPECT_EQ(loads.max_filtered, 0);
  EXPECT_EQ(loads.total.size(), static_cast<size_t>(t.net.num_links()));
}

TEST(LinkLoadsTest, OverlapRejected) {
  TreeInstance t;
  FsnConfig cfg = BuildFsnConfig(t.net, t.requests, {0, 1, 2, 3},
                                 t.AllLinks(), {0});
  EXPECT_THROW(LinkLoads(t.net, {cfg, cfg}, {0}), std::invalid_argument);
}

TEST(VerifyTest, CycleIsASubtour) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  std::vector<Request> requests = {{0, *net.FindNode("v1"), *net.FindNode("v2")}};
  FsnConfig cfg;
  cfg.tree_edges = {0, 1, 3};  // {1,2} {1,3} {2,3}
  cfg.nodes = {0, 1, 2};
  cfg.links = {0};
  cfg.served = {0};
  cfg.routes[0] = {0};
  cfg.propagation[0] = {0};
  std::vector<std::string> violations =
      VerifyFsnConfig(cfg, net, requests, 1500.0);
  ASSERT_FALSE(violations.empty());
  EXPECT_TRUE(std::any_of(violations.begin(), violations.end(),
                          [](const std::string& s) {
                            return s.rfind("subtour: ", 0) == 0;
                          }));
}

TEST(VerifyTest, ReachExceeded) {
  std::istringstream in("NODES 3\nA\nB\nC\nEDGES 2\nA B 800\nB C 800\n");
  Network net = ParseTopology(in);
  std::vector<Request> requests = {{0, 0, 2}};
  FsnConfig cfg = BuildFsnConfig(net, requests, {0, 1}, {0, 2}, {0});
  std::vector<std::string> violations =
      VerifyFsnConfig(cfg, net, requests, 1500.0);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rfind("reach exceeded: k=0", 0), 0u) << violations[0];
  EXPECT_TRUE(VerifyFsnConfig(cfg, net, requests, 1600.0).empty());
}

TEST(VerifyTest, StructuralViolations) {
  TreeInstance t;
  FsnConfig good = BuildFsnConfig(t.net, t.requests, t.AllEdges(),
                                  t.AllLinks(), {0, 1, 2, 3, 4, 5, 6});
  auto first = [&](const FsnConfig& cfg) {
    std::vector<std::string> v = VerifyFsnConfig(cfg, t.net, t.requests, 1500);
    return v.empty() ? std::string() : v.front();
  };

  FsnConfig unused = BuildFsnConfig(t.net, t.requests, t.AllEdges(),
                                    t.AllLinks(), {0});
  EXPECT_EQ(first(unused).rfind("unused link", 0), 0u);

  FsnConfig bad_conflicts = good;
  bad_conflicts.conflicts.Set(0, 1);
  EXPECT_EQ(first(bad_conflicts), "conflict matrix mismatch");

  FsnConfig bad_flood = good;
  bad_flood.propagation[2] = {t.L("3", "5"), t.L("5", "3")};
  std::vector<std::string> v = VerifyFsnConfig(bad_flood, t.net, t.requests, 1500);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const std::string& s) {
    return s.rfind("propagates both ways", 0) == 0;
  }));

  FsnConfig bad_route = good;
  bad_route.routes[5] = {t.L("4", "3")};
  EXPECT_EQ(first(bad_route).rfind("route is not the tree path", 0), 0u);

  FsnConfig no_edge = good;
  no_edge.tree_edges = {0, 1, 2};
  no_edge.nodes = {0, 1, 2, 3};
  v = VerifyFsnConfig(no_edge, t.net, t.requests, 1500);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const std::string& s) {
    return s.rfind("link without tree edge", 0) == 0;
  }));

  FsnConfig empty;
  EXPECT_EQ(first(empty), "empty tree");
}

TEST(LinkDisjointTest, OppositeOrientationsShareEdges) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  auto link = [&net](const char* u, const char* v) {
    return net.FindLink(*net.FindNode(u), *net.FindNode(v));
  };
  FsnConfig a;
  a.links = {link("v2", "v7"), link("v7", "v3")};
  FsnConfig b;
  b.links = {link("v7", "v2"), link("v3", "v7")};
  EXPECT_TRUE(LinkDisjoint({a, b}));
  b.links.push_back(link("v2", "v7"));
  EXPECT_FALSE(LinkDisjoint({a, b}));
}

struct RandomFsn {
  Network net;
  std::vector<Request> requests;
  std::vector<int> tree;
  std::vector<int> links;
};

RandomFsn MakeRandomFsn(std::mt19937& rng) {
  RandomFsn r;
  const int n = 2 + static_cast<int>(rng() % 5);
  for (int v = 0; v < n; ++v) r.net.AddNode("n" + std::to_string(v));
  // Random spanning tree plus a few chords outside the FSN support.
  for (int v = 1; v < n; ++v) {
    r.tree.push_back(r.net.AddEdge(static_cast<int>(rng() % v), v,
                                   10.0 + rng() % 500));
  }
  for (int extra = 0; extra < 2; ++extra) {
    const int u = static_cast<int>(rng() % n);
    const int v = static_cast<int>(rng() % n);
    if (u != v && r.net.FindLink(u, v) < 0) r.net.AddEdge(u, v, 50.0);
  }
  for (int e : r.tree) {
    const int mode = static_cast<int>(rng() % 4);
    if (mode != 1) r.links.push_back(r.net.edge(e).forward_link());
    if (mode != 0) r.links.push_back(r.net.edge(e).backward_link());
  }
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      if (s != d && rng() % 2 == 0) {
        r.requests.push_back({static_cast<int>(r.requests.size()), s, d});
      }
    }
  }
  return r;
}

TEST(FsnPropertyTest, FloodAndConflictOracles) {
  std::mt19937 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    RandomFsn r = MakeRandomFsn(rng);
    const std::vector<char> mask = LinkMask(r.net, r.links);
    std::vector<int> served;
    for (const Request& q : r.requests) {
      if (RouteInTree(r.net, mask, r.tree, q)) served.push_back(q.id);
    }
    FsnConfig cfg = BuildFsnConfig(r.net, r.requests, r.tree, r.links, served);
    for (int k : served) {
      const std::vector<int>& flood = cfg.propagation.at(k);
      std::set<int> naive = NaiveFlood(r.net, mask, cfg.routes.at(k).front());
      ASSERT_EQ(std::vector<int>(naive.begin(), naive.end()), flood);
      // Idempotence: flooding from every flood link stays inside.
      const std::vector<char> flood_mask = LinkMask(r.net, flood);
      for (int l : flood) {
        for (int out : r.net.out_links(r.net.link(l).to)) {
          if (mask[out] && !flood_mask[ReverseLink(out)]) {
            ASSERT_TRUE(flood_mask[out]);
          }
        }
      }
      // Monotone in the FSN link set.
      std::vector<int> all_tree_links;
      for (int e : r.tree) {
        all_tree_links.push_back(r.net.edge(e).forward_link());
        all_tree_links.push_back(r.net.edge(e).backward_link());
      }
      std::vector<int> bigger =
          Propagate(r.net, LinkMask(r.net, all_tree_links), cfg.routes.at(k));
      ASSERT_TRUE(std::includes(bigger.begin(), bigger.end(), flood.begin(),
                                flood.end()));
    }
    // Brute-force triple loop over (k, k2, link).
    ConflictMatrix brute;
    for (int k : served) {
      for (int k2 : served) {
        if (k == k2) continue;
        const std::vector<char> psi = LinkMask(r.net, cfg.routes.at(k));
        const std::vector<char> psi2 = LinkMask(r.net, cfg.routes.at(k2));
        const std::vector<char> phi2 = LinkMask(r.net, cfg.propagation.at(k2));
        for (int l = 0; l < r.net.num_links(); ++l) {
          if ((psi[l] && psi2[l]) || (psi[l] && phi2[l])) brute.Set(k, k2);
        }
      }
    }
    ASSERT_EQ(brute, cfg.conflicts);

    // Pruned to carried links, the configuration verifies.
    std::set<int> used;
    for (const auto& [k, flood] : cfg.propagation) used.insert(flood.begin(), flood.end());
    if (!served.empty()) {
      std::set<int> used_edges;
      for (int l : used) used_edges.insert(r.net.link(l).edge);
      FsnConfig pruned = BuildFsnConfig(
          r.net, r.requests, std::vector<int>(r.tree.begin(), r.tree.end()),
          std::vector<int>(used.begin(), used.end()), served);
      std::vector<std::string> v = VerifyFsnConfig(pruned, r.net, r.requests, 1e9);
      EXPECT_TRUE(v.empty()) << v.front();
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}

}  // namespace
}  // namespace filterless
