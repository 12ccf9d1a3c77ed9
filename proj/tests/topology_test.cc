#include <random>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "filterless/topology.h"

namespace filterless {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(FILTERLESS_TEST_DATA) + "/" + name;
}

Network Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseTopology(in);
}

int ParseErrorLine(const std::string& text) {
  try {
    Parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

Network RandomNetwork(std::mt19937& rng, int nodes, double density) {
  Network net;
  for (int v = 0; v < nodes; ++v) net.AddNode("n" + std::to_string(v));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> km(1, 2000);
  for (int u = 0; u < nodes; ++u) {
    for (int v = u + 1; v < nodes; ++v) {
      if (coin(rng) < density) {
        // Randomize declared orientation too.
        if (coin(rng) < 0.5) {
          net.AddEdge(u, v, km(rng) / 4.0);
        } else {
          net.AddEdge(v, u, km(rng) / 4.0);
        }
      }
    }
  }
  return net;
}

TEST(ParseTopologyTest, SevenNodeExample) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  EXPECT_EQ(net.num_nodes(), 7);
  EXPECT_EQ(net.num_edges(), 11);
  EXPECT_EQ(net.num_links(), 22);
  EXPECT_TRUE(net.IsConnected());
  for (int l = 0; l < net.num_links(); ++l) {
    const Link& link = net.link(l);
    const int reverse = net.FindLink(link.to, link.from);
    ASSERT_EQ(reverse, ReverseLink(l));
    EXPECT_EQ(net.link(reverse).length_km, link.length_km);
    EXPECT_NE(link.from, link.to);
  }
}

TEST(ParseTopologyTest, TwoNodes) {
  Network net = LoadTopologyFile(DataPath("two_node.top"));
  ASSERT_EQ(net.num_nodes(), 2);
  ASSERT_EQ(net.num_links(), 2);
  EXPECT_EQ(net.link(0).length_km, 10.0);
  EXPECT_EQ(net.link(1).length_km, 10.0);
  EXPECT_EQ(net.LinkName(0), "A->B");
  EXPECT_EQ(net.LinkName(1), "B->A");
}

TEST(ParseTopologyTest, CommentsAndBlankLines) {
  Network net = Parse("# header\n\nNODES 2\n  # x\nA\nB\n\nEDGES 1\nA B 2.5\n");
  EXPECT_EQ(net.num_edges(), 1);
  EXPECT_EQ(net.edge(0).length_km, 2.5);
}

TEST(ParseTopologyTest, ErrorsNameTheLine) {
  EXPECT_EQ(ParseErrorLine("NODES 2\nA\nA\nEDGES 0\n"), 3);
  EXPECT_EQ(ParseErrorLine("NODES 2\nA\nB\nEDGES 1\nA A 5\n"), 5);
  EXPECT_EQ(ParseErrorLine("NODES 2\nA\nB\nEDGES 1\nA C 5\n"), 5);
  EXPECT_EQ(ParseErrorLine("NODES 2\nA\nB\nEDGES 1\nA B -1\n"), 5);
  EXPECT_EQ(ParseErrorLine("NODES 2\nA\nB\nEDGES 2\nA B 1\nB A 1\n"), 6);
  EXPECT_EQ(ParseErrorLine("NODES 2\nA\nB\nEDGES 2\nA B 1\n# c\nA B 3\n"), 7);
  EXPECT_EQ(ParseErrorLine("NODES 2\nA\nB\nEDGES 1\nA B x\n"), 5);
  EXPECT_EQ(ParseErrorLine("NODE 2\n"), 1);
  EXPECT_EQ(ParseErrorLine("NODES 2\nA\nB\nEDGES 1\nA B 1\nextra\n"), 6);
}

TEST(ParseTopologyTest, ErrorMessageMentionsLine) {
  try {
    Parse("NODES 1\nA\nEDGES 1\nA A 1\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("self-loop"), std::string::npos);
  }
}

TEST(NetworkTest, BuilderRejectsInvalidEdges) {
  Network net;
  net.AddNode("A");
  net.AddNode("B");
  EXPECT_THROW(net.AddNode("A"), std::invalid_argument);
  EXPECT_THROW(net.AddEdge(0, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(net.AddEdge(0, 2, 1.0), std::invalid_argument);
  EXPECT_THROW(net.AddEdge(0, 1, -1.0), std::invalid_argument);
  net.AddEdge(0, 1, 1.0);
  EXPECT_THROW(net.AddEdge(1, 0, 1.0), std::invalid_argument);
}

TEST(IncidenceTest, SevenNodeExampleNodeThree) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  Incidence inc = GetIncidence(net, "v3");
  EXPECT_EQ(inc.in.size(), 5u);
  EXPECT_EQ(inc.out.size(), 5u);
  std::set<std::set<std::string>> edges;
  for (int e : inc.cocycle) {
    edges.insert({net.node_name(net.edge(e).u), net.node_name(net.edge(e).v)});
  }
  std::set<std::set<std::string>> expected = {
      {"v1", "v3"}, {"v2", "v3"}, {"v3", "v4"}, {"v3", "v5"}, {"v3", "v7"}};
  EXPECT_EQ(edges, expected);
  for (int l : inc.in) EXPECT_EQ(net.link(l).to, *net.FindNode("v3"));
  for (int l : inc.out) EXPECT_EQ(net.link(l).from, *net.FindNode("v3"));
}

TEST(IncidenceTest, IsolatedNode) {
  Network net = Parse("NODES 3\nA\nB\nZ\nEDGES 1\nA B 1\n");
  Incidence inc = GetIncidence(net, "Z");
  EXPECT_TRUE(inc.in.empty());
  EXPECT_TRUE(inc.out.empty());
  EXPECT_TRUE(inc.cocycle.empty());
  EXPECT_FALSE(net.IsConnected());
}

TEST(IncidenceTest, TwoNodes) {
  Network net = LoadTopologyFile(DataPath("two_node.top"));
  Incidence inc = GetIncidence(net, "A");
  ASSERT_EQ(inc.in.size(), 1u);
  ASSERT_EQ(inc.out.size(), 1u);
  ASSERT_EQ(inc.cocycle.size(), 1u);
  EXPECT_EQ(net.LinkName(inc.in[0]), "B->A");
  EXPECT_EQ(net.LinkName(inc.out[0]), "A->B");
  EXPECT_EQ(inc.cocycle[0], 0);
}

TEST(IncidenceTest, UnknownNode) {
  Network net = LoadTopologyFile(DataPath("two_node.top"));
  EXPECT_THROW(GetIncidence(net, "C"), std::out_of_range);
}

TEST(ParseDemandsTest, MultiplicityExpansion) {
  Network net = LoadTopologyFile(DataPath("fig1.top"));
  std::istringstream in("v2 v3 2\n");
  std::vector<Request> requests = ParseDemands(in, net);
  ASSERT_EQ(requests.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(requests[i].id, i);
    EXPECT_EQ(requests[i].source, *net.FindNode("v2"));
    EXPECT_EQ(requests[i].destination, *net.FindNode("v3"));
  }
}

TEST(ParseDemandsTest, UniformOnTenNodes) {
  Network net;
  for (int v = 0; v < 10; ++v) net.AddNode("c" + std::to_string(v));
  std::istringstream in("UNIFORM\n");
  EXPECT_EQ(ParseDemands(in, net).size(), 90u);
}

TEST(ParseDemandsTest, FileWithComments) {
  Network net = LoadTopologyFile(DataPath("tree5.top"));
  std::vector<Request> requests = LoadDemandFile(DataPath("tree5.dem"), net);
  ASSERT_EQ(requests.size(), 7u);
  EXPECT_EQ(net.node_name(requests[1].source), "v5");
  EXPECT_EQ(net.node_name(requests[1].destination), "v3");
}

TEST(ParseDemandsTest, Errors) {
  Network net = LoadTopologyFile(DataPath("two_node.top"));
  auto line_of = [&net](const std::string& text) {
    std::istringstream in(text);
    try {
      ParseDemands(in, net);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("A B 0\n"), 1);
  EXPECT_EQ(line_of("A B 1\nA C 1\n"), 2);
  EXPECT_EQ(line_of("A A 1\n"), 1);
  EXPECT_EQ(line_of("A B 1.5\n"), 1);
  EXPECT_EQ(line_of("A B 1\nUNIFORM\n"), 2);
  EXPECT_EQ(line_of("UNIFORM\nA B 1\n"), 2);
}

TEST(SolverConfigTest, Validation) {
  SolverConfig config;
  EXPECT_NO_THROW(config.Validate());
  config.max_fsn = 0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config.max_fsn = 2;
  config.reach_km = 0.0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config.reach_km = 1500.0;
  config.rc_tolerance = -1.0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
}

TEST(TopologyPropertyTest, RoundTripAndDegreeSums) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int nodes = 1 + trial % 12;
    Network net = RandomNetwork(rng, nodes, 0.4);
    std::ostringstream out;
    WriteTopology(net, out);
    Network again = Parse(out.str());
    ASSERT_TRUE(net == again) << out.str();

    size_t out_sum = 0;
    size_t in_sum = 0;
    size_t cocycle_sum = 0;
    for (int v = 0; v < net.num_nodes(); ++v) {
      out_sum += net.out_links(v).size();
      in_sum += net.in_links(v).size();
      cocycle_sum += net.cocycle(v).size();
      EXPECT_EQ(net.in_links(v).size(), net.out_links(v).size());
      EXPECT_EQ(net.cocycle(v).size(), net.out_links(v).size());
    }
    EXPECT_EQ(out_sum, static_cast<size_t>(net.num_links()));
    EXPECT_EQ(in_sum, static_cast<size_t>(net.num_links()));
    EXPECT_EQ(cocycle_sum, 2u * net.num_edges());

    std::istringstream uniform("UNIFORM\n");
    EXPECT_EQ(ParseDemands(uniform, net).size(),
              static_cast<size_t>(nodes * (nodes - 1)));
  }
}

}  // namespace
}  // namespace filterless
