#include "filterless/solution_io.h"

#include <algorithm>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace filterless {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(FILTERLESS_TEST_DATA) + "/" + name;
}

class SolutionIoTest : public testing::Test {
 protected:
  void SetUp() override {
    net_ = LoadTopologyFile(DataPath("tree5.top"));
    requests_ = LoadDemandFile(DataPath("tree5.dem"), net_);
    cfg_.max_fsn = 1;
    result_ = filterless::Run(net_, requests_, cfg_);
    doc_ = MakeSolutionDocument(requests_, cfg_, result_);
  }

  SolutionDocument RoundTrip(const SolutionDocument& doc) const {
    std::stringstream text;
    WriteSolution(doc, net_, text);
    return ReadSolution(text, net_);
  }

  static bool Mentions(const std::vector<std::string>& issues,
                       const std::string& needle) {
    return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) {
      return s.find(needle) != std::string::npos;
    });
  }

  Network net_;
  std::vector<Request> requests_;
  SolverConfig cfg_;
  RunResult result_;
  SolutionDocument doc_;
};

TEST_F(SolutionIoTest, SolverOutputValidates) {
  EXPECT_TRUE(ValidateSolution(doc_, net_).empty());
}

TEST_F(SolutionIoTest, RoundTripPreservesDesign) {
  const SolutionDocument back = RoundTrip(doc_);
  EXPECT_TRUE(ValidateSolution(back, net_).empty());
  EXPECT_EQ(back.design.W, doc_.design.W);
  EXPECT_DOUBLE_EQ(back.design.z_lp, doc_.design.z_lp);
  EXPECT_EQ(back.design.wavelength, doc_.design.wavelength);
  EXPECT_EQ(back.design.serving_fsn, doc_.design.serving_fsn);
  ASSERT_EQ(back.design.selected_fsns.size(), doc_.design.selected_fsns.size());
  for (size_t f = 0; f < back.design.selected_fsns.size(); ++f) {
    const FsnConfig& a = back.design.selected_fsns[f];
    const FsnConfig& b = doc_.design.selected_fsns[f];
    EXPECT_EQ(a.tree_edges, b.tree_edges);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.links, b.links);
    EXPECT_EQ(a.served, b.served);
    EXPECT_EQ(a.routes, b.routes);
    EXPECT_EQ(a.propagation, b.propagation);
    EXPECT_EQ(a.conflicts, b.conflicts);
  }
  EXPECT_EQ(back.design.loads.filtered, doc_.design.loads.filtered);
  EXPECT_EQ(back.design.loads.total, doc_.design.loads.total);
  EXPECT_EQ(back.iterations.size(), doc_.iterations.size());
  EXPECT_EQ(back.requests.size(), requests_.size());
  EXPECT_EQ(back.max_fsn, cfg_.max_fsn);
}

TEST_F(SolutionIoTest, FormatTagRequired) {
  std::stringstream text;
  WriteSolution(doc_, net_, text);
  std::string body = text.str();
  body.replace(body.find(kSolutionFormat), std::string(kSolutionFormat).size(),
               "something-else/9");
  std::istringstream in(body);
  EXPECT_THROW(ReadSolution(in, net_), SolutionFormatError);
  std::istringstream garbage("not json");
  EXPECT_THROW(ReadSolution(garbage, net_), SolutionFormatError);
}

TEST_F(SolutionIoTest, UnknownNodeRejected) {
  std::stringstream text;
  WriteSolution(doc_, net_, text);
  const Network other = LoadTopologyFile(DataPath("path3.top"));
  EXPECT_THROW(ReadSolution(text, other), SolutionFormatError);
}

TEST_F(SolutionIoTest, DetectsSharedWavelengthOnConflict) {
  SolutionDocument bad = doc_;
  const FsnConfig& fsn = bad.design.selected_fsns.at(0);
  ASSERT_FALSE(fsn.conflicts.empty());
  auto [a, b] = *fsn.conflicts.pairs().begin();
  bad.design.wavelength[b] = bad.design.wavelength[a];
  EXPECT_TRUE(Mentions(ValidateSolution(bad, net_), "share wavelength"));
}

TEST_F(SolutionIoTest, DetectsUnservedRequest) {
  SolutionDocument bad = doc_;
  FsnConfig& fsn = bad.design.selected_fsns.at(0);
  const int k = fsn.served.back();
  fsn.served.pop_back();
  fsn.routes.erase(k);
  fsn.propagation.erase(k);
  EXPECT_TRUE(Mentions(ValidateSolution(bad, net_), "served by 0"));
}

TEST_F(SolutionIoTest, DetectsTamperedRoute) {
  SolutionDocument bad = doc_;
  FsnConfig& fsn = bad.design.selected_fsns.at(0);
  fsn.routes.begin()->second.push_back(fsn.routes.begin()->second.front());
  EXPECT_TRUE(Mentions(ValidateSolution(bad, net_), "fsn 0:"));
}

TEST_F(SolutionIoTest, DetectsOverlappingSubNetworks) {
  SolutionDocument bad = doc_;
  bad.max_fsn = 2;
  bad.design.selected_fsns.push_back(bad.design.selected_fsns.at(0));
  const auto issues = ValidateSolution(bad, net_);
  EXPECT_TRUE(Mentions(issues, "share a directed link"));
  EXPECT_TRUE(Mentions(issues, "served by 2"));
}

TEST_F(SolutionIoTest, DetectsLimitAndFigureMismatches) {
  SolutionDocument bad = doc_;
  bad.design.W += 1;
  auto issues = ValidateSolution(bad, net_);
  EXPECT_TRUE(Mentions(issues, "wavelengths are used"));
  EXPECT_TRUE(Mentions(issues, "epsilon"));

  bad = doc_;
  bad.design.z_lp = bad.design.W + 1.0;
  EXPECT_TRUE(Mentions(ValidateSolution(bad, net_), "LP bound exceeds W"));

  bad = doc_;
  bad.max_fsn = 0;
  EXPECT_TRUE(Mentions(ValidateSolution(bad, net_), "exceed the limit"));

  bad = doc_;
  bad.design.loads.max_total += 1;
  EXPECT_TRUE(Mentions(ValidateSolution(bad, net_), "link loads"));
}

TEST_F(SolutionIoTest, DotLabelsEveryFsnLink) {
  std::ostringstream dot;
  WriteDot(doc_.design, net_, dot);
  const std::string text = dot.str();
  EXPECT_EQ(text.rfind("digraph", 0), 0u);
  size_t labels = 0;
  for (size_t at = text.find("label="); at != std::string::npos;
       at = text.find("label=", at + 1)) {
    ++labels;
  }
  EXPECT_EQ(labels, doc_.design.selected_fsns.at(0).links.size());
  const int l = doc_.design.selected_fsns.at(0).links.front();
  const std::string expected =
      "label=\"" + std::to_string(doc_.design.loads.filtered[l]) + "/" +
      std::to_string(doc_.design.loads.total[l]) + "\"";
  EXPECT_NE(text.find(expected), std::string::npos);
}

TEST(EpsilonTest, RoundOffIsZero) {
  EXPECT_EQ(Epsilon(4, 4.000000000000001), 0.0);
  EXPECT_DOUBLE_EQ(Epsilon(5, 4.0), 0.25);
  EXPECT_EQ(Epsilon(0, 0.0), 0.0);
}

}  // namespace
}  // namespace filterless
