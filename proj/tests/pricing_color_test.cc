#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "filterless/pricing.h"

namespace filterless {
namespace {

Duals ColorDuals(int num_requests) {
  Duals d;
  d.u2.assign(num_requests, 0.0);
  d.u6.assign(num_requests, 0.0);
  d.u5.assign(PairCount(num_requests), 0.0);
  return d;
}

ConflictState EmptyState(int num_requests) {
  ConflictState s;
  s.num_requests = num_requests;
  s.value.assign(PairCount(num_requests), 0.0);
  return s;
}

// Minimum of 1 - sum u6 - sum u5 over non-empty subsets, by enumeration.
double Enumerate(const Duals& duals, const ConflictState& state, bool forbid) {
  const int K = static_cast<int>(duals.u6.size());
  double best = milp::kInfinity;
  for (int mask = 1; mask < (1 << K); ++mask) {
    WavelengthConfig column;
    bool ok = true;
    for (int k = 0; k < K; ++k) {
      if (!(mask >> k & 1)) continue;
      for (int m : column.members) {
        if (forbid && state.Get(k, m) > kConflictThreshold) ok = false;
      }
      column.members.push_back(k);
    }
    if (ok) best = std::min(best, ColorReducedCost(column, duals));
  }
  return best;
}

SolverConfig Plain() {
  SolverConfig cfg;
  cfg.maximalize_color_columns = false;
  return cfg;
}

TEST(ConflictStateTest, Examples) {
  ColumnPool pool;
  FsnConfig column;
  column.conflicts.Set(1, 2);
  pool.AddFsn(column);
  ConflictState state = ComputeConflictState(pool, {1.0}, 3);
  EXPECT_EQ(state.Get(1, 2), 1.0);
  EXPECT_EQ(state.Get(2, 1), 1.0);
  EXPECT_EQ(state.Get(0, 1), 0.0);
  EXPECT_EQ(ComputeConflictState(pool, {0.5}, 3).Get(1, 2), 0.5);
  ConflictState empty = ComputeConflictState(ColumnPool{}, {}, 3);
  for (double v : empty.value) EXPECT_EQ(v, 0.0);
}

TEST(PriceColorHeuristicTest, Examples) {
  Duals duals = ColorDuals(2);
  duals.u6 = {1.0, 1.0};
  PricingResult r = PriceColorHeuristic(EmptyState(2), duals, Plain(), 60);
  ASSERT_TRUE(r.color);
  EXPECT_EQ(r.color->members, std::vector<int>({0, 1}));
  EXPECT_NEAR(r.reduced_cost, -1.0, 1e-9);

  ConflictState state = EmptyState(2);
  state.value[0] = 0.3;
  r = PriceColorHeuristic(state, duals, Plain(), 60);
  EXPECT_FALSE(r.color);
  EXPECT_TRUE(r.proven);

  EXPECT_FALSE(
      PriceColorHeuristic(EmptyState(2), ColorDuals(2), Plain(), 60).color);
}

TEST(PriceColorExactTest, Examples) {
  Duals duals = ColorDuals(2);
  duals.u6 = {1.0, 1.0};
  duals.u5 = {-0.4};
  ConflictState state = EmptyState(2);
  state.value[0] = 1.0;
  PricingResult r = PriceColorExact(state, duals, Plain(), 60);
  ASSERT_TRUE(r.color);
  EXPECT_EQ(r.color->members, std::vector<int>({0, 1}));
  // Enumeration of {0}, {1}, {0,1}: 0, 0, 1 - 2 + 0.4.
  EXPECT_NEAR(r.objective, -0.6, 1e-9);
  EXPECT_NEAR(r.reduced_cost, -0.6, 1e-9);

  EXPECT_FALSE(PriceColorExact(state, ColorDuals(2), Plain(), 60).color);

  Duals single = ColorDuals(1);
  single.u6 = {2.0};
  r = PriceColorExact(EmptyState(1), single, Plain(), 60);
  ASSERT_TRUE(r.color);
  EXPECT_EQ(r.color->members, std::vector<int>({0}));
  EXPECT_NEAR(r.reduced_cost, -1.0, 1e-9);
}

TEST(PriceColorTest, MaximalizationAddsFreeMembers) {
  Duals duals = ColorDuals(4);
  duals.u6 = {1.0, 1.0, 0.0, 0.0};
  ConflictState state = EmptyState(4);
  state.value[PairIndex(0, 3, 4)] = 1.0;
  SolverConfig cfg;
  PricingResult r = PriceColorHeuristic(state, duals, cfg, 60);
  ASSERT_TRUE(r.color);
  EXPECT_EQ(r.color->members, std::vector<int>({0, 1, 2}));
  EXPECT_NEAR(r.reduced_cost, -1.0, 1e-9);
}

TEST(PriceColorPropertyTest, MatchesEnumeration) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 1 + static_cast<int>(rng() % 8);
    Duals duals = ColorDuals(K);
    for (double& u : duals.u6) u = unit(rng) < 0.2 ? 0.0 : unit(rng);
    for (double& u : duals.u5) u = unit(rng) < 0.6 ? 0.0 : -unit(rng);
    ConflictState state = EmptyState(K);
    for (double& v : state.value) v = unit(rng) < 0.3 ? unit(rng) : 0.0;
    SolverConfig cfg;
    cfg.maximalize_color_columns = trial % 2 == 0;

    const double heuristic_best = Enumerate(duals, state, true);
    const double exact_best = Enumerate(duals, state, false);
    PricingResult h = PriceColorHeuristic(state, duals, cfg, 60);
    PricingResult e = PriceColorExact(state, duals, cfg, 60);
    ASSERT_EQ(h.color.has_value(), heuristic_best < -cfg.rc_tolerance);
    ASSERT_EQ(e.color.has_value(), exact_best < -cfg.rc_tolerance);
    EXPECT_LE(exact_best, heuristic_best + 1e-12);
    if (h.color) {
      EXPECT_NEAR(h.objective, heuristic_best, 1e-7);
      EXPECT_LE(h.reduced_cost, h.objective + 1e-9);
      EXPECT_NEAR(h.reduced_cost, ColorReducedCost(*h.color, duals), 1e-9);
      const std::vector<int>& m = h.color->members;
      for (size_t i = 0; i < m.size(); ++i) {
        for (size_t j = i + 1; j < m.size(); ++j) {
          EXPECT_LE(state.Get(m[i], m[j]), kConflictThreshold);
        }
      }
    }
    if (e.color) {
      EXPECT_NEAR(e.objective, exact_best, 1e-7);
      EXPECT_LE(e.reduced_cost, e.objective + 1e-9);
    }
  }
}

}  // namespace
}  // namespace filterless
