// Pricing problems: a new filterless sub-network, or a new wavelength
// configuration, with negative reduced cost under the master duals.

#ifndef FILTERLESS_PRICING_H_
#define FILTERLESS_PRICING_H_

#include <optional>
#include <string>
#include <vector>

#include "filterless/fsn.h"
#include "filterless/master.h"
#include "filterless/milp.h"
#include "filterless/topology.h"

namespace filterless {

struct FsnPricingModel {
  milp::LinearModel model;
  int num_nodes = 0;
  int num_edges = 0;
  int num_links = 0;
  int num_requests = 0;

  int alpha(int e) const { return e; }
  int node(int v) const { return num_edges + v; }
  int link(int l) const { return num_edges + num_nodes + l; }
  int x(int k) const { return num_edges + num_nodes + num_links + k; }
  int phi(int k, int l) const {
    return num_edges + num_nodes + num_links + num_requests +
           k * num_links + l;
  }
  int psi(int k, int l) const { return phi(k, l) + num_requests * num_links; }
  int theta(int k, int k2) const {
    return phi(0, 0) + 2 * num_requests * num_links +
           PairIndex(k, k2, num_requests);
  }
  // Ordered pair k != k2.
  int omega(int k, int k2, int l) const {
    const int ordered = k * (num_requests - 1) + (k2 < k ? k2 : k2 - 1);
    return phi(0, 0) + 2 * num_requests * num_links +
           PairCount(num_requests) + ordered * num_links + l;
  }
};

// Everything except subtour elimination rows, which SeparateSubtours supplies
// lazily. The constant FSN-count dual term is the objective offset.
FsnPricingModel BuildPpFsn(const Network& net,
                           const std::vector<Request>& requests,
                           const Duals& duals, const SolverConfig& cfg);

struct SubtourCut {
  std::vector<int> nodes;  // Sorted component node set.
  std::vector<int> edges;  // Every graph edge with both ends in `nodes`.
  int rhs = 0;             // |nodes| - 1
};

// One cut per connected component of the selected edges that has a cycle.
// `alpha` holds 0/1 values per edge.
std::vector<SubtourCut> SeparateSubtours(const Network& net,
                                         const std::vector<double>& alpha);

struct PricingResult {
  std::optional<FsnConfig> fsn;
  std::optional<WavelengthConfig> color;
  double objective = 0.0;      // Model optimum, or 0 when pruned by cutoff.
  double reduced_cost = 0.0;   // Recomputed from the duals for the column.
  bool proven = true;          // False on a time or node limit.
  long nodes = 0;
  int cuts = 0;
};

// Returns a column iff the pricing optimum is below -rc_tolerance. Decoded
// columns are checked against the FSN verifier and the recomputed reduced
// cost; a mismatch throws std::logic_error. When `dump_path` is non-empty
// the model is written there first.
PricingResult PriceFsn(const Network& net, const std::vector<Request>& requests,
                       const Duals& duals, const SolverConfig& cfg,
                       double time_limit_s,
                       const std::string& dump_path = "");

// Per request pair, sum over FSN columns of theta * z.
struct ConflictState {
  std::vector<double> value;  // Indexed by PairIndex.
  int num_requests = 0;
  double Get(int k, int k2) const {
    return value[PairIndex(k, k2, num_requests)];
  }
};

inline constexpr double kConflictThreshold = 1e-9;

// `fsn_values[c]` is the master value of FSN column c.
ConflictState ComputeConflictState(const ColumnPool& pool,
                                   const std::vector<double>& fsn_values,
                                   int num_requests);

// The wavelength pricing model; `forbid` adds beta_k + beta_k2 <= 1 for
// every pair whose conflict state exceeds the threshold.
milp::LinearModel BuildColorPricing(const Duals& duals,
                                    const ConflictState& state, bool forbid);

// Heuristic pricing forbids currently conflicting pairs; exact pricing
// relies on the pair duals alone.
PricingResult PriceColorHeuristic(const ConflictState& state,
                                  const Duals& duals, const SolverConfig& cfg,
                                  double time_limit_s,
                                  const std::string& dump_path = "");
PricingResult PriceColorExact(const ConflictState& state, const Duals& duals,
                              const SolverConfig& cfg, double time_limit_s,
                              const std::string& dump_path = "");

}  // namespace filterless

#endif  // FILTERLESS_PRICING_H_
