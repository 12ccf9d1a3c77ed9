// Filterless sub-networks: tree support, filtered routes, broadcast
// propagation, wavelength conflicts, and link loads.

#ifndef FILTERLESS_FSN_H_
#define FILTERLESS_FSN_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "filterless/topology.h"

namespace filterless {

// Symmetric relation over request ids; the diagonal is never stored.
class ConflictMatrix {
 public:
  void Set(int k, int k2);
  bool Get(int k, int k2) const;
  // Unordered pairs (k, k2) with k < k2.
  const std::set<std::pair<int, int>>& pairs() const { return pairs_; }
  size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  friend bool operator==(const ConflictMatrix&, const ConflictMatrix&) =
      default;

 private:
  std::set<std::pair<int, int>> pairs_;
};

struct FsnConfig {
  std::vector<int> tree_edges;  // Sorted edge indices.
  std::vector<int> nodes;       // Sorted node indices.
  std::vector<int> links;       // Sorted link indices.
  std::vector<int> served;      // Sorted request ids.
  std::map<int, std::vector<int>> routes;       // Ordered filtered hops.
  std::map<int, std::vector<int>> propagation;  // Sorted flooded links.
  ConflictMatrix conflicts;

  bool Serves(int request) const;
  friend bool operator==(const FsnConfig&, const FsnConfig&) = default;
};

// Unique tree path source -> destination as directed links, if every hop is
// an fsn link. `fsn_links` is a membership mask over all links.
std::optional<std::vector<int>> RouteInTree(const Network& net,
                                            const std::vector<char>& fsn_links,
                                            const std::vector<int>& tree_edges,
                                            const Request& request);

// Downstream flood closure of `route` inside `fsn_links`. Sorted.
// Throws std::invalid_argument when the route is empty or leaves fsn_links.
std::vector<int> Propagate(const Network& net,
                           const std::vector<char>& fsn_links,
                           const std::vector<int>& route);

// Throws std::invalid_argument when a served request lacks a route or flood.
ConflictMatrix DetectConflicts(const FsnConfig& cfg);

// Routes, floods, and conflicts for the given structure. Throws
// std::invalid_argument when a served request has no path in the FSN.
FsnConfig BuildFsnConfig(const Network& net,
                         const std::vector<Request>& requests,
                         std::vector<int> tree_edges, std::vector<int> links,
                         std::vector<int> served);

// Every structural violation, as readable strings; empty iff valid.
std::vector<std::string> VerifyFsnConfig(const FsnConfig& cfg,
                                         const Network& net,
                                         const std::vector<Request>& requests,
                                         double reach_km);

double RouteLength(const Network& net, const std::vector<int>& route);

std::vector<char> LinkMask(const Network& net, const std::vector<int>& links);

// True when no directed link belongs to two of the FSNs.
bool LinkDisjoint(const std::vector<FsnConfig>& fsns);

struct LoadReport {
  std::vector<int> filtered;  // Per link.
  std::vector<int> total;     // Per link.
  int max_filtered = 0;
  int max_total = 0;
};

// Distinct wavelengths per link over filtered routes and over floods.
// `wavelength[k]` is the wavelength of request k, or -1 if unassigned.
// Throws std::invalid_argument when the FSNs overlap.
LoadReport LinkLoads(const Network& net, const std::vector<FsnConfig>& selected,
                     const std::vector<int>& wavelength);

}  // namespace filterless

#endif  // FILTERLESS_FSN_H_
