// Exhaustive reference solvers for tiny instances.

#ifndef FILTERLESS_ORACLE_H_
#define FILTERLESS_ORACLE_H_

#include <optional>
#include <utility>
#include <vector>

#include "filterless/topology.h"

namespace filterless {

inline constexpr int kOracleMaxColoringVertices = 16;
inline constexpr int kOracleMaxNodes = 6;
inline constexpr int kOracleMaxEdges = 8;
inline constexpr int kOracleMaxRequests = 8;
inline constexpr int kOracleMaxFsn = 2;

// Chromatic number by backtracking. Throws std::invalid_argument above
// kOracleMaxColoringVertices.
int OracleMinColoring(int num_vertices,
                      const std::vector<std::pair<int, int>>& edges);

// Minimum number of wavelengths over all designs with at most cfg.max_fsn
// link-disjoint FSNs serving every request within reach; std::nullopt when
// no such design exists. Throws std::invalid_argument outside the size
// limits or when cfg.max_fsn is unset.
std::optional<int> OracleOptimum(const Network& net,
                                 const std::vector<Request>& requests,
                                 const SolverConfig& cfg);

}  // namespace filterless

#endif  // FILTERLESS_ORACLE_H_
