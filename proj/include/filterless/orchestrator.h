// Column generation driver: initial columns, the master/pricing loop, and the
// final integer design.

#ifndef FILTERLESS_ORCHESTRATOR_H_
#define FILTERLESS_ORCHESTRATOR_H_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "filterless/fsn.h"
#include "filterless/master.h"
#include "filterless/topology.h"

namespace filterless {

// Greedy coloring: vertices by non-increasing degree, ties by ascending id,
// each taking the smallest color unused by its colored neighbours.
std::vector<int> WelshPowell(int num_vertices,
                             const std::vector<std::pair<int, int>>& edges);

// Minimum-length spanning tree (Kruskal; ties by endpoint indices).
// Throws std::invalid_argument on a disconnected network.
std::vector<int> MinimumSpanningTree(const Network& net);

struct InitialSolution {
  FsnConfig fsn;
  std::vector<WavelengthConfig> colors;
  std::vector<int> excluded;  // Requests whose tree route exceeds the reach.
};

// One FSN on the minimum spanning tree serving every request within reach,
// and the Welsh-Powell color classes of its conflicts.
InitialSolution BuildInitialSolution(const Network& net,
                                     const std::vector<Request>& requests,
                                     const SolverConfig& cfg);

enum class Termination { kOptimal, kIterationLimit, kTimeLimit };
const char* ToString(Termination termination);

struct CgIteration {
  int iteration = 0;
  double lp_value = 0.0;
  std::string pricer;              // fsn, color_heuristic, color_exact, none
  double pricing_objective = 0.0;  // Pricing model optimum.
  double reduced_cost = 0.0;       // Recomputed from this iteration's duals.
  int column = -1;                 // Index in its pool list.
  long pricing_nodes = 0;          // Branch-and-bound nodes, all pricers.
  double elapsed_s = 0.0;
};

struct CgLog {
  // Iterations spent making the master feasible when the initial FSN leaves
  // requests out; their LP value is the remaining cover.
  std::vector<CgIteration> feasibility_iterations;
  std::vector<CgIteration> iterations;
  Termination termination = Termination::kOptimal;
  bool certified = false;
  double z_lp = 0.0;
  // Smallest reduced cost over the pool under the final duals.
  double min_pooled_reduced_cost = 0.0;
  int initial_fsn_columns = 0;
  int initial_color_columns = 0;
  std::vector<std::string> warnings;
  double elapsed_s = 0.0;
};

struct RunResult {
  DesignSolution design;
  CgLog log;
  ColumnPool pool;
};

// Limits ran out before any feasible design was found.
class NoDesignWithinLimits : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws InfeasibleMaster when no design can serve every request,
// NoDesignWithinLimits, and std::invalid_argument on invalid input.
RunResult Run(const Network& net, const std::vector<Request>& requests,
              const SolverConfig& cfg, std::ostream* progress = nullptr);

}  // namespace filterless

#endif  // FILTERLESS_ORCHESTRATOR_H_
