// Restricted master problem over FSN and wavelength columns, duals, and the
// final integer design.

#ifndef FILTERLESS_MASTER_H_
#define FILTERLESS_MASTER_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "filterless/fsn.h"
#include "filterless/milp.h"
#include "filterless/topology.h"

namespace filterless {

struct WavelengthConfig {
  std::vector<int> members;  // Sorted request ids, non-empty.
  friend bool operator==(const WavelengthConfig&,
                         const WavelengthConfig&) = default;
};

class ColumnPool {
 public:
  // Return false (and leave the pool unchanged) on a duplicate column.
  bool AddFsn(FsnConfig column);
  bool AddColor(WavelengthConfig column);

  const std::vector<FsnConfig>& fsn_columns() const { return fsn_; }
  const std::vector<WavelengthConfig>& color_columns() const { return color_; }

 private:
  std::vector<FsnConfig> fsn_;
  std::vector<WavelengthConfig> color_;
};

// Unordered request pairs {k, k2}, k < k2, enumerated row by row.
int PairCount(int num_requests);
int PairIndex(int k, int k2, int num_requests);

// Row duals of the master LP. Covering rows give u2, u6 >= 0; packing rows
// give u3, u4, u5 <= 0.
struct Duals {
  std::vector<double> u2;  // Per request: routed at least once.
  std::vector<double> u3;  // Per link: used by at most one FSN.
  double u4 = 0.0;         // FSN count.
  std::vector<double> u5;  // Per request pair: no shared conflicting color.
  std::vector<double> u6;  // Per request: colored at least once.
};

double FsnReducedCost(const FsnConfig& column, const Duals& duals);
double ColorReducedCost(const WavelengthConfig& column, const Duals& duals);

struct Rmp {
  milp::LinearModel model;
  int num_requests = 0;
  int num_links = 0;
  int num_fsn_columns = 0;
  int num_color_columns = 0;

  int route_row(int k) const { return k; }
  int link_row(int l) const { return num_requests + l; }
  int count_row() const { return num_requests + num_links; }
  int pair_row(int p) const { return num_requests + num_links + 1 + p; }
  int color_row(int k) const {
    return num_requests + num_links + 1 + PairCount(num_requests) + k;
  }
  int fsn_var(int column) const { return column; }
  int color_var(int column) const { return num_fsn_columns + column; }
  // Requests given a cover variable; variable index is
  // num_fsn_columns + num_color_columns + position.
  std::vector<int> artificial;
};

class InfeasibleMaster : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Continuous variables are nonnegative and unbounded above; integer ones are
// binary. Throws InfeasibleMaster when a request is not covered by any FSN
// column or any wavelength column.
Rmp BuildRmp(const ColumnPool& pool, const Network& net,
             const std::vector<Request>& requests, const SolverConfig& cfg,
             bool integer);

// Continuous master whose objective is the total cover of `artificial`
// requests: each gets a unit-cost variable in its route row and wavelength
// columns cost nothing. Its optimum is zero iff the full master is feasible,
// provided every request has a singleton wavelength column in the pool.
Rmp BuildFeasibilityRmp(const ColumnPool& pool, const Network& net,
                        const std::vector<Request>& requests,
                        const SolverConfig& cfg,
                        const std::vector<int>& artificial);

// Throws std::invalid_argument unless the solution is optimal.
Duals ExtractDuals(const Rmp& rmp, const milp::LpSolution& solution);

struct DesignSolution {
  std::vector<FsnConfig> selected_fsns;
  std::vector<int> fsn_columns;       // Pool index of each selected FSN.
  std::vector<int> color_columns;     // Pool index of each used wavelength.
  std::vector<int> serving_fsn;       // Per request, index into selected_fsns.
  std::vector<int> wavelength;        // Per request.
  int W = 0;
  double z_lp = 0.0;
  double epsilon = 0.0;
  LoadReport loads;
  bool integer_optimal = false;
};

double Epsilon(int W, double z_lp);

// Solves the integer master over the frozen pool and reduces the result to
// one serving FSN and one wavelength per request. The optional start columns
// form a known integer solution used as the first incumbent. Throws
// InfeasibleMaster.
DesignSolution Finalize(const ColumnPool& pool, const Network& net,
                        const std::vector<Request>& requests,
                        const SolverConfig& cfg, double z_lp,
                        double time_limit_s,
                        const std::vector<int>& start_fsn = {},
                        const std::vector<int>& start_colors = {});

}  // namespace filterless

#endif  // FILTERLESS_MASTER_H_
