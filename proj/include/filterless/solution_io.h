// Solution documents: versioned JSON serialization, Graphviz export, and
// independent validation against a topology.

#ifndef FILTERLESS_SOLUTION_IO_H_
#define FILTERLESS_SOLUTION_IO_H_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterless/master.h"
#include "filterless/orchestrator.h"
#include "filterless/topology.h"

namespace filterless {

inline constexpr const char* kSolutionFormat = "filterless-solution/1";

class SolutionFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolutionDocument {
  std::vector<Request> requests;
  double reach_km = 1500.0;
  std::optional<int> max_fsn;
  DesignSolution design;
  std::string termination;
  bool certified = false;
  std::vector<CgIteration> iterations;
  double elapsed_s = 0.0;
};

SolutionDocument MakeSolutionDocument(const std::vector<Request>& requests,
                                      const SolverConfig& cfg,
                                      const RunResult& result);

// Nodes, edges, and links are written by node name.
void WriteSolution(const SolutionDocument& doc, const Network& net,
                   std::ostream& out);

// Throws SolutionFormatError on malformed input, a wrong format tag, or names
// that do not resolve in `net`.
SolutionDocument ReadSolution(std::istream& in, const Network& net);

// Every inconsistency found; empty iff the document is a valid design.
std::vector<std::string> ValidateSolution(const SolutionDocument& doc,
                                          const Network& net);

// Directed graph with one edge per link labelled "filtered/unfiltered"
// wavelength counts, colored by FSN.
void WriteDot(const DesignSolution& design, const Network& net,
              std::ostream& out);

}  // namespace filterless

#endif  // FILTERLESS_SOLUTION_IO_H_
