// Physical network, unit requests, and solver settings.
//
// Nodes are indexed in declaration order. Every declared edge {u, v} yields two
// directed links: 2e is u->v and 2e+1 is v->u, both with the edge's length.

#ifndef FILTERLESS_TOPOLOGY_H_
#define FILTERLESS_TOPOLOGY_H_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace filterless {

struct Link {
  int from;
  int to;
  double length_km;
  int edge;
};

struct Edge {
  int u;  // First endpoint as declared.
  int v;
  double length_km;
  int forward_link() const;   // u -> v
  int backward_link() const;  // v -> u
  int index;
};

inline int Edge::forward_link() const { return 2 * index; }
inline int Edge::backward_link() const { return 2 * index + 1; }

inline int ReverseLink(int link) { return link ^ 1; }

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class Network {
 public:
  // Throws std::invalid_argument on a duplicate name.
  int AddNode(std::string name);
  // Throws std::invalid_argument on a self-loop, a parallel edge, a missing
  // endpoint, or a negative or non-finite length.
  int AddEdge(int u, int v, double length_km);

  int num_nodes() const { return static_cast<int>(names_.size()); }
  int num_links() const { return static_cast<int>(links_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::string& node_name(int node) const { return names_[node]; }
  std::optional<int> FindNode(std::string_view name) const;
  // Index of link u->v, or -1.
  int FindLink(int u, int v) const;
  // Index of edge {u, v}, or -1.
  int FindEdge(int u, int v) const;

  const Link& link(int index) const { return links_[index]; }
  const Edge& edge(int index) const { return edges_[index]; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<int>& in_links(int node) const { return in_[node]; }
  const std::vector<int>& out_links(int node) const { return out_[node]; }
  const std::vector<int>& cocycle(int node) const { return cocycle_[node]; }

  // "u->v" using node names.
  std::string LinkName(int link) const;

  bool IsConnected() const;

  friend bool operator==(const Network& a, const Network& b);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Link> links_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> cocycle_;
  std::unordered_map<long long, int> link_index_;
};

struct Incidence {
  std::vector<int> in;
  std::vector<int> out;
  std::vector<int> cocycle;
};

// Throws std::out_of_range for an unknown node.
Incidence GetIncidence(const Network& net, std::string_view node);

struct Request {
  int id;
  int source;
  int destination;
};

struct SolverConfig {
  // Upper bound on the number of selected sub-networks; empty = unbounded.
  std::optional<int> max_fsn;
  double reach_km = 1500.0;
  int max_cg_iterations = 500;
  double time_limit_s = 3600.0;
  double rc_tolerance = 1e-6;
  int seed = 0;
  // Greedily enlarge emitted wavelength columns.
  bool maximalize_color_columns = true;
  // Restrict per-request routing variables to links on the request's
  // possible paths. Off: the full verbatim pricing model.
  bool restrict_routing_variables = false;
  // When non-empty, every pricing and master model is written here.
  std::string dump_models_dir;

  // Throws std::invalid_argument on a nonsensical setting.
  void Validate() const;
};

// Topology text: `NODES <n>`, n node ids, `EDGES <m>`, m lines
// `<u> <v> <length_km>`. Lines starting with '#' are comments.
Network ParseTopology(std::istream& in);
void WriteTopology(const Network& net, std::ostream& out);

// Demand text: a single `UNIFORM` line (one request per ordered node pair), or
// lines `<src> <dst> <multiplicity>`.
std::vector<Request> ParseDemands(std::istream& in, const Network& net);

Network LoadTopologyFile(const std::string& path);
std::vector<Request> LoadDemandFile(const std::string& path,
                                    const Network& net);

}  // namespace filterless

#endif  // FILTERLESS_TOPOLOGY_H_
