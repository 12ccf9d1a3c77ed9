#include "filterless/topology.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace filterless {
namespace {

long long PairKey(int u, int v) {
  return (static_cast<long long>(u) << 32) | static_cast<unsigned>(v);
}

// Splits the next meaningful line into tokens; skips blanks and comments.
bool NextLine(std::istream& in, int& line_number,
              std::vector<std::string>& tokens) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    const size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream stream(line);
    tokens.clear();
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return true;
  }
  return false;
}

long ParseCount(const std::string& text, int line) {
  size_t used = 0;
  long value = -1;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < 0) {
    throw ParseError(line, "expected a nonnegative integer, got '" + text + "'");
  }
  return value;
}

double ParseLength(const std::string& text, int line) {
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw ParseError(line, "expected a length in km, got '" + text + "'");
  }
  if (value < 0.0) throw ParseError(line, "negative length " + text);
  return value;
}

}  // namespace

int Network::AddNode(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty node id");
  if (index_.count(name) > 0) {
    throw std::invalid_argument("duplicate node " + name);
  }
  const int node = num_nodes();
  index_.emplace(name, node);
  names_.push_back(std::move(name));
  in_.emplace_back();
  out_.emplace_back();
  cocycle_.emplace_back();
  return node;
}

int Network::AddEdge(int u, int v, double length_km) {
  if (u < 0 || v < 0 || u >= num_nodes() || v >= num_nodes()) {
    throw std::invalid_argument("dangling endpoint");
  }
  if (u == v) throw std::invalid_argument("self-loop at " + names_[u]);
  if (!std::isfinite(length_km) || length_km < 0.0) {
    throw std::invalid_argument("negative length");
  }
  if (FindLink(u, v) >= 0 || FindLink(v, u) >= 0) {
    throw std::invalid_argument("duplicate link " + names_[u] + "-" +
                                names_[v]);
  }
  const int e = num_edges();
  edges_.push_back(Edge{u, v, length_km, e});
  links_.push_back(Link{u, v, length_km, e});
  links_.push_back(Link{v, u, length_km, e});
  link_index_[PairKey(u, v)] = 2 * e;
  link_index_[PairKey(v, u)] = 2 * e + 1;
  out_[u].push_back(2 * e);
  in_[v].push_back(2 * e);
  out_[v].push_back(2 * e + 1);
  in_[u].push_back(2 * e + 1);
  cocycle_[u].push_back(e);
  cocycle_[v].push_back(e);
  return e;
}

std::optional<int> Network::FindNode(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Network::FindLink(int u, int v) const {
  auto it = link_index_.find(PairKey(u, v));
  return it == link_index_.end() ? -1 : it->second;
}

int Network::FindEdge(int u, int v) const {
  const int link = FindLink(u, v);
  return link < 0 ? -1 : links_[link].edge;
}

std::string Network::LinkName(int link) const {
  return names_[links_[link].from] + "->" + names_[links_[link].to];
}

bool Network::IsConnected() const {
  if (num_nodes() == 0) return true;
  std::vector<char> seen(num_nodes(), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    for (int link : out_[node]) {
      const int next = links_[link].to;
      if (!seen[next]) {
        seen[next] = 1;
        ++count;
        stack.push_back(next);
      }
    }
  }
  return count == num_nodes();
}

bool operator==(const Network& a, const Network& b) {
  if (a.names_ != b.names_ || a.num_edges() != b.num_edges()) return false;
  for (int e = 0; e < a.num_edges(); ++e) {
    const Edge& x = a.edges_[e];
    const Edge& y = b.edges_[e];
    if (x.u != y.u || x.v != y.v || x.length_km != y.length_km) return false;
  }
  return true;
}

Incidence GetIncidence(const Network& net, std::string_view node) {
  std::optional<int> index = net.FindNode(node);
  if (!index) throw std::out_of_range("unknown node " + std::string(node));
  return Incidence{net.in_links(*index), net.out_links(*index),
                   net.cocycle(*index)};
}

void SolverConfig::Validate() const {
  if (max_fsn && *max_fsn < 1) {
    throw std::invalid_argument("max_fsn must be positive");
  }
  if (!(reach_km > 0.0)) throw std::invalid_argument("reach_km must be > 0");
  if (max_cg_iterations < 1) {
    throw std::invalid_argument("max_cg_iterations must be positive");
  }
  if (!(time_limit_s > 0.0)) {
    throw std::invalid_argument("time_limit_s must be > 0");
  }
  if (!(rc_tolerance > 0.0)) {
    throw std::invalid_argument("rc_tolerance must be > 0");
  }
}

Network ParseTopology(std::istream& in) {
  Network net;
  int line = 0;
  std::vector<std::string> tokens;
  if (!NextLine(in, line, tokens) || tokens.size() != 2 ||
      tokens[0] != "NODES") {
    throw ParseError(line, "expected 'NODES <n>'");
  }
  const long num_nodes = ParseCount(tokens[1], line);
  for (long i = 0; i < num_nodes; ++i) {
    if (!NextLine(in, line, tokens)) {
      throw ParseError(line, "unexpected end of file in node list");
    }
    if (tokens.size() != 1) throw ParseError(line, "expected one node id");
    if (net.FindNode(tokens[0])) {
      throw ParseError(line, "duplicate node " + tokens[0]);
    }
    net.AddNode(tokens[0]);
  }
  if (!NextLine(in, line, tokens) || tokens.size() != 2 ||
      tokens[0] != "EDGES") {
    throw ParseError(line, "expected 'EDGES <m>'");
  }
  const long num_edges = ParseCount(tokens[1], line);
  for (long i = 0; i < num_edges; ++i) {
    if (!NextLine(in, line, tokens)) {
      throw ParseError(line, "unexpected end of file in edge list");
    }
    if (tokens.size() != 3) {
      throw ParseError(line, "expected '<u> <v> <length_km>'");
    }
    std::optional<int> u = net.FindNode(tokens[0]);
    std::optional<int> v = net.FindNode(tokens[1]);
    if (!u) throw ParseError(line, "dangling endpoint " + tokens[0]);
    if (!v) throw ParseError(line, "dangling endpoint " + tokens[1]);
    if (*u == *v) throw ParseError(line, "self-loop at " + tokens[0]);
    const double length = ParseLength(tokens[2], line);
    if (net.FindLink(*u, *v) >= 0) {
      throw ParseError(line,
                       "duplicate link " + tokens[0] + "-" + tokens[1]);
    }
    net.AddEdge(*u, *v, length);
  }
  if (NextLine(in, line, tokens)) {
    throw ParseError(line, "trailing content after edge list");
  }
  return net;
}

void WriteTopology(const Network& net, std::ostream& out) {
  out.precision(17);
  out << "NODES " << net.num_nodes() << '\n';
  for (int v = 0; v < net.num_nodes(); ++v) out << net.node_name(v) << '\n';
  out << "EDGES " << net.num_edges() << '\n';
  for (const Edge& e : net.edges()) {
    out << net.node_name(e.u) << ' ' << net.node_name(e.v) << ' '
        << e.length_km << '\n';
  }
}

std::vector<Request> ParseDemands(std::istream& in, const Network& net) {
  std::vector<Request> requests;
  int line = 0;
  std::vector<std::string> tokens;
  bool uniform = false;
  while (NextLine(in, line, tokens)) {
    if (tokens.size() == 1 && tokens[0] == "UNIFORM") {
      if (uniform || !requests.empty()) {
        throw ParseError(line, "UNIFORM must be the only demand line");
      }
      uniform = true;
      for (int s = 0; s < net.num_nodes(); ++s) {
        for (int d = 0; d < net.num_nodes(); ++d) {
          if (s != d) {
            requests.push_back(
                Request{static_cast<int>(requests.size()), s, d});
          }
        }
      }
      continue;
    }
    if (uniform) throw ParseError(line, "UNIFORM must be the only demand line");
    if (tokens.size() != 3) {
      throw ParseError(line, "expected '<src> <dst> <multiplicity>'");
    }
    std::optional<int> s = net.FindNode(tokens[0]);
    std::optional<int> d = net.FindNode(tokens[1]);
    if (!s) throw ParseError(line, "unknown node " + tokens[0]);
    if (!d) throw ParseError(line, "unknown node " + tokens[1]);
    if (*s == *d) throw ParseError(line, "source equals destination");
    size_t used = 0;
    long multiplicity = 0;
    try {
      multiplicity = std::stol(tokens[2], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tokens[2].size() || multiplicity < 1) {
      throw ParseError(line, "multiplicity must be an integer >= 1");
    }
    for (long i = 0; i < multiplicity; ++i) {
      requests.push_back(Request{static_cast<int>(requests.size()), *s, *d});
    }
  }
  return requests;
}

Network LoadTopologyFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file " + path);
  return ParseTopology(in);
}

std::vector<Request> LoadDemandFile(const std::string& path,
                                    const Network& net) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open demand file " + path);
  return ParseDemands(in, net);
}

}  // namespace filterless
