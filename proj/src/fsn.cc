#include "filterless/fsn.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace filterless {
namespace {

void SortUnique(std::vector<int>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

bool IsSortedUnique(const std::vector<int>& values) {
  return std::adjacent_find(values.begin(), values.end(),
                            [](int a, int b) { return a >= b; }) ==
         values.end();
}

int Find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

std::string EdgeName(const Network& net, int e) {
  return "{" + net.node_name(net.edge(e).u) + "," +
         net.node_name(net.edge(e).v) + "}";
}

std::string Km(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

}  // namespace

void ConflictMatrix::Set(int k, int k2) {
  if (k == k2) return;
  pairs_.emplace(std::min(k, k2), std::max(k, k2));
}

bool ConflictMatrix::Get(int k, int k2) const {
  return pairs_.count({std::min(k, k2), std::max(k, k2)}) > 0;
}

bool FsnConfig::Serves(int request) const {
  return std::binary_search(served.begin(), served.end(), request);
}

std::vector<char> LinkMask(const Network& net, const std::vector<int>& links) {
  std::vector<char> mask(net.num_links(), 0);
  for (int l : links) mask[l] = 1;
  return mask;
}

double RouteLength(const Network& net, const std::vector<int>& route) {
  double total = 0.0;
  for (int l : route) total += net.link(l).length_km;
  return total;
}

std::optional<std::vector<int>> RouteInTree(const Network& net,
                                            const std::vector<char>& fsn_links,
                                            const std::vector<int>& tree_edges,
                                            const Request& request) {
  std::vector<std::vector<int>> adjacent(net.num_nodes());
  for (int e : tree_edges) {
    adjacent[net.edge(e).u].push_back(net.edge(e).v);
    adjacent[net.edge(e).v].push_back(net.edge(e).u);
  }
  const int s = request.source;
  const int d = request.destination;
  if (adjacent[s].empty() || adjacent[d].empty()) return std::nullopt;
  std::vector<int> parent(net.num_nodes(), -1);
  parent[s] = s;
  std::vector<int> queue = {s};
  for (size_t head = 0; head < queue.size() && parent[d] < 0; ++head) {
    for (int next : adjacent[queue[head]]) {
      if (parent[next] < 0) {
        parent[next] = queue[head];
        queue.push_back(next);
      }
    }
  }
  if (parent[d] < 0) return std::nullopt;
  std::vector<int> route;
  for (int v = d; v != s; v = parent[v]) {
    const int link = net.FindLink(parent[v], v);
    if (link < 0 || !fsn_links[link]) return std::nullopt;
    route.push_back(link);
  }
  std::reverse(route.begin(), route.end());
  return route;
}

std::vector<int> Propagate(const Network& net,
                           const std::vector<char>& fsn_links,
                           const std::vector<int>& route) {
  if (route.empty()) throw std::invalid_argument("empty route");
  for (int l : route) {
    if (!fsn_links[l]) {
      throw std::invalid_argument("route link " + net.LinkName(l) +
                                  " is not in the FSN");
    }
  }
  std::vector<char> included(net.num_links(), 0);
  std::vector<int> flood = {route.front()};
  included[route.front()] = 1;
  for (size_t head = 0; head < flood.size(); ++head) {
    for (int out : net.out_links(net.link(flood[head]).to)) {
      if (fsn_links[out] && !included[out] && !included[ReverseLink(out)]) {
        included[out] = 1;
        flood.push_back(out);
      }
    }
  }
  std::sort(flood.begin(), flood.end());
  return flood;
}

ConflictMatrix DetectConflicts(const FsnConfig& cfg) {
  for (int k : cfg.served) {
    if (!cfg.routes.count(k) || !cfg.propagation.count(k)) {
      throw std::invalid_argument("request " + std::to_string(k) +
                                  " has no route or propagation");
    }
  }
  auto meets = [](const std::vector<int>& route,
                  const std::vector<int>& sorted_links) {
    for (int l : route) {
      if (std::binary_search(sorted_links.begin(), sorted_links.end(), l)) {
        return true;
      }
    }
    return false;
  };
  ConflictMatrix conflicts;
  for (size_t i = 0; i < cfg.served.size(); ++i) {
    const int k = cfg.served[i];
    for (size_t j = i + 1; j < cfg.served.size(); ++j) {
      const int k2 = cfg.served[j];
      std::vector<int> route2 = cfg.routes.at(k2);
      std::sort(route2.begin(), route2.end());
      if (meets(cfg.routes.at(k), route2) ||
          meets(cfg.routes.at(k), cfg.propagation.at(k2)) ||
          meets(cfg.routes.at(k2), cfg.propagation.at(k))) {
        conflicts.Set(k, k2);
      }
    }
  }
  return conflicts;
}

FsnConfig BuildFsnConfig(const Network& net,
                         const std::vector<Request>& requests,
                         std::vector<int> tree_edges, std::vector<int> links,
                         std::vector<int> served) {
  FsnConfig cfg;
  SortUnique(tree_edges);
  SortUnique(links);
  SortUnique(served);
  for (int e : tree_edges) {
    cfg.nodes.push_back(net.edge(e).u);
    cfg.nodes.push_back(net.edge(e).v);
  }
  SortUnique(cfg.nodes);
  cfg.tree_edges = std::move(tree_edges);
  cfg.links = std::move(links);
  cfg.served = std::move(served);
  const std::vector<char> mask = LinkMask(net, cfg.links);
  for (int k : cfg.served) {
    std::optional<std::vector<int>> route =
        RouteInTree(net, mask, cfg.tree_edges, requests.at(k));
    if (!route) {
      throw std::invalid_argument("request " + std::to_string(k) +
                                  " cannot be routed in the FSN");
    }
    cfg.propagation[k] = Propagate(net, mask, *route);
    cfg.routes[k] = std::move(*route);
  }
  cfg.conflicts = DetectConflicts(cfg);
  return cfg;
}

std::vector<std::string> VerifyFsnConfig(const FsnConfig& cfg,
                                         const Network& net,
                                         const std::vector<Request>& requests,
                                         double reach_km) {
  std::vector<std::string> violations;
  auto in_range = [](const std::vector<int>& values, int limit) {
    return std::all_of(values.begin(), values.end(),
                       [limit](int x) { return x >= 0 && x < limit; });
  };
  if (!in_range(cfg.tree_edges, net.num_edges()) ||
      !in_range(cfg.nodes, net.num_nodes()) ||
      !in_range(cfg.links, net.num_links()) ||
      !in_range(cfg.served, static_cast<int>(requests.size()))) {
    violations.push_back("index out of range");
    return violations;
  }
  for (const auto* field : {&cfg.tree_edges, &cfg.nodes, &cfg.links,
                            &cfg.served}) {
    if (!IsSortedUnique(*field)) {
      violations.push_back("field not sorted or has duplicates");
      return violations;
    }
  }

  // Tree support.
  if (cfg.tree_edges.empty()) violations.push_back("empty tree");
  std::vector<int> endpoints;
  std::vector<int> parent(net.num_nodes());
  std::iota(parent.begin(), parent.end(), 0);
  bool has_cycle = false;
  for (int e : cfg.tree_edges) {
    const int u = net.edge(e).u;
    const int v = net.edge(e).v;
    endpoints.push_back(u);
    endpoints.push_back(v);
    const int ru = Find(parent, u);
    const int rv = Find(parent, v);
    if (ru == rv) {
      violations.push_back("subtour: edge " + EdgeName(net, e) +
                           " closes a cycle");
      has_cycle = true;
    } else {
      parent[ru] = rv;
    }
  }
  SortUnique(endpoints);
  if (endpoints != cfg.nodes) {
    violations.push_back("node set differs from tree endpoints");
  }
  if (!cfg.tree_edges.empty() &&
      cfg.tree_edges.size() + 1 != cfg.nodes.size()) {
    violations.push_back("tree size: " + std::to_string(cfg.tree_edges.size()) +
                         " edges on " + std::to_string(cfg.nodes.size()) +
                         " nodes");
  }
  if (!has_cycle && !endpoints.empty()) {
    const int root = Find(parent, endpoints.front());
    for (int v : endpoints) {
      if (Find(parent, v) != root) {
        violations.push_back("tree disconnected");
        break;
      }
    }
  }
  for (int l : cfg.links) {
    if (!std::binary_search(cfg.tree_edges.begin(), cfg.tree_edges.end(),
                            net.link(l).edge)) {
      violations.push_back("link without tree edge: " + net.LinkName(l));
    }
  }

  // Requests.
  const std::vector<char> mask = LinkMask(net, cfg.links);
  std::vector<char> carried(net.num_links(), 0);
  for (const auto& [k, route] : cfg.routes) {
    if (!cfg.Serves(k)) {
      violations.push_back("route for unserved request: k=" +
                           std::to_string(k));
    }
  }
  for (const auto& [k, flood] : cfg.propagation) {
    if (!cfg.Serves(k)) {
      violations.push_back("propagation for unserved request: k=" +
                           std::to_string(k));
    }
  }
  bool requests_ok = true;
  for (int k : cfg.served) {
    const std::string tag = "k=" + std::to_string(k);
    auto route_it = cfg.routes.find(k);
    auto flood_it = cfg.propagation.find(k);
    if (route_it == cfg.routes.end() || flood_it == cfg.propagation.end()) {
      violations.push_back("missing route or propagation: " + tag);
      requests_ok = false;
      continue;
    }
    const std::vector<int>& route = route_it->second;
    const std::vector<int>& flood = flood_it->second;
    if (!in_range(route, net.num_links()) ||
        !in_range(flood, net.num_links())) {
      violations.push_back("index out of range: " + tag);
      requests_ok = false;
      continue;
    }
    for (int l : flood) {
      if (!mask[l]) {
        violations.push_back("propagation outside FSN: " + tag + " on " +
                             net.LinkName(l));
      }
      carried[l] = 1;
      if (std::binary_search(flood.begin(), flood.end(), ReverseLink(l)) &&
          l < ReverseLink(l)) {
        violations.push_back("propagates both ways: " + tag + " on " +
                             net.LinkName(l));
      }
    }
    if (!has_cycle) {
      std::optional<std::vector<int>> expected =
          RouteInTree(net, mask, cfg.tree_edges, requests[k]);
      if (!expected || *expected != route) {
        violations.push_back("route is not the tree path: " + tag);
        requests_ok = false;
      } else if (Propagate(net, mask, route) != flood) {
        violations.push_back("propagation is not the flood closure: " + tag);
      }
    }
    for (int l : route) {
      if (!std::binary_search(flood.begin(), flood.end(), l)) {
        violations.push_back("route outside propagation: " + tag);
        break;
      }
    }
    const double length = RouteLength(net, route);
    if (length > reach_km) {
      violations.push_back("reach exceeded: " + tag + " route " + Km(length) +
                           " km > " + Km(reach_km) + " km");
    }
  }
  for (int l : cfg.links) {
    if (!carried[l]) violations.push_back("unused link: " + net.LinkName(l));
  }
  if (requests_ok && !(DetectConflicts(cfg) == cfg.conflicts)) {
    violations.push_back("conflict matrix mismatch");
  }
  return violations;
}

bool LinkDisjoint(const std::vector<FsnConfig>& fsns) {
  std::set<int> seen;
  for (const FsnConfig& fsn : fsns) {
    for (int l : fsn.links) {
      if (!seen.insert(l).second) return false;
    }
  }
  return true;
}

LoadReport LinkLoads(const Network& net, const std::vector<FsnConfig>& selected,
                     const std::vector<int>& wavelength) {
  if (!LinkDisjoint(selected)) {
    throw std::invalid_argument("selected FSNs share a directed link");
  }
  std::vector<std::set<int>> filtered(net.num_links());
  std::vector<std::set<int>> total(net.num_links());
  for (const FsnConfig& fsn : selected) {
    for (int k : fsn.served) {
      const int w = k < static_cast<int>(wavelength.size()) ? wavelength[k] : -1;
      if (w < 0) continue;
      for (int l : fsn.routes.at(k)) filtered[l].insert(w);
      for (int l : fsn.propagation.at(k)) total[l].insert(w);
    }
  }
  LoadReport report;
  report.filtered.resize(net.num_links());
  report.total.resize(net.num_links());
  for (int l = 0; l < net.num_links(); ++l) {
    report.filtered[l] = static_cast<int>(filtered[l].size());
    report.total[l] = static_cast<int>(total[l].size());
    report.max_filtered = std::max(report.max_filtered, report.filtered[l]);
    report.max_total = std::max(report.max_total, report.total[l]);
  }
  return report;
}

}  // namespace filterless
