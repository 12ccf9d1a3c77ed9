#include "filterless/oracle.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace filterless {
namespace {

bool ColorFrom(int v, int colors, const std::vector<int>& order,
               const std::vector<uint32_t>& adjacent, std::vector<int>& color,
               int used) {
  if (v == static_cast<int>(order.size())) return true;
  const int vertex = order[v];
  for (int c = 0; c < std::min(colors, used + 1); ++c) {
    bool clash = false;
    for (uint32_t rest = adjacent[vertex]; rest && !clash; rest &= rest - 1) {
      clash = color[std::countr_zero(rest)] == c;
    }
    if (clash) continue;
    color[vertex] = c;
    if (ColorFrom(v + 1, colors, order, adjacent, color, std::max(used, c + 1))) {
      return true;
    }
    color[vertex] = -1;
  }
  return false;
}

int Chromatic(const std::vector<uint32_t>& adjacent) {
  const int n = static_cast<int>(adjacent.size());
  if (n == 0) return 0;
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&adjacent](int a, int b) {
    return std::popcount(adjacent[a]) > std::popcount(adjacent[b]);
  });
  for (int colors = 1;; ++colors) {
    std::vector<int> color(n, -1);
    if (ColorFrom(0, colors, order, adjacent, color, 0)) return colors;
  }
}

struct Candidate {
  uint32_t links = 0;
  int chromatic = 0;
};

class Search {
 public:
  Search(const Network& net, const std::vector<Request>& requests,
         double reach)
      : net_(net), requests_(requests), reach_(reach),
        num_requests_(static_cast<int>(requests.size())),
        by_group_(size_t{1} << num_requests_) {}

  void Run() {
    const int m = net_.num_edges();
    for (uint32_t edges = 1; edges < (1u << m); ++edges) {
      if (!Acyclic(edges)) continue;
      std::vector<int> chosen;
      for (int e = 0; e < m; ++e) {
        if (edges >> e & 1) chosen.push_back(e);
      }
      // Each chosen edge carries its forward link, backward link, or both.
      int combos = 1;
      for (size_t i = 0; i < chosen.size(); ++i) combos *= 3;
      for (int code = 0; code < combos; ++code) {
        uint32_t links = 0;
        int rest = code;
        for (int e : chosen) {
          const int choice = rest % 3;
          rest /= 3;
          if (choice != 1) links |= 1u << net_.edge(e).forward_link();
          if (choice != 0) links |= 1u << net_.edge(e).backward_link();
        }
        AddLinkSet(links);
      }
    }
  }

  const std::vector<std::map<uint32_t, int>>& by_group() const {
    return by_group_;
  }

 private:
  bool Acyclic(uint32_t edges) const {
    std::vector<int> parent(net_.num_nodes());
    for (size_t v = 0; v < parent.size(); ++v) parent[v] = static_cast<int>(v);
    auto find = [&parent](int x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    for (int e = 0; e < net_.num_edges(); ++e) {
      if (!(edges >> e & 1)) continue;
      const int a = find(net_.edge(e).u);
      const int b = find(net_.edge(e).v);
      if (a == b) return false;
      parent[a] = b;
    }
    return true;
  }

  // Directed path from s to d over `links`; returns false when none.
  bool Route(uint32_t links, int s, int d, uint32_t& route,
             int& first) const {
    std::vector<int> via(net_.num_nodes(), -1);
    std::vector<int> queue = {s};
    std::vector<char> seen(net_.num_nodes(), 0);
    seen[s] = 1;
    for (size_t i = 0; i < queue.size(); ++i) {
      const int u = queue[i];
      for (int l : net_.out_links(u)) {
        if (!(links >> l & 1) || seen[net_.link(l).to]) continue;
        seen[net_.link(l).to] = 1;
        via[net_.link(l).to] = l;
        queue.push_back(net_.link(l).to);
      }
    }
    if (!seen[d]) return false;
    route = 0;
    double length = 0.0;
    for (int v = d; v != s; v = net_.link(via[v]).from) {
      route |= 1u << via[v];
      length += net_.link(via[v]).length_km;
      first = via[v];
    }
    return length <= reach_;
  }

  // Everything downstream of `first`, never turning back on an edge.
  uint32_t Flood(uint32_t links, int first) const {
    uint32_t flood = 1u << first;
    std::vector<int> queue = {first};
    for (size_t i = 0; i < queue.size(); ++i) {
      const Link& in = net_.link(queue[i]);
      for (int l : net_.out_links(in.to)) {
        if (!(links >> l & 1) || (flood >> l & 1) || net_.link(l).to == in.from) {
          continue;
        }
        flood |= 1u << l;
        queue.push_back(l);
      }
    }
    return flood;
  }

  void AddLinkSet(uint32_t links) {
    const int K = num_requests_;
    std::vector<uint32_t> route(K, 0), flood(K, 0);
    uint32_t servable = 0;
    for (int k = 0; k < K; ++k) {
      int first = -1;
      if (Route(links, requests_[k].source, requests_[k].destination, route[k],
                first)) {
        flood[k] = Flood(links, first);
        servable |= 1u << k;
      }
    }
    // Every nonempty group of servable requests whose floods use every link.
    for (uint32_t group = servable; group; group = (group - 1) & servable) {
      uint32_t used = 0;
      for (uint32_t rest = group; rest; rest &= rest - 1) {
        used |= flood[std::countr_zero(rest)];
      }
      if (used != links) continue;
      std::vector<int> members;
      for (uint32_t rest = group; rest; rest &= rest - 1) {
        members.push_back(std::countr_zero(rest));
      }
      std::vector<uint32_t> adjacent(members.size(), 0);
      uint64_t key = group;
      int bit = K;
      for (size_t i = 0; i < members.size(); ++i) {
        for (size_t j = i + 1; j < members.size(); ++j) {
          const int a = members[i], b = members[j];
          const bool conflict =
              (route[a] & flood[b]) != 0 || (route[b] & flood[a]) != 0;
          if (conflict) {
            adjacent[i] |= 1u << j;
            adjacent[j] |= 1u << i;
            key |= uint64_t{1} << bit;
          }
          ++bit;
        }
      }
      auto [it, inserted] = chromatic_cache_.try_emplace(key, 0);
      if (inserted) it->second = Chromatic(adjacent);
      auto [slot, fresh] = by_group_[group].try_emplace(links, it->second);
      if (!fresh) slot->second = std::min(slot->second, it->second);
    }
  }

  const Network& net_;
  const std::vector<Request>& requests_;
  double reach_;
  int num_requests_;
  // Per request group, every feasible link set and its wavelength count.
  std::vector<std::map<uint32_t, int>> by_group_;
  std::unordered_map<uint64_t, int> chromatic_cache_;
};

// Whether some a in `first` and b in `second` are disjoint.
bool DisjointPair(const std::vector<uint32_t>& first,
                  const std::vector<uint32_t>& second, int num_links) {
  if (first.empty() || second.empty()) return false;
  if (first.size() * second.size() <= (size_t{1} << 20)) {
    for (uint32_t a : first) {
      for (uint32_t b : second) {
        if ((a & b) == 0) return true;
      }
    }
    return false;
  }
  // contains[m]: some b is a subset of m.
  std::vector<char> contains(size_t{1} << num_links, 0);
  for (uint32_t b : second) contains[b] = 1;
  for (int bit = 0; bit < num_links; ++bit) {
    for (uint32_t m = 0; m < contains.size(); ++m) {
      if (m >> bit & 1) contains[m] |= contains[m ^ (1u << bit)];
    }
  }
  const uint32_t all = static_cast<uint32_t>(contains.size() - 1);
  for (uint32_t a : first) {
    if (contains[all & ~a]) return true;
  }
  return false;
}

}  // namespace

int OracleMinColoring(int num_vertices,
                      const std::vector<std::pair<int, int>>& edges) {
  if (num_vertices < 0 || num_vertices > kOracleMaxColoringVertices) {
    throw std::invalid_argument("coloring oracle supports at most " +
                                std::to_string(kOracleMaxColoringVertices) +
                                " vertices");
  }
  std::vector<uint32_t> adjacent(num_vertices, 0);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (a == b) throw std::invalid_argument("self-loop in conflict graph");
    adjacent[a] |= 1u << b;
    adjacent[b] |= 1u << a;
  }
  return Chromatic(adjacent);
}

std::optional<int> OracleOptimum(const Network& net,
                                 const std::vector<Request>& requests,
                                 const SolverConfig& cfg) {
  if (net.num_nodes() > kOracleMaxNodes || net.num_edges() > kOracleMaxEdges ||
      static_cast<int>(requests.size()) > kOracleMaxRequests) {
    throw std::invalid_argument(
        "oracle limits: at most 6 nodes, 8 edges and 8 requests");
  }
  if (!cfg.max_fsn || *cfg.max_fsn < 1 || *cfg.max_fsn > kOracleMaxFsn) {
    throw std::invalid_argument("oracle needs an FSN limit of 1 or 2");
  }
  const int K = static_cast<int>(requests.size());
  if (K == 0) return 0;

  Search search(net, requests, cfg.reach_km);
  search.Run();
  const auto& by_group = search.by_group();
  const uint32_t all = (1u << K) - 1;

  int best = K + 1;
  for (const auto& [links, chromatic] : by_group[all]) {
    best = std::min(best, chromatic);
  }
  if (*cfg.max_fsn >= 2) {
    // Groups containing request 0 paired with their complement.
    for (uint32_t group = 1; group < all; group += 2) {
      const auto& first = by_group[group];
      const auto& second = by_group[all & ~group];
      if (first.empty() || second.empty()) continue;
      for (int w = 1; w < best; ++w) {
        std::vector<uint32_t> a, b;
        for (const auto& [links, chromatic] : first) {
          if (chromatic <= w) a.push_back(links);
        }
        for (const auto& [links, chromatic] : second) {
          if (chromatic <= w) b.push_back(links);
        }
        if (DisjointPair(a, b, net.num_links())) {
          best = w;
          break;
        }
      }
    }
  }
  if (best > K) return std::nullopt;
  return best;
}

}  // namespace filterless
