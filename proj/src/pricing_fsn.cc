#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "filterless/pricing.h"

namespace filterless {
namespace {

using milp::RowSense;

std::string Name(const char* prefix, std::initializer_list<int> indices) {
  std::string name = prefix;
  for (int i : indices) name += "_" + std::to_string(i);
  return name;
}

// Shortest path lengths from `source` over all physical links.
std::vector<double> Distances(const Network& net, int source, bool forward) {
  std::vector<double> dist(net.num_nodes(), milp::kInfinity);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  dist[source] = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (int l : forward ? net.out_links(v) : net.in_links(v)) {
      const int next = forward ? net.link(l).to : net.link(l).from;
      const double candidate = d + net.link(l).length_km;
      if (candidate < dist[next]) {
        dist[next] = candidate;
        queue.push({candidate, next});
      }
    }
  }
  return dist;
}

}  // namespace

FsnPricingModel BuildPpFsn(const Network& net,
                           const std::vector<Request>& requests,
                           const Duals& duals, const SolverConfig& cfg) {
  FsnPricingModel pp;
  pp.num_nodes = net.num_nodes();
  pp.num_edges = net.num_edges();
  pp.num_links = net.num_links();
  pp.num_requests = static_cast<int>(requests.size());
  const int K = pp.num_requests;
  const int L = pp.num_links;
  milp::LinearModel& m = pp.model;

  for (int e = 0; e < pp.num_edges; ++e) m.AddBinary(Name("alpha", {e}), 0.0);
  for (int v = 0; v < pp.num_nodes; ++v) m.AddBinary(Name("av", {v}), 0.0);
  for (int l = 0; l < L; ++l) m.AddBinary(Name("a", {l}), -duals.u3[l]);
  for (int k = 0; k < K; ++k) m.AddBinary(Name("x", {k}), -duals.u2[k]);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) m.AddBinary(Name("phi", {k, l}), 0.0);
  }
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) m.AddBinary(Name("psi", {k, l}), 0.0);
  }
  for (int k = 0; k < K; ++k) {
    for (int k2 = k + 1; k2 < K; ++k2) {
      m.AddBinary(Name("theta", {k, k2}), -duals.u5[PairIndex(k, k2, K)]);
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int k2 = 0; k2 < K; ++k2) {
      if (k == k2) continue;
      for (int l = 0; l < L; ++l) {
        m.AddBinary(Name("omega", {k, k2, l}), 0.0);
      }
    }
  }
  m.set_objective_offset(-duals.u4);

  if (cfg.restrict_routing_variables) {
    // A filtered route through l = (u, v) is at least
    // dist(s, u) + len(l) + dist(v, d) long.
    for (int k = 0; k < K; ++k) {
      const std::vector<double> from = Distances(net, requests[k].source, true);
      const std::vector<double> to =
          Distances(net, requests[k].destination, false);
      for (int l = 0; l < L; ++l) {
        const Link& link = net.link(l);
        if (from[link.from] + link.length_km + to[link.to] > cfg.reach_km) {
          m.variable(pp.psi(k, l)).upper = 0.0;
        }
      }
    }
  }

  // Tree structure.
  {
    milp::Constraint row{"single_tree", {}, {}, RowSense::kEqual, 1.0};
    for (int v = 0; v < pp.num_nodes; ++v) {
      row.indices.push_back(pp.node(v));
      row.values.push_back(1.0);
    }
    for (int e = 0; e < pp.num_edges; ++e) {
      row.indices.push_back(pp.alpha(e));
      row.values.push_back(-1.0);
    }
    m.AddConstraint(std::move(row));
  }
  for (int e = 0; e < pp.num_edges; ++e) {
    const Edge& edge = net.edge(e);
    m.AddConstraint(Name("edge_nodes", {e}),
                    {pp.alpha(e), pp.node(edge.u), pp.node(edge.v)},
                    {2.0, -1.0, -1.0}, RowSense::kLessEqual, 0.0);
  }
  for (int v = 0; v < pp.num_nodes; ++v) {
    milp::Constraint row{Name("node_edges", {v}), {}, {},
                         RowSense::kGreaterEqual, 0.0};
    for (int e : net.cocycle(v)) {
      row.indices.push_back(pp.alpha(e));
      row.values.push_back(1.0);
    }
    row.indices.push_back(pp.node(v));
    row.values.push_back(-1.0);
    m.AddConstraint(std::move(row));
  }
  for (int l = 0; l < L; ++l) {
    m.AddConstraint(Name("link_edge", {l}),
                    {pp.link(l), pp.alpha(net.link(l).edge)}, {1.0, -1.0},
                    RowSense::kLessEqual, 0.0);
  }

  // Routing and propagation.
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) {
      m.AddConstraint(Name("phi_link", {k, l}), {pp.phi(k, l), pp.link(l)},
                      {1.0, -1.0}, RowSense::kLessEqual, 0.0);
    }
  }
  for (int l = 0; l < L; ++l) {
    milp::Constraint row{Name("link_used", {l}), {pp.link(l)}, {1.0},
                         RowSense::kLessEqual, 0.0};
    for (int k = 0; k < K; ++k) {
      row.indices.push_back(pp.phi(k, l));
      row.values.push_back(-1.0);
    }
    m.AddConstraint(std::move(row));
  }
  for (int k = 0; k < K; ++k) {
    for (int e = 0; e < pp.num_edges; ++e) {
      m.AddConstraint(Name("loop", {k, e}),
                      {pp.phi(k, net.edge(e).forward_link()),
                       pp.phi(k, net.edge(e).backward_link())},
                      {1.0, 1.0}, RowSense::kLessEqual, 1.0);
    }
  }

  auto flow_row = [&](std::string name, const std::vector<int>& links,
                      auto var, int x_index, RowSense sense, double rhs) {
    milp::Constraint row{std::move(name), {}, {}, sense, rhs};
    for (int l : links) {
      row.indices.push_back(var(l));
      row.values.push_back(1.0);
    }
    if (x_index >= 0) {
      row.indices.push_back(x_index);
      row.values.push_back(-1.0);
    }
    m.AddConstraint(std::move(row));
  };

  for (int k = 0; k < K; ++k) {
    const int s = requests[k].source;
    const int d = requests[k].destination;
    auto phi = [&pp, k](int l) { return pp.phi(k, l); };
    auto psi = [&pp, k](int l) { return pp.psi(k, l); };

    flow_row(Name("phi_in_dest", {k}), net.in_links(d), phi, pp.x(k),
             RowSense::kEqual, 0.0);
    flow_row(Name("phi_out_src", {k}), net.out_links(s), phi, pp.x(k),
             RowSense::kEqual, 0.0);
    flow_row(Name("phi_in_src", {k}), net.in_links(s), phi, -1,
             RowSense::kEqual, 0.0);

    for (int v = 0; v < pp.num_nodes; ++v) {
      for (int out : net.out_links(v)) {
        if (v != s) {
          milp::Constraint row{Name("unfiltered_start", {k, v, out}),
                               {pp.phi(k, out), pp.link(out)},
                               {1.0, 1.0},
                               RowSense::kLessEqual,
                               1.0};
          for (int in : net.in_links(v)) {
            row.indices.push_back(pp.phi(k, in));
            row.values.push_back(-1.0);
          }
          m.AddConstraint(std::move(row));
        }
        for (int in : net.in_links(v)) {
          if (in == ReverseLink(out)) continue;
          // phi_in <= a_in makes the a_in term redundant; leaving it out
          // tightens the relaxation.
          m.AddConstraint(Name("unfiltered_flood", {k, in, out}),
                          {pp.phi(k, in), pp.phi(k, out), pp.link(out)},
                          {1.0, -1.0, 1.0}, RowSense::kLessEqual, 1.0);
        }
      }
    }

    flow_row(Name("psi_in_dest", {k}), net.in_links(d), psi, pp.x(k),
             RowSense::kEqual, 0.0);
    flow_row(Name("psi_out_src", {k}), net.out_links(s), psi, pp.x(k),
             RowSense::kEqual, 0.0);
    for (int v = 0; v < pp.num_nodes; ++v) {
      if (v == s || v == d) continue;
      milp::Constraint balance{Name("psi_balance", {k, v}), {}, {},
                               RowSense::kEqual, 0.0};
      for (int in : net.in_links(v)) {
        balance.indices.push_back(pp.psi(k, in));
        balance.values.push_back(1.0);
      }
      for (int out : net.out_links(v)) {
        balance.indices.push_back(pp.psi(k, out));
        balance.values.push_back(-1.0);
      }
      m.AddConstraint(std::move(balance));
      flow_row(Name("psi_through", {k, v}), net.in_links(v), psi, pp.x(k),
               RowSense::kLessEqual, 0.0);
    }
    flow_row(Name("psi_out_dest", {k}), net.out_links(d), psi, -1,
             RowSense::kEqual, 0.0);
    flow_row(Name("psi_in_src", {k}), net.in_links(s), psi, -1,
             RowSense::kEqual, 0.0);

    milp::Constraint reach{Name("reach", {k}), {}, {}, RowSense::kLessEqual,
                           cfg.reach_km};
    for (int l = 0; l < L; ++l) {
      if (net.link(l).length_km == 0.0) continue;
      reach.indices.push_back(pp.psi(k, l));
      reach.values.push_back(net.link(l).length_km);
    }
    m.AddConstraint(std::move(reach));
    for (int l = 0; l < L; ++l) {
      m.AddConstraint(Name("psi_phi", {k, l}), {pp.psi(k, l), pp.phi(k, l)},
                      {1.0, -1.0}, RowSense::kLessEqual, 0.0);
    }
  }

  // Conflicts.
  for (int k = 0; k < K; ++k) {
    for (int k2 = k + 1; k2 < K; ++k2) {
      const int theta = pp.theta(k, k2);
      for (int l = 0; l < L; ++l) {
        m.AddConstraint(Name("conflict_routes", {k, k2, l}),
                        {pp.psi(k, l), pp.psi(k2, l), theta},
                        {1.0, 1.0, -1.0}, RowSense::kLessEqual, 1.0);
        m.AddConstraint(Name("conflict_flood", {k, k2, l}),
                        {pp.psi(k, l), pp.phi(k2, l), theta},
                        {1.0, 1.0, -1.0}, RowSense::kLessEqual, 1.0);
        m.AddConstraint(Name("conflict_flood", {k2, k, l}),
                        {pp.psi(k2, l), pp.phi(k, l), theta},
                        {1.0, 1.0, -1.0}, RowSense::kLessEqual, 1.0);
      }
      milp::Constraint row{Name("no_conflict", {k, k2}), {theta}, {1.0},
                           RowSense::kLessEqual, 0.0};
      for (int l = 0; l < L; ++l) {
        row.indices.push_back(pp.omega(k, k2, l));
        row.values.push_back(-1.0);
        row.indices.push_back(pp.omega(k2, k, l));
        row.values.push_back(-1.0);
      }
      m.AddConstraint(std::move(row));
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int k2 = 0; k2 < K; ++k2) {
      if (k == k2) continue;
      for (int l = 0; l < L; ++l) {
        const int omega = pp.omega(k, k2, l);
        m.AddConstraint(Name("omega_psi", {k, k2, l}), {omega, pp.psi(k, l)},
                        {1.0, -1.0}, RowSense::kLessEqual, 0.0);
        m.AddConstraint(Name("omega_phi", {k, k2, l}), {omega, pp.phi(k2, l)},
                        {1.0, -1.0}, RowSense::kLessEqual, 0.0);
        m.AddConstraint(Name("omega_both", {k, k2, l}),
                        {pp.psi(k, l), pp.phi(k2, l), omega},
                        {1.0, 1.0, -1.0}, RowSense::kLessEqual, 1.0);
      }
    }
  }
  return pp;
}

std::vector<SubtourCut> SeparateSubtours(const Network& net,
                                         const std::vector<double>& alpha) {
  const int n = net.num_nodes();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> selected;
  for (int e = 0; e < net.num_edges(); ++e) {
    if (alpha[e] < 0.5) continue;
    selected.push_back(e);
    parent[find(net.edge(e).u)] = find(net.edge(e).v);
  }
  std::vector<int> edge_count(n, 0);
  std::vector<int> node_count(n, 0);
  std::vector<char> touched(n, 0);
  for (int e : selected) {
    ++edge_count[find(net.edge(e).u)];
    touched[net.edge(e).u] = 1;
    touched[net.edge(e).v] = 1;
  }
  for (int v = 0; v < n; ++v) {
    if (touched[v]) ++node_count[find(v)];
  }
  std::vector<SubtourCut> cuts;
  for (int root = 0; root < n; ++root) {
    if (find(root) != root || edge_count[root] < node_count[root]) continue;
    if (node_count[root] == 0) continue;
    SubtourCut cut;
    std::vector<char> inside(n, 0);
    for (int v = 0; v < n; ++v) {
      if (touched[v] && find(v) == root) {
        cut.nodes.push_back(v);
        inside[v] = 1;
      }
    }
    for (int e = 0; e < net.num_edges(); ++e) {
      if (inside[net.edge(e).u] && inside[net.edge(e).v]) {
        cut.edges.push_back(e);
      }
    }
    cut.rhs = static_cast<int>(cut.nodes.size()) - 1;
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

PricingResult PriceFsn(const Network& net, const std::vector<Request>& requests,
                       const Duals& duals, const SolverConfig& cfg,
                       double time_limit_s, const std::string& dump_path) {
  FsnPricingModel pp = BuildPpFsn(net, requests, duals, cfg);
  if (!dump_path.empty()) {
    std::ofstream out(dump_path);
    pp.model.WriteLp(out);
  }
  milp::Separator separator = [&](std::span<const double> values) {
    std::vector<double> alpha(values.begin(), values.begin() + pp.num_edges);
    std::vector<milp::Constraint> rows;
    for (const SubtourCut& cut : SeparateSubtours(net, alpha)) {
      milp::Constraint row{"subtour", {}, {}, RowSense::kLessEqual,
                           static_cast<double>(cut.rhs)};
      for (int e : cut.edges) {
        row.indices.push_back(pp.alpha(e));
        row.values.push_back(1.0);
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };
  milp::IlpOptions options;
  options.time_limit_seconds = time_limit_s;
  options.cutoff = -cfg.rc_tolerance;
  // Deciding the served set first keeps the search trees small.
  options.branch_priority.assign(pp.model.num_variables(), 0);
  for (int k = 0; k < pp.num_requests; ++k) {
    options.branch_priority[pp.x(k)] = 1;
  }
  milp::IlpSolution ilp = milp::SolveIlp(pp.model, separator, options);

  PricingResult result;
  result.nodes = ilp.nodes;
  result.cuts = ilp.lazy_cuts;
  result.proven = ilp.status != milp::SolveStatus::kLimit;
  if (ilp.primal.empty()) {
    if (ilp.status == milp::SolveStatus::kInfeasible) {
      throw std::logic_error("FSN pricing model infeasible");
    }
    return result;
  }
  result.objective = ilp.objective;
  const std::vector<double>& value = ilp.primal;
  auto on = [&value](int index) { return value[index] > 0.5; };

  std::vector<int> tree;
  std::vector<int> links;
  std::vector<int> served;
  for (int e = 0; e < pp.num_edges; ++e) {
    if (on(pp.alpha(e))) tree.push_back(e);
  }
  for (int l = 0; l < pp.num_links; ++l) {
    if (on(pp.link(l))) links.push_back(l);
  }
  for (int k = 0; k < pp.num_requests; ++k) {
    if (on(pp.x(k))) served.push_back(k);
  }
  FsnConfig column = BuildFsnConfig(net, requests, tree, links, served);

  // The model's routing, flood, and conflict variables must agree with the
  // constructive semantics.
  for (int k = 0; k < pp.num_requests; ++k) {
    std::vector<int> psi;
    std::vector<int> phi;
    for (int l = 0; l < pp.num_links; ++l) {
      if (on(pp.psi(k, l))) psi.push_back(l);
      if (on(pp.phi(k, l))) phi.push_back(l);
    }
    if (!column.Serves(k)) {
      if (!psi.empty() || !phi.empty()) {
        throw std::logic_error("pricing routes an unserved request");
      }
      continue;
    }
    std::vector<int> route = column.routes.at(k);
    std::sort(route.begin(), route.end());
    if (psi != route || phi != column.propagation.at(k)) {
      throw std::logic_error("pricing route or flood differs for request " +
                             std::to_string(k));
    }
  }
  for (int k = 0; k < pp.num_requests; ++k) {
    for (int k2 = k + 1; k2 < pp.num_requests; ++k2) {
      if (on(pp.theta(k, k2)) != column.conflicts.Get(k, k2)) {
        throw std::logic_error("pricing conflict differs for requests " +
                               std::to_string(k) + "," + std::to_string(k2));
      }
    }
  }
  std::vector<std::string> violations =
      VerifyFsnConfig(column, net, requests, cfg.reach_km);
  if (!violations.empty()) {
    throw std::logic_error("priced FSN fails verification: " + violations[0]);
  }
  result.reduced_cost = FsnReducedCost(column, duals);
  if (std::abs(result.reduced_cost - result.objective) > 1e-6) {
    throw std::logic_error("priced FSN reduced cost mismatch");
  }
  if (result.objective < -cfg.rc_tolerance) result.fsn = std::move(column);
  return result;
}

}  // namespace filterless
