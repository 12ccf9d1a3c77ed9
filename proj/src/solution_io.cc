#include "filterless/solution_io.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "json.hpp"

namespace filterless {
namespace {

using json = nlohmann::ordered_json;

constexpr double kTolerance = 1e-6;

json NamePair(const Network& net, int a, int b) {
  return json::array({net.node_name(a), net.node_name(b)});
}

json LinkJson(const Network& net, int link) {
  return NamePair(net, net.link(link).from, net.link(link).to);
}

json LinkList(const Network& net, const std::vector<int>& links) {
  json out = json::array();
  for (int l : links) out.push_back(LinkJson(net, l));
  return out;
}

json Number(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

double NumberOr(const json& value, double fallback) {
  return value.is_null() ? fallback : value.get<double>();
}

json FsnJson(const Network& net, const FsnConfig& fsn) {
  json tree = json::array();
  for (int e : fsn.tree_edges) {
    tree.push_back(NamePair(net, net.edge(e).u, net.edge(e).v));
  }
  json requests = json::array();
  for (int k : fsn.served) {
    json entry = {{"request", k}};
    auto route = fsn.routes.find(k);
    entry["route"] = LinkList(net, route == fsn.routes.end()
                                       ? std::vector<int>{}
                                       : route->second);
    auto flood = fsn.propagation.find(k);
    entry["propagation"] = LinkList(net, flood == fsn.propagation.end()
                                             ? std::vector<int>{}
                                             : flood->second);
    requests.push_back(std::move(entry));
  }
  json conflicts = json::array();
  for (auto [a, b] : fsn.conflicts.pairs()) {
    conflicts.push_back(json::array({a, b}));
  }
  return {{"tree_edges", tree},
          {"links", LinkList(net, fsn.links)},
          {"requests", requests},
          {"conflicts", conflicts}};
}

int ResolveNode(const Network& net, const json& name) {
  const std::string text = name.get<std::string>();
  const std::optional<int> node = net.FindNode(text);
  if (!node) throw SolutionFormatError("unknown node: " + text);
  return *node;
}

std::pair<int, int> ResolvePair(const Network& net, const json& pair) {
  if (!pair.is_array() || pair.size() != 2) {
    throw SolutionFormatError("expected a [from, to] pair: " + pair.dump());
  }
  return {ResolveNode(net, pair[0]), ResolveNode(net, pair[1])};
}

int ResolveLink(const Network& net, const json& pair) {
  auto [a, b] = ResolvePair(net, pair);
  const int link = net.FindLink(a, b);
  if (link < 0) throw SolutionFormatError("no such link: " + pair.dump());
  return link;
}

std::vector<int> ResolveLinks(const Network& net, const json& list) {
  std::vector<int> out;
  for (const json& pair : list) out.push_back(ResolveLink(net, pair));
  return out;
}

FsnConfig ReadFsn(const Network& net, const json& in) {
  FsnConfig fsn;
  std::set<int> nodes;
  for (const json& pair : in.at("tree_edges")) {
    auto [a, b] = ResolvePair(net, pair);
    const int edge = net.FindEdge(a, b);
    if (edge < 0) throw SolutionFormatError("no such edge: " + pair.dump());
    fsn.tree_edges.push_back(edge);
    nodes.insert(a);
    nodes.insert(b);
  }
  fsn.nodes.assign(nodes.begin(), nodes.end());
  fsn.links = ResolveLinks(net, in.at("links"));
  for (const json& entry : in.at("requests")) {
    const int k = entry.at("request").get<int>();
    fsn.served.push_back(k);
    fsn.routes[k] = ResolveLinks(net, entry.at("route"));
    fsn.propagation[k] = ResolveLinks(net, entry.at("propagation"));
  }
  for (const json& pair : in.at("conflicts")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw SolutionFormatError("bad conflict pair: " + pair.dump());
    }
    const int a = pair[0].get<int>(), b = pair[1].get<int>();
    if (a == b) throw SolutionFormatError("self conflict: " + pair.dump());
    fsn.conflicts.Set(a, b);
  }
  return fsn;
}

const char* const kPalette[] = {"blue", "red", "darkgreen", "orange",
                                "purple", "brown", "deeppink", "teal"};

}  // namespace

SolutionDocument MakeSolutionDocument(const std::vector<Request>& requests,
                                      const SolverConfig& cfg,
                                      const RunResult& result) {
  SolutionDocument doc;
  doc.requests = requests;
  doc.reach_km = cfg.reach_km;
  doc.max_fsn = cfg.max_fsn;
  doc.design = result.design;
  doc.termination = ToString(result.log.termination);
  doc.certified = result.log.certified;
  doc.iterations = result.log.iterations;
  doc.elapsed_s = result.log.elapsed_s;
  return doc;
}

void WriteSolution(const SolutionDocument& doc, const Network& net,
                   std::ostream& out) {
  const DesignSolution& design = doc.design;
  json requests = json::array();
  for (const Request& r : doc.requests) {
    requests.push_back({{"id", r.id},
                        {"source", net.node_name(r.source)},
                        {"destination", net.node_name(r.destination)}});
  }
  json fsns = json::array();
  for (const FsnConfig& fsn : design.selected_fsns) {
    fsns.push_back(FsnJson(net, fsn));
  }
  json assignment = json::array();
  for (size_t k = 0; k < design.wavelength.size(); ++k) {
    assignment.push_back({{"request", k},
                          {"fsn", design.serving_fsn[k]},
                          {"wavelength", design.wavelength[k]}});
  }
  json link_loads = json::array();
  for (int l = 0; l < net.num_links(); ++l) {
    if (l >= static_cast<int>(design.loads.total.size())) break;
    if (design.loads.total[l] == 0) continue;
    link_loads.push_back({{"link", LinkJson(net, l)},
                          {"filtered", design.loads.filtered[l]},
                          {"unfiltered", design.loads.total[l]}});
  }
  json trace = json::array();
  for (const CgIteration& it : doc.iterations) {
    trace.push_back({{"iteration", it.iteration},
                     {"lp_value", it.lp_value},
                     {"pricer", it.pricer},
                     {"reduced_cost", Number(it.reduced_cost)}});
  }
  json root = {
      {"format", kSolutionFormat},
      {"reach_km", doc.reach_km},
      {"max_fsn", doc.max_fsn ? json(*doc.max_fsn) : json(nullptr)},
      {"requests", requests},
      {"W", design.W},
      {"z_lp", design.z_lp},
      {"epsilon", Number(design.epsilon)},
      {"termination", doc.termination},
      {"certified", doc.certified},
      {"elapsed_s", doc.elapsed_s},
      {"fsns", fsns},
      {"assignment", assignment},
      {"loads",
       {{"max_filtered", design.loads.max_filtered},
        {"max_unfiltered", design.loads.max_total},
        {"links", link_loads}}},
      {"iterations", trace},
  };
  out << root.dump(2) << '\n';
}

SolutionDocument ReadSolution(std::istream& in, const Network& net) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw SolutionFormatError(std::string("not a JSON document: ") + e.what());
  }
  if (!root.is_object() || !root.contains("format") ||
      root["format"] != kSolutionFormat) {
    throw SolutionFormatError(std::string("missing format tag \"") +
                              kSolutionFormat + "\"");
  }
  SolutionDocument doc;
  try {
    doc.reach_km = root.at("reach_km").get<double>();
    if (!root.at("max_fsn").is_null()) doc.max_fsn = root["max_fsn"].get<int>();
    for (const json& r : root.at("requests")) {
      doc.requests.push_back({r.at("id").get<int>(),
                              ResolveNode(net, r.at("source")),
                              ResolveNode(net, r.at("destination"))});
    }
    DesignSolution& design = doc.design;
    design.W = root.at("W").get<int>();
    design.z_lp = root.at("z_lp").get<double>();
    design.epsilon = NumberOr(root.at("epsilon"),
                              std::numeric_limits<double>::infinity());
    doc.termination = root.value("termination", "");
    doc.certified = root.value("certified", false);
    doc.elapsed_s = root.value("elapsed_s", 0.0);
    for (const json& fsn : root.at("fsns")) {
      design.selected_fsns.push_back(ReadFsn(net, fsn));
    }
    const size_t K = doc.requests.size();
    design.serving_fsn.assign(K, -1);
    design.wavelength.assign(K, -1);
    for (const json& a : root.at("assignment")) {
      const int k = a.at("request").get<int>();
      if (k < 0 || k >= static_cast<int>(K)) {
        throw SolutionFormatError("assignment for unknown request " +
                                  std::to_string(k));
      }
      design.serving_fsn[k] = a.at("fsn").get<int>();
      design.wavelength[k] = a.at("wavelength").get<int>();
    }
    const json& loads = root.at("loads");
    design.loads.max_filtered = loads.at("max_filtered").get<int>();
    design.loads.max_total = loads.at("max_unfiltered").get<int>();
    design.loads.filtered.assign(net.num_links(), 0);
    design.loads.total.assign(net.num_links(), 0);
    for (const json& entry : loads.at("links")) {
      const int l = ResolveLink(net, entry.at("link"));
      design.loads.filtered[l] = entry.at("filtered").get<int>();
      design.loads.total[l] = entry.at("unfiltered").get<int>();
    }
    for (const json& it : root.value("iterations", json::array())) {
      CgIteration entry;
      entry.iteration = it.at("iteration").get<int>();
      entry.lp_value = it.at("lp_value").get<double>();
      entry.pricer = it.at("pricer").get<std::string>();
      entry.reduced_cost = NumberOr(it.at("reduced_cost"), 0.0);
      doc.iterations.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw SolutionFormatError(std::string("malformed solution: ") + e.what());
  }
  return doc;
}

std::vector<std::string> ValidateSolution(const SolutionDocument& doc,
                                          const Network& net) {
  std::vector<std::string> issues;
  const DesignSolution& design = doc.design;
  const int K = static_cast<int>(doc.requests.size());
  for (int k = 0; k < K; ++k) {
    if (doc.requests[k].id != k) {
      issues.push_back("request ids must be 0..K-1 in order");
      return issues;
    }
  }

  // Sub-networks.
  const int F = static_cast<int>(design.selected_fsns.size());
  for (int f = 0; f < F; ++f) {
    for (const std::string& v : VerifyFsnConfig(design.selected_fsns[f], net,
                                                doc.requests, doc.reach_km)) {
      issues.push_back("fsn " + std::to_string(f) + ": " + v);
    }
  }
  if (!LinkDisjoint(design.selected_fsns)) {
    issues.push_back("sub-networks share a directed link");
  }
  if (doc.max_fsn && F > *doc.max_fsn) {
    issues.push_back(std::to_string(F) + " sub-networks exceed the limit of " +
                     std::to_string(*doc.max_fsn));
  }

  // Service: exactly one serving sub-network per request.
  for (int k = 0; k < K; ++k) {
    int serving = -1, count = 0;
    for (int f = 0; f < F; ++f) {
      if (design.selected_fsns[f].Serves(k)) {
        serving = f;
        ++count;
      }
    }
    const std::string who = "request " + std::to_string(k);
    if (count != 1) {
      issues.push_back(who + " served by " + std::to_string(count) +
                       " sub-networks");
    } else if (design.serving_fsn[k] != serving) {
      issues.push_back(who + " assigned to fsn " +
                       std::to_string(design.serving_fsn[k]) +
                       " but served by fsn " + std::to_string(serving));
    }
  }

  // Coloring.
  std::set<int> used;
  for (int k = 0; k < K; ++k) {
    const int w = design.wavelength[k];
    if (w < 0 || w >= design.W) {
      issues.push_back("request " + std::to_string(k) + " has wavelength " +
                       std::to_string(w) + " outside [0, W)");
    } else {
      used.insert(w);
    }
  }
  if (static_cast<int>(used.size()) != design.W) {
    issues.push_back("W = " + std::to_string(design.W) + " but " +
                     std::to_string(used.size()) + " wavelengths are used");
  }
  for (const FsnConfig& fsn : design.selected_fsns) {
    for (auto [a, b] : fsn.conflicts.pairs()) {
      if (a < K && b < K && design.wavelength[a] == design.wavelength[b]) {
        issues.push_back("conflicting requests " + std::to_string(a) + " and " +
                         std::to_string(b) + " share wavelength " +
                         std::to_string(design.wavelength[a]));
      }
    }
  }

  // Bounds and reported figures.
  if (design.z_lp > design.W + kTolerance) {
    issues.push_back("LP bound exceeds W");
  }
  const double epsilon = Epsilon(design.W, design.z_lp);
  const bool epsilon_ok =
      std::isfinite(epsilon)
          ? std::abs(epsilon - design.epsilon) <= kTolerance
          : !std::isfinite(design.epsilon);
  if (!epsilon_ok) issues.push_back("epsilon inconsistent with W and z_lp");
  if (issues.empty()) {
    const LoadReport loads =
        LinkLoads(net, design.selected_fsns, design.wavelength);
    if (loads.filtered != design.loads.filtered ||
        loads.total != design.loads.total ||
        loads.max_filtered != design.loads.max_filtered ||
        loads.max_total != design.loads.max_total) {
      issues.push_back("reported link loads differ from the design");
    }
  }
  return issues;
}

void WriteDot(const DesignSolution& design, const Network& net,
              std::ostream& out) {
  std::vector<int> owner(net.num_links(), -1);
  for (size_t f = 0; f < design.selected_fsns.size(); ++f) {
    for (int l : design.selected_fsns[f].links) owner[l] = static_cast<int>(f);
  }
  out << "digraph filterless {\n  node [shape=circle];\n";
  for (int v = 0; v < net.num_nodes(); ++v) {
    out << "  \"" << net.node_name(v) << "\";\n";
  }
  for (int l = 0; l < net.num_links(); ++l) {
    const Link& link = net.link(l);
    out << "  \"" << net.node_name(link.from) << "\" -> \""
        << net.node_name(link.to) << "\" [";
    if (owner[l] < 0) {
      out << "style=dashed, color=gray";
    } else {
      const int filtered =
          l < static_cast<int>(design.loads.filtered.size())
              ? design.loads.filtered[l]
              : 0;
      const int total = l < static_cast<int>(design.loads.total.size())
                            ? design.loads.total[l]
                            : 0;
      out << "label=\"" << filtered << '/' << total << "\", color="
          << kPalette[owner[l] % std::size(kPalette)];
    }
    out << "];\n";
  }
  out << "}\n";
}

}  // namespace filterless
