#include "sdnopt/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sdnopt/paths.hpp"

namespace sdnopt {

namespace {

constexpr int kHeuristicKPaths = 16;  // candidate paths per flow

void require_traffic_instance(const Topology& t, const std::vector<Flow>& flows) {
  ValidationReport tv = validate_topology(t);
  if (!tv.ok()) throw std::invalid_argument("invalid topology: " + tv.to_string());
  ValidationReport fv = validate_flows(t, flows);
  if (!fv.ok()) throw std::invalid_argument("invalid flows: " + fv.to_string());
}

// Shared incremental routing state for all greedy heuristics.
struct GreedyRouter {
  const Topology& t;
  const TopologyIndex& idx;
  ObjectiveMode mode;
  std::vector<std::uint8_t> on;
  std::vector<std::uint8_t> active;
  std::vector<double> load;
  FlowRouting routing;

  GreedyRouter(const Topology& topo, const TopologyIndex& index, ObjectiveMode m)
      : t(topo), idx(index), mode(m), on(topo.switches.size(), 0),
        active(topo.edges.size(), 0), load(topo.edges.size(), 0.0) {}

  bool capacity_ok(const std::vector<EdgeId>& edges, double rate) const {
    for (EdgeId e : edges) {
      if (!leq_tol(load[e] + rate, t.edges[e].bandwidth)) return false;
    }
    return true;
  }

  double marginal_cost(const Path& path, const std::vector<EdgeId>& edges) const {
    double cost = 0.0;
    for (EdgeId e : edges) {
      if (mode == ObjectiveMode::PerFlowLink || !active[e]) cost += t.edges[e].power_cost;
    }
    for (SwitchId sw : path) {
      if (!on[sw]) cost += t.switches[sw].power_cost;
    }
    return cost;
  }

  void apply(const Flow& f, const Path& path, const std::vector<EdgeId>& edges) {
    for (EdgeId e : edges) {
      active[e] = 1;
      load[e] += f.rate;
    }
    for (SwitchId sw : path) on[sw] = 1;
    routing.assignment[f.id] = edges;
  }

  // Leftmost-first marginal-cost choice among the flow's candidate paths.
  // Returns false and fills the certificate when no candidate fits.
  bool route(const Flow& f, Infeasible* cert) {
    PathEnumeration en = k_shortest_paths(idx, f.source, f.destination, kHeuristicKPaths);
    std::sort(en.paths.begin(), en.paths.end());
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<std::vector<EdgeId>> edges(en.paths.size());
    for (std::size_t ci = 0; ci < en.paths.size(); ++ci) {
      edges[ci] = path_edges(idx, en.paths[ci]);
      if (!capacity_ok(edges[ci], f.rate)) continue;
      const double cost = marginal_cost(en.paths[ci], edges[ci]);
      if (best < 0 || obj_less(cost, best_cost)) {
        best = static_cast<int>(ci);
        best_cost = cost;
      }
    }
    if (best < 0) {
      cert->blocked_flows = {f.id};
      for (EdgeId e = 0; e < static_cast<EdgeId>(t.edges.size()); ++e) {
        if (!leq_tol(load[e] + f.rate, t.edges[e].bandwidth)) {
          cert->saturated_edges.push_back(e);
        }
      }
      cert->detail = "flow " + std::to_string(f.id) + " has no residual-capacity path";
      return false;
    }
    apply(f, en.paths[best], edges[best]);
    return true;
  }
};

TrafficSolution finish(const Topology& t, const std::vector<Flow>& flows,
                       FlowRouting routing, ObjectiveMode mode, const std::string& method) {
  TrafficSolution sol;
  sol.routing = std::move(routing);
  sol.state = derive_network_state(t, flows, sol.routing);
  sol.objective = evaluate_traffic_objective_unchecked(t, flows, sol.routing, sol.state, mode);
  sol.optimality = Optimality::Heuristic;
  sol.method = method;
  return sol;
}

TrafficResult greedy_in_order(const Topology& t, const std::vector<Flow>& flows,
                              ObjectiveMode mode, const std::vector<int>& order,
                              const std::string& method) {
  require_traffic_instance(t, flows);
  TopologyIndex idx(t);
  GreedyRouter router(t, idx, mode);
  for (int fi : order) {
    Infeasible cert;
    if (!router.route(flows[fi], &cert)) return cert;
  }
  return finish(t, flows, std::move(router.routing), mode, method);
}

}  // namespace

std::string to_string(FlowOrder order) {
  switch (order) {
    case FlowOrder::ShortestFirst: return "shortest-first";
    case FlowOrder::LongestFirst: return "longest-first";
    case FlowOrder::SmallestDemandFirst: return "smallest-demand-first";
    case FlowOrder::HighestDemandFirst: return "highest-demand-first";
  }
  return "?";
}

TrafficResult heuristic_greedy_binpack(const Topology& t, const std::vector<Flow>& flows,
                                       ObjectiveMode mode) {
  std::vector<int> order(flows.size());
  std::iota(order.begin(), order.end(), 0);  // input order
  return greedy_in_order(t, flows, mode, order, "greedy-binpack");
}

std::vector<FlowId> path_first_order(const Topology& t, const std::vector<Flow>& flows,
                                     FlowOrder order) {
  TopologyIndex idx(t);
  std::vector<double> key(flows.size(), 0.0);
  for (std::size_t i = 0; i < flows.size(); ++i) {
    switch (order) {
      case FlowOrder::ShortestFirst:
      case FlowOrder::LongestFirst:
        key[i] = hop_distance(idx, flows[i].source, flows[i].destination);
        if (key[i] < 0) key[i] = std::numeric_limits<double>::infinity();
        break;
      case FlowOrder::SmallestDemandFirst:
      case FlowOrder::HighestDemandFirst:
        key[i] = flows[i].rate;
        break;
    }
  }
  const bool descending =
      order == FlowOrder::LongestFirst || order == FlowOrder::HighestDemandFirst;
  std::vector<int> perm(flows.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    if (key[a] != key[b]) return descending ? key[a] > key[b] : key[a] < key[b];
    return flows[a].id < flows[b].id;
  });
  std::vector<FlowId> ids;
  ids.reserve(perm.size());
  for (int i : perm) ids.push_back(flows[i].id);
  return ids;
}

TrafficResult heuristic_path_first(const Topology& t, const std::vector<Flow>& flows,
                                   ObjectiveMode mode, FlowOrder order) {
  require_traffic_instance(t, flows);
  std::vector<FlowId> ids = path_first_order(t, flows, order);
  std::vector<int> positions;
  positions.reserve(ids.size());
  for (FlowId id : ids) {
    for (std::size_t i = 0; i < flows.size(); ++i) {
      if (flows[i].id == id) positions.push_back(static_cast<int>(i));
    }
  }
  return greedy_in_order(t, flows, mode, positions, "path-" + to_string(order));
}

TrafficResult heuristic_fattree_topology_aware(const Topology& t,
                                               const std::vector<Flow>& flows,
                                               ObjectiveMode mode) {
  require_traffic_instance(t, flows);
  if (!t.has_fattree_metadata()) {
    throw std::invalid_argument("topology-aware heuristic requires fat-tree metadata");
  }
  TopologyIndex idx(t);

  double min_bandwidth = std::numeric_limits<double>::infinity();
  for (const auto& e : t.edges) min_bandwidth = std::min(min_bandwidth, e.bandwidth);

  int max_pod = -1;
  for (const auto& s : t.switches) max_pod = std::max(max_pod, s.pod);
  const int pods = max_pod + 1;

  std::vector<SwitchId> cores;
  std::vector<std::vector<SwitchId>> aggs(pods);
  for (const auto& s : t.switches) {
    if (s.layer == kLayerCore) cores.push_back(s.id);
    if (s.layer == kLayerAggregation) aggs[s.pod].push_back(s.id);
  }
  std::sort(cores.begin(), cores.end());
  for (auto& a : aggs) std::sort(a.begin(), a.end());

  auto pod_of = [&](SwitchId sw) { return t.switches[sw].pod; };

  // Layer demand: intra-pod flows between distinct edge switches load the
  // pod's aggregation layer once; cross-pod flows load both pods and the
  // core layer.
  std::vector<double> agg_demand(pods, 0.0);
  double core_demand = 0.0;
  bool any_cross = false;
  std::vector<std::uint8_t> pod_has_traffic(pods, 0);
  for (const Flow& f : flows) {
    const int ps = pod_of(f.source);
    const int pd = pod_of(f.destination);
    if (ps >= 0 && ps == pd) {
      agg_demand[ps] += f.rate;
      pod_has_traffic[ps] = 1;
    } else {
      core_demand += f.rate;
      any_cross = true;
      if (ps >= 0) {
        agg_demand[ps] += f.rate;
        pod_has_traffic[ps] = 1;
      }
      if (pd >= 0) {
        agg_demand[pd] += f.rate;
        pod_has_traffic[pd] = 1;
      }
    }
  }

  auto layer_count = [&](double demand, bool needed, std::size_t available) {
    if (!needed) return static_cast<std::size_t>(0);
    const double units = std::ceil(demand / min_bandwidth - kRelTol);
    std::size_t n = static_cast<std::size_t>(std::max(1.0, units));
    return std::min(n, available);
  };

  std::vector<std::size_t> aggs_active(pods, 0);
  for (int p = 0; p < pods; ++p) {
    aggs_active[p] = layer_count(agg_demand[p], pod_has_traffic[p], aggs[p].size());
  }
  std::size_t cores_active = layer_count(core_demand, any_cross, cores.size());

  GreedyRouter router(t, idx, mode);
  std::vector<std::uint8_t> banned_nodes(t.switches.size(), 0);
  std::vector<std::uint8_t> banned_edges(t.edges.size(), 0);
  auto rebuild_bans = [&]() {
    std::fill(banned_nodes.begin(), banned_nodes.end(), 0);
    for (std::size_t i = cores_active; i < cores.size(); ++i) banned_nodes[cores[i]] = 1;
    for (int p = 0; p < pods; ++p) {
      for (std::size_t i = aggs_active[p]; i < aggs[p].size(); ++i) banned_nodes[aggs[p][i]] = 1;
    }
  };
  rebuild_bans();

  for (const Flow& f : flows) {
    for (;;) {
      for (std::size_t e = 0; e < t.edges.size(); ++e) {
        banned_edges[e] = !leq_tol(router.load[e] + f.rate, t.edges[e].bandwidth);
      }
      Path p = lex_shortest_path(idx, f.source, f.destination, banned_nodes, banned_edges);
      if (!p.empty()) {
        router.apply(f, p, path_edges(idx, p));
        break;
      }
      // Widen the active subset: one more aggregation switch in the flow's
      // pods, one more core for cross-pod flows.
      bool widened = false;
      const int ps = pod_of(f.source);
      const int pd = pod_of(f.destination);
      for (int pod : {ps, pd}) {
        if (pod >= 0 && aggs_active[pod] < aggs[pod].size()) {
          aggs_active[pod] += 1;
          widened = true;
        }
      }
      if (ps != pd && cores_active < cores.size()) {
        cores_active += 1;
        widened = true;
      }
      if (!widened) {
        Infeasible cert;
        cert.blocked_flows = {f.id};
        for (EdgeId e = 0; e < static_cast<EdgeId>(t.edges.size()); ++e) {
          if (banned_edges[e]) cert.saturated_edges.push_back(e);
        }
        cert.detail = "flow " + std::to_string(f.id) +
                      " has no admissible path even with the full topology active";
        return cert;
      }
      rebuild_bans();
    }
  }
  return finish(t, flows, std::move(router.routing), mode, "topology-aware");
}

FlowRouting shortest_path_routing(const Topology& t, const std::vector<Flow>& flows) {
  TopologyIndex idx(t);
  FlowRouting routing;
  for (const Flow& f : flows) {
    Path p = lex_shortest_path(idx, f.source, f.destination);
    if (p.empty()) {
      throw std::invalid_argument("flow " + std::to_string(f.id) +
                                  " is disconnected; no baseline route");
    }
    routing.assignment[f.id] = path_edges(idx, p);
  }
  return routing;
}

bool routing_lex_less(const Topology& t, const std::vector<Flow>& flows,
                      const FlowRouting& a, const FlowRouting& b) {
  std::vector<const Flow*> sorted;
  for (const Flow& f : flows) sorted.push_back(&f);
  std::sort(sorted.begin(), sorted.end(),
            [](const Flow* x, const Flow* y) { return x->id < y->id; });
  for (const Flow* f : sorted) {
    auto ia = a.assignment.find(f->id);
    auto ib = b.assignment.find(f->id);
    const bool has_a = ia != a.assignment.end();
    const bool has_b = ib != b.assignment.end();
    if (!has_a || !has_b) {
      if (has_a != has_b) return !has_a;  // missing route sorts first
      continue;
    }
    std::vector<SwitchId> pa = path_switches(t, f->source, ia->second);
    std::vector<SwitchId> pb = path_switches(t, f->source, ib->second);
    if (pa != pb) return pa < pb;
  }
  return false;
}

SavingsReport savings_report(const Topology& t, const std::vector<Flow>& flows,
                             const TrafficSolution& solution, ObjectiveMode mode) {
  SavingsReport r;
  // Baseline: every switch powered, flows on hop-shortest paths, links
  // active iff used. A reference number, deliberately unchecked against
  // capacities.
  FlowRouting base_routing = shortest_path_routing(t, flows);
  NetworkState base_state = derive_network_state(t, flows, base_routing);
  std::fill(base_state.switch_on.begin(), base_state.switch_on.end(), 1);
  r.baseline_watts =
      evaluate_traffic_objective_unchecked(t, flows, base_routing, base_state, mode);
  r.optimized_watts = solution.objective;
  r.savings_fraction =
      r.baseline_watts > 0.0 ? 1.0 - r.optimized_watts / r.baseline_watts : 0.0;

  const bool fat = t.has_fattree_metadata();
  auto layer_key = [&](int layer) {
    if (!fat) return std::string("switches");
    switch (layer) {
      case kLayerCore: return std::string("switches:core");
      case kLayerAggregation: return std::string("switches:aggregation");
      case kLayerEdge: return std::string("switches:edge");
    }
    return std::string("switches:other");
  };
  for (const auto& s : t.switches) {
    const std::string key = layer_key(s.layer);
    r.per_layer_watts.try_emplace(key, 0.0);
    if (solution.state.switch_on[s.id]) r.per_layer_watts[key] += s.power_cost;
  }
  double links = 0.0;
  if (mode == ObjectiveMode::PerFlowLink) {
    for (const auto& f : flows) {
      auto it = solution.routing.assignment.find(f.id);
      if (it == solution.routing.assignment.end()) continue;
      for (EdgeId e : it->second) links += t.edges[e].power_cost;
    }
  } else {
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
      if (solution.state.link_active[e]) links += t.edges[e].power_cost;
    }
  }
  r.per_layer_watts["links"] = links;
  return r;
}

}  // namespace sdnopt
