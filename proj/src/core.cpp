#include "sdnopt/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sdnopt {

bool Topology::has_fattree_metadata() const {
  if (switches.empty()) return false;
  bool any_core = false;
  for (const auto& s : switches) {
    if (s.layer == kNoLayer) return false;
    if (s.layer == kLayerCore) any_core = true;
    if (s.layer != kLayerCore && s.pod == kNoPod) return false;
  }
  return any_core;
}

std::string to_string(ObjectiveMode mode) {
  return mode == ObjectiveMode::PerFlowLink ? "per-flow-link" : "per-active-link";
}

std::string ConstraintReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    if (v.equation > 0) os << "Eq." << v.equation << " ";
    os << v.element << ": " << v.detail << "\n";
  }
  return os.str();
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& i : issues) os << i.element << ": " << i.detail << "\n";
  return os.str();
}

std::string edge_name(const Topology& t, EdgeId e) {
  if (e < 0 || e >= static_cast<int>(t.edges.size())) {
    return "edge#" + std::to_string(e);
  }
  return "edge " + std::to_string(t.edges[e].a) + "-" + std::to_string(t.edges[e].b);
}

ValidationReport validate_topology(const Topology& t) {
  ValidationReport r;
  const int n = static_cast<int>(t.switches.size());
  for (int i = 0; i < n; ++i) {
    const auto& s = t.switches[i];
    if (s.id != i) {
      r.issues.push_back({"switch " + std::to_string(s.id),
                          "ids must be dense 0..|Z|-1 in order; found id " +
                              std::to_string(s.id) + " at position " + std::to_string(i)});
    }
    if (!std::isfinite(s.power_cost) || s.power_cost < 0.0) {
      r.issues.push_back({"switch " + std::to_string(s.id),
                          "power_cost must be finite and non-negative"});
    }
    if (s.rule_capacity < 1) {
      r.issues.push_back({"switch " + std::to_string(s.id), "rule_capacity must be >= 1"});
    }
  }
  std::set<std::pair<SwitchId, SwitchId>> seen;
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    const auto& e = t.edges[k];
    const std::string name = "edge " + std::to_string(e.a) + "-" + std::to_string(e.b);
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n) {
      const SwitchId bad = (e.a < 0 || e.a >= n) ? e.a : e.b;
      r.issues.push_back({name, "endpoint references unknown switch " + std::to_string(bad)});
      continue;
    }
    if (e.a == e.b) {
      r.issues.push_back({name, "self-loops are not allowed"});
      continue;
    }
    auto key = std::minmax(e.a, e.b);
    if (!seen.insert(key).second) {
      r.issues.push_back({name, "duplicate edge for this switch pair"});
    }
    if (!(e.bandwidth > 0.0) || !std::isfinite(e.bandwidth)) {
      r.issues.push_back({name, "bandwidth must be finite and > 0"});
    }
    if (!std::isfinite(e.power_cost) || e.power_cost < 0.0) {
      r.issues.push_back({name, "power_cost must be finite and non-negative"});
    }
  }
  for (const auto& [host, sw] : t.ingress_hosts) {
    if (sw < 0 || sw >= n) {
      r.issues.push_back({"ingress host " + std::to_string(host),
                          "attached to unknown switch " + std::to_string(sw)});
    }
  }
  for (const auto& [host, sw] : t.egress_hosts) {
    if (sw < 0 || sw >= n) {
      r.issues.push_back({"egress host " + std::to_string(host),
                          "attached to unknown switch " + std::to_string(sw)});
    }
  }
  return r;
}

ValidationReport validate_flows(const Topology& t, const std::vector<Flow>& flows) {
  ValidationReport r;
  const int n = static_cast<int>(t.switches.size());
  std::set<FlowId> ids;
  for (const auto& f : flows) {
    const std::string name = "flow " + std::to_string(f.id);
    if (!ids.insert(f.id).second) r.issues.push_back({name, "duplicate flow id"});
    if (f.source < 0 || f.source >= n || f.destination < 0 || f.destination >= n) {
      r.issues.push_back({name, "endpoint references a switch that does not exist"});
    }
    if (f.source == f.destination) {
      r.issues.push_back({name, "source and destination must differ"});
    }
    if (!(f.rate > 0.0) || !std::isfinite(f.rate)) {
      r.issues.push_back({name, "rate must be finite and > 0"});
    }
  }
  return r;
}

std::vector<SwitchId> path_switches(const Topology& t, SwitchId source,
                                    const std::vector<EdgeId>& edges) {
  std::vector<SwitchId> seq{source};
  SwitchId cur = source;
  for (EdgeId e : edges) {
    if (e < 0 || e >= static_cast<int>(t.edges.size())) {
      throw std::invalid_argument("path references unknown edge index " + std::to_string(e));
    }
    const auto& spec = t.edges[e];
    if (spec.a == cur) {
      cur = spec.b;
    } else if (spec.b == cur) {
      cur = spec.a;
    } else {
      throw std::invalid_argument(edge_name(t, e) + " does not continue the walk at switch " +
                                  std::to_string(cur));
    }
    seq.push_back(cur);
  }
  return seq;
}

namespace {

// Per-flow walk info, or a list of violations if the sequence is not a
// simple source->destination path.
struct WalkCheck {
  std::vector<SwitchId> switches;
  bool path_ok = false;
};

WalkCheck check_walk(const Topology& t, const Flow& f, const std::vector<EdgeId>& edges,
                     ConstraintReport* report) {
  WalkCheck w;
  const std::string name = "flow " + std::to_string(f.id);
  SwitchId cur = f.source;
  w.switches.push_back(cur);
  std::set<SwitchId> visited{cur};
  for (EdgeId e : edges) {
    if (e < 0 || e >= static_cast<int>(t.edges.size())) {
      report->violations.push_back({0, name, "references unknown edge index " + std::to_string(e)});
      return w;
    }
    const auto& spec = t.edges[e];
    SwitchId next;
    if (spec.a == cur) {
      next = spec.b;
    } else if (spec.b == cur) {
      next = spec.a;
    } else {
      report->violations.push_back(
          {3, name, edge_name(t, e) + " breaks flow conservation at switch " + std::to_string(cur)});
      return w;
    }
    if (!visited.insert(next).second) {
      report->violations.push_back(
          {3, name, "revisits switch " + std::to_string(next) + "; path must be simple"});
      return w;
    }
    cur = next;
    w.switches.push_back(cur);
  }
  if (cur != f.destination) {
    report->violations.push_back(
        {4, name, "path ends at switch " + std::to_string(cur) + " instead of destination " +
                      std::to_string(f.destination)});
    return w;
  }
  if (edges.empty()) {
    report->violations.push_back({4, name, "empty path cannot reach the destination"});
    return w;
  }
  w.path_ok = true;
  return w;
}

}  // namespace

ConstraintReport check_traffic_constraints(const Topology& t, const std::vector<Flow>& flows,
                                           const FlowRouting& routing,
                                           const NetworkState& state) {
  ConstraintReport r;
  const int nswitch = static_cast<int>(t.switches.size());
  const int nedge = static_cast<int>(t.edges.size());
  if (static_cast<int>(state.switch_on.size()) != nswitch ||
      static_cast<int>(state.link_active.size()) != nedge ||
      static_cast<int>(state.link_used.size()) != nedge) {
    r.violations.push_back({0, "state", "state vector sizes do not match the topology"});
    return r;
  }

  std::vector<double> load(nedge, 0.0);
  std::vector<std::uint8_t> used(nedge, 0);
  std::vector<std::uint8_t> touched(nswitch, 0);

  for (const auto& f : flows) {
    const std::string name = "flow " + std::to_string(f.id);
    auto it = routing.assignment.find(f.id);
    if (it == routing.assignment.end()) {
      r.violations.push_back({4, name, "no route assigned; flow cannot reach its destination"});
      continue;
    }
    WalkCheck w = check_walk(t, f, it->second, &r);
    if (!w.path_ok) continue;
    for (EdgeId e : it->second) {
      load[e] += f.rate;
      used[e] = 1;
    }
    for (std::size_t i = 0; i + 1 < w.switches.size(); ++i) {
      SwitchId from = w.switches[i];
      SwitchId to = w.switches[i + 1];
      touched[from] = 1;
      touched[to] = 1;
      // Eqs. (5)/(6): no flow may use a link attached to an inactive switch.
      if (!state.switch_on[to]) {
        r.violations.push_back(
            {5, "switch " + std::to_string(to), name + " enters a switch that is off"});
      }
      if (!state.switch_on[from]) {
        r.violations.push_back(
            {6, "switch " + std::to_string(from), name + " leaves a switch that is off"});
      }
    }
  }
  for (const auto& [fid, edges] : routing.assignment) {
    (void)edges;
    bool known = false;
    for (const auto& f : flows) known = known || f.id == fid;
    if (!known) {
      r.violations.push_back({0, "flow " + std::to_string(fid), "route for unknown flow id"});
    }
  }

  for (EdgeId e = 0; e < nedge; ++e) {
    if (!leq_tol(load[e], t.edges[e].bandwidth)) {
      r.violations.push_back({2, edge_name(t, e),
                              "total flow rate " + std::to_string(load[e]) +
                                  " exceeds bandwidth " + std::to_string(t.edges[e].bandwidth)});
    }
    if (used[e] && !state.link_active[e]) {
      r.violations.push_back({20, edge_name(t, e), "used by a flow but marked inactive"});
    }
    if (state.link_used[e] != used[e]) {
      r.violations.push_back({20, edge_name(t, e), "link_used flag does not match the routing"});
    }
  }
  for (SwitchId i = 0; i < nswitch; ++i) {
    if (state.switch_on[i] && !touched[i]) {
      r.violations.push_back(
          {7, "switch " + std::to_string(i), "active but no flow passes through it"});
    }
  }
  return r;
}

double evaluate_traffic_objective_unchecked(const Topology& t, const std::vector<Flow>& flows,
                                            const FlowRouting& routing,
                                            const NetworkState& state, ObjectiveMode mode) {
  double total = 0.0;
  if (mode == ObjectiveMode::PerFlowLink) {
    // Sum in flow order for a canonical, reproducible value.
    for (const auto& f : flows) {
      auto it = routing.assignment.find(f.id);
      if (it == routing.assignment.end()) continue;
      for (EdgeId e : it->second) total += t.edges[e].power_cost;
    }
  } else {
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
      if (state.link_active[e]) total += t.edges[e].power_cost;
    }
  }
  for (const auto& s : t.switches) {
    if (state.switch_on[s.id]) total += s.power_cost;
  }
  return total;
}

double evaluate_traffic_objective(const Topology& t, const std::vector<Flow>& flows,
                                  const FlowRouting& routing, const NetworkState& state,
                                  ObjectiveMode mode) {
  ConstraintReport report = check_traffic_constraints(t, flows, routing, state);
  if (!report.ok()) {
    throw std::invalid_argument("routing fails constraint check: " + report.to_string());
  }
  return evaluate_traffic_objective_unchecked(t, flows, routing, state, mode);
}

NetworkState derive_network_state(const Topology& t, const std::vector<Flow>& flows,
                                  const FlowRouting& routing) {
  NetworkState st;
  st.switch_on.assign(t.switches.size(), 0);
  st.link_active.assign(t.edges.size(), 0);
  st.link_used.assign(t.edges.size(), 0);
  for (const auto& f : flows) {
    auto it = routing.assignment.find(f.id);
    if (it == routing.assignment.end()) continue;
    SwitchId cur = f.source;
    st.switch_on[cur] = 1;
    for (EdgeId e : it->second) {
      st.link_used[e] = 1;
      st.link_active[e] = 1;
      const auto& spec = t.edges[e];
      cur = (spec.a == cur) ? spec.b : spec.a;
      st.switch_on[cur] = 1;
    }
  }
  return st;
}

}  // namespace sdnopt
