#pragma once
// Shared domain model for the SDN energy optimizers: topology, flows,
// per-flow routings, on/off network state, constraint checkers and the
// power objective. Everything here is a plain value type and every
// operation is a pure function; instances can be evaluated concurrently.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sdnopt {

using SwitchId = int;
using FlowId = int;
using EdgeId = int;  // index into Topology::edges
using HostId = int;

// Relative tolerance for capacity and objective comparisons.
inline constexpr double kRelTol = 1e-9;

inline bool leq_tol(double a, double b) {
  return a <= b + kRelTol * std::max(1.0, std::abs(b));
}

// Tolerant objective comparisons: FP summation-order noise must never flip
// a lexicographic tie-break, otherwise solver output would not be stable
// under cost rescaling.
inline bool obj_less(double a, double b) {
  return a < b - kRelTol * std::max(1.0, std::abs(b));
}
inline bool obj_equal(double a, double b) {
  return !obj_less(a, b) && !obj_less(b, a);
}

// Fat-tree metadata attached by the generator; absent on plain graphs.
inline constexpr int kNoPod = -1;
inline constexpr int kNoLayer = -1;
inline constexpr int kLayerCore = 0;
inline constexpr int kLayerAggregation = 1;
inline constexpr int kLayerEdge = 2;

struct SwitchSpec {
  SwitchId id = 0;
  double power_cost = 0.0;  // CS_i, watts
  int rule_capacity = 1;    // G_i, max flow-table entries
  int pod = kNoPod;
  int layer = kNoLayer;
};

// Undirected link, stored with a < b. Bandwidth is a single budget shared
// by both traversal directions.
struct EdgeSpec {
  SwitchId a = 0;
  SwitchId b = 0;
  double bandwidth = 0.0;   // W_ij, bytes/second
  double power_cost = 0.0;  // C_ij, watts
};

struct Topology {
  std::vector<SwitchSpec> switches;
  std::vector<EdgeSpec> edges;
  std::map<HostId, SwitchId> ingress_hosts;  // H_in: host -> attached switch
  std::map<HostId, SwitchId> egress_hosts;   // H_eg

  bool has_fattree_metadata() const;
};

struct Flow {
  FlowId id = 0;
  SwitchId source = 0;       // sr
  SwitchId destination = 0;  // ds
  double rate = 0.0;         // lambda_f, bytes/second
};

// Per-flow ordered edge sequence; each sequence must walk a simple path
// from the flow's source to its destination.
struct FlowRouting {
  std::map<FlowId, std::vector<EdgeId>> assignment;
};

struct NetworkState {
  std::vector<std::uint8_t> switch_on;    // S_i
  std::vector<std::uint8_t> link_active;  // L_ij
  std::vector<std::uint8_t> link_used;    // K_ij, derived from the routing
};

enum class ObjectiveMode {
  PerFlowLink,    // literal objective: every flow pays for every link on its path
  PerActiveLink,  // each active link paid once
};

std::string to_string(ObjectiveMode mode);

// ---------------------------------------------------------------------------
// Reports. Violations are data, not failures: checkers list everything they
// find instead of failing fast.

struct Violation {
  int equation = 0;  // model equation number; 0 for structural problems
  std::string element;
  std::string detail;
};

struct ConstraintReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

struct ValidationIssue {
  std::string element;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// ---------------------------------------------------------------------------
// Operations.

ValidationReport validate_topology(const Topology& t);

// Flow endpoints must exist, ids must be unique, rates positive.
ValidationReport validate_flows(const Topology& t, const std::vector<Flow>& flows);

// Checks Eqs. (2)-(7) plus routing/state structural consistency.
ConstraintReport check_traffic_constraints(const Topology& t,
                                           const std::vector<Flow>& flows,
                                           const FlowRouting& routing,
                                           const NetworkState& state);

// Total power in watts. Throws std::invalid_argument if the (routing, state)
// pair fails check_traffic_constraints.
double evaluate_traffic_objective(const Topology& t, const std::vector<Flow>& flows,
                                  const FlowRouting& routing, const NetworkState& state,
                                  ObjectiveMode mode);

// Same sum without the constraint check; used internally by solvers on
// states they constructed themselves and for the all-on baseline.
double evaluate_traffic_objective_unchecked(const Topology& t,
                                            const std::vector<Flow>& flows,
                                            const FlowRouting& routing,
                                            const NetworkState& state,
                                            ObjectiveMode mode);

// Minimal consistent state for a routing: a switch is on iff a routed flow
// touches it, a link is active iff a flow uses it.
NetworkState derive_network_state(const Topology& t, const std::vector<Flow>& flows,
                                  const FlowRouting& routing);

// Expands an edge sequence into the visited switch sequence starting at
// `source`. Throws std::invalid_argument if the edges do not chain.
std::vector<SwitchId> path_switches(const Topology& t, SwitchId source,
                                    const std::vector<EdgeId>& edges);

std::string edge_name(const Topology& t, EdgeId e);

}  // namespace sdnopt
