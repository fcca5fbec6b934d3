#pragma once
// Traffic-aware model: pick a simple path per flow and the minimal on/off
// state so total switch+link power is minimized. Exact branch-and-bound over
// k shortest loop-free candidate paths per flow, plus the survey's heuristic
// family (greedy bin-packing, ordered greedy, fat-tree topology-aware).

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sdnopt/core.hpp"
#include "sdnopt/parallel.hpp"

namespace sdnopt {

enum class Optimality { Exact, Heuristic };

struct TrafficSolution {
  FlowRouting routing;
  NetworkState state;   // always the minimal closure of the routing
  double objective = 0.0;
  Optimality optimality = Optimality::Exact;
  std::string method;   // "exact", "incumbent", "greedy-binpack", ...
};

// Certificate naming the first flow with no residual-capacity path and the
// edges that were saturated when its candidates were rejected.
struct Infeasible {
  std::vector<FlowId> blocked_flows;
  std::vector<EdgeId> saturated_edges;
  std::string detail;
};

// Budget ran out before any feasible assignment was completed.
struct BudgetExhausted {
  std::uint64_t nodes_explored = 0;
};

using TrafficResult = std::variant<TrafficSolution, Infeasible, BudgetExhausted>;

struct SolverBudget {
  std::uint64_t max_nodes = 1'000'000;
  int k_paths = 16;
};

// Exact result means no feasible (routing, state) has a strictly lower
// objective: either the candidate enumeration provably covered all simple
// paths and the search completed, or the incumbent met the admissible root
// lower bound. Otherwise the best incumbent is returned tagged
// Heuristic/"incumbent". The node budget is pre-split across root subtrees,
// so results (including budget exhaustion) are schedule-independent.
TrafficResult solve_exact_traffic(const Topology& t, const std::vector<Flow>& flows,
                                  ObjectiveMode mode, const SolverBudget& budget = {},
                                  ExecPolicy policy = ExecPolicy::Parallel);

// ElasticTree-style greedy: flows in input order, candidate paths in
// leftmost (lexicographic) order, first capacity-feasible path with the
// smallest marginal objective increase wins.
TrafficResult heuristic_greedy_binpack(const Topology& t, const std::vector<Flow>& flows,
                                       ObjectiveMode mode);

enum class FlowOrder { ShortestFirst, LongestFirst, SmallestDemandFirst, HighestDemandFirst };

std::string to_string(FlowOrder order);

// Processing order used by heuristic_path_first (exposed for tests):
// shortest/longest = hop count of the flow's shortest path in the full
// topology, smallest/highest = flow rate; ties by ascending flow id.
std::vector<FlowId> path_first_order(const Topology& t, const std::vector<Flow>& flows,
                                     FlowOrder order);

// Markiewicz-style ordered greedy: sort flows by the chosen key, then route
// with the same marginal-cost rule as heuristic_greedy_binpack.
TrafficResult heuristic_path_first(const Topology& t, const std::vector<Flow>& flows,
                                   ObjectiveMode mode, FlowOrder order);

// Fat-tree topology-aware heuristic: sizes the aggregation/core layers from
// per-pod and cross-pod demand (ceil of demand over per-link bandwidth),
// then routes leftmost-first inside the active subset, widening the subset
// if a flow cannot be placed. Throws std::invalid_argument when the
// topology carries no fat-tree metadata.
TrafficResult heuristic_fattree_topology_aware(const Topology& t,
                                               const std::vector<Flow>& flows,
                                               ObjectiveMode mode);

struct SavingsReport {
  double baseline_watts = 0.0;   // all switches on, hop-shortest routing
  double optimized_watts = 0.0;
  double savings_fraction = 0.0; // 1 - optimized/baseline (0 when baseline 0)
  // "switches:<layer>" per fat-tree layer (or "switches"), plus "links".
  std::map<std::string, double> per_layer_watts;
};

SavingsReport savings_report(const Topology& t, const std::vector<Flow>& flows,
                             const TrafficSolution& solution, ObjectiveMode mode);

// Lex-least hop-shortest routing used as the savings baseline; ignores
// capacities (reference number, not a feasible solution).
FlowRouting shortest_path_routing(const Topology& t, const std::vector<Flow>& flows);

// Ascending-flow-id routing comparison used for every lexicographic
// tie-break between equal-objective solutions.
bool routing_lex_less(const Topology& t, const std::vector<Flow>& flows,
                      const FlowRouting& a, const FlowRouting& b);

}  // namespace sdnopt
