#pragma once
// Rule-placement model: route each flow so the total number of installed
// forwarding rules (one per flow per on-path switch) is minimal under
// per-switch table capacity and link bandwidth. Shares the traffic module's
// result vocabulary (Infeasible / BudgetExhausted / SolverBudget).

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sdnopt/core.hpp"
#include "sdnopt/parallel.hpp"
#include "sdnopt/traffic.hpp"

namespace sdnopt {

struct RuleAllocation {
  // rules[switch][flow column]; columns follow the order of the flow vector
  // the allocation was built against.
  std::vector<std::vector<std::uint8_t>> rules;
  FlowRouting routing;
  std::vector<std::uint8_t> link_state;  // L_ij, tight closure of the routing
};

struct RuleSolution {
  RuleAllocation allocation;
  int total_rules = 0;  // equals the sum of per-flow path switch counts
  Optimality optimality = Optimality::Exact;
  std::string method;
};

using RuleResult = std::variant<RuleSolution, Infeasible, BudgetExhausted>;

// Eqs. (16)-(21): bandwidth, table capacity, path/rule coupling, link state
// closure in both directions, and ingress/egress conservation.
ConstraintReport check_rule_constraints(const Topology& t, const std::vector<Flow>& flows,
                                        const RuleAllocation& alloc);

// Implicit enumeration over per-flow candidate paths. Lower bound: rules
// already installed plus each unrouted flow's hop-shortest switch count.
// Requires every flow source to carry an ingress host and every destination
// an egress host (throws std::invalid_argument otherwise).
RuleResult solve_exact_rules(const Topology& t, const std::vector<Flow>& flows,
                             const SolverBudget& budget = {},
                             ExecPolicy policy = ExecPolicy::Parallel);

// MINNIE-style routing phase: flows by ascending id, each on its
// fewest-switch path among switches with residual table space and links
// with residual bandwidth; residuals updated after each flow.
RuleResult heuristic_shortest_admissible(const Topology& t, const std::vector<Flow>& flows);

}  // namespace sdnopt
