#pragma once
// End-system-aware model: minimize active physical machines, then the
// traffic-weighted switch-hop cost between the PMs hosting communicating
// VMs. Exact solver is a complete branch-and-bound for desk-scale
// instances; FFD/BFD are the survey's bin-packing heuristics.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdnopt/core.hpp"
#include "sdnopt/parallel.hpp"

namespace sdnopt {

struct PlacementInstance {
  std::vector<std::string> resource_names;         // R
  std::vector<std::vector<double>> pm_resources;   // |P| x |R|, P_i^r
  std::vector<std::vector<double>> vm_demands;     // |V| x |R|, V_j^r
  std::vector<std::vector<double>> vm_traffic;     // |V| x |V|, q_uv, zero diagonal
  std::vector<std::vector<double>> pm_hops;        // |P| x |P|, b_ij, symmetric zero diagonal

  int pm_count() const { return static_cast<int>(pm_resources.size()); }
  int vm_count() const { return static_cast<int>(vm_demands.size()); }
  int resource_count() const { return static_cast<int>(resource_names.size()); }
};

struct Placement {
  std::vector<std::vector<std::uint8_t>> assignment;  // |P| x |V|, X_ij
  std::vector<std::uint8_t> pm_on;                    // PM_i

  static Placement from_vm_to_pm(const std::vector<int>& vm_to_pm, int pm_count);
  // PM hosting the VM when the column sums to exactly 1.
  std::optional<int> pm_of(int vm) const;
};

struct PlacementScore {
  int active_pms = 0;       // Eq. (8)
  double network_cost = 0;  // Eq. (12)
};

ValidationReport validate_placement_instance(const PlacementInstance& inst);

// Eq. (9) capacity, Eq. (10) exactly-once, Eq. (11) tight on/off closure.
ConstraintReport check_placement(const PlacementInstance& inst, const Placement& p);

// Throws std::invalid_argument if check_placement fails.
PlacementScore score_placement(const PlacementInstance& inst, const Placement& p);

struct PlacementObjective {
  enum class Kind { PMsOnly, Lexicographic, Weighted };
  Kind kind = Kind::Lexicographic;
  double alpha = 1.0;  // Weighted: alpha * active_pms + beta * network_cost
  double beta = 1.0;

  static PlacementObjective pms_only() { return {Kind::PMsOnly, 1, 0}; }
  static PlacementObjective lexicographic() { return {Kind::Lexicographic, 1, 1}; }
  static PlacementObjective weighted(double a, double b) { return {Kind::Weighted, a, b}; }
};

struct PlacementInfeasible {
  std::vector<int> unplaceable_vms;
  std::string detail;
};

using PlacementResult = std::variant<Placement, PlacementInfeasible>;

// Complete search; the returned placement is provably optimal for the chosen
// objective. Deterministic regardless of policy.
PlacementResult solve_exact_placement(const PlacementInstance& inst,
                                      const PlacementObjective& objective,
                                      ExecPolicy policy = ExecPolicy::Parallel);

PlacementResult heuristic_ffd(const PlacementInstance& inst);
PlacementResult heuristic_bfd(const PlacementInstance& inst);

// b_ij from a topology: number of switches on the lex-shortest path between
// the PMs' attachment switches, endpoints included (1 when co-attached,
// 0 on the diagonal).
std::vector<std::vector<double>> pm_hops_from_topology(const Topology& t,
                                                       const std::vector<SwitchId>& pm_attach);

}  // namespace sdnopt
