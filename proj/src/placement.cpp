#include "sdnopt/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sdnopt/paths.hpp"

namespace sdnopt {

Placement Placement::from_vm_to_pm(const std::vector<int>& vm_to_pm, int pm_count) {
  Placement p;
  p.assignment.assign(pm_count, std::vector<std::uint8_t>(vm_to_pm.size(), 0));
  p.pm_on.assign(pm_count, 0);
  for (std::size_t v = 0; v < vm_to_pm.size(); ++v) {
    const int pm = vm_to_pm[v];
    if (pm < 0 || pm >= pm_count) {
      throw std::invalid_argument("vm_to_pm entry out of range");
    }
    p.assignment[pm][v] = 1;
    p.pm_on[pm] = 1;
  }
  return p;
}

std::optional<int> Placement::pm_of(int vm) const {
  std::optional<int> host;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i][vm]) {
      if (host) return std::nullopt;
      host = static_cast<int>(i);
    }
  }
  return host;
}

ValidationReport validate_placement_instance(const PlacementInstance& inst) {
  ValidationReport r;
  const int np = inst.pm_count();
  const int nv = inst.vm_count();
  const int nr = inst.resource_count();
  auto check_matrix = [&](const std::vector<std::vector<double>>& m, int rows, int cols,
                          const std::string& name) {
    if (static_cast<int>(m.size()) != rows) {
      r.issues.push_back({name, "expected " + std::to_string(rows) + " rows"});
      return false;
    }
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != cols) {
        r.issues.push_back({name, "expected " + std::to_string(cols) + " columns"});
        return false;
      }
      for (double x : row) {
        if (!std::isfinite(x) || x < 0.0) {
          r.issues.push_back({name, "entries must be finite and >= 0"});
          return false;
        }
      }
    }
    return true;
  };
  check_matrix(inst.pm_resources, np, nr, "pm_resources");
  check_matrix(inst.vm_demands, nv, nr, "vm_demands");
  if (check_matrix(inst.vm_traffic, nv, nv, "vm_traffic")) {
    for (int v = 0; v < nv; ++v) {
      if (inst.vm_traffic[v][v] != 0.0) {
        r.issues.push_back({"vm_traffic", "diagonal must be zero"});
        break;
      }
    }
  }
  if (check_matrix(inst.pm_hops, np, np, "pm_hops")) {
    for (int p = 0; p < np; ++p) {
      if (inst.pm_hops[p][p] != 0.0) {
        r.issues.push_back({"pm_hops", "diagonal must be zero"});
        break;
      }
      for (int q = 0; q < np; ++q) {
        if (inst.pm_hops[p][q] != inst.pm_hops[q][p]) {
          r.issues.push_back({"pm_hops", "matrix must be symmetric"});
          p = np;
          break;
        }
      }
    }
  }
  return r;
}

ConstraintReport check_placement(const PlacementInstance& inst, const Placement& p) {
  ConstraintReport r;
  const int np = inst.pm_count();
  const int nv = inst.vm_count();
  if (static_cast<int>(p.assignment.size()) != np ||
      static_cast<int>(p.pm_on.size()) != np ||
      (np > 0 && static_cast<int>(p.assignment[0].size()) != nv)) {
    r.violations.push_back({0, "placement", "matrix shapes do not match the instance"});
    return r;
  }
  for (int i = 0; i < np; ++i) {
    for (int rix = 0; rix < inst.resource_count(); ++rix) {
      double used = 0.0;
      for (int v = 0; v < nv; ++v) {
        if (p.assignment[i][v]) used += inst.vm_demands[v][rix];
      }
      if (!leq_tol(used, inst.pm_resources[i][rix])) {
        r.violations.push_back({9, "pm " + std::to_string(i),
                                inst.resource_names[rix] + " demand " + std::to_string(used) +
                                    " exceeds capacity " +
                                    std::to_string(inst.pm_resources[i][rix])});
      }
    }
  }
  for (int v = 0; v < nv; ++v) {
    int copies = 0;
    for (int i = 0; i < np; ++i) copies += p.assignment[i][v] ? 1 : 0;
    if (copies != 1) {
      r.violations.push_back({10, "vm " + std::to_string(v),
                              "placed on " + std::to_string(copies) +
                                  " physical machines; must be exactly 1"});
    }
  }
  for (int i = 0; i < np; ++i) {
    bool hosts = false;
    for (int v = 0; v < nv; ++v) hosts = hosts || p.assignment[i][v];
    if (hosts && !p.pm_on[i]) {
      r.violations.push_back({11, "pm " + std::to_string(i), "hosts a VM but is marked off"});
    }
    if (!hosts && p.pm_on[i]) {
      r.violations.push_back({11, "pm " + std::to_string(i), "on but hosts no VM (not tight)"});
    }
  }
  return r;
}

PlacementScore score_placement(const PlacementInstance& inst, const Placement& p) {
  ConstraintReport report = check_placement(inst, p);
  if (!report.ok()) {
    throw std::invalid_argument("placement fails constraint check: " + report.to_string());
  }
  PlacementScore s;
  for (auto on : p.pm_on) s.active_pms += on ? 1 : 0;
  const int nv = inst.vm_count();
  std::vector<int> host(nv, 0);
  for (int v = 0; v < nv; ++v) host[v] = *p.pm_of(v);
  for (int u = 0; u < nv; ++u) {
    for (int v = 0; v < nv; ++v) {
      const double q = inst.vm_traffic[u][v];
      if (q > 0.0) s.network_cost += q * inst.pm_hops[host[u]][host[v]];
    }
  }
  return s;
}

namespace {

void require_valid(const PlacementInstance& inst) {
  ValidationReport v = validate_placement_instance(inst);
  if (!v.ok()) throw std::invalid_argument("invalid placement instance: " + v.to_string());
}

// VMs that cannot fit on any PM even alone; the cheap infeasibility case.
std::vector<int> unplaceable_vms(const PlacementInstance& inst) {
  std::vector<int> out;
  for (int v = 0; v < inst.vm_count(); ++v) {
    bool fits_somewhere = false;
    for (int p = 0; p < inst.pm_count() && !fits_somewhere; ++p) {
      bool fits = true;
      for (int r = 0; r < inst.resource_count(); ++r) {
        fits = fits && leq_tol(inst.vm_demands[v][r], inst.pm_resources[p][r]);
      }
      fits_somewhere = fits;
    }
    if (!fits_somewhere) out.push_back(v);
  }
  return out;
}

// Mean PM capacity per resource; the normalization used by the decreasing
// sort and by BFD's residual comparison. Zero-capacity resources normalize
// by 1 so they simply drop out.
std::vector<double> capacity_norms(const PlacementInstance& inst) {
  std::vector<double> norm(inst.resource_count(), 0.0);
  for (int r = 0; r < inst.resource_count(); ++r) {
    double sum = 0.0;
    for (int p = 0; p < inst.pm_count(); ++p) sum += inst.pm_resources[p][r];
    const double mean = inst.pm_count() > 0 ? sum / inst.pm_count() : 0.0;
    norm[r] = mean > 0.0 ? mean : 1.0;
  }
  return norm;
}

std::vector<int> decreasing_vm_order(const PlacementInstance& inst,
                                     const std::vector<double>& norm) {
  std::vector<double> scalar(inst.vm_count(), 0.0);
  for (int v = 0; v < inst.vm_count(); ++v) {
    for (int r = 0; r < inst.resource_count(); ++r) {
      scalar[v] += inst.vm_demands[v][r] / norm[r];
    }
  }
  std::vector<int> order(inst.vm_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scalar[a] != scalar[b]) return scalar[a] > scalar[b];
    return a < b;
  });
  return order;
}

bool fits(const PlacementInstance& inst, const std::vector<double>& used, int pm, int vm) {
  for (int r = 0; r < inst.resource_count(); ++r) {
    if (!leq_tol(used[pm * inst.resource_count() + r] + inst.vm_demands[vm][r],
                 inst.pm_resources[pm][r])) {
      return false;
    }
  }
  return true;
}

PlacementResult greedy_decreasing(const PlacementInstance& inst, bool best_fit) {
  require_valid(inst);
  const int np = inst.pm_count();
  const int nr = inst.resource_count();
  const std::vector<double> norm = capacity_norms(inst);
  const std::vector<int> order = decreasing_vm_order(inst, norm);

  std::vector<double> used(static_cast<std::size_t>(np) * nr, 0.0);
  std::vector<int> vm_to_pm(inst.vm_count(), -1);
  for (int v : order) {
    int chosen = -1;
    double chosen_residual = std::numeric_limits<double>::infinity();
    for (int p = 0; p < np; ++p) {
      if (!fits(inst, used, p, v)) continue;
      if (!best_fit) {
        chosen = p;  // first fit: smallest PM id with room
        break;
      }
      double residual = 0.0;
      for (int r = 0; r < nr; ++r) {
        residual += (inst.pm_resources[p][r] - used[p * nr + r] - inst.vm_demands[v][r]) / norm[r];
      }
      if (residual < chosen_residual) {
        chosen_residual = residual;
        chosen = p;
      }
    }
    if (chosen < 0) {
      return PlacementInfeasible{{v}, "vm " + std::to_string(v) + " fits no PM during the sweep"};
    }
    vm_to_pm[v] = chosen;
    for (int r = 0; r < nr; ++r) used[chosen * nr + r] += inst.vm_demands[v][r];
  }
  return Placement::from_vm_to_pm(vm_to_pm, np);
}

struct ExactSearch {
  const PlacementInstance& inst;
  PlacementObjective objective;
  std::vector<int> vm_order;  // decreasing demand: tighter packings earlier

  // Incumbent for one independent subtree.
  struct Best {
    bool found = false;
    int active = 0;
    double network_cost = 0.0;
    std::vector<int> vm_to_pm;
  };

  double weighted(int active, double net) const {
    return objective.alpha * active + objective.beta * net;
  }

  // true when (a_active, a_net) is strictly better than (b_active, b_net).
  bool better(int a_active, double a_net, int b_active, double b_net) const {
    switch (objective.kind) {
      case PlacementObjective::Kind::PMsOnly:
        return a_active < b_active;
      case PlacementObjective::Kind::Lexicographic:
        if (a_active != b_active) return a_active < b_active;
        return obj_less(a_net, b_net);
      case PlacementObjective::Kind::Weighted:
        return obj_less(weighted(a_active, a_net), weighted(b_active, b_net));
    }
    return false;
  }

  // Can a completion of (active, net) still beat the incumbent? Both active
  // PM count and network cost only grow as VMs are added.
  bool promising(int active, double net, const Best& best) const {
    if (!best.found) return true;
    switch (objective.kind) {
      case PlacementObjective::Kind::PMsOnly:
        return active < best.active;
      case PlacementObjective::Kind::Lexicographic:
        if (active < best.active) return true;
        if (active > best.active) return false;
        return obj_less(net, best.network_cost);
      case PlacementObjective::Kind::Weighted:
        return obj_less(weighted(active, net), weighted(best.active, best.network_cost));
    }
    return false;
  }

  void search(std::size_t depth, std::vector<int>& vm_to_pm, std::vector<double>& used,
              std::vector<int>& pm_load, int active, double net, Best& best) const {
    if (!promising(active, net, best)) return;
    if (depth == vm_order.size()) {
      if (!best.found || better(active, net, best.active, best.network_cost)) {
        best.found = true;
        best.active = active;
        best.network_cost = net;
        best.vm_to_pm = vm_to_pm;
      }
      return;
    }
    const int v = vm_order[depth];
    const int nr = inst.resource_count();
    for (int p = 0; p < inst.pm_count(); ++p) {
      if (!fits(inst, used, p, v)) continue;
      double delta_net = 0.0;
      for (std::size_t d = 0; d < depth; ++d) {
        const int u = vm_order[d];
        const double hops = inst.pm_hops[p][vm_to_pm[u]];
        delta_net += inst.vm_traffic[v][u] * hops + inst.vm_traffic[u][v] * hops;
      }
      const int delta_active = pm_load[p] == 0 ? 1 : 0;
      vm_to_pm[v] = p;
      pm_load[p] += 1;
      for (int r = 0; r < nr; ++r) used[p * nr + r] += inst.vm_demands[v][r];
      search(depth + 1, vm_to_pm, used, pm_load, active + delta_active, net + delta_net, best);
      for (int r = 0; r < nr; ++r) used[p * nr + r] -= inst.vm_demands[v][r];
      pm_load[p] -= 1;
      vm_to_pm[v] = -1;
    }
  }
};

}  // namespace

PlacementResult heuristic_ffd(const PlacementInstance& inst) {
  return greedy_decreasing(inst, /*best_fit=*/false);
}

PlacementResult heuristic_bfd(const PlacementInstance& inst) {
  return greedy_decreasing(inst, /*best_fit=*/true);
}

PlacementResult solve_exact_placement(const PlacementInstance& inst,
                                      const PlacementObjective& objective, ExecPolicy policy) {
  require_valid(inst);
  if (objective.kind == PlacementObjective::Kind::Weighted &&
      (!(objective.alpha >= 0) || !(objective.beta >= 0) || !std::isfinite(objective.alpha) ||
       !std::isfinite(objective.beta))) {
    throw std::invalid_argument("weighted objective needs finite non-negative weights");
  }
  std::vector<int> stuck = unplaceable_vms(inst);
  if (!stuck.empty()) {
    return PlacementInfeasible{stuck, "some VMs fit no PM even alone"};
  }
  const int nv = inst.vm_count();
  const int np = inst.pm_count();
  if (nv == 0) {
    Placement empty = Placement::from_vm_to_pm({}, np);
    return empty;
  }

  ExactSearch searcher{inst, objective, decreasing_vm_order(inst, capacity_norms(inst))};

  // Independent subtrees: choices for the first VM (first two when
  // available). Each subtree runs the full search with its own incumbent;
  // the reduction below is deterministic, so Serial == Parallel.
  const int split_levels = std::min(nv, 2);
  const int subtrees = split_levels == 2 ? np * np : np;
  std::vector<ExactSearch::Best> results(subtrees);

  for_each_index(policy, subtrees, [&](int s) {
    std::vector<int> vm_to_pm(nv, -1);
    std::vector<double> used(static_cast<std::size_t>(np) * inst.resource_count(), 0.0);
    std::vector<int> pm_load(np, 0);
    int active = 0;
    double net = 0.0;
    const int first_pm = split_levels == 2 ? s / np : s;
    const int second_pm = split_levels == 2 ? s % np : -1;
    int prefix[2] = {first_pm, second_pm};
    for (int d = 0; d < split_levels; ++d) {
      const int v = searcher.vm_order[d];
      const int p = prefix[d];
      if (!fits(inst, used, p, v)) return;
      for (std::size_t prev = 0; prev < static_cast<std::size_t>(d); ++prev) {
        const int u = searcher.vm_order[prev];
        const double hops = inst.pm_hops[p][vm_to_pm[u]];
        net += inst.vm_traffic[v][u] * hops + inst.vm_traffic[u][v] * hops;
      }
      if (pm_load[p] == 0) active += 1;
      vm_to_pm[v] = p;
      pm_load[p] += 1;
      for (int r = 0; r < inst.resource_count(); ++r) {
        used[p * inst.resource_count() + r] += inst.vm_demands[v][r];
      }
    }
    searcher.search(split_levels, vm_to_pm, used, pm_load, active, net, results[s]);
  });

  int winner = -1;
  for (int s = 0; s < subtrees; ++s) {
    if (!results[s].found) continue;
    if (winner < 0 ||
        searcher.better(results[s].active, results[s].network_cost, results[winner].active,
                        results[winner].network_cost)) {
      winner = s;
    }
  }
  if (winner < 0) {
    std::vector<int> all(nv);
    std::iota(all.begin(), all.end(), 0);
    return PlacementInfeasible{all, "no feasible packing exists"};
  }
  return Placement::from_vm_to_pm(results[winner].vm_to_pm, np);
}

std::vector<std::vector<double>> pm_hops_from_topology(const Topology& t,
                                                       const std::vector<SwitchId>& pm_attach) {
  const int np = static_cast<int>(pm_attach.size());
  for (SwitchId sw : pm_attach) {
    if (sw < 0 || sw >= static_cast<int>(t.switches.size())) {
      throw std::invalid_argument("pm attachment references unknown switch");
    }
  }
  TopologyIndex idx(t);
  std::vector<std::vector<double>> hops(np, std::vector<double>(np, 0.0));
  for (int p = 0; p < np; ++p) {
    for (int q = p + 1; q < np; ++q) {
      double value;
      if (pm_attach[p] == pm_attach[q]) {
        value = 1.0;  // co-attached PMs still traverse their shared switch
      } else {
        const int d = hop_distance(idx, pm_attach[p], pm_attach[q]);
        if (d < 0) throw std::invalid_argument("pm attachments are disconnected");
        value = static_cast<double>(d + 1);  // switches on path, endpoints included
      }
      hops[p][q] = value;
      hops[q][p] = value;
    }
  }
  return hops;
}

}  // namespace sdnopt
