#pragma once
// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately avoid the library's path enumeration and evaluation code:
// plain DFS enumeration plus double loops, so they can disagree with the
// solvers if either side is wrong.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "sdnopt/core.hpp"
#include "sdnopt/generate.hpp"
#include "sdnopt/placement.hpp"

namespace sdnopt::test {

// --------------------------------------------------------------------------
// Fixture topologies. Unit power everywhere unless stated otherwise.

inline Topology triangle(double bandwidth = 10.0) {
  Topology t;
  for (int i = 0; i < 3; ++i) t.switches.push_back({i, 1.0, 100, kNoPod, kNoLayer});
  t.edges.push_back({0, 1, bandwidth, 1.0});
  t.edges.push_back({0, 2, bandwidth, 1.0});
  t.edges.push_back({1, 2, bandwidth, 1.0});
  for (int i = 0; i < 3; ++i) {
    t.ingress_hosts[i] = i;
    t.egress_hosts[i] = i;
  }
  return t;
}

inline Topology line(int n, double bandwidth = 10.0) {
  Topology t;
  for (int i = 0; i < n; ++i) t.switches.push_back({i, 1.0, 100, kNoPod, kNoLayer});
  for (int i = 0; i + 1 < n; ++i) t.edges.push_back({i, i + 1, bandwidth, 1.0});
  for (int i = 0; i < n; ++i) {
    t.ingress_hosts[i] = i;
    t.egress_hosts[i] = i;
  }
  return t;
}

// Two routes from 0 to 2: via switch 1 (3 switches) or via 3-4 (4 switches).
inline Topology diamond_detour(double bandwidth = 10.0) {
  Topology t;
  for (int i = 0; i < 5; ++i) t.switches.push_back({i, 1.0, 100, kNoPod, kNoLayer});
  t.edges.push_back({0, 1, bandwidth, 1.0});
  t.edges.push_back({1, 2, bandwidth, 1.0});
  t.edges.push_back({0, 3, bandwidth, 1.0});
  t.edges.push_back({3, 4, bandwidth, 1.0});
  t.edges.push_back({2, 4, bandwidth, 1.0});
  for (int i = 0; i < 5; ++i) {
    t.ingress_hosts[i] = i;
    t.egress_hosts[i] = i;
  }
  return t;
}

// --------------------------------------------------------------------------
// Independent simple-path enumeration (DFS, ascending neighbor order).

inline void all_simple_paths_rec(const Topology& t, SwitchId cur, SwitchId dst,
                                 std::vector<SwitchId>& path, std::set<SwitchId>& seen,
                                 std::vector<std::vector<SwitchId>>& out) {
  if (cur == dst) {
    out.push_back(path);
    return;
  }
  std::vector<std::pair<SwitchId, int>> next;
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    if (t.edges[e].a == cur) next.push_back({t.edges[e].b, static_cast<int>(e)});
    if (t.edges[e].b == cur) next.push_back({t.edges[e].a, static_cast<int>(e)});
  }
  std::sort(next.begin(), next.end());
  for (auto [u, e] : next) {
    (void)e;
    if (seen.count(u)) continue;
    seen.insert(u);
    path.push_back(u);
    all_simple_paths_rec(t, u, dst, path, seen, out);
    path.pop_back();
    seen.erase(u);
  }
}

inline std::vector<std::vector<SwitchId>> all_simple_paths(const Topology& t, SwitchId src,
                                                           SwitchId dst) {
  std::vector<std::vector<SwitchId>> out;
  std::vector<SwitchId> path{src};
  std::set<SwitchId> seen{src};
  all_simple_paths_rec(t, src, dst, path, seen, out);
  return out;
}

inline int edge_index(const Topology& t, SwitchId a, SwitchId b) {
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    if ((t.edges[e].a == a && t.edges[e].b == b) || (t.edges[e].a == b && t.edges[e].b == a)) {
      return static_cast<int>(e);
    }
  }
  return -1;
}

// --------------------------------------------------------------------------
// Exhaustive traffic oracle: every combination of per-flow simple paths,
// capacity checked, state derived, objective summed by hand.

struct TrafficOracleResult {
  bool feasible = false;
  double objective = 0.0;
  // lex-least optimal routing: per flow (ascending id) the path switch
  // sequence, compared lexicographically
  std::vector<std::vector<SwitchId>> best_paths;
};

inline TrafficOracleResult traffic_oracle(const Topology& t, const std::vector<Flow>& flows,
                                          ObjectiveMode mode) {
  TrafficOracleResult best;
  std::vector<std::vector<std::vector<SwitchId>>> options;
  for (const Flow& f : flows) {
    options.push_back(all_simple_paths(t, f.source, f.destination));
    if (options.back().empty()) return best;
  }
  // id-ascending flow order for the routing-lex comparison
  std::vector<std::size_t> by_id(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return flows[a].id < flows[b].id; });

  std::vector<std::size_t> pick(flows.size(), 0);
  for (;;) {
    std::vector<double> load(t.edges.size(), 0.0);
    std::vector<char> edge_used(t.edges.size(), 0);
    std::vector<char> sw_on(t.switches.size(), 0);
    bool ok = true;
    double per_flow_links = 0.0;
    for (std::size_t fi = 0; fi < flows.size() && ok; ++fi) {
      const auto& path = options[fi][pick[fi]];
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const int e = edge_index(t, path[i], path[i + 1]);
        load[e] += flows[fi].rate;
        edge_used[e] = 1;
        per_flow_links += t.edges[e].power_cost;
      }
      for (SwitchId sw : path) sw_on[sw] = 1;
    }
    for (std::size_t e = 0; e < t.edges.size() && ok; ++e) {
      ok = leq_tol(load[e], t.edges[e].bandwidth);
    }
    if (ok) {
      double obj = 0.0;
      if (mode == ObjectiveMode::PerFlowLink) {
        obj = per_flow_links;
      } else {
        for (std::size_t e = 0; e < t.edges.size(); ++e) {
          if (edge_used[e]) obj += t.edges[e].power_cost;
        }
      }
      for (const auto& s : t.switches) {
        if (sw_on[s.id]) obj += s.power_cost;
      }
      std::vector<std::vector<SwitchId>> paths;
      for (std::size_t pos : by_id) paths.push_back(options[pos][pick[pos]]);
      const bool better = !best.feasible || obj < best.objective ||
                          (obj == best.objective && paths < best.best_paths);
      if (better) {
        best.feasible = true;
        best.objective = obj;
        best.best_paths = std::move(paths);
      }
    }
    // advance the odometer
    std::size_t d = 0;
    while (d < pick.size()) {
      if (++pick[d] < options[d].size()) break;
      pick[d] = 0;
      ++d;
    }
    if (d == pick.size()) break;
  }
  return best;
}

// --------------------------------------------------------------------------
// Brute-force placement oracle over all |P|^|V| assignments.

struct PlacementOracleResult {
  bool feasible = false;
  int active_pms = 0;
  double network_cost = 0.0;
};

inline PlacementOracleResult placement_oracle(const PlacementInstance& inst, bool lexicographic) {
  PlacementOracleResult best;
  const int np = inst.pm_count();
  const int nv = inst.vm_count();
  std::vector<int> host(nv, 0);
  for (;;) {
    bool ok = true;
    for (int p = 0; p < np && ok; ++p) {
      for (int r = 0; r < inst.resource_count() && ok; ++r) {
        double used = 0.0;
        for (int v = 0; v < nv; ++v) {
          if (host[v] == p) used += inst.vm_demands[v][r];
        }
        ok = leq_tol(used, inst.pm_resources[p][r]);
      }
    }
    if (ok) {
      std::vector<char> on(np, 0);
      for (int v = 0; v < nv; ++v) on[host[v]] = 1;
      int active = 0;
      for (int p = 0; p < np; ++p) active += on[p];
      double net = 0.0;
      for (int u = 0; u < nv; ++u) {
        for (int v = 0; v < nv; ++v) net += inst.vm_traffic[u][v] * inst.pm_hops[host[u]][host[v]];
      }
      const bool improves =
          !best.feasible || active < best.active_pms ||
          (lexicographic && active == best.active_pms && net < best.network_cost - 1e-12);
      if (improves) {
        best.feasible = true;
        best.active_pms = active;
        best.network_cost = net;
      }
    }
    int d = 0;
    while (d < nv) {
      if (++host[d] < np) break;
      host[d] = 0;
      ++d;
    }
    if (d == nv || nv == 0) break;
  }
  if (nv == 0) {
    best.feasible = true;
    best.active_pms = 0;
    best.network_cost = 0.0;
  }
  return best;
}

// --------------------------------------------------------------------------
// Brute-force rule-placement oracle.

struct RulesOracleResult {
  bool feasible = false;
  int total_rules = 0;
};

inline RulesOracleResult rules_oracle(const Topology& t, const std::vector<Flow>& flows) {
  RulesOracleResult best;
  std::vector<std::vector<std::vector<SwitchId>>> options;
  for (const Flow& f : flows) {
    options.push_back(all_simple_paths(t, f.source, f.destination));
    if (options.back().empty()) return best;
  }
  std::vector<std::size_t> pick(flows.size(), 0);
  for (;;) {
    std::vector<double> load(t.edges.size(), 0.0);
    std::vector<int> rules(t.switches.size(), 0);
    int total = 0;
    for (std::size_t fi = 0; fi < flows.size(); ++fi) {
      const auto& path = options[fi][pick[fi]];
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        load[edge_index(t, path[i], path[i + 1])] += flows[fi].rate;
      }
      for (SwitchId sw : path) rules[sw] += 1;
      total += static_cast<int>(path.size());
    }
    bool ok = true;
    for (std::size_t e = 0; e < t.edges.size() && ok; ++e) {
      ok = leq_tol(load[e], t.edges[e].bandwidth);
    }
    for (const auto& s : t.switches) {
      if (!ok) break;
      ok = rules[s.id] <= s.rule_capacity;
    }
    if (ok && (!best.feasible || total < best.total_rules)) {
      best.feasible = true;
      best.total_rules = total;
    }
    std::size_t d = 0;
    while (d < pick.size()) {
      if (++pick[d] < options[d].size()) break;
      pick[d] = 0;
      ++d;
    }
    if (d == pick.size()) break;
  }
  return best;
}

// --------------------------------------------------------------------------
// Seeded random small instances for the oracle sweeps. Connected topology
// (random spanning tree plus extra edges), small integer power costs.

struct RandomInstance {
  Topology topology;
  std::vector<Flow> flows;
};

inline RandomInstance random_traffic_instance(std::uint64_t seed, int max_switches, int max_flows,
                                              double bandwidth_scale = 1.0) {
  SplitMix64 rng(seed);
  RandomInstance out;
  const int n = 2 + static_cast<int>(rng.next_below(max_switches - 1));  // 2..max
  for (int i = 0; i < n; ++i) {
    SwitchSpec s;
    s.id = i;
    s.power_cost = static_cast<double>(1 + rng.next_below(4));
    s.rule_capacity = 1 + static_cast<int>(rng.next_below(4));
    out.topology.switches.push_back(s);
  }
  std::set<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(rng.next_below(i));
    pairs.insert({std::min(i, j), std::max(i, j)});
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.next_below(100) < 35) pairs.insert({a, b});
    }
  }
  for (auto [a, b] : pairs) {
    EdgeSpec e;
    e.a = a;
    e.b = b;
    e.bandwidth = static_cast<double>(5 + rng.next_below(10)) * bandwidth_scale;
    e.power_cost = static_cast<double>(1 + rng.next_below(4));
    out.topology.edges.push_back(e);
  }
  for (int i = 0; i < n; ++i) {
    out.topology.ingress_hosts[i] = i;
    out.topology.egress_hosts[i] = i;
  }
  const int nf = 1 + static_cast<int>(rng.next_below(max_flows));
  for (int f = 0; f < nf; ++f) {
    const int src = static_cast<int>(rng.next_below(n));
    int dst = static_cast<int>(rng.next_below(n));
    if (dst == src) dst = (dst + 1) % n;
    out.flows.push_back({f, src, dst, static_cast<double>(1 + rng.next_below(4))});
  }
  return out;
}

inline PlacementInstance random_placement_instance(std::uint64_t seed, int max_pms, int max_vms,
                                                   int resources) {
  SplitMix64 rng(seed);
  const int np = 1 + static_cast<int>(rng.next_below(max_pms));
  const int nv = 1 + static_cast<int>(rng.next_below(max_vms));
  PlacementInstance inst = generate_placement(np, nv, resources, rng.next());
  return inst;
}

}  // namespace sdnopt::test
