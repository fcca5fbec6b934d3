#include "sdnopt/rules.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sdnopt/paths.hpp"

namespace sdnopt {

namespace {

bool switch_has_ingress(const Topology& t, SwitchId sw) {
  for (const auto& [h, s] : t.ingress_hosts) {
    (void)h;
    if (s == sw) return true;
  }
  return false;
}

bool switch_has_egress(const Topology& t, SwitchId sw) {
  for (const auto& [h, s] : t.egress_hosts) {
    (void)h;
    if (s == sw) return true;
  }
  return false;
}

// Simple source->destination walk, or empty on any structural problem.
std::vector<SwitchId> simple_walk(const Topology& t, const Flow& f,
                                  const std::vector<EdgeId>& edges) {
  std::vector<SwitchId> seq{f.source};
  std::set<SwitchId> seen{f.source};
  SwitchId cur = f.source;
  for (EdgeId e : edges) {
    if (e < 0 || e >= static_cast<int>(t.edges.size())) return {};
    const auto& spec = t.edges[e];
    SwitchId next;
    if (spec.a == cur) {
      next = spec.b;
    } else if (spec.b == cur) {
      next = spec.a;
    } else {
      return {};
    }
    if (!seen.insert(next).second) return {};
    cur = next;
    seq.push_back(cur);
  }
  if (edges.empty() || cur != f.destination) return {};
  return seq;
}

}  // namespace

ConstraintReport check_rule_constraints(const Topology& t, const std::vector<Flow>& flows,
                                        const RuleAllocation& alloc) {
  ConstraintReport r;
  const int nswitch = static_cast<int>(t.switches.size());
  const int nedge = static_cast<int>(t.edges.size());
  const int nflow = static_cast<int>(flows.size());
  if (static_cast<int>(alloc.rules.size()) != nswitch ||
      (nswitch > 0 && static_cast<int>(alloc.rules[0].size()) != nflow) ||
      static_cast<int>(alloc.link_state.size()) != nedge) {
    r.violations.push_back({0, "allocation", "matrix shapes do not match the instance"});
    return r;
  }

  std::vector<double> load(nedge, 0.0);
  std::vector<std::uint8_t> used(nedge, 0);

  for (int fi = 0; fi < nflow; ++fi) {
    const Flow& f = flows[fi];
    const std::string name = "flow " + std::to_string(f.id);
    auto it = alloc.routing.assignment.find(f.id);
    if (it == alloc.routing.assignment.end()) {
      r.violations.push_back({21, name, "no route assigned"});
      continue;
    }
    std::vector<SwitchId> walk = simple_walk(t, f, it->second);
    if (walk.empty()) {
      r.violations.push_back(
          {21, name, "route is not a simple source-to-destination path"});
      continue;
    }
    if (!switch_has_ingress(t, f.source)) {
      r.violations.push_back({21, name, "source switch " + std::to_string(f.source) +
                                            " has no attached ingress host"});
    }
    if (!switch_has_egress(t, f.destination)) {
      r.violations.push_back({21, name, "destination switch " + std::to_string(f.destination) +
                                            " has no attached egress host"});
    }
    std::vector<std::uint8_t> on_path(nswitch, 0);
    for (SwitchId sw : walk) on_path[sw] = 1;
    // Eq. (18): a rule exactly on every on-path switch.
    for (SwitchId sw = 0; sw < nswitch; ++sw) {
      if (on_path[sw] && !alloc.rules[sw][fi]) {
        r.violations.push_back({18, "switch " + std::to_string(sw),
                                name + " passes through but no rule is installed"});
      }
      if (!on_path[sw] && alloc.rules[sw][fi]) {
        r.violations.push_back({18, "switch " + std::to_string(sw),
                                "rule installed for " + name + " which does not pass through"});
      }
    }
    for (EdgeId e : it->second) {
      load[e] += f.rate;
      used[e] = 1;
    }
  }

  for (EdgeId e = 0; e < nedge; ++e) {
    if (!leq_tol(load[e], t.edges[e].bandwidth)) {
      r.violations.push_back({16, edge_name(t, e),
                              "total flow rate " + std::to_string(load[e]) +
                                  " exceeds bandwidth " + std::to_string(t.edges[e].bandwidth)});
    }
    if (alloc.link_state[e] && !used[e]) {
      r.violations.push_back({19, edge_name(t, e), "active but no flow passes through it"});
    }
    if (!alloc.link_state[e] && used[e]) {
      r.violations.push_back({20, edge_name(t, e), "used by a flow but marked inactive"});
    }
  }
  for (SwitchId sw = 0; sw < nswitch; ++sw) {
    int count = 0;
    for (int fi = 0; fi < nflow; ++fi) count += alloc.rules[sw][fi] ? 1 : 0;
    if (count > t.switches[sw].rule_capacity) {
      r.violations.push_back({17, "switch " + std::to_string(sw),
                              std::to_string(count) + " rules exceed capacity " +
                                  std::to_string(t.switches[sw].rule_capacity)});
    }
  }
  return r;
}

namespace {

void require_rule_instance(const Topology& t, const std::vector<Flow>& flows) {
  ValidationReport tv = validate_topology(t);
  if (!tv.ok()) throw std::invalid_argument("invalid topology: " + tv.to_string());
  ValidationReport fv = validate_flows(t, flows);
  if (!fv.ok()) throw std::invalid_argument("invalid flows: " + fv.to_string());
  for (const Flow& f : flows) {
    if (!switch_has_ingress(t, f.source)) {
      throw std::invalid_argument("flow " + std::to_string(f.id) + " source switch " +
                                  std::to_string(f.source) + " has no ingress host");
    }
    if (!switch_has_egress(t, f.destination)) {
      throw std::invalid_argument("flow " + std::to_string(f.id) + " destination switch " +
                                  std::to_string(f.destination) + " has no egress host");
    }
  }
}

RuleSolution build_solution(const Topology& t, const std::vector<Flow>& flows,
                            const TopologyIndex& idx,
                            const std::vector<const Path*>& chosen, Optimality opt,
                            const std::string& method) {
  RuleSolution sol;
  sol.allocation.rules.assign(t.switches.size(),
                              std::vector<std::uint8_t>(flows.size(), 0));
  sol.allocation.link_state.assign(t.edges.size(), 0);
  int total = 0;
  for (std::size_t fi = 0; fi < flows.size(); ++fi) {
    const Path& p = *chosen[fi];
    for (SwitchId sw : p) sol.allocation.rules[sw][fi] = 1;
    std::vector<EdgeId> edges = path_edges(idx, p);
    for (EdgeId e : edges) sol.allocation.link_state[e] = 1;
    sol.allocation.routing.assignment[flows[fi].id] = std::move(edges);
    total += static_cast<int>(p.size());
  }
  sol.total_rules = total;
  sol.optimality = opt;
  sol.method = method;
  return sol;
}

struct RuleSearchContext {
  const Topology& t;
  const TopologyIndex& idx;
  std::vector<int> flow_order;                    // positions sorted by flow id
  std::vector<std::vector<Path>> candidates;      // per ordered flow, lex-sorted
  std::vector<std::vector<std::vector<EdgeId>>> candidate_edges;
  std::vector<int> min_switches;                  // per ordered flow, hop-shortest count
  std::vector<double> rates;                      // per ordered flow
  bool enumeration_exhaustive = true;
  int seed_bound = -1;                            // heuristic total, -1 when unavailable
};

struct SubtreeResult {
  bool found = false;
  bool truncated = false;
  std::uint64_t nodes = 0;
  int total = 0;
  std::vector<int> choice;  // candidate index per ordered flow
};

// All search state lives here and is written back to the shared results
// slot once at the end; subtrees touch no shared cache lines while running.
struct RuleDfs {
  const RuleSearchContext& ctx;
  std::uint64_t budget;
  SubtreeResult result;
  std::vector<int> choice;
  std::vector<int> table_used;  // rules per switch so far
  std::vector<double> edge_load;
  std::vector<int> suffix_lb;   // sum of min_switches from depth d onward

  bool feasible(std::size_t depth, std::size_t ci) const {
    const auto& path = ctx.candidates[depth][ci];
    const auto& edges = ctx.candidate_edges[depth][ci];
    for (SwitchId sw : path) {
      if (table_used[sw] + 1 > ctx.t.switches[sw].rule_capacity) return false;
    }
    const double rate = ctx.rates[depth];
    for (EdgeId e : edges) {
      if (!leq_tol(edge_load[e] + rate, ctx.t.edges[e].bandwidth)) return false;
    }
    return true;
  }

  void dfs(std::size_t depth, int installed) {
    if (result.nodes >= budget) {
      result.truncated = true;
      return;
    }
    result.nodes += 1;
    if (depth == ctx.candidates.size()) {
      if (!result.found || installed < result.total) {
        result.found = true;
        result.total = installed;
        result.choice = choice;
      }
      return;
    }
    for (std::size_t ci = 0; ci < ctx.candidates[depth].size(); ++ci) {
      const auto& path = ctx.candidates[depth][ci];
      const int lb = installed + static_cast<int>(path.size()) + suffix_lb[depth + 1];
      if (ctx.seed_bound >= 0 && lb > ctx.seed_bound) continue;
      if (result.found && lb >= result.total) continue;
      if (!feasible(depth, ci)) continue;
      for (SwitchId sw : path) table_used[sw] += 1;
      for (EdgeId e : ctx.candidate_edges[depth][ci]) edge_load[e] += ctx.rates[depth];
      choice[depth] = static_cast<int>(ci);
      dfs(depth + 1, installed + static_cast<int>(path.size()));
      choice[depth] = -1;
      for (SwitchId sw : path) table_used[sw] -= 1;
      for (EdgeId e : ctx.candidate_edges[depth][ci]) edge_load[e] -= ctx.rates[depth];
      if (result.truncated) return;
    }
  }
};

}  // namespace

RuleResult heuristic_shortest_admissible(const Topology& t, const std::vector<Flow>& flows) {
  require_rule_instance(t, flows);
  TopologyIndex idx(t);

  std::vector<int> order(flows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return flows[a].id < flows[b].id; });

  std::vector<int> table_left(t.switches.size());
  for (const auto& s : t.switches) table_left[s.id] = s.rule_capacity;
  std::vector<double> bw_left(t.edges.size());
  for (std::size_t e = 0; e < t.edges.size(); ++e) bw_left[e] = t.edges[e].bandwidth;

  std::vector<Path> paths(flows.size());
  std::vector<const Path*> chosen(flows.size());
  std::vector<std::uint8_t> banned_nodes(t.switches.size(), 0);
  std::vector<std::uint8_t> banned_edges(t.edges.size(), 0);
  for (int fi : order) {
    const Flow& f = flows[fi];
    std::vector<EdgeId> saturated;
    for (std::size_t sw = 0; sw < t.switches.size(); ++sw) banned_nodes[sw] = table_left[sw] < 1;
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
      banned_edges[e] = !leq_tol(f.rate, bw_left[e]);
      if (banned_edges[e]) saturated.push_back(static_cast<EdgeId>(e));
    }
    banned_nodes[f.source] = table_left[f.source] < 1;
    Path p = banned_nodes[f.source] || banned_nodes[f.destination]
                 ? Path{}
                 : lex_shortest_path(idx, f.source, f.destination, banned_nodes, banned_edges);
    if (p.empty()) {
      return Infeasible{{f.id},
                        saturated,
                        "flow " + std::to_string(f.id) + " has no admissible path"};
    }
    for (SwitchId sw : p) table_left[sw] -= 1;
    for (EdgeId e : path_edges(idx, p)) bw_left[e] -= f.rate;
    paths[fi] = std::move(p);
  }
  for (std::size_t fi = 0; fi < flows.size(); ++fi) chosen[fi] = &paths[fi];
  return build_solution(t, flows, idx, chosen, Optimality::Heuristic, "shortest-admissible");
}

RuleResult solve_exact_rules(const Topology& t, const std::vector<Flow>& flows,
                             const SolverBudget& budget, ExecPolicy policy) {
  require_rule_instance(t, flows);
  if (budget.max_nodes < 1 || budget.k_paths < 1) {
    throw std::invalid_argument("budget fields must be >= 1");
  }
  TopologyIndex idx(t);
  if (flows.empty()) {
    std::vector<const Path*> none;
    return build_solution(t, flows, idx, none, Optimality::Exact, "exact");
  }

  RuleSearchContext ctx{t, idx, {}, {}, {}, {}, {}, true, -1};
  ctx.flow_order.resize(flows.size());
  std::iota(ctx.flow_order.begin(), ctx.flow_order.end(), 0);
  std::sort(ctx.flow_order.begin(), ctx.flow_order.end(),
            [&](int a, int b) { return flows[a].id < flows[b].id; });

  for (int fi : ctx.flow_order) {
    const Flow& f = flows[fi];
    PathEnumeration en = k_shortest_paths(idx, f.source, f.destination, budget.k_paths);
    if (en.paths.empty()) {
      return Infeasible{{f.id}, {}, "flow " + std::to_string(f.id) + " is disconnected"};
    }
    ctx.enumeration_exhaustive = ctx.enumeration_exhaustive && en.exhaustive;
    ctx.min_switches.push_back(static_cast<int>(en.paths.front().size()));
    std::sort(en.paths.begin(), en.paths.end());  // leftmost-first exploration
    std::vector<std::vector<EdgeId>> edges;
    for (const Path& p : en.paths) edges.push_back(path_edges(idx, p));
    ctx.candidates.push_back(std::move(en.paths));
    ctx.candidate_edges.push_back(std::move(edges));
    ctx.rates.push_back(f.rate);
  }

  RuleResult seed = heuristic_shortest_admissible(t, flows);
  const RuleSolution* seed_sol = std::get_if<RuleSolution>(&seed);
  if (seed_sol) ctx.seed_bound = seed_sol->total_rules;

  std::vector<int> suffix_lb(flows.size() + 1, 0);
  for (int d = static_cast<int>(flows.size()) - 1; d >= 0; --d) {
    suffix_lb[d] = suffix_lb[d + 1] + ctx.min_switches[d];
  }
  const int root_lb = suffix_lb[0];

  const int subtrees = static_cast<int>(ctx.candidates[0].size());
  std::vector<SubtreeResult> results(subtrees);
  const std::uint64_t per_subtree = budget.max_nodes / subtrees;
  const std::uint64_t remainder = budget.max_nodes % subtrees;

  for_each_index(policy, subtrees, [&](int s) {
    RuleDfs dfs{ctx,
                per_subtree + (static_cast<std::uint64_t>(s) < remainder ? 1 : 0),
                {},
                std::vector<int>(flows.size(), -1),
                std::vector<int>(t.switches.size(), 0),
                std::vector<double>(t.edges.size(), 0.0),
                suffix_lb};
    if (dfs.budget == 0) {
      results[s].truncated = true;
      return;
    }
    const auto& path = ctx.candidates[0][s];
    const int lb = static_cast<int>(path.size()) + suffix_lb[1];
    if ((ctx.seed_bound < 0 || lb <= ctx.seed_bound) && dfs.feasible(0, s)) {
      for (SwitchId sw : path) dfs.table_used[sw] += 1;
      for (EdgeId e : ctx.candidate_edges[0][s]) dfs.edge_load[e] += ctx.rates[0];
      dfs.choice[0] = s;
      dfs.dfs(1, static_cast<int>(path.size()));
    }
    results[s] = std::move(dfs.result);
  });

  bool truncated = false;
  std::uint64_t nodes = 0;
  int winner = -1;
  for (int s = 0; s < subtrees; ++s) {
    truncated = truncated || results[s].truncated;
    nodes += results[s].nodes;
    if (results[s].found && (winner < 0 || results[s].total < results[winner].total)) {
      winner = s;  // ties keep the smaller subtree index = lex-least routing
    }
  }

  const int best_total = winner >= 0 ? results[winner].total : -1;
  if (winner < 0) {
    if (seed_sol) {
      // Search missed everything under its budget but the greedy routing is
      // feasible; return it as the incumbent.
      RuleSolution sol = *seed_sol;
      sol.method = "incumbent";
      return sol;
    }
    if (!truncated && ctx.enumeration_exhaustive) {
      std::vector<FlowId> ids;
      for (const Flow& f : flows) ids.push_back(f.id);
      return Infeasible{ids, std::get<Infeasible>(seed).saturated_edges,
                        "no joint allocation satisfies table and link capacities"};
    }
    return BudgetExhausted{nodes};
  }
  if (seed_sol && seed_sol->total_rules < best_total) {
    // Possible only when the search was truncated before reaching the
    // greedy-quality region.
    RuleSolution sol = *seed_sol;
    sol.method = "incumbent";
    sol.optimality = Optimality::Heuristic;
    return sol;
  }

  std::vector<const Path*> chosen(flows.size());
  for (std::size_t d = 0; d < flows.size(); ++d) {
    chosen[ctx.flow_order[d]] = &ctx.candidates[d][results[winner].choice[d]];
  }
  const bool proven = (!truncated && ctx.enumeration_exhaustive) || best_total == root_lb;
  return build_solution(t, flows, idx, chosen,
                        proven ? Optimality::Exact : Optimality::Heuristic,
                        proven ? "exact" : "incumbent");
}

}  // namespace sdnopt
