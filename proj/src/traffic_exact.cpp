#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "sdnopt/paths.hpp"
#include "sdnopt/traffic.hpp"

// Exact traffic solver: branch-and-bound over per-flow candidate paths
// (k shortest loop-free, lexicographic exploration order). The node budget
// is pre-split across the root subtrees and each subtree keeps its own
// incumbent, so Serial and Parallel policies return identical results and
// the lexicographically-least optimal routing wins every tie.

namespace sdnopt {

namespace {

// Min over all simple paths of the summed link power cost; admissible
// per-flow term for the PerFlowLink bound (link charges are per flow).
double min_link_cost_path(const TopologyIndex& idx, SwitchId src, SwitchId dst) {
  const int n = idx.switch_count();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, SwitchId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const auto& [u, e] : idx.adj[v]) {
      const double nd = d + idx.topo->edges[e].power_cost;
      if (nd < dist[u]) {
        dist[u] = nd;
        pq.push({nd, u});
      }
    }
  }
  return dist[dst];
}

struct SearchContext {
  const Topology& t;
  const TopologyIndex& idx;
  ObjectiveMode mode;
  std::vector<int> flow_order;  // flow-vector positions sorted by flow id
  std::vector<std::vector<Path>> candidates;  // per depth, lex order
  std::vector<std::vector<std::vector<EdgeId>>> candidate_edges;
  std::vector<double> rates;
  std::vector<std::pair<SwitchId, SwitchId>> endpoints;
  std::vector<double> suffix_link_lb;  // PerFlowLink residual link term
  bool exhaustive = true;
  bool has_seed = false;
  double seed_bound = 0.0;
};

struct SubtreeResult {
  bool found = false;
  bool truncated = false;
  std::uint64_t nodes = 0;
  double objective = 0.0;  // canonical leaf recomputation
  std::vector<int> choice;
};

// All search state lives here and is written back to the shared results
// slot once at the end; subtrees touch no shared cache lines while running.
struct Dfs {
  const SearchContext& ctx;
  std::uint64_t budget;
  SubtreeResult result;
  std::vector<int> choice;
  std::vector<int> switch_use;
  std::vector<int> edge_use;
  std::vector<double> edge_load;
  double partial = 0.0;  // incremental objective; leaves recompute canonically
  std::vector<int> endpoint_stamp;
  int stamp = 0;

  explicit Dfs(const SearchContext& c, std::uint64_t b)
      : ctx(c), budget(b), choice(c.candidates.size(), -1),
        switch_use(c.t.switches.size(), 0), edge_use(c.t.edges.size(), 0),
        edge_load(c.t.edges.size(), 0.0), endpoint_stamp(c.t.switches.size(), 0) {}

  bool feasible(std::size_t depth, std::size_t ci) const {
    const double rate = ctx.rates[depth];
    for (EdgeId e : ctx.candidate_edges[depth][ci]) {
      if (!leq_tol(edge_load[e] + rate, ctx.t.edges[e].bandwidth)) return false;
    }
    return true;
  }

  void apply(std::size_t depth, std::size_t ci) {
    const auto& path = ctx.candidates[depth][ci];
    const auto& edges = ctx.candidate_edges[depth][ci];
    for (EdgeId e : edges) {
      if (ctx.mode == ObjectiveMode::PerFlowLink || edge_use[e] == 0) {
        partial += ctx.t.edges[e].power_cost;
      }
      edge_use[e] += 1;
      edge_load[e] += ctx.rates[depth];
    }
    for (SwitchId sw : path) {
      if (switch_use[sw] == 0) partial += ctx.t.switches[sw].power_cost;
      switch_use[sw] += 1;
    }
    choice[depth] = static_cast<int>(ci);
  }

  void undo(std::size_t depth, std::size_t ci) {
    const auto& path = ctx.candidates[depth][ci];
    const auto& edges = ctx.candidate_edges[depth][ci];
    for (SwitchId sw : path) {
      switch_use[sw] -= 1;
      if (switch_use[sw] == 0) partial -= ctx.t.switches[sw].power_cost;
    }
    for (EdgeId e : edges) {
      edge_use[e] -= 1;
      edge_load[e] -= ctx.rates[depth];
      if (ctx.mode == ObjectiveMode::PerFlowLink || edge_use[e] == 0) {
        partial -= ctx.t.edges[e].power_cost;
      }
    }
    choice[depth] = -1;
  }

  // Switch power of still-off endpoint switches of unrouted flows, counted
  // once per switch. Every completion must turn these on.
  double endpoint_union_cost(std::size_t depth) {
    ++stamp;
    double cost = 0.0;
    for (std::size_t d = depth; d < ctx.candidates.size(); ++d) {
      const auto [s1, s2] = ctx.endpoints[d];
      if (switch_use[s1] == 0 && endpoint_stamp[s1] != stamp) {
        endpoint_stamp[s1] = stamp;
        cost += ctx.t.switches[s1].power_cost;
      }
      if (switch_use[s2] == 0 && endpoint_stamp[s2] != stamp) {
        endpoint_stamp[s2] = stamp;
        cost += ctx.t.switches[s2].power_cost;
      }
    }
    return cost;
  }

  double lower_bound(std::size_t depth) {
    double lb = partial + endpoint_union_cost(depth);
    if (ctx.mode == ObjectiveMode::PerFlowLink) lb += ctx.suffix_link_lb[depth];
    return lb;
  }

  // Canonical recomputation in fixed element order; incremental undo noise
  // never reaches incumbent comparisons.
  double leaf_objective() const {
    double total = 0.0;
    if (ctx.mode == ObjectiveMode::PerFlowLink) {
      for (std::size_t d = 0; d < ctx.candidates.size(); ++d) {
        for (EdgeId e : ctx.candidate_edges[d][choice[d]]) {
          total += ctx.t.edges[e].power_cost;
        }
      }
    } else {
      for (std::size_t e = 0; e < ctx.t.edges.size(); ++e) {
        if (edge_use[e] > 0) total += ctx.t.edges[e].power_cost;
      }
    }
    for (const auto& s : ctx.t.switches) {
      if (switch_use[s.id] > 0) total += s.power_cost;
    }
    return total;
  }

  void run(std::size_t depth) {
    if (result.nodes >= budget) {
      result.truncated = true;
      return;
    }
    result.nodes += 1;
    if (depth == ctx.candidates.size()) {
      const double obj = leaf_objective();
      if (!result.found || obj_less(obj, result.objective)) {
        result.found = true;
        result.objective = obj;
        result.choice = choice;
      }
      return;
    }
    for (std::size_t ci = 0; ci < ctx.candidates[depth].size(); ++ci) {
      if (!feasible(depth, ci)) continue;
      apply(depth, ci);
      const double lb = lower_bound(depth + 1);
      bool prune = ctx.has_seed && obj_less(ctx.seed_bound, lb);  // lb beyond any tie
      if (result.found && !obj_less(lb, result.objective)) prune = true;
      if (!prune) run(depth + 1);
      undo(depth, ci);
      if (result.truncated) return;
    }
  }
};

TrafficSolution make_solution(const Topology& t, const std::vector<Flow>& flows,
                              FlowRouting routing, ObjectiveMode mode, Optimality opt,
                              const std::string& method) {
  TrafficSolution sol;
  sol.routing = std::move(routing);
  sol.state = derive_network_state(t, flows, sol.routing);
  sol.objective = evaluate_traffic_objective_unchecked(t, flows, sol.routing, sol.state, mode);
  sol.optimality = opt;
  sol.method = method;
  return sol;
}

}  // namespace

TrafficResult solve_exact_traffic(const Topology& t, const std::vector<Flow>& flows,
                                  ObjectiveMode mode, const SolverBudget& budget,
                                  ExecPolicy policy) {
  ValidationReport tv = validate_topology(t);
  if (!tv.ok()) throw std::invalid_argument("invalid topology: " + tv.to_string());
  ValidationReport fv = validate_flows(t, flows);
  if (!fv.ok()) throw std::invalid_argument("invalid flows: " + fv.to_string());
  if (budget.max_nodes < 1 || budget.k_paths < 1) {
    throw std::invalid_argument("budget fields must be >= 1");
  }

  TopologyIndex idx(t);
  if (flows.empty()) {
    return make_solution(t, flows, {}, mode, Optimality::Exact, "exact");
  }

  SearchContext ctx{t, idx, mode, {}, {}, {}, {}, {}, {}, true, false, 0.0};
  ctx.flow_order.resize(flows.size());
  std::iota(ctx.flow_order.begin(), ctx.flow_order.end(), 0);
  std::sort(ctx.flow_order.begin(), ctx.flow_order.end(),
            [&](int a, int b) { return flows[a].id < flows[b].id; });

  std::vector<double> link_lb;
  for (int fi : ctx.flow_order) {
    const Flow& f = flows[fi];
    PathEnumeration en = k_shortest_paths(idx, f.source, f.destination, budget.k_paths);
    if (en.paths.empty()) {
      return Infeasible{{f.id}, {}, "flow " + std::to_string(f.id) + " is disconnected"};
    }
    ctx.exhaustive = ctx.exhaustive && en.exhaustive;
    std::sort(en.paths.begin(), en.paths.end());
    std::vector<std::vector<EdgeId>> edges;
    for (const Path& p : en.paths) edges.push_back(path_edges(idx, p));
    ctx.candidates.push_back(std::move(en.paths));
    ctx.candidate_edges.push_back(std::move(edges));
    ctx.rates.push_back(f.rate);
    ctx.endpoints.push_back({f.source, f.destination});
    link_lb.push_back(min_link_cost_path(idx, f.source, f.destination));
  }
  ctx.suffix_link_lb.assign(flows.size() + 1, 0.0);
  for (int d = static_cast<int>(flows.size()) - 1; d >= 0; --d) {
    ctx.suffix_link_lb[d] = ctx.suffix_link_lb[d + 1] + link_lb[d];
  }

  TrafficResult seed = heuristic_greedy_binpack(t, flows, mode);
  const TrafficSolution* seed_sol = std::get_if<TrafficSolution>(&seed);
  if (seed_sol) {
    ctx.has_seed = true;
    ctx.seed_bound = seed_sol->objective;
  }

  double root_lb;
  {
    Dfs probe(ctx, 1);
    root_lb = probe.lower_bound(0);
  }

  const int subtrees = static_cast<int>(ctx.candidates[0].size());
  std::vector<SubtreeResult> results(subtrees);
  const std::uint64_t per_subtree = budget.max_nodes / subtrees;
  const std::uint64_t remainder = budget.max_nodes % subtrees;

  for_each_index(policy, subtrees, [&](int s) {
    const std::uint64_t node_cap =
        per_subtree + (static_cast<std::uint64_t>(s) < remainder ? 1 : 0);
    if (node_cap == 0) {
      results[s].truncated = true;
      return;
    }
    Dfs dfs(ctx, node_cap);
    if (dfs.feasible(0, s)) {
      dfs.apply(0, s);
      const double lb = dfs.lower_bound(1);
      if (!(ctx.has_seed && obj_less(ctx.seed_bound, lb))) dfs.run(1);
    }
    results[s] = std::move(dfs.result);
  });

  bool truncated = false;
  std::uint64_t nodes = 0;
  int winner = -1;
  for (int s = 0; s < subtrees; ++s) {
    truncated = truncated || results[s].truncated;
    nodes += results[s].nodes;
    if (!results[s].found) continue;
    if (winner < 0 || obj_less(results[s].objective, results[winner].objective)) {
      winner = s;  // objective ties keep the smaller index = lex-least routing
    }
  }

  if (winner < 0 && !seed_sol) {
    if (!truncated && ctx.exhaustive) {
      Infeasible cert = std::get<Infeasible>(seed);
      cert.detail += "; no joint capacity-respecting routing exists";
      std::vector<FlowId> all;
      for (const Flow& f : flows) all.push_back(f.id);
      cert.blocked_flows = all;
      return cert;
    }
    return BudgetExhausted{nodes};
  }

  FlowRouting best_routing;
  if (winner >= 0) {
    for (std::size_t d = 0; d < flows.size(); ++d) {
      const int fi = ctx.flow_order[d];
      best_routing.assignment[flows[fi].id] = ctx.candidate_edges[d][results[winner].choice[d]];
    }
  }
  if (seed_sol) {
    const bool use_seed =
        winner < 0 || obj_less(seed_sol->objective, results[winner].objective) ||
        (obj_equal(seed_sol->objective, results[winner].objective) &&
         routing_lex_less(t, flows, seed_sol->routing, best_routing));
    if (use_seed) best_routing = seed_sol->routing;
  }

  TrafficSolution sol =
      make_solution(t, flows, std::move(best_routing), mode, Optimality::Heuristic, "incumbent");
  const bool complete = !truncated && ctx.exhaustive && winner >= 0;
  if (complete || obj_equal(sol.objective, root_lb)) {
    sol.optimality = Optimality::Exact;
    sol.method = "exact";
  }
  return sol;
}

}  // namespace sdnopt
