// sdnopt command line: generate instances, run the traffic / placement /
// rule-placement solvers, compare solvers across load factors, and verify
// solution reports against the constraint checkers.
//
// Exit codes: 0 success, 1 infeasible instance (certificate in the report),
// 2 malformed input, 3 budget exhausted without a proven optimum (the
// incumbent, if any, is still reported).

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sdnopt/core.hpp"
#include "sdnopt/generate.hpp"
#include "sdnopt/instance.hpp"
#include "sdnopt/paths.hpp"
#include "sdnopt/placement.hpp"
#include "sdnopt/rules.hpp"
#include "sdnopt/traffic.hpp"

using json = nlohmann::ordered_json;
using namespace sdnopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitBudget = 3;

struct CommonOpts {
  std::string instance_path;
  std::string mode = "per-flow-link";
  std::uint64_t budget_nodes = SolverBudget{}.max_nodes;
  int k_paths = SolverBudget{}.k_paths;
  bool deterministic = false;
  bool serial = false;
  std::string csv_path;
};

ObjectiveMode parse_mode(const std::string& name) {
  if (name == "per-flow-link") return ObjectiveMode::PerFlowLink;
  if (name == "per-active-link") return ObjectiveMode::PerActiveLink;
  throw CLI::ValidationError("--mode", "unknown objective mode: " + name);
}

ExecPolicy policy_of(const CommonOpts& o) {
  return o.serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

json instance_summary(const Instance& inst) {
  json j;
  j["digest"] = instance_digest(inst);
  j["switches"] = inst.topology.switches.size();
  j["edges"] = inst.topology.edges.size();
  j["flows"] = inst.flows.size();
  j["has_placement"] = inst.placement.has_value();
  return j;
}

json routing_json(const Topology& t, const std::vector<Flow>& flows,
                  const FlowRouting& routing) {
  json routes = json::object();
  std::vector<Flow> sorted = flows;
  std::sort(sorted.begin(), sorted.end(), [](const Flow& a, const Flow& b) { return a.id < b.id; });
  for (const auto& f : sorted) {
    auto it = routing.assignment.find(f.id);
    if (it == routing.assignment.end()) continue;
    routes[std::to_string(f.id)] = path_switches(t, f.source, it->second);
  }
  return routes;
}

json traffic_solution_json(const Topology& t, const std::vector<Flow>& flows,
                           const TrafficSolution& sol, ObjectiveMode mode) {
  json s;
  s["type"] = "traffic";
  s["mode"] = to_string(mode);
  s["switch_on"] = sol.state.switch_on;
  json links = json::array();
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    links.push_back({{"a", t.edges[e].a},
                     {"b", t.edges[e].b},
                     {"active", static_cast<int>(sol.state.link_active[e])},
                     {"used", static_cast<int>(sol.state.link_used[e])}});
  }
  s["links"] = links;
  s["routes"] = routing_json(t, flows, sol.routing);
  return s;
}

json infeasible_json(const Topology& t, const Infeasible& inf) {
  json j;
  j["blocked_flows"] = inf.blocked_flows;
  json edges = json::array();
  for (EdgeId e : inf.saturated_edges) edges.push_back(edge_name(t, e));
  j["saturated_edges"] = edges;
  j["detail"] = inf.detail;
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_csv(const std::string& path, const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write csv file: " + path);
  out << "load_factor,solver,savings_fraction\n";
  for (const auto& r : rows) out << r << "\n";
}

std::string optimality_name(Optimality o, const std::string& method) {
  return o == Optimality::Exact ? "exact" : "heuristic:" + method;
}

// ---------------------------------------------------------------------------
// solve-traffic

TrafficResult run_traffic_solver(const std::string& solver, const Topology& t,
                                 const std::vector<Flow>& flows, ObjectiveMode mode,
                                 const SolverBudget& budget, ExecPolicy policy) {
  if (solver == "exact") return solve_exact_traffic(t, flows, mode, budget, policy);
  if (solver == "greedy-binpack") return heuristic_greedy_binpack(t, flows, mode);
  if (solver == "shortest-first")
    return heuristic_path_first(t, flows, mode, FlowOrder::ShortestFirst);
  if (solver == "longest-first")
    return heuristic_path_first(t, flows, mode, FlowOrder::LongestFirst);
  if (solver == "smallest-demand-first")
    return heuristic_path_first(t, flows, mode, FlowOrder::SmallestDemandFirst);
  if (solver == "highest-demand-first")
    return heuristic_path_first(t, flows, mode, FlowOrder::HighestDemandFirst);
  if (solver == "topology-aware") return heuristic_fattree_topology_aware(t, flows, mode);
  throw CLI::ValidationError("--solver", "unknown traffic solver: " + solver);
}

int cmd_solve_traffic(const CommonOpts& opts, const std::string& solver) {
  Instance inst = parse_instance_file(opts.instance_path);
  const ObjectiveMode mode = parse_mode(opts.mode);
  const SolverBudget budget{opts.budget_nodes, opts.k_paths};

  json report;
  report["schema"] = "sdnopt-report/1";
  report["command"] = "solve-traffic";
  report["instance"] = instance_summary(inst);
  report["solver"] = solver;
  report["parameters"] = {{"mode", opts.mode},
                          {"budget_nodes", opts.budget_nodes},
                          {"k_paths", opts.k_paths},
                          {"policy", opts.serial ? "serial" : "parallel"}};

  const auto start = std::chrono::steady_clock::now();
  TrafficResult result =
      run_traffic_solver(solver, inst.topology, inst.flows, mode, budget, policy_of(opts));
  const double wall = elapsed_ms(start);

  int exit_code = kExitOk;
  if (const auto* sol = std::get_if<TrafficSolution>(&result)) {
    SavingsReport savings = savings_report(inst.topology, inst.flows, *sol, mode);
    report["objective"] = sol->objective;
    report["baseline"] = savings.baseline_watts;
    report["savings_fraction"] = savings.savings_fraction;
    report["optimality"] = optimality_name(sol->optimality, sol->method);
    report["per_layer_watts"] = savings.per_layer_watts;
    report["solution"] = traffic_solution_json(inst.topology, inst.flows, *sol, mode);
    if (sol->optimality == Optimality::Heuristic && sol->method == "incumbent") {
      exit_code = kExitBudget;
    }
    if (!opts.csv_path.empty()) {
      write_csv(opts.csv_path,
                {"1," + solver + "," + format_double(savings.savings_fraction)});
    }
  } else if (const auto* inf = std::get_if<Infeasible>(&result)) {
    report["infeasible"] = infeasible_json(inst.topology, *inf);
    exit_code = kExitInfeasible;
  } else {
    report["budget_exhausted"] = {
        {"nodes_explored", std::get<BudgetExhausted>(result).nodes_explored}};
    exit_code = kExitBudget;
  }
  if (!opts.deterministic) report["wall_ms"] = wall;
  emit(report);
  return exit_code;
}

// ---------------------------------------------------------------------------
// solve-placement

PlacementObjective parse_placement_objective(const std::string& name) {
  if (name == "pms") return PlacementObjective::pms_only();
  if (name == "lex") return PlacementObjective::lexicographic();
  if (name.rfind("weighted:", 0) == 0) {
    const std::string rest = name.substr(9);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw CLI::ValidationError("--objective", "weighted objective needs weighted:A,B");
    }
    try {
      const double a = std::stod(rest.substr(0, comma));
      const double b = std::stod(rest.substr(comma + 1));
      if (a < 0 || b < 0) throw std::invalid_argument("negative");
      return PlacementObjective::weighted(a, b);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--objective", "weighted objective needs weighted:A,B with A,B >= 0");
    }
  }
  throw CLI::ValidationError("--objective", "unknown placement objective: " + name);
}

int cmd_solve_placement(const CommonOpts& opts, const std::string& solver,
                        const std::string& objective_name) {
  Instance inst = parse_instance_file(opts.instance_path);
  if (!inst.placement) {
    std::cerr << "instance has no PLACEMENT section\n";
    return kExitMalformed;
  }
  const PlacementInstance& pinst = *inst.placement;
  const PlacementObjective objective = parse_placement_objective(objective_name);

  json report;
  report["schema"] = "sdnopt-report/1";
  report["command"] = "solve-placement";
  report["instance"] = instance_summary(inst);
  report["solver"] = solver;
  report["parameters"] = {{"objective", objective_name},
                          {"policy", opts.serial ? "serial" : "parallel"}};

  const auto start = std::chrono::steady_clock::now();
  PlacementResult result = solver == "exact" ? solve_exact_placement(pinst, objective, policy_of(opts))
                           : solver == "ffd" ? heuristic_ffd(pinst)
                           : solver == "bfd" ? heuristic_bfd(pinst)
                                             : throw CLI::ValidationError(
                                                   "--solver", "unknown placement solver: " + solver);
  const double wall = elapsed_ms(start);

  int exit_code = kExitOk;
  if (const auto* placement = std::get_if<Placement>(&result)) {
    PlacementScore score = score_placement(pinst, *placement);
    report["objective"] = {{"active_pms", score.active_pms}, {"network_cost", score.network_cost}};
    report["baseline"] = {{"active_pms", pinst.pm_count()}};
    report["savings_fraction"] =
        pinst.pm_count() > 0 ? 1.0 - static_cast<double>(score.active_pms) / pinst.pm_count() : 0.0;
    report["optimality"] = solver == "exact" ? "exact" : "heuristic:" + solver;
    json s;
    s["type"] = "placement";
    s["assignment"] = placement->assignment;
    s["pm_on"] = placement->pm_on;
    report["solution"] = s;
  } else {
    const auto& inf = std::get<PlacementInfeasible>(result);
    report["infeasible"] = {{"unplaceable_vms", inf.unplaceable_vms}, {"detail", inf.detail}};
    exit_code = kExitInfeasible;
  }
  if (!opts.deterministic) report["wall_ms"] = wall;
  emit(report);
  return exit_code;
}

// ---------------------------------------------------------------------------
// solve-rules

int cmd_solve_rules(const CommonOpts& opts, const std::string& solver) {
  Instance inst = parse_instance_file(opts.instance_path);
  const SolverBudget budget{opts.budget_nodes, opts.k_paths};

  json report;
  report["schema"] = "sdnopt-report/1";
  report["command"] = "solve-rules";
  report["instance"] = instance_summary(inst);
  report["solver"] = solver;
  report["parameters"] = {{"budget_nodes", opts.budget_nodes},
                          {"k_paths", opts.k_paths},
                          {"policy", opts.serial ? "serial" : "parallel"}};

  const auto start = std::chrono::steady_clock::now();
  RuleResult result = solver == "exact"
                          ? solve_exact_rules(inst.topology, inst.flows, budget, policy_of(opts))
                      : solver == "shortest-admissible"
                          ? heuristic_shortest_admissible(inst.topology, inst.flows)
                          : throw CLI::ValidationError("--solver",
                                                       "unknown rules solver: " + solver);
  const double wall = elapsed_ms(start);

  int exit_code = kExitOk;
  if (const auto* sol = std::get_if<RuleSolution>(&result)) {
    // Baseline: unconstrained hop-shortest routing, one rule per on-path switch.
    TopologyIndex idx(inst.topology);
    int baseline = 0;
    for (const Flow& f : inst.flows) {
      const int d = hop_distance(idx, f.source, f.destination);
      baseline += d >= 0 ? d + 1 : 0;
    }
    report["objective"] = {{"total_rules", sol->total_rules}};
    report["baseline"] = {{"total_rules", baseline}};
    report["savings_fraction"] =
        baseline > 0 ? 1.0 - static_cast<double>(sol->total_rules) / baseline : 0.0;
    report["optimality"] = optimality_name(sol->optimality, sol->method);
    json s;
    s["type"] = "rules";
    s["routes"] = routing_json(inst.topology, inst.flows, sol->allocation.routing);
    s["rules"] = sol->allocation.rules;
    s["link_active"] = sol->allocation.link_state;
    s["total_rules"] = sol->total_rules;
    report["solution"] = s;
    if (sol->optimality == Optimality::Heuristic && sol->method == "incumbent") {
      exit_code = kExitBudget;
    }
  } else if (const auto* inf = std::get_if<Infeasible>(&result)) {
    report["infeasible"] = infeasible_json(inst.topology, *inf);
    exit_code = kExitInfeasible;
  } else {
    report["budget_exhausted"] = {
        {"nodes_explored", std::get<BudgetExhausted>(result).nodes_explored}};
    exit_code = kExitBudget;
  }
  if (!opts.deterministic) report["wall_ms"] = wall;
  emit(report);
  return exit_code;
}

// ---------------------------------------------------------------------------
// compare

std::vector<std::string> traffic_solver_names(const Topology& t) {
  std::vector<std::string> names = {"exact", "greedy-binpack", "shortest-first", "longest-first",
                                    "smallest-demand-first", "highest-demand-first"};
  if (t.has_fattree_metadata()) names.push_back("topology-aware");
  return names;
}

int cmd_compare(const CommonOpts& opts, const std::string& family,
                const std::string& load_factors_arg) {
  Instance inst = parse_instance_file(opts.instance_path);
  const ObjectiveMode mode = parse_mode(opts.mode);
  const SolverBudget budget{opts.budget_nodes, opts.k_paths};

  std::vector<double> factors;
  {
    std::stringstream ss(load_factors_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) factors.push_back(std::stod(item));
    }
    if (factors.empty()) factors.push_back(1.0);
  }

  json report;
  report["schema"] = "sdnopt-compare/1";
  report["command"] = "compare";
  report["family"] = family;
  report["instance"] = instance_summary(inst);
  report["parameters"] = {{"mode", opts.mode},
                          {"budget_nodes", opts.budget_nodes},
                          {"k_paths", opts.k_paths},
                          {"policy", opts.serial ? "serial" : "parallel"}};
  json rows = json::array();
  std::vector<std::string> csv_rows;
  int exit_code = kExitOk;

  if (family == "traffic") {
    for (double factor : factors) {
      std::vector<Flow> flows = inst.flows;
      for (auto& f : flows) f.rate *= factor;
      double exact_objective = -1.0;
      for (const std::string& solver : traffic_solver_names(inst.topology)) {
        json row;
        row["load_factor"] = factor;
        row["solver"] = solver;
        TrafficResult result =
            run_traffic_solver(solver, inst.topology, flows, mode, budget, policy_of(opts));
        if (const auto* sol = std::get_if<TrafficSolution>(&result)) {
          SavingsReport savings = savings_report(inst.topology, flows, *sol, mode);
          row["objective"] = sol->objective;
          row["savings_fraction"] = savings.savings_fraction;
          row["optimality"] = optimality_name(sol->optimality, sol->method);
          if (solver == "exact") exact_objective = sol->objective;
          if (exact_objective > 0) {
            row["gap_vs_exact"] = sol->objective / exact_objective - 1.0;
          } else if (exact_objective == 0.0 && sol->objective == 0.0) {
            row["gap_vs_exact"] = 0.0;
          }
          csv_rows.push_back(format_double(factor) + "," + solver + "," +
                             format_double(savings.savings_fraction));
        } else if (const auto* inf = std::get_if<Infeasible>(&result)) {
          row["infeasible"] = infeasible_json(inst.topology, *inf);
          if (solver == "exact") exit_code = kExitInfeasible;
        } else {
          row["budget_exhausted"] = true;
        }
        rows.push_back(row);
      }
    }
  } else if (family == "placement") {
    if (!inst.placement) {
      std::cerr << "instance has no PLACEMENT section\n";
      return kExitMalformed;
    }
    const PlacementInstance& pinst = *inst.placement;
    int exact_pms = -1;
    for (const std::string solver : {"exact", "ffd", "bfd"}) {
      json row;
      row["load_factor"] = 1.0;
      row["solver"] = solver;
      PlacementResult result = solver == std::string("exact")
                                   ? solve_exact_placement(pinst, PlacementObjective::lexicographic(),
                                                           policy_of(opts))
                               : solver == std::string("ffd") ? heuristic_ffd(pinst)
                                                              : heuristic_bfd(pinst);
      if (const auto* p = std::get_if<Placement>(&result)) {
        PlacementScore score = score_placement(pinst, *p);
        row["objective"] = {{"active_pms", score.active_pms}, {"network_cost", score.network_cost}};
        if (solver == std::string("exact")) exact_pms = score.active_pms;
        if (exact_pms > 0) {
          row["gap_vs_exact"] = static_cast<double>(score.active_pms) / exact_pms - 1.0;
        }
        const double savings =
            pinst.pm_count() > 0 ? 1.0 - static_cast<double>(score.active_pms) / pinst.pm_count()
                                 : 0.0;
        row["savings_fraction"] = savings;
        csv_rows.push_back("1," + solver + "," + format_double(savings));
      } else {
        row["infeasible"] = std::get<PlacementInfeasible>(result).detail;
        if (solver == std::string("exact")) exit_code = kExitInfeasible;
      }
      rows.push_back(row);
    }
  } else if (family == "rules") {
    int exact_rules = -1;
    for (const std::string solver : {"exact", "shortest-admissible"}) {
      json row;
      row["load_factor"] = 1.0;
      row["solver"] = solver;
      RuleResult result = solver == std::string("exact")
                              ? solve_exact_rules(inst.topology, inst.flows, budget, policy_of(opts))
                              : heuristic_shortest_admissible(inst.topology, inst.flows);
      if (const auto* sol = std::get_if<RuleSolution>(&result)) {
        row["objective"] = {{"total_rules", sol->total_rules}};
        row["optimality"] = optimality_name(sol->optimality, sol->method);
        if (solver == std::string("exact")) exact_rules = sol->total_rules;
        if (exact_rules > 0) {
          row["gap_vs_exact"] = static_cast<double>(sol->total_rules) / exact_rules - 1.0;
        }
        csv_rows.push_back("1," + solver + ",0");
      } else if (const auto* inf = std::get_if<Infeasible>(&result)) {
        row["infeasible"] = infeasible_json(inst.topology, *inf);
        if (solver == std::string("exact")) exit_code = kExitInfeasible;
      } else {
        row["budget_exhausted"] = true;
      }
      rows.push_back(row);
    }
  } else {
    throw CLI::ValidationError("--family", "unknown family: " + family);
  }

  report["rows"] = rows;
  if (!opts.csv_path.empty()) write_csv(opts.csv_path, csv_rows);
  emit(report);
  return exit_code;
}

// ---------------------------------------------------------------------------
// verify

// Rebuilds the edge-sequence routing from reported switch sequences. Routes
// through non-adjacent switches become violations (the flow is left
// unrouted, which the checkers then flag as unreachable) rather than hard
// errors, so tampered reports still verify instead of failing to parse.
FlowRouting routing_from_json(const Topology& t, const json& routes,
                              ConstraintReport* conversion) {
  TopologyIndex idx(t);
  FlowRouting routing;
  for (const auto& [key, value] : routes.items()) {
    const FlowId id = std::stoi(key);
    Path path = value.get<Path>();
    bool ok = true;
    std::vector<EdgeId> edges;
    for (std::size_t i = 0; i + 1 < path.size() && ok; ++i) {
      const EdgeId e = idx.edge_between(path[i], path[i + 1]);
      if (e < 0) {
        conversion->violations.push_back(
            {3, "flow " + std::to_string(id),
             "route lists non-adjacent switches " + std::to_string(path[i]) + " and " +
                 std::to_string(path[i + 1])});
        ok = false;
      } else {
        edges.push_back(e);
      }
    }
    if (ok) routing.assignment[id] = std::move(edges);
  }
  return routing;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path) {
  Instance inst = parse_instance_file(instance_path);
  std::ifstream in(solution_path);
  if (!in) {
    std::cerr << "cannot open solution file: " << solution_path << "\n";
    return kExitMalformed;
  }
  json report = json::parse(in, nullptr, /*allow_exceptions=*/true);
  if (!report.contains("solution")) {
    std::cerr << "report has no 'solution' field\n";
    return kExitMalformed;
  }
  const json& sol = report["solution"];
  const std::string type = sol.value("type", "");

  ConstraintReport check;
  if (type == "traffic") {
    NetworkState state;
    state.switch_on = sol.at("switch_on").get<std::vector<std::uint8_t>>();
    for (const auto& link : sol.at("links")) {
      state.link_active.push_back(link.at("active").get<int>() ? 1 : 0);
      state.link_used.push_back(link.at("used").get<int>() ? 1 : 0);
    }
    FlowRouting routing = routing_from_json(inst.topology, sol.at("routes"), &check);
    ConstraintReport model = check_traffic_constraints(inst.topology, inst.flows, routing, state);
    check.violations.insert(check.violations.end(), model.violations.begin(),
                            model.violations.end());
  } else if (type == "placement") {
    if (!inst.placement) {
      std::cerr << "instance has no PLACEMENT section\n";
      return kExitMalformed;
    }
    Placement p;
    p.assignment = sol.at("assignment").get<std::vector<std::vector<std::uint8_t>>>();
    p.pm_on = sol.at("pm_on").get<std::vector<std::uint8_t>>();
    check = check_placement(*inst.placement, p);
  } else if (type == "rules") {
    RuleAllocation alloc;
    alloc.rules = sol.at("rules").get<std::vector<std::vector<std::uint8_t>>>();
    alloc.link_state = sol.at("link_active").get<std::vector<std::uint8_t>>();
    alloc.routing = routing_from_json(inst.topology, sol.at("routes"), &check);
    ConstraintReport model = check_rule_constraints(inst.topology, inst.flows, alloc);
    check.violations.insert(check.violations.end(), model.violations.begin(),
                            model.violations.end());
  } else {
    std::cerr << "unknown solution type: '" << type << "'\n";
    return kExitMalformed;
  }

  json out;
  out["schema"] = "sdnopt-verify/1";
  out["command"] = "verify";
  out["family"] = type;
  out["instance"] = instance_summary(inst);
  out["ok"] = check.ok();
  json violations = json::array();
  for (const auto& v : check.violations) {
    violations.push_back({{"equation", v.equation}, {"element", v.element}, {"detail", v.detail}});
  }
  out["violations"] = violations;
  emit(out);
  return check.ok() ? kExitOk : kExitInfeasible;
}

// ---------------------------------------------------------------------------
// gen

struct GenOpts {
  std::string kind = "fattree";
  int size = 4;
  double switch_watts = 1.0;
  double link_watts = 1.0;
  double bandwidth = 1.0e9;
  int rule_capacity = 100;
  std::uint64_t seed = 0;
  int flows = 0;
  double rate_fraction = 0.1;
  std::string locality = "uniform";
  int placement_pms = 0;
  int placement_vms = 0;
  int placement_resources = 2;
  std::string from_sndlib;
  std::string out;
};

int cmd_gen(const GenOpts& g, bool watts_given) {
  Instance inst;
  if (!g.from_sndlib.empty()) {
    if (!watts_given) {
      std::cerr << "SNDLib import requires explicit --switch-watts and --link-watts\n";
      return kExitMalformed;
    }
    inst = import_sndlib_file(g.from_sndlib, {g.switch_watts, g.link_watts, g.rule_capacity});
  } else {
    GeneratorSpec spec;
    spec.kind = g.kind == "fattree" ? TopologyKind::FatTree
                : g.kind == "ring"  ? TopologyKind::Ring
                : g.kind == "mesh"
                    ? TopologyKind::FullMesh
                    : throw CLI::ValidationError("--kind", "unknown topology kind: " + g.kind);
    spec.size = g.size;
    spec.switch_watts = g.switch_watts;
    spec.link_watts = g.link_watts;
    spec.bandwidth = g.bandwidth;
    spec.rule_capacity = g.rule_capacity;
    spec.seed = g.seed;
    inst.topology = generate_topology(spec);
    if (g.flows > 0) {
      FlowLocality locality = g.locality == "uniform"     ? FlowLocality::Uniform
                              : g.locality == "intra-pod" ? FlowLocality::IntraPod
                              : g.locality == "cross-pod"
                                  ? FlowLocality::CrossPod
                                  : throw CLI::ValidationError("--locality",
                                                               "unknown locality: " + g.locality);
      inst.flows = generate_flows(inst.topology, g.flows, g.rate_fraction, locality, g.seed);
    }
  }
  if (g.placement_pms > 0 || g.placement_vms > 0) {
    inst.placement =
        generate_placement(g.placement_pms, g.placement_vms, g.placement_resources, g.seed);
  }
  const std::string text = write_instance(inst);
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(g.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write instance file: " + g.out);
    out << text;
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_mode = true) {
  cmd->add_option("--instance", opts.instance_path, "instance file")->required();
  if (with_mode) {
    cmd->add_option("--mode", opts.mode, "objective mode: per-flow-link | per-active-link");
  }
  cmd->add_option("--budget-nodes", opts.budget_nodes, "branch-and-bound node budget");
  cmd->add_option("--k-paths", opts.k_paths, "candidate paths per flow");
  cmd->add_flag("--deterministic", opts.deterministic, "omit wall time for byte-stable reports");
  cmd->add_flag("--serial", opts.serial, "run the serial reference implementation");
  cmd->add_option("--csv", opts.csv_path, "write (load_factor, solver, savings) CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SDN energy-efficiency optimization models: traffic-aware routing, "
               "end-system-aware VM placement, and rule placement"};
  app.require_subcommand(1);

  GenOpts gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate or import an instance file");
  gen_cmd->add_option("--kind", gen.kind, "fattree | ring | mesh");
  gen_cmd->add_option("--size", gen.size, "k for fattree (even), n for ring/mesh");
  auto* sw_opt = gen_cmd->add_option("--switch-watts", gen.switch_watts, "per-switch power");
  auto* lw_opt = gen_cmd->add_option("--link-watts", gen.link_watts, "per-link power");
  gen_cmd->add_option("--bandwidth", gen.bandwidth, "per-link bandwidth (bytes/s)");
  gen_cmd->add_option("--rule-capacity", gen.rule_capacity, "per-switch rule capacity");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--flows", gen.flows, "number of flows to generate");
  gen_cmd->add_option("--rate-fraction", gen.rate_fraction,
                      "flow rate as a fraction of link bandwidth, in (0, 1]");
  gen_cmd->add_option("--locality", gen.locality, "uniform | intra-pod | cross-pod");
  gen_cmd->add_option("--placement-pms", gen.placement_pms, "placement: physical machines");
  gen_cmd->add_option("--placement-vms", gen.placement_vms, "placement: virtual machines");
  gen_cmd->add_option("--placement-resources", gen.placement_resources, "placement: resources");
  gen_cmd->add_option("--from-sndlib", gen.from_sndlib, "import an SNDLib plain-text file");
  gen_cmd->add_option("--out", gen.out, "output path (default: stdout)");

  CommonOpts traffic_opts;
  std::string traffic_solver = "exact";
  CLI::App* traffic_cmd = app.add_subcommand("solve-traffic", "traffic-aware optimization");
  add_common(traffic_cmd, traffic_opts);
  traffic_cmd->add_option("--solver", traffic_solver,
                          "exact | greedy-binpack | shortest-first | longest-first | "
                          "smallest-demand-first | highest-demand-first | topology-aware");

  CommonOpts placement_opts;
  std::string placement_solver = "exact";
  std::string placement_objective = "lex";
  CLI::App* placement_cmd =
      app.add_subcommand("solve-placement", "end-system-aware VM consolidation");
  add_common(placement_cmd, placement_opts, /*with_mode=*/false);
  placement_cmd->add_option("--solver", placement_solver, "exact | ffd | bfd");
  placement_cmd->add_option("--objective", placement_objective, "pms | lex | weighted:A,B");

  CommonOpts rules_opts;
  std::string rules_solver = "exact";
  CLI::App* rules_cmd = app.add_subcommand("solve-rules", "rule-placement optimization");
  add_common(rules_cmd, rules_opts, /*with_mode=*/false);
  rules_cmd->add_option("--solver", rules_solver, "exact | shortest-admissible");

  CommonOpts compare_opts;
  std::string compare_family = "traffic";
  std::string load_factors = "1";
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run exact + all heuristics and tabulate gaps");
  add_common(compare_cmd, compare_opts);
  compare_cmd->add_option("--family", compare_family, "traffic | placement | rules");
  compare_cmd->add_option("--load-factors", load_factors,
                          "comma-separated rate multipliers (traffic family)");

  std::string verify_instance, verify_solution;
  CLI::App* verify_cmd = app.add_subcommand("verify", "re-check a solution report");
  verify_cmd->add_option("--instance", verify_instance, "instance file")->required();
  verify_cmd->add_option("--solution", verify_solution, "report JSON from a solve command")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitMalformed;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, sw_opt->count() > 0 && lw_opt->count() > 0);
    if (traffic_cmd->parsed()) return cmd_solve_traffic(traffic_opts, traffic_solver);
    if (placement_cmd->parsed())
      return cmd_solve_placement(placement_opts, placement_solver, placement_objective);
    if (rules_cmd->parsed()) return cmd_solve_rules(rules_opts, rules_solver);
    if (compare_cmd->parsed()) return cmd_compare(compare_opts, compare_family, load_factors);
    if (verify_cmd->parsed()) return cmd_verify(verify_instance, verify_solution);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitMalformed;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitOk;
}
