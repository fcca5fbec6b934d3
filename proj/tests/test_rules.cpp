#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <variant>

#include "sdnopt/paths.hpp"
#include "sdnopt/rules.hpp"
#include "test_util.hpp"

using namespace sdnopt;

namespace {

RuleSolution solution_of(RuleResult r) {
  REQUIRE(std::holds_alternative<RuleSolution>(r));
  return std::get<RuleSolution>(std::move(r));
}

// Greedy-adversarial fixture: edge 1-4 only fits one rate-6 flow. Greedy
// routes flow 0 on its shortest path [0,1,4], pushing flow 1 onto the
// 4-switch detour [1,5,6,4] (7 rules total); the optimum sends flow 0 the
// long way so flow 1 keeps the direct edge (6 rules).
struct GapInstance {
  Topology topology;
  std::vector<Flow> flows;
};

GapInstance gap_instance() {
  GapInstance g;
  for (int i = 0; i < 7; ++i) g.topology.switches.push_back({i, 1.0, 100, kNoPod, kNoLayer});
  g.topology.edges.push_back({0, 1, 10.0, 1.0});
  g.topology.edges.push_back({1, 4, 10.0, 1.0});
  g.topology.edges.push_back({0, 2, 10.0, 1.0});
  g.topology.edges.push_back({2, 3, 10.0, 1.0});
  g.topology.edges.push_back({3, 4, 10.0, 1.0});
  g.topology.edges.push_back({1, 5, 10.0, 1.0});
  g.topology.edges.push_back({5, 6, 10.0, 1.0});
  g.topology.edges.push_back({4, 6, 10.0, 1.0});
  for (int i = 0; i < 7; ++i) {
    g.topology.ingress_hosts[i] = i;
    g.topology.egress_hosts[i] = i;
  }
  g.flows = {{0, 0, 4, 6.0}, {1, 1, 4, 6.0}};
  return g;
}

int rule_count(const RuleSolution& sol) {
  int total = 0;
  for (const auto& row : sol.allocation.rules) {
    for (auto v : row) total += v ? 1 : 0;
  }
  return total;
}

}  // namespace

TEST_CASE("check_rule_constraints: missing rule on a path switch violates Eq. 18") {
  Topology t = test::line(3);
  std::vector<Flow> flows = {{0, 0, 2, 1.0}};
  RuleResult r = solve_exact_rules(t, flows);
  RuleAllocation alloc = solution_of(r).allocation;
  alloc.rules[1][0] = 0;  // drop the middle switch's rule
  ConstraintReport report = check_rule_constraints(t, flows, alloc);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].equation == 18);
  CHECK(report.violations[0].element == "switch 1");
}

TEST_CASE("check_rule_constraints: three flows through a G=2 switch violate Eq. 17") {
  Topology t = test::line(3);
  t.switches[1].rule_capacity = 2;
  std::vector<Flow> flows = {{0, 0, 2, 1.0}, {1, 0, 2, 1.0}, {2, 0, 2, 1.0}};
  // Build the only possible routing by hand and check it.
  RuleAllocation alloc;
  alloc.rules.assign(3, std::vector<std::uint8_t>(3, 1));
  alloc.link_state.assign(t.edges.size(), 1);
  for (const Flow& f : flows) alloc.routing.assignment[f.id] = {0, 1};
  ConstraintReport report = check_rule_constraints(t, flows, alloc);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].equation == 17);
  CHECK(report.violations[0].element == "switch 1");
}

TEST_CASE("check_rule_constraints: flow over an inactive link violates Eq. 20") {
  Topology t = test::line(3);
  std::vector<Flow> flows = {{0, 0, 2, 1.0}};
  RuleAllocation alloc = solution_of(solve_exact_rules(t, flows)).allocation;
  alloc.link_state[0] = 0;
  ConstraintReport report = check_rule_constraints(t, flows, alloc);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].equation == 20);
}

TEST_CASE("check_rule_constraints: missing egress host violates Eq. 21") {
  Topology t = test::line(3);
  std::vector<Flow> flows = {{0, 0, 2, 1.0}};
  RuleAllocation alloc = solution_of(solve_exact_rules(t, flows)).allocation;
  t.egress_hosts.erase(2);
  ConstraintReport report = check_rule_constraints(t, flows, alloc);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].equation == 21);
}

TEST_CASE("exact: a single flow on a 3-switch line installs 3 rules") {
  Topology t = test::line(3);
  std::vector<Flow> flows = {{0, 0, 2, 1.0}};
  const RuleSolution sol = solution_of(solve_exact_rules(t, flows));
  CHECK(sol.total_rules == 3);
  CHECK(sol.optimality == Optimality::Exact);
  CHECK(rule_count(sol) == sol.total_rules);
}

TEST_CASE("exact: two identical flows share the short route when tables allow") {
  Topology t = test::diamond_detour();
  std::vector<Flow> flows = {{0, 0, 2, 1.0}, {1, 0, 2, 1.0}};
  const RuleSolution sol = solution_of(solve_exact_rules(t, flows));
  CHECK(sol.total_rules == 6);
  test::RulesOracleResult oracle = test::rules_oracle(t, flows);
  CHECK(oracle.total_rules == 6);
}

TEST_CASE("exact: G=1 on the shared switch forces one flow onto the detour") {
  Topology t = test::diamond_detour();
  t.switches[1].rule_capacity = 1;
  std::vector<Flow> flows = {{0, 0, 2, 1.0}, {1, 0, 2, 1.0}};
  const RuleSolution sol = solution_of(solve_exact_rules(t, flows));
  CHECK(sol.total_rules == 7);
  CHECK(sol.optimality == Optimality::Exact);
  test::RulesOracleResult oracle = test::rules_oracle(t, flows);
  CHECK(oracle.total_rules == 7);
  CHECK(check_rule_constraints(t, flows, sol.allocation).ok());
}

TEST_CASE("heuristic matches exact on single-flow instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    test::RandomInstance ri = test::random_traffic_instance(seed, 6, 1, 10.0);
    for (auto& s : ri.topology.switches) s.rule_capacity = 10;
    RuleResult exact = solve_exact_rules(ri.topology, ri.flows);
    RuleResult heur = heuristic_shortest_admissible(ri.topology, ri.flows);
    REQUIRE(std::holds_alternative<RuleSolution>(exact) ==
            std::holds_alternative<RuleSolution>(heur));
    if (const auto* es = std::get_if<RuleSolution>(&exact)) {
      CHECK(es->total_rules == std::get<RuleSolution>(heur).total_rules);
    }
  }
}

TEST_CASE("heuristic handles the G=1 diamond like the exact solver") {
  Topology t = test::diamond_detour();
  t.switches[1].rule_capacity = 1;
  std::vector<Flow> flows = {{0, 0, 2, 1.0}, {1, 0, 2, 1.0}};
  const RuleSolution sol = solution_of(heuristic_shortest_admissible(t, flows));
  CHECK(sol.total_rules == 7);
  CHECK(check_rule_constraints(t, flows, sol.allocation).ok());
}

TEST_CASE("pinned adversarial instance: greedy trails exact but stays feasible") {
  GapInstance g = gap_instance();
  const RuleSolution exact = solution_of(solve_exact_rules(g.topology, g.flows));
  const RuleSolution greedy = solution_of(heuristic_shortest_admissible(g.topology, g.flows));
  test::RulesOracleResult oracle = test::rules_oracle(g.topology, g.flows);
  CHECK(exact.total_rules == oracle.total_rules);
  CHECK(exact.total_rules == 6);
  CHECK(greedy.total_rules == 7);
  CHECK(greedy.total_rules - exact.total_rules >= 1);
  CHECK(check_rule_constraints(g.topology, g.flows, greedy.allocation).ok());
}

TEST_CASE("exact matches the brute-force oracle on seeded instances") {
  for (std::uint64_t seed = 40; seed < 90; ++seed) {
    test::RandomInstance ri = test::random_traffic_instance(seed, 6, 3, 10.0);
    RuleResult got = solve_exact_rules(ri.topology, ri.flows);
    test::RulesOracleResult oracle = test::rules_oracle(ri.topology, ri.flows);
    if (oracle.feasible) {
      const RuleSolution sol = solution_of(got);
      CHECK(sol.optimality == Optimality::Exact);
      CHECK(sol.total_rules == oracle.total_rules);
      CHECK(check_rule_constraints(ri.topology, ri.flows, sol.allocation).ok());
      // the heuristic never beats the exact count
      RuleResult heur = heuristic_shortest_admissible(ri.topology, ri.flows);
      if (const auto* hs = std::get_if<RuleSolution>(&heur)) {
        CHECK(hs->total_rules >= sol.total_rules);
      }
    } else {
      CHECK(!std::holds_alternative<RuleSolution>(got));
    }
  }
}

TEST_CASE("relaxing table capacity to infinity never increases the exact total") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    test::RandomInstance ri = test::random_traffic_instance(seed, 6, 3, 10.0);
    RuleResult constrained = solve_exact_rules(ri.topology, ri.flows);
    Topology relaxed = ri.topology;
    for (auto& s : relaxed.switches) s.rule_capacity = 1'000'000;
    RuleResult unconstrained = solve_exact_rules(relaxed, ri.flows);
    const auto* cs = std::get_if<RuleSolution>(&constrained);
    const auto* us = std::get_if<RuleSolution>(&unconstrained);
    if (cs && us) CHECK(us->total_rules <= cs->total_rules);
  }
}

TEST_CASE("with ample tables and bandwidth the total equals hop-shortest switch counts") {
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    test::RandomInstance ri = test::random_traffic_instance(seed, 6, 3, 1000.0);
    for (auto& s : ri.topology.switches) s.rule_capacity = 100;
    const RuleSolution sol = solution_of(solve_exact_rules(ri.topology, ri.flows));
    TopologyIndex idx(ri.topology);
    int expected = 0;
    for (const Flow& f : ri.flows) expected += hop_distance(idx, f.source, f.destination) + 1;
    CHECK(sol.total_rules == expected);
  }
}

TEST_CASE("link_state is always the tight closure of the routing") {
  for (std::uint64_t seed = 400; seed < 420; ++seed) {
    test::RandomInstance ri = test::random_traffic_instance(seed, 6, 3, 10.0);
    RuleResult got = solve_exact_rules(ri.topology, ri.flows);
    const auto* sol = std::get_if<RuleSolution>(&got);
    if (!sol) continue;
    std::vector<std::uint8_t> used(ri.topology.edges.size(), 0);
    for (const auto& [fid, edges] : sol->allocation.routing.assignment) {
      (void)fid;
      for (EdgeId e : edges) used[e] = 1;
    }
    CHECK(sol->allocation.link_state == used);
  }
}

TEST_CASE("serial and parallel rule solving agree") {
  for (std::uint64_t seed = 500; seed < 515; ++seed) {
    test::RandomInstance ri = test::random_traffic_instance(seed, 6, 3, 10.0);
    RuleResult a = solve_exact_rules(ri.topology, ri.flows, {}, ExecPolicy::Serial);
    RuleResult b = solve_exact_rules(ri.topology, ri.flows, {}, ExecPolicy::Parallel);
    REQUIRE(a.index() == b.index());
    if (const auto* sa = std::get_if<RuleSolution>(&a)) {
      const auto& sb = std::get<RuleSolution>(b);
      CHECK(sa->total_rules == sb.total_rules);
      CHECK(sa->allocation.routing.assignment == sb.allocation.routing.assignment);
    }
  }
}

TEST_CASE("solver rejects flows without host attachments") {
  Topology t = test::line(3);
  t.ingress_hosts.clear();
  std::vector<Flow> flows = {{0, 0, 2, 1.0}};
  CHECK_THROWS_AS(solve_exact_rules(t, flows), std::invalid_argument);
}
