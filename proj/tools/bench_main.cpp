// Benchmark comparing the serial reference implementations against the
// OpenMP-parallel kernels on the same inputs. Asserts along the way that
// both policies produce identical results; prints one row per workload.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "sdnopt/generate.hpp"
#include "sdnopt/parallel.hpp"
#include "sdnopt/placement.hpp"
#include "sdnopt/rules.hpp"
#include "sdnopt/traffic.hpp"

using namespace sdnopt;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Row {
  std::string name;
  double serial_ms;
  double parallel_ms;
  bool identical;
};

template <typename Fn>
Row time_both(const std::string& name, Fn&& run) {
  const double t0 = now_ms();
  auto serial = run(ExecPolicy::Serial);
  const double t1 = now_ms();
  auto parallel = run(ExecPolicy::Parallel);
  const double t2 = now_ms();
  return {name, t1 - t0, t2 - t1, serial == parallel};
}

double traffic_objective(const TrafficResult& r) {
  if (const auto* sol = std::get_if<TrafficSolution>(&r)) return sol->objective;
  return -1.0;
}

}  // namespace

int main() {
  std::vector<Row> rows;

  {
    GeneratorSpec spec;
    spec.kind = TopologyKind::FatTree;
    spec.size = 6;
    Topology t = generate_topology(spec);
    std::vector<Flow> flows = generate_flows(t, 14, 0.3, FlowLocality::Uniform, 42);
    SolverBudget budget{8'000'000, 16};
    rows.push_back(time_both("traffic exact, fat-tree k=6, 14 flows", [&](ExecPolicy p) {
      TrafficResult r = solve_exact_traffic(t, flows, ObjectiveMode::PerActiveLink, budget, p);
      return traffic_objective(r);
    }));
  }

  {
    GeneratorSpec spec;
    spec.kind = TopologyKind::FullMesh;
    spec.size = 6;
    Topology t = generate_topology(spec);
    rows.push_back(time_both("traffic exact batch, 200 mesh-6 instances", [&](ExecPolicy p) {
      // Instance-level parallelism: each instance is solved serially inside.
      std::vector<double> objectives(200, 0.0);
      for_each_index(p, 200, [&](int i) {
        std::vector<Flow> flows =
            generate_flows(t, 4, 0.3, FlowLocality::Uniform, 1000 + static_cast<unsigned>(i));
        TrafficResult r =
            solve_exact_traffic(t, flows, ObjectiveMode::PerFlowLink, {}, ExecPolicy::Serial);
        objectives[i] = traffic_objective(r);
      });
      return objectives;
    }));
  }

  {
    PlacementInstance inst = generate_placement(6, 12, 2, 7);
    rows.push_back(time_both("placement exact, 6 PMs x 12 VMs", [&](ExecPolicy p) {
      PlacementResult r = solve_exact_placement(inst, PlacementObjective::lexicographic(), p);
      const auto* placement = std::get_if<Placement>(&r);
      return placement ? score_placement(inst, *placement).network_cost : -1.0;
    }));
  }

  {
    GeneratorSpec spec;
    spec.kind = TopologyKind::FatTree;
    spec.size = 4;
    spec.rule_capacity = 3;
    Topology t = generate_topology(spec);
    std::vector<Flow> flows = generate_flows(t, 10, 0.2, FlowLocality::Uniform, 11);
    SolverBudget budget{4'000'000, 16};
    rows.push_back(time_both("rules exact, fat-tree k=4, 10 flows, G=3", [&](ExecPolicy p) {
      RuleResult r = solve_exact_rules(t, flows, budget, p);
      const auto* sol = std::get_if<RuleSolution>(&r);
      return sol ? sol->total_rules : -1;
    }));
  }

  std::printf("%-48s %12s %12s %9s %s\n", "workload", "serial ms", "parallel ms", "speedup",
              "identical");
  bool all_identical = true;
  for (const Row& r : rows) {
    all_identical = all_identical && r.identical;
    std::printf("%-48s %12.1f %12.1f %8.2fx %s\n", r.name.c_str(), r.serial_ms, r.parallel_ms,
                r.parallel_ms > 0 ? r.serial_ms / r.parallel_ms : 0.0,
                r.identical ? "yes" : "NO");
  }
  std::printf("threads available: %d\n", max_threads());
  return all_identical ? EXIT_SUCCESS : EXIT_FAILURE;
}
