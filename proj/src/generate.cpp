#include "sdnopt/generate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sdnopt {

namespace {

void add_edge(Topology& t, SwitchId a, SwitchId b, const GeneratorSpec& spec) {
  EdgeSpec e;
  e.a = std::min(a, b);
  e.b = std::max(a, b);
  e.bandwidth = spec.bandwidth;
  e.power_cost = spec.link_watts;
  t.edges.push_back(e);
}

SwitchSpec make_switch(SwitchId id, const GeneratorSpec& spec, int pod, int layer) {
  SwitchSpec s;
  s.id = id;
  s.power_cost = spec.switch_watts;
  s.rule_capacity = spec.rule_capacity;
  s.pod = pod;
  s.layer = layer;
  return s;
}

Topology generate_fattree(const GeneratorSpec& spec) {
  const int k = spec.size;
  if (k < 2 || k % 2 != 0) {
    throw std::invalid_argument("fat-tree k must be even and >= 2, got " + std::to_string(k));
  }
  const int half = k / 2;
  const int cores = half * half;        // k^2/4
  const int aggs_per_pod = half;
  const int edges_per_pod = half;

  Topology t;
  // Ids: cores first, then per pod aggregation switches, then edge switches.
  for (int c = 0; c < cores; ++c) {
    t.switches.push_back(make_switch(c, spec, kNoPod, kLayerCore));
  }
  const int agg_base = cores;
  const int edge_base = cores + k * aggs_per_pod;
  for (int p = 0; p < k; ++p) {
    for (int i = 0; i < aggs_per_pod; ++i) {
      t.switches.push_back(make_switch(agg_base + p * aggs_per_pod + i, spec, p, kLayerAggregation));
    }
  }
  for (int p = 0; p < k; ++p) {
    for (int j = 0; j < edges_per_pod; ++j) {
      t.switches.push_back(make_switch(edge_base + p * edges_per_pod + j, spec, p, kLayerEdge));
    }
  }

  // Core (i, j) connects to aggregation switch #i of every pod.
  for (int i = 0; i < half; ++i) {
    for (int j = 0; j < half; ++j) {
      const int core = i * half + j;
      for (int p = 0; p < k; ++p) {
        add_edge(t, core, agg_base + p * aggs_per_pod + i, spec);
      }
    }
  }
  // Within a pod, aggregation-edge is complete bipartite.
  for (int p = 0; p < k; ++p) {
    for (int i = 0; i < aggs_per_pod; ++i) {
      for (int j = 0; j < edges_per_pod; ++j) {
        add_edge(t, agg_base + p * aggs_per_pod + i, edge_base + p * edges_per_pod + j, spec);
      }
    }
  }
  // k/2 hosts per edge switch; each host is both ingress and egress.
  int host = 0;
  for (int p = 0; p < k; ++p) {
    for (int j = 0; j < edges_per_pod; ++j) {
      for (int h = 0; h < half; ++h) {
        const SwitchId sw = edge_base + p * edges_per_pod + j;
        t.ingress_hosts[host] = sw;
        t.egress_hosts[host] = sw;
        ++host;
      }
    }
  }
  return t;
}

Topology generate_ring(const GeneratorSpec& spec) {
  const int n = spec.size;
  if (n < 3) throw std::invalid_argument("ring size must be >= 3, got " + std::to_string(n));
  Topology t;
  for (int i = 0; i < n; ++i) t.switches.push_back(make_switch(i, spec, kNoPod, kNoLayer));
  for (int i = 0; i < n; ++i) add_edge(t, i, (i + 1) % n, spec);
  for (int i = 0; i < n; ++i) {
    t.ingress_hosts[i] = i;
    t.egress_hosts[i] = i;
  }
  return t;
}

Topology generate_mesh(const GeneratorSpec& spec) {
  const int n = spec.size;
  if (n < 3) throw std::invalid_argument("mesh size must be >= 3, got " + std::to_string(n));
  Topology t;
  for (int i = 0; i < n; ++i) t.switches.push_back(make_switch(i, spec, kNoPod, kNoLayer));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) add_edge(t, i, j, spec);
  }
  for (int i = 0; i < n; ++i) {
    t.ingress_hosts[i] = i;
    t.egress_hosts[i] = i;
  }
  return t;
}

}  // namespace

Topology generate_topology(const GeneratorSpec& spec) {
  if (!(spec.switch_watts > 0) || !(spec.link_watts > 0) || !(spec.bandwidth > 0)) {
    throw std::invalid_argument("generator defaults must be > 0");
  }
  if (spec.rule_capacity < 1) throw std::invalid_argument("rule_capacity must be >= 1");
  Topology t;
  switch (spec.kind) {
    case TopologyKind::FatTree:
      t = generate_fattree(spec);
      break;
    case TopologyKind::Ring:
      t = generate_ring(spec);
      break;
    case TopologyKind::FullMesh:
      t = generate_mesh(spec);
      break;
  }
  // Canonical edge order; edge indices equal the serialized order.
  std::sort(t.edges.begin(), t.edges.end(), [](const EdgeSpec& x, const EdgeSpec& y) {
    return std::pair{x.a, x.b} < std::pair{y.a, y.b};
  });
  return t;
}

std::vector<Flow> generate_flows(const Topology& t, int count, double rate_fraction,
                                 FlowLocality locality, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("flow count must be >= 0");
  if (!(rate_fraction > 0.0) || rate_fraction > 1.0) {
    throw std::invalid_argument("rate_fraction must be in (0, 1]");
  }
  if (t.ingress_hosts.empty() || t.egress_hosts.empty()) {
    throw std::invalid_argument("topology has no hosts to attach flows to");
  }
  if (locality != FlowLocality::Uniform && !t.has_fattree_metadata()) {
    throw std::invalid_argument("pod-based locality requires fat-tree metadata");
  }

  if (count > 0 && t.edges.empty()) {
    throw std::invalid_argument("topology has no links to carry flows");
  }
  double min_bandwidth = t.edges.empty() ? 0.0 : t.edges.front().bandwidth;
  for (const auto& e : t.edges) min_bandwidth = std::min(min_bandwidth, e.bandwidth);
  const double rate = rate_fraction * min_bandwidth;

  std::vector<SwitchId> in_switches, eg_switches;
  for (const auto& [h, sw] : t.ingress_hosts) {
    (void)h;
    in_switches.push_back(sw);
  }
  for (const auto& [h, sw] : t.egress_hosts) {
    (void)h;
    eg_switches.push_back(sw);
  }

  auto pod_of = [&](SwitchId sw) { return t.switches[sw].pod; };

  // The rejection loop below must have at least one admissible pair.
  bool some_pair = false;
  for (SwitchId s : in_switches) {
    for (SwitchId d : eg_switches) {
      if (s == d) continue;
      if (locality == FlowLocality::IntraPod && pod_of(s) != pod_of(d)) continue;
      if (locality == FlowLocality::CrossPod && pod_of(s) == pod_of(d)) continue;
      some_pair = true;
      break;
    }
    if (some_pair) break;
  }
  if (count > 0 && !some_pair) {
    throw std::invalid_argument("no host pair satisfies the requested locality");
  }

  SplitMix64 rng(seed);
  std::vector<Flow> flows;
  flows.reserve(count);
  for (int i = 0; i < count; ++i) {
    SwitchId src = 0, dst = 0;
    for (;;) {
      src = in_switches[rng.next_below(in_switches.size())];
      dst = eg_switches[rng.next_below(eg_switches.size())];
      if (src == dst) continue;
      if (locality == FlowLocality::IntraPod && pod_of(src) != pod_of(dst)) continue;
      if (locality == FlowLocality::CrossPod && pod_of(src) == pod_of(dst)) continue;
      break;
    }
    flows.push_back({i, src, dst, rate});
  }
  return flows;
}

PlacementInstance generate_placement(int pm_count, int vm_count, int resource_count,
                                     std::uint64_t seed) {
  if (pm_count < 1 || vm_count < 0 || resource_count < 1) {
    throw std::invalid_argument("placement generator needs pms >= 1, vms >= 0, resources >= 1");
  }
  static const char* kNames[] = {"cpu", "memory", "bandwidth", "disk"};
  PlacementInstance inst;
  for (int r = 0; r < resource_count; ++r) {
    inst.resource_names.push_back(r < 4 ? kNames[r] : "resource" + std::to_string(r));
  }
  SplitMix64 rng(seed);
  inst.pm_resources.assign(pm_count, std::vector<double>(resource_count, 1.0));
  inst.vm_demands.assign(vm_count, std::vector<double>(resource_count, 0.0));
  for (int v = 0; v < vm_count; ++v) {
    for (int r = 0; r < resource_count; ++r) {
      // 0.1 .. 0.6 in steps of 0.01: exactly representable decimals keep
      // serialized instances byte-stable.
      inst.vm_demands[v][r] = 0.1 + 0.01 * static_cast<double>(rng.next_below(51));
    }
  }
  inst.vm_traffic.assign(vm_count, std::vector<double>(vm_count, 0.0));
  for (int u = 0; u < vm_count; ++u) {
    for (int v = 0; v < vm_count; ++v) {
      if (u == v) continue;
      if (rng.next_below(4) == 0) {  // sparse chatter
        inst.vm_traffic[u][v] = static_cast<double>(1 + rng.next_below(20));
      }
    }
  }
  inst.pm_hops.assign(pm_count, std::vector<double>(pm_count, 0.0));
  for (int p = 0; p < pm_count; ++p) {
    for (int q = 0; q < pm_count; ++q) {
      if (p == q) continue;
      const int d = std::min(std::abs(p - q), pm_count - std::abs(p - q));
      inst.pm_hops[p][q] = static_cast<double>(1 + d);  // ring distance
    }
  }
  return inst;
}

}  // namespace sdnopt
