#pragma once
// Instance generators: fat-tree / ring / full-mesh topologies, seeded flow
// sets, and seeded placement instances. All generators are pure functions of
// their arguments (seed included) and reproduce bitwise across platforms;
// the PRNG is splitmix64, documented in docs/FORMATS.md.

#include <cstdint>
#include <vector>

#include "sdnopt/core.hpp"
#include "sdnopt/placement.hpp"

namespace sdnopt {

// splitmix64 (Steele, Lea, Flood / Vigna public-domain reference sequence).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) via 128-bit multiply-shift; n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

enum class TopologyKind { FatTree, Ring, FullMesh };

struct GeneratorSpec {
  TopologyKind kind = TopologyKind::FatTree;
  int size = 4;  // k for FatTree (even, >= 2); n for Ring/FullMesh (>= 3)
  double switch_watts = 1.0;
  double link_watts = 1.0;
  double bandwidth = 1.0e9;  // bytes/second
  int rule_capacity = 100;
  std::uint64_t seed = 0;
};

// FatTree(k): k^2/4 core + k^2/2 aggregation + k^2/2 edge switches with
// standard three-layer wiring, k^3/4 hosts attached to edge switches and
// registered as both ingress and egress; per-switch (pod, layer) metadata.
// Ring(n) and FullMesh(n) attach one host per switch. Throws
// std::invalid_argument on invalid sizes (e.g. odd k).
Topology generate_topology(const GeneratorSpec& spec);

enum class FlowLocality { IntraPod, CrossPod, Uniform };

// Seeded flow set; every rate is rate_fraction x the topology's minimum edge
// bandwidth. IntraPod/CrossPod require fat-tree pod metadata.
std::vector<Flow> generate_flows(const Topology& t, int count, double rate_fraction,
                                 FlowLocality locality, std::uint64_t seed);

// Seeded placement instance: unit PM capacities, VM demands in [0.1, 0.6],
// sparse symmetric traffic, ring-distance hop counts.
PlacementInstance generate_placement(int pm_count, int vm_count, int resource_count,
                                     std::uint64_t seed);

}  // namespace sdnopt
