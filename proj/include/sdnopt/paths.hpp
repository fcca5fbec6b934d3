#pragma once
// Deterministic path machinery shared by the solvers: adjacency index,
// lexicographically-least shortest paths, and Yen's k shortest loop-free
// path enumeration. "Shortest" is hop count; ties always break toward the
// lexicographically smaller switch-id sequence, which is what makes every
// solver's tie-breaking reproducible.

#include <cstdint>
#include <utility>
#include <vector>

#include "sdnopt/core.hpp"

namespace sdnopt {

// Switch sequence including both endpoints.
using Path = std::vector<SwitchId>;

struct TopologyIndex {
  explicit TopologyIndex(const Topology& t);

  const Topology* topo;
  // adj[v] = (neighbor, edge index), sorted by neighbor id.
  std::vector<std::vector<std::pair<SwitchId, EdgeId>>> adj;

  EdgeId edge_between(SwitchId a, SwitchId b) const;  // -1 if absent
  int switch_count() const { return static_cast<int>(adj.size()); }
};

// Lex-least hop-shortest path from src to dst avoiding banned nodes/edges.
// Returns an empty path when dst is unreachable. banned_nodes/banned_edges
// may be empty; src itself is never considered banned.
Path lex_shortest_path(const TopologyIndex& idx, SwitchId src, SwitchId dst,
                       const std::vector<std::uint8_t>& banned_nodes = {},
                       const std::vector<std::uint8_t>& banned_edges = {});

struct PathEnumeration {
  std::vector<Path> paths;  // ordered by (hop count, lex sequence)
  bool exhaustive = false;  // true iff these are ALL simple src->dst paths
};

// Yen's algorithm. Internally looks one path past k so `exhaustive` is
// reliable whenever fewer than k+1 simple paths exist.
PathEnumeration k_shortest_paths(const TopologyIndex& idx, SwitchId src, SwitchId dst, int k);

// Converts a switch sequence to the edge-index sequence the routing stores.
// Throws std::invalid_argument if two consecutive switches are not adjacent.
std::vector<EdgeId> path_edges(const TopologyIndex& idx, const Path& path);

// Hop distance (edge count) of the lex-shortest path, or -1 if unreachable.
int hop_distance(const TopologyIndex& idx, SwitchId src, SwitchId dst);

}  // namespace sdnopt
