#include "sdnopt/paths.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

namespace sdnopt {

TopologyIndex::TopologyIndex(const Topology& t) : topo(&t) {
  adj.resize(t.switches.size());
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    const auto& spec = t.edges[e];
    adj[spec.a].push_back({spec.b, static_cast<EdgeId>(e)});
    adj[spec.b].push_back({spec.a, static_cast<EdgeId>(e)});
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
}

EdgeId TopologyIndex::edge_between(SwitchId a, SwitchId b) const {
  const auto& list = adj[a];
  auto it = std::lower_bound(list.begin(), list.end(), std::make_pair(b, EdgeId{0}),
                             [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
  if (it != list.end() && it->first == b) return it->second;
  return -1;
}

namespace {

// BFS hop distances over the allowed subgraph; -1 for unreachable.
std::vector<int> bfs_distances(const TopologyIndex& idx, SwitchId from,
                               const std::vector<std::uint8_t>& banned_nodes,
                               const std::vector<std::uint8_t>& banned_edges) {
  std::vector<int> dist(idx.switch_count(), -1);
  std::deque<SwitchId> queue;
  dist[from] = 0;
  queue.push_back(from);
  while (!queue.empty()) {
    SwitchId v = queue.front();
    queue.pop_front();
    for (const auto& [u, e] : idx.adj[v]) {
      if (!banned_edges.empty() && banned_edges[e]) continue;
      if (!banned_nodes.empty() && banned_nodes[u]) continue;
      if (dist[u] == -1) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

}  // namespace

Path lex_shortest_path(const TopologyIndex& idx, SwitchId src, SwitchId dst,
                       const std::vector<std::uint8_t>& banned_nodes,
                       const std::vector<std::uint8_t>& banned_edges) {
  if (!banned_nodes.empty() && banned_nodes[dst]) return {};
  std::vector<int> from_src = bfs_distances(idx, src, banned_nodes, banned_edges);
  if (from_src[dst] == -1) return {};
  std::vector<int> to_dst = bfs_distances(idx, dst, banned_nodes, banned_edges);

  // Walk forward always taking the smallest neighbor that still lies on some
  // shortest path; prefix-greedy choice is exactly lexicographic order.
  const int total = from_src[dst];
  Path path{src};
  SwitchId cur = src;
  for (int d = 0; d < total; ++d) {
    SwitchId next = -1;
    for (const auto& [u, e] : idx.adj[cur]) {
      if (!banned_edges.empty() && banned_edges[e]) continue;
      if (!banned_nodes.empty() && banned_nodes[u]) continue;
      if (from_src[u] == d + 1 && to_dst[u] == total - d - 1) {
        next = u;
        break;  // adjacency sorted by id
      }
    }
    path.push_back(next);
    cur = next;
  }
  return path;
}

int hop_distance(const TopologyIndex& idx, SwitchId src, SwitchId dst) {
  std::vector<int> d = bfs_distances(idx, src, {}, {});
  return d[dst];
}

std::vector<EdgeId> path_edges(const TopologyIndex& idx, const Path& path) {
  std::vector<EdgeId> edges;
  edges.reserve(path.size() > 0 ? path.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    EdgeId e = idx.edge_between(path[i], path[i + 1]);
    if (e < 0) {
      throw std::invalid_argument("switches " + std::to_string(path[i]) + " and " +
                                  std::to_string(path[i + 1]) + " are not adjacent");
    }
    edges.push_back(e);
  }
  return edges;
}

namespace {

struct PathOrder {
  bool operator()(const Path& a, const Path& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace

PathEnumeration k_shortest_paths(const TopologyIndex& idx, SwitchId src, SwitchId dst, int k) {
  PathEnumeration out;
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  Path first = lex_shortest_path(idx, src, dst);
  if (first.empty()) {
    out.exhaustive = true;
    return out;
  }

  const int want = k + 1;  // look one past k to detect exhaustion
  std::vector<Path> found{first};
  std::set<Path, PathOrder> candidates;
  std::vector<std::uint8_t> banned_nodes(idx.switch_count(), 0);
  std::vector<std::uint8_t> banned_edges(idx.topo->edges.size(), 0);

  while (static_cast<int>(found.size()) < want) {
    const Path& prev = found.back();
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      SwitchId spur = prev[i];
      std::fill(banned_nodes.begin(), banned_nodes.end(), 0);
      std::fill(banned_edges.begin(), banned_edges.end(), 0);
      // Remove the next edge of every found path sharing this root prefix.
      for (const Path& p : found) {
        if (p.size() > i + 1 && std::equal(prev.begin(), prev.begin() + i + 1, p.begin())) {
          EdgeId e = idx.edge_between(p[i], p[i + 1]);
          if (e >= 0) banned_edges[e] = 1;
        }
      }
      for (std::size_t j = 0; j < i; ++j) banned_nodes[prev[j]] = 1;

      Path spur_path = lex_shortest_path(idx, spur, dst, banned_nodes, banned_edges);
      if (spur_path.empty()) continue;
      Path total(prev.begin(), prev.begin() + i);
      total.insert(total.end(), spur_path.begin(), spur_path.end());
      if (std::find(found.begin(), found.end(), total) == found.end()) {
        candidates.insert(std::move(total));
      }
    }
    if (candidates.empty()) break;
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }

  out.exhaustive = static_cast<int>(found.size()) <= k;
  if (static_cast<int>(found.size()) > k) found.resize(k);
  out.paths = std::move(found);
  return out;
}

}  // namespace sdnopt
