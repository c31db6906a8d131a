#pragma once

#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "gts/core.hpp"

namespace testsupport {

// Single-source shortest path distances on an undirected geometric graph.
inline std::vector<double> dijkstra(const gts::FlowGraph& g, int s) {
  const std::size_t nv = g.num_vertices();
  std::vector<std::vector<std::pair<int, double>>> adj(nv);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    adj[g.tail[e]].push_back({g.head[e], g.length[e]});
    adj[g.head[e]].push_back({g.tail[e], g.length[e]});
  }
  std::vector<double> dist(nv, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s] = 0;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (auto [v, w] : adj[u])
      if (du + w < dist[v]) {
        dist[v] = du + w;
        pq.push({dist[v], v});
      }
  }
  return dist;
}

}  // namespace testsupport
