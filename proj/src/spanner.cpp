#include "gts/spanner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gts {

namespace {

std::uint64_t pack(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

int Spanner::find_edge(int u, int v) const {
  const std::uint64_t k = pack(u, v);
  auto it = std::lower_bound(edge_keys.begin(), edge_keys.end(), k);
  if (it == edge_keys.end() || *it != k) return -1;
  return edge_ids[it - edge_keys.begin()];
}

Spanner build_spanner(const Quadtree& tree, std::span<const double> coords) {
  const int d = tree.d;
  const std::size_t n = tree.n;
  const std::size_t cells = tree.num_cells();
  Spanner g;
  g.num_points = n;
  g.graph.d = d;
  g.graph.coords.assign(coords.begin(), coords.end());
  g.graph.coords.reserve((n + cells) * d);
  for (std::size_t c = 0; c < cells; ++c) {
    auto x = tree.center(static_cast<int>(c));
    g.graph.add_vertex(x);
  }
  g.neighbor_radius = std::max(1, static_cast<int>(std::floor(0.5 / tree.epsilon + 1e-9)));
  const int r = g.neighbor_radius;

  g.point_edge.assign(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    const int c = tree.leaf_of_point[p];
    if (c < 0) continue;
    g.point_edge[p] = g.graph.add_edge(static_cast<int>(p), g.net(c));
    g.kind.push_back(Spanner::PointEdge);
  }
  g.parent_edge.assign(cells, -1);
  for (std::size_t c = 1; c < cells; ++c) {
    g.parent_edge[c] = g.graph.add_edge(g.net(tree.parent[c]), g.net(static_cast<int>(c)));
    g.kind.push_back(Spanner::ParentEdge);
  }

  // cells of one level are contiguous in breadth-first order
  auto grid_less = [&](int a, int b) {
    return std::lexicographical_compare(tree.grid.begin() + a * d, tree.grid.begin() + a * d + d,
                                        tree.grid.begin() + b * d, tree.grid.begin() + b * d + d);
  };
  std::vector<std::vector<std::int64_t>> offsets;
  {
    const int side = 2 * r + 1;
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= side;
    for (std::int64_t k = 0; k < total; ++k) {
      std::vector<std::int64_t> off(d);
      std::int64_t t = k;
      for (int i = d - 1; i >= 0; --i) {
        off[i] = t % side - r;
        t /= side;
      }
      // keep offsets whose first nonzero component is positive
      auto nz = std::find_if(off.begin(), off.end(), [](std::int64_t x) { return x != 0; });
      if (nz != off.end() && *nz > 0) offsets.push_back(std::move(off));
    }
  }
  std::vector<std::pair<int, int>> pairs;
  std::size_t begin = 0;
  while (begin < cells) {
    std::size_t end = begin;
    while (end < cells && tree.level[end] == tree.level[begin]) ++end;
    const std::size_t k = end - begin;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), static_cast<int>(begin));
    if (k <= offsets.size()) {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
          const int ca = order[a], cb = order[b];
          bool near = true;
          for (int i = 0; i < d && near; ++i)
            near = std::abs(tree.grid[ca * d + i] - tree.grid[cb * d + i]) <= r;
          if (near) pairs.push_back({ca, cb});
        }
    } else {
      std::sort(order.begin(), order.end(), grid_less);
      std::vector<std::int64_t> key(d);
      for (int c : order) {
        for (const auto& off : offsets) {
          for (int i = 0; i < d; ++i) key[i] = tree.grid[c * d + i] + off[i];
          auto it = std::lower_bound(order.begin(), order.end(), key, [&](int a, const auto& x) {
            return std::lexicographical_compare(tree.grid.begin() + a * d,
                                                tree.grid.begin() + a * d + d, x.begin(), x.end());
          });
          if (it != order.end() &&
              std::equal(key.begin(), key.end(), tree.grid.begin() + *it * d))
            pairs.push_back({std::min(c, *it), std::max(c, *it)});
        }
      }
    }
    begin = end;
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> degree(cells, 0);
  for (auto [a, b] : pairs) {
    g.graph.add_edge(g.net(a), g.net(b));
    g.kind.push_back(Spanner::NeighborEdge);
    ++degree[a];
    ++degree[b];
  }
  g.neighbor_begin.assign(cells + 1, 0);
  for (std::size_t c = 0; c < cells; ++c) g.neighbor_begin[c + 1] = g.neighbor_begin[c] + degree[c];
  g.neighbor_edges.resize(g.neighbor_begin[cells]);
  std::vector<int> fill(g.neighbor_begin.begin(), g.neighbor_begin.end() - 1);
  for (std::size_t e = 0; e < g.graph.num_edges(); ++e) {
    if (g.kind[e] != Spanner::NeighborEdge) continue;
    g.neighbor_edges[fill[g.cell_of(g.graph.tail[e])]++] = static_cast<int>(e);
    g.neighbor_edges[fill[g.cell_of(g.graph.head[e])]++] = static_cast<int>(e);
  }

  const std::size_t m = g.graph.num_edges();
  std::vector<std::pair<std::uint64_t, int>> keyed(m);
  for (std::size_t e = 0; e < m; ++e)
    keyed[e] = {pack(g.graph.tail[e], g.graph.head[e]), static_cast<int>(e)};
  std::sort(keyed.begin(), keyed.end());
  g.edge_keys.resize(m);
  g.edge_ids.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    g.edge_keys[e] = keyed[e].first;
    g.edge_ids[e] = keyed[e].second;
  }
  return g;
}

FlowProblem pose_flow_problem(const Spanner& g, std::span<const double> supplies) {
  FlowProblem fp;
  fp.b.assign(g.graph.num_vertices(), 0);
  fp.preroute.assign(g.graph.num_edges(), 0);
  for (std::size_t p = 0; p < g.num_points; ++p) {
    const double mu = supplies[p];
    if (mu == 0) continue;
    const int e = g.point_edge[p];
    if (e < 0) throw std::logic_error("supply on a point without a leaf edge");
    fp.preroute[e] = mu;
    fp.b[g.graph.head[e]] += mu;
  }
  return fp;
}

}  // namespace gts
