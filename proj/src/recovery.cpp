#include "gts/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "gts/prefix_split_tree.hpp"

namespace gts {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

FlowVector acyclify(const FlowGraph& g, const FlowVector& f, ForestKind kind) {
  const int nv = static_cast<int>(g.num_vertices()), ne = static_cast<int>(g.num_edges());
  auto forest = kind == ForestKind::LinkCut ? make_link_cut_forest(nv, ne) : make_naive_forest(nv, ne);
  FlowVector out(ne, 0);
  std::vector<char> linked(ne, 0);
  for (int e = 0; e < ne; ++e) {
    double fe = f[e];
    if (fe == 0) continue;
    const int u = g.tail[e], v = g.head[e];
    if (!forest->connected(u, v)) {
      forest->link(e, u, v, fe, g.length[e]);
      linked[e] = 1;
      continue;
    }
    // cycle: the tree path from u to v, then e from v back to u
    const auto p = forest->path(u, v);
    const double h = -fe;  // flow of e from v to u
    const double slope = p.pos_len - p.neg_len + g.length[e] * (h > 0 ? 1 : -1);
    int blocker;
    double delta;
    if (slope <= 0) {
      // more flow along the path, less on e from u to v
      blocker = p.arg_neg;
      delta = p.min_neg;
      if (h < 0 && (blocker < 0 || fe <= delta)) blocker = e, delta = fe;
      forest->add_path(u, v, delta);
      fe -= delta;
    } else {
      blocker = p.arg_pos;
      delta = p.min_pos;
      if (h > 0 && (blocker < 0 || -fe <= delta)) blocker = e, delta = -fe;
      forest->add_path(u, v, -delta);
      fe += delta;
    }
    if (blocker == e) continue;
    forest->cut(blocker);
    linked[blocker] = 0;
    forest->link(e, u, v, fe, g.length[e]);
    linked[e] = 1;
  }
  for (int e = 0; e < ne; ++e)
    if (linked[e]) out[e] = forest->flow(e, g.tail[e]);
  return out;
}

FlowVector refit_forest_flow(const FlowGraph& g, const FlowVector& f, std::span<const double> b) {
  const std::size_t nv = g.num_vertices(), ne = g.num_edges();
  std::vector<std::vector<int>> adj(nv);
  for (std::size_t e = 0; e < ne; ++e)
    if (f[e] != 0) adj[g.tail[e]].push_back(static_cast<int>(e)), adj[g.head[e]].push_back(static_cast<int>(e));
  FlowVector out(ne, 0);
  std::vector<char> seen(nv, 0);
  std::vector<double> sub(b.begin(), b.end());
  std::vector<int> order, via(nv, -1);
  for (std::size_t r = 0; r < nv; ++r) {
    if (seen[r]) continue;
    order.clear();
    order.push_back(static_cast<int>(r));
    seen[r] = 1;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int x = order[k];
      for (int e : adj[x]) {
        const int y = g.tail[e] == x ? g.head[e] : g.tail[e];
        if (seen[y]) {
          if (e != via[x]) throw RecoveryError("refit_forest_flow: support has a cycle");
          continue;
        }
        seen[y] = 1;
        via[y] = e;
        order.push_back(y);
      }
    }
    // leaves first: the edge above x carries the surplus of x's subtree
    for (std::size_t k = order.size(); k-- > 1;) {
      const int x = order[k], e = via[x];
      const int up = g.tail[e] == x ? g.head[e] : g.tail[e];
      out[e] = g.tail[e] == x ? sub[x] : -sub[x];
      sub[up] += sub[x];
    }
  }
  return out;
}

TransportMap extract_map(const FlowGraph& g, const FlowVector& f, std::span<const double> b) {
  const std::size_t nv = g.num_vertices(), ne = g.num_edges();
  double mass = 0;
  for (double x : b) mass += std::abs(x);
  const double tol = 1e-9 * std::max(mass, 1e-300);

  UnionFind uf(nv);
  for (std::size_t e = 0; e < ne; ++e)
    if (f[e] != 0 && !uf.unite(g.tail[e], g.head[e])) throw RecoveryError("extract_map: support is not a forest");
  const auto div = flow_divergence(g, f);
  for (std::size_t v = 0; v < nv; ++v)
    if (std::abs(div[v] - b[v]) > tol) throw RecoveryError("extract_map: divergence does not match");

  // orient along positive flow
  std::vector<std::vector<std::pair<int, double>>> out(nv);  // (head, amount), by edge id
  std::vector<int> indeg(nv, 0);
  for (std::size_t e = 0; e < ne; ++e) {
    if (f[e] > 0) out[g.tail[e]].push_back({g.head[e], f[e]}), ++indeg[g.head[e]];
    if (f[e] < 0) out[g.head[e]].push_back({g.tail[e], -f[e]}), ++indeg[g.tail[e]];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t v = 0; v < nv; ++v)
    if (indeg[v] == 0) ready.push(static_cast<int>(v));

  PrefixSplitForest pst;
  std::vector<PrefixSplitForest::Tree> S(nv);
  TransportMap map;
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    // the supply of v comes from v itself, after whatever flows in
    if (b[v] > 0) pst.insert(S[v], b[v], v);
    for (auto [w, amount] : out[v]) {
      const double t = std::min(amount, pst.potential(S[v]));
      auto moved = pst.prefix_split(S[v], t);
      pst.merge(S[w], moved);
      if (--indeg[w] == 0) ready.push(w);
    }
    if (b[v] < 0) {
      pst.for_each(S[v], [&](int node) {
        if (pst.potential_of(node) > 0)
          map.entries.push_back({static_cast<std::size_t>(pst.rep_of(node)), static_cast<std::size_t>(v),
                                 pst.potential_of(node)});
      });
    }
  }
  map.canonicalize();
  return map;
}

}  // namespace gts
