#include "gts/preconditioner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gts {

Preconditioner make_preconditioner(const Quadtree& tree, const Spanner& spanner,
                                   const BlobForest& blobs, std::size_t n_original,
                                   double spread) {
  Preconditioner p;
  p.tree = &tree;
  p.spanner = &spanner;
  p.blobs = &blobs;
  const double d = tree.d, e2 = std::numbers::e * std::numbers::e;
  const double lg = std::max(1.0, std::log2(static_cast<double>(std::max<std::size_t>(n_original, 2))));
  if (tree.uniform) {
    p.kappa = 144 * d * d * std::max(1.0, std::log2(std::max(spread, 2.0)));
    p.lambda = p.kappa / (6 * std::sqrt(d));
  } else {
    p.lambda = 48 * std::pow(d, 1.5) * e2 * lg;
    p.kappa = 9 * std::sqrt(d) * e2 * p.lambda;
  }
  p.scale.resize(tree.height + 1);
  for (int l = 0; l <= tree.height; ++l)
    p.scale[l] = tree.uniform ? std::ldexp(tree.root_side, -l) / (2 * p.lambda)
                              : tree.level_lower(l) / (3 * p.lambda);
  int k = 0;
  while (k < static_cast<int>(spanner.kind.size()) && spanner.kind[k] == Spanner::PointEdge) ++k;
  p.first_edge = k;
  return p;
}

std::vector<double> Preconditioner::divergence(std::span<const double> f) const {
  std::vector<double> div(num_rows(), 0);
  for (std::size_t k = 0; k < num_cols(); ++k) {
    div[tail(static_cast<int>(k))] += f[k];
    div[head(static_cast<int>(k))] -= f[k];
  }
  return div;
}

std::vector<double> Preconditioner::divergence_t(std::span<const double> y) const {
  std::vector<double> out(num_cols());
  for (std::size_t k = 0; k < num_cols(); ++k)
    out[k] = y[tail(static_cast<int>(k))] - y[head(static_cast<int>(k))];
  return out;
}

double Preconditioner::cost(std::span<const double> f) const {
  double c = 0;
  for (std::size_t k = 0; k < num_cols(); ++k) c += std::abs(f[k]) * length(static_cast<int>(k));
  return c;
}

namespace {

// b_blb for every blob node: member cells one level down plus child blobs
std::vector<double> blob_totals(const Quadtree& t, const BlobForest& f, std::span<const double> b) {
  std::vector<double> val(f.num_nodes(), 0);
  for (std::size_t c = 1; c < t.num_cells(); ++c) val[f.up_blob[c]] += b[c];
  for (int v = static_cast<int>(f.num_nodes()) - 1; v >= 0; --v)
    if (f.node_parent[v] >= 0) val[f.node_parent[v]] += val[v];
  return val;
}

}  // namespace

std::vector<double> Preconditioner::apply_B(std::span<const double> b) const {
  const BlobForest& f = *blobs;
  auto val = blob_totals(*tree, f, b);
  std::vector<double> out(b.begin(), b.end());
  for (std::size_t v = 0; v < f.num_nodes(); ++v)
    for (int c = f.cand_begin[v]; c < f.cand_begin[v + 1]; ++c) out[f.cand_cell[c]] += f.cand_prob[c] * val[v];
  for (std::size_t c = 0; c < out.size(); ++c) out[c] *= scale[tree->level[c]];
  return out;
}

std::vector<double> Preconditioner::apply_Bt(std::span<const double> y) const {
  const BlobForest& f = *blobs;
  std::vector<double> val(f.num_nodes(), 0);
  for (std::size_t v = 0; v < f.num_nodes(); ++v) {
    double s = 0;
    for (int c = f.cand_begin[v]; c < f.cand_begin[v + 1]; ++c) s += f.cand_prob[c] * y[f.cand_cell[c]];
    val[v] = scale[f.node_level[v]] * s + (f.node_parent[v] >= 0 ? val[f.node_parent[v]] : 0);
  }
  std::vector<double> out(y.size());
  for (std::size_t c = 0; c < y.size(); ++c)
    out[c] = scale[tree->level[c]] * y[c] + (f.up_blob[c] >= 0 ? val[f.up_blob[c]] : 0);
  return out;
}

std::vector<double> Preconditioner::greedy_route(std::span<const double> b) const {
  const Quadtree& t = *tree;
  const BlobForest& f = *blobs;
  const Spanner& g = *spanner;
  double total = 0, mass = 0;
  for (double x : b) total += x, mass += std::abs(x);
  if (std::abs(total) > 1e-9 * std::max(mass, 1.0)) throw std::invalid_argument("greedy_route: unbalanced divergence");

  std::vector<double> flow(num_cols(), 0);
  const int np = static_cast<int>(g.num_points);
  auto push = [&](int e, int from, double a) {
    flow[e - first_edge] += g.graph.tail[e] == np + from ? a : -a;
  };
  auto tree_path = [&](int u, int v, double a) {
    while (u != v) {
      if (t.level[u] >= t.level[v]) {
        push(g.parent_edge[u], u, a);
        u = t.parent[u];
      } else {
        push(g.parent_edge[v], t.parent[v], a);
        v = t.parent[v];
      }
    }
  };

  // expected divergence per cell leaves through the parent edge
  auto val = blob_totals(t, f, b);
  std::vector<double> cell_div(b.begin(), b.end());
  for (std::size_t v = 0; v < f.num_nodes(); ++v)
    for (int c = f.cand_begin[v]; c < f.cand_begin[v + 1]; ++c) cell_div[f.cand_cell[c]] += f.cand_prob[c] * val[v];
  for (std::size_t c = 1; c < t.num_cells(); ++c)
    if (cell_div[c] != 0) push(g.parent_edge[c], static_cast<int>(c), cell_div[c]);

  // at the parent, each commodity spreads over the candidates of its next blob
  struct Move {
    int blob, at;
    double amount;
  };
  std::vector<Move> moves;
  moves.reserve(t.num_cells() + f.cand_cell.size());
  for (std::size_t c = 1; c < t.num_cells(); ++c)
    if (b[c] != 0) moves.push_back({f.up_blob[c], t.parent[c], b[c]});
  for (std::size_t v = 0; v < f.num_nodes(); ++v) {
    if (f.node_parent[v] < 0 || val[v] == 0) continue;
    for (int c = f.cand_begin[v]; c < f.cand_begin[v + 1]; ++c)
      moves.push_back({f.node_parent[v], t.parent[f.cand_cell[c]], f.cand_prob[c] * val[v]});
  }
  std::sort(moves.begin(), moves.end(),
            [](const Move& x, const Move& y) { return x.blob != y.blob ? x.blob < y.blob : x.at < y.at; });
  for (std::size_t i = 0; i < moves.size();) {
    const int w = moves[i].blob, at = moves[i].at;
    double a = 0;
    for (; i < moves.size() && moves[i].blob == w && moves[i].at == at; ++i) a += moves[i].amount;
    if (a == 0) continue;
    for (int c = f.cand_begin[w]; c < f.cand_begin[w + 1]; ++c) {
      const int to = f.cand_cell[c];
      if (to == at) continue;
      const double x = a * f.cand_prob[c];
      const int e = g.find_edge(np + at, np + to);
      if (e >= 0) push(e, at, x);
      else tree_path(at, to, x);
    }
  }
  return flow;
}

}  // namespace gts
