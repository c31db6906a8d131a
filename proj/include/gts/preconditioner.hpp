#pragma once

#include <span>
#include <vector>

#include "gts/blob_forest.hpp"
#include "gts/spanner.hpp"

namespace gts {

// The preconditioner acts on the net part of the spanner: rows and columns are
// cells (net vertex n + c is row c) and flows live on the edges that follow the
// point edges. Point edges carry fixed supplies and are left out.
struct Preconditioner {
  const Quadtree* tree = nullptr;
  const Spanner* spanner = nullptr;
  const BlobForest* blobs = nullptr;
  double lambda = 1;  // greedy overcharge bound
  double kappa = 1;   // condition bound of B A
  std::vector<double> scale;  // per level, the nonzero magnitude of B
  int first_edge = 0;         // first spanner edge between net points

  std::size_t num_rows() const { return tree->num_cells(); }
  std::size_t num_cols() const { return spanner->graph.num_edges() - first_edge; }
  int edge(int k) const { return first_edge + k; }
  int tail(int k) const { return spanner->graph.tail[edge(k)] - static_cast<int>(spanner->num_points); }
  int head(int k) const { return spanner->graph.head[edge(k)] - static_cast<int>(spanner->num_points); }
  double length(int k) const { return spanner->graph.length[edge(k)]; }

  std::vector<double> divergence(std::span<const double> f) const;     // A f
  std::vector<double> divergence_t(std::span<const double> y) const;   // A^T y
  std::vector<double> apply_B(std::span<const double> b) const;
  std::vector<double> apply_Bt(std::span<const double> y) const;
  std::vector<double> apply_BA(std::span<const double> f) const { return apply_B(divergence(f)); }
  std::vector<double> apply_BAt(std::span<const double> y) const { return divergence_t(apply_Bt(y)); }
  double cost(std::span<const double> f) const;

  // Oblivious routing of a balanced divergence toward the root; A f = b.
  std::vector<double> greedy_route(std::span<const double> b) const;
};

// n_original is the size of the input before contraction. Uniform trees take
// the low-spread constants, which need the spread.
Preconditioner make_preconditioner(const Quadtree& tree, const Spanner& spanner,
                                   const BlobForest& blobs, std::size_t n_original,
                                   double spread = 1);

}  // namespace gts
