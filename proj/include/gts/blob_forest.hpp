#pragma once

#include <span>
#include <vector>

#include "gts/quadtree.hpp"

namespace gts {

// Sorted disjoint half-open intervals with prefix sums of their lengths.
class IntervalSet {
 public:
  IntervalSet() = default;
  // [0, range) minus the union of the given open intervals
  static IntervalSet complement(double range, std::vector<std::pair<double, double>> forbidden);
  IntervalSet intersect(const IntervalSet& other) const;

  double measure() const { return prefix_.empty() ? 0 : prefix_.back(); }
  double measure(double a, double b) const;  // |[a, b] ∩ S|
  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }

 private:
  void finish();
  std::vector<std::pair<double, double>> iv_;
  std::vector<double> prefix_;  // prefix_[k]: total length of the first k + 1 intervals
};

// Blob nodes for every level, grouped by level in increasing order. A blob at
// level l holds net points (cells) of level > l; a cell of level l joins the
// blob node up_blob[cell] at level l - 1.
struct BlobForest {
  int height = 0;                  // tree height
  bool uniform = false;
  std::vector<double> pitch;       // h_l: grid pitch per level
  std::vector<double> shift_range; // R_l: shifts are drawn from [0, R_l)
  std::vector<double> extension;   // box extension per level
  std::vector<IntervalSet> legal;  // S_l, the intersection over dimensions
  std::vector<std::vector<IntervalSet>> legal_dim;  // S_{l,i}
  std::vector<char> degenerate;    // S_l has measure zero

  std::vector<int> level_begin;    // nodes of level l: [level_begin[l], level_begin[l + 1])
  std::vector<int> node_level;
  std::vector<int> node_parent;    // -1 at level 0
  std::vector<int> node_home;      // C_{l, blb}: level-l cell holding the blob
  std::vector<int> node_size;      // member count
  std::vector<double> node_lo, node_hi;  // minimum bounding box of members, node-major
  std::vector<int> cand_begin;     // CSR over nodes
  std::vector<int> cand_cell;
  std::vector<double> cand_prob;   // aggregated over softlinks
  std::vector<int> up_blob;        // per cell, -1 at the root

  std::size_t num_nodes() const { return node_level.size(); }
  double shift_measure(int level, int dim, double a, double b) const {
    return legal_dim[level][dim].measure(a, b);
  }
  // probability that the node's blob lies in the given cell; throws if the
  // cell is not a candidate
  double containment_probability(int node, int cell) const;
};

BlobForest build_blob_forest(const Quadtree& tree);

}  // namespace gts
