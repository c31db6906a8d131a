#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gts/moat_index.hpp"

namespace gts {

// epsilon clamped to (0, 1/2], rounded down to a power of 1/2, then raised to
// the smallest power of 1/2 that is at least 1/n.
double effective_epsilon(double eps, std::size_t n);

struct ContractionRecord {
  int cell = -1;
  std::vector<std::size_t> members;  // local point indices, representative included
  std::size_t representative = 0;
  std::vector<double> sub_supply;    // aligned with members
  double merged_supply = 0;
};

// Warped quadtree (or the standard quadtree when uniform is set). Cells are
// stored breadth first; the children of a cell are contiguous.
struct Quadtree {
  int d = 1;
  std::size_t n = 0;  // points handed to the builder
  double epsilon = 0.5;
  bool uniform = false;
  int chain_length = 0;  // single-point ancestors that make a leaf
  int leaf_level = 0;    // uniform trees: depth of the single-point leaves

  std::vector<double> corner;  // lower corner of the root cell
  double root_side = 0;        // side of the root cell

  std::vector<double> lo, hi;        // cell boxes, cell-major
  std::vector<std::int64_t> grid;    // per-level grid coordinates, cell-major
  std::vector<int> level, parent, first_child, num_children, num_points;
  std::vector<char> leaf;
  std::vector<int> leaf_point;       // point index of a leaf, -1 otherwise

  std::vector<int> leaf_of_point;    // -1 for points removed by contraction
  std::vector<double> supply;        // supplies after contraction
  std::vector<ContractionRecord> contractions;
  std::size_t split_work = 0;        // points moved to the smaller side of a split
  int height = 0;

  std::size_t num_cells() const { return level.size(); }
  std::size_t num_active_points() const;
  double side(int c, int i) const { return hi[c * d + i] - lo[c * d + i]; }
  double min_side(int c) const;
  double max_side(int c) const;
  std::vector<double> center(int c) const;
  double level_lower(int l) const;  // root_side / (2^l e)
  double level_upper(int l) const;  // e root_side / 2^l
};

// Hyperplanes used to split box [lo, hi): the face midpoint per dimension,
// moved back past any moat of size side / (2 n^2) unless uniform.
std::vector<double> split_planes(const MoatIndex* index, std::span<const double> lo,
                                 std::span<const double> hi, std::size_t n, bool uniform);

// spread is only read by uniform trees, whose single-point cells keep
// splitting down to level ceil(lg(spread / epsilon)) + 1.
Quadtree build_quadtree(int d, std::span<const double> coords, std::span<const double> supplies,
                        double epsilon, bool uniform = false, double spread = 1);

}  // namespace gts
