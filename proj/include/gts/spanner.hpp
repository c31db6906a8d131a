#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gts/core.hpp"
#include "gts/quadtree.hpp"

namespace gts {

// Points keep their ids 0..n-1; the net point of cell c is vertex n + c.
// Point edges come first, then parent edges, then neighbor edges. Every edge
// is stored with tail id < head id.
struct Spanner {
  enum EdgeKind : std::uint8_t { PointEdge, ParentEdge, NeighborEdge };

  FlowGraph graph;
  std::size_t num_points = 0;
  int neighbor_radius = 0;          // grid cells per dimension
  std::vector<int> point_edge;      // -1 for points without a leaf
  std::vector<int> parent_edge;     // per cell, -1 at the root
  std::vector<EdgeKind> kind;
  std::vector<int> neighbor_begin;  // CSR over cells: incident neighbor edges
  std::vector<int> neighbor_edges;

  int net(int cell) const { return static_cast<int>(num_points) + cell; }
  int cell_of(int v) const { return v - static_cast<int>(num_points); }
  bool is_net(int v) const { return v >= static_cast<int>(num_points); }
  int find_edge(int u, int v) const;  // -1 if absent

  std::vector<std::uint64_t> edge_keys;  // sorted (min id, max id) packed
  std::vector<int> edge_ids;
};

Spanner build_spanner(const Quadtree& tree, std::span<const double> coords);

struct FlowProblem {
  std::vector<double> b;  // over spanner vertices, supported on net points
  FlowVector preroute;    // supplies pushed across the point edges
};

FlowProblem pose_flow_problem(const Spanner& g, std::span<const double> supplies);

}  // namespace gts
