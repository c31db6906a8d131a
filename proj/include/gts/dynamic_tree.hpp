#pragma once

#include <memory>
#include <vector>

namespace gts {

// A forest of weighted edges, each carrying a signed flow. Path queries and
// updates are phrased in the direction of travel from u to v.
class DynamicForest {
 public:
  struct PathInfo {
    double pos_len = 0;  // total length of edges whose flow runs with the path
    double neg_len = 0;  // total length of edges whose flow runs against it
    double min_pos = 0;  // smallest flow running with the path
    int arg_pos = -1;    // its edge, -1 if none
    double min_neg = 0;  // smallest magnitude running against the path
    int arg_neg = -1;
  };

  virtual ~DynamicForest() = default;
  virtual bool connected(int u, int v) = 0;
  virtual void link(int e, int u, int v, double flow_uv, double length) = 0;  // u, v not connected
  virtual void cut(int e) = 0;
  virtual PathInfo path(int u, int v) = 0;  // u != v, connected
  // delta more flow from u to v; no edge may change direction, so delta lies in
  // [-min_pos, min_neg] of the path, with zero flow blocking both ways
  virtual void add_path(int u, int v, double delta) = 0;
  virtual double flow(int e, int from) = 0;  // flow of e leaving endpoint from
};

// O(log n) amortized per operation.
std::unique_ptr<DynamicForest> make_link_cut_forest(int num_vertices, int num_edges);
// Walks the tree path; O(n) per operation. Kept as a cross-check.
std::unique_ptr<DynamicForest> make_naive_forest(int num_vertices, int num_edges);

}  // namespace gts
