#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gts {

constexpr double kFeasTol = 1e-9;

class InvalidInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Points in R^d with supplies summing to zero. Coincident inputs are merged
// on construction; origin() maps each stored point back to the first input
// index of its group.
class TransportInstance {
 public:
  TransportInstance() = default;
  TransportInstance(int d, std::vector<double> coords, std::vector<double> supplies);

  int dim() const { return d_; }
  std::size_t size() const { return supply_.size(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * d_, static_cast<std::size_t>(d_)};
  }
  double supply(std::size_t i) const { return supply_[i]; }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& supplies() const { return supply_; }
  const std::vector<std::size_t>& origin() const { return origin_; }
  std::size_t input_size() const { return input_size_; }

  double total_abs_supply() const;
  bool trivial() const;  // n <= 1 or all supplies zero
  bool integral() const;
  double spread() const;  // max / min pairwise distance; 1 for n <= 1

 private:
  int d_ = 1;
  std::vector<double> coords_;
  std::vector<double> supply_;
  std::vector<std::size_t> origin_;
  std::size_t input_size_ = 0;
};

double distance(std::span<const double> a, std::span<const double> b);

struct MapEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double amount = 0;
};

// Sparse nonnegative assignment from P+ to P-, kept sorted by (i, j).
struct TransportMap {
  std::vector<MapEntry> entries;
  void canonicalize();  // sort, merge duplicates, drop zeros
};

double total_cost(const TransportInstance& inst, const TransportMap& map);
double total_cost(int d, std::span<const double> coords, const TransportMap& map);

struct Violation {
  enum Kind { Row, Column, Negative, Index } kind;
  std::size_t index = 0;
  double magnitude = 0;
};

std::vector<Violation> validate_map(const TransportInstance& inst, const TransportMap& map,
                                    double rel_tol = kFeasTol);
// Against raw supplies, one per index; coincident points are not merged.
std::vector<Violation> validate_map(std::span<const double> supplies, const TransportMap& map,
                                    double rel_tol = kFeasTol);

// Geometric graph with a fixed orientation per edge. Flow vectors are indexed
// by edge; f < 0 means flow against the stored orientation.
struct FlowGraph {
  int d = 1;
  std::vector<double> coords;  // vertex-major
  std::vector<int> tail;
  std::vector<int> head;
  std::vector<double> length;

  std::size_t num_vertices() const { return coords.size() / d; }
  std::size_t num_edges() const { return tail.size(); }
  std::span<const double> vertex(std::size_t v) const {
    return {coords.data() + v * d, static_cast<std::size_t>(d)};
  }
  int add_vertex(std::span<const double> x);
  int add_edge(int u, int v);  // length from coordinates
};

using FlowVector = std::vector<double>;

std::vector<double> flow_divergence(const FlowGraph& g, const FlowVector& f);
double flow_cost(const FlowGraph& g, const FlowVector& f);

}  // namespace gts
