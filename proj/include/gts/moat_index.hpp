#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gts {

struct Placement {
  bool shifted = false;
  double x = 0;
};

// Per-dimension persistent search trees over maximal point groups, one
// version per merge event. Moats are open intervals (p - lambda, p + lambda);
// two adjacent groups with gap g are merged in every version with lambda > g/2.
class MoatIndex {
 public:
  struct Group {
    double l, r;
  };

  MoatIndex() = default;
  MoatIndex(int d, std::span<const double> coords);  // coords vertex-major

  int dim() const { return d_; }
  std::size_t num_points() const { return n_; }
  Placement query(int i, double x, double lambda) const;

  // events of dimension i in nondecreasing order
  const std::vector<double>& events(int i) const { return dims_[i].events; }
  // groups of the version in force for lambda, sorted
  std::vector<Group> groups(int i, double lambda) const;
  std::size_t num_versions(int i) const { return dims_[i].roots.size(); }

 private:
  struct Node {
    double l, r;
    std::uint64_t prio;
    std::int32_t left, right;
  };
  struct Dim {
    std::vector<double> events;
    std::vector<std::int32_t> roots;  // roots[k]: after the first k events
  };

  std::int32_t copy(std::int32_t t);
  std::int32_t insert(std::int32_t t, std::int32_t node);
  std::int32_t erase(std::int32_t t, double key);
  std::int32_t join(std::int32_t a, std::int32_t b);
  std::int32_t version(int i, double lambda) const;
  void collect(std::int32_t t, std::vector<Group>& out) const;

  int d_ = 0;
  std::size_t n_ = 0;
  std::vector<Node> pool_;
  std::vector<Dim> dims_;
  std::uint64_t seed_ = 0x9e3779b97f4a7c15ULL;
};

}  // namespace gts
