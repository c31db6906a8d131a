#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gts {

// Ordered sequences of weighted nodes stored as treaps in one shared pool.
// Each node carries a nonnegative potential and the vertex it represents.
class PrefixSplitForest {
 public:
  struct Tree {
    int root = -1;
  };

  int insert(Tree& s, double potential, int rep);  // appended at the end
  void erase(Tree& s, int node);                   // throws if node is not in s
  void merge(Tree& s, Tree& other);                // s := s ++ other, other emptied
  // Removes from s the prefix whose potential is exactly t and returns it.
  // The node straddling t is split in two; a boundary that falls exactly
  // between nodes splits nothing.
  Tree prefix_split(Tree& s, double t);

  double potential(const Tree& s) const { return s.root < 0 ? 0 : nodes_[s.root].sum; }
  double potential_of(int node) const { return nodes_[node].phi; }
  int rep_of(int node) const { return nodes_[node].rep; }
  bool empty(const Tree& s) const { return s.root < 0; }
  void for_each(const Tree& s, const std::function<void(int)>& fn) const;  // in order
  std::size_t size(const Tree& s) const { return s.root < 0 ? 0 : nodes_[s.root].count; }
  std::size_t work() const { return work_; }  // nodes visited so far

 private:
  struct Node {
    double phi = 0, sum = 0;
    int rep = -1;
    std::uint64_t prio = 0;
    int left = -1, right = -1, parent = -1;
    std::size_t count = 1;
  };
  int make(double phi, int rep);
  void pull(int x);
  int join(int a, int b);
  void split(int x, double t, int& l, int& r);
  int root_of(int x) const;

  std::vector<Node> nodes_;
  std::size_t work_ = 0;
};

}  // namespace gts
