#include "gts/prefix_split_tree.hpp"

namespace gts {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

int PrefixSplitForest::make(double phi, int rep) {
  if (!(phi >= 0)) throw std::invalid_argument("prefix split tree: negative potential");
  Node n;
  n.phi = n.sum = phi;
  n.rep = rep;
  n.prio = mix(nodes_.size());
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

void PrefixSplitForest::pull(int x) {
  Node& n = nodes_[x];
  n.sum = n.phi;
  n.count = 1;
  if (n.left >= 0) n.sum += nodes_[n.left].sum, n.count += nodes_[n.left].count, nodes_[n.left].parent = x;
  if (n.right >= 0) n.sum += nodes_[n.right].sum, n.count += nodes_[n.right].count, nodes_[n.right].parent = x;
}

int PrefixSplitForest::join(int a, int b) {
  if (a < 0) return b;
  if (b < 0) return a;
  ++work_;
  if (nodes_[a].prio > nodes_[b].prio) {
    nodes_[a].right = join(nodes_[a].right, b);
    pull(a);
    return a;
  }
  nodes_[b].left = join(a, nodes_[b].left);
  pull(b);
  return b;
}

// node x goes left iff the potential before it is below t and the potential
// through it is at most t; a node with t strictly inside is split
void PrefixSplitForest::split(int x, double t, int& l, int& r) {
  if (x < 0) {
    l = r = -1;
    return;
  }
  ++work_;
  const double sl = nodes_[x].left >= 0 ? nodes_[nodes_[x].left].sum : 0;
  const double phi = nodes_[x].phi;
  if (t <= sl) {
    int a, b;
    split(nodes_[x].left, t, a, b);
    nodes_[x].left = b;
    pull(x);
    l = a;
    r = x;
  } else if (t < sl + phi) {
    const int tail = make(sl + phi - t, nodes_[x].rep);
    nodes_[x].phi = t - sl;
    const int right = nodes_[x].right;
    nodes_[x].right = -1;
    pull(x);
    l = x;
    r = join(tail, right);
  } else {
    int a, b;
    split(nodes_[x].right, t - sl - phi, a, b);
    nodes_[x].right = a;
    pull(x);
    l = x;
    r = b;
  }
  if (l >= 0) nodes_[l].parent = -1;
  if (r >= 0) nodes_[r].parent = -1;
}

int PrefixSplitForest::root_of(int x) const {
  while (nodes_[x].parent >= 0) x = nodes_[x].parent;
  return x;
}

int PrefixSplitForest::insert(Tree& s, double potential, int rep) {
  const int x = make(potential, rep);
  s.root = join(s.root, x);
  nodes_[s.root].parent = -1;
  return x;
}

void PrefixSplitForest::erase(Tree& s, int node) {
  if (node < 0 || node >= static_cast<int>(nodes_.size()) || s.root < 0 || root_of(node) != s.root)
    throw std::invalid_argument("prefix split tree: node does not belong to this tree");
  Node& n = nodes_[node];
  const int sub = join(n.left, n.right);
  const int p = n.parent;
  if (sub >= 0) nodes_[sub].parent = p;
  if (p < 0) {
    s.root = sub;
  } else {
    if (nodes_[p].left == node) nodes_[p].left = sub;
    else nodes_[p].right = sub;
    for (int y = p; y >= 0; y = nodes_[y].parent) {
      ++work_;
      pull(y);
    }
  }
  n.left = n.right = n.parent = -1;
}

void PrefixSplitForest::merge(Tree& s, Tree& other) {
  s.root = join(s.root, other.root);
  if (s.root >= 0) nodes_[s.root].parent = -1;
  other.root = -1;
}

PrefixSplitForest::Tree PrefixSplitForest::prefix_split(Tree& s, double t) {
  if (!(t >= 0) || t > potential(s)) throw std::invalid_argument("prefix split tree: split point out of range");
  Tree out;
  int l, r;
  split(s.root, t, l, r);
  out.root = l;
  s.root = r;
  return out;
}

void PrefixSplitForest::for_each(const Tree& s, const std::function<void(int)>& fn) const {
  std::vector<int> stack;
  int x = s.root;
  while (x >= 0 || !stack.empty()) {
    while (x >= 0) {
      stack.push_back(x);
      x = nodes_[x].left;
    }
    x = stack.back();
    stack.pop_back();
    fn(x);
    x = nodes_[x].right;
  }
}

}  // namespace gts
