#include "gts/moat_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gts {

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

MoatIndex::MoatIndex(int d, std::span<const double> coords) : d_(d) {
  if (d <= 0 || coords.empty()) throw std::invalid_argument("moat index needs at least one point");
  n_ = coords.size() / d;
  dims_.resize(d);
  for (int i = 0; i < d; ++i) {
    std::vector<double> v(n_);
    for (std::size_t p = 0; p < n_; ++p) v[p] = coords[p * d + i];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    const std::size_t m = v.size();

    // Cartesian tree over the distinct values
    std::vector<std::int32_t> stack;
    for (std::size_t k = 0; k < m; ++k) {
      std::int32_t id = static_cast<std::int32_t>(pool_.size());
      pool_.push_back({v[k], v[k], splitmix(seed_), -1, -1});
      std::int32_t last = -1;
      while (!stack.empty() && pool_[stack.back()].prio < pool_[id].prio) {
        last = stack.back();
        stack.pop_back();
      }
      pool_[id].left = last;
      if (!stack.empty()) pool_[stack.back()].right = id;
      stack.push_back(id);
    }
    Dim& dim = dims_[i];
    dim.roots.push_back(stack.front());

    std::vector<std::size_t> gap(m > 0 ? m - 1 : 0);
    std::iota(gap.begin(), gap.end(), 0);
    std::stable_sort(gap.begin(), gap.end(), [&](std::size_t a, std::size_t b) {
      return v[a + 1] - v[a] < v[b + 1] - v[b];
    });
    // lo[k] / hi[k]: extent of the group whose left / right end is k
    std::vector<std::size_t> lo(m), hi(m);
    std::iota(lo.begin(), lo.end(), 0);
    std::iota(hi.begin(), hi.end(), 0);
    for (std::size_t j : gap) {
      std::size_t a = lo[j], b = hi[j + 1];
      std::int32_t t = dim.roots.back();
      t = erase(t, v[a]);
      t = erase(t, v[j + 1]);
      std::int32_t id = static_cast<std::int32_t>(pool_.size());
      pool_.push_back({v[a], v[b], splitmix(seed_), -1, -1});
      t = insert(t, id);
      hi[a] = b;
      lo[b] = a;
      dim.events.push_back((v[j + 1] - v[j]) / 2);
      dim.roots.push_back(t);
    }
  }
}

std::int32_t MoatIndex::copy(std::int32_t t) {
  pool_.push_back(pool_[t]);
  return static_cast<std::int32_t>(pool_.size()) - 1;
}

std::int32_t MoatIndex::join(std::int32_t a, std::int32_t b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (pool_[a].prio > pool_[b].prio) {
    std::int32_t c = copy(a);
    std::int32_t r = join(pool_[c].right, b);
    pool_[c].right = r;
    return c;
  }
  std::int32_t c = copy(b);
  std::int32_t l = join(a, pool_[c].left);
  pool_[c].left = l;
  return c;
}

std::int32_t MoatIndex::erase(std::int32_t t, double key) {
  if (t < 0) throw std::logic_error("moat index: key not found");
  if (pool_[t].l == key) return join(pool_[t].left, pool_[t].right);
  std::int32_t c = copy(t);
  if (key < pool_[c].l) {
    std::int32_t l = erase(pool_[c].left, key);
    pool_[c].left = l;
  } else {
    std::int32_t r = erase(pool_[c].right, key);
    pool_[c].right = r;
  }
  return c;
}

std::int32_t MoatIndex::insert(std::int32_t t, std::int32_t node) {
  if (t < 0) return node;
  if (pool_[node].prio > pool_[t].prio) {
    // split t around the key, copying the two spines
    const double key = pool_[node].l;
    std::vector<std::pair<std::int32_t, bool>> trail;  // (copied node, went right)
    while (t >= 0) {
      std::int32_t c = copy(t);
      if (pool_[c].l < key) {
        trail.push_back({c, true});
        t = pool_[c].right;
      } else {
        trail.push_back({c, false});
        t = pool_[c].left;
      }
    }
    // rebuild: nodes less than key chain through right links, others through left links
    std::int32_t lroot = -1, rroot = -1, llast = -1, rlast = -1;
    for (auto [c, right] : trail) {
      if (right) {
        if (llast < 0) lroot = c; else pool_[llast].right = c;
        llast = c;
      } else {
        if (rlast < 0) rroot = c; else pool_[rlast].left = c;
        rlast = c;
      }
    }
    if (llast >= 0) pool_[llast].right = -1;
    if (rlast >= 0) pool_[rlast].left = -1;
    pool_[node].left = lroot;
    pool_[node].right = rroot;
    return node;
  }
  std::int32_t c = copy(t);
  if (pool_[node].l < pool_[c].l) {
    std::int32_t l = insert(pool_[c].left, node);
    pool_[c].left = l;
  } else {
    std::int32_t r = insert(pool_[c].right, node);
    pool_[c].right = r;
  }
  return c;
}

std::int32_t MoatIndex::version(int i, double lambda) const {
  const Dim& dim = dims_[i];
  std::size_t k = std::lower_bound(dim.events.begin(), dim.events.end(), lambda) - dim.events.begin();
  return dim.roots[k];
}

Placement MoatIndex::query(int i, double x, double lambda) const {
  if (!(lambda > 0)) return {false, x};
  const std::int32_t root = version(i, lambda);
  Placement out{false, x};
  // one step in exact arithmetic; rounding of l - lambda can land inside the
  // previous group's moat, in which case keep moving back
  while (true) {
    const Node* pred = nullptr;
    const Node* succ = nullptr;
    for (std::int32_t t = root; t >= 0;) {
      const Node& nd = pool_[t];
      if (nd.l <= x) {
        pred = &nd;
        t = nd.right;
      } else {
        succ = &nd;
        t = nd.left;
      }
    }
    double l;
    if (pred && (x <= pred->r || pred->r + lambda > x)) l = pred->l;
    else if (succ && succ->l - lambda < x) l = succ->l;
    else return out;
    // lambda below the spacing of doubles near l still has to clear l
    const double to = std::min(l - lambda, std::nextafter(l, -HUGE_VAL));
    out = {true, to};
    x = to;
  }
}

void MoatIndex::collect(std::int32_t t, std::vector<Group>& out) const {
  if (t < 0) return;
  collect(pool_[t].left, out);
  out.push_back({pool_[t].l, pool_[t].r});
  collect(pool_[t].right, out);
}

std::vector<MoatIndex::Group> MoatIndex::groups(int i, double lambda) const {
  std::vector<Group> out;
  collect(lambda > 0 ? version(i, lambda) : dims_[i].roots.front(), out);
  return out;
}

}  // namespace gts
