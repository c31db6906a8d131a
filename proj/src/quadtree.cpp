#include "gts/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gts {

double effective_epsilon(double eps, std::size_t n) {
  if (!(eps > 0)) throw std::invalid_argument("epsilon must be positive");
  eps = std::min(eps, 0.5);
  double e = std::exp2(std::floor(std::log2(eps)));
  if (n >= 2) e = std::max(e, std::exp2(-std::floor(std::log2(static_cast<double>(n)))));
  return std::min(e, 0.5);
}

std::size_t Quadtree::num_active_points() const {
  return static_cast<std::size_t>(std::count_if(leaf_of_point.begin(), leaf_of_point.end(),
                                                [](int c) { return c >= 0; }));
}

double Quadtree::min_side(int c) const {
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) s = std::min(s, side(c, i));
  return s;
}

double Quadtree::max_side(int c) const {
  double s = 0;
  for (int i = 0; i < d; ++i) s = std::max(s, side(c, i));
  return s;
}

std::vector<double> Quadtree::center(int c) const {
  std::vector<double> x(d);
  for (int i = 0; i < d; ++i) x[i] = 0.5 * (lo[c * d + i] + hi[c * d + i]);
  return x;
}

double Quadtree::level_lower(int l) const {
  return std::ldexp(root_side, -l) / std::numbers::e;
}

double Quadtree::level_upper(int l) const {
  return std::ldexp(root_side, -l) * std::numbers::e;
}

std::vector<double> split_planes(const MoatIndex* index, std::span<const double> lo,
                                 std::span<const double> hi, std::size_t n, bool uniform) {
  const int d = static_cast<int>(lo.size());
  std::vector<double> planes(d);
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  for (int i = 0; i < d; ++i) {
    double x = 0.5 * (lo[i] + hi[i]);
    if (!uniform && index) {
      Placement p = index->query(i, x, (hi[i] - lo[i]) / (2 * nn));
      x = std::max(p.x, lo[i]);
    }
    planes[i] = x;
  }
  return planes;
}

namespace {

// d sorted doubly linked lists per point set
class SortedLists {
 public:
  struct Set {
    std::vector<int> head, tail;
    int count = 0;
  };

  SortedLists(int d, std::span<const double> coords, std::size_t n)
      : d_(d), coords_(coords), prev_(d * n), next_(d * n), rank_(d * n) {
    for (int i = 0; i < d; ++i) {
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return coords[a * d + i] < coords[b * d + i]; });
      for (std::size_t k = 0; k < n; ++k) rank_[order[k] * d + i] = static_cast<int>(k);
      link_all(i, order);
    }
  }

  Set initial(std::size_t n) {
    Set s;
    s.head.assign(d_, -1);
    s.tail.assign(d_, -1);
    s.count = static_cast<int>(n);
    for (int i = 0; i < d_; ++i) {
      for (std::size_t p = 0; p < n; ++p) {
        if (prev(p, i) < 0) s.head[i] = static_cast<int>(p);
        if (next(p, i) < 0) s.tail[i] = static_cast<int>(p);
      }
    }
    return s;
  }

  double x(int p, int i) const { return coords_[p * d_ + i]; }

  // Splits s by the plane x_i = at; points with x_i < at go to the low side.
  // Returns {low, high}; cost is proportional to the smaller side.
  std::pair<Set, Set> split(Set s, int i, double at, std::size_t& work) {
    Set empty;
    empty.head.assign(d_, -1);
    empty.tail.assign(d_, -1);
    if (s.count == 0) return {empty, empty};
    int a = s.head[i], b = s.tail[i];
    int na = 0, nb = 0;
    // walk from both ends until one side is exhausted
    bool low_small;
    while (true) {
      if (a < 0 || x(a, i) >= at) {
        low_small = true;
        break;
      }
      if (b < 0 || x(b, i) < at) {
        low_small = false;
        break;
      }
      a = next(a, i);
      ++na;
      b = prev(b, i);
      ++nb;
    }
    std::vector<int> small;
    if (low_small) {
      for (int p = s.head[i]; p >= 0 && x(p, i) < at; p = next(p, i)) small.push_back(p);
    } else {
      for (int p = s.tail[i]; p >= 0 && x(p, i) >= at; p = prev(p, i)) small.push_back(p);
      std::reverse(small.begin(), small.end());
    }
    work += small.size();
    for (int p : small)
      for (int j = 0; j < d_; ++j) unlink(s, p, j);
    Set t;
    t.head.assign(d_, -1);
    t.tail.assign(d_, -1);
    t.count = static_cast<int>(small.size());
    for (int j = 0; j < d_; ++j) {
      std::vector<int> order = small;
      std::sort(order.begin(), order.end(),
                [&](int p, int q) { return rank_[p * d_ + j] < rank_[q * d_ + j]; });
      link_all(j, order);
      if (!order.empty()) {
        t.head[j] = order.front();
        t.tail[j] = order.back();
      }
    }
    s.count -= t.count;
    if (low_small) return {t, s};
    return {s, t};
  }

  void unlink(Set& s, int p, int i) {
    int pp = prev(p, i), nx = next(p, i);
    if (pp >= 0) next_[pp * d_ + i] = nx; else s.head[i] = nx;
    if (nx >= 0) prev_[nx * d_ + i] = pp; else s.tail[i] = pp;
    prev_[p * d_ + i] = next_[p * d_ + i] = -1;
  }

  int prev(int p, int i) const { return prev_[p * d_ + i]; }
  int next(int p, int i) const { return next_[p * d_ + i]; }

  void link_all(int i, const std::vector<int>& order) {
    for (std::size_t k = 0; k < order.size(); ++k) {
      prev_[order[k] * d_ + i] = k ? order[k - 1] : -1;
      next_[order[k] * d_ + i] = k + 1 < order.size() ? order[k + 1] : -1;
    }
  }

 private:
  int d_;
  std::span<const double> coords_;
  std::vector<int> prev_, next_, rank_;
};

}  // namespace

Quadtree build_quadtree(int d, std::span<const double> coords, std::span<const double> supplies,
                        double epsilon, bool uniform, double spread) {
  Quadtree t;
  t.d = d;
  t.n = supplies.size();
  t.epsilon = epsilon;
  t.uniform = uniform;
  const std::size_t n = t.n;
  if (n == 0) throw std::invalid_argument("quadtree needs at least one point");
  const double nd = static_cast<double>(n);
  t.chain_length = std::max(1, static_cast<int>(std::ceil(std::log2(nd * nd / epsilon) - 1e-12)));
  t.leaf_level = static_cast<int>(std::ceil(std::log2(std::max(spread, 1.0) / epsilon) - 1e-12)) + 1;
  t.supply.assign(supplies.begin(), supplies.end());
  t.leaf_of_point.assign(n, -1);

  // root: twice the minimum bounding hypercube, same center
  std::vector<double> bmin(d, std::numeric_limits<double>::infinity()), bmax(d, -bmin[0]);
  for (std::size_t p = 0; p < n; ++p)
    for (int i = 0; i < d; ++i) {
      bmin[i] = std::min(bmin[i], coords[p * d + i]);
      bmax[i] = std::max(bmax[i], coords[p * d + i]);
    }
  double s = 0;
  for (int i = 0; i < d; ++i) s = std::max(s, bmax[i] - bmin[i]);
  if (!(s > 0)) s = 1;
  t.root_side = 2 * s;
  t.corner.resize(d);
  for (int i = 0; i < d; ++i) t.corner[i] = 0.5 * (bmin[i] + bmax[i]) - s;

  MoatIndex index;
  if (!uniform) index = MoatIndex(d, coords);
  SortedLists lists(d, coords, n);

  std::vector<SortedLists::Set> sets;
  std::vector<int> run;  // consecutive single-point ancestors including the cell
  auto add_cell = [&](const std::vector<double>& lo, const std::vector<double>& hi, int lvl,
                      int par, const std::vector<std::int64_t>& g, SortedLists::Set set) {
    t.lo.insert(t.lo.end(), lo.begin(), lo.end());
    t.hi.insert(t.hi.end(), hi.begin(), hi.end());
    t.grid.insert(t.grid.end(), g.begin(), g.end());
    t.level.push_back(lvl);
    t.parent.push_back(par);
    t.first_child.push_back(-1);
    t.num_children.push_back(0);
    t.num_points.push_back(set.count);
    t.leaf.push_back(0);
    t.leaf_point.push_back(-1);
    sets.push_back(std::move(set));
    run.push_back(0);
    t.height = std::max(t.height, lvl);
  };

  {
    std::vector<double> lo(t.corner), hi(d);
    for (int i = 0; i < d; ++i) hi[i] = lo[i] + t.root_side;
    add_cell(lo, hi, 0, -1, std::vector<std::int64_t>(d, 0), lists.initial(n));
  }

  const double n4 = nd * nd * nd * nd;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    SortedLists::Set set = std::move(sets[c]);
    const int par = t.parent[c];

    if (set.count == 1) {
      run[c] = (par >= 0 && t.num_points[par] == 1) ? run[par] + 1 : 1;
      const bool reaches_root = run[c] == t.level[c] + 1;
      const bool is_leaf = uniform ? (t.level[c] >= t.leaf_level || n == 1)
                                   : (run[c] >= t.chain_length || reaches_root);
      if (is_leaf) {
        t.leaf[c] = 1;
        t.leaf_point[c] = set.head[0];
        t.leaf_of_point[set.head[0]] = c;
        continue;
      }
    } else if (!uniform) {
      double spread = 0;
      for (int i = 0; i < d; ++i)
        spread = std::max(spread, lists.x(set.tail[i], i) - lists.x(set.head[i], i));
      if (spread < t.min_side(c) / n4) {
        ContractionRecord rec;
        rec.cell = c;
        // lexicographically smallest point among those with the least first coordinate
        int rep = set.head[0];
        for (int p = lists.next(rep, 0); p >= 0 && lists.x(p, 0) == lists.x(set.head[0], 0);
             p = lists.next(p, 0)) {
          if (std::lexicographical_compare(coords.begin() + p * d, coords.begin() + p * d + d,
                                           coords.begin() + rep * d, coords.begin() + rep * d + d))
            rep = p;
        }
        rec.representative = static_cast<std::size_t>(rep);
        double others = 0, total = 0;
        for (int p = set.head[0]; p >= 0; p = lists.next(p, 0)) rec.members.push_back(p);
        std::sort(rec.members.begin(), rec.members.end());
        for (std::size_t p : rec.members) {
          total += t.supply[p];
          if (static_cast<int>(p) != rep) others += t.supply[p];
        }
        for (std::size_t p : rec.members)
          rec.sub_supply.push_back(static_cast<int>(p) == rep ? -others : t.supply[p]);
        rec.merged_supply = total;
        t.supply[rep] = total;
        for (std::size_t p : rec.members) {
          if (static_cast<int>(p) == rep) continue;
          t.supply[p] = 0;
          for (int i = 0; i < d; ++i) lists.unlink(set, static_cast<int>(p), i);
        }
        set.count = 1;
        t.num_points[c] = 1;
        t.contractions.push_back(std::move(rec));
        run[c] = 1;
        if (run[c] >= t.chain_length) {
          t.leaf[c] = 1;
          t.leaf_point[c] = rep;
          t.leaf_of_point[rep] = c;
          continue;
        }
      }
    }

    std::vector<double> clo(t.lo.begin() + c * d, t.lo.begin() + c * d + d);
    std::vector<double> chi(t.hi.begin() + c * d, t.hi.begin() + c * d + d);
    std::vector<double> planes = split_planes(uniform ? nullptr : &index, clo, chi, n, uniform);

    // children indexed by a bit mask: bit i set means the high side of plane i
    std::vector<SortedLists::Set> parts{std::move(set)};
    for (int i = 0; i < d; ++i) {
      std::vector<SortedLists::Set> next(parts.size() * 2);
      for (std::size_t m = 0; m < parts.size(); ++m) {
        auto [low, high] = lists.split(std::move(parts[m]), i, planes[i], t.split_work);
        next[m] = std::move(low);
        next[m | (std::size_t{1} << i)] = std::move(high);
      }
      parts = std::move(next);
    }
    const int first = static_cast<int>(t.num_cells());
    int made = 0;
    for (std::size_t m = 0; m < parts.size(); ++m) {
      if (parts[m].count == 0) continue;
      std::vector<double> lo(d), hi(d);
      std::vector<std::int64_t> g(d);
      for (int i = 0; i < d; ++i) {
        const bool high = (m >> i) & 1;
        lo[i] = high ? planes[i] : clo[i];
        hi[i] = high ? chi[i] : planes[i];
        g[i] = 2 * t.grid[c * d + i] + (high ? 1 : 0);
      }
      add_cell(lo, hi, t.level[c] + 1, c, g, std::move(parts[m]));
      queue.push_back(first + made);
      ++made;
    }
    t.first_child[c] = first;
    t.num_children[c] = made;
  }
  return t;
}

}  // namespace gts
