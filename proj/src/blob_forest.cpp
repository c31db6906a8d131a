#include "gts/blob_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gts {

IntervalSet IntervalSet::complement(double range,
                                    std::vector<std::pair<double, double>> forbidden) {
  std::sort(forbidden.begin(), forbidden.end());
  IntervalSet s;
  double at = 0;
  for (auto [a, b] : forbidden) {
    if (b <= at) continue;
    if (a > at) s.iv_.push_back({at, std::min(a, range)});
    at = std::max(at, b);
    if (at >= range) break;
  }
  if (at < range) s.iv_.push_back({at, range});
  std::erase_if(s.iv_, [](const auto& x) { return !(x.second > x.first); });
  s.finish();
  return s;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  IntervalSet s;
  std::size_t i = 0, j = 0;
  while (i < iv_.size() && j < other.iv_.size()) {
    const double a = std::max(iv_[i].first, other.iv_[j].first);
    const double b = std::min(iv_[i].second, other.iv_[j].second);
    if (b > a) s.iv_.push_back({a, b});
    if (iv_[i].second < other.iv_[j].second) ++i; else ++j;
  }
  s.finish();
  return s;
}

void IntervalSet::finish() {
  prefix_.resize(iv_.size());
  double sum = 0;
  for (std::size_t k = 0; k < iv_.size(); ++k) {
    sum += iv_[k].second - iv_[k].first;
    prefix_[k] = sum;
  }
}

double IntervalSet::measure(double a, double b) const {
  if (!(b > a)) return 0;
  auto upto = [&](double x) {
    // measure of (-inf, x] ∩ S
    auto it = std::upper_bound(iv_.begin(), iv_.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    const std::size_t k = it - iv_.begin();
    if (k == 0) return 0.0;
    const double before = k >= 2 ? prefix_[k - 2] : 0.0;
    return before + std::min(x, iv_[k - 1].second) - iv_[k - 1].first;
  };
  return upto(b) - upto(a);
}

double BlobForest::containment_probability(int node, int cell) const {
  for (int k = cand_begin[node]; k < cand_begin[node + 1]; ++k)
    if (cand_cell[k] == cell) return cand_prob[k];
  throw std::invalid_argument("cell is not a candidate of this blob");
}

namespace {

struct Item {
  int node = -1;  // node index at the lower level, or -1 for a singleton cell
  int cell = -1;  // singleton cell
  int min_member = 0;
  int anchor = 0;  // cell containing min_member's blob one level down
  int size = 1;
};

struct Tmp {
  std::vector<double> lo, hi;  // node-major
  std::vector<int> home, min_member, size, parent;
  std::vector<int> cand_begin{0}, cand_cell;
  std::vector<double> cand_prob;
};

// Groups boxes until every group's projections are connected in every dimension.
std::vector<std::vector<int>> group_boxes(int d, const std::vector<double>& lo,
                                          const std::vector<double>& hi) {
  const int m = static_cast<int>(lo.size() / d);
  std::vector<std::vector<int>> out, stack;
  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  stack.push_back(std::move(all));
  while (!stack.empty()) {
    std::vector<int> g = std::move(stack.back());
    stack.pop_back();
    bool split = false;
    for (int i = 0; i < d && !split && g.size() > 1; ++i) {
      std::sort(g.begin(), g.end(), [&](int a, int b) {
        return lo[a * d + i] != lo[b * d + i] ? lo[a * d + i] < lo[b * d + i] : a < b;
      });
      std::vector<std::vector<int>> parts{{g[0]}};
      double reach = hi[g[0] * d + i];
      for (std::size_t k = 1; k < g.size(); ++k) {
        const int x = g[k];
        if (lo[x * d + i] > reach) parts.emplace_back();
        parts.back().push_back(x);
        reach = std::max(reach, hi[x * d + i]);
      }
      if (parts.size() > 1) {
        split = true;
        for (auto& p : parts) stack.push_back(std::move(p));
      }
    }
    if (!split) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

BlobForest build_blob_forest(const Quadtree& tree) {
  const int d = tree.d;
  const int H = tree.height;
  const std::size_t cells = tree.num_cells();
  const double nn = static_cast<double>(tree.n) * static_cast<double>(tree.n);
  BlobForest f;
  f.height = H;
  f.uniform = tree.uniform;
  f.pitch.resize(std::max(H, 1));
  f.shift_range.resize(f.pitch.size());
  f.extension.resize(f.pitch.size());
  f.legal.resize(f.pitch.size());
  f.legal_dim.resize(f.pitch.size());
  f.degenerate.assign(f.pitch.size(), 0);
  for (int l = 0; l < static_cast<int>(f.pitch.size()); ++l) {
    f.pitch[l] = std::ldexp(tree.root_side, -l);
    f.shift_range[l] = tree.uniform ? f.pitch[l] : f.pitch[l] / std::numbers::e;
    f.extension[l] = tree.uniform ? 0 : f.shift_range[l] / nn;
  }

  // cells of each level sorted by grid coordinates
  std::vector<int> lvl_begin(H + 2, 0);
  for (std::size_t c = 0; c < cells; ++c) ++lvl_begin[tree.level[c] + 1];
  for (int l = 0; l <= H; ++l) lvl_begin[l + 1] += lvl_begin[l];
  std::vector<int> by_grid(cells);
  std::iota(by_grid.begin(), by_grid.end(), 0);
  auto grid_less = [&](int a, int b) {
    return std::lexicographical_compare(tree.grid.begin() + a * d, tree.grid.begin() + a * d + d,
                                        tree.grid.begin() + b * d, tree.grid.begin() + b * d + d);
  };
  for (int l = 0; l <= H; ++l)
    std::sort(by_grid.begin() + lvl_begin[l], by_grid.begin() + lvl_begin[l + 1], grid_less);
  auto find_cell = [&](int l, const std::vector<std::int64_t>& g) {
    auto first = by_grid.begin() + lvl_begin[l], last = by_grid.begin() + lvl_begin[l + 1];
    auto it = std::lower_bound(first, last, g, [&](int a, const auto& x) {
      return std::lexicographical_compare(tree.grid.begin() + a * d, tree.grid.begin() + a * d + d,
                                          x.begin(), x.end());
    });
    if (it != last && std::equal(g.begin(), g.end(), tree.grid.begin() + *it * d)) return *it;
    return -1;
  };

  std::vector<Tmp> lv(std::max(H, 1));
  std::vector<std::pair<int, int>> up(cells, {-1, -1});  // (level, local node)
  std::vector<double> ilo, ihi;
  for (int l = H - 1; l >= 0; --l) {
    // items: blobs one level down plus the cells of level l + 1
    std::vector<Item> items;
    ilo.clear();
    ihi.clear();
    if (l + 1 < H) {
      const Tmp& below = lv[l + 1];
      for (std::size_t k = 0; k < below.home.size(); ++k) {
        items.push_back({static_cast<int>(k), -1, below.min_member[k], below.home[k], below.size[k]});
        ilo.insert(ilo.end(), below.lo.begin() + k * d, below.lo.begin() + k * d + d);
        ihi.insert(ihi.end(), below.hi.begin() + k * d, below.hi.begin() + k * d + d);
      }
    }
    for (int c = lvl_begin[l + 1]; c < lvl_begin[l + 2]; ++c) {
      items.push_back({-1, c, c, c, 1});
      auto x = tree.center(c);
      ilo.insert(ilo.end(), x.begin(), x.end());
      ihi.insert(ihi.end(), x.begin(), x.end());
    }
    const double ext = f.extension[l];
    std::vector<std::vector<int>> groups;
    if (tree.uniform) {
      groups.resize(items.size());
      for (std::size_t k = 0; k < items.size(); ++k) groups[k] = {static_cast<int>(k)};
    } else {
      std::vector<double> elo(ilo), ehi(ihi);
      for (double& x : elo) x -= ext;
      for (double& x : ehi) x += ext;
      groups = group_boxes(d, elo, ehi);
      // deterministic node order: by smallest member
      for (auto& g : groups)
        std::sort(g.begin(), g.end(), [&](int a, int b) { return items[a].min_member < items[b].min_member; });
      std::sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
        return items[a[0]].min_member < items[b[0]].min_member;
      });
    }
    Tmp& t = lv[l];
    for (const auto& g : groups) {
      const int id = static_cast<int>(t.home.size());
      std::vector<double> lo(d, HUGE_VAL), hi(d, -HUGE_VAL);
      int best = g[0], size = 0;
      for (int k : g) {
        for (int i = 0; i < d; ++i) {
          lo[i] = std::min(lo[i], ilo[k * d + i]);
          hi[i] = std::max(hi[i], ihi[k * d + i]);
        }
        if (items[k].min_member < items[best].min_member) best = k;
        size += items[k].size;
        if (items[k].node >= 0) lv[l + 1].parent[items[k].node] = id;
        else up[items[k].cell] = {l, id};
      }
      t.lo.insert(t.lo.end(), lo.begin(), lo.end());
      t.hi.insert(t.hi.end(), hi.begin(), hi.end());
      t.home.push_back(tree.parent[items[best].anchor]);
      t.min_member.push_back(items[best].min_member);
      t.size.push_back(size);
      t.parent.push_back(-1);
    }

    // legal shifts per dimension and their intersection
    const double h = f.pitch[l], R = f.shift_range[l];
    f.legal_dim[l].resize(d);
    for (int i = 0; i < d; ++i) {
      std::vector<std::pair<double, double>> forb;
      if (!tree.uniform) {
        const double c0 = tree.corner[i];
        for (std::size_t k = 0; k < t.home.size(); ++k) {
          const double a = t.lo[k * d + i] - ext - c0, b = t.hi[k * d + i] + ext - c0;
          const double kmin = std::floor((a - R) / h), kmax = std::ceil(b / h);
          for (double g = kmin; g <= kmax; ++g) {
            const double x = a - g * h, y = b - g * h;
            if (y > 0 && x < R) forb.push_back({x, y});
          }
        }
      }
      f.legal_dim[l][i] = IntervalSet::complement(R, std::move(forb));
    }
    f.legal[l] = f.legal_dim[l][0];
    for (int i = 1; i < d; ++i) f.legal[l] = f.legal[l].intersect(f.legal_dim[l][i]);
    const double total = f.legal[l].measure();
    f.degenerate[l] = !(total > 0);

    // candidate cells: sweep the shift across the points where the blob
    // crosses a grid line in some dimension
    std::vector<std::pair<double, int>> cross(d);
    std::vector<std::int64_t> k0(d), g(d);
    std::vector<std::pair<int, double>> cand;
    for (std::size_t k = 0; k < t.home.size(); ++k) {
      cand.clear();
      if (f.degenerate[l]) {
        cand.push_back({t.home[k], 1.0});
      } else {
        for (int i = 0; i < d; ++i) {
          const double z = (0.5 * (t.lo[k * d + i] + t.hi[k * d + i]) - tree.corner[i]) / h;
          k0[i] = static_cast<std::int64_t>(std::floor(z));
          cross[i] = {(z - std::floor(z)) * h, i};
        }
        std::sort(cross.begin(), cross.end());
        g = k0;
        double from = 0;
        for (int j = 0; j <= d; ++j) {
          const double to = j < d ? std::min(cross[j].first, R) : R;
          const double p = f.legal[l].measure(from, to) / total;
          if (p > 0) {
            int c = find_cell(l, g);
            if (c < 0) c = t.home[k];
            cand.push_back({c, p});
          }
          if (j < d) {
            if (cross[j].first >= R) break;
            --g[cross[j].second];
            from = to;
          }
        }
        std::sort(cand.begin(), cand.end());
        std::size_t w = 0;
        for (std::size_t r = 0; r < cand.size(); ++r) {
          if (w > 0 && cand[w - 1].first == cand[r].first) cand[w - 1].second += cand[r].second;
          else cand[w++] = cand[r];
        }
        cand.resize(w);
      }
      for (auto [c, p] : cand) {
        t.cand_cell.push_back(c);
        t.cand_prob.push_back(p);
      }
      t.cand_begin.push_back(static_cast<int>(t.cand_cell.size()));
    }
  }

  // concatenate levels in increasing order
  std::vector<int> offset(std::max(H, 1) + 1, 0);
  for (int l = 0; l < H; ++l) offset[l + 1] = offset[l] + static_cast<int>(lv[l].home.size());
  f.level_begin.assign(offset.begin(), offset.begin() + H + 1);
  if (H == 0) f.level_begin = {0};
  f.cand_begin.push_back(0);
  for (int l = 0; l < H; ++l) {
    const Tmp& t = lv[l];
    for (std::size_t k = 0; k < t.home.size(); ++k) {
      f.node_level.push_back(l);
      f.node_parent.push_back(l == 0 ? -1 : offset[l - 1] + t.parent[k]);
      f.node_home.push_back(t.home[k]);
      f.node_size.push_back(t.size[k]);
      for (int c = t.cand_begin[k]; c < t.cand_begin[k + 1]; ++c) {
        f.cand_cell.push_back(t.cand_cell[c]);
        f.cand_prob.push_back(t.cand_prob[c]);
      }
      f.cand_begin.push_back(static_cast<int>(f.cand_cell.size()));
    }
    f.node_lo.insert(f.node_lo.end(), t.lo.begin(), t.lo.end());
    f.node_hi.insert(f.node_hi.end(), t.hi.begin(), t.hi.end());
  }
  f.up_blob.assign(cells, -1);
  for (std::size_t c = 1; c < cells; ++c) f.up_blob[c] = offset[up[c].first] + up[c].second;
  return f;
}

}  // namespace gts
