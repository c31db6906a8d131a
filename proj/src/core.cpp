#include "gts/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gts {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

TransportInstance::TransportInstance(int d, std::vector<double> coords,
                                     std::vector<double> supplies)
    : d_(d) {
  if (d <= 0) throw InvalidInstance("dimension must be positive");
  if (coords.size() != supplies.size() * static_cast<std::size_t>(d))
    throw InvalidInstance("coordinate count does not match n*d");
  for (double c : coords)
    if (!std::isfinite(c)) throw InvalidInstance("non-finite coordinate");
  double sum = 0, abs_sum = 0;
  for (double s : supplies) {
    if (!std::isfinite(s)) throw InvalidInstance("non-finite supply");
    sum += s;
    abs_sum += std::abs(s);
  }
  if (std::abs(sum) > kFeasTol * abs_sum)
    throw InvalidInstance("supplies do not sum to zero");

  input_size_ = supplies.size();
  std::vector<std::size_t> order(input_size_);
  std::iota(order.begin(), order.end(), 0);
  auto at = [&](std::size_t i) { return coords.begin() + i * d; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(at(a), at(a) + d, at(b), at(b) + d);
  });

  // Group identical points; the group keeps its smallest input index.
  struct Group {
    std::size_t first;
    double supply;
    std::size_t members;
  };
  std::vector<Group> groups;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t e = k + 1;
    while (e < order.size() && std::equal(at(order[k]), at(order[k]) + d, at(order[e]))) ++e;
    Group g{order[k], 0, e - k};
    for (std::size_t t = k; t < e; ++t) {
      g.first = std::min(g.first, order[t]);
      g.supply += supplies[order[t]];
    }
    if (g.members == 1 || g.supply != 0) groups.push_back(g);
    k = e;
  }
  std::sort(groups.begin(), groups.end(),
            [](const Group& a, const Group& b) { return a.first < b.first; });
  for (const Group& g : groups) {
    coords_.insert(coords_.end(), at(g.first), at(g.first) + d);
    supply_.push_back(g.supply);
    origin_.push_back(g.first);
  }
}

double TransportInstance::total_abs_supply() const {
  double s = 0;
  for (double m : supply_) s += std::abs(m);
  return s;
}

bool TransportInstance::trivial() const {
  if (size() <= 1) return true;
  return std::all_of(supply_.begin(), supply_.end(), [](double m) { return m == 0; });
}

bool TransportInstance::integral() const {
  return std::all_of(supply_.begin(), supply_.end(),
                     [](double m) { return m == std::round(m); });
}

double TransportInstance::spread() const {
  const std::size_t n = size();
  if (n <= 1) return 1;
  double max_d = 0;
  if (n <= 2000) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) max_d = std::max(max_d, distance(point(a), point(b)));
  } else {
    // bounding-box diagonal: within a factor sqrt(d) of the diameter
    double s = 0;
    for (int i = 0; i < d_; ++i) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t a = 0; a < n; ++a) {
        lo = std::min(lo, coords_[a * d_ + i]);
        hi = std::max(hi, coords_[a * d_ + i]);
      }
      s += (hi - lo) * (hi - lo);
    }
    max_d = std::sqrt(s);
  }
  // closest pair by a sweep along the first axis
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return coords_[a * d_] < coords_[b * d_]; });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t t = k + 1; t < n; ++t) {
      if (coords_[order[t] * d_] - coords_[order[k] * d_] >= best) break;
      best = std::min(best, distance(point(order[k]), point(order[t])));
    }
  return max_d / best;
}

void TransportMap::canonicalize() {
  std::sort(entries.begin(), entries.end(), [](const MapEntry& a, const MapEntry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::vector<MapEntry> out;
  for (const MapEntry& e : entries) {
    if (!out.empty() && out.back().i == e.i && out.back().j == e.j)
      out.back().amount += e.amount;
    else
      out.push_back(e);
  }
  std::erase_if(out, [](const MapEntry& e) { return e.amount == 0; });
  entries = std::move(out);
}

double total_cost(int d, std::span<const double> coords, const TransportMap& map) {
  const std::size_t n = coords.size() / d;
  double c = 0;
  for (const MapEntry& e : map.entries) {
    if (e.i >= n || e.j >= n) throw InvalidMap("map index out of range");
    c += e.amount * distance(coords.subspan(e.i * d, d), coords.subspan(e.j * d, d));
  }
  return c;
}

double total_cost(const TransportInstance& inst, const TransportMap& map) {
  return total_cost(inst.dim(), inst.coords(), map);
}

std::vector<Violation> validate_map(std::span<const double> supplies, const TransportMap& map, double rel_tol) {
  std::vector<Violation> out;
  const std::size_t n = supplies.size();
  std::vector<double> row(n, 0), col(n, 0);
  for (std::size_t k = 0; k < map.entries.size(); ++k) {
    const MapEntry& e = map.entries[k];
    if (e.i >= n || e.j >= n || !(supplies[e.i] > 0) || !(supplies[e.j] < 0)) {
      out.push_back({Violation::Index, k, e.amount});
      continue;
    }
    if (e.amount < 0) out.push_back({Violation::Negative, k, -e.amount});
    row[e.i] += e.amount;
    col[e.j] += e.amount;
  }
  double mass = 0;
  for (double mu : supplies) mass += std::abs(mu);
  const double tol = rel_tol * std::max(mass, 1e-300);
  for (std::size_t v = 0; v < n; ++v) {
    const double mu = supplies[v];
    if (mu > 0 && std::abs(row[v] - mu) > tol) out.push_back({Violation::Row, v, std::abs(row[v] - mu)});
    if (mu < 0 && std::abs(col[v] + mu) > tol) out.push_back({Violation::Column, v, std::abs(col[v] + mu)});
  }
  return out;
}

std::vector<Violation> validate_map(const TransportInstance& inst, const TransportMap& map,
                                    double rel_tol) {
  return validate_map(inst.supplies(), map, rel_tol);
}

int FlowGraph::add_vertex(std::span<const double> x) {
  coords.insert(coords.end(), x.begin(), x.end());
  return static_cast<int>(num_vertices()) - 1;
}

int FlowGraph::add_edge(int u, int v) {
  tail.push_back(u);
  head.push_back(v);
  length.push_back(distance(vertex(u), vertex(v)));
  return static_cast<int>(tail.size()) - 1;
}

std::vector<double> flow_divergence(const FlowGraph& g, const FlowVector& f) {
  std::vector<double> div(g.num_vertices(), 0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    div[g.tail[e]] += f[e];
    div[g.head[e]] -= f[e];
  }
  return div;
}

double flow_cost(const FlowGraph& g, const FlowVector& f) {
  double c = 0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) c += std::abs(f[e]) * g.length[e];
  return c;
}

}  // namespace gts
