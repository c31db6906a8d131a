#include "gts/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

namespace gts {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

InstanceData read_instance(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() {
    while (std::getline(in, line)) {
      ++lineno;
      const auto k = line.find_first_not_of(" \t\r");
      if (k != std::string::npos && line[k] != '#') return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) {
    throw ParseError("line " + std::to_string(lineno) + ": " + what);
  };
  if (!next()) throw ParseError("empty input");
  long long n = -1, d = -1;
  {
    std::istringstream h(line);
    std::string extra;
    if (!(h >> n >> d) || (h >> extra)) fail("expected header \"n d\"");
  }
  if (n < 0 || d < 1 || d > 16) fail("bad header values");
  InstanceData out;
  out.d = static_cast<int>(d);
  out.coords.reserve(static_cast<std::size_t>(n * d));
  out.supplies.reserve(static_cast<std::size_t>(n));
  for (long long p = 0; p < n; ++p) {
    if (!next()) fail("expected " + std::to_string(n) + " points, found " + std::to_string(p));
    std::istringstream r(line);
    double v;
    std::vector<double> vals;
    while (r >> v) vals.push_back(v);
    if (!r.eof()) fail("not a number");
    if (vals.size() != static_cast<std::size_t>(d + 1)) fail("expected " + std::to_string(d + 1) + " values");
    for (double x : vals)
      if (!std::isfinite(x)) fail("non-finite value");
    out.coords.insert(out.coords.end(), vals.begin(), vals.end() - 1);
    out.supplies.push_back(vals.back());
  }
  if (next()) fail("unexpected trailing data");
  double sum = 0, mass = 0;
  for (double s : out.supplies) sum += s, mass += std::abs(s);
  if (std::abs(sum) > kFeasTol * mass) throw ParseError("supplies do not sum to zero (sum " + fmt(sum) + ")");
  return out;
}

void write_instance(std::ostream& out, const InstanceData& inst) {
  out << inst.size() << ' ' << inst.d << '\n';
  for (std::size_t p = 0; p < inst.size(); ++p) {
    for (int i = 0; i < inst.d; ++i) out << fmt(inst.coords[p * inst.d + i]) << ' ';
    out << fmt(inst.supplies[p]) << '\n';
  }
}

TransportMap read_map(std::istream& in) {
  TransportMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto k = line.find_first_not_of(" \t\r");
    if (k == std::string::npos || line[k] == '#') continue;
    std::istringstream r(line);
    long long i, j;
    double a;
    std::string extra;
    if (!(r >> i >> j >> a) || (r >> extra) || i < 0 || j < 0 || !std::isfinite(a))
      throw ParseError("line " + std::to_string(lineno) + ": expected \"i j amount\"");
    map.entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), a});
  }
  return map;
}

void write_map(std::ostream& out, const TransportMap& map, double cost) {
  for (const auto& e : map.entries) out << e.i << ' ' << e.j << ' ' << fmt(e.amount) << '\n';
  out << "# cost " << fmt(cost) << '\n';
}

TransportMap to_input_indices(const InstanceData& data, const TransportInstance& inst, const TransportMap& map) {
  const int d = data.d;
  std::map<std::vector<double>, std::vector<std::size_t>> groups;
  for (std::size_t p = 0; p < data.size(); ++p)
    groups[std::vector<double>(data.coords.begin() + p * d, data.coords.begin() + (p + 1) * d)].push_back(p);

  TransportMap out;
  // what each input point still has to send (> 0) or receive (< 0)
  std::vector<double> left(data.supplies);
  std::vector<std::vector<std::size_t>> members(inst.size());
  for (auto& [x, ids] : groups) {
    // pair opposite supplies in place
    std::vector<std::size_t> pos, neg;
    for (std::size_t p : ids) (left[p] > 0 ? pos : neg).push_back(p);
    for (std::size_t a = 0, b = 0; a < pos.size() && b < neg.size();) {
      const double t = std::min(left[pos[a]], -left[neg[b]]);
      if (t > 0) out.entries.push_back({pos[a], neg[b], t});
      left[pos[a]] -= t;
      left[neg[b]] += t;
      if (left[pos[a]] <= 0) ++a;
      if (left[neg[b]] >= 0) ++b;
    }
  }
  std::map<std::vector<double>, std::size_t> stored;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    const auto x = inst.point(k);
    stored[std::vector<double>(x.begin(), x.end())] = k;
  }
  for (auto& [x, ids] : groups) {
    const auto it = stored.find(x);
    if (it == stored.end()) continue;
    for (std::size_t p : ids)
      if (left[p] != 0) members[it->second].push_back(p);
  }

  // split each entry across the members at both ends, in index order
  auto take = [&](std::size_t k, std::size_t& cursor, double want, double sign, auto&& emit) {
    auto& ms = members[k];
    while (want > 0 && cursor < ms.size()) {
      const std::size_t p = ms[cursor];
      const double have = sign * left[p];
      const bool last = cursor + 1 == ms.size();
      const double t = last ? want : std::min(want, have);
      if (t > 0) emit(p, t);
      left[p] -= sign * t;
      want -= t;
      if (!last && sign * left[p] <= 0) ++cursor;
    }
  };
  std::vector<std::size_t> cur(inst.size(), 0);
  std::vector<MapEntry> half;  // (input source, stored sink)
  for (const auto& e : map.entries)
    take(e.i, cur[e.i], e.amount, 1, [&](std::size_t p, double t) { half.push_back({p, e.j, t}); });
  std::stable_sort(half.begin(), half.end(), [](const MapEntry& a, const MapEntry& b) { return a.j < b.j; });
  for (const auto& e : half)
    take(e.j, cur[e.j], e.amount, -1, [&](std::size_t q, double t) { out.entries.push_back({e.i, q, t}); });
  out.canonicalize();
  return out;
}

InstanceData generate_instance(const GenOptions& opt) {
  if (opt.n < 2) throw std::invalid_argument("need at least two points");
  if (opt.d < 1 || opt.d > 16) throw std::invalid_argument("dimension must be in 1..16");
  if (opt.spread != 0 && !(opt.spread >= 1)) throw std::invalid_argument("spread must be at least 1");
  if (opt.unit_supplies && opt.n % 2) throw std::invalid_argument("unit supplies need an even number of points");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0, 1);
  const int d = opt.d;
  const std::size_t n = opt.n;
  InstanceData out;
  out.d = d;
  if (opt.spread == 0) {
    out.coords.resize(n * d);
    for (double& x : out.coords) x = u(rng);
  } else {
    const double delta = std::sqrt(static_cast<double>(d)) / opt.spread;
    if (n > 2 && !(delta > 0)) throw std::invalid_argument("spread too large");
    // hash grid with cells of side delta; a point conflicts only with its 3^d block
    std::unordered_map<std::string, std::vector<std::size_t>> grid;
    auto key = [&](const double* x, const std::vector<int>& off) {
      std::string k;
      for (int i = 0; i < d; ++i) {
        const auto c = static_cast<std::int64_t>(std::floor(x[i] / delta)) + off[i];
        k.append(reinterpret_cast<const char*>(&c), sizeof c);
      }
      return k;
    };
    std::vector<int> zero(d, 0);
    auto fits = [&](const double* x) {
      std::vector<int> off(d, -1);
      while (true) {
        const auto it = grid.find(key(x, off));
        if (it != grid.end())
          for (std::size_t q : it->second)
            if (distance({x, static_cast<std::size_t>(d)}, {out.coords.data() + q * d, static_cast<std::size_t>(d)}) <
                delta)
              return false;
        int i = 0;
        while (i < d && off[i] == 1) off[i++] = -1;
        if (i == d) return true;
        ++off[i];
      }
    };
    auto add = [&](const std::vector<double>& x) {
      const std::size_t id = out.coords.size() / d;
      out.coords.insert(out.coords.end(), x.begin(), x.end());
      grid[key(x.data(), zero)].push_back(id);
    };
    add(std::vector<double>(d, 0));
    add(std::vector<double>(d, 1));
    if (n > 2) {
      // the closest pair: along the diagonal from the first corner
      add(std::vector<double>(d, delta / std::sqrt(static_cast<double>(d))));
    }
    std::size_t attempts = 0;
    const std::size_t budget = 200 * n + 10000;
    std::vector<double> x(d);
    while (out.coords.size() / d < n) {
      if (++attempts > budget) throw std::invalid_argument("cannot place that many points at this spread");
      for (double& c : x) c = u(rng);
      if (fits(x.data())) add(x);
    }
  }
  out.supplies.resize(n);
  if (opt.unit_supplies) {
    for (std::size_t p = 0; p < n; ++p) out.supplies[p] = p % 2 ? -1 : 1;
    return out;
  }
  double sum = 0;
  std::normal_distribution<double> nd;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    out.supplies[p] = opt.integer_supplies ? static_cast<double>(static_cast<int>(rng() % 11) - 5) : nd(rng);
    sum += out.supplies[p];
  }
  out.supplies[n - 1] = -sum;
  return out;
}

}  // namespace gts
