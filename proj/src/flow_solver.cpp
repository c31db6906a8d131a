#include "gts/flow_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace gts {

namespace {

// f plus the greedy routing of whatever divergence f leaves unmet
std::vector<double> complete(const Preconditioner& p, std::span<const double> b, const std::vector<double>& f) {
  auto div = p.divergence(f);
  for (std::size_t c = 0; c < div.size(); ++c) div[c] = b[c] - div[c];
  // cancel the rounding drift so the residual is balanced
  double s = 0;
  for (double v : div) s += v;
  div[0] -= s;
  auto g = p.greedy_route(div);
  for (std::size_t e = 0; e < g.size(); ++e) g[e] += f[e];
  return g;
}

// Largest potential below z that is 1-Lipschitz in the graph metric; b^T of
// it bounds the optimum from below.
double dual_bound(const Preconditioner& p, std::span<const double> b, std::vector<double> z) {
  const std::size_t r = p.num_rows(), m = p.num_cols();
  std::vector<int> begin(r + 1, 0), adj(2 * m);
  for (std::size_t e = 0; e < m; ++e) ++begin[p.tail(static_cast<int>(e)) + 1], ++begin[p.head(static_cast<int>(e)) + 1];
  for (std::size_t v = 0; v < r; ++v) begin[v + 1] += begin[v];
  std::vector<int> pos(begin.begin(), begin.end() - 1);
  for (std::size_t e = 0; e < m; ++e) {
    adj[pos[p.tail(static_cast<int>(e))]++] = static_cast<int>(e);
    adj[pos[p.head(static_cast<int>(e))]++] = static_cast<int>(e);
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t v = 0; v < r; ++v) pq.push({z[v], static_cast<int>(v)});
  while (!pq.empty()) {
    auto [zv, v] = pq.top();
    pq.pop();
    if (zv > z[v]) continue;
    for (int k = begin[v]; k < begin[v + 1]; ++k) {
      const int e = adj[k];
      const int u = p.tail(e) == v ? p.head(e) : p.tail(e);
      const double nz = zv + p.length(e);
      if (nz < z[u]) z[u] = nz, pq.push({nz, u});
    }
  }
  double lb = 0;
  for (std::size_t v = 0; v < r; ++v) lb += b[v] * z[v];
  return lb;
}

struct Candidate {
  std::vector<double> f, y;
};

}  // namespace

std::vector<double> PdhgSolver::solve(const Preconditioner& p, std::span<const double> b,
                                      const SolverConfig& cfg, SolverStats& stats) {
  const std::size_t m = p.num_cols(), r = p.num_rows();
  std::vector<double> w(m);
  for (std::size_t e = 0; e < m; ++e) w[e] = p.length(static_cast<int>(e));
  const std::vector<double> c = p.apply_B(b);

  // diagonal steps from the absolute row and column sums of B A (B >= 0)
  std::vector<double> deg(r, 0);
  for (std::size_t e = 0; e < m; ++e) deg[p.tail(static_cast<int>(e))] += 1, deg[p.head(static_cast<int>(e))] += 1;
  const auto rows = p.apply_B(deg);
  std::vector<double> ones(r, 1);
  const auto bt1 = p.apply_Bt(ones);
  std::vector<double> tau0(m), sigma0(r);
  for (std::size_t e = 0; e < m; ++e) {
    const double s = bt1[p.tail(static_cast<int>(e))] + bt1[p.head(static_cast<int>(e))];
    tau0[e] = s > 0 ? 1 / s : 0;
  }
  for (std::size_t i = 0; i < r; ++i) sigma0[i] = rows[i] > 0 ? 1 / rows[i] : 0;

  // primal weight balances the primal and dual scales; kept fixed
  double omega = 1;
  {
    double cn = 0, wn = 0;
    for (double v : c) cn += v * v;
    for (double v : w) wn += v * v;
    if (cn > 0 && wn > 0) omega = std::sqrt(wn / cn);
  }

  Candidate cur{std::vector<double>(m, 0), std::vector<double>(r, 0)};
  Candidate avg = cur;
  std::vector<double> best = cur.f;
  double best_cost = p.cost(complete(p, b, best));
  double best_lb = 0;
  stats.history.push_back(best_cost);
  int since_restart = 0;
  double last_err = HUGE_VAL;

  // certificate: upper bound from the completed flow, lower bound from the
  // dual point made feasible
  auto evaluate = [&](const Candidate& z, double& ub, double& lb) {
    ub = p.cost(complete(p, b, z.f));
    auto phi = p.apply_Bt(z.y);
    for (double& v : phi) v = -v;
    lb = dual_bound(p, b, std::move(phi));
  };

  std::vector<double> fnew(m), ext(m);
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const auto kty = p.apply_BAt(cur.y);
    for (std::size_t e = 0; e < m; ++e) {
      const double t = tau0[e] / omega;
      const double v = cur.f[e] - t * kty[e];
      const double th = t * w[e];
      fnew[e] = v > th ? v - th : (v < -th ? v + th : 0);
      ext[e] = 2 * fnew[e] - cur.f[e];
    }
    const auto kx = p.apply_BA(ext);
    for (std::size_t i = 0; i < r; ++i) cur.y[i] += sigma0[i] * omega * (kx[i] - c[i]);
    cur.f.swap(fnew);
    ++since_restart;
    const double wgt = 1.0 / since_restart;
    for (std::size_t e = 0; e < m; ++e) avg.f[e] += wgt * (cur.f[e] - avg.f[e]);
    for (std::size_t i = 0; i < r; ++i) avg.y[i] += wgt * (cur.y[i] - avg.y[i]);

    if ((it + 1) % cfg.check_every != 0) continue;
    double ub_c, lb_c, ub_a, lb_a;
    evaluate(cur, ub_c, lb_c);
    evaluate(avg, ub_a, lb_a);
    for (auto [ub, f] : {std::pair{ub_c, &cur.f}, std::pair{ub_a, &avg.f}})
      if (ub < best_cost) best_cost = ub, best = *f;
    best_lb = std::max({best_lb, lb_c, lb_a});
    stats.history.push_back(best_cost);
    if (best_lb > 0 && best_cost <= (1 + cfg.epsilon) * best_lb) {
      ++it;
      break;
    }
    // restart from the better of the iterate and the average once the gap
    // has shrunk enough, or after a long stretch
    const double err_c = (ub_c - lb_c) / std::max(ub_c, 1e-300);
    const double err_a = (ub_a - lb_a) / std::max(ub_a, 1e-300);
    const double err = std::min(err_c, err_a);
    if (err <= 0.2 * last_err || since_restart >= 16 * cfg.check_every) {
      if (err_a < err_c) cur = avg;
      avg = cur;
      since_restart = 0;
      last_err = err;
    }
  }
  stats.iterations = it;
  stats.lower_bound = best_lb;
  return best;
}

std::vector<double> solve_flow(const Preconditioner& p, std::span<const double> b,
                               const SolverConfig& cfg, SolverStats* stats, InnerSolver* inner) {
  SolverStats local;
  SolverStats& st = stats ? *stats : local;
  double mass = 0;
  for (double v : b) mass += std::abs(v);
  std::vector<double> f;
  if (mass == 0) {
    f.assign(p.num_cols(), 0);
  } else if (cfg.max_iterations <= 0) {
    f = p.greedy_route(b);
  } else {
    PdhgSolver fallback;
    InnerSolver& s = inner ? *inner : fallback;
    auto g = s.solve(p, b, cfg, st);
    f = complete(p, b, g);
  }
  st.cost = p.cost(f);
  st.certified = mass == 0 || (st.lower_bound > 0 && st.cost <= (1 + cfg.epsilon) * st.lower_bound);
  auto div = p.divergence(f);
  double res = 0;
  for (std::size_t c = 0; c < div.size(); ++c) res += std::abs(div[c] - b[c]);
  if (res > 1e-9 * std::max(mass, 1e-300)) throw SolverError("solve_flow: residual above tolerance", f);
  return f;
}

}  // namespace gts
