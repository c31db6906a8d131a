#include "gts/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

namespace gts {

std::vector<double> solve_transport(const std::vector<double>& cost,
                                    const std::vector<double>& supply,
                                    const std::vector<double>& demand) {
  const std::size_t m = supply.size(), k = demand.size(), nv = m + k;
  std::vector<double> x(m * k, 0);
  std::vector<double> rs(supply), rd(demand);
  double total = 0;
  for (double s : supply) total += s;
  const double tol = 1e-13 * std::max(total, 1e-300);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pi(nv, 0), dist(nv);
  std::vector<int> prev(nv);
  std::vector<char> done(nv);

  auto remaining = [&] {
    double r = 0;
    for (double s : rs) r += std::max(s, 0.0);
    return r;
  };
  while (remaining() > tol) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(prev.begin(), prev.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < m; ++i)
      if (rs[i] > tol) dist[i] = 0;
    int target = -1;
    while (true) {
      int u = -1;
      for (std::size_t v = 0; v < nv; ++v)
        if (!done[v] && dist[v] < inf && (u < 0 || dist[v] < dist[u])) u = static_cast<int>(v);
      if (u < 0) break;
      done[u] = 1;
      if (u >= static_cast<int>(m) && rd[u - m] > tol) {
        target = u;
        break;
      }
      if (u < static_cast<int>(m)) {
        for (std::size_t j = 0; j < k; ++j) {
          const int v = static_cast<int>(m + j);
          if (done[v]) continue;
          const double nd = dist[u] + std::max(0.0, cost[u * k + j] + pi[u] - pi[v]);
          if (nd < dist[v]) dist[v] = nd, prev[v] = u;
        }
      } else {
        const std::size_t j = u - m;
        for (std::size_t i = 0; i < m; ++i) {
          if (done[i] || x[i * k + j] <= 0) continue;
          const double nd = dist[u] + std::max(0.0, -cost[i * k + j] + pi[u] - pi[i]);
          if (nd < dist[i]) dist[i] = nd, prev[i] = u;
        }
      }
    }
    if (target < 0) throw std::logic_error("transport problem infeasible");
    const double dt = dist[target];
    for (std::size_t v = 0; v < nv; ++v) pi[v] += std::min(dist[v], dt);

    double amount = rd[target - m];
    int v = target;
    while (prev[v] >= 0) {
      const int u = prev[v];
      if (u >= static_cast<int>(m)) amount = std::min(amount, x[v * k + (u - m)]);
      v = u;
    }
    const int src = v;
    amount = std::min(amount, rs[src]);
    for (v = target; prev[v] >= 0; v = prev[v]) {
      const int u = prev[v];
      if (u < static_cast<int>(m)) {
        x[u * k + (v - m)] += amount;
      } else {
        double& back = x[v * k + (u - m)];
        back -= amount;
        if (back <= tol) back = 0;
      }
    }
    rs[src] -= amount;
    rd[target - m] -= amount;
    if (rs[src] <= tol) rs[src] = 0;
    if (rd[target - m] <= tol) rd[target - m] = 0;
  }
  return x;
}

EmdResult exact_emd(const TransportInstance& inst, const OracleLimits& limits) {
  if (inst.size() > limits.max_points)
    throw OracleLimitExceeded("exact_emd: " + std::to_string(inst.size()) +
                              " points exceed the oracle limit of " +
                              std::to_string(limits.max_points));
  std::vector<std::size_t> pos, neg;
  std::vector<double> supply, demand;
  for (std::size_t v = 0; v < inst.size(); ++v) {
    if (inst.supply(v) > 0) pos.push_back(v), supply.push_back(inst.supply(v));
    if (inst.supply(v) < 0) neg.push_back(v), demand.push_back(-inst.supply(v));
  }
  EmdResult r;
  if (pos.empty()) return r;
  std::vector<double> cost(pos.size() * neg.size());
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < neg.size(); ++j)
      cost[i * neg.size() + j] = distance(inst.point(pos[i]), inst.point(neg[j]));
  auto x = solve_transport(cost, supply, demand);
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < neg.size(); ++j) {
      const double a = x[i * neg.size() + j];
      if (a > 0) {
        r.map.entries.push_back({pos[i], neg[j], a});
        r.cost += a * cost[i * neg.size() + j];
      }
    }
  return r;
}

GraphFlowResult exact_graph_flow(const FlowGraph& g, const std::vector<double>& b,
                                 const OracleLimits& limits) {
  if (g.num_edges() > limits.max_edges)
    throw OracleLimitExceeded("exact_graph_flow: " + std::to_string(g.num_edges()) +
                              " edges exceed the oracle limit of " +
                              std::to_string(limits.max_edges));
  const std::size_t nv = g.num_vertices();
  GraphFlowResult r;
  r.flow.assign(g.num_edges(), 0);
  std::vector<int> pos, neg;
  std::vector<double> supply, demand;
  for (std::size_t v = 0; v < nv; ++v) {
    if (b[v] > 0) pos.push_back(static_cast<int>(v)), supply.push_back(b[v]);
    if (b[v] < 0) neg.push_back(static_cast<int>(v)), demand.push_back(-b[v]);
  }
  if (pos.empty()) return r;
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (other end, edge)
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    adj[g.tail[e]].push_back({g.head[e], static_cast<int>(e)});
    adj[g.head[e]].push_back({g.tail[e], static_cast<int>(e)});
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(pos.size() * neg.size());
  std::vector<std::vector<int>> via(pos.size());  // shortest-path tree parent edges
  for (std::size_t i = 0; i < pos.size(); ++i) {
    std::vector<double> dist(nv, inf);
    std::vector<int>& pe = via[i];
    pe.assign(nv, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[pos[i]] = 0;
    pq.push({0, pos[i]});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[u]) continue;
      for (auto [v, e] : adj[u])
        if (du + g.length[e] < dist[v]) {
          dist[v] = du + g.length[e];
          pe[v] = e;
          pq.push({dist[v], v});
        }
    }
    for (std::size_t j = 0; j < neg.size(); ++j) {
      if (dist[neg[j]] == inf) throw std::invalid_argument("exact_graph_flow: disconnected demand");
      cost[i * neg.size() + j] = dist[neg[j]];
    }
  }
  auto x = solve_transport(cost, supply, demand);
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < neg.size(); ++j) {
      const double a = x[i * neg.size() + j];
      if (a <= 0) continue;
      r.cost += a * cost[i * neg.size() + j];
      for (int v = neg[j]; v != pos[i];) {
        const int e = via[i][v];
        // walking back from the sink: the flow runs toward v
        if (g.head[e] == v) {
          r.flow[e] += a;
          v = g.tail[e];
        } else {
          r.flow[e] -= a;
          v = g.head[e];
        }
      }
    }
  return r;
}

}  // namespace gts
