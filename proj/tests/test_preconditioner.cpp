#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "gts/oracle.hpp"
#include "gts/preconditioner.hpp"
#include "support/setup.hpp"

using namespace gts;
using namespace testsupport;

namespace {

// B as a dense matrix, one column per net point, walking its blob ancestry
std::vector<std::vector<double>> dense_B(const Preconditioner& p) {
  const Quadtree& t = *p.tree;
  const BlobForest& f = *p.blobs;
  const std::size_t m = t.num_cells();
  std::vector<std::vector<double>> B(m, std::vector<double>(m, 0));
  for (std::size_t u = 0; u < m; ++u) {
    B[u][u] += p.scale[t.level[u]];
    for (int v = f.up_blob[u]; v >= 0; v = f.node_parent[v]) {
      const int l = f.node_level[v];
      for (std::size_t c = 0; c < m; ++c) {
        if (t.level[c] != l) continue;
        bool cand = false;
        for (int k = f.cand_begin[v]; k < f.cand_begin[v + 1]; ++k) cand |= f.cand_cell[k] == static_cast<int>(c);
        if (cand) B[c][u] += p.scale[l] * f.containment_probability(v, static_cast<int>(c));
      }
    }
  }
  return B;
}

std::vector<std::vector<double>> dense_A(const Preconditioner& p) {
  std::vector<std::vector<double>> A(p.num_rows(), std::vector<double>(p.num_cols(), 0));
  for (std::size_t k = 0; k < p.num_cols(); ++k) {
    A[p.tail(static_cast<int>(k))][k] += 1;
    A[p.head(static_cast<int>(k))][k] -= 1;
  }
  return A;
}

}  // namespace

TEST_CASE("zero inputs map to zero") {
  std::mt19937_64 rng(1);
  auto s = make_setup(rng, 2, 6, 0.25, false, false);
  const auto& p = s->pre;
  std::vector<double> f(p.num_cols(), 0), b(p.num_rows(), 0);
  for (double x : p.apply_BA(f)) CHECK(x == 0);
  for (double x : p.apply_BAt(b)) CHECK(x == 0);
  for (double x : p.greedy_route(b)) CHECK(x == 0);
}

TEST_CASE("applications match dense B and A") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 3, n = 3 + trial % 6;
    auto s = make_setup(rng, d, n, 0.5, trial % 4 == 3, trial % 2);
    const auto& p = s->pre;
    auto B = dense_B(p);
    auto A = dense_A(p);
    std::vector<double> f(p.num_cols()), y(p.num_rows());
    for (double& x : f) x = nd(rng);
    for (double& x : y) x = nd(rng);
    // dense B A f and A^T B^T y
    std::vector<double> af(p.num_rows(), 0), baf(p.num_rows(), 0), bty(p.num_rows(), 0), atbty(p.num_cols(), 0);
    for (std::size_t r = 0; r < p.num_rows(); ++r)
      for (std::size_t k = 0; k < p.num_cols(); ++k) af[r] += A[r][k] * f[k];
    for (std::size_t r = 0; r < p.num_rows(); ++r)
      for (std::size_t c = 0; c < p.num_rows(); ++c) baf[r] += B[r][c] * af[c], bty[c] += B[r][c] * y[r];
    for (std::size_t k = 0; k < p.num_cols(); ++k)
      for (std::size_t r = 0; r < p.num_rows(); ++r) atbty[k] += A[r][k] * bty[r];
    auto got = p.apply_BA(f);
    auto got_t = p.apply_BAt(y);
    double scale = 0;
    for (auto& row : B)
      for (double v : row) scale = std::max(scale, std::abs(v));
    for (std::size_t r = 0; r < p.num_rows(); ++r) CHECK(std::abs(got[r] - baf[r]) <= 1e-9 * scale * (1 + l1(f)));
    for (std::size_t k = 0; k < p.num_cols(); ++k) CHECK(std::abs(got_t[k] - atbty[k]) <= 1e-9 * scale * (1 + l1(y)));
    // full column rank: B is triangular under deepest-first ordering with a nonzero diagonal
    for (std::size_t c = 0; c < p.num_rows(); ++c) CHECK(B[c][c] > 0);
  }
}

TEST_CASE("adjointness and linearity") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  auto s = make_setup(rng, 2, 30, 0.25, false, true);
  const auto& p = s->pre;
  for (int k = 0; k < 200; ++k) {
    std::vector<double> f(p.num_cols()), g(p.num_cols()), y(p.num_rows());
    for (double& x : f) x = nd(rng);
    for (double& x : g) x = nd(rng);
    for (double& x : y) x = nd(rng);
    auto bf = p.apply_BA(f);
    auto bty = p.apply_BAt(y);
    double lhs = 0, rhs = 0, mag = 0;
    for (std::size_t r = 0; r < p.num_rows(); ++r) lhs += bf[r] * y[r], mag += std::abs(bf[r] * y[r]);
    for (std::size_t e = 0; e < p.num_cols(); ++e) rhs += f[e] * bty[e];
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(mag, 1.0));
    std::vector<double> fg(f);
    for (std::size_t e = 0; e < fg.size(); ++e) fg[e] += g[e];
    auto bfg = p.apply_BA(fg), bg = p.apply_BA(g);
    for (std::size_t r = 0; r < p.num_rows(); ++r) CHECK(bfg[r] == doctest::Approx(bf[r] + bg[r]).scale(1e-6));
  }
}

TEST_CASE("greedy routing is feasible and linear") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = make_setup(rng, 1 + trial % 3, 10 + 3 * trial, 0.25, trial % 3 == 2, trial % 2);
    const auto& p = s->pre;
    auto b1 = random_balanced(rng, p.num_rows(), true), b2 = random_balanced(rng, p.num_rows(), false);
    auto f1 = p.greedy_route(b1), f2 = p.greedy_route(b2);
    auto div = p.divergence(f1);
    for (std::size_t c = 0; c < p.num_rows(); ++c) CHECK(div[c] == doctest::Approx(b1[c]).scale(1e-9 * l1(b1)));
    std::vector<double> b12(b1);
    for (std::size_t c = 0; c < b12.size(); ++c) b12[c] += b2[c];
    auto f12 = p.greedy_route(b12);
    for (std::size_t e = 0; e < f12.size(); ++e) CHECK(f12[e] == doctest::Approx(f1[e] + f2[e]).scale(1e-9 * l1(b12)));
  }
  std::mt19937_64 r2(5);
  auto s = make_setup(r2, 2, 5, 0.5, false, false);
  std::vector<double> bad(s->pre.num_rows(), 0);
  bad[0] = 1;
  CHECK_THROWS(s->pre.greedy_route(bad));
}

TEST_CASE("sandwich against the exact flow") {
  std::mt19937_64 rng(6);
  int violations = 0, checks = 0;
  double worst_lo = 0, worst_hi = 0;
  for (int trial = 0; trial < 6; ++trial) {
    auto s = make_setup(rng, 1 + trial % 3, 12 + 5 * trial, 0.5, trial % 3 == 2, trial % 2);
    const auto& p = s->pre;
    FlowGraph g = net_graph(p);
    if (g.num_edges() > 20000) continue;
    for (int k = 0; k < 50; ++k) {
      auto b = random_balanced(rng, p.num_rows(), k % 2);
      const double bb = l1(p.apply_B(b));
      const double opt = exact_graph_flow(g, b).cost;
      const double greedy = p.cost(p.greedy_route(b));
      ++checks;
      worst_lo = std::max(worst_lo, bb / opt);
      worst_hi = std::max(worst_hi, greedy / (p.kappa * bb));
      if (!(bb <= opt * (1 + 1e-9) && opt <= greedy * (1 + 1e-9) && greedy <= p.kappa * bb)) ++violations;
    }
  }
  MESSAGE("sandwich checks " << checks << ", max |Bb|/OPT " << worst_lo << ", max greedy/(kappa |Bb|) " << worst_hi);
  CHECK(checks >= 50);
  CHECK(violations == 0);
}
