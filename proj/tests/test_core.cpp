#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gts/core.hpp"

using namespace gts;

TEST_CASE("total cost of a forced pair") {
  TransportInstance inst(2, {0, 0, 3, 4}, {1, -1});
  TransportMap m{{{0, 1, 1}}};
  CHECK(total_cost(inst, m) == doctest::Approx(5.0));
  CHECK(validate_map(inst, m).empty());
}

TEST_CASE("zero instance") {
  TransportInstance inst(1, {0, 1}, {0, 0});
  CHECK(inst.trivial());
  CHECK(total_cost(inst, TransportMap{}) == 0.0);
}

TEST_CASE("2x2 instance against vertex enumeration") {
  // P+ = {(0,0):2, (1,0):1}, P- = {(0,1):-1, (2,0):-2}
  TransportInstance inst(2, {0, 0, 1, 0, 0, 1, 2, 0}, {2, 1, -1, -2});
  auto c = [&](int i, int j) { return distance(inst.point(i), inst.point(j)); };
  // vertices of the transport polytope parameterized by x = tau(0,2) in [0,1]
  double best = 1e300;
  for (double x : {0.0, 1.0}) {
    TransportMap m{{{0, 2, x}, {0, 3, 2 - x}, {1, 2, 1 - x}, {1, 3, x}}};
    double cost = x * c(0, 2) + (2 - x) * c(0, 3) + (1 - x) * c(1, 2) + x * c(1, 3);
    CHECK(total_cost(inst, m) == doctest::Approx(cost));
    CHECK(validate_map(inst, m).empty());
    best = std::min(best, cost);
  }
  CHECK(best == doctest::Approx(4.0));
}

TEST_CASE("total cost rejects bad indices") {
  TransportInstance inst(1, {0, 1}, {1, -1});
  CHECK_THROWS_AS(total_cost(inst, TransportMap{{{0, 5, 1}}}), InvalidMap);
}

TEST_CASE("validate_map reports violations") {
  TransportInstance inst(1, {0, 1, 2, 3}, {1, 1, -1, -1});
  TransportMap ok{{{0, 2, 1}, {1, 3, 1}}};
  CHECK(validate_map(inst, ok).empty());

  TransportMap off{{{0, 2, 0.9}, {1, 2, 0.1}, {1, 3, 0.9}}};
  auto v = validate_map(inst, off);
  // row 0 short by 0.1 and column 3 short by 0.1
  REQUIRE(v.size() == 2);
  CHECK(v[0].kind == Violation::Row);
  CHECK(v[0].magnitude == doctest::Approx(0.1));

  TransportMap row_only{{{0, 2, 1.1}, {1, 3, 1}}};
  v = validate_map(inst, row_only);
  int rows = 0;
  for (auto& x : v) rows += x.kind == Violation::Row;
  CHECK(rows == 1);

  TransportMap neg{{{0, 2, 1}, {1, 3, 1}, {0, 3, -0.5}, {0, 3, 0.5}}};
  v = validate_map(inst, neg);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Negative);
}

TEST_CASE("instance ingestion merges coincident points") {
  TransportInstance inst(1, {0, 5, 0, 7, 7}, {1, -2, 1, 3, -3});
  // 0 merges to +2, 7 merges to zero and is dropped
  REQUIRE(inst.size() == 2);
  CHECK(inst.supply(0) == 2);
  CHECK(inst.supply(1) == -2);
  CHECK(inst.origin()[0] == 0);
  CHECK(inst.origin()[1] == 1);
  CHECK_THROWS_AS(TransportInstance(1, {0, 1}, {1, -0.5}), InvalidInstance);
  CHECK_THROWS_AS(TransportInstance(2, {0, 1, 2}, {1, -1}), InvalidInstance);
}

TEST_CASE("spread") {
  TransportInstance inst(1, {0, 1, 10}, {1, 0, -1});
  CHECK(inst.spread() == doctest::Approx(10));
}

TEST_CASE("divergence and cost") {
  FlowGraph g;
  g.d = 2;
  g.coords = {0, 0, 3, 4, 0, 4};
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  auto div = flow_divergence(g, {2, 0, 0});
  CHECK(div[0] == 2);
  CHECK(div[1] == -2);
  CHECK(div[2] == 0);
  for (double x : flow_divergence(g, {1, 1, 1})) CHECK(x == 0);
  CHECK(flow_cost(g, {0, 0, 0}) == 0);
  CHECK(flow_cost(g, {-2, 0, 0}) == doctest::Approx(10));

  // random flow on 5 edges against a per-edge sum
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  FlowGraph h;
  h.d = 1;
  for (int v = 0; v < 4; ++v) {
    std::vector<double> p{static_cast<double>(v * v)};
    h.add_vertex(p);
  }
  int ends[5][2] = {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {1, 3}};
  for (auto& e : ends) h.add_edge(e[0], e[1]);
  FlowVector f(5);
  double expect = 0;
  for (int e = 0; e < 5; ++e) {
    f[e] = u(rng);
    expect += std::abs(f[e]) * std::abs(ends[e][1] * ends[e][1] - ends[e][0] * ends[e][0]);
  }
  CHECK(flow_cost(h, f) == doctest::Approx(expect));
  // linearity
  FlowVector g2(5, 0.25);
  FlowVector sum(5);
  for (int e = 0; e < 5; ++e) sum[e] = f[e] + g2[e];
  auto a = flow_divergence(h, f), b = flow_divergence(h, g2), c = flow_divergence(h, sum);
  for (int v = 0; v < 4; ++v) CHECK(c[v] == doctest::Approx(a[v] + b[v]));
}

TEST_CASE("cost is homogeneous") {
  TransportInstance inst(2, {0, 0, 1, 1, 2, 0}, {2, -1, -1});
  TransportMap m{{{0, 1, 1}, {0, 2, 1}}};
  TransportMap m3 = m;
  for (auto& e : m3.entries) e.amount *= 3;
  CHECK(total_cost(inst, m3) == doctest::Approx(3 * total_cost(inst, m)));
}
