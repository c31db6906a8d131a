#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gts/oracle.hpp"
#include "gts/pipeline.hpp"

using namespace gts;

namespace {

TransportInstance random_instance(std::mt19937_64& rng, int n, int d, bool unit) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> pts(n * d), s(n);
  for (double& x : pts) x = u(rng);
  double sum = 0;
  for (int i = 0; i + 1 < n; ++i) {
    s[i] = unit ? (i % 2 ? -1 : 1) : static_cast<double>(static_cast<int>(rng() % 9) - 4);
    sum += s[i];
  }
  s[n - 1] = -sum;
  return {d, pts, s};
}

void check_solution(const TransportInstance& inst, const TransportMap& map, double eps) {
  CHECK(validate_map(inst, map).empty());
  const double opt = exact_emd(inst).cost;
  const double cost = total_cost(inst, map);
  CHECK(cost <= (1 + eps) * opt * (1 + 1e-12));
  CHECK(cost >= opt - 1e-9 * inst.total_abs_supply());
  if (inst.integral())
    for (const auto& e : map.entries) CHECK(e.amount == std::round(e.amount));
}

}  // namespace

TEST_CASE("modes by name") {
  CHECK(parse_mode("low-spread") == Mode::LowSpread);
  CHECK(std::string(mode_name(Mode::Matching)) == "matching");
  CHECK_THROWS_AS(parse_mode("fast"), std::invalid_argument);
}

TEST_CASE("degenerate inputs") {
  CHECK(approximate_transport(TransportInstance(2, {1, 1}, {0})).entries.empty());
  CHECK(approximate_transport(TransportInstance(1, {0, 1, 2}, {0, 0, 0})).entries.empty());
  const auto map = approximate_transport(TransportInstance(2, {0, 0, 3, 4}, {1, -1}));
  REQUIRE(map.entries.size() == 1);
  CHECK(map.entries[0].i == 0);
  CHECK(map.entries[0].j == 1);
  CHECK(map.entries[0].amount == 1);
}

TEST_CASE("every mode stays within its accuracy") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 3;
    const int n = 40 + static_cast<int>(rng() % 60);
    const auto inst = random_instance(rng, n, d, false);
    for (Mode mode : {Mode::Auto, Mode::Warped, Mode::LowSpread}) {
      SolveOptions opt;
      opt.epsilon = 0.5;
      opt.mode = mode;
      SolveReport rep;
      const auto map = approximate_transport(inst, opt, &rep);
      INFO("trial ", trial, " mode ", mode_name(mode));
      CHECK_FALSE(rep.exact);
      CHECK(rep.mode != Mode::Auto);
      check_solution(inst, map, opt.epsilon);
    }
  }
}

TEST_CASE("small instances are solved exactly") {
  std::mt19937_64 rng(12);
  // fewer than kCalibration / epsilon points
  const auto inst = random_instance(rng, 7, 2, false);
  SolveReport rep;
  SolveOptions opt;
  opt.epsilon = 0.25;
  const auto map = approximate_transport(inst, opt, &rep);
  CHECK(rep.exact);
  CHECK(total_cost(inst, map) == doctest::Approx(exact_emd(inst).cost).epsilon(1e-12));
}

TEST_CASE("tight clusters become sub-instances") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  const int n = 60;
  std::vector<double> pts, s;
  for (int p = 0; p < n; ++p) {
    // three specks far apart, each far smaller than its distance to the others / n^4
    const double base = static_cast<double>(p % 3) * 10;
    pts.push_back(base + 1e-9 * u(rng));
    pts.push_back(1e-9 * u(rng));
    s.push_back(p + 1 < n ? static_cast<double>(static_cast<int>(rng() % 5) - 2) : 0);
  }
  double sum = 0;
  for (double x : s) sum += x;
  s.back() = -sum;
  const TransportInstance inst(2, pts, s);
  SolveOptions opt;
  opt.epsilon = 0.5;
  opt.mode = Mode::Warped;
  SolveReport rep;
  const auto map = approximate_transport(inst, opt, &rep);
  CHECK(rep.trees > 1);
  check_solution(inst, map, opt.epsilon);
}

TEST_CASE("matching mode") {
  SUBCASE("collinear pairs") {
    const TransportInstance inst(1, {0, 1, 2, 3}, {1, 1, -1, -1});
    const auto map = solve_matching(inst, 0.25);
    REQUIRE(map.entries.size() == 2);
    CHECK(total_cost(inst, map) == 4);
  }
  SUBCASE("random halves") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 4; ++trial) {
      const auto inst = random_instance(rng, 100, 1 + trial % 3, true);
      const auto map = solve_matching(inst, 0.25);
      CHECK(map.entries.size() == 50);
      for (const auto& e : map.entries) CHECK(e.amount == 1);
      check_solution(inst, map, 0.25);
    }
  }
  SUBCASE("rejected inputs") {
    CHECK_THROWS_AS(solve_matching(TransportInstance(1, {0, 1}, {2, -2}), 0.25), UnsupportedInstance);
    std::vector<double> pts{0, 1e-30, 1, 2};
    CHECK_THROWS_AS(solve_matching(TransportInstance(1, pts, {1, -1, 1, -1}), 0.25), UnsupportedInstance);
  }
}

TEST_CASE("the grid instance agrees across pipelines") {
  std::vector<double> pts, s;
  const int k = 8;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      pts.push_back(x), pts.push_back(y);
      s.push_back((x + y) % 2 ? 1 : -1);
    }
  const TransportInstance inst(2, pts, s);
  const double opt = exact_emd(inst).cost;
  for (Mode mode : {Mode::Warped, Mode::LowSpread}) {
    SolveOptions o;
    o.epsilon = 0.5;
    o.mode = mode;
    const auto map = approximate_transport(inst, o);
    CHECK(total_cost(inst, map) <= 1.5 * opt);
    CHECK(validate_map(inst, map).empty());
  }
}

TEST_CASE("repeated solves are identical") {
  std::mt19937_64 rng(15);
  const auto inst = random_instance(rng, 70, 2, false);
  const auto a = approximate_transport(inst), b = approximate_transport(inst);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    CHECK(a.entries[k].i == b.entries[k].i);
    CHECK(a.entries[k].j == b.entries[k].j);
    CHECK(a.entries[k].amount == b.entries[k].amount);
  }
}

TEST_CASE("shortcutting a relay") {
  // 0 sends to 1, 1 sends on to 2: one direct entry remains
  const TransportInstance inst(1, {0, 1, 3}, {2, 0, -2});
  TransportMap sum;
  sum.entries = {{0, 1, 2}, {1, 2, 2}};
  const auto map = shortcut_maps(inst, sum);
  REQUIRE(map.entries.size() == 1);
  CHECK(map.entries[0].i == 0);
  CHECK(map.entries[0].j == 2);
  CHECK(map.entries[0].amount == 2);
}
