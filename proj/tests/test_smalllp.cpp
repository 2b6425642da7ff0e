#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spb/smalllp.hpp"

using namespace spb;

TEST_CASE("simple maximization") {
  // max x+y s.t. x <= 2, y <= 3, x+y <= 4
  auto r = lp::solve({{1, 0}, {0, 1}, {1, 1}}, {2, 3, 4}, {1, 1});
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(4.0));
}

TEST_CASE("negative rhs requires phase one") {
  // x >= 1 expressed as -x <= -1, maximize -x => x = 1
  auto r = lp::solve({{-1.0}, {1.0}}, {-1.0, 5.0}, {-1.0});
  REQUIRE(r.feasible);
  CHECK(r.x[0] == doctest::Approx(1.0));
}

TEST_CASE("infeasible detected") {
  // x <= 1 and x >= 2
  auto r = lp::solve({{1.0}, {-1.0}}, {1.0, -2.0}, {0.0});
  CHECK(!r.feasible);
}

TEST_CASE("unbounded detected") {
  auto r = lp::solve({{-1.0}}, {0.0}, {1.0});
  CHECK(r.feasible);
  CHECK(!r.bounded);
}

TEST_CASE("equality via inequality pair") {
  // x + y = 1, maximize 2x + y => x=1
  auto r = lp::solve({{1, 1}, {-1, -1}}, {1.0, -1.0}, {2.0, 1.0});
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.x[0] == doctest::Approx(1.0));
}

TEST_CASE("caratheodory reduction preserves the mixture") {
  // five points in the plane, mixture reducible to 3 = dim + 1
  std::vector<std::vector<double>> pts = {
      {0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}};
  std::vector<double> w = {0.2, 0.2, 0.2, 0.2, 0.2};
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    mx += w[i] * pts[i][0];
    my += w[i] * pts[i][1];
  }
  lp::caratheodory_reduce(pts, w, 3);
  int support = 0;
  double sx = 0, sy = 0, sw = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w[i] > 1e-12) ++support;
    CHECK(w[i] >= -1e-12);
    sx += w[i] * pts[i][0];
    sy += w[i] * pts[i][1];
    sw += w[i];
  }
  CHECK(support <= 3);
  CHECK(sw == doctest::Approx(1.0));
  CHECK(sx == doctest::Approx(mx));
  CHECK(sy == doctest::Approx(my));
}
