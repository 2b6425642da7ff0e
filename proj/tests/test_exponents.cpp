#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spb/exponents.hpp"
#include "test_util.hpp"

using namespace spb;
using namespace testutil;

namespace {

double closed_form_sum_rate_zero(const Mac& w, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t z = 0; z < w.nz(); ++z) {
    double lq = 0.0;
    for (std::size_t x = 0; x < w.nx(); ++x)
      for (std::size_t y = 0; y < w.ny(); ++y)
        lq += p[x * w.ny() + y] * std::log2(w.w(x, y, z));
    s += std::exp2(lq);
  }
  return -std::log2(s);
}

}  // namespace

TEST_CASE("information functionals at the channel itself") {
  Mac w = adder_mac();
  std::vector<double> p = {0.25, 0.25, 0.25, 0.25};
  CHECK(div_bits(w, p, w.flat()) == 0.0);
  CHECK(info_xy(w, p, w.flat()) == doctest::Approx(1.5));
  CHECK(info_x(w, p, w.flat()) == doctest::Approx(1.0));
  CHECK(info_y(w, p, w.flat()) == doctest::Approx(1.0));
}

TEST_CASE("inner min is zero exactly when the channel is already bad") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    Mac w = random_mac(rng, 2, 2, 2);
    std::vector<double> p = random_simplex(rng, 4);
    double iw = info_x(w, p, w.flat());
    ExponentResult below = inner_min(w, p, {{iw + 0.01, 1.0}, Family::X});
    CHECK(below.value == 0.0);
    ExponentResult above = inner_min(w, p, {{std::max(0.0, iw - 0.05), 1.0}, Family::X});
    if (iw > 0.05) CHECK(above.value > 0.0);
  }
}

TEST_CASE("closed form at zero sum rate") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    Mac w = random_mac(rng, 2, 2, 2);
    std::vector<double> p = random_simplex(rng, 4);
    ExponentResult r = inner_min(w, p, {{0.0, 0.0}, Family::XY});
    CHECK(r.value == doctest::Approx(closed_form_sum_rate_zero(w, p)).epsilon(1e-6));
  }
}

TEST_CASE("solver matches the exhaustive grid oracle") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 5; ++t) {
    Mac w = random_mac(rng, 2, 2, 2);
    std::vector<double> p = random_simplex(rng, 4);
    RatePair r{0.05 + 0.4 * double(t) / 4.0, 0.3};
    VGridMins g = grid_min_divergence(w, p, r, 50);
    double sx = inner_min(w, p, {r, Family::X}).value;
    double sy = inner_min(w, p, {r, Family::Y}).value;
    double sxy = inner_min(w, p, {r, Family::XY}).value;
    double su = inner_min(w, p, {r, Family::Union}).value;
    CHECK(std::abs(sx - g.x) <= 5e-3);
    CHECK(std::abs(sy - g.y) <= 5e-3);
    CHECK(std::abs(sxy - g.xy) <= 5e-3);
    CHECK(std::abs(su - g.all) <= 5e-3);
  }
}

TEST_CASE("serial and parallel grid oracles agree exactly") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 3; ++t) {
    Mac w = random_mac(rng, 2, 2, 2);
    std::vector<double> p = random_simplex(rng, 4);
    RatePair r{0.2, 0.25};
    VGridMins a = grid_min_divergence(w, p, r, 12);
    VGridMins b = grid_min_divergence_serial(w, p, r, 12);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.xy == b.xy);
    CHECK(a.all == b.all);
  }
}

TEST_CASE("inner min is nonincreasing in the rates") {
  std::mt19937_64 rng(59);
  Mac w = random_mac(rng, 2, 2, 3);
  std::vector<double> p = random_simplex(rng, 4);
  double prev = kInf;
  for (double rate : {0.0, 0.1, 0.2, 0.4, 0.8}) {
    double v = inner_min(w, p, {{rate, 0.0}, Family::X}).value;
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
}

TEST_CASE("union equals the best single family") {
  std::mt19937_64 rng(61);
  Mac w = random_mac(rng, 2, 2, 2);
  std::vector<double> p = random_simplex(rng, 4);
  RatePair r{0.15, 0.2};
  ExponentResult u = inner_min(w, p, {r, Family::Union});
  double mn = std::min({inner_min(w, p, {r, Family::X}).value,
                        inner_min(w, p, {r, Family::Y}).value,
                        inner_min(w, p, {r, Family::XY}).value});
  CHECK(u.value == doctest::Approx(mn));
}

TEST_CASE("deterministic channel gives an infinite exponent at tiny rates") {
  // Z = (X, Y): rows of W have disjoint supports, so no test channel with
  // low information stays absolutely continuous
  std::vector<double> w(2 * 2 * 4, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) w[std::size_t((x * 2 + y) * 4 + x * 2 + y)] = 1.0;
  Mac mac({"0", "1"}, {"0", "1"}, {"a", "b", "c", "d"}, w);
  std::vector<double> p = {0.25, 0.25, 0.25, 0.25};
  ExponentResult r = inner_min(mac, p, {{0.1, 0.1}, Family::XY});
  CHECK(r.value == kInf);
}

TEST_CASE("thm4 dominates thm2 and both decrease in rate") {
  std::mt19937_64 rng(67);
  Mac w = random_mac(rng, 2, 2, 2);
  double prev4 = kInf, prev2 = kInf;
  for (double rate : {0.0, 0.2, 0.4}) {
    ExponentResult t4 = sp_thm4(w, {rate, rate}, 4);
    ExponentResult t2 = sp_thm2(w, {rate, rate}, 4, 6);
    CHECK(t2.value <= t4.value + 1e-6);
    CHECK(t4.value <= prev4 + 1e-6);
    CHECK(t2.value <= prev2 + 1e-6);
    prev4 = t4.value;
    prev2 = t2.value;
  }
}

TEST_CASE("useless channel has zero exponent everywhere") {
  Mac w = useless_mac();
  ExponentResult r = sp_thm4(w, {0.1, 0.1}, 4);
  CHECK(r.value == doctest::Approx(0.0));
}

TEST_CASE("transfer arithmetic") {
  auto up = transfer_max_to_avg(0.5, 0.6, {0.2, 0.3});
  CHECK(up.first == doctest::Approx(0.5));
  CHECK(up.second == doctest::Approx(0.8));
  auto down = transfer_avg_to_max(0.5, 0.6, {0.2, 0.3});
  CHECK(down.first == doctest::Approx(0.3));
  CHECK(down.second == doctest::Approx(0.6));
  CHECK_THROWS_AS(transfer_max_to_avg(0.7, 0.6, {0.1, 0.1}), ValidationError);
}

TEST_CASE("solver diagnostics are sane") {
  std::mt19937_64 rng(71);
  Mac w = random_mac(rng, 2, 2, 2);
  std::vector<double> p = random_simplex(rng, 4);
  ExponentResult r = inner_min(w, p, {{0.05, 0.05}, Family::XY});
  CHECK(r.diag.constraint_violation <= 1e-6);
  CHECK(r.diag.duality_gap <= 1e-3);
  CHECK(r.v.size() == w.flat().size());
  // the reported test channel reproduces the reported value
  CHECK(div_bits(w, p, r.v) == doctest::Approx(r.value).epsilon(1e-9));
}
