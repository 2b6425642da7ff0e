#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spb/feasibility.hpp"
#include "test_util.hpp"

using namespace spb;
using namespace testutil;

namespace {
JointPmf joint2(const std::vector<double>& w) {
  return JointPmf({"X", "Y"}, {{"0", "1"}, {"0", "1"}}, w);
}
}  // namespace

TEST_CASE("uniform product is feasible up to full entropy") {
  JointPmf p = joint2({0.25, 0.25, 0.25, 0.25});
  auto dec = u_feasible(p, {1.0, 1.0}, 6, 16);
  REQUIRE(dec.has_value());
  CHECK(dec->reconstruction_tv <= 1e-4);
  CHECK(dec->hx >= 1.0 - 1e-6);
  CHECK(dec->hy >= 1.0 - 1e-6);
}

TEST_CASE("perfectly correlated pair fails at positive rates") {
  // P(0,0)=P(1,1)=1/2 needs U to carry everything: H(X|U) must be 0
  JointPmf p = joint2({0.5, 0.0, 0.0, 0.5});
  CHECK(!u_feasible(p, {0.5, 0.5}, 6, 16).has_value());
  CHECK(u_feasible(p, {0.0, 0.0}, 6, 16).has_value());
}

TEST_CASE("skewed product feasible only below its entropy") {
  JointPmf p = joint2({0.64, 0.16, 0.16, 0.04});  // (0.8,0.2) x (0.8,0.2)
  double h = entropy(std::vector<double>{0.8, 0.2});
  CHECK(u_feasible(p, {h - 0.01, h - 0.01}, 6, 20).has_value());
  CHECK(!u_feasible(p, {h + 0.05, h + 0.05}, 6, 20).has_value());
}

TEST_CASE("mixture of two products found") {
  // 0.5 * [(1,0)x(1,0)] + 0.5 * [uniform x uniform]
  std::vector<double> w(4);
  w[0] = 0.5 * 1.0 + 0.5 * 0.25;
  w[1] = w[2] = w[3] = 0.5 * 0.25;
  JointPmf p = joint2({w[0], w[1], w[2], w[3]});
  auto dec = u_feasible(p, {0.5, 0.5}, 6, 16);
  REQUIRE(dec.has_value());
  CHECK(dec->weights.size() <= 6);
}

TEST_CASE("dominant type of a small code") {
  std::mt19937_64 rng(3);
  Mac w = random_mac(rng, 2, 2, 2);
  MultiUserCode code;
  code.n = 3;
  code.codebook_x = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};  // one type class
  code.codebook_y = {{0, 1, 1}, {1, 1, 0}};
  code.ml = true;
  DominantTypeReport rep = dominant_type(code, w.x(), w.y());
  long long total = 0;
  for (long long c : rep.counts) total += c;
  CHECK(total == 6);  // all pairs accounted for
  CHECK(rep.counts[rep.argmax] >= 1);
  double best_rate = rep.rates[rep.argmax];
  CHECK(best_rate >= rep.pigeonhole_bound - 1e-9);
}

TEST_CASE("admissible types filter") {
  Alphabet bits = {"0", "1"};
  auto all = enumerate_joint_types(bits, bits, 4);
  auto admissible = admissible_types(bits, bits, 4, {0.0, 0.0}, 6, 8);
  CHECK(admissible.size() == all.size());  // zero rates admit everything
  auto strict = admissible_types(bits, bits, 4, {1.0, 1.0}, 6, 8);
  CHECK(strict.size() < all.size());
  // the uniform joint type must survive the strictest binary constraint
  bool has_uniform = false;
  for (const auto& t : strict)
    has_uniform = has_uniform || t.counts == std::vector<long long>{1, 1, 1, 1};
  CHECK(has_uniform);
}
