#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spb/probkit.hpp"

using namespace spb;

TEST_CASE("pmf validation") {
  CHECK_NOTHROW(Pmf({"a", "b"}, {0.5, 0.5}));
  CHECK_THROWS_AS(Pmf({"a", "b"}, {0.5, 0.49}), ValidationError);
  CHECK_THROWS_AS(Pmf({"a", "b"}, {1.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(Pmf({"a", "a"}, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(Pmf({}, {}), ValidationError);
  // near-but-inside tolerance passes; renormalization never happens silently
  Pmf p({"a", "b"}, {0.5 + 4e-10, 0.5 + 4e-10});
  CHECK(p[0] == 0.5 + 4e-10);
}

TEST_CASE("entropy basics") {
  CHECK(entropy(Pmf::uniform({"a", "b", "c", "d"})) == doctest::Approx(2.0));
  CHECK(entropy(Pmf::point_mass({"a", "b"}, 0)) == 0.0);
  CHECK(entropy(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0));
}

TEST_CASE("joint marginals and mutual information") {
  // X uniform bit, Z = X (perfect correlation)
  JointPmf j({"X", "Z"}, {{"0", "1"}, {"0", "1"}}, {0.5, 0.0, 0.0, 0.5});
  CHECK(mutual_info(j, "X", "Z") == doctest::Approx(1.0));
  CHECK(cond_entropy(j, "Z", {"X"}) == doctest::Approx(0.0));
  CHECK(j.entropy_of({"X"}) == doctest::Approx(1.0));

  // independent pair
  JointPmf ind({"X", "Z"}, {{"0", "1"}, {"0", "1"}}, {0.25, 0.25, 0.25, 0.25});
  CHECK(mutual_info(ind, "X", "Z") == doctest::Approx(0.0));
}

TEST_CASE("conditional mutual information via groups") {
  // U selects which input is copied: I(XY ^ Z | U) for Z = X xor Y
  std::vector<double> w;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        w.push_back(0.25 * ((z == (x ^ y)) ? 1.0 : 0.0));
  JointPmf j({"X", "Y", "Z"}, {{"0", "1"}, {"0", "1"}, {"0", "1"}}, w);
  CHECK(mutual_info_groups(j, {"X", "Y"}, {"Z"}) == doctest::Approx(1.0));
  CHECK(mutual_info(j, "X", "Z", {"Y"}) == doctest::Approx(1.0));
  CHECK(mutual_info(j, "X", "Z") == doctest::Approx(0.0));
}

TEST_CASE("kl divergence") {
  Pmf p({"a", "b"}, {0.5, 0.5});
  Pmf q({"a", "b"}, {0.25, 0.75});
  CHECK(kl(p, p) == 0.0);
  CHECK(kl(p, q) == doctest::Approx(0.5 * std::log2(2.0) + 0.5 * std::log2(2.0 / 3.0)));
  CHECK(kl(Pmf({"a", "b"}, {1.0, 0.0}), Pmf({"a", "b"}, {0.0, 1.0})) == kInf);
  CHECK_THROWS_AS(kl(p, Pmf({"x", "y"}, {0.5, 0.5})), ValidationError);
}

TEST_CASE("conditional kl skips zero-mass rows") {
  CondPmf v({"a", "b"}, {"0", "1"}, {{1.0, 0.0}, {0.0, 1.0}});
  CondPmf w({"a", "b"}, {"0", "1"}, {{0.5, 0.5}, {0.0, 1.0}});
  Pmf pa({"a", "b"}, {1.0, 0.0});
  CHECK(cond_kl(v, w, pa) == doctest::Approx(1.0));
  Pmf pb({"a", "b"}, {0.0, 1.0});
  CHECK(cond_kl(v, w, pb) == 0.0);
}
