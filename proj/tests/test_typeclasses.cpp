#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "spb/macchannel.hpp"
#include "spb/typeclasses.hpp"

using namespace spb;

namespace {
const Alphabet kBits = {"0", "1"};
const Alphabet kTern = {"a", "b", "c"};
}  // namespace

TEST_CASE("compositions are exhaustive and ordered") {
  auto c = compositions(4, 3);
  CHECK(c.size() == 15);  // C(6,2)
  for (const auto& v : c) {
    long long s = 0;
    for (long long x : v) s += x;
    CHECK(s == 4);
  }
  CHECK(std::is_sorted(c.begin(), c.end()));
}

TEST_CASE("type enumeration counts") {
  CHECK(enumerate_types(kBits, 5).size() == 6);
  CHECK(enumerate_types(kTern, 4).size() == 15);
  CHECK(enumerate_joint_types(kBits, kBits, 3).size() == 20);  // C(6,3)
}

TEST_CASE("multinomial and type class size") {
  CHECK(multinomial(4, {2, 2}) == 6);
  CHECK(multinomial(6, {2, 2, 2}) == 90);
  SequenceType t{kBits, 4, {2, 2}};
  CHECK(type_class_size(t) == 6);

  TypeClassIter it(t);
  Seq s;
  std::set<Seq> seen;
  while (it.next(s)) {
    CHECK(type_of(kBits, s) == t);
    seen.insert(s);
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("type classes partition the whole space") {
  // sum of |T_P| over all P equals 2^n
  long long total = 0;
  for (const auto& t : enumerate_types(kBits, 7)) total += (long long)type_class_size(t);
  CHECK(total == 128);
}

TEST_CASE("conditional types and shells") {
  Seq x = {0, 0, 1, 1};  // type (2,2)
  std::vector<long long> in_counts = {2, 2};
  auto vs = enumerate_cond_types(in_counts, 4, 2);
  CHECK(vs.size() == 9);  // 3 rows choices per input symbol

  // shells of all V partition Z^n for this x
  long long total = 0;
  for (const auto& v : vs) total += (long long)vshell_size(v);
  CHECK(total == 16);

  // iterate one shell and cross-check sizes and membership
  for (const auto& v : vs) {
    VShellIter it(x, v);
    Seq z;
    long long cnt = 0;
    while (it.next(z)) {
      ++cnt;
      CHECK(cond_type_of(in_counts, x, z, 2, 2) == v);
    }
    CHECK(cnt == (long long)vshell_size(v));
  }
}

TEST_CASE("conditional type from pmf roundtrip") {
  std::vector<long long> in_counts = {2, 2};
  CondPmf v(kBits, kBits, {{0.5, 0.5}, {1.0, 0.0}});
  CondType t = cond_type_from_pmf(v, in_counts, 4);
  CHECK(t.counts[0][0] == 1);
  CHECK(t.counts[1][0] == 2);
  CHECK_THROWS_AS(cond_type_from_pmf(
                      CondPmf(kBits, kBits, {{0.3, 0.7}, {1.0, 0.0}}), in_counts, 4),
                  ValidationError);
}

TEST_CASE("conditional entropy of a type") {
  CondType t{2, 2, 4, {2, 2}, {{1, 1}, {2, 0}}};
  CHECK(t.cond_entropy_bits() == doctest::Approx(0.5));
  auto q = t.out_counts();
  CHECK(q[0] == 3);
  CHECK(q[1] == 1);
}

TEST_CASE("pair sequences") {
  Seq sx = {0, 1}, sy = {1, 1};
  Seq p = pair_seq(sx, sy, 2);
  CHECK(p == Seq{1, 3});
}

TEST_CASE("enumeration cap guards blowups") {
  std::uint64_t old = enumeration_cap();
  set_enumeration_cap(10);
  CHECK_THROWS_AS(enumerate_joint_types(kTern, kTern, 8), CapExceeded);
  set_enumeration_cap(old);
}
