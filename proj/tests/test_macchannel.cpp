#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spb/macchannel.hpp"
#include "test_util.hpp"

using namespace spb;
using namespace testutil;

TEST_CASE("mac construction validates rows") {
  CHECK_THROWS_AS(Mac({"0", "1"}, {"0"}, {"a", "b"}, {0.5, 0.4, 1.0, 0.0}),
                  ValidationError);
  Mac w = adder_mac();
  CHECK(w.w(1, 1, 2) == 1.0);
  CHECK(w.transition().in_size() == 4);
}

TEST_CASE("sequence ranking roundtrip") {
  for (std::uint64_t r = 0; r < 27; ++r)
    CHECK(seq_rank(seq_unrank(r, 3, 3), 3) == r);
  CHECK(seq_rank({1, 0, 2}, 3) == 11);  // first symbol most significant
}

TEST_CASE("n-fold probabilities factorize") {
  std::mt19937_64 rng(7);
  Mac w = random_mac(rng, 2, 2, 3);
  Seq x = {0, 1, 1}, y = {1, 0, 1}, z = {2, 0, 1};
  double p = w.w(0, 1, 2) * w.w(1, 0, 0) * w.w(1, 1, 1);
  CHECK(nfold_prob(w, x, y, z) == doctest::Approx(p));
  CHECK(nfold_log2_prob(w, x, y, z) == doctest::Approx(std::log2(p)));
}

TEST_CASE("ml decoder is optimal and deterministic") {
  std::mt19937_64 rng(11);
  Mac w = random_mac(rng, 2, 2, 2);
  MultiUserCode code;
  code.n = 3;
  code.codebook_x = random_codebook(rng, 3, 2, 2, true);
  code.codebook_y = random_codebook(rng, 3, 2, 2, true);
  code.ml = false;
  code.partition = ml_decoder(code, w);

  // per z, the chosen pair maximizes the probability; ties go to smallest pair
  for (std::uint64_t zr = 0; zr < 8; ++zr) {
    Seq z = seq_unrank(zr, 3, 2);
    double best = -1;
    int arg = -1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double p = nfold_prob(w, code.codebook_x[std::size_t(i)],
                              code.codebook_y[std::size_t(j)], z);
        if (p > best + 1e-15) {
          best = p;
          arg = i * 2 + j;
        }
      }
    double chosen = nfold_prob(w, code.codebook_x[std::size_t(code.partition[zr] / 2)],
                               code.codebook_y[std::size_t(code.partition[zr] % 2)], z);
    CHECK(chosen == doctest::Approx(best));
    CHECK(code.partition[zr] <= arg);
  }
}

TEST_CASE("serial and parallel evaluation agree") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Mac w = random_mac(rng, 2, 2, 2);
    MultiUserCode code;
    code.n = 4;
    code.codebook_x = random_codebook(rng, 4, 3, 2, true);
    code.codebook_y = random_codebook(rng, 4, 3, 2, true);
    code.ml = false;
    code.partition = ml_decoder(code, w);
    ErrorReport a = evaluate_serial(code, w);
    ErrorReport b = evaluate(code, w);
    CHECK(a.average == doctest::Approx(b.average).epsilon(1e-13));
    CHECK(a.maximal == doctest::Approx(b.maximal).epsilon(1e-13));
  }
}

TEST_CASE("probabilities leaving each pair sum to one") {
  std::mt19937_64 rng(29);
  Mac w = random_mac(rng, 2, 2, 3);
  MultiUserCode code;
  code.n = 3;
  code.codebook_x = random_codebook(rng, 3, 2, 2, true);
  code.codebook_y = random_codebook(rng, 3, 2, 2, true);
  code.ml = false;
  code.partition = ml_decoder(code, w);
  ErrorReport r = evaluate_serial(code, w);
  for (double e : r.per_pair) {
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}

TEST_CASE("overlapping decoding sets rejected") {
  CHECK_THROWS_AS(MultiUserCode::from_decoding_sets(
                      1, {{0}, {1}}, {{0}}, 2, {{0}, {0}}),
                  ValidationError);
}

TEST_CASE("repair fixes constant-composition bad codes") {
  std::mt19937_64 rng(31);
  int fixed = 0;
  for (int trial = 0; trial < 25; ++trial) {
    Mac w = random_mac(rng, 2, 2, 2);
    // constant-composition codebooks with a forced duplicate
    SequenceType comp{w.x(), 4, {2, 2}};
    TypeClassIter it(comp);
    std::vector<Seq> words;
    Seq s;
    while (it.next(s)) words.push_back(s);
    std::shuffle(words.begin(), words.end(), rng);
    MultiUserCode code;
    code.n = 4;
    code.codebook_x = {words[0], words[0], words[1]};  // duplicate
    code.codebook_y = {words[2], words[3]};
    code.ml = true;
    CHECK(!is_good(code));
    double before = evaluate_serial(code, w).average;

    MultiUserCode rep = repair(code, w);
    CHECK(is_good(rep));
    CHECK(rep.mx() == code.mx());
    CHECK(rep.my() == code.my());
    CHECK(rep.n == code.n);
    double after = evaluate_serial(rep, w).average;
    CHECK(after <= before + 1e-12);
    ++fixed;
  }
  CHECK(fixed == 25);
}

TEST_CASE("best code search on the adder is perfect") {
  Mac w = adder_mac();
  BestCodeResult r = best_code_search(w, 2, 2, 2);
  CHECK(r.exhaustive);
  CHECK(r.report.average == doctest::Approx(0.0));
}

TEST_CASE("best code search is deterministic when sampling") {
  std::mt19937_64 rng(37);
  Mac w = random_mac(rng, 2, 2, 2);
  std::uint64_t old = enumeration_cap();
  set_enumeration_cap(500);  // force sampling
  BestCodeResult a = best_code_search(w, 3, 3, 3, nullptr, nullptr, 99, 200);
  BestCodeResult b = best_code_search(w, 3, 3, 3, nullptr, nullptr, 99, 200);
  set_enumeration_cap(old);
  CHECK(!a.exhaustive);
  CHECK(a.report.average == b.report.average);
  CHECK(a.code.codebook_x == b.code.codebook_x);
  CHECK(a.code.codebook_y == b.code.codebook_y);
}
