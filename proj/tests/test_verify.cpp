#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spb/verify.hpp"
#include "test_util.hpp"

using namespace spb;
using namespace testutil;

namespace {

MultiUserCode random_good_code(std::mt19937_64& rng, const Mac& w, int n,
                               std::size_t mx, std::size_t my) {
  MultiUserCode c;
  c.n = n;
  c.codebook_x = random_codebook(rng, n, mx, w.nx(), true);
  c.codebook_y = random_codebook(rng, n, my, w.ny(), true);
  c.ml = false;
  c.partition = ml_decoder(c, w);
  return c;
}

}  // namespace

TEST_CASE("chain holds on random good codes") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 10; ++t) {
    Mac w = random_mac(rng, 2, 2, 3);
    MultiUserCode code = random_good_code(rng, w, 3, 2, 3);
    ChainReport rep = verify_chain_A1(code, w);
    for (const ChainStep& st : rep.steps) {
      INFO("step ", st.id, " left=", st.left, " right=", st.right);
      CHECK(st.holds);
    }
    CHECK(rep.overall);
    CHECK(rep.bound_xy <= rep.e_avg + 1e-9);
    CHECK(rep.bound_x <= rep.e_avg + 1e-9);
    CHECK(rep.bound_y <= rep.e_avg + 1e-9);
  }
}

TEST_CASE("chain degenerates gracefully on a single-pair code") {
  std::mt19937_64 rng(103);
  Mac w = random_mac(rng, 2, 2, 2);
  MultiUserCode code = random_good_code(rng, w, 2, 1, 1);
  ChainReport rep = verify_chain_A1(code, w);
  CHECK(rep.overall);
}

TEST_CASE("chain rejects bad codes") {
  std::mt19937_64 rng(107);
  Mac w = random_mac(rng, 2, 2, 2);
  MultiUserCode code;
  code.n = 2;
  code.codebook_x = {{0, 1}, {0, 1}};
  code.codebook_y = {{1, 0}};
  code.ml = true;
  CHECK_THROWS_AS(verify_chain_A1(code, w), ValidationError);
}

TEST_CASE("per-sequence identity on single-user shells") {
  std::mt19937_64 rng(109);
  for (int t = 0; t < 10; ++t) {
    Mac m = random_mac(rng, 2, 1, 2);  // single-user view via |Y| = 1
    CondPmf w(m.x(), m.z(), {{m.w(0, 0, 0), m.w(0, 0, 1)},
                             {m.w(1, 0, 0), m.w(1, 0, 1)}});
    Seq x = random_codebook(rng, 6, 1, 2, false)[0];
    SequenceType px = type_of(w.input_alphabet(), x);
    for (const CondType& vt : enumerate_cond_types(px.counts, 6, 2)) {
      CondPmf v = vt.to_cond_pmf(w.input_alphabet(), w.output_alphabet());
      CHECK(verify_identity_A2(w, x, v));
    }
  }
}

TEST_CASE("identity detects deterministic channels") {
  CondPmf w({"0", "1"}, {"a", "b"}, {{1.0, 0.0}, {0.0, 1.0}});
  Seq x = {0, 1, 0};
  // V equal to the channel's own conditional type: probability one shell
  CondPmf v = w;
  CHECK(verify_identity_A2(w, x, v));
}

TEST_CASE("subcode extraction on a constructed matrix") {
  // 4x4 matrix: two rows at the mean, two rows far above
  std::vector<double> err = {
      0.01, 0.01, 0.01, 0.01,   // mean 0.01
      0.02, 0.02, 0.02, 0.02,   // mean 0.02
      0.30, 0.30, 0.30, 0.30,   // mean 0.30 (above threshold)
      0.03, 0.03, 0.03, 0.03};  // mean 0.03
  double threshold = 0.2;       // overall mean 0.09 < 0.1
  auto kept = extract_rows_A3(err, 4, 4, threshold);
  CHECK(kept == std::vector<std::size_t>{0, 1, 3});
  CHECK(kept.size() >= 2);  // at least half
}

TEST_CASE("subcode extraction rejects a violated hypothesis") {
  std::vector<double> err(16, 0.3);
  CHECK_THROWS_AS(extract_rows_A3(err, 4, 4, 0.5), ValidationError);
}

TEST_CASE("subcode extraction on an explicit code") {
  std::mt19937_64 rng(113);
  for (int t = 0; t < 5; ++t) {
    Mac w = random_mac(rng, 2, 2, 2, 0.01);
    MultiUserCode code = random_good_code(rng, w, 4, 2, 4);
    ErrorReport rep = evaluate_serial(code, w);
    double threshold = 2.5 * rep.average + 1e-6;
    SubcodeResult sub = extract_subcode_A3(code, w, threshold);
    std::size_t trimmed_from = sub.trimmed_y ? code.my() : code.mx();
    CHECK(sub.kept.size() * 2 >= trimmed_from);
    ErrorReport after = evaluate_serial(sub.code, w);
    double other = double(sub.trimmed_y ? sub.code.mx() : sub.code.my());
    for (double e : after.per_pair) CHECK(e < threshold * other + 1e-12);
  }
}

TEST_CASE("single-row book is retained trivially") {
  std::vector<double> err = {0.01, 0.02};
  auto kept = extract_rows_A3(err, 1, 2, 0.1);
  CHECK(kept == std::vector<std::size_t>{0});
}
