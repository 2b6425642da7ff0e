#pragma once

#include <string>
#include <vector>

#include "spb/macchannel.hpp"
#include "spb/probkit.hpp"
#include "spb/typeclasses.hpp"

namespace spb {

struct ChainStep {
  std::string id;     // which inequality of the chain
  double left = 0.0;  // worst-case LHS observed
  double right = 0.0;
  bool holds = false;
};

struct ChainReport {
  std::vector<ChainStep> steps;
  std::vector<std::string> flags;  // informational only, never failures
  bool overall = false;
  double e_avg = 0.0;
  double bound_xy = 0.0;  // exact joint-decoding lower bound
  double bound_x = 0.0;   // exact x-message lower bound
  double bound_y = 0.0;
};

// Checks every exactly-valid counting step of the error lower-bound chain on
// an explicit small code: decoder disjointness, shell partition of Z^n,
// per-shell equal probability (with the per-sequence identity), shell and
// marginal counting bounds, disjoint-union bounds, and the three resulting
// exact lower bounds on the average error.
ChainReport verify_chain_A1(const MultiUserCode& code, const Mac& w);

// Per-sequence identity on a single-user channel: every y in the shell
// T_V(x) has log2 W^n(y|x) = -n(D(V||W|P_x) + H_V(Z|X)) within 1e-9, and the
// minimizer of D + H over compatible conditional types is the shell of
// maximal per-sequence probability.
bool verify_identity_A2(const CondPmf& w, const Seq& x_seq, const CondPmf& v);

// Markov/pigeonhole subcode extraction on a raw error matrix: rows are the
// codewords of the book being trimmed. Requires mean error < threshold/2;
// returns the row indices kept (row mean < threshold), always at least half.
std::vector<std::size_t> extract_rows_A3(const std::vector<double>& err,
                                         std::size_t rows, std::size_t cols,
                                         double threshold);

struct SubcodeResult {
  MultiUserCode code;
  std::vector<std::size_t> kept;  // indices retained in the trimmed book
  bool trimmed_y = true;          // which book was trimmed (lower-rate kept)
};

SubcodeResult extract_subcode_A3(const MultiUserCode& code, const Mac& w,
                                 double threshold);

}  // namespace spb
