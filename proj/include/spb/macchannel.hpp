#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spb/probkit.hpp"
#include "spb/typeclasses.hpp"

namespace spb {

// Two-sender discrete memoryless multiple-access channel W : X x Y -> Z.
class Mac {
 public:
  Mac(Alphabet x, Alphabet y, Alphabet z, std::vector<double> w);  // w[x][y][z]

  const Alphabet& x() const { return x_; }
  const Alphabet& y() const { return y_; }
  const Alphabet& z() const { return z_; }
  std::size_t nx() const { return x_.size(); }
  std::size_t ny() const { return y_.size(); }
  std::size_t nz() const { return z_.size(); }

  double w(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return w_[(ix * y_.size() + iy) * z_.size() + iz];
  }
  double log2w(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return lw_[(ix * y_.size() + iy) * z_.size() + iz];
  }
  const std::vector<double>& flat() const { return w_; }  // (x*|Y|+y)*|Z|+z

  CondPmf transition() const;  // input alphabet = product labels "x,y"

 private:
  Alphabet x_, y_, z_;
  std::vector<double> w_, lw_;
};

// Explicit decoders map each z-sequence rank to a pair index i*M_Y+j, or -1
// for erasure. Pairwise-disjoint decoding sets are disjoint by construction.
struct MultiUserCode {
  int n = 0;
  std::vector<Seq> codebook_x, codebook_y;
  bool ml = true;                 // build the ML partition on demand
  std::vector<int> partition;    // size |Z|^n when explicit

  std::size_t mx() const { return codebook_x.size(); }
  std::size_t my() const { return codebook_y.size(); }
  double rate_x() const;
  double rate_y() const;

  // Builds an explicit decoder from per-pair z-sequence lists; throws on
  // overlapping sets (Definition-of-code violation) or out-of-range ranks.
  static MultiUserCode from_decoding_sets(
      int n, std::vector<Seq> cx, std::vector<Seq> cy, std::size_t nz,
      const std::vector<std::vector<std::uint64_t>>& sets);
};

struct ErrorReport {
  double average = 0.0;
  double maximal = 0.0;
  std::vector<double> per_pair;  // row-major i*M_Y+j
};

std::uint64_t seq_rank(const Seq& s, std::size_t base);
Seq seq_unrank(std::uint64_t r, int n, std::size_t base);
std::uint64_t pow_checked(std::size_t base, int n);  // throws CapExceeded past cap

double nfold_log2_prob(const Mac& w, const Seq& x, const Seq& y, const Seq& z);
double nfold_prob(const Mac& w, const Seq& x, const Seq& y, const Seq& z);

// Optimal (average-error) explicit partition; ties to the lexicographically
// smallest pair index.
std::vector<int> ml_decoder(const MultiUserCode& code, const Mac& w);

ErrorReport evaluate(const MultiUserCode& code, const Mac& w);         // OpenMP
ErrorReport evaluate_serial(const MultiUserCode& code, const Mac& w);  // reference

bool is_good(const std::vector<Seq>& codebook);
bool is_good(const MultiUserCode& code);

// Bad -> good repair for constant-composition codebooks. The returned code
// has an explicit decoder, no repeated codewords, unchanged sizes, and
// average error <= the input's.
MultiUserCode repair(const MultiUserCode& code, const Mac& w);

struct BestCodeResult {
  MultiUserCode code;
  ErrorReport report;
  bool exhaustive = true;
  std::uint64_t examined = 0;
};

// Exhaustive search over good codebooks (distinct codewords, optionally
// constant composition) under ML decoding. With sample_seed set, draws
// `samples` random codebook pairs instead when the space exceeds the cap.
BestCodeResult best_code_search(const Mac& w, int n, int mx, int my,
                                const SequenceType* comp_x = nullptr,
                                const SequenceType* comp_y = nullptr,
                                std::optional<std::uint64_t> sample_seed = {},
                                std::uint64_t samples = 0);

}  // namespace spb
