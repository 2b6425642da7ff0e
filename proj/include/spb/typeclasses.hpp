#pragma once

#include <cstdint>
#include <vector>

#include "spb/probkit.hpp"

namespace spb {

using Seq = std::vector<int>;  // symbol indices into an alphabet

// Global guard for exhaustive enumerations (default 1e7 items).
std::uint64_t enumeration_cap();
void set_enumeration_cap(std::uint64_t cap);

// Empirical type of a length-n sequence: exact integer counts.
struct SequenceType {
  Alphabet alphabet;
  int n = 0;
  std::vector<long long> counts;  // one per symbol, sums to n

  Pmf to_pmf() const;
  bool operator==(const SequenceType&) const = default;
};

struct JointType {
  Alphabet ax, ay;
  int n = 0;
  std::vector<long long> counts;  // |ax|*|ay|, row-major over (x,y)

  SequenceType marginal_x() const;
  SequenceType marginal_y() const;
  bool operator==(const JointType&) const = default;
};

SequenceType type_of(const Alphabet& a, const Seq& seq);
JointType joint_type_of(const Alphabet& ax, const Alphabet& ay, const Seq& sx,
                        const Seq& sy);

// All compositions of `total` into `parts` nonnegative integers, lex order.
std::vector<std::vector<long long>> compositions(long long total, std::size_t parts);

// P_n(X): exactly C(n+|X|-1, |X|-1) types.
std::vector<SequenceType> enumerate_types(const Alphabet& a, int n);
std::vector<JointType> enumerate_joint_types(const Alphabet& ax, const Alphabet& ay,
                                             int n);

std::uint64_t multinomial(long long n, const std::vector<long long>& counts);
std::uint64_t type_class_size(const SequenceType& t);

// Lazy lexicographic iteration over T_P.
class TypeClassIter {
 public:
  explicit TypeClassIter(const SequenceType& t);
  bool next(Seq& out);  // false when exhausted

 private:
  Seq cur_;
  bool first_ = true;
};

// Exact conditional type: per-input-symbol integer counts over the output
// alphabet. Input symbols are pairs (x,y) flattened x-major when conditioning
// on two sequences.
struct CondType {
  std::size_t in_size = 0, out_size = 0;
  int n = 0;
  std::vector<long long> in_counts;                // conditioning joint counts
  std::vector<std::vector<long long>> counts;      // [in][z], row sums = in_counts

  // H_V(Z|input) in bits under the conditioning type.
  double cond_entropy_bits() const;
  // Induced output marginal type over Z.
  std::vector<long long> out_counts() const;
  // Rows with zero conditioning mass become uniform.
  CondPmf to_cond_pmf(const Alphabet& in, const Alphabet& out) const;

  bool operator<(const CondType& o) const { return counts < o.counts; }
  bool operator==(const CondType&) const = default;
};

// All conditional types compatible with a joint conditioning type.
std::vector<CondType> enumerate_cond_types(const std::vector<long long>& in_counts,
                                           int n, std::size_t out_size);

// Conditional type of z_seq given the flattened pair sequence.
CondType cond_type_of(const std::vector<long long>& in_counts, const Seq& in_seq,
                      const Seq& out_seq, std::size_t in_size, std::size_t out_size);

// Convert a rational CondPmf into exact shell counts; throws if incompatible.
CondType cond_type_from_pmf(const CondPmf& v, const std::vector<long long>& in_counts,
                            int n);

std::uint64_t vshell_size(const CondType& v);

// Iterates z-sequences in the shell T_V(in_seq): all z with conditional type v.
// Deterministic order (per-input-group multiset permutations, last group
// fastest).
class VShellIter {
 public:
  VShellIter(const Seq& in_seq, const CondType& v);
  bool next(Seq& out);

 private:
  std::vector<std::vector<std::size_t>> positions_;  // per input symbol
  std::vector<Seq> group_;                           // current per-group pattern
  int n_ = 0;
  bool first_ = true;
};

// Flattened (x,y) pair sequence with pair index x*|Y|+y.
Seq pair_seq(const Seq& sx, const Seq& sy, std::size_t ny);

}  // namespace spb
