#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "spb/error.hpp"

namespace spb {

using Alphabet = std::vector<std::string>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Probability vector over a labeled finite alphabet.
// Construction rejects weights that do not sum to 1 within 1e-9; we never
// renormalize silently.
class Pmf {
 public:
  Pmf(Alphabet labels, std::vector<double> weights);

  const Alphabet& alphabet() const { return labels_; }
  const std::vector<double>& weights() const { return w_; }
  double operator[](std::size_t i) const { return w_[i]; }
  std::size_t size() const { return w_.size(); }

  static Pmf uniform(Alphabet labels);
  static Pmf point_mass(Alphabet labels, std::size_t at);

 private:
  Alphabet labels_;
  std::vector<double> w_;
};

// Row-stochastic mapping: one Pmf over the output alphabet per input symbol.
class CondPmf {
 public:
  CondPmf(Alphabet in, Alphabet out, std::vector<std::vector<double>> rows);

  const Alphabet& input_alphabet() const { return in_; }
  const Alphabet& output_alphabet() const { return out_; }
  std::size_t in_size() const { return in_.size(); }
  std::size_t out_size() const { return out_.size(); }
  double at(std::size_t in, std::size_t out) const { return rows_[in][out]; }
  Pmf row(std::size_t i) const { return Pmf(out_, rows_[i]); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  Alphabet in_, out_;
  std::vector<std::vector<double>> rows_;
};

// Distribution over a product of named finite alphabets, row-major flat
// weights (first component varies slowest).
class JointPmf {
 public:
  JointPmf(std::vector<std::string> names, std::vector<Alphabet> alphabets,
           std::vector<double> weights);

  std::size_t arity() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Alphabet>& alphabets() const { return alphabets_; }
  const std::vector<double>& weights() const { return w_; }
  std::size_t component(const std::string& name) const;  // throws on unknown

  // Marginal over the named components, in the order given.
  JointPmf marginal(const std::vector<std::string>& names) const;
  double entropy_of(const std::vector<std::string>& names) const;

 private:
  std::vector<std::string> names_;
  std::vector<Alphabet> alphabets_;
  std::vector<double> w_;
};

// All information measures are in bits (log base 2), 0*log0 := 0.
double entropy(const std::vector<double>& weights);
double entropy(const Pmf& p);
double cond_entropy(const JointPmf& j, const std::string& target,
                    const std::vector<std::string>& given);
double mutual_info(const JointPmf& j, const std::string& a,
                   const std::string& b,
                   const std::vector<std::string>& given = {});
// Same as mutual_info with grouped components, e.g. I(XY ^ Z | U).
double mutual_info_groups(const JointPmf& j, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& given = {});
double kl(const Pmf& p, const Pmf& q);
double cond_kl(const CondPmf& v, const CondPmf& w, const Pmf& p);

}  // namespace spb
