#include "spb/probkit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spb {

namespace {

void check_weights(const std::vector<double>& w, const char* what) {
  double sum = 0.0;
  for (double x : w) {
    if (x < 0.0 || !std::isfinite(x))
      throw ValidationError(std::string(what) + ": negative or non-finite weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError(std::string(what) + ": weights sum to " +
                          std::to_string(sum) + ", not 1");
}

void check_labels(const Alphabet& labels, const char* what) {
  if (labels.empty()) throw ValidationError(std::string(what) + ": empty alphabet");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw ValidationError(std::string(what) + ": duplicate alphabet label");
}

}  // namespace

Pmf::Pmf(Alphabet labels, std::vector<double> weights)
    : labels_(std::move(labels)), w_(std::move(weights)) {
  check_labels(labels_, "Pmf");
  if (labels_.size() != w_.size())
    throw ValidationError("Pmf: label/weight count mismatch");
  check_weights(w_, "Pmf");
}

Pmf Pmf::uniform(Alphabet labels) {
  std::vector<double> w(labels.size(), 1.0 / double(labels.size()));
  return Pmf(std::move(labels), std::move(w));
}

Pmf Pmf::point_mass(Alphabet labels, std::size_t at) {
  std::vector<double> w(labels.size(), 0.0);
  w.at(at) = 1.0;
  return Pmf(std::move(labels), std::move(w));
}

CondPmf::CondPmf(Alphabet in, Alphabet out, std::vector<std::vector<double>> rows)
    : in_(std::move(in)), out_(std::move(out)), rows_(std::move(rows)) {
  check_labels(in_, "CondPmf input");
  check_labels(out_, "CondPmf output");
  if (rows_.size() != in_.size())
    throw ValidationError("CondPmf: row count != input alphabet size");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != out_.size())
      throw ValidationError("CondPmf: row " + std::to_string(i) + " wrong width");
    check_weights(rows_[i], "CondPmf row");
  }
}

JointPmf::JointPmf(std::vector<std::string> names, std::vector<Alphabet> alphabets,
                   std::vector<double> weights)
    : names_(std::move(names)), alphabets_(std::move(alphabets)), w_(std::move(weights)) {
  if (names_.size() != alphabets_.size() || names_.size() < 2)
    throw ValidationError("JointPmf: need >= 2 named components");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size())
    throw ValidationError("JointPmf: duplicate component name");
  std::size_t cells = 1;
  for (const auto& a : alphabets_) {
    check_labels(a, "JointPmf component");
    cells *= a.size();
  }
  if (w_.size() != cells) throw ValidationError("JointPmf: weight count mismatch");
  check_weights(w_, "JointPmf");
}

std::size_t JointPmf::component(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw ValidationError("JointPmf: unknown component '" + name + "'");
}

JointPmf JointPmf::marginal(const std::vector<std::string>& names) const {
  std::vector<std::size_t> keep;
  keep.reserve(names.size());
  for (const auto& n : names) keep.push_back(component(n));

  std::vector<Alphabet> alph;
  for (auto k : keep) alph.push_back(alphabets_[k]);
  std::size_t out_cells = 1;
  for (const auto& a : alph) out_cells *= a.size();
  std::vector<double> out(out_cells, 0.0);

  const std::size_t arity = names_.size();
  std::vector<std::size_t> dims(arity), idx(arity, 0);
  for (std::size_t i = 0; i < arity; ++i) dims[i] = alphabets_[i].size();

  for (std::size_t flat = 0; flat < w_.size(); ++flat) {
    std::size_t o = 0;
    for (auto k : keep) o = o * dims[k] + idx[k];
    out[o] += w_[flat];
    for (std::size_t d = arity; d-- > 0;) {
      if (++idx[d] < dims[d]) break;
      idx[d] = 0;
    }
  }
  // marginal sums can drift a hair below the Pmf gate; they are exact sums of
  // validated weights, so construct without re-validating the total
  JointPmf m = *this;
  m.names_.clear();
  m.alphabets_ = alph;
  for (const auto& n : names) m.names_.push_back(n);
  m.w_ = std::move(out);
  return m;
}

double JointPmf::entropy_of(const std::vector<std::string>& names) const {
  return spb::entropy(marginal(names).weights());
}

double entropy(const std::vector<double>& weights) {
  double h = 0.0;
  for (double p : weights)
    if (p > 0.0) h -= p * std::log2(p);
  return h < 0.0 ? 0.0 : h;
}

double entropy(const Pmf& p) { return entropy(p.weights()); }

double cond_entropy(const JointPmf& j, const std::string& target,
                    const std::vector<std::string>& given) {
  std::vector<std::string> both = given;
  both.push_back(target);
  double h = j.entropy_of(both) - (given.empty() ? 0.0 : j.entropy_of(given));
  return h < 0.0 && h > -1e-9 ? 0.0 : h;
}

double mutual_info_groups(const JointPmf& j, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& given) {
  auto cat = [](std::vector<std::string> x, const std::vector<std::string>& y) {
    for (const auto& n : y) x.push_back(n);
    return x;
  };
  double hg = given.empty() ? 0.0 : j.entropy_of(given);
  double i = j.entropy_of(cat(a, given)) + j.entropy_of(cat(b, given)) - hg -
             j.entropy_of(cat(cat(a, b), given));
  return i < 0.0 && i > -1e-9 ? 0.0 : i;
}

double mutual_info(const JointPmf& j, const std::string& a, const std::string& b,
                   const std::vector<std::string>& given) {
  return mutual_info_groups(j, {a}, {b}, given);
}

double kl(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet())
    throw ValidationError("kl: alphabet mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d < 0.0 ? 0.0 : d;
}

double cond_kl(const CondPmf& v, const CondPmf& w, const Pmf& p) {
  if (v.input_alphabet() != w.input_alphabet() ||
      v.output_alphabet() != w.output_alphabet())
    throw ValidationError("cond_kl: channel alphabet mismatch");
  if (p.alphabet() != v.input_alphabet())
    throw ValidationError("cond_kl: input distribution alphabet mismatch");
  double d = 0.0;
  for (std::size_t x = 0; x < v.in_size(); ++x) {
    if (p[x] == 0.0) continue;  // zero-mass rows contribute nothing
    double row = kl(v.row(x), w.row(x));
    if (row == kInf) return kInf;
    d += p[x] * row;
  }
  return d;
}

}  // namespace spb
