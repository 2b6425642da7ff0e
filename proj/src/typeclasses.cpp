#include "spb/typeclasses.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace spb {

namespace {
std::atomic<std::uint64_t> g_cap{10'000'000};
}

std::uint64_t enumeration_cap() { return g_cap.load(); }
void set_enumeration_cap(std::uint64_t cap) { g_cap.store(cap); }

Pmf SequenceType::to_pmf() const {
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    w[i] = double(counts[i]) / double(n);
  return Pmf(alphabet, w);
}

SequenceType JointType::marginal_x() const {
  SequenceType t{ax, n, std::vector<long long>(ax.size(), 0)};
  for (std::size_t x = 0; x < ax.size(); ++x)
    for (std::size_t y = 0; y < ay.size(); ++y) t.counts[x] += counts[x * ay.size() + y];
  return t;
}

SequenceType JointType::marginal_y() const {
  SequenceType t{ay, n, std::vector<long long>(ay.size(), 0)};
  for (std::size_t x = 0; x < ax.size(); ++x)
    for (std::size_t y = 0; y < ay.size(); ++y) t.counts[y] += counts[x * ay.size() + y];
  return t;
}

SequenceType type_of(const Alphabet& a, const Seq& seq) {
  if (seq.empty()) throw ValidationError("type_of: empty sequence (n >= 1 required)");
  SequenceType t{a, int(seq.size()), std::vector<long long>(a.size(), 0)};
  for (int s : seq) {
    if (s < 0 || std::size_t(s) >= a.size())
      throw ValidationError("type_of: symbol outside alphabet");
    ++t.counts[s];
  }
  return t;
}

JointType joint_type_of(const Alphabet& ax, const Alphabet& ay, const Seq& sx,
                        const Seq& sy) {
  if (sx.size() != sy.size())
    throw ValidationError("joint_type_of: sequence length mismatch");
  if (sx.empty()) throw ValidationError("joint_type_of: empty sequence");
  JointType t{ax, ay, int(sx.size()), std::vector<long long>(ax.size() * ay.size(), 0)};
  for (std::size_t i = 0; i < sx.size(); ++i) {
    if (sx[i] < 0 || std::size_t(sx[i]) >= ax.size() || sy[i] < 0 ||
        std::size_t(sy[i]) >= ay.size())
      throw ValidationError("joint_type_of: symbol outside alphabet");
    ++t.counts[std::size_t(sx[i]) * ay.size() + sy[i]];
  }
  return t;
}

std::vector<std::vector<long long>> compositions(long long total, std::size_t parts) {
  std::vector<std::vector<long long>> out;
  std::vector<long long> cur(parts, 0);
  // lex order, first coordinate slowest
  auto rec = [&](auto&& self, std::size_t i, long long rem) -> void {
    if (i + 1 == parts) {
      cur[i] = rem;
      out.push_back(cur);
      return;
    }
    for (long long k = 0; k <= rem; ++k) {
      cur[i] = k;
      self(self, i + 1, rem - k);
    }
  };
  if (parts == 0) {
    if (total == 0) out.push_back({});
    return out;
  }
  // C(total + parts - 1, parts - 1) results; guard before enumerating
  double count = 1.0;
  for (std::size_t i = 1; i < parts; ++i)
    count *= double(total + (long long)i) / double(i);
  if (count > double(enumeration_cap()))
    throw CapExceeded("compositions: enumeration cap exceeded");
  rec(rec, 0, total);
  return out;
}

std::vector<SequenceType> enumerate_types(const Alphabet& a, int n) {
  if (n < 1) throw ValidationError("enumerate_types: n >= 1 required");
  std::vector<SequenceType> out;
  for (auto& c : compositions(n, a.size())) out.push_back({a, n, std::move(c)});
  return out;
}

std::vector<JointType> enumerate_joint_types(const Alphabet& ax, const Alphabet& ay,
                                             int n) {
  if (n < 1) throw ValidationError("enumerate_joint_types: n >= 1 required");
  std::vector<JointType> out;
  for (auto& c : compositions(n, ax.size() * ay.size()))
    out.push_back({ax, ay, n, std::move(c)});
  return out;
}

std::uint64_t multinomial(long long n, const std::vector<long long>& counts) {
  // n! / prod counts_i!, computed as a product of binomials
  std::uint64_t result = 1;
  long long rem = n;
  for (long long c : counts) {
    // C(rem, c)
    std::uint64_t b = 1;
    for (long long i = 1; i <= c; ++i) {
      // careful order to stay integral: b * (rem - c + i) / i
      unsigned __int128 t = (unsigned __int128)b * std::uint64_t(rem - c + i);
      b = std::uint64_t(t / std::uint64_t(i));
      if (t / std::uint64_t(i) > UINT64_MAX / 2)
        throw CapExceeded("multinomial: value overflow");
    }
    unsigned __int128 r = (unsigned __int128)result * b;
    if (r > UINT64_MAX) throw CapExceeded("multinomial: value overflow");
    result = std::uint64_t(r);
    rem -= c;
  }
  return result;
}

std::uint64_t type_class_size(const SequenceType& t) {
  return multinomial(t.n, t.counts);
}

TypeClassIter::TypeClassIter(const SequenceType& t) {
  long long sum = 0;
  for (long long c : t.counts) sum += c;
  if (sum != t.n) throw ValidationError("TypeClassIter: counts do not sum to n");
  if (type_class_size(t) > enumeration_cap())
    throw CapExceeded("TypeClassIter: type class larger than enumeration cap");
  for (std::size_t s = 0; s < t.counts.size(); ++s)
    for (long long k = 0; k < t.counts[s]; ++k) cur_.push_back(int(s));
}

bool TypeClassIter::next(Seq& out) {
  if (first_) {
    first_ = false;
    out = cur_;
    return true;
  }
  if (!std::next_permutation(cur_.begin(), cur_.end())) return false;
  out = cur_;
  return true;
}

double CondType::cond_entropy_bits() const {
  double h = 0.0;
  for (std::size_t i = 0; i < in_size; ++i) {
    if (in_counts[i] == 0) continue;
    double pi = double(in_counts[i]) / double(n);
    double hi = 0.0;
    for (long long c : counts[i]) {
      if (c == 0) continue;
      double q = double(c) / double(in_counts[i]);
      hi -= q * std::log2(q);
    }
    h += pi * hi;
  }
  return h;
}

std::vector<long long> CondType::out_counts() const {
  std::vector<long long> out(out_size, 0);
  for (std::size_t i = 0; i < in_size; ++i)
    for (std::size_t z = 0; z < out_size; ++z) out[z] += counts[i][z];
  return out;
}

CondPmf CondType::to_cond_pmf(const Alphabet& in, const Alphabet& out) const {
  std::vector<std::vector<double>> rows(in_size);
  for (std::size_t i = 0; i < in_size; ++i) {
    rows[i].resize(out_size);
    if (in_counts[i] == 0) {
      for (auto& x : rows[i]) x = 1.0 / double(out_size);
    } else {
      for (std::size_t z = 0; z < out_size; ++z)
        rows[i][z] = double(counts[i][z]) / double(in_counts[i]);
    }
  }
  return CondPmf(in, out, std::move(rows));
}

std::vector<CondType> enumerate_cond_types(const std::vector<long long>& in_counts,
                                           int n, std::size_t out_size) {
  std::vector<std::vector<std::vector<long long>>> per_input;
  per_input.reserve(in_counts.size());
  std::uint64_t total = 1;
  for (long long m : in_counts) {
    per_input.push_back(compositions(m, out_size));
    total *= per_input.back().size();
    if (total > enumeration_cap())
      throw CapExceeded("enumerate_cond_types: too many conditional types");
  }
  std::vector<CondType> out;
  out.reserve(total);
  CondType cur{in_counts.size(), out_size, n, in_counts, {}};
  cur.counts.resize(in_counts.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == in_counts.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& c : per_input[i]) {
      cur.counts[i] = c;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

CondType cond_type_of(const std::vector<long long>& in_counts, const Seq& in_seq,
                      const Seq& out_seq, std::size_t in_size, std::size_t out_size) {
  if (in_seq.size() != out_seq.size())
    throw ValidationError("cond_type_of: length mismatch");
  CondType v{in_size, out_size, int(in_seq.size()), in_counts, {}};
  v.counts.assign(in_size, std::vector<long long>(out_size, 0));
  for (std::size_t t = 0; t < in_seq.size(); ++t)
    ++v.counts[in_seq[t]][out_seq[t]];
  return v;
}

CondType cond_type_from_pmf(const CondPmf& v, const std::vector<long long>& in_counts,
                            int n) {
  CondType out{v.in_size(), v.out_size(), n, in_counts, {}};
  out.counts.assign(v.in_size(), std::vector<long long>(v.out_size(), 0));
  for (std::size_t i = 0; i < v.in_size(); ++i) {
    long long row_sum = 0;
    for (std::size_t z = 0; z < v.out_size(); ++z) {
      double exact = double(in_counts[i]) * v.at(i, z);
      long long c = llround(exact);
      if (std::abs(exact - double(c)) > 1e-9)
        throw ValidationError("vshell: conditional type incompatible with joint type");
      out.counts[i][z] = c;
      row_sum += c;
    }
    if (row_sum != in_counts[i])
      throw ValidationError("vshell: conditional type incompatible with joint type");
  }
  return out;
}

std::uint64_t vshell_size(const CondType& v) {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < v.in_size; ++i) {
    if (v.in_counts[i] == 0) continue;
    unsigned __int128 t =
        (unsigned __int128)s * multinomial(v.in_counts[i], v.counts[i]);
    if (t > UINT64_MAX) throw CapExceeded("vshell_size: overflow");
    s = std::uint64_t(t);
  }
  return s;
}

VShellIter::VShellIter(const Seq& in_seq, const CondType& v) : n_(int(in_seq.size())) {
  if (vshell_size(v) > enumeration_cap())
    throw CapExceeded("VShellIter: shell larger than enumeration cap");
  positions_.resize(v.in_size);
  for (std::size_t t = 0; t < in_seq.size(); ++t)
    positions_[in_seq[t]].push_back(t);
  for (std::size_t i = 0; i < v.in_size; ++i) {
    if ((long long)(positions_[i].size()) != v.in_counts[i])
      throw ValidationError("VShellIter: conditioning counts mismatch");
    Seq g;
    for (std::size_t z = 0; z < v.out_size; ++z)
      for (long long k = 0; k < v.counts[i][z]; ++k) g.push_back(int(z));
    group_.push_back(std::move(g));
  }
}

bool VShellIter::next(Seq& out) {
  if (!first_) {
    // odometer over groups, last group fastest
    std::ptrdiff_t g = std::ptrdiff_t(group_.size()) - 1;
    for (; g >= 0; --g) {
      if (std::next_permutation(group_[g].begin(), group_[g].end())) break;
      std::sort(group_[g].begin(), group_[g].end());
    }
    if (g < 0) return false;
  }
  first_ = false;
  out.assign(n_, 0);
  for (std::size_t i = 0; i < positions_.size(); ++i)
    for (std::size_t k = 0; k < positions_[i].size(); ++k)
      out[positions_[i][k]] = group_[i][k];
  return true;
}

Seq pair_seq(const Seq& sx, const Seq& sy, std::size_t ny) {
  if (sx.size() != sy.size()) throw ValidationError("pair_seq: length mismatch");
  Seq p(sx.size());
  for (std::size_t i = 0; i < sx.size(); ++i)
    p[i] = int(std::size_t(sx[i]) * ny + sy[i]);
  return p;
}

}  // namespace spb
