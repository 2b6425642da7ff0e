#include "spb/macchannel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace spb {

Mac::Mac(Alphabet x, Alphabet y, Alphabet z, std::vector<double> w)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)), w_(std::move(w)) {
  // CondPmf over the product input validates stochasticity and labels
  (void)transition();
  lw_.resize(w_.size());
  for (std::size_t i = 0; i < w_.size(); ++i)
    lw_[i] = w_[i] > 0.0 ? std::log2(w_[i]) : -kInf;
}

CondPmf Mac::transition() const {
  Alphabet in;
  in.reserve(x_.size() * y_.size());
  for (const auto& a : x_)
    for (const auto& b : y_) in.push_back(a + "," + b);
  std::vector<std::vector<double>> rows(in.size());
  for (std::size_t p = 0; p < in.size(); ++p)
    rows[p].assign(w_.begin() + p * z_.size(), w_.begin() + (p + 1) * z_.size());
  return CondPmf(std::move(in), z_, std::move(rows));
}

double MultiUserCode::rate_x() const {
  return std::log2(double(codebook_x.size())) / double(n);
}
double MultiUserCode::rate_y() const {
  return std::log2(double(codebook_y.size())) / double(n);
}

MultiUserCode MultiUserCode::from_decoding_sets(
    int n, std::vector<Seq> cx, std::vector<Seq> cy, std::size_t nz,
    const std::vector<std::vector<std::uint64_t>>& sets) {
  MultiUserCode c;
  c.n = n;
  c.codebook_x = std::move(cx);
  c.codebook_y = std::move(cy);
  c.ml = false;
  std::uint64_t zn = pow_checked(nz, n);
  c.partition.assign(zn, -1);
  if (sets.size() != c.mx() * c.my())
    throw ValidationError("from_decoding_sets: need one set per message pair");
  for (std::size_t p = 0; p < sets.size(); ++p) {
    for (std::uint64_t r : sets[p]) {
      if (r >= zn) throw ValidationError("from_decoding_sets: rank out of range");
      if (c.partition[r] != -1)
        throw ValidationError("from_decoding_sets: decoding sets overlap");
      c.partition[r] = int(p);
    }
  }
  return c;
}

std::uint64_t seq_rank(const Seq& s, std::size_t base) {
  std::uint64_t r = 0;
  for (int v : s) r = r * base + std::uint64_t(v);
  return r;
}

Seq seq_unrank(std::uint64_t r, int n, std::size_t base) {
  Seq s(n);
  for (int i = n - 1; i >= 0; --i) {
    s[i] = int(r % base);
    r /= base;
  }
  return s;
}

std::uint64_t pow_checked(std::size_t base, int n) {
  std::uint64_t v = 1;
  for (int i = 0; i < n; ++i) {
    v *= base;
    if (v > enumeration_cap())
      throw CapExceeded("sequence space exceeds enumeration cap");
  }
  return v;
}

double nfold_log2_prob(const Mac& w, const Seq& x, const Seq& y, const Seq& z) {
  if (x.size() != y.size() || x.size() != z.size())
    throw ValidationError("nfold_prob: length mismatch");
  double l = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::size_t(x[i]) >= w.nx() || std::size_t(y[i]) >= w.ny() ||
        std::size_t(z[i]) >= w.nz())
      throw ValidationError("nfold_prob: symbol outside alphabet");
    double lw = w.log2w(x[i], y[i], z[i]);
    if (lw == -kInf) return -kInf;
    l += lw;
  }
  return l;
}

double nfold_prob(const Mac& w, const Seq& x, const Seq& y, const Seq& z) {
  double l = nfold_log2_prob(w, x, y, z);
  return l == -kInf ? 0.0 : std::exp2(l);
}

namespace {

std::vector<int> require_partition(const MultiUserCode& code, const Mac& w) {
  return code.ml ? ml_decoder(code, w) : code.partition;
}

ErrorReport evaluate_impl(const MultiUserCode& code, const Mac& w, bool parallel) {
  const std::uint64_t zn = pow_checked(w.nz(), code.n);
  const std::vector<int> part = require_partition(code, w);
  if (part.size() != zn)
    throw ValidationError("evaluate: partition size mismatch");
  const std::size_t mx = code.mx(), my = code.my();
  if (mx == 0 || my == 0) throw ValidationError("evaluate: empty codebook");

  ErrorReport rep;
  rep.per_pair.assign(mx * my, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(mx * my); ++p) {
    const Seq& cx = code.codebook_x[std::size_t(p) / my];
    const Seq& cy = code.codebook_y[std::size_t(p) % my];
    double correct = 0.0, comp = 0.0;  // Kahan
    for (std::uint64_t r = 0; r < zn; ++r) {
      if (part[r] != int(p)) continue;
      Seq z = seq_unrank(r, code.n, w.nz());
      double v = nfold_prob(w, cx, cy, z) - comp;
      double t = correct + v;
      comp = (t - correct) - v;
      correct = t;
    }
    rep.per_pair[std::size_t(p)] = 1.0 - correct;
  }
  double sum = 0.0;
  rep.maximal = 0.0;
  for (double e : rep.per_pair) {
    sum += e;
    rep.maximal = std::max(rep.maximal, e);
  }
  rep.average = sum / double(mx * my);
  return rep;
}

}  // namespace

std::vector<int> ml_decoder(const MultiUserCode& code, const Mac& w) {
  const std::uint64_t zn = pow_checked(w.nz(), code.n);
  const std::size_t mx = code.mx(), my = code.my();
  std::vector<int> part(zn, -1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(zn); ++r) {
    Seq z = seq_unrank(std::uint64_t(r), code.n, w.nz());
    double best = -kInf;
    int arg = 0;
    for (std::size_t i = 0; i < mx; ++i)
      for (std::size_t j = 0; j < my; ++j) {
        double l = nfold_log2_prob(w, code.codebook_x[i], code.codebook_y[j], z);
        if (l > best) {
          best = l;
          arg = int(i * my + j);
        }
      }
    part[r] = arg;
  }
  return part;
}

ErrorReport evaluate(const MultiUserCode& code, const Mac& w) {
  return evaluate_impl(code, w, true);
}
ErrorReport evaluate_serial(const MultiUserCode& code, const Mac& w) {
  return evaluate_impl(code, w, false);
}

bool is_good(const std::vector<Seq>& codebook) {
  std::set<Seq> seen(codebook.begin(), codebook.end());
  return seen.size() == codebook.size();
}

bool is_good(const MultiUserCode& code) {
  return is_good(code.codebook_x) && is_good(code.codebook_y);
}

namespace {

// D(V||W_row)+H(V|P) score in bits for a conditional type against the channel
// restricted to one y- (or x-) slice; +inf when V needs a zero transition.
double shell_score(const CondType& v, const Mac& w, std::size_t ny) {
  double score = v.cond_entropy_bits();
  for (std::size_t p = 0; p < v.in_size; ++p) {
    if (v.in_counts[p] == 0) continue;
    double pw = double(v.in_counts[p]) / double(v.n);
    for (std::size_t z = 0; z < v.out_size; ++z) {
      if (v.counts[p][z] == 0) continue;
      double vt = double(v.counts[p][z]) / double(v.in_counts[p]);
      double wz = w.w(p / ny, p % ny, z);
      if (wz == 0.0) return kInf;
      score += pw * vt * std::log2(vt / wz);
    }
  }
  return score;
}

// Repair one duplicated codeword in one book, per the single-codeword
// replacement construction: merge the duplicate's decoding mass into the kept
// copy, substitute a fresh same-type codeword, then grant it one output
// sequence per opposite message drawn from the most-probable shells, stealing
// only when the per-sequence probability does not decrease.
void repair_one(MultiUserCode& code, const Mac& w, bool x_side) {
  std::vector<Seq>& book = x_side ? code.codebook_x : code.codebook_y;
  const std::vector<Seq>& other = x_side ? code.codebook_y : code.codebook_x;
  const std::size_t my = code.my();
  const std::size_t m_sz = book.size();

  SequenceType comp = type_of(x_side ? Alphabet(w.x()) : Alphabet(w.y()), book[0]);
  for (const Seq& s : book)
    if (!(type_of(comp.alphabet, s) == comp))
      throw ValidationError("repair: codebook is not constant-composition");
  if (type_class_size(comp) < m_sz + 1)
    throw ValidationError("repair: type class too small for a fresh codeword");

  // first duplicated index (lexicographic-in-index tie rule)
  std::size_t dup = m_sz, kept = 0;
  for (std::size_t m = 1; m < m_sz && dup == m_sz; ++m)
    for (std::size_t l = 0; l < m; ++l)
      if (book[m] == book[l]) {
        dup = m;
        kept = l;
        break;
      }
  if (dup == m_sz) return;

  // fresh codeword: first in T_P not already in the book
  std::set<Seq> used(book.begin(), book.end());
  Seq fresh;
  TypeClassIter it(comp);
  for (Seq s; it.next(s);)
    if (!used.count(s)) {
      fresh = s;
      break;
    }

  auto pair_of = [&](std::size_t own, std::size_t oth) {
    return x_side ? int(own * my + oth) : int(oth * my + own);
  };

  // merge: decoding mass of every (dup, j) pair moves to (kept, j); the two
  // codewords are identical so the average error is unchanged
  std::vector<long long> set_size(code.mx() * code.my(), 0);
  for (int& p : code.partition) {
    if (p == -1) continue;
    std::size_t own = x_side ? std::size_t(p) / my : std::size_t(p) % my;
    std::size_t oth = x_side ? std::size_t(p) % my : std::size_t(p) / my;
    if (own == dup) p = pair_of(kept, oth);
    ++set_size[p];
  }
  book[dup] = fresh;

  for (std::size_t j = 0; j < other.size(); ++j) {
    const Seq& ox = x_side ? fresh : other[j];
    const Seq& oy = x_side ? other[j] : fresh;
    JointType jt = joint_type_of(w.x(), w.y(), ox, oy);
    Seq pseq = pair_seq(ox, oy, w.ny());

    auto shells = enumerate_cond_types(jt.counts, code.n, w.nz());
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(shells.size());
    for (std::size_t s = 0; s < shells.size(); ++s)
      order.emplace_back(shell_score(shells[s], w, w.ny()), s);
    std::stable_sort(order.begin(), order.end(),
                     [&](const auto& a, const auto& b) {
                       if (a.first != b.first) return a.first < b.first;
                       return shells[a.second].counts < shells[b.second].counts;
                     });

    const int new_pair = pair_of(dup, j);
    bool granted = false;
    for (const auto& [score, si] : order) {
      if (granted) break;
      VShellIter zit(pseq, shells[si]);
      for (Seq z; zit.next(z);) {
        std::uint64_t r = seq_rank(z, w.nz());
        int owner = code.partition[r];
        if (owner == -1) {
          code.partition[r] = new_pair;
          ++set_size[new_pair];
          granted = true;
          break;
        }
        if (owner == new_pair) continue;
        if (set_size[owner] < 2) continue;
        const Seq& dx = code.codebook_x[std::size_t(owner) / my];
        const Seq& dy = code.codebook_y[std::size_t(owner) % my];
        if (nfold_log2_prob(w, ox, oy, z) >=
            nfold_log2_prob(w, dx, dy, z) - 1e-12) {
          --set_size[owner];
          code.partition[r] = new_pair;
          ++set_size[new_pair];
          granted = true;
          break;
        }
      }
    }
    // if no admissible sequence exists the new pair keeps an empty set; the
    // merge step alone already left the average error unchanged
  }
}

}  // namespace

MultiUserCode repair(const MultiUserCode& code, const Mac& w) {
  MultiUserCode out = code;
  if (out.ml) {
    out.partition = ml_decoder(out, w);
    out.ml = false;
  }
  std::size_t guard = out.mx() + out.my() + 2;
  while (guard-- > 0) {
    if (!is_good(out.codebook_x))
      repair_one(out, w, true);
    else if (!is_good(out.codebook_y))
      repair_one(out, w, false);
    else
      return out;
  }
  throw Error("repair: did not converge");  // unreachable: one dup fixed per pass
}

namespace {

std::vector<Seq> candidate_words(const Mac& w, int n, bool x_side,
                                 const SequenceType* comp) {
  std::vector<Seq> out;
  std::size_t base = x_side ? w.nx() : w.ny();
  if (comp) {
    TypeClassIter it(*comp);
    for (Seq s; it.next(s);) out.push_back(s);
  } else {
    std::uint64_t total = pow_checked(base, n);
    for (std::uint64_t r = 0; r < total; ++r) out.push_back(seq_unrank(r, n, base));
  }
  return out;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    unsigned __int128 t = (unsigned __int128)r * (n - k + i);
    r = std::uint64_t(t / i);
  }
  return r;
}

std::vector<std::vector<int>> all_combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = int(i);
  for (;;) {
    out.push_back(c);
    std::size_t i = k;
    while (i-- > 0) {
      if (c[i] < int(n - k + i)) {
        ++c[i];
        for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
        break;
      }
      if (i == 0) return out;
    }
  }
}

}  // namespace

BestCodeResult best_code_search(const Mac& w, int n, int mx, int my,
                                const SequenceType* comp_x,
                                const SequenceType* comp_y,
                                std::optional<std::uint64_t> sample_seed,
                                std::uint64_t samples) {
  if (n < 1 || mx < 1 || my < 1)
    throw ValidationError("best_code_search: n, M_X, M_Y must be positive");
  std::vector<Seq> cand_x = candidate_words(w, n, true, comp_x);
  std::vector<Seq> cand_y = candidate_words(w, n, false, comp_y);
  if (std::size_t(mx) > cand_x.size() || std::size_t(my) > cand_y.size())
    throw ValidationError("best_code_search: codebook larger than candidate pool");

  std::uint64_t space =
      binom(cand_x.size(), std::size_t(mx)) * binom(cand_y.size(), std::size_t(my));
  std::vector<std::vector<int>> combos_x, combos_y;
  bool exhaustive = space <= enumeration_cap();
  std::mt19937_64 rng(sample_seed.value_or(0));

  std::uint64_t n_cases;
  if (exhaustive) {
    combos_x = all_combinations(cand_x.size(), std::size_t(mx));
    combos_y = all_combinations(cand_y.size(), std::size_t(my));
    n_cases = std::uint64_t(combos_x.size()) * combos_y.size();
  } else {
    if (!sample_seed || samples == 0)
      throw CapExceeded("best_code_search: search space " + std::to_string(space) +
                        " exceeds cap; pass a sample seed to search a subset");
    auto draw = [&](std::size_t pool, std::size_t k) {
      std::vector<int> idx(pool);
      for (std::size_t i = 0; i < pool; ++i) idx[i] = int(i);
      std::shuffle(idx.begin(), idx.end(), rng);
      std::vector<int> pick(idx.begin(), idx.begin() + k);
      std::sort(pick.begin(), pick.end());
      return pick;
    };
    for (std::uint64_t s = 0; s < samples; ++s) {
      combos_x.push_back(draw(cand_x.size(), std::size_t(mx)));
      combos_y.push_back(draw(cand_y.size(), std::size_t(my)));
    }
    n_cases = samples;
  }

  struct Best {
    double err = kInf;
    std::int64_t cx = -1, cy = -1;
  };
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(dynamic, 1) nowait
    for (std::ptrdiff_t a = 0; a < std::ptrdiff_t(combos_x.size()); ++a) {
      std::size_t b_lo = exhaustive ? 0 : std::size_t(a);
      std::size_t b_hi = exhaustive ? combos_y.size() : std::size_t(a) + 1;
      for (std::size_t b = b_lo; b < b_hi; ++b) {
        MultiUserCode c;
        c.n = n;
        for (int i : combos_x[std::size_t(a)]) c.codebook_x.push_back(cand_x[i]);
        for (int j : combos_y[b]) c.codebook_y.push_back(cand_y[j]);
        double err = evaluate_serial(c, w).average;
        // strict (value, index) total order keeps the reduction deterministic
        if (err < local.err ||
            (err == local.err &&
             (a < local.cx || (a == local.cx && std::int64_t(b) < local.cy)))) {
          local.err = err;
          local.cx = a;
          local.cy = std::int64_t(b);
        }
      }
    }
#pragma omp critical
    {
      if (local.cx >= 0 &&
          (local.err < best.err ||
           (local.err == best.err &&
            (local.cx < best.cx || (local.cx == best.cx && local.cy < best.cy))))) {
        best = local;
      }
    }
  }

  BestCodeResult res;
  res.exhaustive = exhaustive;
  res.examined = n_cases;
  res.code.n = n;
  for (int i : combos_x[std::size_t(best.cx)])
    res.code.codebook_x.push_back(cand_x[i]);
  for (int j : combos_y[std::size_t(best.cy)])
    res.code.codebook_y.push_back(cand_y[j]);
  res.code.ml = false;
  res.code.partition = ml_decoder(res.code, w);
  res.report = evaluate(res.code, w);
  return res;
}

}  // namespace spb
