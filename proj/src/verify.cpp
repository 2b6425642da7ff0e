#include "spb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

namespace spb {

namespace {

struct ShellData {
  CondType v;
  double size_log2 = 0.0;     // log2 |T_V|
  std::uint64_t size = 0;     // |T_V|
  double lp = 0.0;            // log2 of the common per-sequence probability
  double identity = 0.0;      // -n (D(V||W|P) + H_V(Z|XY)) via the pmf route
  double hv = 0.0;            // H_V(Z|XY) bits
  std::uint64_t tq = 0;       // |T_Q| of the output marginal type
  double hq = 0.0;            // H(Q) bits
};

struct KeyData {
  std::vector<long long> counts;  // joint type, x-major
  std::vector<ShellData> shells;
  std::map<std::vector<std::vector<long long>>, std::size_t> index;
};

double log2_per_seq(const Mac& w, const CondType& v) {
  const std::size_t ny = w.ny(), nz = w.nz();
  double lp = 0.0;
  for (std::size_t c = 0; c < v.in_size; ++c)
    for (std::size_t z = 0; z < nz; ++z) {
      if (v.counts[c][z] == 0) continue;
      if (w.w(c / ny, c % ny, z) <= 0.0) return -kInf;
      lp += double(v.counts[c][z]) * w.log2w(c / ny, c % ny, z);
    }
  return lp;
}

std::vector<double> fractions(const std::vector<long long>& counts, int n) {
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    f[i] = double(counts[i]) / double(n);
  return f;
}

// shell of the output given only one conditioning sequence: aggregate the
// conditional type over the other input
std::uint64_t aggregated_shell_size(const CondType& v, std::size_t nx,
                                    std::size_t ny, bool over_x) {
  CondType agg;
  agg.in_size = over_x ? ny : nx;
  agg.out_size = v.out_size;
  agg.n = v.n;
  agg.in_counts.assign(agg.in_size, 0);
  agg.counts.assign(agg.in_size, std::vector<long long>(v.out_size, 0));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      std::size_t c = x * ny + y, g = over_x ? y : x;
      agg.in_counts[g] += v.in_counts[c];
      for (std::size_t z = 0; z < v.out_size; ++z)
        agg.counts[g][z] += v.counts[c][z];
    }
  return vshell_size(agg);
}

}  // namespace

ChainReport verify_chain_A1(const MultiUserCode& code, const Mac& w) {
  if (!is_good(code)) throw ValidationError("verify_chain_A1: code is not good");
  const int n = code.n;
  const std::size_t mx = code.mx(), my = code.my(), m = mx * my;
  const std::size_t nz = w.nz();
  const std::uint64_t zn = pow_checked(nz, n);
  std::vector<int> part = code.ml ? ml_decoder(code, w) : code.partition;
  if (part.size() != zn)
    throw ValidationError("verify_chain_A1: partition size mismatch");

  ErrorReport rep = evaluate_serial(code, w);
  CondPmf trans = w.transition();

  // shell data per joint type present in the code
  std::map<std::vector<long long>, KeyData> keys;
  std::vector<const KeyData*> pair_key(m);
  std::vector<Seq> pair_in(m);
  for (std::size_t i = 0; i < mx; ++i)
    for (std::size_t j = 0; j < my; ++j) {
      JointType jt = joint_type_of(w.x(), w.y(), code.codebook_x[i],
                                   code.codebook_y[j]);
      auto [it, fresh] = keys.try_emplace(jt.counts);
      if (fresh) {
        KeyData& kd = it->second;
        kd.counts = jt.counts;
        Pmf p(trans.input_alphabet(), fractions(jt.counts, n));
        for (CondType& v : enumerate_cond_types(jt.counts, n, nz)) {
          ShellData sd;
          sd.size = vshell_size(v);
          sd.size_log2 = std::log2(double(sd.size));
          sd.lp = log2_per_seq(w, v);
          sd.hv = v.cond_entropy_bits();
          double d = cond_kl(v.to_cond_pmf(trans.input_alphabet(), w.z()), trans, p);
          sd.identity = (d == kInf) ? -kInf : -double(n) * (d + sd.hv);
          auto q = v.out_counts();
          sd.tq = multinomial(n, q);
          sd.hq = entropy(fractions(q, n));
          kd.index[v.counts] = kd.shells.size();
          sd.v = std::move(v);
          kd.shells.push_back(std::move(sd));
        }
      }
      pair_key[i * my + j] = &it->second;
      pair_in[i * my + j] = pair_seq(code.codebook_x[i], code.codebook_y[j],
                                     w.ny());
    }

  // tallies per pair and shell: all of Z^n, D_ij, D_i = U_j' D_ij', D_j
  std::vector<std::vector<std::uint64_t>> tally(m), dij(m), di(m), dj(m);
  for (std::size_t p = 0; p < m; ++p) {
    std::size_t k = pair_key[p]->shells.size();
    tally[p].assign(k, 0);
    dij[p].assign(k, 0);
    di[p].assign(k, 0);
    dj[p].assign(k, 0);
  }

  double eq_dev = 0.0, id_dev = 0.0;
  bool lp_consistent = true;
  std::uint64_t owned = 0;
  for (std::uint64_t zr = 0; zr < zn; ++zr) {
    Seq zs = seq_unrank(zr, n, nz);
    int owner = part[zr];
    if (owner >= 0) ++owned;
    for (std::size_t p = 0; p < m; ++p) {
      const KeyData& kd = *pair_key[p];
      CondType ct = cond_type_of(kd.counts, pair_in[p], zs, kd.counts.size(), nz);
      std::size_t idx = kd.index.at(ct.counts);
      ++tally[p][idx];
      if (owner >= 0) {
        if (std::size_t(owner) == p) ++dij[p][idx];
        if (std::size_t(owner) / my == p / my) ++di[p][idx];
        if (std::size_t(owner) % my == p % my) ++dj[p][idx];
      }
      double lpz = nfold_log2_prob(w, code.codebook_x[p / my],
                                   code.codebook_y[p % my], zs);
      double lpv = kd.shells[idx].lp;
      if (lpz == -kInf || lpv == -kInf) {
        if (lpz != lpv) lp_consistent = false;
      } else {
        eq_dev = std::max(eq_dev, std::abs(lpz - lpv));
      }
      double idv = kd.shells[idx].identity;
      if (lpv != -kInf && idv != -kInf)
        id_dev = std::max(id_dev, std::abs(lpv - idv));
      else if ((lpv == -kInf) != (idv == -kInf))
        lp_consistent = false;
    }
  }

  ChainReport out;
  out.e_avg = rep.average;
  auto step = [&](const std::string& id, double left, double right, bool ok) {
    out.steps.push_back({id, left, right, ok});
  };

  step("decoder-disjoint", double(owned), double(zn), owned <= zn);

  long long part_dev = 0;
  for (std::size_t p = 0; p < m; ++p) {
    const KeyData& kd = *pair_key[p];
    for (std::size_t s = 0; s < kd.shells.size(); ++s)
      part_dev = std::max(part_dev,
                          std::llabs((long long)(tally[p][s]) -
                                     (long long)(kd.shells[s].size)));
  }
  step("shell-partition", double(part_dev), 0.0, part_dev == 0 && lp_consistent);
  step("equal-probability", eq_dev, 1e-9, eq_dev <= 1e-9);
  step("sequence-identity", id_dev, 1e-9, id_dev <= 1e-9);

  double shell_excess = -kInf, marg_excess = -kInf;
  for (const auto& [key, kd] : keys)
    for (const ShellData& sd : kd.shells) {
      shell_excess = std::max(shell_excess, sd.size_log2 - double(n) * sd.hv);
      marg_excess =
          std::max(marg_excess, std::log2(double(sd.tq)) - double(n) * sd.hq);
    }
  step("shell-count", shell_excess, 0.0, shell_excess <= 1e-9);
  step("marginal-count", marg_excess, 0.0, marg_excess <= 1e-9);

  // disjoint-union counting bounds and the resulting exact error bounds
  const double inv_m = 1.0 / double(m);
  double l_xy = 0.0;
  long long union_xy_excess = 0;
  for (const auto& [key, kd] : keys) {
    std::vector<std::size_t> members;
    for (std::size_t p = 0; p < m; ++p)
      if (pair_key[p] == &kd) members.push_back(p);
    double mg = double(members.size());
    for (std::size_t s = 0; s < kd.shells.size(); ++s) {
      const ShellData& sd = kd.shells[s];
      double cap = std::min(mg * double(sd.size), double(sd.tq));
      long long hits = 0;
      for (std::size_t p : members) hits += (long long)(dij[p][s]);
      union_xy_excess =
          std::max(union_xy_excess, hits - (long long)(std::llround(cap)));
      if (sd.lp == -kInf) continue;
      l_xy += inv_m * std::exp2(sd.lp) *
              std::max(0.0, mg * double(sd.size) - cap);
    }
  }
  step("union-xy", double(union_xy_excess), 0.0, union_xy_excess <= 0);
  out.bound_xy = l_xy;
  step("lower-bound-xy", l_xy, rep.average, l_xy <= rep.average + 1e-9);

  // one-message bounds: fix the other index, group same-joint-type senders
  auto side_bound = [&](bool x_side, double& lower, long long& excess,
                        bool& paper_flag) {
    lower = 0.0;
    excess = 0;
    paper_flag = false;
    std::size_t fixed_count = x_side ? my : mx;
    std::size_t free_count = x_side ? mx : my;
    for (std::size_t f = 0; f < fixed_count; ++f) {
      std::map<const KeyData*, std::vector<std::size_t>> groups;
      for (std::size_t g = 0; g < free_count; ++g) {
        std::size_t p = x_side ? g * my + f : f * my + g;
        groups[pair_key[p]].push_back(p);
      }
      for (const auto& [kd, members] : groups) {
        double mg = double(members.size());
        for (std::size_t s = 0; s < kd->shells.size(); ++s) {
          const ShellData& sd = kd->shells[s];
          std::uint64_t cap_u =
              aggregated_shell_size(sd.v, w.nx(), w.ny(), /*over_x=*/x_side);
          double cap =
              std::min({mg * double(sd.size), double(cap_u), double(zn)});
          long long hits = 0;
          for (std::size_t p : members)
            hits += (long long)(x_side ? di[p][s] : dj[p][s]);
          excess = std::max(excess, hits - (long long)(std::llround(cap)));
          // the terse 2^{n(H_V(Z|XY)+H(X|Y))}-style count, informational only
          std::vector<long long> other(x_side ? w.ny() : w.nx(), 0);
          for (std::size_t x = 0; x < w.nx(); ++x)
            for (std::size_t y = 0; y < w.ny(); ++y)
              other[x_side ? y : x] += kd->counts[x * w.ny() + y];
          double h_cond = entropy(fractions(kd->counts, n)) -
                          entropy(fractions(other, n));
          if (double(hits) > std::exp2(double(n) * (sd.hv + h_cond)) * (1 + 1e-9))
            paper_flag = true;
          if (sd.lp == -kInf) continue;
          lower += inv_m * std::exp2(sd.lp) *
                   std::max(0.0, mg * double(sd.size) - cap);
        }
      }
    }
  };

  long long ux_excess = 0, uy_excess = 0;
  bool flag_x = false, flag_y = false;
  side_bound(true, out.bound_x, ux_excess, flag_x);
  side_bound(false, out.bound_y, uy_excess, flag_y);
  step("union-x", double(ux_excess), 0.0, ux_excess <= 0);
  step("union-y", double(uy_excess), 0.0, uy_excess <= 0);
  step("lower-bound-x", out.bound_x, rep.average,
       out.bound_x <= rep.average + 1e-9);
  step("lower-bound-y", out.bound_y, rep.average,
       out.bound_y <= rep.average + 1e-9);
  if (flag_x)
    out.flags.push_back("x-side shell hits exceed the entropy-pair count");
  if (flag_y)
    out.flags.push_back("y-side shell hits exceed the entropy-pair count");

  out.overall = true;
  for (const ChainStep& st : out.steps) out.overall = out.overall && st.holds;
  return out;
}

bool verify_identity_A2(const CondPmf& w, const Seq& x_seq, const CondPmf& v) {
  const int n = int(x_seq.size());
  if (n == 0) throw ValidationError("verify_identity_A2: empty sequence");
  SequenceType px = type_of(w.input_alphabet(), x_seq);
  CondType vt = cond_type_from_pmf(v, px.counts, n);
  if (vshell_size(vt) == 0) throw ValidationError("verify_identity_A2: empty shell");

  Pmf p(w.input_alphabet(), [&] {
    std::vector<double> f(px.counts.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] = double(px.counts[i]) / double(n);
    return f;
  }());
  double d = cond_kl(v, w, p);
  double h = vt.cond_entropy_bits();
  double expected = (d == kInf) ? -kInf : -double(n) * (d + h);

  VShellIter it(x_seq, vt);
  Seq y;
  while (it.next(y)) {
    double lp = 0.0;
    for (int t = 0; t < n; ++t) {
      double wt = w.at(std::size_t(x_seq[std::size_t(t)]),
                       std::size_t(y[std::size_t(t)]));
      if (wt <= 0.0) {
        lp = -kInf;
        break;
      }
      lp += std::log2(wt);
    }
    if (expected == -kInf || lp == -kInf) {
      if (expected != lp) return false;
    } else if (std::abs(lp - expected) > 1e-9) {
      return false;
    }
  }

  // the (D + H)-minimizing shell must carry the largest per-sequence
  // probability; compare the pmf-route argmin against direct count sums
  double best_score = kInf, best_lp = -kInf, max_lp = -kInf;
  for (const CondType& cand : enumerate_cond_types(px.counts, n, w.out_size())) {
    double cd = cond_kl(cand.to_cond_pmf(w.input_alphabet(), w.output_alphabet()),
                        w, p);
    double score = (cd == kInf) ? kInf : cd + cand.cond_entropy_bits();
    double lp = 0.0;
    for (std::size_t c = 0; c < cand.in_size; ++c)
      for (std::size_t z = 0; z < cand.out_size; ++z) {
        if (cand.counts[c][z] == 0) continue;
        double wt = w.at(c, z);
        lp = (wt <= 0.0 || lp == -kInf)
                 ? -kInf
                 : lp + double(cand.counts[c][z]) * std::log2(wt);
      }
    if (score < best_score) {
      best_score = score;
      best_lp = lp;
    }
    max_lp = std::max(max_lp, lp);
  }
  if (max_lp == -kInf) return best_lp == -kInf;
  return best_lp >= max_lp - 1e-9;
}

std::vector<std::size_t> extract_rows_A3(const std::vector<double>& err,
                                         std::size_t rows, std::size_t cols,
                                         double threshold) {
  if (err.size() != rows * cols || rows == 0 || cols == 0)
    throw ValidationError("extract_rows_A3: bad matrix shape");
  double mean = 0.0;
  for (double e : err) mean += e;
  mean /= double(rows * cols);
  if (!(mean < threshold / 2.0))
    throw ValidationError("extract_rows_A3: mean error not below threshold/2");
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < rows; ++r) {
    double rm = 0.0;
    for (std::size_t c = 0; c < cols; ++c) rm += err[r * cols + c];
    if (rm / double(cols) < threshold) kept.push_back(r);
  }
  // Markov: fewer than half the rows can reach the doubled mean
  return kept;
}

SubcodeResult extract_subcode_A3(const MultiUserCode& code, const Mac& w,
                                 double threshold) {
  MultiUserCode base = code;
  if (base.ml) {
    base.partition = ml_decoder(base, w);
    base.ml = false;
  }
  ErrorReport rep = evaluate_serial(base, w);
  const std::size_t mx = base.mx(), my = base.my();

  SubcodeResult out;
  out.trimmed_y = base.rate_x() <= base.rate_y();
  if (out.trimmed_y) {
    std::vector<double> err(my * mx);
    for (std::size_t j = 0; j < my; ++j)
      for (std::size_t i = 0; i < mx; ++i) err[j * mx + i] = rep.per_pair[i * my + j];
    out.kept = extract_rows_A3(err, my, mx, threshold);
  } else {
    out.kept = extract_rows_A3(rep.per_pair, mx, my, threshold);
  }

  MultiUserCode sub;
  sub.n = base.n;
  sub.ml = false;
  std::vector<long long> remap(out.trimmed_y ? my : mx, -1);
  for (std::size_t k = 0; k < out.kept.size(); ++k) remap[out.kept[k]] = (long long)k;
  if (out.trimmed_y) {
    sub.codebook_x = base.codebook_x;
    for (std::size_t j : out.kept) sub.codebook_y.push_back(base.codebook_y[j]);
  } else {
    sub.codebook_y = base.codebook_y;
    for (std::size_t i : out.kept) sub.codebook_x.push_back(base.codebook_x[i]);
  }
  sub.partition.assign(base.partition.size(), -1);
  const std::size_t new_my = sub.my();
  for (std::size_t z = 0; z < base.partition.size(); ++z) {
    int p = base.partition[z];
    if (p < 0) continue;
    std::size_t i = std::size_t(p) / my, j = std::size_t(p) % my;
    if (out.trimmed_y) {
      if (remap[j] >= 0) sub.partition[z] = int(i * new_my + std::size_t(remap[j]));
    } else {
      if (remap[i] >= 0)
        sub.partition[z] = int(std::size_t(remap[i]) * new_my + j);
    }
  }
  out.code = std::move(sub);
  return out;
}

}  // namespace spb
