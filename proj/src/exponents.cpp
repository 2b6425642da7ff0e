#include "spb/exponents.hpp"

#include <algorithm>
#include <cmath>

#include "spb/feasibility.hpp"
#include "spb/typeclasses.hpp"

namespace spb {

namespace {

// p * log2(p/q) with the 0*log0 = 0 convention; p > 0 against q = 0 is +inf.
double rel_term(double p, double q) {
  if (p <= 0.0) return 0.0;
  if (q <= 0.0) return kInf;
  return p * std::log2(p / q);
}

}  // namespace

double div_bits(const Mac& w, const std::vector<double>& p_xy,
                const std::vector<double>& v) {
  const std::size_t cells = w.nx() * w.ny(), nz = w.nz();
  double d = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    if (p_xy[c] <= 0.0) continue;
    double row = 0.0;
    for (std::size_t z = 0; z < nz; ++z)
      row += rel_term(v[c * nz + z], w.flat()[c * nz + z]);
    d += p_xy[c] * row;
  }
  return d;
}

double info_xy(const Mac& w, const std::vector<double>& p_xy,
               const std::vector<double>& v) {
  const std::size_t cells = w.nx() * w.ny(), nz = w.nz();
  std::vector<double> q(nz, 0.0);
  for (std::size_t c = 0; c < cells; ++c)
    for (std::size_t z = 0; z < nz; ++z) q[z] += p_xy[c] * v[c * nz + z];
  double i = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    if (p_xy[c] <= 0.0) continue;
    for (std::size_t z = 0; z < nz; ++z)
      i += p_xy[c] * rel_term(v[c * nz + z], q[z]);
  }
  return std::max(0.0, i);
}

double info_x(const Mac& w, const std::vector<double>& p_xy,
              const std::vector<double>& v) {
  const std::size_t nx = w.nx(), ny = w.ny(), nz = w.nz();
  double i = 0.0;
  std::vector<double> q(nz);
  for (std::size_t y = 0; y < ny; ++y) {
    double py = 0.0;
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      double p = p_xy[x * ny + y];
      py += p;
      for (std::size_t z = 0; z < nz; ++z) q[z] += p * v[(x * ny + y) * nz + z];
    }
    if (py <= 0.0) continue;
    for (double& qq : q) qq /= py;
    for (std::size_t x = 0; x < nx; ++x) {
      double p = p_xy[x * ny + y];
      if (p <= 0.0) continue;
      for (std::size_t z = 0; z < nz; ++z)
        i += p * rel_term(v[(x * ny + y) * nz + z], q[z]);
    }
  }
  return std::max(0.0, i);
}

double info_y(const Mac& w, const std::vector<double>& p_xy,
              const std::vector<double>& v) {
  const std::size_t nx = w.nx(), ny = w.ny(), nz = w.nz();
  double i = 0.0;
  std::vector<double> q(nz);
  for (std::size_t x = 0; x < nx; ++x) {
    double px = 0.0;
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t y = 0; y < ny; ++y) {
      double p = p_xy[x * ny + y];
      px += p;
      for (std::size_t z = 0; z < nz; ++z) q[z] += p * v[(x * ny + y) * nz + z];
    }
    if (px <= 0.0) continue;
    for (double& qq : q) qq /= px;
    for (std::size_t y = 0; y < ny; ++y) {
      double p = p_xy[x * ny + y];
      if (p <= 0.0) continue;
      for (std::size_t z = 0; z < nz; ++z)
        i += p * rel_term(v[(x * ny + y) * nz + z], q[z]);
    }
  }
  return std::max(0.0, i);
}

namespace {

double info_of(Family f, const Mac& w, const std::vector<double>& p,
               const std::vector<double>& v) {
  switch (f) {
    case Family::X: return info_x(w, p, v);
    case Family::Y: return info_y(w, p, v);
    default: return info_xy(w, p, v);
  }
}

// One sweep of the alternating minimization of D(V||W|P) + lambda * I_F(V):
// with the output aggregate q fixed, the optimal row is the normalized
// geometric mixture W^{1/(1+lambda)} q^{lambda/(1+lambda)}.
void update_rows(Family f, const Mac& w, const std::vector<double>& p,
                 double lambda, std::vector<double>& v) {
  const std::size_t nx = w.nx(), ny = w.ny(), nz = w.nz();
  std::vector<double> q(nz), lv(nz);
  auto renorm_cell = [&](std::size_t c) {
    double mx = -kInf;
    for (std::size_t z = 0; z < nz; ++z) {
      if (w.flat()[c * nz + z] <= 0.0) {
        lv[z] = -kInf;
        continue;
      }
      lv[z] = (w.log2w(c / ny, c % ny, z) + lambda * std::log2(q[z])) /
              (1.0 + lambda);
      mx = std::max(mx, lv[z]);
    }
    double s = 0.0;
    for (std::size_t z = 0; z < nz; ++z)
      s += (lv[z] == -kInf) ? 0.0 : std::exp2(lv[z] - mx);
    for (std::size_t z = 0; z < nz; ++z)
      v[c * nz + z] = (lv[z] == -kInf) ? 0.0 : std::exp2(lv[z] - mx) / s;
  };

  if (f == Family::XY) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t c = 0; c < nx * ny; ++c)
      for (std::size_t z = 0; z < nz; ++z) q[z] += p[c] * v[c * nz + z];
    for (std::size_t c = 0; c < nx * ny; ++c)
      if (p[c] > 0.0) renorm_cell(c);
    return;
  }
  // conditional families: one aggregate per value of the conditioning input
  const bool cond_on_y = (f == Family::X);
  const std::size_t outer = cond_on_y ? ny : nx;
  const std::size_t inner = cond_on_y ? nx : ny;
  for (std::size_t o = 0; o < outer; ++o) {
    double mass = 0.0;
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t i = 0; i < inner; ++i) {
      std::size_t c = cond_on_y ? i * ny + o : o * ny + i;
      mass += p[c];
      for (std::size_t z = 0; z < nz; ++z) q[z] += p[c] * v[c * nz + z];
    }
    if (mass <= 0.0) continue;
    for (double& qq : q) qq /= mass;
    for (std::size_t i = 0; i < inner; ++i) {
      std::size_t c = cond_on_y ? i * ny + o : o * ny + i;
      if (p[c] > 0.0) renorm_cell(c);
    }
  }
}

int solve_lambda(Family f, const Mac& w, const std::vector<double>& p,
                 double lambda, std::vector<double>& v) {
  double prev = kInf;
  for (int it = 1; it <= 3000; ++it) {
    update_rows(f, w, p, lambda, v);
    double obj = div_bits(w, p, v) + lambda * info_of(f, w, p, v);
    if (std::abs(prev - obj) <= 1e-12 * (1.0 + std::abs(obj))) return it;
    prev = obj;
  }
  return 3000;
}

// Exact zero-information projection: all rows of a conditioning block share
// the weighted geometric mean of the channel rows. Returns +inf when the
// block supports are disjoint.
ExponentResult zero_rate_min(Family f, const Mac& w, const std::vector<double>& p) {
  const std::size_t nx = w.nx(), ny = w.ny(), nz = w.nz();
  ExponentResult res;
  res.p_xy = p;
  res.v = w.flat();
  res.active_family = f;
  double value = 0.0;

  const bool global = (f == Family::XY);
  const bool cond_on_y = (f == Family::X);
  const std::size_t outer = global ? 1 : (cond_on_y ? ny : nx);
  const std::size_t inner = global ? nx * ny : (cond_on_y ? nx : ny);
  std::vector<double> lq(nz);
  for (std::size_t o = 0; o < outer; ++o) {
    double mass = 0.0;
    std::fill(lq.begin(), lq.end(), 0.0);
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < inner; ++i) {
      std::size_t c = global ? i : (cond_on_y ? i * ny + o : o * ny + i);
      if (p[c] <= 0.0) continue;
      mass += p[c];
      cells.push_back(c);
    }
    if (mass <= 0.0) continue;
    for (std::size_t c : cells)
      for (std::size_t z = 0; z < nz; ++z)
        lq[z] += (p[c] / mass) * w.log2w(c / ny, c % ny, z);
    double s = 0.0;
    for (std::size_t z = 0; z < nz; ++z) s += std::exp2(lq[z]);
    if (s <= 0.0) {
      res.value = kInf;
      return res;
    }
    value += mass * -std::log2(s);
    for (std::size_t c : cells)
      for (std::size_t z = 0; z < nz; ++z)
        res.v[c * nz + z] = std::exp2(lq[z]) / s;
  }
  res.value = value;
  return res;
}

ExponentResult solve_family(Family f, const Mac& w, const std::vector<double>& p,
                            double rate) {
  ExponentResult res;
  res.p_xy = p;
  res.active_family = f;

  std::vector<double> v = w.flat();
  double iw = info_of(f, w, p, v);
  if (iw <= rate + 1e-12) {
    res.value = 0.0;
    res.v = std::move(v);
    return res;
  }
  if (rate <= 1e-12) return zero_rate_min(f, w, p);

  // bracket the multiplier: I_F(V_lambda) is nonincreasing in lambda
  double lo = 0.0, hi = 1.0;
  int iters = solve_lambda(f, w, p, hi, v);
  double info = info_of(f, w, p, v);
  double best_dual = 0.0;
  auto dual_at = [&](double lam, double ii) {
    best_dual = std::max(best_dual, div_bits(w, p, v) + lam * (ii - rate));
  };
  dual_at(hi, info);
  while (info > rate + 1e-9) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) {
      // constraint unreachable within supp(W)
      res.value = kInf;
      res.v = std::move(v);
      res.diag.iterations = iters;
      res.diag.lambda = hi;
      res.diag.constraint_violation = info - rate;
      return res;
    }
    iters += solve_lambda(f, w, p, hi, v);
    info = info_of(f, w, p, v);
    dual_at(hi, info);
  }

  std::vector<double> v_feas = v;
  double lam_feas = hi;
  for (int it = 0; it < 80 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    iters += solve_lambda(f, w, p, mid, v);
    info = info_of(f, w, p, v);
    dual_at(mid, info);
    if (info <= rate + 1e-9) {
      hi = mid;
      v_feas = v;
      lam_feas = mid;
      if (info >= rate - 1e-9) break;
    } else {
      lo = mid;
    }
  }

  res.value = div_bits(w, p, v_feas);
  res.diag.iterations = iters;
  res.diag.lambda = lam_feas;
  res.diag.constraint_violation =
      std::max(0.0, info_of(f, w, p, v_feas) - rate);
  res.diag.duality_gap = std::max(0.0, res.value - best_dual);
  res.v = std::move(v_feas);
  return res;
}

}  // namespace

ExponentResult inner_min(const Mac& w, const std::vector<double>& p_xy,
                         const VBadSpec& spec) {
  if (p_xy.size() != w.nx() * w.ny())
    throw ValidationError("inner_min: p_xy size mismatch");
  double s = 0.0;
  for (double x : p_xy) {
    if (x < 0.0) throw ValidationError("inner_min: negative p_xy entry");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-9)
    throw ValidationError("inner_min: p_xy does not sum to 1");

  switch (spec.family) {
    case Family::X: return solve_family(Family::X, w, p_xy, spec.rates.rx);
    case Family::Y: return solve_family(Family::Y, w, p_xy, spec.rates.ry);
    case Family::XY:
      return solve_family(Family::XY, w, p_xy, spec.rates.rx + spec.rates.ry);
    case Family::Union: break;
  }
  ExponentResult best = solve_family(Family::X, w, p_xy, spec.rates.rx);
  ExponentResult ry = solve_family(Family::Y, w, p_xy, spec.rates.ry);
  if (ry.value < best.value) best = std::move(ry);
  ExponentResult rxy =
      solve_family(Family::XY, w, p_xy, spec.rates.rx + spec.rates.ry);
  if (rxy.value < best.value) best = std::move(rxy);
  return best;
}

ExponentResult inner_min(const Mac& w, const JointPmf& p_xy, const VBadSpec& spec) {
  if (p_xy.arity() != 2 || p_xy.alphabets()[0] != w.x() ||
      p_xy.alphabets()[1] != w.y())
    throw ValidationError("inner_min: joint distribution incompatible with channel");
  return inner_min(w, p_xy.weights(), spec);
}

namespace {

struct GridCtx {
  const Mac* w;
  const std::vector<double>* p;
  RatePair r;
  std::vector<std::size_t> rows;             // cells with p > 0
  std::vector<std::vector<double>> cand;     // candidate V rows
  std::vector<double> hcand;                 // entropies of candidates
  std::vector<std::vector<double>> dstep;    // dstep[row][cand] = p*KL(c||W_row)
};

// entropy of an aggregate built from the chosen candidate rows
void grid_leaf(const GridCtx& g, const std::vector<std::size_t>& choice,
               double dsum, VGridMins& mins) {
  const Mac& w = *g.w;
  const std::vector<double>& p = *g.p;
  const std::size_t nx = w.nx(), ny = w.ny(), nz = w.nz();

  double h_given = 0.0;  // H(Z|XY)
  for (std::size_t k = 0; k < g.rows.size(); ++k)
    h_given += p[g.rows[k]] * g.hcand[choice[k]];

  std::vector<double> qz(nz, 0.0);
  std::vector<double> qy(ny * nz, 0.0), qx(nx * nz, 0.0);
  std::vector<double> py(ny, 0.0), px(nx, 0.0);
  for (std::size_t k = 0; k < g.rows.size(); ++k) {
    std::size_t c = g.rows[k], x = c / ny, y = c % ny;
    const auto& row = g.cand[choice[k]];
    px[x] += p[c];
    py[y] += p[c];
    for (std::size_t z = 0; z < nz; ++z) {
      qz[z] += p[c] * row[z];
      qy[y * nz + z] += p[c] * row[z];
      qx[x * nz + z] += p[c] * row[z];
    }
  }
  double hz = entropy(qz);
  double hz_y = 0.0, hz_x = 0.0;
  std::vector<double> tmp(nz);
  for (std::size_t y = 0; y < ny; ++y) {
    if (py[y] <= 0.0) continue;
    for (std::size_t z = 0; z < nz; ++z) tmp[z] = qy[y * nz + z] / py[y];
    hz_y += py[y] * entropy(tmp);
  }
  for (std::size_t x = 0; x < nx; ++x) {
    if (px[x] <= 0.0) continue;
    for (std::size_t z = 0; z < nz; ++z) tmp[z] = qx[x * nz + z] / px[x];
    hz_x += px[x] * entropy(tmp);
  }

  double ix = std::max(0.0, hz_y - h_given);
  double iy = std::max(0.0, hz_x - h_given);
  double ixy = std::max(0.0, hz - h_given);
  if (ix <= g.r.rx + 1e-9) mins.x = std::min(mins.x, dsum);
  if (iy <= g.r.ry + 1e-9) mins.y = std::min(mins.y, dsum);
  if (ixy <= g.r.rx + g.r.ry + 1e-9) mins.xy = std::min(mins.xy, dsum);
}

void grid_recurse(const GridCtx& g, std::size_t depth,
                  std::vector<std::size_t>& choice, double dsum,
                  VGridMins& mins) {
  if (dsum >= std::max({mins.x, mins.y, mins.xy})) return;  // cannot improve
  if (depth == g.rows.size()) {
    grid_leaf(g, choice, dsum, mins);
    return;
  }
  for (std::size_t c = 0; c < g.cand.size(); ++c) {
    double step = g.dstep[depth][c];
    if (step == kInf) continue;
    choice[depth] = c;
    grid_recurse(g, depth + 1, choice, dsum + step, mins);
  }
}

GridCtx make_grid_ctx(const Mac& w, const std::vector<double>& p, RatePair r,
                      int denom) {
  if (denom < 1) throw ValidationError("grid oracle: denominator >= 1");
  GridCtx g{&w, &p, r, {}, {}, {}, {}};
  const std::size_t cells = w.nx() * w.ny(), nz = w.nz();
  for (std::size_t c = 0; c < cells; ++c)
    if (p[c] > 0.0) g.rows.push_back(c);

  g.cand = simplex_grid(nz, denom);
  // enumeration guard: leaves = candidates^rows
  double leaves = std::pow(double(g.cand.size()), double(g.rows.size()));
  if (leaves > 1e9) throw CapExceeded("grid oracle: V-grid too large");

  g.hcand.resize(g.cand.size());
  for (std::size_t c = 0; c < g.cand.size(); ++c) g.hcand[c] = entropy(g.cand[c]);
  g.dstep.assign(g.rows.size(), std::vector<double>(g.cand.size()));
  for (std::size_t k = 0; k < g.rows.size(); ++k) {
    std::size_t cell = g.rows[k];
    for (std::size_t c = 0; c < g.cand.size(); ++c) {
      double d = 0.0;
      for (std::size_t z = 0; z < nz; ++z) {
        double t = rel_term(g.cand[c][z], w.flat()[cell * nz + z]);
        if (t == kInf) {
          d = kInf;
          break;
        }
        d += t;
      }
      g.dstep[k][c] = (d == kInf) ? kInf : p[cell] * d;
    }
  }
  return g;
}

}  // namespace

VGridMins grid_min_divergence(const Mac& w, const std::vector<double>& p_xy,
                              RatePair r, int denom) {
  GridCtx g = make_grid_ctx(w, p_xy, r, denom);
  VGridMins total;
  if (g.rows.empty()) throw ValidationError("grid oracle: empty distribution");
#pragma omp parallel
  {
    VGridMins local;
    std::vector<std::size_t> choice(g.rows.size());
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t c0 = 0; c0 < std::ptrdiff_t(g.cand.size()); ++c0) {
      if (g.dstep[0][std::size_t(c0)] == kInf) continue;
      choice[0] = std::size_t(c0);
      grid_recurse(g, 1, choice, g.dstep[0][std::size_t(c0)], local);
    }
#pragma omp critical
    {
      total.x = std::min(total.x, local.x);
      total.y = std::min(total.y, local.y);
      total.xy = std::min(total.xy, local.xy);
    }
  }
  total.all = std::min({total.x, total.y, total.xy});
  return total;
}

VGridMins grid_min_divergence_serial(const Mac& w, const std::vector<double>& p_xy,
                                     RatePair r, int denom) {
  // straightforward reference: build each full V and use the public
  // functionals, no pruning or shared aggregates
  if (denom < 1) throw ValidationError("grid oracle: denominator >= 1");
  const std::size_t cells = w.nx() * w.ny(), nz = w.nz();
  std::vector<std::size_t> rows;
  for (std::size_t c = 0; c < cells; ++c)
    if (p_xy[c] > 0.0) rows.push_back(c);
  if (rows.empty()) throw ValidationError("grid oracle: empty distribution");
  auto cand = simplex_grid(nz, denom);
  double leaves = std::pow(double(cand.size()), double(rows.size()));
  if (leaves > 1e9) throw CapExceeded("grid oracle: V-grid too large");

  VGridMins mins;
  std::vector<double> v = w.flat();
  std::vector<std::size_t> choice(rows.size(), 0);
  for (;;) {
    for (std::size_t k = 0; k < rows.size(); ++k)
      for (std::size_t z = 0; z < nz; ++z)
        v[rows[k] * nz + z] = cand[choice[k]][z];
    double d = div_bits(w, p_xy, v);
    if (d < kInf) {
      if (info_x(w, p_xy, v) <= r.rx + 1e-9) mins.x = std::min(mins.x, d);
      if (info_y(w, p_xy, v) <= r.ry + 1e-9) mins.y = std::min(mins.y, d);
      if (info_xy(w, p_xy, v) <= r.rx + r.ry + 1e-9) mins.xy = std::min(mins.xy, d);
    }
    std::size_t k = rows.size();
    while (k-- > 0) {
      if (++choice[k] < cand.size()) break;
      choice[k] = 0;
      if (k == 0) {
        mins.all = std::min({mins.x, mins.y, mins.xy});
        return mins;
      }
    }
  }
}

ExponentResult sp_fixed_type(const Mac& w, RatePair r,
                             const std::vector<double>& p_xy) {
  return inner_min(w, p_xy, VBadSpec{r, Family::Union});
}

namespace {

// neighbor candidates for the optional local refinement around a grid point
std::vector<std::vector<double>> half_step_neighbors(const std::vector<double>& p,
                                                     int resolution) {
  std::vector<std::vector<double>> out;
  double h = 0.5 / double(resolution);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i == j || p[j] < h) continue;
      auto q = p;
      q[i] += h;
      q[j] -= h;
      out.push_back(std::move(q));
    }
  return out;
}

ExponentResult outer_max(const Mac& w, RatePair r, int resolution, bool refine,
                         bool restrict_u, int u_cap) {
  if (resolution < 1) throw ValidationError("outer max: resolution >= 1");
  if (r.rx < 0 || r.ry < 0) throw ValidationError("outer max: rates >= 0");
  auto grid = simplex_grid(w.nx() * w.ny(), resolution);

  std::vector<double> vals(grid.size(), -kInf);
  std::vector<char> ok(grid.size(), 1);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(grid.size()); ++i) {
    const auto& p = grid[std::size_t(i)];
    if (restrict_u) {
      JointPmf jp({"X", "Y"}, {w.x(), w.y()}, p);
      if (!u_feasible(jp, r, u_cap, resolution).has_value()) {
        ok[std::size_t(i)] = 0;
        continue;
      }
    }
    vals[std::size_t(i)] = sp_fixed_type(w, r, p).value;
  }

  std::ptrdiff_t best = -1;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (ok[i] && (best < 0 || vals[i] > vals[std::size_t(best)]))
      best = std::ptrdiff_t(i);

  ExponentResult res;
  res.diag.resolution = resolution;
  if (best < 0) {
    // no admissible input distribution at this resolution
    res.value = 0.0;
    res.diag.vacuous = true;
    return res;
  }
  res = sp_fixed_type(w, r, grid[std::size_t(best)]);
  res.diag.resolution = resolution;

  if (refine) {
    for (const auto& q : half_step_neighbors(grid[std::size_t(best)], resolution)) {
      if (restrict_u) {
        JointPmf jp({"X", "Y"}, {w.x(), w.y()}, q);
        if (!u_feasible(jp, r, u_cap, resolution).has_value()) continue;
      }
      ExponentResult cand = sp_fixed_type(w, r, q);
      if (cand.value > res.value) {
        cand.diag.resolution = resolution;
        res = std::move(cand);
      }
    }
    res.diag.refined = true;
  }
  return res;
}

}  // namespace

ExponentResult sp_thm4(const Mac& w, RatePair r, int resolution, bool refine) {
  return outer_max(w, r, resolution, refine, false, 0);
}

ExponentResult sp_thm2(const Mac& w, RatePair r, int resolution, int u_cap,
                       bool refine) {
  return outer_max(w, r, resolution, refine, true, u_cap);
}

std::pair<double, double> transfer_max_to_avg(double e_max_lower,
                                              double e_max_upper, RatePair r) {
  if (e_max_lower > e_max_upper + 1e-12)
    throw ValidationError("transfer: lower bound exceeds upper bound");
  return {e_max_lower, e_max_upper + std::min(r.rx, r.ry)};
}

std::pair<double, double> transfer_avg_to_max(double e_avg_lower,
                                              double e_avg_upper, RatePair r) {
  if (e_avg_lower > e_avg_upper + 1e-12)
    throw ValidationError("transfer: lower bound exceeds upper bound");
  return {e_avg_lower - std::min(r.rx, r.ry), e_avg_upper};
}

}  // namespace spb
