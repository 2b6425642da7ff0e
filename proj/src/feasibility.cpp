#include "spb/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spb/smalllp.hpp"

namespace spb {

DominantTypeReport dominant_type(const MultiUserCode& code, const Alphabet& ax,
                                 const Alphabet& ay) {
  if (!is_good(code))
    throw ValidationError("dominant_type: code has repeated codewords (repair first)");
  std::map<std::vector<long long>, long long> hist;
  for (const Seq& x : code.codebook_x)
    for (const Seq& y : code.codebook_y)
      ++hist[joint_type_of(ax, ay, x, y).counts];

  DominantTypeReport rep;
  const double n = double(code.n);
  for (const auto& [counts, cnt] : hist) {
    rep.types.push_back({ax, ay, code.n, counts});
    rep.counts.push_back(cnt);
    rep.rates.push_back(std::log2(double(cnt)) / n);
  }
  // map order = lexicographic count vectors, so the first max is the tie winner
  rep.argmax = 0;
  for (std::size_t i = 1; i < rep.counts.size(); ++i)
    if (rep.counts[i] > rep.counts[rep.argmax]) rep.argmax = i;

  rep.rate_sum = code.rate_x() + code.rate_y();
  double n_types = double(compositions(code.n, ax.size() * ay.size()).size());
  rep.pigeonhole_bound = rep.rate_sum - std::log2(n_types) / n;
  return rep;
}

std::optional<UDecomposition> u_feasible(const JointPmf& p_xy, RatePair r,
                                         int u_cap, int resolution) {
  if (u_cap < 1) throw ValidationError("u_feasible: u_cap >= 1");
  if (p_xy.arity() != 2) throw ValidationError("u_feasible: expected a pair joint");
  const Alphabet& ax = p_xy.alphabets()[0];
  const Alphabet& ay = p_xy.alphabets()[1];
  const std::size_t nx = ax.size(), ny = ay.size(), cells = nx * ny;
  const std::vector<double>& target = p_xy.weights();

  auto gx = simplex_grid(nx, resolution);
  auto gy = simplex_grid(ny, resolution);
  const std::size_t n = gx.size() * gy.size();

  // lifted component vectors: product cells plus the two entropies
  std::vector<std::vector<double>> lift(n, std::vector<double>(cells + 2));
  for (std::size_t a = 0; a < gx.size(); ++a)
    for (std::size_t b = 0; b < gy.size(); ++b) {
      auto& v = lift[a * gy.size() + b];
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) v[x * ny + y] = gx[a][x] * gy[b][y];
      v[cells] = entropy(gx[a]);
      v[cells + 1] = entropy(gy[b]);
    }

  // total-variation tolerance 1e-4, enforced as a per-cell band
  const double band = 2.0 * 1e-4 / double(cells);
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> row(n);
  auto push = [&](double sgn, std::size_t coord, double rhs) {
    for (std::size_t i = 0; i < n; ++i) row[i] = sgn * lift[i][coord];
    A.push_back(row);
    b.push_back(rhs);
  };
  for (std::size_t c = 0; c < cells; ++c) {
    push(+1.0, c, target[c] + band);
    push(-1.0, c, -(target[c] - band));
  }
  push(-1.0, cells, -r.rx);      // H(X|U) >= rx
  push(-1.0, cells + 1, -r.ry);  // H(Y|U) >= ry
  for (std::size_t i = 0; i < n; ++i) row[i] = 1.0;
  A.push_back(row);
  b.push_back(1.0);
  for (auto& v : row) v = -1.0;
  A.push_back(row);
  b.push_back(-1.0);

  // maximize total entropy slack; any feasible point will do
  std::vector<double> obj(n);
  for (std::size_t i = 0; i < n; ++i) obj[i] = lift[i][cells] + lift[i][cells + 1];
  auto sol = lp::solve(A, b, obj);
  if (!sol.feasible) return std::nullopt;

  lp::caratheodory_reduce(lift, sol.x, std::size_t(u_cap));

  UDecomposition dec;
  std::vector<double> mix(cells, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.x[i] <= 1e-13) continue;
    dec.weights.push_back(sol.x[i]);
    dec.px.emplace_back(ax, gx[i / gy.size()]);
    dec.py.emplace_back(ay, gy[i % gy.size()]);
    dec.hx += sol.x[i] * lift[i][cells];
    dec.hy += sol.x[i] * lift[i][cells + 1];
    for (std::size_t c = 0; c < cells; ++c) mix[c] += sol.x[i] * lift[i][c];
  }
  if (dec.weights.size() > std::size_t(u_cap)) return std::nullopt;
  double tv = 0.0;
  for (std::size_t c = 0; c < cells; ++c) tv += std::abs(mix[c] - target[c]);
  dec.reconstruction_tv = tv / 2.0;
  if (dec.reconstruction_tv > 1e-4 + 1e-12) return std::nullopt;
  if (dec.hx < r.rx - 1e-6 || dec.hy < r.ry - 1e-6) return std::nullopt;
  return dec;
}

std::vector<JointType> admissible_types(const Alphabet& ax, const Alphabet& ay, int n,
                                        RatePair r, int u_cap, int resolution) {
  auto all = enumerate_joint_types(ax, ay, n);
  std::vector<char> keep(all.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(all.size()); ++i) {
    const auto& t = all[std::size_t(i)];
    std::vector<double> w(t.counts.size());
    for (std::size_t c = 0; c < w.size(); ++c)
      w[c] = double(t.counts[c]) / double(n);
    JointPmf p({"X", "Y"}, {ax, ay}, w);
    keep[std::size_t(i)] = u_feasible(p, r, u_cap, resolution).has_value() ? 1 : 0;
  }
  std::vector<JointType> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (keep[i]) out.push_back(all[i]);
  return out;
}

}  // namespace spb
