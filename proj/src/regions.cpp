#include "spb/regions.hpp"

#include <algorithm>
#include <cmath>

#include "spb/smalllp.hpp"

namespace spb {

std::vector<std::vector<double>> simplex_grid(std::size_t k, int resolution) {
  if (resolution < 1) throw ValidationError("simplex_grid: resolution >= 1");
  std::vector<std::vector<double>> out;
  for (const auto& c : compositions(resolution, k)) {
    std::vector<double> p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = double(c[i]) / double(resolution);
    out.push_back(std::move(p));
  }
  return out;
}

PentagonBounds pentagon(const Mac& w, const Pmf& pu, const CondPmf& px_u,
                        const CondPmf& py_u) {
  if (px_u.input_alphabet() != pu.alphabet() || py_u.input_alphabet() != pu.alphabet())
    throw ValidationError("pentagon: U alphabet mismatch");
  if (px_u.output_alphabet() != w.x() || py_u.output_alphabet() != w.y())
    throw ValidationError("pentagon: input alphabet mismatch");

  const std::size_t nu = pu.size(), nx = w.nx(), ny = w.ny(), nz = w.nz();
  std::vector<double> joint(nu * nx * ny * nz);
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z)
          joint[((u * nx + x) * ny + y) * nz + z] =
              pu[u] * px_u.at(u, x) * py_u.at(u, y) * w.w(x, y, z);

  JointPmf j({"U", "X", "Y", "Z"}, {pu.alphabet(), w.x(), w.y(), w.z()}, joint);
  PentagonBounds b;
  b.ix = mutual_info_groups(j, {"X"}, {"Z"}, {"Y", "U"});
  b.iy = mutual_info_groups(j, {"Y"}, {"Z"}, {"X", "U"});
  b.ixy = mutual_info_groups(j, {"X", "Y"}, {"Z"}, {"U"});
  return b;
}

RegionApprox region_approx(const Mac& w, int resolution) {
  if (resolution < 2) throw ValidationError("region_approx: resolution >= 2");
  RegionApprox reg;
  reg.resolution = resolution;
  auto gx = simplex_grid(w.nx(), resolution);
  auto gy = simplex_grid(w.ny(), resolution);
  Alphabet ua = {"u0"};
  reg.bounds.resize(gx.size() * gy.size());
  reg.points.reserve(gx.size() * gy.size());
  for (const auto& px : gx)
    for (const auto& py : gy)
      reg.points.emplace_back(Pmf(w.x(), px), Pmf(w.y(), py));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(reg.points.size()); ++i) {
    const auto& [px, py] = reg.points[std::size_t(i)];
    CondPmf cx(ua, w.x(), {px.weights()});
    CondPmf cy(ua, w.y(), {py.weights()});
    reg.bounds[std::size_t(i)] = pentagon(w, Pmf::uniform(ua), cx, cy);
  }
  return reg;
}

std::optional<RegionWitness> contains_with_witness(const RegionApprox& region,
                                                   RatePair r) {
  if (r.rx < 0 || r.ry < 0) return std::nullopt;
  const std::size_t n = region.bounds.size();
  // feasibility: lambda in simplex with sum lambda*(ix,iy,ixy) >= (rx,ry,rx+ry)
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) row[i] = 1.0;
  A.push_back(row);
  b.push_back(1.0);
  for (auto& v : row) v = -1.0;
  A.push_back(row);
  b.push_back(-1.0);
  auto add_ge = [&](auto get, double rhs) {
    for (std::size_t i = 0; i < n; ++i) row[i] = -get(region.bounds[i]);
    A.push_back(row);
    b.push_back(-rhs);
  };
  add_ge([](const PentagonBounds& p) { return p.ix; }, r.rx);
  add_ge([](const PentagonBounds& p) { return p.iy; }, r.ry);
  add_ge([](const PentagonBounds& p) { return p.ixy; }, r.rx + r.ry);

  auto sol = lp::solve(A, b, std::vector<double>(n, 0.0));
  if (!sol.feasible) return std::nullopt;

  // reduce the time-sharing mixture to |U| <= 4 (Caratheodory in the space of
  // bound triples)
  std::vector<std::vector<double>> pts(n);
  for (std::size_t i = 0; i < n; ++i)
    pts[i] = {region.bounds[i].ix, region.bounds[i].iy, region.bounds[i].ixy};
  lp::caratheodory_reduce(pts, sol.x, 4);

  RegionWitness wit;
  for (std::size_t i = 0; i < n; ++i)
    if (sol.x[i] > 1e-13) {
      wit.weights.push_back(sol.x[i]);
      wit.point_index.push_back(i);
    }
  return wit;
}

bool contains(const RegionApprox& region, RatePair r) {
  return contains_with_witness(region, r).has_value();
}

double max_sum_rate(const RegionApprox& region) {
  // project to (s, c) = (ix+iy, ixy); the achievable sum rate of a mixture is
  // min(s, c) of the mixed pair, a concave function, so the maximum lies on
  // the 2D convex hull: scan hull-vertex pairs in closed form
  std::vector<std::pair<double, double>> pts;
  pts.reserve(region.bounds.size());
  for (const auto& p : region.bounds) pts.emplace_back(p.ix + p.iy, p.ixy);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // upper convex hull (Andrew); only the upper envelope can carry the max
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0)
      hull.pop_back();
    hull.push_back(p);
  }

  double best = 0.0;
  auto seg_best = [&](const std::pair<double, double>& a,
                      const std::pair<double, double>& b) {
    best = std::max(best, std::min(a.first, a.second));
    best = std::max(best, std::min(b.first, b.second));
    // interior crossing s(t) = c(t)
    double ds = b.first - a.first, dc = b.second - a.second;
    double denom = ds - dc;
    if (std::abs(denom) > 1e-15) {
      double t = (a.second - a.first) / denom;
      if (t > 0.0 && t < 1.0)
        best = std::max(best, a.first + t * ds);
    }
  };
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) seg_best(hull[i], hull[i + 1]);
  if (hull.size() == 1) best = std::min(hull[0].first, hull[0].second);
  return best;
}

}  // namespace spb
