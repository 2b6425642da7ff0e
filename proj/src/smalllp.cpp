#include "spb/smalllp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace spb::lp {

namespace {

constexpr double kEps = 1e-9;

// Tableau simplex on: maximize c.x, rows [A | slack | artificial | rhs].
struct Tableau {
  std::size_t m, n;        // rows, structural vars
  std::size_t total;       // structural + slack + artificial
  std::vector<std::vector<double>> t;  // m rows of (total + 1)
  std::vector<double> obj;             // total + 1 (reduced costs, maximize)
  std::vector<std::size_t> basis;

  void pivot(std::size_t r, std::size_t col) {
    double piv = t[r][col];
    for (auto& v : t[r]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][col] == 0.0) continue;
      double f = t[i][col];
      for (std::size_t j = 0; j <= total; ++j) t[i][j] -= f * t[r][j];
    }
    if (obj[col] != 0.0) {
      double f = obj[col];
      for (std::size_t j = 0; j <= total; ++j) obj[j] -= f * t[r][j];
    }
    basis[r] = col;
  }

  // returns true if optimal reached, false if unbounded
  bool run(std::size_t max_col) {
    for (std::size_t iter = 0; iter < 50000; ++iter) {
      // Bland: smallest index with positive reduced cost (maximization)
      std::size_t col = max_col;
      for (std::size_t j = 0; j < max_col; ++j)
        if (obj[j] > kEps) { col = j; break; }
      if (col == max_col) return true;
      std::size_t row = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][col] > kEps) {
          double ratio = t[i][total] / t[i][col];
          if (ratio < best - kEps ||
              (ratio < best + kEps && (row == m || basis[i] < basis[row]))) {
            best = ratio;
            row = i;
          }
        }
      }
      if (row == m) return false;  // unbounded
      pivot(row, col);
    }
    return true;  // iteration cap; treat as converged for desk-scale inputs
  }
};

}  // namespace

Result solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
             const std::vector<double>& c) {
  const std::size_t m = A.size(), n = c.size();
  Tableau tb;
  tb.m = m;
  tb.n = n;

  // count artificials: one per negative-rhs row
  std::size_t n_art = 0;
  for (double bi : b)
    if (bi < 0) ++n_art;
  tb.total = n + m + n_art;
  tb.t.assign(m, std::vector<double>(tb.total + 1, 0.0));
  tb.basis.assign(m, 0);

  std::size_t art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double sgn = b[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tb.t[i][j] = sgn * A[i][j];
    tb.t[i][n + i] = sgn;  // slack
    tb.t[i][tb.total] = sgn * b[i];
    if (b[i] < 0) {
      tb.t[i][n + m + art] = 1.0;
      tb.basis[i] = n + m + art;
      ++art;
    } else {
      tb.basis[i] = n + i;
    }
  }

  Result res;
  if (n_art > 0) {
    // phase 1: maximize -sum(artificials)
    tb.obj.assign(tb.total + 1, 0.0);
    for (std::size_t j = n + m; j < tb.total; ++j) tb.obj[j] = -1.0;
    // price out basic artificials
    for (std::size_t i = 0; i < m; ++i)
      if (tb.basis[i] >= n + m)
        for (std::size_t j = 0; j <= tb.total; ++j) tb.obj[j] += tb.t[i][j];
    tb.run(n + m);  // never pivot artificials back in
    // invariant: phase-1 objective value = -obj[total]
    if (tb.obj[tb.total] > 1e-7) {
      res.feasible = false;
      return res;
    }
    // drive any artificial still in the basis out (degenerate rows)
    for (std::size_t i = 0; i < m; ++i) {
      if (tb.basis[i] < n + m) continue;
      std::size_t col = n + m;
      for (std::size_t j = 0; j < n + m; ++j)
        if (std::abs(tb.t[i][j]) > kEps) { col = j; break; }
      if (col < n + m) tb.pivot(i, col);
      // otherwise the row is all-zero: redundant constraint, harmless
    }
  }

  // phase 2
  tb.obj.assign(tb.total + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) tb.obj[j] = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < n && tb.obj[tb.basis[i]] != 0.0) {
      double f = tb.obj[tb.basis[i]];
      for (std::size_t j = 0; j <= tb.total; ++j) tb.obj[j] -= f * tb.t[i][j];
    }
  }
  bool optimal = tb.run(n + m);
  res.feasible = true;
  res.bounded = optimal;
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tb.basis[i] < n) res.x[tb.basis[i]] = tb.t[i][tb.total];
  res.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

bool caratheodory_reduce(const std::vector<std::vector<double>>& points,
                         std::vector<double>& weights, std::size_t target_support) {
  const std::size_t dim = points.empty() ? 0 : points[0].size();
  auto support = [&]() {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (weights[i] > 1e-13) s.push_back(i);
    return s;
  };

  for (;;) {
    auto sup = support();
    if (sup.size() <= target_support) return true;

    // find a null vector of the homogenized support matrix (dim+1 rows)
    const std::size_t rows = dim + 1, cols = sup.size();
    std::vector<std::vector<double>> a(rows, std::vector<double>(cols));
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t d = 0; d < dim; ++d) a[d][j] = points[sup[j]][d];
      a[dim][j] = 1.0;
    }
    // gaussian elimination with partial pivoting
    std::vector<std::size_t> pivot_col(rows, cols);
    std::size_t r = 0;
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t cidx = 0; cidx < cols && r < rows; ++cidx) {
      std::size_t best = r;
      for (std::size_t i = r; i < rows; ++i)
        if (std::abs(a[i][cidx]) > std::abs(a[best][cidx])) best = i;
      if (std::abs(a[best][cidx]) < 1e-11) continue;
      std::swap(a[r], a[best]);
      double p = a[r][cidx];
      for (auto& v : a[r]) v /= p;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || a[i][cidx] == 0.0) continue;
        double f = a[i][cidx];
        for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
      }
      pivot_col[r] = cidx;
      is_pivot[cidx] = true;
      ++r;
    }
    // free column -> null vector
    std::size_t free_col = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (!is_pivot[j]) { free_col = j; break; }
    if (free_col == cols) return false;  // full column rank, cannot reduce
    std::vector<double> dir(cols, 0.0);
    dir[free_col] = 1.0;
    for (std::size_t i = 0; i < r; ++i) dir[pivot_col[i]] = -a[i][free_col];

    // move weights along +-dir until one hits zero
    double step_pos = std::numeric_limits<double>::infinity();
    double step_neg = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols; ++j) {
      if (dir[j] < -1e-14) step_pos = std::min(step_pos, -weights[sup[j]] / dir[j]);
      if (dir[j] > 1e-14) step_neg = std::min(step_neg, weights[sup[j]] / dir[j]);
    }
    double step = (step_pos <= step_neg) ? step_pos : -step_neg;
    if (!std::isfinite(step)) return false;
    for (std::size_t j = 0; j < cols; ++j) {
      weights[sup[j]] += step * dir[j];
      if (weights[sup[j]] < 1e-13) weights[sup[j]] = 0.0;
    }
  }
}

}  // namespace spb::lp
