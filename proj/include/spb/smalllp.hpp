#pragma once

#include <vector>

namespace spb::lp {

struct Result {
  bool feasible = false;
  bool bounded = true;
  double objective = 0.0;
  std::vector<double> x;
};

// maximize c.x subject to A x <= b, x >= 0 (dense two-phase simplex,
// Bland's rule). Sized for desk-scale problems (a few dozen rows).
Result solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
             const std::vector<double>& c);

// Reduce a convex combination to at most `target_support` positive weights
// while preserving sum_i w_i * points[i] exactly (Caratheodory steps along
// null-space directions of the homogenized point matrix). Returns false if no
// further reduction is possible.
bool caratheodory_reduce(const std::vector<std::vector<double>>& points,
                         std::vector<double>& weights, std::size_t target_support);

}  // namespace spb::lp
