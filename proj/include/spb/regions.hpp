#pragma once

#include <optional>
#include <vector>

#include "spb/macchannel.hpp"
#include "spb/probkit.hpp"

namespace spb {

struct RatePair {
  double rx = 0.0, ry = 0.0;
};

struct PentagonBounds {
  double ix = 0.0;   // I(X ^ Z | Y, U)
  double iy = 0.0;   // I(Y ^ Z | X, U)
  double ixy = 0.0;  // I(XY ^ Z | U)
};

PentagonBounds pentagon(const Mac& w, const Pmf& pu, const CondPmf& px_u,
                        const CondPmf& py_u);

// Inner (achievable) approximation: pentagons of all product input
// distributions on the rational simplex grid of denominator `resolution`;
// time sharing is handled as convex combination of the bound triples.
struct RegionApprox {
  int resolution = 0;
  std::vector<PentagonBounds> bounds;          // per product grid point
  std::vector<std::pair<Pmf, Pmf>> points;     // (P_X, P_Y) per grid point
};

RegionApprox region_approx(const Mac& w, int resolution);

struct RegionWitness {
  std::vector<double> weights;                  // time-sharing p(u), |U| <= 4
  std::vector<std::size_t> point_index;         // grid points mixed
};

bool contains(const RegionApprox& region, RatePair r);
std::optional<RegionWitness> contains_with_witness(const RegionApprox& region,
                                                   RatePair r);
double max_sum_rate(const RegionApprox& region);

// All denominator-`resolution` rational points of the k-simplex, lex order.
std::vector<std::vector<double>> simplex_grid(std::size_t k, int resolution);

}  // namespace spb
