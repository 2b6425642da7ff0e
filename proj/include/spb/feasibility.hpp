#pragma once

#include <optional>
#include <vector>

#include "spb/macchannel.hpp"
#include "spb/probkit.hpp"
#include "spb/regions.hpp"
#include "spb/typeclasses.hpp"

namespace spb {

struct DominantTypeReport {
  std::vector<JointType> types;      // joint types present in the code
  std::vector<long long> counts;     // |C ^ T_P| per type
  std::vector<double> rates;         // (1/n) log2 count
  std::size_t argmax = 0;
  double rate_sum = 0.0;             // R_X + R_Y of the code
  double pigeonhole_bound = 0.0;     // R_X + R_Y - log2(#joint types)/n
};

// Counts code pairs per joint type; requires a good code.
DominantTypeReport dominant_type(const MultiUserCode& code, const Alphabet& ax,
                                 const Alphabet& ay);

struct UDecomposition {
  std::vector<double> weights;  // p(u) over the mixture components
  std::vector<Pmf> px;          // P_{X|u}
  std::vector<Pmf> py;          // P_{Y|u}
  double reconstruction_tv = 0.0;
  double hx = 0.0;              // H(X|U) of the witness
  double hy = 0.0;              // H(Y|U)
};

// Searches for P_XY = sum_u p(u) P_{X|u} x P_{Y|u} with H(X|U) >= r.rx and
// H(Y|U) >= r.ry, mixing product distributions from the rational grid of the
// given resolution. nullopt means "no witness found at this resolution", not
// a proof of infeasibility.
std::optional<UDecomposition> u_feasible(const JointPmf& p_xy, RatePair r,
                                         int u_cap, int resolution);

std::vector<JointType> admissible_types(const Alphabet& ax, const Alphabet& ay, int n,
                                        RatePair r, int u_cap, int resolution);

}  // namespace spb
