#pragma once

#include <utility>
#include <vector>

#include "spb/macchannel.hpp"
#include "spb/probkit.hpp"
#include "spb/regions.hpp"

namespace spb {

enum class Family { X, Y, XY, Union };

struct VBadSpec {
  RatePair rates;
  Family family = Family::Union;
};

struct SolverDiagnostics {
  int iterations = 0;
  double constraint_violation = 0.0;
  double duality_gap = 0.0;
  double lambda = 0.0;
  int resolution = 0;
  bool vacuous = false;
  bool refined = false;
};

struct ExponentResult {
  double value = 0.0;                 // bits/use, may be +inf
  std::vector<double> p_xy;           // nx*ny, row-major
  std::vector<double> v;              // (x*|Y|+y)*|Z|+z test channel
  Family active_family = Family::Union;
  SolverDiagnostics diag;
};

// Information functionals of a test channel V against input distribution P,
// all in bits. v and the channel share the (x*|Y|+y)*|Z|+z layout.
double div_bits(const Mac& w, const std::vector<double>& p_xy,
                const std::vector<double>& v);
double info_xy(const Mac& w, const std::vector<double>& p_xy,
               const std::vector<double>& v);                    // I_V(XY ^ Z)
double info_x(const Mac& w, const std::vector<double>& p_xy,
              const std::vector<double>& v);                     // I_V(X ^ Z | Y)
double info_y(const Mac& w, const std::vector<double>& p_xy,
              const std::vector<double>& v);                     // I_V(Y ^ Z | X)

// min_{V in family} D(V||W|P): Lagrangian alternating minimization with
// bisection on the multiplier. Union = min over the three families.
ExponentResult inner_min(const Mac& w, const std::vector<double>& p_xy,
                         const VBadSpec& spec);
ExponentResult inner_min(const Mac& w, const JointPmf& p_xy, const VBadSpec& spec);

// Exhaustive oracle over the rational V-grid with the given denominator.
struct VGridMins {
  double x = kInf, y = kInf, xy = kInf, all = kInf;
};
VGridMins grid_min_divergence(const Mac& w, const std::vector<double>& p_xy,
                              RatePair r, int denom);            // OpenMP
VGridMins grid_min_divergence_serial(const Mac& w, const std::vector<double>& p_xy,
                                     RatePair r, int denom);     // reference

// Fixed dominant type bound: union inner minimization at the given rates.
ExponentResult sp_fixed_type(const Mac& w, RatePair r, const std::vector<double>& p_xy);

// Unconstrained outer max over a joint-type grid of the given resolution.
ExponentResult sp_thm4(const Mac& w, RatePair r, int resolution, bool refine = false);

// Outer max restricted to joint distributions admitting an X-U-Y
// decomposition with H(X|U) >= R_X and H(Y|U) >= R_Y.
ExponentResult sp_thm2(const Mac& w, RatePair r, int resolution, int u_cap,
                       bool refine = false);

inline int default_u_cap(const Mac& w) { return int(w.nx() * w.ny()) + 2; }

// (E_max lower, E_max upper) -> (E_avg lower, E_avg upper + min rate)
std::pair<double, double> transfer_max_to_avg(double e_max_lower, double e_max_upper,
                                              RatePair r);
// (E_avg lower, E_avg upper) -> (E_avg lower - min rate, E_avg upper)
std::pair<double, double> transfer_avg_to_max(double e_avg_lower, double e_avg_upper,
                                              RatePair r);

}  // namespace spb
