#pragma once

#include <vector>

#include "combforge/grid.hpp"
#include "combforge/params.hpp"
#include "combforge/stationary.hpp"

namespace cf {

// Superposition template for multipulse initial guesses: pulses at the given
// centers (sorted ascending), optionally one more at x = 0.
struct SolitonTemplate {
  double theta = 0.0;
  std::vector<double> centers;
  bool include_center_pulse = false;
};

struct BifurcationAngles {
  double theta_stable = 0.0;    // root with sin(theta) > 0, in (0, pi)
  double theta_unstable = 0.0;  // root with sin(theta) < 0, = -theta_stable
};

// Both roots of pi f cos(theta) = 2 sqrt(2 zeta) in (-pi, pi].
// Throws NoBifurcation when 8 zeta > pi^2 f^2 and DegenerateBifurcation at
// equality (double root theta = 0).
BifurcationAngles bifurcation_angles(const Params& p);

// Samples of sqrt(2 zeta) sech(sqrt(zeta) (x - center)) (cos theta, sin theta)^T.
Field2 soliton_profile(double theta, double zeta, double center, const Grid& grid);

// Sum of rotated solitons at the template centers, superposed on the constant
// state u_inf when epsilon > 0. Sets *overlap_warning (if given) when some
// pair of pulses is closer than 5/sqrt(zeta).
Field2 build_guess(const SolitonTemplate& tpl, const Params& p, const Grid& grid,
                   bool* overlap_warning = nullptr);

// Raw scale factors of the map from the perturbed-NLS form to the original
// LLE formulation with dispersion d and unit damping:
//   u~(x,t) = amplitude * u(x / space, t / eps).
struct RescaleFactors {
  double amplitude = 1.0;  // eps^{-1/2}
  double space = 1.0;      // (d eps)^{1/2}; the period is multiplied by this
  double detuning = 1.0;   // eps^{-1}
  double forcing = 1.0;    // eps^{-1/2}
};

RescaleFactors rescale_factors(double epsilon, double d);

// Applies the scaling map. The returned Solution solves the original LLE with
// dispersion d, detuning zeta/eps, forcing f/sqrt(eps) and unit damping; its
// Params carry epsilon = 1 and d. Throws ZeroEpsilon when eps = 0.
Solution rescale_to_physical(const Solution& s, double d);

// Inverse of rescale_to_physical (maps a physical-form solution with the
// given eps back to the perturbed-NLS form).
Solution rescale_from_physical(const Solution& s, double epsilon);

}  // namespace cf
