#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "combforge/spatial.hpp"
#include "combforge/stationary.hpp"

namespace cf {

// Eigenvalues of the discretized Bloch operator L_xi(u) - eps at one xi.
struct BlochSlice {
  double xi = 0.0;  // in [-pi, pi)
  std::vector<std::complex<double>> eigenvalues;  // 2n values
};

enum class StabilityKind { DiffusivelyStable, Unstable, Indeterminate };

struct StabilityVerdict {
  StabilityKind kind = StabilityKind::Indeterminate;
  double theta_bound = 0.0;     // min over |xi| >= xi_exclusion of -Re lambda0 / xi^2
  double gap = 0.0;             // distance of non-critical spectrum from the axis
  bool zero_simple = false;     // 0 simple eigenvalue of the xi = 0 slice
  double max_unstable_re = 0.0; // largest Re over all slices (0-deadband excluded)
  std::string note;
};

struct BlochSweep {
  std::vector<BlochSlice> slices;
  std::vector<std::pair<double, double>> critical_curve;  // (xi, lambda0) pairs
  StabilityVerdict verdict;
  double max_critical_imag = 0.0;  // largest |Im| along the tracked curve
};

struct SweepOpts {
  double zero_deadband = 1e-9;   // |lambda| below this counts as "at zero"
  double xi_exclusion = 0.05;    // skip |xi| below this in the theta estimate
  double track_gap_ratio = 2.0;  // ambiguity threshold of nearest-neighbor tracking
  int threads = 1;
};

// Curve-fit result for lambda0(xi) ~ a (cos(xi)-1) e^{-2 alpha T} sin(2 beta T + b).
struct CurveFit {
  double a = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double rms_relative = 0.0;
};

struct SmallEigReport {
  double delta0 = 0.0;
  std::vector<std::complex<double>> eigenvalues;  // inside B_{delta0}(0)
  int n_stable = 0;    // Re < -deadband
  int n_unstable = 0;  // Re > +deadband
  bool zero_is_simple = false;
};

struct AprioriBox {
  double rho = 0.0;   // sup-norm bound of the wave
  double eta1 = 0.0;  // |zeta| + 4 rho^2
  std::optional<double> eta2;
};

enum class BlochConvention {
  ScaledByPeriod,  // xi-shift xi / L (Floquet-Bloch standard; default)
  LiteralPeriod,   // xi-shift xi * L
};

// Dense complex 2n x 2n matrix of J L_xi(u) - eps. At xi = 0 it coincides
// with the real stationary Jacobian.
MatrixXcd bloch_matrix(const Solution& sol, double xi,
                       BlochConvention conv = BlochConvention::ScaledByPeriod);

// Dense eigensolve per slice, critical-curve tracking from the zero
// eigenvalue at xi = 0, verdict per the diffusive-stability conditions.
// xi_grid must contain 0 and lie in [-pi, pi).
BlochSweep sweep(const Solution& sol, const std::vector<double>& xi_grid,
                 const SweepOpts& opts = {});

struct SmallEigOpts {
  double deadband = 1e-9;
  bool check_window = false;   // re-solve on a doubled window and compare
  NewtonOpts newton{};         // used by the window check
  double window_move_tol = 0.10;
};

// Eigenvalues of the xi = 0 matrix inside B_{delta0}(0), classified by the
// sign of the real part.
SmallEigReport small_eigs(const Solution& sol, double delta0,
                          const SmallEigOpts& opts = {});

// Nonlinear least squares of the per-period critical-curve amplitudes against
// a e^{-2 alpha T} sin(2 beta T + b), (alpha, beta) seeded from eq.
CurveFit fit_critical_curve(const std::vector<std::pair<double, BlochSweep>>& sweeps,
                            const Equilibrium& eq, const SweepOpts& opts = {});

// Per-period amplitude c(T) with lambda0(xi) ~ c(T) (cos(xi) - 1), estimated
// by least squares over the sampled xi away from 0.
double critical_curve_amplitude(const BlochSweep& sw, double xi_exclusion = 0.05);

AprioriBox apriori_box(const Solution& sol);

// True iff every eigenvalue with Re >= -eps/2 satisfies |Re| < eta1.
bool apriori_box_check(const AprioriBox& box, const Params& p,
                       const std::vector<BlochSlice>& slices);

// Max over k_grid of |Re lambda(k) + eps| for the constant-state symbol
// J((k)^2 + zeta - M(u_inf)) - eps. out_of_regime (if given) is set when
// det(k^2 + zeta - M(u_inf)) <= 0 for some k.
double essential_line_check(const Params& p, const std::vector<double>& k_grid,
                            bool* out_of_regime = nullptr);

}  // namespace cf
