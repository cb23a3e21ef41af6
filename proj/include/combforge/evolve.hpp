#pragma once

#include <cstdint>
#include <vector>

#include "combforge/stationary.hpp"

namespace cf {

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> raw_l2;           // ||u(t) - u_ref||_L2
  std::vector<double> perturbation_l2;  // min over shifts of ||u(t) - u_ref(.+gamma)||
  std::vector<double> gamma;            // the minimizing shift
};

// Strang split step for i u_t = -u_xx + zeta u - |u|^2 u + eps i(-u + f):
// half-step of the affine linear flow (exact per Fourier mode), full exact
// nonlinear phase rotation, half linear step again.
Field2 step(const Field2& field, const Params& p, double dt);

// Reusable stepper holding the FFT workspace for a repeated-step loop.
class Evolver {
 public:
  Evolver(const Grid& grid, const Params& p, double dt);
  void advance(VectorXcd& u) const;  // one Strang step in place
  double dt() const { return dt_; }

 private:
  Grid grid_;
  double dt_;
  VectorXcd half_linear_phase_;  // e^{mu_k dt/2} per mode
  VectorXcd half_linear_force_;  // affine part of the half linear flow
};

struct EvolveOpts {
  double dt = 0.05;
  double sample_interval = 0.5;
  double gamma_resolution = 1e-6;  // of one period
  double blowup_factor = 10.0;
};

// Integrates sol + perturbation on M concatenated periods; at each sample the
// shift gamma(t) minimizes the L2 distance to the translated reference.
// Throws Blowup when the sup norm exceeds blowup_factor * max|sol|.
EvolutionTrace evolve_perturbed(const Solution& sol, const Field2& perturbation,
                                int copies, double t_end, const EvolveOpts& opts = {});

struct DiffusiveOpts {
  EvolveOpts evolve{};
  double perturbation_size = 1e-3;  // sup norm of the initial perturbation
  double fit_fraction = 0.1;        // fit over [fit_fraction * t_end, t_end]
  double tail_threshold = 0.01;     // DomainTooSmall above this boundary mass
};

struct DiffusiveResult {
  double fitted_exponent_raw = 0.0;
  double fitted_exponent_mod = 0.0;
  bool degenerate = false;  // zero perturbation; exponents are NaN
  EvolutionTrace trace;
};

// Localized-perturbation experiment: random perturbation supported on the
// central period, decay exponents of log(l2) against log(1+t) over the final
// decade. Throws DomainTooSmall when the perturbation mass in the outermost
// period exceeds tail_threshold of the total before t_end.
DiffusiveResult diffusive_experiment(const Solution& sol, int copies, std::uint64_t seed,
                                     double t_end, const DiffusiveOpts& opts = {});

// Random M*L-periodic perturbation with the given sup-norm amplitude, smooth
// (band-limited) and deterministic in the seed.
Field2 random_perturbation(const Grid& grid, double amplitude, std::uint64_t seed);

}  // namespace cf
