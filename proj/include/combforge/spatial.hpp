#pragma once

#include <array>
#include <complex>

#include "combforge/params.hpp"
#include "combforge/stationary.hpp"

namespace cf {

// Phase-space point U = (u1, u2, u1', u2') of the stationary ODE written as a
// first-order system.
using StateVec = std::array<double, 4>;

// The reverser R = diag(1, 1, -1, -1).
inline StateVec reverse_state(const StateVec& u) { return {u[0], u[1], -u[2], -u[3]}; }

struct Equilibrium {
  std::array<double, 2> u_inf{};  // constant state of the PDE
  StateVec U_inf{};               // (u_inf, 0)^T
  double alpha = 0.0;             // Re of the eigenvalue quadruple
  double beta = 0.0;              // Im of the eigenvalue quadruple
  std::array<std::complex<double>, 2> nu{};  // nu_{+}, nu_{-} with nu^2 closed form
};

// Right-hand side of U' = F(U; eps):
//   (U3, U4, zeta U1 + eps U2 - |u|^2 U1, zeta U2 - eps U1 - |u|^2 U2 + eps f).
StateVec vector_field(const StateVec& u, const Params& p);

// 4x4 Jacobian of the vector field.
Eigen::Matrix4d vector_field_jacobian(const StateVec& u, const Params& p);

// Unique equilibrium near 0 with its saddle-focus eigenvalue data. Throws
// NotSaddleFocus when the eigenvalues are not of the form +-alpha +- i beta
// with alpha, beta > 0 (in particular at eps = 0).
Equilibrium equilibrium(const Params& p);

// Same root and nu data without the eigenvalue classification; never throws
// NotSaddleFocus (alpha, beta stay 0).
Equilibrium equilibrium_state_only(const Params& p);

struct ShootOpts {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double section_tol = 1e-10;   // target |U3|, |U4| at the half period
  double fd_step = 1e-7;        // finite-difference step of the 2x2 section Newton
  int max_iter = 30;
  double escape_factor = 10.0;  // blowup radius = escape_factor * sqrt(2 zeta)
};

// Corrects an initial point (U1, U2, 0, 0) in Fix(R) so that the flow lands
// in Fix(R) again at x = half_period, which characterizes a symmetric
// periodic orbit of period 2 * half_period.
StateVec shoot_symmetric_periodic(double half_period, const Params& p,
                                  std::array<double, 2> guess,
                                  const ShootOpts& opts = {});

// Integrates U' = F(U; eps) from state at x = 0 over [0, length], sampling at
// n_samples equispaced points (including both ends).
std::vector<StateVec> flow_samples(const StateVec& start, double length, int n_samples,
                                   const Params& p, const ShootOpts& opts = {});

// Numerical proxy for homoclinic nondegeneracy: true iff exactly one singular
// value of the full-space collocation Jacobian lies below 1e-6 times the
// largest one.
bool kernel_simplicity(const Solution& sol);

}  // namespace cf
