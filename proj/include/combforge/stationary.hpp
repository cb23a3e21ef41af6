#pragma once

#include <vector>

#include "combforge/grid.hpp"
#include "combforge/params.hpp"

namespace cf {

struct NewtonOpts {
  double tol = 1e-10;  // residual sup-norm target
  int max_iter = 40;
  double damping = 1.0;        // initial step scale
  bool restrict_even = true;   // solve in the even subspace
};

// A stationary periodic solution of the LLE on a collocation grid.
struct Solution {
  Field2 field;
  Params params;
  double residual_norm = 0.0;  // sup norm, re-evaluated after the solve
  bool is_even = false;
  std::vector<double> pulse_centers;
  double period = 0.0;  // = field.grid.period
};

// Stationary residual J(-u_xx + zeta u - |u|^2 u) + eps(-u + F), F = (f,0)^T.
Field2 residual(const Field2& field, const Params& p);

// Dense 2n x 2n Frechet derivative J L(u) - eps of the residual, with
// L(u) = -d_xx + zeta - [[3u1^2+u2^2, 2u1u2],[2u1u2, u1^2+3u2^2]].
// Ordering: unknowns (u1_0..u1_{n-1}, u2_0..u2_{n-1}).
MatrixXd jacobian(const Field2& field, const Params& p);

Solution newton_solve(const Field2& guess, const Params& p, const NewtonOpts& opts);

// Natural continuation: one solve per parameter value, each seeded by the
// previous solution (grid fixed). Throws NoConvergence naming the failing
// index in the message.
std::vector<Solution> continue_in(const std::vector<Params>& path, const Field2& guess,
                                  const NewtonOpts& opts);

// Local maxima of |u - u_bg| above half the global maximum, refined by
// quadratic interpolation. The background is the circular median magnitude.
std::vector<double> detect_pulses(const Field2& field);

}  // namespace cf
