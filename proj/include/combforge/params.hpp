#pragma once

#include <optional>

#include "combforge/errors.hpp"

namespace cf {

// Physical / continuation parameters of the perturbed-NLS form of the LLE:
//   i u_t = -u_xx + zeta u - |u|^2 u + eps i (-u + f).
// The dispersion d is only used by the scaling map back to the original
// formulation i u_t = -d u_xx + zeta u - |u|^2 u - i u + i f.
struct Params {
  double zeta = 1.0;     // detuning, > 0
  double f = 2.0;        // forcing, > 0
  double epsilon = 0.0;  // damping/forcing scale, >= 0
  std::optional<double> d;  // dispersion for the scaling map, > 0

  void validate() const {
    if (!(zeta > 0.0)) throw ConfigError("Params: zeta must be > 0", "zeta");
    if (!(f > 0.0)) throw ConfigError("Params: f must be > 0", "f");
    if (!(epsilon >= 0.0)) throw ConfigError("Params: epsilon must be >= 0", "epsilon");
    if (d && !(*d > 0.0)) throw ConfigError("Params: d must be > 0", "d");
  }
};

}  // namespace cf
