#include "combforge/model.hpp"

#include <algorithm>
#include <cmath>

#include "combforge/spatial.hpp"

namespace cf {

BifurcationAngles bifurcation_angles(const Params& p) {
  p.validate();
  const double c = 2.0 * std::sqrt(2.0 * p.zeta) / (M_PI * p.f);
  if (std::abs(c - 1.0) < 1e-12)
    throw DegenerateBifurcation("bifurcation_angles: 8 zeta = pi^2 f^2 (double root theta = 0)");
  if (c > 1.0)
    throw NoBifurcation("bifurcation_angles: 8 zeta > pi^2 f^2");
  BifurcationAngles out;
  out.theta_stable = std::acos(c);
  out.theta_unstable = -out.theta_stable;
  return out;
}

Field2 soliton_profile(double theta, double zeta, double center, const Grid& grid) {
  if (!(zeta > 0.0)) throw ConfigError("soliton_profile: zeta must be > 0", "zeta");
  const double amp = std::sqrt(2.0 * zeta);
  const double rate = std::sqrt(zeta);
  Field2 f(grid);
  const double c = std::cos(theta), s = std::sin(theta);
  for (int j = 0; j < grid.n; ++j) {
    const double sech = 1.0 / std::cosh(rate * (grid.x(j) - center));
    f.u1[j] = amp * sech * c;
    f.u2[j] = amp * sech * s;
  }
  return f;
}

Field2 build_guess(const SolitonTemplate& tpl, const Params& p, const Grid& grid,
                   bool* overlap_warning) {
  p.validate();
  std::vector<double> centers = tpl.centers;
  if (tpl.include_center_pulse) centers.push_back(0.0);
  std::sort(centers.begin(), centers.end());

  bool overlap = false;
  const double min_sep = 5.0 / std::sqrt(p.zeta);
  for (std::size_t i = 1; i < centers.size(); ++i)
    if (centers[i] - centers[i - 1] < min_sep) overlap = true;
  // neighboring copies through the periodic boundary
  if (centers.size() > 1 &&
      (centers.front() + grid.period) - centers.back() < min_sep)
    overlap = true;
  if (overlap_warning) *overlap_warning = overlap;

  Field2 out(grid);
  if (p.epsilon > 0.0) {
    const Equilibrium eq = [&] {
      try {
        return equilibrium(p);
      } catch (const NotSaddleFocus&) {
        return equilibrium_state_only(p);
      }
    }();
    out.u1 = ArrayXd::Constant(grid.n, eq.u_inf[0]);
    out.u2 = ArrayXd::Constant(grid.n, eq.u_inf[1]);
  }
  for (double c : centers) {
    const Field2 pulse = soliton_profile(tpl.theta, p.zeta, c, grid);
    out.u1 += pulse.u1;
    out.u2 += pulse.u2;
  }
  return out;
}

RescaleFactors rescale_factors(double epsilon, double d) {
  if (!(epsilon > 0.0)) throw ZeroEpsilon("rescale_factors: epsilon must be > 0");
  RescaleFactors r;
  r.amplitude = 1.0 / std::sqrt(epsilon);
  r.space = std::sqrt(d * epsilon);
  r.detuning = 1.0 / epsilon;
  r.forcing = 1.0 / std::sqrt(epsilon);
  return r;
}

Solution rescale_to_physical(const Solution& s, double d) {
  if (!(s.params.epsilon > 0.0)) throw ZeroEpsilon("rescale_to_physical: epsilon = 0");
  if (!(d > 0.0)) throw ConfigError("rescale_to_physical: d must be > 0", "d");
  const RescaleFactors r = rescale_factors(s.params.epsilon, d);
  Solution out = s;
  out.params.zeta = s.params.zeta * r.detuning;
  out.params.f = s.params.f * r.forcing;
  out.params.epsilon = 1.0;
  out.params.d = d;
  out.field.grid = Grid(s.field.grid.period * r.space, s.field.grid.n);
  out.field.u1 = s.field.u1 * r.amplitude;
  out.field.u2 = s.field.u2 * r.amplitude;
  out.period = out.field.grid.period;
  out.pulse_centers.clear();
  for (double c : s.pulse_centers) out.pulse_centers.push_back(c * r.space);
  return out;
}

Solution rescale_from_physical(const Solution& s, double epsilon) {
  if (!(epsilon > 0.0)) throw ZeroEpsilon("rescale_from_physical: epsilon must be > 0");
  if (!s.params.d) throw ConfigError("rescale_from_physical: solution has no dispersion", "d");
  const RescaleFactors r = rescale_factors(epsilon, *s.params.d);
  Solution out = s;
  out.params.zeta = s.params.zeta / r.detuning;
  out.params.f = s.params.f / r.forcing;
  out.params.epsilon = epsilon;
  out.params.d.reset();
  out.field.grid = Grid(s.field.grid.period / r.space, s.field.grid.n);
  out.field.u1 = s.field.u1 / r.amplitude;
  out.field.u2 = s.field.u2 / r.amplitude;
  out.period = out.field.grid.period;
  out.pulse_centers.clear();
  for (double c : s.pulse_centers) out.pulse_centers.push_back(c / r.space);
  return out;
}

}  // namespace cf
