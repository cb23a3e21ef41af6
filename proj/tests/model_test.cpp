#include <cmath>

#include "combforge/model.hpp"
#include "combforge/spatial.hpp"
#include "combforge/stationary.hpp"
#include "doctest.h"

using namespace cf;

TEST_CASE("bifurcation angles satisfy the root identity") {
  Params p;
  p.zeta = 1.0;
  p.f = 2.0;
  const BifurcationAngles a = bifurcation_angles(p);
  CHECK(std::abs(M_PI * p.f * std::cos(a.theta_stable) - 2.0 * std::sqrt(2.0 * p.zeta)) <
        1e-12);
  CHECK(std::abs(M_PI * p.f * std::cos(a.theta_unstable) - 2.0 * std::sqrt(2.0 * p.zeta)) <
        1e-12);
  CHECK(std::sin(a.theta_stable) > 0.0);
  CHECK(std::sin(a.theta_unstable) < 0.0);
  CHECK(a.theta_unstable == doctest::Approx(-a.theta_stable));
}

TEST_CASE("bifurcation angle error cases") {
  Params p;
  p.zeta = 10.0;
  p.f = 1.0;  // 8 zeta > pi^2 f^2
  CHECK_THROWS_AS(bifurcation_angles(p), NoBifurcation);
  Params q;
  q.f = 1.0;
  q.zeta = M_PI * M_PI / 8.0;  // exact equality
  CHECK_THROWS_AS(bifurcation_angles(q), DegenerateBifurcation);
}

TEST_CASE("soliton profile solves the stationary NLS") {
  const Grid g(60.0, 1024);
  Params p;
  p.zeta = 1.0;
  p.f = 2.0;
  p.epsilon = 0.0;
  for (double theta : {0.0, 0.7, -1.2}) {
    const Field2 phi = soliton_profile(theta, p.zeta, 0.0, g);
    CHECK(residual(phi, p).sup_norm() < 1e-10);
  }
}

TEST_CASE("soliton profile peak and rotation") {
  const Grid g(40.0, 256);
  const double theta = 0.5;
  const Field2 phi = soliton_profile(theta, 2.0, 0.0, g);
  CHECK(phi.sup_norm() == doctest::Approx(2.0));  // sqrt(2 * 2)
  const int j0 = g.n / 2;                         // x = 0
  CHECK(phi.u1[j0] == doctest::Approx(2.0 * std::cos(theta)));
  CHECK(phi.u2[j0] == doctest::Approx(2.0 * std::sin(theta)));
}

TEST_CASE("build_guess superposes pulses on the constant state") {
  const Grid g(60.0, 256);
  Params p;
  p.zeta = 1.0;
  p.f = 2.0;
  p.epsilon = 0.05;
  SolitonTemplate tpl;
  tpl.theta = bifurcation_angles(p).theta_stable;
  tpl.centers = {-15.0, 15.0};
  bool overlap = true;
  const Field2 guess = build_guess(tpl, p, g, &overlap);
  CHECK_FALSE(overlap);
  // far field equals the equilibrium
  const Equilibrium eq = equilibrium(p);
  CHECK(guess.u1[0] == doctest::Approx(eq.u_inf[0]).epsilon(1e-3));
  CHECK(guess.u2[0] == doctest::Approx(eq.u_inf[1]).epsilon(1e-3));

  SolitonTemplate close;
  close.theta = tpl.theta;
  close.centers = {-1.0, 1.0};
  build_guess(close, p, g, &overlap);
  CHECK(overlap);
}

TEST_CASE("rescaling round trip") {
  const Grid g(50.0, 128);
  Params p;
  p.zeta = 1.0;
  p.f = 2.0;
  p.epsilon = 0.05;
  Solution s;
  s.field = soliton_profile(0.3, p.zeta, 0.0, g);
  s.params = p;
  s.pulse_centers = {0.0};
  s.period = g.period;
  const double d = 2.5;
  const Solution phys = rescale_to_physical(s, d);
  CHECK(phys.params.epsilon == 1.0);
  CHECK(phys.params.zeta == doctest::Approx(p.zeta / p.epsilon));
  CHECK(phys.params.f == doctest::Approx(p.f / std::sqrt(p.epsilon)));
  CHECK(phys.field.grid.period == doctest::Approx(g.period * std::sqrt(d * p.epsilon)));
  const Solution back = rescale_from_physical(phys, p.epsilon);
  CHECK(back.params.zeta == doctest::Approx(p.zeta));
  CHECK(back.params.f == doctest::Approx(p.f));
  CHECK((back.field.u1 - s.field.u1).abs().maxCoeff() < 1e-12);
  CHECK((back.field.u2 - s.field.u2).abs().maxCoeff() < 1e-12);
  CHECK(back.field.grid.period == doctest::Approx(g.period));
}

TEST_CASE("rescaling rejects epsilon = 0") {
  Solution s;
  s.field = Field2(Grid(10.0, 32));
  s.params = Params{1.0, 2.0, 0.0, {}};
  CHECK_THROWS_AS(rescale_to_physical(s, 1.0), ZeroEpsilon);
}
