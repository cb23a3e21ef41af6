#include <cmath>

#include "combforge/model.hpp"
#include "combforge/stationary.hpp"
#include "doctest.h"

using namespace cf;

namespace {

const Params kStable = [] {
  Params p;
  p.zeta = 1.0;
  p.f = 2.0;
  p.epsilon = 0.05;
  return p;
}();

Field2 one_pulse_guess(const Params& p, const Grid& g) {
  SolitonTemplate tpl;
  tpl.theta = bifurcation_angles(p).theta_stable;
  tpl.include_center_pulse = true;
  return build_guess(tpl, p, g);
}

}  // namespace

TEST_CASE("jacobian matches finite differences of the residual") {
  const Grid g(20.0, 32);
  Params p = kStable;
  Field2 u(g);
  for (int j = 0; j < g.n; ++j) {
    u.u1[j] = 0.3 * std::sin(2.0 * M_PI * g.x(j) / g.period) + 0.1;
    u.u2[j] = 0.2 * std::cos(4.0 * M_PI * g.x(j) / g.period);
  }
  const MatrixXd a = jacobian(u, p);
  const double h = 1e-6;
  for (int col : {0, 5, 17, 32, 40, 63}) {
    Field2 up = u, um = u;
    ArrayXd& cp = col < g.n ? up.u1 : up.u2;
    ArrayXd& cm = col < g.n ? um.u1 : um.u2;
    cp[col % g.n] += h;
    cm[col % g.n] -= h;
    const Field2 rp = residual(up, p);
    const Field2 rm = residual(um, p);
    for (int row = 0; row < 2 * g.n; ++row) {
      const double fd = row < g.n ? (rp.u1[row] - rm.u1[row]) / (2 * h)
                                  : (rp.u2[row - g.n] - rm.u2[row - g.n]) / (2 * h);
      CHECK(a(row, col) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("newton converges to a 1-pulse with small residual") {
  const Grid g(60.0, 256);
  const Solution sol = newton_solve(one_pulse_guess(kStable, g), kStable, NewtonOpts{});
  CHECK(sol.residual_norm < 1e-10);
  CHECK(sol.is_even);
  REQUIRE(sol.pulse_centers.size() == 1);
  CHECK(std::abs(sol.pulse_centers[0]) < 0.1);
  CHECK(sol.period == g.period);
}

TEST_CASE("newton solution is grid-converged") {
  const Grid g1(60.0, 256);
  const Grid g2(60.0, 512);
  const Solution s1 = newton_solve(one_pulse_guess(kStable, g1), kStable, NewtonOpts{});
  const Solution s2 = newton_solve(one_pulse_guess(kStable, g2), kStable, NewtonOpts{});
  // compare on the coarse points (every second fine point)
  double diff = 0.0;
  for (int j = 0; j < g1.n; ++j)
    diff = std::max(diff, std::hypot(s1.field.u1[j] - s2.field.u1[2 * j],
                                     s1.field.u2[j] - s2.field.u2[2 * j]));
  CHECK(diff < 1e-8);
}

TEST_CASE("newton reports no convergence on a hopeless guess") {
  const Grid g(60.0, 64);
  Params p = kStable;
  Field2 bad(g);
  bad.u1 = ArrayXd::Constant(g.n, 50.0);
  NewtonOpts opts;
  opts.max_iter = 4;
  CHECK_THROWS_AS(newton_solve(bad, p, opts), NumericalError);
}

TEST_CASE("continuation in epsilon from the NLS soliton") {
  const Grid g(60.0, 256);
  Params p0 = kStable;
  p0.epsilon = 0.0125;
  std::vector<Params> path;
  for (double e : {0.0125, 0.025, 0.0375, 0.05}) {
    Params q = kStable;
    q.epsilon = e;
    path.push_back(q);
  }
  const auto sols = continue_in(path, one_pulse_guess(p0, g), NewtonOpts{});
  REQUIRE(sols.size() == 4);
  for (const Solution& s : sols) CHECK(s.residual_norm < 1e-10);
  // the branch moves continuously
  CHECK((sols[3].field.u1 - sols[0].field.u1).abs().maxCoeff() < 0.5);
}

TEST_CASE("detect_pulses finds superposed pulse centers") {
  const Grid g(90.0, 512);
  Params p = kStable;
  SolitonTemplate tpl;
  tpl.theta = bifurcation_angles(p).theta_stable;
  tpl.centers = {-30.0, 0.0, 25.0};
  const Field2 guess = build_guess(tpl, p, g);
  const auto centers = detect_pulses(guess);
  REQUIRE(centers.size() == 3);
  CHECK(centers[0] == doctest::Approx(-30.0).epsilon(0.01));
  CHECK(centers[1] == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
  CHECK(centers[2] == doctest::Approx(25.0).epsilon(0.01));
}

TEST_CASE("detect_pulses returns empty on a constant state") {
  const Grid g(30.0, 64);
  Field2 c(g);
  c.u1 = ArrayXd::Constant(g.n, 0.2);
  CHECK(detect_pulses(c).empty());
}
