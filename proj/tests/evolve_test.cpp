#include <cmath>

#include "combforge/evolve.hpp"
#include "combforge/model.hpp"
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

Solution solve_one_pulse(const Params& p, const Grid& g) {
  SolitonTemplate tpl;
  tpl.theta = bifurcation_angles(p).theta_stable;
  tpl.include_center_pulse = true;
  return newton_solve(build_guess(tpl, p, g), p, NewtonOpts{});
}

}  // namespace

TEST_CASE("splitting preserves the NLS soliton up to second order in dt") {
  // eps = 0, theta = 0: the soliton is a fixed point of the flow, so the
  // one-step defect measures the splitting error directly
  const Grid g(60.0, 256);
  Params p;
  p.zeta = 1.0;
  p.f = 2.0;
  p.epsilon = 0.0;
  const Field2 phi = soliton_profile(0.0, p.zeta, 0.0, g);
  double prev = -1.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    // march to a fixed horizon so the global error order (2) is what shows
    Field2 u = phi;
    const int steps = static_cast<int>(std::lround(0.2 / dt));
    for (int s = 0; s < steps; ++s) u = step(u, p, dt);
    const double err = (u - phi).sup_norm();
    if (prev > 0.0) CHECK(prev / err > 3.0);  // order 2 gives factor ~4
    prev = err;
  }
}

TEST_CASE("stationary LLE solution is a fixed point of the flow") {
  const Grid g(60.0, 256);
  const Solution sol = solve_one_pulse(kStable, g);
  Field2 u = sol.field;
  for (int s = 0; s < 200; ++s) u = step(u, kStable, 0.01);
  // O(dt^2) splitting defect accumulated over t = 2
  CHECK((u - sol.field).sup_norm() < 1e-3);
}

TEST_CASE("random perturbation is deterministic in the seed and band-limited") {
  const Grid g(40.0, 128);
  const Field2 a = random_perturbation(g, 1e-3, 42);
  const Field2 b = random_perturbation(g, 1e-3, 42);
  const Field2 c = random_perturbation(g, 1e-3, 43);
  CHECK((a.u1 - b.u1).abs().maxCoeff() == 0.0);
  CHECK((a.u2 - b.u2).abs().maxCoeff() == 0.0);
  CHECK((a.u1 - c.u1).abs().maxCoeff() > 0.0);
  CHECK(a.sup_norm() == doctest::Approx(1e-3));
  // smoothness: spectral derivative stays modest relative to amplitude
  CHECK(derivative(a, 1).sup_norm() < 50.0 * a.sup_norm());
}

TEST_CASE("perturbed stable pulse decays back to the orbit") {
  const Grid g(60.0, 256);
  const Solution sol = solve_one_pulse(kStable, g);
  const Field2 pert = random_perturbation(g, 1e-3, 11);
  // dt small enough that the O(dt^2) splitting bias of the discrete fixed
  // point sits well below the decayed perturbation level
  EvolveOpts opts;
  opts.dt = 0.01;
  const EvolutionTrace tr = evolve_perturbed(sol, pert, 1, 100.0, opts);
  REQUIRE(tr.times.size() > 10);
  CHECK(tr.perturbation_l2.back() < 0.2 * tr.perturbation_l2.front());
  // mod norm never exceeds the raw norm
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    CHECK(tr.perturbation_l2[i] <= tr.raw_l2[i] + 1e-12);
}

TEST_CASE("gamma matching recovers an explicit translation") {
  const Grid g(60.0, 256);
  const Solution sol = solve_one_pulse(kStable, g);
  // perturbation = translated solution minus solution; gamma should find it
  const double shift = 3.0 * g.spacing();
  Field2 translated(g);
  const int s = 3;
  for (int j = 0; j < g.n; ++j) {
    translated.u1[j] = sol.field.u1[(j - s + g.n) % g.n];
    translated.u2[j] = sol.field.u2[(j - s + g.n) % g.n];
  }
  const Field2 pert = translated - sol.field;
  EvolveOpts opts;
  opts.dt = 0.01;
  opts.sample_interval = 0.01;
  const EvolutionTrace tr = evolve_perturbed(sol, pert, 1, 0.02, opts);
  // the raw distance is O(shift) while the mod distance is tiny; the
  // convention is u(x) = ref(x + gamma), so gamma = -shift here
  CHECK(tr.perturbation_l2.front() < 0.05 * tr.raw_l2.front());
  CHECK(std::abs(std::remainder(tr.gamma.front() + shift, g.period)) < 0.05);
}

TEST_CASE("blowup is detected") {
  const Grid g(60.0, 128);
  const Solution sol = solve_one_pulse(kStable, g);
  Field2 huge(g);
  huge.u1 = ArrayXd::Constant(g.n, 40.0);
  CHECK_THROWS_AS(evolve_perturbed(sol, huge, 1, 5.0), Blowup);
}

TEST_CASE("evolver advance matches the single-step helper") {
  const Grid g(30.0, 64);
  const Solution sol = solve_one_pulse(kStable, g);
  const Field2 pert = random_perturbation(g, 1e-2, 5);
  const Field2 u0 = sol.field + pert;
  const Evolver ev(g, kStable, 0.02);
  VectorXcd u = u0.complexified();
  ev.advance(u);
  const Field2 via_step = step(u0, kStable, 0.02);
  CHECK((Field2::from_complex(g, u) - via_step).sup_norm() < 1e-13);
}
