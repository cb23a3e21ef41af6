#include "combforge/spatial.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "combforge/eig.hpp"

namespace cf {

StateVec vector_field(const StateVec& u, const Params& p) {
  const double mag2 = u[0] * u[0] + u[1] * u[1];
  return {u[2], u[3], p.zeta * u[0] + p.epsilon * u[1] - mag2 * u[0],
          p.zeta * u[1] - p.epsilon * u[0] - mag2 * u[1] + p.epsilon * p.f};
}

Eigen::Matrix4d vector_field_jacobian(const StateVec& u, const Params& p) {
  const double u1 = u[0], u2 = u[1];
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(0, 2) = 1.0;
  j(1, 3) = 1.0;
  j(2, 0) = p.zeta - (3.0 * u1 * u1 + u2 * u2);
  j(2, 1) = p.epsilon - 2.0 * u1 * u2;
  j(3, 0) = -p.epsilon - 2.0 * u1 * u2;
  j(3, 1) = p.zeta - (u1 * u1 + 3.0 * u2 * u2);
  return j;
}

namespace {

std::array<double, 2> equilibrium_root(const Params& p) {
  double u1 = 0.0, u2 = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double mag2 = u1 * u1 + u2 * u2;
    const double g1 = p.zeta * u1 + p.epsilon * u2 - mag2 * u1;
    const double g2 = p.zeta * u2 - p.epsilon * u1 - mag2 * u2 + p.epsilon * p.f;
    if (std::hypot(g1, g2) < 1e-14) break;
    const double a = p.zeta - (3.0 * u1 * u1 + u2 * u2);
    const double b = p.epsilon - 2.0 * u1 * u2;
    const double c = -p.epsilon - 2.0 * u1 * u2;
    const double d = p.zeta - (u1 * u1 + 3.0 * u2 * u2);
    const double det = a * d - b * c;
    if (det == 0.0) throw NoConvergence("equilibrium: singular 2x2 Jacobian", iter, std::hypot(g1, g2));
    u1 -= (d * g1 - b * g2) / det;
    u2 -= (-c * g1 + a * g2) / det;
  }
  const StateVec f = vector_field({u1, u2, 0.0, 0.0}, p);
  const double resid = std::hypot(std::hypot(f[0], f[1]), std::hypot(f[2], f[3]));
  if (resid >= 1e-12)
    throw NoConvergence("equilibrium: Newton from 0 did not converge", 100, resid);
  return {u1, u2};
}

Equilibrium fill_state(const Params& p) {
  Equilibrium eq;
  eq.u_inf = equilibrium_root(p);
  eq.U_inf = {eq.u_inf[0], eq.u_inf[1], 0.0, 0.0};
  const double mag2 = eq.u_inf[0] * eq.u_inf[0] + eq.u_inf[1] * eq.u_inf[1];
  const double disc = p.epsilon * p.epsilon - mag2 * mag2;
  const double re = p.zeta - 2.0 * mag2;
  if (disc >= 0.0) {
    eq.nu[0] = std::sqrt(std::complex<double>(re, std::sqrt(disc)));
    eq.nu[1] = std::sqrt(std::complex<double>(re, -std::sqrt(disc)));
  } else {
    eq.nu[0] = std::sqrt(std::complex<double>(re + std::sqrt(-disc), 0.0));
    eq.nu[1] = std::sqrt(std::complex<double>(re - std::sqrt(-disc), 0.0));
  }
  return eq;
}

}  // namespace

Equilibrium equilibrium_state_only(const Params& p) { return fill_state(p); }

Equilibrium equilibrium(const Params& p) {
  Equilibrium eq = fill_state(p);

  // consistency anchor of the implicit-function setup
  Params p0 = p;
  p0.epsilon = 0.0;
  const double det0 = vector_field_jacobian({0, 0, 0, 0}, p0).determinant();
  if (std::abs(det0 - p.zeta * p.zeta) > 1e-10 * std::max(1.0, p.zeta * p.zeta))
    throw NumericalError("equilibrium: det dF(0;0) != zeta^2");

  const Eigen::Matrix4d j = vector_field_jacobian(eq.U_inf, p);
  const Eigen::EigenSolver<Eigen::Matrix4d> es(j);
  double alpha = -1.0, beta = -1.0;
  for (int i = 0; i < 4; ++i) {
    const auto ev = es.eigenvalues()[i];
    if (ev.real() > 0.0 && ev.imag() > 0.0) {
      alpha = ev.real();
      beta = ev.imag();
    }
  }
  if (alpha <= 0.0 || beta <= 0.0)
    throw NotSaddleFocus("equilibrium: eigenvalues are not +-alpha +- i beta with alpha, beta > 0");
  const double scale = std::hypot(alpha, beta);
  for (int i = 0; i < 4; ++i) {
    const auto ev = es.eigenvalues()[i];
    if (std::abs(std::abs(ev.real()) - alpha) > 1e-8 * std::max(1.0, scale) ||
        std::abs(std::abs(ev.imag()) - beta) > 1e-8 * std::max(1.0, scale))
      throw NotSaddleFocus("equilibrium: eigenvalues do not form a saddle-focus quadruple");
  }
  eq.alpha = alpha;
  eq.beta = beta;
  return eq;
}

namespace {

namespace ode = boost::numeric::odeint;

struct Rhs {
  Params p;
  double escape2;
  void operator()(const StateVec& u, StateVec& dudx, double) const {
    const double norm2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
    if (norm2 > escape2)
      throw IntegratorBlowup("spatial flow escaped |U| > escape radius");
    dudx = vector_field(u, p);
  }
};

StateVec flow_to(const StateVec& start, double length, const Params& p,
                 const ShootOpts& opts) {
  const double r = opts.escape_factor * std::sqrt(2.0 * p.zeta);
  Rhs rhs{p, r * r};
  StateVec u = start;
  auto stepper = ode::make_controlled(opts.abs_tol, opts.rel_tol,
                                      ode::runge_kutta_dopri5<StateVec>());
  ode::integrate_adaptive(stepper, rhs, u, 0.0, length, length / 256.0);
  return u;
}

}  // namespace

std::vector<StateVec> flow_samples(const StateVec& start, double length, int n_samples,
                                   const Params& p, const ShootOpts& opts) {
  std::vector<StateVec> out;
  out.reserve(n_samples);
  out.push_back(start);
  const double h = length / (n_samples - 1);
  StateVec u = start;
  for (int i = 1; i < n_samples; ++i) {
    u = flow_to(u, h, p, opts);
    out.push_back(u);
  }
  return out;
}

StateVec shoot_symmetric_periodic(double half_period, const Params& p,
                                  std::array<double, 2> guess, const ShootOpts& opts) {
  auto section = [&](const std::array<double, 2>& g) {
    const StateVec end = flow_to({g[0], g[1], 0.0, 0.0}, half_period, p, opts);
    return std::array<double, 2>{end[2], end[3]};
  };
  std::array<double, 2> g = guess;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const auto s = section(g);
    if (std::abs(s[0]) < opts.section_tol && std::abs(s[1]) < opts.section_tol)
      return {g[0], g[1], 0.0, 0.0};
    // 2x2 finite-difference sensitivities of the section map
    const double h = opts.fd_step;
    const auto s1 = section({g[0] + h, g[1]});
    const auto s2 = section({g[0], g[1] + h});
    const double a = (s1[0] - s[0]) / h, b = (s2[0] - s[0]) / h;
    const double c = (s1[1] - s[1]) / h, d = (s2[1] - s[1]) / h;
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det))
      throw NoConvergence("shoot_symmetric_periodic: singular section map", iter, 0.0);
    g[0] -= (d * s[0] - b * s[1]) / det;
    g[1] -= (-c * s[0] + a * s[1]) / det;
  }
  const auto s = section(g);
  throw NoConvergence("shoot_symmetric_periodic: no convergence", opts.max_iter,
                      std::hypot(s[0], s[1]));
}

bool kernel_simplicity(const Solution& sol) {
  const VectorXd sv = singular_values(jacobian(sol.field, sol.params));
  const double cutoff = 1e-6 * sv[0];
  int small = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] < cutoff) ++small;
  return small == 1;
}

}  // namespace cf
