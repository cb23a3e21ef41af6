#include "combforge/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "combforge/eig.hpp"

namespace cf {

MatrixXcd bloch_matrix(const Solution& sol, double xi, BlochConvention conv) {
  const Grid& g = sol.field.grid;
  const int n = g.n;
  const double shift =
      (conv == BlochConvention::ScaledByPeriod) ? xi / g.period : xi * g.period;
  const MatrixXcd lap = shifted_laplacian_matrix(g, shift);

  const ArrayXd& u1 = sol.field.u1;
  const ArrayXd& u2 = sol.field.u2;
  const ArrayXd m11 = 3.0 * u1 * u1 + u2 * u2;
  const ArrayXd m12 = 2.0 * u1 * u2;
  const ArrayXd m22 = u1 * u1 + 3.0 * u2 * u2;

  MatrixXcd l11 = lap;
  l11.diagonal().array() += sol.params.zeta;
  l11.diagonal() -= m11.matrix().cast<Complex>();
  MatrixXcd l22 = lap;
  l22.diagonal().array() += sol.params.zeta;
  l22.diagonal() -= m22.matrix().cast<Complex>();

  MatrixXcd a(2 * n, 2 * n);
  a.topLeftCorner(n, n) = (-m12).matrix().cast<Complex>().asDiagonal();
  a.topRightCorner(n, n) = l22;
  a.bottomLeftCorner(n, n) = -l11;
  a.bottomRightCorner(n, n) = m12.matrix().cast<Complex>().asDiagonal();
  a.diagonal().array() -= sol.params.epsilon;
  return a;
}

namespace {

std::vector<std::complex<double>> slice_eigenvalues(const Solution& sol, double xi) {
  if (xi == 0.0) return eigenvalues(jacobian(sol.field, sol.params));
  return eigenvalues(bloch_matrix(sol, xi));
}

}  // namespace

BlochSweep sweep(const Solution& sol, const std::vector<double>& xi_grid,
                 const SweepOpts& opts) {
  std::vector<double> xis = xi_grid;
  std::sort(xis.begin(), xis.end());
  const int m = static_cast<int>(xis.size());
  int idx0 = -1;
  for (int i = 0; i < m; ++i) {
    if (xis[i] < -M_PI || xis[i] >= M_PI)
      throw ConfigError("sweep: xi outside [-pi, pi)", "xi_grid");
    if (xis[i] == 0.0) idx0 = i;
  }
  if (idx0 < 0) throw ConfigError("sweep: xi_grid must contain 0", "xi_grid");

  BlochSweep sw;
  sw.slices.resize(m);
  const int nthreads = std::max(1, opts.threads);
  if (nthreads == 1) {
    for (int i = 0; i < m; ++i)
      sw.slices[i] = BlochSlice{xis[i], slice_eigenvalues(sol, xis[i])};
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (int i = next++; i < m; i = next++)
          sw.slices[i] = BlochSlice{xis[i], slice_eigenvalues(sol, xis[i])};
      });
    for (auto& th : pool) th.join();
  }

  // track the critical eigenvalue outward from the zero mode at xi = 0
  std::vector<Complex> tracked(m);
  auto nearest = [&](const std::vector<Complex>& evs, Complex target) {
    double best = 1e300, second = 1e300;
    Complex pick = evs[0], runner_up = evs[0];
    for (const Complex& ev : evs) {
      const double d = std::abs(ev - target);
      if (d < best) {
        second = best;
        runner_up = pick;
        best = d;
        pick = ev;
      } else if (d < second) {
        second = d;
        runner_up = ev;
      }
    }
    // benign near-ties: the conjugate partner (the slice spectra are
    // conjugation symmetric) and exact crossings (both candidates carry the
    // same value, so either choice continues the same curve)
    const double tie_tol = 1e-6 * std::max(1.0, std::abs(pick));
    const bool benign = std::abs(runner_up - std::conj(pick)) < tie_tol ||
                        std::abs(runner_up - pick) < tie_tol;
    if (best > 0.0 && second < opts.track_gap_ratio * best && !benign)
      throw TrackingLost("sweep: critical-curve tracking ambiguous (gap ratio < " +
                         std::to_string(opts.track_gap_ratio) + ")");
    return pick;
  };
  tracked[idx0] = nearest(sw.slices[idx0].eigenvalues, 0.0);
  for (int i = idx0 + 1; i < m; ++i)
    tracked[i] = nearest(sw.slices[i].eigenvalues, tracked[i - 1]);
  for (int i = idx0 - 1; i >= 0; --i)
    tracked[i] = nearest(sw.slices[i].eigenvalues, tracked[i + 1]);

  sw.critical_curve.reserve(m);
  for (int i = 0; i < m; ++i) {
    sw.critical_curve.emplace_back(xis[i], tracked[i].real());
    sw.max_critical_imag = std::max(sw.max_critical_imag, std::abs(tracked[i].imag()));
  }

  StabilityVerdict v;
  if (std::abs(tracked[idx0]) > 1e-3)
    v.note = "no eigenvalue within 1e-3 of 0 at xi = 0 (no translation mode)";

  int at_zero = 0;
  for (const Complex& ev : sw.slices[idx0].eigenvalues)
    if (std::abs(ev) < opts.zero_deadband) ++at_zero;
  v.zero_simple = (at_zero == 1) && std::abs(tracked[idx0]) < opts.zero_deadband;

  v.max_unstable_re = -1e300;
  v.gap = 1e300;
  v.theta_bound = 1e300;
  for (int i = 0; i < m; ++i) {
    const Complex crit = tracked[i];
    bool crit_seen = false;
    for (const Complex& ev : sw.slices[i].eigenvalues) {
      if (std::abs(ev) < opts.zero_deadband) continue;
      v.max_unstable_re = std::max(v.max_unstable_re, ev.real());
      if (!crit_seen && ev == crit) {
        crit_seen = true;  // the critical curve is not part of the gap
        continue;
      }
      v.gap = std::min(v.gap, -ev.real());
    }
    if (std::abs(xis[i]) >= opts.xi_exclusion)
      v.theta_bound = std::min(v.theta_bound, -crit.real() / (xis[i] * xis[i]));
  }

  if (v.max_unstable_re > opts.zero_deadband) {
    v.kind = StabilityKind::Unstable;
  } else if (v.zero_simple && v.theta_bound > 0.0 && v.gap > opts.zero_deadband) {
    v.kind = StabilityKind::DiffusivelyStable;
  } else {
    v.kind = StabilityKind::Indeterminate;
    if (v.note.empty()) v.note = "no unstable modes, but the stability conditions were not all certified";
  }
  sw.verdict = v;
  return sw;
}

namespace {

// Periodic tiling of a solution onto `copies` periods (same spacing).
Field2 tile_field(const Field2& f, int copies) {
  const Grid g2(f.grid.period * copies, f.grid.n * copies);
  Field2 out(g2);
  for (int c = 0; c < copies; ++c)
    for (int j = 0; j < f.grid.n; ++j) {
      out.u1[c * f.grid.n + j] = f.u1[j];
      out.u2[c * f.grid.n + j] = f.u2[j];
    }
  return out;
}

}  // namespace

SmallEigReport small_eigs(const Solution& sol, double delta0, const SmallEigOpts& opts) {
  if (!(delta0 > 0.0)) throw ConfigError("small_eigs: delta0 must be > 0", "delta0");
  SmallEigReport rep;
  rep.delta0 = delta0;
  const auto all = eigenvalues(jacobian(sol.field, sol.params));
  int at_zero = 0;
  for (const Complex& ev : all) {
    if (std::abs(ev) >= delta0) continue;
    rep.eigenvalues.push_back(ev);
    if (ev.real() < -opts.deadband)
      ++rep.n_stable;
    else if (ev.real() > opts.deadband)
      ++rep.n_unstable;
    if (std::abs(ev) < opts.deadband) ++at_zero;
  }
  rep.zero_is_simple = (at_zero == 1);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const Complex& a, const Complex& b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });

  if (opts.check_window) {
    // re-solve on a doubled window and demand that the small eigenvalues stay put
    NewtonOpts nopts = opts.newton;
    nopts.restrict_even = true;
    const Solution wide = newton_solve(tile_field(sol.field, 2), sol.params, nopts);
    const auto wide_evs = eigenvalues(jacobian(wide.field, wide.params));
    for (const Complex& ev : rep.eigenvalues) {
      double best = 1e300;
      for (const Complex& w : wide_evs) best = std::min(best, std::abs(w - ev));
      if (best > opts.window_move_tol * std::max(std::abs(ev), 0.1 * delta0))
        throw WindowTooSmall("small_eigs: eigenvalue moved under window doubling");
    }
  }
  return rep;
}

double critical_curve_amplitude(const BlochSweep& sw, double xi_exclusion) {
  double num = 0.0, den = 0.0;
  for (const auto& [xi, lam] : sw.critical_curve) {
    if (std::abs(xi) < xi_exclusion) continue;
    const double basis = std::cos(xi) - 1.0;
    num += lam * basis;
    den += basis * basis;
  }
  if (den == 0.0)
    throw ConfigError("critical_curve_amplitude: no samples outside the exclusion", "xi_exclusion");
  return num / den;
}

CurveFit fit_critical_curve(const std::vector<std::pair<double, BlochSweep>>& sweeps,
                            const Equilibrium& eq, const SweepOpts& opts) {
  const int m = static_cast<int>(sweeps.size());
  if (m < 4) throw ConfigError("fit_critical_curve: need at least 4 periods", "sweeps");
  std::vector<double> T(m), c(m);
  for (int i = 0; i < m; ++i) {
    T[i] = sweeps[i].first;
    c[i] = critical_curve_amplitude(sweeps[i].second, opts.xi_exclusion);
    if (c[i] == 0.0) throw FitIllConditioned("fit_critical_curve: zero amplitude sample");
  }

  // seed: alpha, beta from the equilibrium; (a, b) by linear least squares on
  // s_i = c_i e^{2 alpha T_i} = a sin(2 beta T_i + b)
  double alpha = eq.alpha, beta = eq.beta;
  auto seed_phase = [&](double al, double be, double& a, double& b) {
    double spp = 0, spq = 0, sqq = 0, sp = 0, sq = 0;
    for (int i = 0; i < m; ++i) {
      const double s = c[i] * std::exp(2.0 * al * T[i]);
      const double ps = std::sin(2.0 * be * T[i]);
      const double qs = std::cos(2.0 * be * T[i]);
      spp += ps * ps;
      spq += ps * qs;
      sqq += qs * qs;
      sp += s * ps;
      sq += s * qs;
    }
    const double det = spp * sqq - spq * spq;
    if (std::abs(det) < 1e-14 * (spp + sqq)) throw FitIllConditioned("fit_critical_curve: degenerate phase seed");
    const double p = (sqq * sp - spq * sq) / det;
    const double q = (-spq * sp + spp * sq) / det;
    a = std::hypot(p, q);
    b = std::atan2(q, p);
  };
  double a, b;
  seed_phase(alpha, beta, a, b);

  auto resid = [&](const std::array<double, 4>& th, std::vector<double>& r) {
    for (int i = 0; i < m; ++i) {
      const double model =
          th[0] * std::exp(-2.0 * th[2] * T[i]) * std::sin(2.0 * th[3] * T[i] + th[1]);
      r[i] = (model - c[i]) / std::abs(c[i]);
    }
  };

  // Levenberg-Marquardt on the relative residuals, numerical Jacobian
  std::array<double, 4> th{a, b, alpha, beta};
  std::vector<double> r(m), rt(m);
  resid(th, r);
  double cost = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
  double lm = 1e-3;
  for (int it = 0; it < 200; ++it) {
    MatrixXd jac(m, 4);
    for (int k = 0; k < 4; ++k) {
      std::array<double, 4> tp = th;
      const double h = 1e-7 * std::max(1.0, std::abs(th[k]));
      tp[k] += h;
      resid(tp, rt);
      for (int i = 0; i < m; ++i) jac(i, k) = (rt[i] - r[i]) / h;
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d g = jac.transpose() * Eigen::Map<VectorXd>(r.data(), m);
    Eigen::Matrix4d damped = jtj;
    damped.diagonal() += lm * jtj.diagonal();
    const Eigen::Vector4d step = damped.ldlt().solve(-g);
    if (!step.allFinite()) throw FitIllConditioned("fit_critical_curve: singular normal equations");
    std::array<double, 4> tn = th;
    for (int k = 0; k < 4; ++k) tn[k] += step[k];
    resid(tn, rt);
    const double cn = std::inner_product(rt.begin(), rt.end(), rt.begin(), 0.0);
    if (cn < cost) {
      th = tn;
      r = rt;
      const bool done = (cost - cn) < 1e-14 * (1.0 + cost);
      cost = cn;
      lm = std::max(lm * 0.3, 1e-12);
      if (done) break;
    } else {
      lm *= 10.0;
      if (lm > 1e12) break;
    }
  }

  CurveFit fit;
  fit.a = th[0];
  fit.b = th[1];
  fit.alpha = th[2];
  fit.beta = th[3];
  if (fit.a < 0.0) {  // normalize the sign/phase ambiguity
    fit.a = -fit.a;
    fit.b += M_PI;
  }
  fit.b = std::remainder(fit.b, 2.0 * M_PI);
  fit.rms_relative = std::sqrt(cost / m);
  return fit;
}

AprioriBox apriori_box(const Solution& sol) {
  AprioriBox box;
  box.rho = sol.field.sup_norm();
  box.eta1 = std::abs(sol.params.zeta) + 4.0 * box.rho * box.rho;
  return box;
}

bool apriori_box_check(const AprioriBox& box, const Params& p,
                       const std::vector<BlochSlice>& slices) {
  for (const BlochSlice& s : slices)
    for (const Complex& ev : s.eigenvalues)
      if (ev.real() >= -0.5 * p.epsilon && std::abs(ev.real()) >= box.eta1)
        return false;
  return true;
}

double essential_line_check(const Params& p, const std::vector<double>& k_grid,
                            bool* out_of_regime) {
  const Equilibrium eq = equilibrium_state_only(p);
  const double u1 = eq.u_inf[0], u2 = eq.u_inf[1];
  const double m11 = 3.0 * u1 * u1 + u2 * u2;
  const double m12 = 2.0 * u1 * u2;
  const double m22 = u1 * u1 + 3.0 * u2 * u2;
  if (out_of_regime) *out_of_regime = false;
  double worst = 0.0;
  for (double k : k_grid) {
    const double s11 = k * k + p.zeta - m11;
    const double s12 = -m12;
    const double s22 = k * k + p.zeta - m22;
    const double det = s11 * s22 - s12 * s12;
    if (det <= 0.0 && out_of_regime) *out_of_regime = true;
    // symbol J S - eps: eigenvalues -eps +- sqrt(-det S)
    const Eigen::Matrix2d a{{s12 - p.epsilon, s22}, {-s11, -s12 - p.epsilon}};
    const Eigen::EigenSolver<Eigen::Matrix2d> es(a);
    for (int i = 0; i < 2; ++i)
      worst = std::max(worst, std::abs(es.eigenvalues()[i].real() + p.epsilon));
  }
  return worst;
}

}  // namespace cf
