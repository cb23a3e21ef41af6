#include "combforge/evolve.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace cf {

Evolver::Evolver(const Grid& grid, const Params& p, double dt)
    : grid_(grid), dt_(dt) {
  if (!(dt > 0.0)) throw ConfigError("Evolver: dt must be > 0", "dt");
  const int n = grid.n;
  half_linear_phase_.resize(n);
  half_linear_force_ = VectorXcd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double k = grid.wavenumber(j);
    const Complex mu(-p.epsilon, -(k * k + p.zeta));
    const Complex ph = std::exp(mu * (0.5 * dt));
    half_linear_phase_[j] = ph;
    if (j == 0) {
      const Complex drive = p.epsilon * p.f * double(n);
      half_linear_force_[0] =
          (std::abs(mu) > 0.0) ? (ph - 1.0) / mu * drive : 0.5 * dt * drive;
    }
  }
}

void Evolver::advance(VectorXcd& u) const {
  VectorXcd uh = fft(u, -1);
  uh = uh.cwiseProduct(half_linear_phase_) + half_linear_force_;
  u = fft(uh, +1);
  for (int j = 0; j < grid_.n; ++j) {
    const double m2 = std::norm(u[j]);
    u[j] *= Complex(std::cos(m2 * dt_), std::sin(m2 * dt_));
  }
  uh = fft(u, -1);
  uh = uh.cwiseProduct(half_linear_phase_) + half_linear_force_;
  u = fft(uh, +1);
}

Field2 step(const Field2& field, const Params& p, double dt) {
  const Evolver ev(field.grid, p, dt);
  VectorXcd u = field.complexified();
  ev.advance(u);
  return Field2::from_complex(field.grid, u);
}

namespace {

Field2 tile(const Field2& f, int copies) {
  const Grid g2(f.grid.period * copies, f.grid.n * copies);
  Field2 out(g2);
  for (int c = 0; c < copies; ++c)
    for (int j = 0; j < f.grid.n; ++j) {
      out.u1[c * f.grid.n + j] = f.u1[j];
      out.u2[c * f.grid.n + j] = f.u2[j];
    }
  return out;
}

struct ShiftMatcher {
  const Grid* grid;
  double base_period;
  VectorXcd ref_hat;
  double ref_energy;  // sum |r_hat|^2 / n

  // squared physical L2 distance to the reference shifted by gamma
  double cross(const VectorXcd& p_k, double gamma) const {
    double c = 0.0;
    for (int j = 0; j < grid->n; ++j) {
      if (p_k[j] == Complex(0.0, 0.0)) continue;
      const double k = grid->wavenumber(j);
      c += (p_k[j] * std::exp(Complex(0.0, -k * gamma))).real();
    }
    return c;
  }

  void best_shift(const VectorXcd& u_hat, double resolution, double& gamma,
                  double& dist) const {
    const int n = grid->n;
    VectorXcd p_k(n);
    double u_energy = 0.0;
    for (int j = 0; j < n; ++j) {
      p_k[j] = u_hat[j] * std::conj(ref_hat[j]);
      u_energy += std::norm(u_hat[j]);
    }
    u_energy /= n;

    // coarse scan over one base period, then golden-section refinement
    const int coarse = 64;
    double g0 = 0.0, c0 = -1e300;
    for (int i = 0; i < coarse; ++i) {
      const double g = base_period * i / coarse;
      const double c = cross(p_k, g);
      if (c > c0) {
        c0 = c;
        g0 = g;
      }
    }
    double lo = g0 - base_period / coarse, hi = g0 + base_period / coarse;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = cross(p_k, x1), f2 = cross(p_k, x2);
    while (hi - lo > resolution) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = cross(p_k, x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = cross(p_k, x1);
      }
    }
    gamma = std::remainder(0.5 * (lo + hi), base_period);
    const double cbest = std::max(cross(p_k, 0.5 * (lo + hi)), c0);
    const double d2 = grid->spacing() * (u_energy + ref_energy - 2.0 * cbest / n);
    dist = std::sqrt(std::max(0.0, d2));
  }
};

EvolutionTrace evolve_core(
    const Solution& sol, const Field2& perturbation, int copies, double t_end,
    const EvolveOpts& opts,
    const std::function<void(double, const VectorXcd&, const VectorXcd&)>& on_sample) {
  if (copies < 1) throw ConfigError("evolve: copies must be >= 1", "copies");
  const Field2 ref = tile(sol.field, copies);
  if (!(perturbation.grid == ref.grid))
    throw ConfigError("evolve: perturbation grid does not match the tiled domain", "perturbation");

  const Evolver ev(ref.grid, sol.params, opts.dt);
  VectorXcd u = (ref + perturbation).complexified();
  const VectorXcd ref_c = ref.complexified();
  const VectorXcd ref_hat = fft(ref_c, -1);

  ShiftMatcher matcher;
  matcher.grid = &ref.grid;
  matcher.base_period = sol.field.grid.period;
  matcher.ref_hat = ref_hat;
  matcher.ref_energy = ref_hat.squaredNorm() / ref.grid.n;

  const double sup_ref = std::max(sol.field.sup_norm(), 1e-12);
  const int steps_per_sample =
      std::max(1, static_cast<int>(std::lround(opts.sample_interval / opts.dt)));
  const double sample_dt = steps_per_sample * opts.dt;
  const int n_samples = static_cast<int>(std::floor(t_end / sample_dt + 1e-9));

  EvolutionTrace trace;
  auto record = [&](double t) {
    const VectorXcd diff = u - ref_c;
    const double raw = std::sqrt(ref.grid.spacing() * diff.squaredNorm());
    double gamma, mod;
    matcher.best_shift(fft(u, -1), opts.gamma_resolution * matcher.base_period, gamma,
                       mod);
    trace.times.push_back(t);
    trace.raw_l2.push_back(raw);
    trace.perturbation_l2.push_back(std::min(mod, raw));
    trace.gamma.push_back(gamma);
    if (on_sample) on_sample(t, u, ref_c);
  };

  record(0.0);
  for (int s = 1; s <= n_samples; ++s) {
    for (int k = 0; k < steps_per_sample; ++k) ev.advance(u);
    double sup = 0.0;
    for (int j = 0; j < ref.grid.n; ++j) sup = std::max(sup, std::abs(u[j]));
    if (!std::isfinite(sup) || sup > opts.blowup_factor * sup_ref)
      throw Blowup("evolve: sup norm exceeded " + std::to_string(opts.blowup_factor) +
                   " * max|u_ref|");
    record(s * sample_dt);
  }
  return trace;
}

double fit_log_slope(const std::vector<double>& t, const std::vector<double>& y,
                     double t_min) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min) continue;
    const double x = std::log1p(t[i]);
    const double v = std::log(std::max(y[i], 1e-300));
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++m;
  }
  if (m < 2) return std::nan("");
  const double det = m * sxx - sx * sx;
  return (m * sxy - sx * sy) / det;
}

}  // namespace

EvolutionTrace evolve_perturbed(const Solution& sol, const Field2& perturbation,
                                int copies, double t_end, const EvolveOpts& opts) {
  return evolve_core(sol, perturbation, copies, t_end, opts, nullptr);
}

Field2 random_perturbation(const Grid& grid, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Field2 f(grid);
  for (int j = 0; j < grid.n; ++j) {
    f.u1[j] = uni(rng);
    f.u2[j] = uni(rng);
  }
  // band-limit to the lowest quarter of the modes for smoothness
  VectorXcd h = fft(f.complexified(), -1);
  const double kmax = 0.25 * M_PI * grid.n / grid.period;
  for (int j = 0; j < grid.n; ++j)
    if (std::abs(grid.wavenumber(j)) > kmax) h[j] = 0.0;
  f = Field2::from_complex(grid, fft(h, +1));
  const double sup = f.sup_norm();
  if (sup > 0.0) {
    f.u1 *= amplitude / sup;
    f.u2 *= amplitude / sup;
  }
  return f;
}

DiffusiveResult diffusive_experiment(const Solution& sol, int copies, std::uint64_t seed,
                                     double t_end, const DiffusiveOpts& opts) {
  const Grid big(sol.field.grid.period * copies, sol.field.grid.n * copies);
  Field2 pert = random_perturbation(big, opts.perturbation_size, seed);
  // localize to the central period with a smooth bump window
  const double base = sol.field.grid.period;
  for (int j = 0; j < big.n; ++j) {
    const double x = big.x(j);
    const double w = (std::abs(x) < 0.5 * base)
                         ? std::pow(std::cos(M_PI * x / base), 2)
                         : 0.0;
    pert.u1[j] *= w;
    pert.u2[j] *= w;
  }
  const double sup = pert.sup_norm();
  DiffusiveResult res;
  if (sup == 0.0) {
    res.degenerate = true;
    res.fitted_exponent_raw = std::nan("");
    res.fitted_exponent_mod = std::nan("");
    res.trace = evolve_core(sol, pert, copies, t_end, opts.evolve, nullptr);
    return res;
  }
  pert.u1 *= opts.perturbation_size / sup;
  pert.u2 *= opts.perturbation_size / sup;

  // guard: the perturbation must not pile up at the domain boundary
  const double edge = 0.5 * big.period - 0.5 * base;
  auto tail_guard = [&](double, const VectorXcd& u, const VectorXcd& ref) {
    double tail = 0.0, total = 0.0;
    for (int j = 0; j < big.n; ++j) {
      const double m2 = std::norm(u[j] - ref[j]);
      total += m2;
      if (std::abs(big.x(j)) > edge) tail += m2;
    }
    if (total > 0.0 && tail / total > opts.tail_threshold)
      throw DomainTooSmall("diffusive_experiment: perturbation mass reached the domain boundary");
  };

  res.trace = evolve_core(sol, pert, copies, t_end, opts.evolve, tail_guard);
  const double t_min = opts.fit_fraction * t_end;
  res.fitted_exponent_raw = fit_log_slope(res.trace.times, res.trace.raw_l2, t_min);
  res.fitted_exponent_mod =
      fit_log_slope(res.trace.times, res.trace.perturbation_l2, t_min);
  return res;
}

}  // namespace cf
