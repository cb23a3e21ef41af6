#include "combforge/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "combforge/eig.hpp"

namespace cf {

Field2 residual(const Field2& field, const Params& p) {
  const Field2 uxx = derivative(field, 2);
  const ArrayXd mag2 = field.u1 * field.u1 + field.u2 * field.u2;
  const ArrayXd w1 = -uxx.u1 + p.zeta * field.u1 - mag2 * field.u1;
  const ArrayXd w2 = -uxx.u2 + p.zeta * field.u2 - mag2 * field.u2;
  Field2 r(field.grid);
  r.u1 = w2 + p.epsilon * (-field.u1 + p.f);
  r.u2 = -w1 + p.epsilon * (-field.u2);
  return r;
}

MatrixXd jacobian(const Field2& field, const Params& p) {
  const int n = field.grid.n;
  const MatrixXd d2 = derivative_matrix(field.grid, 2);
  const ArrayXd m11 = 3.0 * field.u1 * field.u1 + field.u2 * field.u2;
  const ArrayXd m12 = 2.0 * field.u1 * field.u2;
  const ArrayXd m22 = field.u1 * field.u1 + 3.0 * field.u2 * field.u2;

  MatrixXd l11 = -d2;
  l11.diagonal().array() += p.zeta;
  l11.diagonal() -= m11.matrix();
  MatrixXd l22 = -d2;
  l22.diagonal().array() += p.zeta;
  l22.diagonal() -= m22.matrix();

  MatrixXd a(2 * n, 2 * n);
  // J L: top block row = (L21, L22), bottom = (-L11, -L12)
  a.topLeftCorner(n, n) = (-m12).matrix().asDiagonal();
  a.topRightCorner(n, n) = l22;
  a.bottomLeftCorner(n, n) = -l11;
  a.bottomRightCorner(n, n) = m12.matrix().asDiagonal();
  a.diagonal().array() -= p.epsilon;
  return a;
}

namespace {

// Even subspace of the symmetric grid: representatives j = 0..n/2 per
// component; interior representatives stand for the pair (j, n-j).
struct EvenReduction {
  int n = 0;
  int dim() const { return n + 2; }
  int rep_count() const { return n / 2 + 1; }

  VectorXd restrict_vec(const Field2& f) const {
    VectorXd r(dim());
    for (int k = 0; k <= n / 2; ++k) {
      r[k] = f.u1[k];
      r[rep_count() + k] = f.u2[k];
    }
    return r;
  }

  Field2 expand(const Grid& g, const VectorXd& r) const {
    Field2 f(g);
    for (int k = 0; k <= n / 2; ++k) {
      f.u1[k] = r[k];
      f.u2[k] = r[rep_count() + k];
      if (k != 0 && k != n / 2) {
        f.u1[n - k] = r[k];
        f.u2[n - k] = r[rep_count() + k];
      }
    }
    return f;
  }

  MatrixXd reduce_matrix(const MatrixXd& a) const {
    const int m = dim();
    MatrixXd b(m, m);
    auto full_row = [&](int red) {
      const int comp = red / rep_count();
      const int k = red % rep_count();
      return comp * n + k;
    };
    for (int col = 0; col < m; ++col) {
      const int comp = col / rep_count();
      const int k = col % rep_count();
      const int j1 = comp * n + k;
      VectorXd ac = a.col(j1);
      if (k != 0 && k != n / 2) ac += a.col(comp * n + (n - k));
      for (int row = 0; row < m; ++row) b(row, col) = ac[full_row(row)];
    }
    return b;
  }
};

double even_defect(const Field2& f) {
  const Field2 e = even_project(f);
  return (f - e).sup_norm();
}

}  // namespace

Solution newton_solve(const Field2& guess, const Params& p, const NewtonOpts& opts) {
  Field2 field = opts.restrict_even ? even_project(guess) : guess;
  const EvenReduction red{field.grid.n};

  double resid_norm = residual(field, p).sup_norm();
  int iter = 0;
  for (; iter < opts.max_iter && resid_norm >= opts.tol; ++iter) {
    const Field2 r = residual(field, p);
    const MatrixXd a = jacobian(field, p);
    Field2 dir(field.grid);
    if (opts.restrict_even) {
      const MatrixXd b = red.reduce_matrix(a);
      const VectorXd rhs = -red.restrict_vec(r);
      dir = red.expand(field.grid, solve_linear(b, rhs));
    } else {
      // the translation kernel makes the full system near-singular; fall back
      // to a least-squares step
      const int n = field.grid.n;
      VectorXd rhs(2 * n);
      rhs.head(n) = -r.u1.matrix();
      rhs.tail(n) = -r.u2.matrix();
      VectorXd d = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(a).solve(rhs);
      dir.u1 = d.head(n).array();
      dir.u2 = d.tail(n).array();
    }
    if (!dir.u1.isFinite().all() || !dir.u2.isFinite().all())
      throw SingularJacobian("newton_solve: non-finite step");

    double scale = opts.damping;
    Field2 trial = field + dir * scale;
    double trial_norm = residual(trial, p).sup_norm();
    for (int h = 0; h < 6 && trial_norm > resid_norm; ++h) {
      scale *= 0.5;
      trial = field + dir * scale;
      trial_norm = residual(trial, p).sup_norm();
    }
    field = opts.restrict_even ? even_project(trial) : trial;
    resid_norm = residual(field, p).sup_norm();
  }
  if (resid_norm >= opts.tol)
    throw NoConvergence("newton_solve: no convergence", iter, resid_norm);

  Solution sol;
  sol.field = field;
  sol.params = p;
  sol.residual_norm = residual(field, p).sup_norm();
  sol.is_even = even_defect(field) < 1e-12;
  sol.pulse_centers = detect_pulses(field);
  sol.period = field.grid.period;
  return sol;
}

std::vector<Solution> continue_in(const std::vector<Params>& path, const Field2& guess,
                                  const NewtonOpts& opts) {
  std::vector<Solution> out;
  out.reserve(path.size());
  Field2 seed = guess;
  for (std::size_t i = 0; i < path.size(); ++i) {
    try {
      out.push_back(newton_solve(seed, path[i], opts));
    } catch (const NoConvergence& e) {
      throw NoConvergence("continue_in: step " + std::to_string(i) + " failed: " + e.what(),
                          e.iterations, e.final_residual);
    }
    seed = out.back().field;
  }
  return out;
}

std::vector<double> detect_pulses(const Field2& field) {
  const int n = field.grid.n;
  // background = componentwise median (pulses are localized, so most samples
  // sit on the constant state)
  auto median = [n](ArrayXd v) {
    std::nth_element(v.data(), v.data() + n / 2, v.data() + n);
    return v[n / 2];
  };
  const double bg1 = median(field.u1);
  const double bg2 = median(field.u2);
  ArrayXd mag(n);
  for (int j = 0; j < n; ++j)
    mag[j] = std::hypot(field.u1[j] - bg1, field.u2[j] - bg2);
  const double peak = mag.maxCoeff();
  if (peak < 1e-8 * std::max(1.0, field.sup_norm())) return {};

  std::vector<double> centers;
  const double h = field.grid.spacing();
  for (int j = 0; j < n; ++j) {
    const double m0 = mag[j];
    const double ml = mag[(j - 1 + n) % n];
    const double mr = mag[(j + 1) % n];
    if (m0 > 0.5 * peak && m0 >= ml && m0 > mr) {
      const double denom = ml - 2.0 * m0 + mr;
      const double delta = (denom < 0.0) ? 0.5 * (ml - mr) / denom : 0.0;
      centers.push_back(field.grid.x(j) + delta * h);
    }
  }
  std::sort(centers.begin(), centers.end());
  return centers;
}

}  // namespace cf
