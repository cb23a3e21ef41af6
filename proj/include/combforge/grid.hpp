#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "combforge/errors.hpp"

namespace cf {

using Eigen::ArrayXd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

// Periodic collocation grid x_j = -L/2 + j L/n, j = 0..n-1, with n even.
// Wavenumbers follow the usual FFT layout, k_j = 2*pi*j/L for j < n/2 and
// k_j = 2*pi*(j-n)/L otherwise.
struct Grid {
  double period = 0.0;
  int n = 0;

  Grid() = default;
  Grid(double period_, int n_) : period(period_), n(n_) {
    if (!(period > 0.0)) throw ConfigError("Grid: period must be > 0", "period");
    if (n < 16 || n % 2 != 0) throw ConfigError("Grid: n must be even and >= 16", "n");
  }

  double spacing() const { return period / n; }
  double x(int j) const { return -0.5 * period + j * period / n; }
  double wavenumber(int j) const {
    int m = (j < n / 2) ? j : j - n;
    return 2.0 * M_PI * m / period;
  }
  std::vector<double> points() const {
    std::vector<double> xs(n);
    for (int j = 0; j < n; ++j) xs[j] = x(j);
    return xs;
  }
  bool operator==(const Grid& o) const { return period == o.period && n == o.n; }
};

// Real two-component field u = (Re u, Im u)^T sampled on a Grid.
struct Field2 {
  Grid grid;
  ArrayXd u1, u2;

  Field2() = default;
  explicit Field2(const Grid& g) : grid(g), u1(ArrayXd::Zero(g.n)), u2(ArrayXd::Zero(g.n)) {}

  VectorXcd complexified() const {
    VectorXcd c(grid.n);
    for (int j = 0; j < grid.n; ++j) c[j] = Complex(u1[j], u2[j]);
    return c;
  }
  static Field2 from_complex(const Grid& g, const VectorXcd& c) {
    Field2 f(g);
    for (int j = 0; j < g.n; ++j) {
      f.u1[j] = c[j].real();
      f.u2[j] = c[j].imag();
    }
    return f;
  }

  // sup norm of the pointwise Euclidean magnitude |u(x)|
  double sup_norm() const { return std::sqrt((u1 * u1 + u2 * u2).maxCoeff()); }
  // L2 norm with trapezoidal (= midpoint, periodic) quadrature weight L/n
  double l2_norm() const {
    return std::sqrt(((u1 * u1 + u2 * u2).sum()) * grid.spacing());
  }

  Field2 operator+(const Field2& o) const {
    Field2 r(grid);
    r.u1 = u1 + o.u1;
    r.u2 = u2 + o.u2;
    return r;
  }
  Field2 operator-(const Field2& o) const {
    Field2 r(grid);
    r.u1 = u1 - o.u1;
    r.u2 = u2 - o.u2;
    return r;
  }
  Field2 operator*(double s) const {
    Field2 r(grid);
    r.u1 = s * u1;
    r.u2 = s * u2;
    return r;
  }
};

// Fourier comb: log|u_hat(k)| against the wavenumber, sorted ascending in k.
struct Comb {
  std::vector<double> wavenumbers;
  std::vector<double> log_magnitude;
};

// Unnormalized DFT of a complex sequence; sign = -1 forward, +1 inverse
// (the inverse carries the 1/n factor so ifft(fft(u)) == u).
VectorXcd fft(const VectorXcd& in, int sign);

// Spectral derivative, exact for trigonometric polynomials below Nyquist.
// order must be 1 or 2; the Nyquist mode is zeroed for order 1.
Field2 derivative(const Field2& field, int order);

// (field(x) + field(-x)) / 2 on grid points; idempotent.
Field2 even_project(const Field2& field);

// DFT of u1 + i u2 scaled by L/n, magnitudes floored at 1e-16 * max.
Comb comb(const Field2& field);

// Dense n x n spectral differentiation matrix (real), same convention as
// derivative().
MatrixXd derivative_matrix(const Grid& g, int order);

// Dense matrix of -(d/dx + i*shift)^2, i.e. Fourier multiplier (k+shift)^2.
MatrixXcd shifted_laplacian_matrix(const Grid& g, double shift);

}  // namespace cf
