#include "combforge/grid.hpp"

#include <fftw3.h>

#include <mutex>

namespace cf {

namespace {
// FFTW's planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

VectorXcd fft(const VectorXcd& in, int sign) {
  const int n = static_cast<int>(in.size());
  VectorXcd out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()),
        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  if (sign > 0) out /= static_cast<double>(n);
  return out;
}

namespace {

// Apply a Fourier multiplier to the complexified field components separately
// (u1 and u2 are real; the multiplier may produce complex intermediates whose
// real part is taken component-wise).
Field2 apply_multiplier(const Field2& field, const VectorXcd& mult) {
  const Grid& g = field.grid;
  Field2 out(g);
  for (int comp = 0; comp < 2; ++comp) {
    const ArrayXd& src = comp == 0 ? field.u1 : field.u2;
    VectorXcd c(g.n);
    for (int j = 0; j < g.n; ++j) c[j] = src[j];
    VectorXcd ch = fft(c, -1);
    for (int j = 0; j < g.n; ++j) ch[j] *= mult[j];
    VectorXcd back = fft(ch, +1);
    ArrayXd& dst = comp == 0 ? out.u1 : out.u2;
    for (int j = 0; j < g.n; ++j) dst[j] = back[j].real();
  }
  return out;
}

VectorXcd derivative_multiplier(const Grid& g, int order) {
  if (order != 1 && order != 2)
    throw UnsupportedOrder("derivative: order must be 1 or 2");
  VectorXcd mult(g.n);
  for (int j = 0; j < g.n; ++j) {
    const Complex ik(0.0, g.wavenumber(j));
    mult[j] = order == 1 ? ik : ik * ik;
  }
  if (order == 1) mult[g.n / 2] = 0.0;  // Nyquist convention for odd orders
  return mult;
}

// Circulant matrix realizing a Fourier multiplier: A_{jl} = c_{(j-l) mod n}
// with c the inverse DFT of the multiplier.
MatrixXcd circulant_from_multiplier(const Grid& g, const VectorXcd& mult) {
  const VectorXcd c = fft(mult, +1);
  MatrixXcd a(g.n, g.n);
  for (int j = 0; j < g.n; ++j)
    for (int l = 0; l < g.n; ++l) a(j, l) = c[((j - l) % g.n + g.n) % g.n];
  return a;
}

}  // namespace

Field2 derivative(const Field2& field, int order) {
  return apply_multiplier(field, derivative_multiplier(field.grid, order));
}

Field2 even_project(const Field2& field) {
  const Grid& g = field.grid;
  Field2 out(g);
  for (int j = 0; j < g.n; ++j) {
    const int jr = (g.n - j) % g.n;  // grid index of -x_j
    out.u1[j] = 0.5 * (field.u1[j] + field.u1[jr]);
    out.u2[j] = 0.5 * (field.u2[j] + field.u2[jr]);
  }
  return out;
}

Comb comb(const Field2& field) {
  const Grid& g = field.grid;
  const VectorXcd ch = fft(field.complexified(), -1) * g.spacing();
  std::vector<std::pair<double, double>> lines(g.n);
  double maxmag = 0.0;
  for (int j = 0; j < g.n; ++j) maxmag = std::max(maxmag, std::abs(ch[j]));
  const double floor_mag = 1e-16 * maxmag;
  for (int j = 0; j < g.n; ++j) {
    const double mag = std::max(std::abs(ch[j]), floor_mag);
    lines[j] = {g.wavenumber(j), std::log(mag)};
  }
  std::sort(lines.begin(), lines.end());
  Comb out;
  out.wavenumbers.reserve(g.n);
  out.log_magnitude.reserve(g.n);
  for (auto& [k, lm] : lines) {
    out.wavenumbers.push_back(k);
    out.log_magnitude.push_back(lm);
  }
  return out;
}

MatrixXd derivative_matrix(const Grid& g, int order) {
  return circulant_from_multiplier(g, derivative_multiplier(g, order)).real();
}

MatrixXcd shifted_laplacian_matrix(const Grid& g, double shift) {
  VectorXcd mult(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double ks = g.wavenumber(j) + shift;
    mult[j] = ks * ks;
  }
  // symmetrize the unpaired Nyquist mode so the spectrum of the matrix is
  // exactly conjugated under shift -> -shift
  const double knyq = g.wavenumber(g.n / 2);
  mult[g.n / 2] = knyq * knyq + shift * shift;
  return circulant_from_multiplier(g, mult);
}

}  // namespace cf
