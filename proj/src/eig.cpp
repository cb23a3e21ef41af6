#include "combforge/eig.hpp"

#include <lapacke.h>

#include "combforge/errors.hpp"

namespace cf {

std::vector<std::complex<double>> eigenvalues(const MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  MatrixXd work = a;
  std::vector<double> wr(n), wi(n);
  const int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n,
                                 wr.data(), wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("dgeev failed, info = " + std::to_string(info));
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  return out;
}

std::vector<std::complex<double>> eigenvalues(const MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  MatrixXcd work = a;
  std::vector<std::complex<double>> w(n);
  const int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("zgeev failed, info = " + std::to_string(info));
  return w;
}

void eigensystem(const MatrixXd& a, std::vector<std::complex<double>>& values,
                 MatrixXcd& vectors) {
  const int n = static_cast<int>(a.rows());
  MatrixXd work = a;
  std::vector<double> wr(n), wi(n);
  MatrixXd vr(n, n);
  const int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n,
                                 wr.data(), wi.data(), nullptr, 1, vr.data(), n);
  if (info != 0) throw NumericalError("dgeev failed, info = " + std::to_string(info));
  values.resize(n);
  vectors.resize(n, n);
  for (int i = 0; i < n; ++i) values[i] = {wr[i], wi[i]};
  // dgeev packs complex-conjugate eigenvector pairs into adjacent real columns
  for (int j = 0; j < n;) {
    if (wi[j] == 0.0) {
      vectors.col(j) = vr.col(j).cast<std::complex<double>>();
      ++j;
    } else {
      for (int i = 0; i < n; ++i) {
        vectors(i, j) = {vr(i, j), vr(i, j + 1)};
        vectors(i, j + 1) = {vr(i, j), -vr(i, j + 1)};
      }
      j += 2;
    }
  }
}

VectorXd solve_linear(const MatrixXd& a, const VectorXd& b) {
  const int n = static_cast<int>(a.rows());
  MatrixXd lu = a;
  VectorXd x = b;
  std::vector<lapack_int> ipiv(n);
  const int info =
      LAPACKE_dgesv(LAPACK_COL_MAJOR, n, 1, lu.data(), n, ipiv.data(), x.data(), n);
  if (info > 0) throw SingularJacobian("dgesv: singular factor U(" + std::to_string(info) + ")");
  if (info < 0) throw NumericalError("dgesv failed, info = " + std::to_string(info));
  return x;
}

VectorXd singular_values(const MatrixXd& a) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  MatrixXd work = a;
  VectorXd s(std::min(m, n));
  const int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m,
                                  s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("dgesdd failed, info = " + std::to_string(info));
  return s;
}

}  // namespace cf
