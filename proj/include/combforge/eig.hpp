#pragma once

#include <complex>
#include <vector>

#include "combforge/grid.hpp"

namespace cf {

// Eigenvalues of a dense real matrix (LAPACK dgeev).
std::vector<std::complex<double>> eigenvalues(const MatrixXd& a);

// Eigenvalues of a dense complex matrix (LAPACK zgeev).
std::vector<std::complex<double>> eigenvalues(const MatrixXcd& a);

// Eigenvalues and right eigenvectors of a dense real matrix.
void eigensystem(const MatrixXd& a, std::vector<std::complex<double>>& values,
                 MatrixXcd& vectors);

// Solve a x = b for dense real a (LAPACK dgesv). Throws SingularJacobian on
// an exactly singular factorization.
VectorXd solve_linear(const MatrixXd& a, const VectorXd& b);

// Singular values, descending (LAPACK dgesdd).
VectorXd singular_values(const MatrixXd& a);

}  // namespace cf
