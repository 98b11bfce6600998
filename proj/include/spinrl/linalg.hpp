#pragma once

#include <Eigen/Dense>
#include <complex>

namespace spinrl {

// Working dimensions are 2 and 4; everything is dense, double precision,
// hbar = 1 throughout.
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

Matrix identity(int dim);

// 2x2 Pauli matrix for axis 'x', 'y' or 'z'.
Matrix pauli(char axis);
// sigma_+/- = (sigma_x +/- i sigma_y) / 2.
Matrix pauli_plus();
Matrix pauli_minus();

// Kronecker product with `a` as the left factor:
// kron(a,b)[i*bn + k][j*bm + l] = a[i][j] * b[k][l].
Matrix kron(const Matrix& a, const Matrix& b);

// max_ij |m - m^dagger|.
double hermiticity_residual(const Matrix& m);
// max_ij |u u^dagger - I|.
double unitarity_residual(const Matrix& u);

bool is_hermitian(const Matrix& m, double tol = 1e-10);
// Throws std::invalid_argument naming `what` if m is not square Hermitian.
void require_hermitian(const Matrix& m, const char* what, double tol = 1e-9);

struct EigResult {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns, one per eigenvalue
};

// Hermitian eigendecomposition with a deterministic phase convention: in
// each eigenvector, the first component with magnitude > 1e-8 is made real
// and non-negative.
EigResult eig_hermitian(const Matrix& h);

// Smallest gap between consecutive ascending eigenvalues.
double min_eigen_gap(const RealVector& ascending);

// Applies the phase convention above to a single vector.
Vector fix_phase(Vector v);

// U = exp(-i h dt), exact through the eigendecomposition of Hermitian h.
Matrix propagator(const Matrix& h, double dt);

}  // namespace spinrl
