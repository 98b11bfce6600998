#include "spinrl/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinrl {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix pauli(char axis) {
  Matrix m(2, 2);
  switch (axis) {
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << 0, -kI, kI, 0;
      break;
    case 'z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument(std::string("pauli: unknown axis '") + axis + "'");
  }
  return m;
}

Matrix pauli_plus() { return 0.5 * (pauli('x') + kI * pauli('y')); }
Matrix pauli_minus() { return 0.5 * (pauli('x') - kI * pauli('y')); }

Matrix kron(const Matrix& a, const Matrix& b) {
  const auto an = a.rows(), am = a.cols(), bn = b.rows(), bm = b.cols();
  Matrix out(an * bn, am * bm);
  for (Eigen::Index i = 0; i < an; ++i)
    for (Eigen::Index j = 0; j < am; ++j)
      out.block(i * bn, j * bm, bn, bm) = a(i, j) * b;
  return out;
}

double hermiticity_residual(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const Matrix& u) {
  return (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

void require_hermitian(const Matrix& m, const char* what, double tol) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  if (hermiticity_residual(m) > tol)
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
}

Vector fix_phase(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-8) {
      v *= std::conj(v(i)) / mag;
      break;
    }
  }
  return v;
}

EigResult eig_hermitian(const Matrix& h) {
  require_hermitian(h, "eig_hermitian");
  // Symmetrize to remove rounding-level asymmetry before the solve.
  const Matrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hs);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  EigResult out;
  out.values = solver.eigenvalues();  // ascending by Eigen's contract
  out.vectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k)
    out.vectors.col(k) = fix_phase(out.vectors.col(k));
  return out;
}

double min_eigen_gap(const RealVector& ascending) {
  if (ascending.size() < 2) return std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < ascending.size(); ++i)
    gap = std::min(gap, ascending(i) - ascending(i - 1));
  return gap;
}

Matrix propagator(const Matrix& h, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("propagator: dt must be positive");
  const EigResult eig = eig_hermitian(h);
  const auto dim = h.rows();
  Vector phases(dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    phases(k) = std::exp(-kI * eig.values(k) * dt);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace spinrl
