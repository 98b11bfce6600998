#include "spinrl/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinrl {

ControlSchedule ControlSchedule::zeros(double tau, int n_steps) {
  ControlSchedule s;
  s.tau = tau;
  s.n_steps = n_steps;
  s.values.assign(static_cast<std::size_t>(n_steps), 0.0);
  validate(s);
  return s;
}

void validate(const ControlSchedule& schedule) {
  if (!(schedule.tau > 0))
    throw std::invalid_argument("ControlSchedule: tau must be positive");
  if (schedule.n_steps < 1)
    throw std::invalid_argument("ControlSchedule: n_steps must be >= 1");
  if (schedule.values.size() != static_cast<std::size_t>(schedule.n_steps))
    throw std::invalid_argument(
        "ControlSchedule: values length does not match n_steps");
}

QuantumState QuantumState::density(Matrix rho) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("QuantumState::density: matrix is not square");
  if (hermiticity_residual(rho) > 1e-8)
    throw std::invalid_argument("QuantumState::density: matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 ||
      std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument("QuantumState::density: trace is not 1");
  return QuantumState(std::move(rho));
}

QuantumState QuantumState::pure(Vector psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("QuantumState::pure: vector is not normalized");
  return QuantumState(std::move(psi));
}

const Matrix& QuantumState::rho() const {
  if (!is_density())
    throw std::logic_error("QuantumState: not a density matrix");
  return std::get<Matrix>(value_);
}

const Vector& QuantumState::psi() const {
  if (!is_pure()) throw std::logic_error("QuantumState: not a pure vector");
  return std::get<Vector>(value_);
}

Matrix QuantumState::as_density() const {
  if (is_density()) return rho();
  const Vector& v = psi();
  return v * v.adjoint();
}

int QuantumState::dim() const {
  return is_density() ? static_cast<int>(rho().rows())
                      : static_cast<int>(psi().size());
}

QuantumState apply_unitary(const Matrix& u, const QuantumState& state) {
  if (u.cols() != state.dim())
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  if (state.is_density()) {
    Matrix next = u * state.rho() * u.adjoint();
    // Keep exact Hermiticity against rounding drift over many steps.
    next = 0.5 * (next + Matrix(next.adjoint()));
    return QuantumState::density(std::move(next));
  }
  return QuantumState::pure(u * state.psi());
}

std::vector<QuantumState> evolve(const QuantumState& initial,
                                 const std::vector<Matrix>& hamiltonians,
                                 double dt) {
  if (hamiltonians.empty())
    throw std::invalid_argument("evolve: no intervals to evolve over");
  std::vector<QuantumState> states;
  states.reserve(hamiltonians.size() + 1);
  states.push_back(initial);
  for (const Matrix& h : hamiltonians) {
    if (h.rows() != initial.dim())
      throw std::invalid_argument("evolve: Hamiltonian dimension mismatch");
    states.push_back(apply_unitary(propagator(h, dt), states.back()));
  }
  return states;
}

QuantumState gibbs_state(const Matrix& h, double beta, bool zero_beta_limit) {
  require_hermitian(h, "gibbs_state");
  if (zero_beta_limit && beta == 0.0) {
    const int dim = static_cast<int>(h.rows());
    return QuantumState::density(Matrix::Identity(dim, dim) / double(dim));
  }
  if (!(beta > 0))
    throw std::invalid_argument("gibbs_state: beta must be positive");
  const EigResult eig = eig_hermitian(h);
  // Shift by the ground energy before exponentiating to avoid overflow.
  const double e_min = eig.values.minCoeff();
  RealVector weights(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k)
    weights(k) = std::exp(-beta * (eig.values(k) - e_min));
  weights /= weights.sum();
  Matrix rho = eig.vectors * weights.cast<Complex>().asDiagonal() *
               eig.vectors.adjoint();
  rho = 0.5 * (rho + Matrix(rho.adjoint()));
  return QuantumState::density(std::move(rho));
}

MeasurementOutcome measure_energy(const Matrix& rho, const Matrix& h, Rng& rng) {
  require_hermitian(h, "measure_energy");
  if (rho.rows() != h.rows())
    throw std::invalid_argument("measure_energy: dimension mismatch");
  const EigResult eig = eig_hermitian(h);
  if (min_eigen_gap(eig.values) <= 1e-9)
    throw std::invalid_argument("measure_energy: spectrum is degenerate");

  const auto dim = h.rows();
  std::vector<double> probs(static_cast<std::size_t>(dim));
  double total = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Vector v = eig.vectors.col(k);
    probs[static_cast<std::size_t>(k)] = (v.adjoint() * rho * v)(0, 0).real();
    total += probs[static_cast<std::size_t>(k)];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::runtime_error("measure_energy: Born probabilities do not sum to 1");

  MeasurementOutcome out;
  out.index = rng.categorical(probs);
  out.eigenvalue = eig.values(out.index);
  out.collapsed = eig.vectors.col(out.index);
  return out;
}

double fidelity(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("fidelity: dimension mismatch");
  return std::norm(Complex((a.adjoint() * b)(0, 0)));
}

Vector adiabatic_target(const Matrix& h_final, int index) {
  const EigResult eig = eig_hermitian(h_final);
  if (min_eigen_gap(eig.values) <= 1e-9)
    throw std::invalid_argument("adiabatic_target: spectrum is degenerate");
  if (index < 0 || index >= eig.values.size())
    throw std::invalid_argument("adiabatic_target: index out of range");
  return eig.vectors.col(index);
}

}  // namespace spinrl
