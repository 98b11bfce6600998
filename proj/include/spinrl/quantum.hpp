#pragma once

#include <variant>
#include <vector>

#include "spinrl/linalg.hpp"
#include "spinrl/rng.hpp"

namespace spinrl {

// Piecewise-constant control amplitudes on n_steps uniform intervals of
// [0, tau]. The control acts on the open intervals [t_i, t_{i+1}); at the
// closed endpoints t=0 and t=tau it is treated as zero, so energy
// bookkeeping at the endpoints uses the bare system Hamiltonian alone.
struct ControlSchedule {
  double tau = 1.0;
  int n_steps = 0;
  std::vector<double> values;

  double dt() const { return tau / n_steps; }
  static ControlSchedule zeros(double tau, int n_steps);
};

void validate(const ControlSchedule& schedule);

// A density matrix (trace-1 Hermitian) or a normalized pure-state vector.
// Default-constructed instances are empty placeholders (dim() == 0).
class QuantumState {
 public:
  QuantumState() = default;
  static QuantumState density(Matrix rho);
  static QuantumState pure(Vector psi);

  bool is_density() const { return std::holds_alternative<Matrix>(value_); }
  bool is_pure() const { return !is_density(); }

  const Matrix& rho() const;
  const Vector& psi() const;
  // |psi><psi| for pure states, the stored matrix otherwise.
  Matrix as_density() const;
  int dim() const;

 private:
  explicit QuantumState(Matrix rho) : value_(std::move(rho)) {}
  explicit QuantumState(Vector psi) : value_(std::move(psi)) {}
  std::variant<Matrix, Vector> value_;
};

// rho -> U rho U^dagger, psi -> U psi.
QuantumState apply_unitary(const Matrix& u, const QuantumState& state);

// Evolves the state under one Hermitian Hamiltonian per interval of width
// dt, and returns the states at every grid point t_0..t_N (N+1 entries,
// the first being the initial state).
std::vector<QuantumState> evolve(const QuantumState& initial,
                                 const std::vector<Matrix>& hamiltonians,
                                 double dt);

// Thermal state exp(-beta h) / Z, computed spectrally. beta must be
// positive; the infinite-temperature limit I/dim is only available through
// the explicit flag.
QuantumState gibbs_state(const Matrix& h, double beta,
                         bool zero_beta_limit = false);

struct MeasurementOutcome {
  double eigenvalue = 0;
  Vector collapsed;  // phase-fixed eigenvector
  int index = 0;     // ascending spectral index
};

// Projective energy measurement on a density matrix. Requires a
// non-degenerate spectrum (gap > 1e-9); outcome k is drawn with the Born
// probability <v_k| rho |v_k>.
MeasurementOutcome measure_energy(const Matrix& rho, const Matrix& h, Rng& rng);

// |<a|b>|^2 for normalized pure states of equal dimension.
double fidelity(const Vector& a, const Vector& b);

// Eigenvector of h_final with the given ascending spectral index; this is
// the end point of an infinitely slow protocol started in the eigenstate
// of the initial Hamiltonian with the same index.
Vector adiabatic_target(const Matrix& h_final, int index);

}  // namespace spinrl
