#include "spinrl/spin_models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinrl {

namespace {
constexpr double kPi = std::numbers::pi;

void require_time_in_range(double t, double tau, const char* what) {
  if (t < -1e-12 || t > tau + 1e-12)
    throw std::invalid_argument(std::string(what) + ": t outside [0, tau]");
}
}  // namespace

void validate(const SystemSpec& spec) {
  if (spec.n_steps < 1)
    throw std::invalid_argument("SystemSpec: n_steps must be >= 1");
  if (!(spec.tau > 0)) throw std::invalid_argument("SystemSpec: tau must be positive");
  if (!(spec.beta > 0)) throw std::invalid_argument("SystemSpec: beta must be positive");
  if (spec.kind == SystemKind::SingleSpin) {
    if (!(spec.b0 > 0))
      throw std::invalid_argument("SystemSpec: b0 must be positive");
    if (spec.drive != DriveVariant::A && spec.drive != DriveVariant::B)
      throw std::invalid_argument("SystemSpec: single spin requires drive a or b");
  } else {
    if (spec.drive != DriveVariant::Step && spec.drive != DriveVariant::Smooth)
      throw std::invalid_argument("SystemSpec: two spin requires drive step or smooth");
  }
}

Matrix single_spin_hamiltonian(const SystemSpec& spec, double t) {
  require_time_in_range(t, spec.tau, "single_spin_hamiltonian");
  const double phase = kPi * t / (2.0 * spec.tau);
  double bx = 0.0;
  switch (spec.drive) {
    case DriveVariant::A:
      bx = spec.b0 * std::sin(phase);
      break;
    case DriveVariant::B: {
      const double s = std::sin(phase);
      bx = spec.b0 * std::sin(0.5 * kPi * s * s);
      break;
    }
    default:
      throw std::invalid_argument("single_spin_hamiltonian: not a single-spin drive");
  }
  const double bz = std::sqrt(std::max(0.0, spec.b0 * spec.b0 - bx * bx));
  return 0.5 * (bx * pauli('x') + bz * pauli('z'));
}

Matrix single_spin_control() { return -pauli('y'); }

Matrix two_spin_hamiltonian(const SystemSpec& spec, double t) {
  require_time_in_range(t, spec.tau, "two_spin_hamiltonian");
  double j = 0.0;
  switch (spec.drive) {
    case DriveVariant::Step:
      // Right-continuous step: J jumps to 1 at t = tau/2 exactly.
      j = (t / spec.tau >= 0.5) ? 1.0 : 0.0;
      break;
    case DriveVariant::Smooth:
      j = std::sin(0.5 * kPi - 0.5 * kPi * std::cos(kPi * t / (2.0 * spec.tau)));
      break;
    default:
      throw std::invalid_argument("two_spin_hamiltonian: not a two-spin drive");
  }
  const Matrix eye = identity(2);
  return kron(pauli('z'), eye) + 0.5 * kron(eye, pauli('z')) +
         j * (kron(pauli('x'), pauli('x')) + kron(pauli('y'), pauli('y')));
}

Matrix two_spin_control(TwoSpinControlForm form) {
  const Matrix xy = kron(pauli('x'), pauli('y'));
  const Matrix yx = kron(pauli('y'), pauli('x'));
  switch (form) {
    case TwoSpinControlForm::Difference:
      return xy - yx;
    case TwoSpinControlForm::Symmetric:
      return xy + yx;
    case TwoSpinControlForm::Doubled:
      return 2.0 * xy;
  }
  throw std::invalid_argument("two_spin_control: unknown form");
}

std::string to_string(TwoSpinControlForm form) {
  switch (form) {
    case TwoSpinControlForm::Difference:
      return "difference";
    case TwoSpinControlForm::Symmetric:
      return "symmetric";
    case TwoSpinControlForm::Doubled:
      return "doubled";
  }
  throw std::invalid_argument("to_string: unknown control form");
}

TwoSpinControlForm control_form_from_string(const std::string& name) {
  if (name == "difference") return TwoSpinControlForm::Difference;
  if (name == "symmetric") return TwoSpinControlForm::Symmetric;
  if (name == "doubled") return TwoSpinControlForm::Doubled;
  throw std::invalid_argument("control_form_from_string: unknown form `" +
                              name + "`");
}

Matrix system_hamiltonian(const SystemSpec& spec, double t) {
  return spec.kind == SystemKind::SingleSpin ? single_spin_hamiltonian(spec, t)
                                             : two_spin_hamiltonian(spec, t);
}

Matrix control_operator(const SystemSpec& spec) {
  return spec.kind == SystemKind::SingleSpin
             ? single_spin_control()
             : two_spin_control(spec.control_form);
}

std::vector<Matrix> hamiltonian_grid(const SystemSpec& spec) {
  std::vector<Matrix> grid;
  grid.reserve(static_cast<std::size_t>(spec.n_steps));
  for (int i = 0; i < spec.n_steps; ++i)
    grid.push_back(system_hamiltonian(spec, i * spec.dt()));
  return grid;
}

std::string to_string(Approach approach) {
  switch (approach) {
    case Approach::DenseDensity: return "dense-density";
    case Approach::DensePure: return "dense-pure";
    case Approach::LstmEnergyTime: return "lstm-energy-time";
    case Approach::LstmTimeOnly: return "lstm-time-only";
  }
  throw std::logic_error("to_string(Approach): bad value");
}

bool approach_uses_lstm(Approach approach) {
  return approach == Approach::LstmEnergyTime ||
         approach == Approach::LstmTimeOnly;
}

bool approach_uses_measurement(Approach approach) {
  return approach == Approach::DensePure ||
         approach == Approach::LstmEnergyTime;
}

int observation_size(Approach approach, int dim) {
  switch (approach) {
    case Approach::DenseDensity: return dim * dim + 1;
    case Approach::DensePure: return 2 * dim + 1;
    case Approach::LstmEnergyTime: return 2;
    case Approach::LstmTimeOnly: return 1;
  }
  throw std::logic_error("observation_size: bad approach");
}

Observation encode_observation(Approach approach, const QuantumState& state,
                               double measured_energy, int t_index,
                               const SystemSpec& spec) {
  if (t_index < 0 || t_index > spec.n_steps)
    throw std::invalid_argument("encode_observation: t_index out of range");
  const double t_norm = static_cast<double>(t_index) / spec.n_steps;

  Observation obs;
  obs.encoding = approach;
  switch (approach) {
    case Approach::DenseDensity: {
      if (!state.is_density())
        throw std::invalid_argument(
            "encode_observation: DenseDensity requires a density matrix");
      const Matrix& rho = state.rho();
      const int d = static_cast<int>(rho.rows());
      obs.values.reserve(static_cast<std::size_t>(d * d + 1));
      obs.values.push_back(t_norm);
      for (int i = 0; i < d; ++i) obs.values.push_back(rho(i, i).real());
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          obs.values.push_back(rho(i, j).real());
          obs.values.push_back(rho(i, j).imag());
        }
      break;
    }
    case Approach::DensePure: {
      if (!state.is_pure())
        throw std::invalid_argument(
            "encode_observation: DensePure requires a pure state");
      const Vector v = fix_phase(state.psi());
      obs.values.reserve(static_cast<std::size_t>(2 * v.size() + 1));
      obs.values.push_back(t_norm);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        obs.values.push_back(v(i).real());
        obs.values.push_back(v(i).imag());
      }
      break;
    }
    case Approach::LstmEnergyTime:
      obs.values = {t_norm, measured_energy};
      break;
    case Approach::LstmTimeOnly:
      obs.values = {t_norm};
      break;
  }
  return obs;
}

}  // namespace spinrl
