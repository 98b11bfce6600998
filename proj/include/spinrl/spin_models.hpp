#pragma once

#include <string>
#include <vector>

#include "spinrl/quantum.hpp"

namespace spinrl {

enum class SystemKind { SingleSpin, TwoSpin };

// Two-spin control operator variants. The default acts purely inside the
// odd-parity subspace span{|01>, |10>}, which is where the exchange drive
// produces all of the entropy; the even-parity block span{|00>, |11>} stays
// thermal on its own, so a control with weight there can only hurt.
//   Difference: sigma_x(x)sigma_y - sigma_y(x)sigma_x   (odd block only)
//   Symmetric:  sigma_x(x)sigma_y + sigma_y(x)sigma_x   (even block only)
//   Doubled:    2 sigma_x(x)sigma_y                     (both blocks)
enum class TwoSpinControlForm { Difference, Symmetric, Doubled };

// Single spin: drive A ramps B_x as sin(pi t / 2 tau); drive B as
// sin[(pi/2) sin^2(pi t / 2 tau)]. Two spins: the exchange coupling J(t)
// either steps from 0 to 1 at t = tau/2 or follows the smooth ramp
// sin[pi/2 - (pi/2) cos(pi t / 2 tau)]. All four satisfy J(0)=0, J(tau)=1
// (resp. B_x(0)=0, B_x(tau)=B0).
enum class DriveVariant { A, B, Step, Smooth };

struct SystemSpec {
  SystemKind kind = SystemKind::SingleSpin;
  DriveVariant drive = DriveVariant::A;
  double b0 = 1.0;   // field magnitude (single spin only)
  double tau = 1.0;  // protocol duration
  int n_steps = 10;
  double beta = 1.0;  // inverse temperature of the initial thermal state
  TwoSpinControlForm control_form = TwoSpinControlForm::Difference;

  int dim() const { return kind == SystemKind::SingleSpin ? 2 : 4; }
  double dt() const { return tau / n_steps; }
};

void validate(const SystemSpec& spec);

// H_S(t) = [sigma_x B_x(t) + sigma_z B_z(t)] / 2 with
// B_z(t) = +sqrt(B0^2 - B_x(t)^2), so the field magnitude is constant.
Matrix single_spin_hamiltonian(const SystemSpec& spec, double t);

// M_opt = -sigma_y; the controlled Hamiltonian is H_S(t) + f(t) M_opt.
Matrix single_spin_control();

// H_S(t) = sigma_z(x)I + (1/2) I(x)sigma_z
//        + J(t) (sigma_x(x)sigma_x + sigma_y(x)sigma_y).
// The transverse-exchange normalization is fixed by the free-evolution
// thermodynamics it must produce: with it, the step drive gives
// Sigma/beta = 0.600643... and the smooth drive -> 0.575289... (fine grid).
Matrix two_spin_hamiltonian(const SystemSpec& spec, double t);

// See TwoSpinControlForm for the three operator choices.
Matrix two_spin_control(TwoSpinControlForm form = TwoSpinControlForm::Difference);

std::string to_string(TwoSpinControlForm form);
TwoSpinControlForm control_form_from_string(const std::string& name);

// Dispatch on spec.kind.
Matrix system_hamiltonian(const SystemSpec& spec, double t);
Matrix control_operator(const SystemSpec& spec);

// H_S sampled at the left endpoint of each interval: n_steps matrices.
std::vector<Matrix> hamiltonian_grid(const SystemSpec& spec);

// What the agent is shown, and how it is flattened into the network input.
enum class Approach { DenseDensity, DensePure, LstmEnergyTime, LstmTimeOnly };

std::string to_string(Approach approach);
bool approach_uses_lstm(Approach approach);
// True when the rollout starts from a projective energy measurement and is
// rewarded by closeness to the adiabatic target.
bool approach_uses_measurement(Approach approach);

struct Observation {
  Approach encoding;
  std::vector<double> values;
};

// Input vector length for a given encoding and Hilbert-space dimension:
// DenseDensity d^2+1, DensePure 2d+1, EnergyTime 2, TimeOnly 1.
int observation_size(Approach approach, int dim);

// Flattens the state (or measured energy) plus normalized time t_i/tau.
// DenseDensity: [t, diagonal..., Re/Im of the strict upper triangle].
// DensePure:    [t, Re/Im amplitude pairs] after the global phase fix.
// LstmEnergyTime: [t, E0].  LstmTimeOnly: [t].
Observation encode_observation(Approach approach, const QuantumState& state,
                               double measured_energy, int t_index,
                               const SystemSpec& spec);

}  // namespace spinrl
