#pragma once

#include <vector>

#include "spinrl/linalg.hpp"
#include "spinrl/quantum.hpp"
#include "spinrl/spin_models.hpp"

namespace spinrl {

// Endpoint thermodynamics of one evolved run. Energies are measured against
// the bare Hamiltonian at t=0 and t=tau, where the control field vanishes.
struct ThermoReport {
  double sigma = 0.0;    // entropy production
  double delta_u = 0.0;  // internal-energy change
  double delta_f = 0.0;  // equilibrium free-energy change
  double e_in = 0.0;     // energy injected through the control term
  double beta = 0.0;
};

// S(rho || sigma_state) = tr[rho (log rho - log sigma_state)], natural log.
// Eigenvalues of rho below 1e-14 contribute zero. Throws if rho carries
// weight above 1e-9 on a null eigenvector of sigma_state.
double relative_entropy(const Matrix& rho, const Matrix& sigma_state);

// Relative entropy between the reached state and the thermal state of the
// final Hamiltonian.
double entropy_production(const Matrix& final_density, const Matrix& h_final,
                          double beta);

double internal_energy(const QuantumState& state, const Matrix& h);

// log of the partition function, evaluated with a ground-energy shift so
// large beta stays finite.
double log_partition(const Matrix& h, double beta);

// -(1/beta) log(Z_tau / Z_0); depends only on the endpoint Hamiltonians.
double free_energy_change(const Matrix& h0, const Matrix& h_tau, double beta);

// |sum_i f_i tr(rho(t_i) m_opt) dt|, left-endpoint rule on the control grid.
// states may be the n left-endpoint states or the full n+1 evolved grid.
double control_energy_cost(const std::vector<QuantumState>& states,
                           const ControlSchedule& schedule,
                           const Matrix& m_opt);

// Same integral with each constant-Hamiltonian interval sub-sampled
// analytically; used for quadrature convergence studies.
double control_energy_cost_fine(const std::vector<QuantumState>& states,
                                const ControlSchedule& schedule,
                                const std::vector<Matrix>& h_s_grid,
                                const Matrix& m_opt, int substeps);

// 1 - sigma_opt / sigma_free. Throws when the free process is already
// reversible (sigma_free <= 1e-12).
double entropy_reduction(double sigma_opt, double sigma_free);

// 1 - (delta_u_opt + e_in) / delta_u_free. Throws when |delta_u_free| <= 1e-12.
double work_reduction(double delta_u_opt, double e_in, double delta_u_free);

// Full report for the n_steps+1 grid states produced by evolve().
ThermoReport make_thermo_report(const SystemSpec& spec,
                                const ControlSchedule& schedule,
                                const std::vector<QuantumState>& states);

}  // namespace spinrl
