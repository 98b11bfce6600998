#include "spinrl/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrl {

double relative_entropy(const Matrix& rho, const Matrix& sigma_state) {
  if (rho.rows() != sigma_state.rows() || rho.cols() != sigma_state.cols())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  const EigResult er = eig_hermitian(rho);
  const EigResult es = eig_hermitian(sigma_state);

  double s_rho = 0.0;  // tr(rho log rho)
  for (Eigen::Index i = 0; i < er.values.size(); ++i) {
    const double p = er.values(i);
    if (p < 1e-14) continue;
    s_rho += p * std::log(p);
  }

  double cross = 0.0;  // tr(rho log sigma)
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    const Vector v = es.vectors.col(j);
    const double weight = std::real(v.dot(rho * v));
    const double q = es.values(j);
    if (q <= 1e-12) {
      if (weight > 1e-9)
        throw std::runtime_error(
            "relative_entropy: state has weight outside the reference "
            "support, divergence is infinite");
      continue;
    }
    cross += weight * std::log(q);
  }
  return s_rho - cross;
}

double entropy_production(const Matrix& final_density, const Matrix& h_final,
                          double beta) {
  return relative_entropy(final_density, gibbs_state(h_final, beta).rho());
}

double internal_energy(const QuantumState& state, const Matrix& h) {
  require_hermitian(h, "internal_energy");
  Complex value;
  if (state.is_density()) {
    if (state.rho().rows() != h.rows())
      throw std::invalid_argument("internal_energy: dimension mismatch");
    value = (state.rho() * h).trace();
  } else {
    if (state.psi().size() != h.rows())
      throw std::invalid_argument("internal_energy: dimension mismatch");
    value = state.psi().dot(h * state.psi());
  }
  if (std::abs(value.imag()) > 1e-10)
    throw std::runtime_error(
        "internal_energy: imaginary residue exceeds tolerance");
  return value.real();
}

double log_partition(const Matrix& h, double beta) {
  if (!(beta > 0)) throw std::invalid_argument("log_partition: beta must be positive");
  const RealVector evals = eig_hermitian(h).values;
  const double ground = evals(0);
  double z = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    z += std::exp(-beta * (evals(i) - ground));
  return -beta * ground + std::log(z);
}

double free_energy_change(const Matrix& h0, const Matrix& h_tau, double beta) {
  return -(log_partition(h_tau, beta) - log_partition(h0, beta)) / beta;
}

namespace {
const QuantumState& left_endpoint_state(const std::vector<QuantumState>& states,
                                        std::size_t i, std::size_t n) {
  if (states.size() != n && states.size() != n + 1)
    throw std::invalid_argument(
        "control_energy_cost: need one state per left endpoint (or the full "
        "evolved grid)");
  return states[i];
}
}  // namespace

double control_energy_cost(const std::vector<QuantumState>& states,
                           const ControlSchedule& schedule,
                           const Matrix& m_opt) {
  validate(schedule);
  const std::size_t n = schedule.values.size();
  const double dt = schedule.dt();
  double integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const QuantumState& s = left_endpoint_state(states, i, n);
    integral += schedule.values[i] *
                internal_energy(s, m_opt) * dt;
  }
  return std::abs(integral);
}

double control_energy_cost_fine(const std::vector<QuantumState>& states,
                                const ControlSchedule& schedule,
                                const std::vector<Matrix>& h_s_grid,
                                const Matrix& m_opt, int substeps) {
  validate(schedule);
  if (substeps < 1)
    throw std::invalid_argument("control_energy_cost_fine: substeps must be >= 1");
  const std::size_t n = schedule.values.size();
  if (h_s_grid.size() != n)
    throw std::invalid_argument("control_energy_cost_fine: grid length mismatch");
  const double dt_sub = schedule.dt() / substeps;
  double integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = schedule.values[i];
    const Matrix h = h_s_grid[i] + f * m_opt;
    const Matrix u = propagator(h, dt_sub);
    QuantumState s = left_endpoint_state(states, i, n);
    for (int k = 0; k < substeps; ++k) {
      integral += f * internal_energy(s, m_opt) * dt_sub;
      if (k + 1 < substeps) s = apply_unitary(u, s);
    }
  }
  return std::abs(integral);
}

double entropy_reduction(double sigma_opt, double sigma_free) {
  if (sigma_free <= 1e-12)
    throw std::runtime_error(
        "entropy_reduction: free process is already reversible, metric "
        "undefined");
  return 1.0 - sigma_opt / sigma_free;
}

double work_reduction(double delta_u_opt, double e_in, double delta_u_free) {
  if (std::abs(delta_u_free) <= 1e-12)
    throw std::runtime_error(
        "work_reduction: free-run energy change vanishes, metric undefined");
  return 1.0 - (delta_u_opt + e_in) / delta_u_free;
}

ThermoReport make_thermo_report(const SystemSpec& spec,
                                const ControlSchedule& schedule,
                                const std::vector<QuantumState>& states) {
  if (states.size() != static_cast<std::size_t>(spec.n_steps) + 1)
    throw std::invalid_argument("make_thermo_report: expected n_steps+1 states");
  const Matrix h0 = system_hamiltonian(spec, 0.0);
  const Matrix h_tau = system_hamiltonian(spec, spec.tau);

  ThermoReport report;
  report.beta = spec.beta;
  report.sigma =
      entropy_production(states.back().as_density(), h_tau, spec.beta);
  report.delta_u = internal_energy(states.back(), h_tau) -
                   internal_energy(states.front(), h0);
  report.delta_f = free_energy_change(h0, h_tau, spec.beta);
  report.e_in = control_energy_cost(states, schedule, control_operator(spec));
  return report;
}

}  // namespace spinrl
