#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "spinrl/nets.hpp"
#include "spinrl/quantum.hpp"
#include "spinrl/spin_models.hpp"
#include "spinrl/thermo.hpp"

namespace spinrl {

struct PolicyConfig {
  double sigma = 1.0;    // Gaussian action std (fixed, not learned)
  double epsilon = 0.1;  // uniform-exploration probability
  double mu_star = 3.0;  // output bound of the policy mean
  int n_steps = 10;
  int batch_size = 30;
  int n_epochs = 300;
  int epsilon_cutoff_epochs = 100;  // epsilon forced to 0 for this final window
  double eta = 1e-3;
  Approach approach = Approach::DenseDensity;

  // Extensions, all off for faithful runs.
  bool sigma_zero_limit = false;  // act deterministically: a = mu
  bool clip_actions = false;      // hard-clip sampled actions to [-mu*, mu*]
  bool baseline = false;          // subtract the batch-mean reward in the cost
  double momentum = 0.0;          // heavy-ball coefficient for the update
  int updates_per_epoch = 1;
  double timeout_seconds = 1800.0;
};

void validate(const PolicyConfig& cfg);

// With probability epsilon a uniform draw on [-mu*, mu*], otherwise a draw
// from Normal(mu, sigma^2). The Gaussian draw is not clipped unless the
// clip flag is set; only the mean is bounded by construction.
double sample_action(double mu, const PolicyConfig& cfg, Rng& rng);

// The paper-sized architectures: dense [n_in,100,100,100,1] with
// rectified-linear hiddens, or LSTM(50) + dense(30, tanh) + tanh head.
std::unique_ptr<PolicyNet> make_policy_net(Approach approach, int n_in,
                                           double mu_star);

// Precomputed environment: bare Hamiltonians on the control grid, the
// control operator, and the initial thermal state.
struct EnvContext {
  SystemSpec spec;
  std::vector<Matrix> h_grid;  // H_S at the left endpoint of each interval
  Matrix m_opt;
  Matrix h0;
  Matrix h_tau;
  QuantumState thermal_initial;
};

EnvContext make_env(const SystemSpec& spec);

// Where a rollout starts. Thermal approaches use the Gibbs state directly;
// measurement approaches first collapse it onto an energy eigenstate.
struct InitialCondition {
  QuantumState state;
  double measured_energy = 0.0;
  int spectral_index = -1;  // -1 for thermal starts
};

InitialCondition draw_initial(const EnvContext& env, Approach approach,
                              Rng& rng);

struct Trajectory {
  std::vector<Observation> observations;
  std::vector<double> actions;  // the a_i; also the control amplitudes
  std::vector<double> mus;      // policy means at sampling time
  double reward = 0.0;
  QuantumState final_state;
  ControlSchedule schedule;
  double measured_energy = 0.0;
  int spectral_index = -1;
};

// One episode: observe, act, propagate one interval, repeat; terminal
// reward is -Sigma for thermal approaches and |<phi(tau)|phi_ad>| for
// measurement approaches.
Trajectory rollout(const EnvContext& env, const PolicyNet& net,
                   const PolicyConfig& cfg, const InitialCondition& init,
                   Rng& rng);

struct EpochStats {
  double mean_reward = 0.0;
  double reward_std = 0.0;
  double epsilon = 0.0;
};

struct TrainResult {
  std::unique_ptr<PolicyNet> net;
  Trajectory best;           // max reward over the final evaluation batch
  Trajectory deterministic;  // a = mu, epsilon = 0 replay of the trained net
  std::vector<EpochStats> history;
  bool timed_out = false;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

// Full training run: per epoch, batch_size rollouts with per-(epoch,batch)
// derived seeds, one gradient step on the batch-mean cost, exploration off
// for the final epsilon_cutoff_epochs epochs.
TrainResult train(const SystemSpec& spec, const PolicyConfig& cfg,
                  std::uint64_t seed);

struct EvalResult {
  ThermoReport thermo;
  double reward = 0.0;
  std::vector<QuantumState> states;
};

// Deterministic replay of a fixed schedule, without the agent.
EvalResult evaluate_schedule(const EnvContext& env,
                             const ControlSchedule& schedule,
                             const QuantumState& initial, Approach approach,
                             int spectral_index = -1);

// Zero-control evolution from the thermal state.
EvalResult free_run(const SystemSpec& spec);

// Deterministic figure of merit for a schedule on the adiabatic-tracking
// tasks: sqrt-fidelity against the adiabatic target, averaged over the
// initial energy eigenstates with their thermal weights.
double thermal_weighted_sqrt_fidelity(const EnvContext& env,
                                      const ControlSchedule& schedule);

struct RandomSearchResult {
  ControlSchedule best;
  double best_reward = 0.0;
};

// Best of n_samples uniform-random schedules on [-mu*, mu*]^n_steps under
// the deterministic reward (thermal: -Sigma; measurement: the thermal-
// weighted sqrt-fidelity). zero_forcing replaces every sample with the
// zero schedule, which turns n_samples=1 into the free-run reward.
RandomSearchResult random_search_baseline(const EnvContext& env,
                                          Approach approach, double mu_star,
                                          int n_samples, Rng& rng,
                                          bool zero_forcing = false);

}  // namespace spinrl
