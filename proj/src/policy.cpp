#include "spinrl/policy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace spinrl {

void validate(const PolicyConfig& cfg) {
  if (!(cfg.sigma > 0))
    throw std::invalid_argument("PolicyConfig: sigma must be positive");
  if (cfg.epsilon < 0 || cfg.epsilon > 1)
    throw std::invalid_argument("PolicyConfig: epsilon must lie in [0, 1]");
  if (!(cfg.mu_star > 0))
    throw std::invalid_argument("PolicyConfig: mu_star must be positive");
  if (cfg.n_steps < 1)
    throw std::invalid_argument("PolicyConfig: n_steps must be >= 1");
  if (cfg.batch_size < 1)
    throw std::invalid_argument("PolicyConfig: batch_size must be >= 1");
  if (cfg.n_epochs < 0)
    throw std::invalid_argument("PolicyConfig: n_epochs must be >= 0");
  if (cfg.epsilon_cutoff_epochs < 0 ||
      cfg.epsilon_cutoff_epochs > cfg.n_epochs)
    throw std::invalid_argument(
        "PolicyConfig: epsilon_cutoff_epochs must lie in [0, n_epochs]");
  if (!(cfg.eta > 0))
    throw std::invalid_argument("PolicyConfig: eta must be positive");
  if (cfg.momentum < 0 || cfg.momentum >= 1)
    throw std::invalid_argument("PolicyConfig: momentum must lie in [0, 1)");
  if (cfg.updates_per_epoch < 1)
    throw std::invalid_argument("PolicyConfig: updates_per_epoch must be >= 1");
  if (!(cfg.timeout_seconds > 0))
    throw std::invalid_argument("PolicyConfig: timeout must be positive");
}

double sample_action(double mu, const PolicyConfig& cfg, Rng& rng) {
  if (std::abs(mu) > cfg.mu_star)
    throw std::invalid_argument("sample_action: policy mean out of bounds");
  const double u = rng.uniform();
  double a;
  if (u < cfg.epsilon) {
    a = rng.uniform(-cfg.mu_star, cfg.mu_star);
  } else if (cfg.sigma_zero_limit) {
    a = mu;
  } else {
    a = rng.normal(mu, cfg.sigma);
  }
  if (cfg.clip_actions) a = std::clamp(a, -cfg.mu_star, cfg.mu_star);
  return a;
}

std::unique_ptr<PolicyNet> make_policy_net(Approach approach, int n_in,
                                           double mu_star) {
  if (approach_uses_lstm(approach))
    return std::make_unique<LstmNet>(n_in, 50, 30, mu_star);
  return std::make_unique<DenseNet>(std::vector<int>{n_in, 100, 100, 100, 1},
                                    mu_star);
}

EnvContext make_env(const SystemSpec& spec) {
  validate(spec);
  const Matrix h0 = system_hamiltonian(spec, 0.0);
  return EnvContext{spec,
                    hamiltonian_grid(spec),
                    control_operator(spec),
                    h0,
                    system_hamiltonian(spec, spec.tau),
                    gibbs_state(h0, spec.beta)};
}

InitialCondition draw_initial(const EnvContext& env, Approach approach,
                              Rng& rng) {
  if (!approach_uses_measurement(approach))
    return InitialCondition{env.thermal_initial, 0.0, -1};
  const MeasurementOutcome out =
      measure_energy(env.thermal_initial.rho(), env.h0, rng);
  return InitialCondition{QuantumState::pure(out.collapsed), out.eigenvalue,
                          out.index};
}

Trajectory rollout(const EnvContext& env, const PolicyNet& net,
                   const PolicyConfig& cfg, const InitialCondition& init,
                   Rng& rng) {
  const SystemSpec& spec = env.spec;
  if (cfg.n_steps != spec.n_steps)
    throw std::invalid_argument(
        "rollout: config and system disagree on the step count");
  if (approach_uses_measurement(cfg.approach) && init.spectral_index < 0)
    throw std::invalid_argument(
        "rollout: measurement approach needs a measured initial condition");
  const bool recurrent = approach_uses_lstm(cfg.approach);
  const double dt = spec.dt();

  std::vector<Observation> observations;
  std::vector<double> actions, mus;
  std::vector<std::vector<double>> prefix;
  observations.reserve(spec.n_steps);
  actions.reserve(spec.n_steps);
  mus.reserve(spec.n_steps);

  QuantumState state = init.state;
  for (int i = 0; i < spec.n_steps; ++i) {
    Observation obs =
        encode_observation(cfg.approach, state, init.measured_energy, i, spec);
    double mu;
    if (recurrent) {
      // Recurrent policies see the whole input prefix; re-running the
      // sequence keeps the recorded mu bit-identical to a later full pass.
      prefix.push_back(obs.values);
      mu = net.forward_sequence(prefix).back();
    } else {
      mu = net.forward_sequence({obs.values}).back();
    }
    const double a = sample_action(mu, cfg, rng);
    observations.push_back(std::move(obs));
    mus.push_back(mu);
    actions.push_back(a);

    const Matrix h = env.h_grid[i] + a * env.m_opt;
    state = apply_unitary(propagator(h, dt), state);
  }

  double reward;
  if (approach_uses_measurement(cfg.approach)) {
    const Vector target = adiabatic_target(env.h_tau, init.spectral_index);
    reward = std::abs(state.psi().dot(target));
  } else {
    reward = -entropy_production(state.as_density(), env.h_tau, spec.beta);
  }

  ControlSchedule schedule{spec.tau, spec.n_steps, actions};
  return Trajectory{std::move(observations),
                    std::move(actions),
                    std::move(mus),
                    reward,
                    std::move(state),
                    std::move(schedule),
                    init.measured_energy,
                    init.spectral_index};
}

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TrainResult train(const SystemSpec& spec, const PolicyConfig& cfg,
                  std::uint64_t seed) {
  validate(spec);
  validate(cfg);
  if (cfg.n_steps != spec.n_steps)
    throw std::invalid_argument(
        "train: config and system disagree on the step count");
  const auto t_start = std::chrono::steady_clock::now();
  const EnvContext env = make_env(spec);
  const int n_in = observation_size(cfg.approach, spec.dim());

  std::unique_ptr<PolicyNet> net =
      make_policy_net(cfg.approach, n_in, cfg.mu_star);
  {
    Rng init_rng(derive_seed(seed, 0, 0));
    net->init_params(init_rng);
  }
  SgdMomentum optimizer(cfg.eta, cfg.momentum);

  TrainResult result;
  result.seed = seed;
  result.history.reserve(static_cast<std::size_t>(cfg.n_epochs));

  std::vector<double> grad(net->param_count(), 0.0);
  for (int epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t_start)
                               .count();
    if (elapsed > cfg.timeout_seconds) {
      result.timed_out = true;
      break;
    }
    PolicyConfig step_cfg = cfg;
    step_cfg.epsilon = (epoch < cfg.n_epochs - cfg.epsilon_cutoff_epochs)
                           ? cfg.epsilon
                           : 0.0;

    std::vector<Trajectory> batch;
    batch.reserve(static_cast<std::size_t>(cfg.batch_size));
    std::vector<double> rewards(static_cast<std::size_t>(cfg.batch_size));
    for (int b = 0; b < cfg.batch_size; ++b) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(epoch) + 1,
                          static_cast<std::uint64_t>(b) + 1));
      const InitialCondition init = draw_initial(env, cfg.approach, rng);
      batch.push_back(rollout(env, *net, step_cfg, init, rng));
      rewards[static_cast<std::size_t>(b)] = batch.back().reward;
    }
    const double mean_r = mean_of(rewards);
    result.history.push_back(
        EpochStats{mean_r, sample_std(rewards, mean_r), step_cfg.epsilon});

    for (int k = 0; k < cfg.updates_per_epoch; ++k) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (const Trajectory& traj : batch) {
        std::vector<std::vector<double>> inputs;
        inputs.reserve(traj.observations.size());
        for (const Observation& o : traj.observations)
          inputs.push_back(o.values);
        const std::vector<double> mus = net->forward_sequence(inputs);
        const double r_eff =
            cfg.baseline ? traj.reward - mean_r : traj.reward;
        std::vector<double> seeds(mus.size());
        for (std::size_t t = 0; t < mus.size(); ++t)
          seeds[t] = r_eff * (mus[t] - traj.actions[t]) /
                     (cfg.batch_size * cfg.sigma * cfg.sigma);
        net->backward_sequence(inputs, seeds, &grad);
      }
      if (cfg.momentum > 0)
        optimizer.step(net->params(), grad);
      else
        sgd_step(net->params(), grad, cfg.eta);
    }
  }

  // Best of one sampling batch with exploration off, then the fully
  // deterministic (a = mu) replay.
  PolicyConfig eval_cfg = cfg;
  eval_cfg.epsilon = 0.0;
  std::optional<Trajectory> best;
  for (int b = 0; b < cfg.batch_size; ++b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cfg.n_epochs) + 1,
                        static_cast<std::uint64_t>(b) + 1));
    const InitialCondition init = draw_initial(env, cfg.approach, rng);
    Trajectory traj = rollout(env, *net, eval_cfg, init, rng);
    if (!best || traj.reward > best->reward) best = std::move(traj);
  }

  PolicyConfig det_cfg = cfg;
  det_cfg.epsilon = 0.0;
  det_cfg.sigma_zero_limit = true;
  Rng det_rng(
      derive_seed(seed, static_cast<std::uint64_t>(cfg.n_epochs) + 2, 1));
  const InitialCondition det_init = draw_initial(env, cfg.approach, det_rng);
  result.deterministic = rollout(env, *net, det_cfg, det_init, det_rng);
  result.best = std::move(*best);
  result.net = std::move(net);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

EvalResult evaluate_schedule(const EnvContext& env,
                             const ControlSchedule& schedule,
                             const QuantumState& initial, Approach approach,
                             int spectral_index) {
  validate(schedule);
  if (schedule.n_steps != env.spec.n_steps ||
      std::abs(schedule.tau - env.spec.tau) > 1e-12)
    throw std::invalid_argument(
        "evaluate_schedule: schedule grid does not match the system");

  std::vector<Matrix> hs;
  hs.reserve(schedule.values.size());
  for (std::size_t i = 0; i < schedule.values.size(); ++i)
    hs.push_back(env.h_grid[i] + schedule.values[i] * env.m_opt);
  std::vector<QuantumState> states = evolve(initial, hs, schedule.dt());

  EvalResult res;
  res.thermo = make_thermo_report(env.spec, schedule, states);
  if (approach_uses_measurement(approach)) {
    if (spectral_index < 0)
      throw std::invalid_argument(
          "evaluate_schedule: adiabatic reward needs the initial spectral "
          "index");
    const Vector target = adiabatic_target(env.h_tau, spectral_index);
    res.reward = std::abs(states.back().psi().dot(target));
  } else {
    res.reward = -res.thermo.sigma;
  }
  res.states = std::move(states);
  return res;
}

EvalResult free_run(const SystemSpec& spec) {
  const EnvContext env = make_env(spec);
  return evaluate_schedule(env,
                           ControlSchedule::zeros(spec.tau, spec.n_steps),
                           env.thermal_initial, Approach::DenseDensity);
}

double thermal_weighted_sqrt_fidelity(const EnvContext& env,
                                      const ControlSchedule& schedule) {
  const EigResult eig0 = eig_hermitian(env.h0);
  double total = 0.0;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < eig0.values.size(); ++k) {
    const Vector v = eig0.vectors.col(k);
    const double w = std::real(v.dot(env.thermal_initial.rho() * v));
    const EvalResult res =
        evaluate_schedule(env, schedule, QuantumState::pure(v),
                          Approach::DensePure, static_cast<int>(k));
    acc += w * res.reward;
    total += w;
  }
  return acc / total;
}

RandomSearchResult random_search_baseline(const EnvContext& env,
                                          Approach approach, double mu_star,
                                          int n_samples, Rng& rng,
                                          bool zero_forcing) {
  if (n_samples < 1)
    throw std::invalid_argument("random_search_baseline: n_samples must be >= 1");
  if (!(mu_star > 0))
    throw std::invalid_argument("random_search_baseline: mu_star must be positive");

  std::optional<RandomSearchResult> best;
  for (int s = 0; s < n_samples; ++s) {
    ControlSchedule sched =
        ControlSchedule::zeros(env.spec.tau, env.spec.n_steps);
    if (!zero_forcing)
      for (double& v : sched.values) v = rng.uniform(-mu_star, mu_star);
    double reward;
    if (approach_uses_measurement(approach)) {
      reward = thermal_weighted_sqrt_fidelity(env, sched);
    } else {
      reward =
          evaluate_schedule(env, sched, env.thermal_initial, approach).reward;
    }
    if (!best || reward > best->best_reward)
      best = RandomSearchResult{std::move(sched), reward};
  }
  return *best;
}

}  // namespace spinrl
