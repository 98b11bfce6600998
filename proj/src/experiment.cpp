#include "spinrl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinrl/outputs.hpp"

namespace spinrl {

namespace {

const char* kExperimentNames[] = {
    "single-spin-a1", "single-spin-a2",  "single-spin-a3",
    "single-spin-b",  "two-spin-step",   "two-spin-smooth",
    "beta-sweep",     "free-run",        "grad-check",
    "random-search",
};

std::string drive_name(DriveVariant drive) {
  switch (drive) {
    case DriveVariant::A: return "A";
    case DriveVariant::B: return "B";
    case DriveVariant::Step: return "step";
    case DriveVariant::Smooth: return "smooth";
  }
  throw std::logic_error("drive_name: bad value");
}

DriveVariant drive_from_string(const std::string& name) {
  if (name == "a" || name == "A") return DriveVariant::A;
  if (name == "b" || name == "B") return DriveVariant::B;
  if (name == "step") return DriveVariant::Step;
  if (name == "smooth") return DriveVariant::Smooth;
  throw std::invalid_argument("unknown drive variant: " + name);
}

Approach approach_from_string(const std::string& name) {
  for (Approach a : {Approach::DenseDensity, Approach::DensePure,
                     Approach::LstmEnergyTime, Approach::LstmTimeOnly})
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown approach: " + name);
}

std::vector<std::uint64_t> default_twenty_seeds() {
  std::vector<std::uint64_t> seeds(20);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  return seeds;
}

}  // namespace

ExperimentKind experiment_from_string(const std::string& name) {
  for (int k = 0; k < 10; ++k)
    if (name == kExperimentNames[k]) return static_cast<ExperimentKind>(k);
  throw std::invalid_argument("unknown experiment: " + name);
}

std::string to_string(ExperimentKind kind) {
  return kExperimentNames[static_cast<int>(kind)];
}

ExperimentConfig make_experiment_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::SingleSpinA1:
      cfg.policy.approach = Approach::DenseDensity;
      cfg.policy.eta = 0.01;
      cfg.seeds = default_twenty_seeds();
      break;
    case ExperimentKind::SingleSpinA2:
      cfg.policy.approach = Approach::DensePure;
      cfg.policy.eta = 0.003;
      cfg.seeds = default_twenty_seeds();
      break;
    case ExperimentKind::SingleSpinA3:
      cfg.policy.approach = Approach::LstmEnergyTime;
      cfg.policy.eta = 0.003;
      cfg.seeds = default_twenty_seeds();
      break;
    case ExperimentKind::SingleSpinVariantB:
      cfg.system.drive = DriveVariant::B;
      cfg.policy.approach = Approach::LstmEnergyTime;
      cfg.policy.eta = 0.003;
      break;
    case ExperimentKind::TwoSpinStep:
    case ExperimentKind::TwoSpinSmooth:
      cfg.system.kind = SystemKind::TwoSpin;
      cfg.system.drive = kind == ExperimentKind::TwoSpinStep
                             ? DriveVariant::Step
                             : DriveVariant::Smooth;
      cfg.policy.approach = Approach::LstmTimeOnly;
      cfg.policy.mu_star = 5.0;
      cfg.policy.eta = 0.01;
      break;
    case ExperimentKind::BetaSweep:
      cfg.system.kind = SystemKind::TwoSpin;
      cfg.system.drive = DriveVariant::Step;
      cfg.policy.approach = Approach::LstmTimeOnly;
      cfg.policy.mu_star = 5.0;
      cfg.policy.eta = 0.01;
      break;
    case ExperimentKind::FreeRun:
    case ExperimentKind::GradCheck:
      break;
    case ExperimentKind::RandomSearch:
      cfg.policy.approach = Approach::DenseDensity;
      break;
  }
  return cfg;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty seed list");
  const std::size_t range = text.find("..");
  std::vector<std::uint64_t> seeds;
  if (range != std::string::npos) {
    const std::uint64_t lo = std::stoull(text.substr(0, range));
    const std::uint64_t hi = std::stoull(text.substr(range + 2));
    if (hi < lo) throw std::invalid_argument("seed range is reversed: " + text);
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    seeds.push_back(std::stoull(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return seeds;
}

void apply_config(ExperimentConfig& cfg, Config& file) {
  {
    const std::string kind =
        file.get_string("system.kind", cfg.system.kind == SystemKind::SingleSpin
                                           ? "single-spin"
                                           : "two-spin");
    if (kind == "single-spin") cfg.system.kind = SystemKind::SingleSpin;
    else if (kind == "two-spin") cfg.system.kind = SystemKind::TwoSpin;
    else throw std::invalid_argument("unknown system kind: " + kind);
  }
  cfg.system.drive = drive_from_string(
      file.get_string("system.drive", drive_name(cfg.system.drive) == "A"
                                          ? "a"
                                          : drive_name(cfg.system.drive) == "B"
                                                ? "b"
                                                : drive_name(cfg.system.drive)));
  cfg.system.b0 = file.get_double("system.b0", cfg.system.b0);
  cfg.system.tau = file.get_double("system.tau", cfg.system.tau);
  cfg.system.n_steps = file.get_int("system.n_steps", cfg.system.n_steps);
  cfg.system.beta = file.get_double("system.beta", cfg.system.beta);
  cfg.system.control_form = control_form_from_string(file.get_string(
      "system.control_form", to_string(cfg.system.control_form)));

  cfg.policy.sigma = file.get_double("policy.sigma", cfg.policy.sigma);
  cfg.policy.epsilon = file.get_double("policy.epsilon", cfg.policy.epsilon);
  cfg.policy.mu_star = file.get_double("policy.mu_star", cfg.policy.mu_star);
  cfg.policy.batch_size =
      file.get_int("policy.batch_size", cfg.policy.batch_size);
  cfg.policy.n_epochs = file.get_int("policy.n_epochs", cfg.policy.n_epochs);
  cfg.policy.epsilon_cutoff_epochs = file.get_int(
      "policy.epsilon_cutoff", cfg.policy.epsilon_cutoff_epochs);
  cfg.policy.eta = file.get_double("policy.eta", cfg.policy.eta);
  cfg.policy.approach = approach_from_string(
      file.get_string("policy.approach", to_string(cfg.policy.approach)));
  cfg.policy.clip_actions =
      file.get_bool("policy.clip_actions", cfg.policy.clip_actions);
  cfg.policy.baseline = file.get_bool("policy.baseline", cfg.policy.baseline);
  cfg.policy.momentum = file.get_double("policy.momentum", cfg.policy.momentum);
  cfg.policy.updates_per_epoch =
      file.get_int("policy.updates_per_epoch", cfg.policy.updates_per_epoch);
  cfg.policy.timeout_seconds =
      file.get_double("policy.timeout_seconds", cfg.policy.timeout_seconds);

  cfg.policy.n_steps = cfg.system.n_steps;

  if (file.has("run.seeds"))
    cfg.seeds = parse_seed_list(file.get_string("run.seeds", ""));
  cfg.output_dir = file.get_string("run.output_dir", cfg.output_dir);
  cfg.random_samples = file.get_int("run.random_samples", cfg.random_samples);
  cfg.grad_trials = file.get_int("run.grad_trials", cfg.grad_trials);
  cfg.deterministic = file.get_bool("run.deterministic", cfg.deterministic);

  file.require_fully_consumed();
  validate(cfg.system);
  validate(cfg.policy);
}

std::string canonical_text(const ExperimentConfig& cfg) {
  Config c;
  c.set("experiment", to_string(cfg.experiment));
  c.set("system.kind", cfg.system.kind == SystemKind::SingleSpin
                           ? "single-spin"
                           : "two-spin");
  c.set("system.drive", drive_name(cfg.system.drive));
  c.set("system.b0", format_g17(cfg.system.b0));
  c.set("system.tau", format_g17(cfg.system.tau));
  c.set("system.n_steps", std::to_string(cfg.system.n_steps));
  c.set("system.beta", format_g17(cfg.system.beta));
  c.set("system.control_form", to_string(cfg.system.control_form));
  c.set("policy.sigma", format_g17(cfg.policy.sigma));
  c.set("policy.epsilon", format_g17(cfg.policy.epsilon));
  c.set("policy.mu_star", format_g17(cfg.policy.mu_star));
  c.set("policy.batch_size", std::to_string(cfg.policy.batch_size));
  c.set("policy.n_epochs", std::to_string(cfg.policy.n_epochs));
  c.set("policy.epsilon_cutoff",
        std::to_string(cfg.policy.epsilon_cutoff_epochs));
  c.set("policy.eta", format_g17(cfg.policy.eta));
  c.set("policy.approach", to_string(cfg.policy.approach));
  c.set("policy.clip_actions", cfg.policy.clip_actions ? "true" : "false");
  c.set("policy.baseline", cfg.policy.baseline ? "true" : "false");
  c.set("policy.momentum", format_g17(cfg.policy.momentum));
  c.set("policy.updates_per_epoch",
        std::to_string(cfg.policy.updates_per_epoch));
  std::string seeds;
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    if (i) seeds += ",";
    seeds += std::to_string(cfg.seeds[i]);
  }
  c.set("run.seeds", seeds);
  c.set("run.random_samples", std::to_string(cfg.random_samples));
  c.set("run.grad_trials", std::to_string(cfg.grad_trials));
  return c.canonical();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(canonical_text(cfg));
}

AdiabaticEval evaluate_adiabatic_policy(const EnvContext& env,
                                        const PolicyNet& net,
                                        const PolicyConfig& cfg) {
  if (!approach_uses_measurement(cfg.approach))
    throw std::invalid_argument(
        "evaluate_adiabatic_policy: approach has no adiabatic target");
  const EigResult eig0 = eig_hermitian(env.h0);
  PolicyConfig det = cfg;
  det.epsilon = 0.0;
  det.sigma_zero_limit = true;

  AdiabaticEval ev;
  double wsum = 0.0, acc = 0.0;
  for (Eigen::Index k = 0; k < eig0.values.size(); ++k) {
    const Vector v = eig0.vectors.col(k);
    const double w = std::real(v.dot(env.thermal_initial.rho() * v));
    InitialCondition init{QuantumState::pure(v), eig0.values(k),
                          static_cast<int>(k)};
    Rng rng(derive_seed(0xAD1ABA71CULL, static_cast<std::uint64_t>(k)));
    const Trajectory traj = rollout(env, net, det, init, rng);
    const double fid = traj.reward * traj.reward;
    ev.weights.push_back(w);
    ev.fidelities.push_back(fid);
    ev.schedules.push_back(traj.schedule);
    acc += w * fid;
    wsum += w;
  }
  ev.weighted_fidelity = acc / wsum;
  return ev;
}

namespace {

double try_entropy_reduction(double opt, double free_sigma) {
  try {
    return entropy_reduction(opt, free_sigma);
  } catch (const std::exception&) {
    return kNan;
  }
}

double try_work_reduction(double du_opt, double e_in, double du_free) {
  try {
    return work_reduction(du_opt, e_in, du_free);
  } catch (const std::exception&) {
    return kNan;
  }
}

RunRecord run_one_training(const ExperimentConfig& cfg, const SystemSpec& spec,
                           std::uint64_t seed, const std::string& label) {
  RunRecord rec;
  rec.config_hash = config_hash(cfg);
  rec.seed = seed;
  rec.label = label;
  rec.beta = spec.beta;
  rec.eta = cfg.policy.eta;

  const EnvContext env = make_env(spec);
  const ControlSchedule zero = ControlSchedule::zeros(spec.tau, spec.n_steps);
  rec.free_thermo =
      evaluate_schedule(env, zero, env.thermal_initial, Approach::DenseDensity)
          .thermo;

  TrainResult tr = train(spec, cfg.policy, seed);
  rec.history = std::move(tr.history);
  rec.timed_out = tr.timed_out;
  rec.wall_seconds = tr.wall_seconds;
  rec.reward_best = tr.best.reward;
  rec.reward_det = tr.deterministic.reward;
  rec.best_schedule = tr.best.schedule.values;
  rec.det_schedule = tr.deterministic.schedule.values;

  rec.opt_thermo = evaluate_schedule(env, tr.best.schedule,
                                     env.thermal_initial,
                                     Approach::DenseDensity)
                       .thermo;
  rec.det_thermo = evaluate_schedule(env, tr.deterministic.schedule,
                                     env.thermal_initial,
                                     Approach::DenseDensity)
                       .thermo;
  rec.delta_sigma =
      try_entropy_reduction(rec.opt_thermo.sigma, rec.free_thermo.sigma);
  rec.delta_sigma_det =
      try_entropy_reduction(rec.det_thermo.sigma, rec.free_thermo.sigma);
  rec.delta_w = try_work_reduction(rec.opt_thermo.delta_u, rec.opt_thermo.e_in,
                                   rec.free_thermo.delta_u);
  if (approach_uses_measurement(cfg.policy.approach)) {
    const AdiabaticEval ev = evaluate_adiabatic_policy(env, *tr.net, cfg.policy);
    rec.fidelity = ev.weighted_fidelity;
  }
  return rec;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg.system);
  validate(cfg.policy);
  if (cfg.policy.n_steps != cfg.system.n_steps)
    throw std::invalid_argument(
        "run_experiment: policy and system step counts differ");
  if (cfg.seeds.empty())
    throw std::invalid_argument("run_experiment: need at least one seed");

  std::vector<RunRecord> records;
  switch (cfg.experiment) {
    case ExperimentKind::FreeRun: {
      RunRecord rec;
      rec.config_hash = config_hash(cfg);
      rec.seed = cfg.seeds.front();
      rec.label = drive_name(cfg.system.drive);
      rec.beta = cfg.system.beta;
      const EvalResult res = free_run(cfg.system);
      rec.free_thermo = res.thermo;
      rec.opt_thermo = res.thermo;  // no agent: the free run is the run
      rec.det_thermo = res.thermo;
      rec.reward_best = res.reward;
      rec.reward_det = res.reward;
      records.push_back(std::move(rec));
      break;
    }
    case ExperimentKind::GradCheck: {
      const GradCheckReport report =
          grad_check(cfg.grad_trials, cfg.seeds.front());
      RunRecord rec;
      rec.config_hash = config_hash(cfg);
      rec.seed = cfg.seeds.front();
      rec.label = "grad-check";
      rec.grad_max_rel_dense = report.max_rel_dense;
      rec.grad_max_rel_lstm = report.max_rel_lstm;
      records.push_back(std::move(rec));
      if (!report.pass)
        throw std::runtime_error(
            "grad-check failed: max relative error dense " +
            format_g17(report.max_rel_dense) + ", lstm " +
            format_g17(report.max_rel_lstm));
      break;
    }
    case ExperimentKind::RandomSearch: {
      const EnvContext env = make_env(cfg.system);
      for (std::uint64_t seed : cfg.seeds) {
        Rng rng(derive_seed(seed, 1, 0));
        const RandomSearchResult rs = random_search_baseline(
            env, cfg.policy.approach, cfg.policy.mu_star, cfg.random_samples,
            rng);
        RunRecord rec;
        rec.config_hash = config_hash(cfg);
        rec.seed = seed;
        rec.label = "random-search";
        rec.beta = cfg.system.beta;
        const ControlSchedule zero =
            ControlSchedule::zeros(cfg.system.tau, cfg.system.n_steps);
        rec.free_thermo = evaluate_schedule(env, zero, env.thermal_initial,
                                            Approach::DenseDensity)
                              .thermo;
        rec.opt_thermo = evaluate_schedule(env, rs.best, env.thermal_initial,
                                           Approach::DenseDensity)
                             .thermo;
        rec.det_thermo = rec.opt_thermo;
        rec.reward_best = rs.best_reward;
        rec.reward_det = rs.best_reward;
        rec.best_schedule = rs.best.values;
        rec.det_schedule = rs.best.values;
        rec.delta_sigma =
            try_entropy_reduction(rec.opt_thermo.sigma, rec.free_thermo.sigma);
        rec.delta_sigma_det = rec.delta_sigma;
        rec.delta_w = try_work_reduction(
            rec.opt_thermo.delta_u, rec.opt_thermo.e_in,
            rec.free_thermo.delta_u);
        records.push_back(std::move(rec));
      }
      break;
    }
    case ExperimentKind::BetaSweep: {
      const int n_points = 20;
      for (int i = 0; i < n_points; ++i) {
        const double beta = 0.1 + i * (2.1 - 0.1) / (n_points - 1);
        SystemSpec spec = cfg.system;
        spec.beta = beta;
        char label[32];
        std::snprintf(label, sizeof(label), "beta=%.6f", beta);
        records.push_back(run_one_training(
            cfg, spec, cfg.seeds.front() + static_cast<std::uint64_t>(i),
            label));
      }
      break;
    }
    default: {
      for (std::uint64_t seed : cfg.seeds)
        records.push_back(run_one_training(cfg, cfg.system, seed,
                                           drive_name(cfg.system.drive)));
      break;
    }
  }
  emit_outputs(cfg, records);
  return records;
}

namespace {

double fd_scalar(PolicyNet& net, const std::vector<std::vector<double>>& inputs,
                 const std::vector<double>& seeds, std::size_t index,
                 double h) {
  std::vector<double>& p = net.params();
  const double orig = p[index];
  p[index] = orig + h;
  const std::vector<double> up = net.forward_sequence(inputs);
  p[index] = orig - h;
  const std::vector<double> dn = net.forward_sequence(inputs);
  p[index] = orig;
  double diff = 0.0;
  for (std::size_t t = 0; t < seeds.size(); ++t)
    diff += seeds[t] * (up[t] - dn[t]);
  return diff / (2.0 * h);
}

// Relative error with the absolute floor: differences below 1e-8 pass
// outright (the finite-difference roundoff floor), everything else is
// measured relative to the larger of the two gradients.
void track_error(double analytic, double fd, double* max_rel) {
  const double abs_err = std::abs(analytic - fd);
  if (abs_err < 1e-8) return;
  const double scale = std::max(std::abs(analytic), std::abs(fd));
  *max_rel = std::max(*max_rel, abs_err / scale);
}

}  // namespace

GradCheckReport grad_check(int n_trials, std::uint64_t seed) {
  if (n_trials < 1)
    throw std::invalid_argument("grad_check: n_trials must be >= 1");
  GradCheckReport report;
  report.trials = n_trials;
  const double h = 1e-5;

  for (int trial = 0; trial < n_trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial), 1));
    DenseNet net({3, 8, 8, 8, 1}, 2.0);
    net.init_params(rng);

    // Keep every rectifier pre-activation away from its kink so the
    // central difference stays on one linear piece.
    std::vector<std::vector<double>> inputs;
    const int seq_len = 4;
    for (int attempt = 0; attempt < 200; ++attempt) {
      inputs.clear();
      for (int t = 0; t < seq_len; ++t) {
        std::vector<double> x(3);
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        inputs.push_back(std::move(x));
      }
      double min_pre = 1e9;
      for (const auto& x : inputs) {
        DenseCache cache;
        net.forward(x, &cache);
        for (std::size_t l = 0; l + 1 < cache.pre.size(); ++l)
          for (double z : cache.pre[l]) min_pre = std::min(min_pre, std::abs(z));
      }
      if (min_pre > 1e-3) break;
      if (attempt == 199)
        throw std::runtime_error("grad_check: could not avoid rectifier kink");
    }
    std::vector<double> cost_seeds(seq_len);
    for (double& s : cost_seeds) s = rng.uniform(-1.0, 1.0);

    std::vector<double> grad(net.param_count(), 0.0);
    net.backward_sequence(inputs, cost_seeds, &grad);
    for (std::size_t i = 0; i < grad.size(); ++i)
      track_error(grad[i], fd_scalar(net, inputs, cost_seeds, i, h),
                  &report.max_rel_dense);
  }

  for (int trial = 0; trial < n_trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial), 2));
    LstmNet net(2, 4, 3, 2.0);
    net.init_params(rng);

    const int seq_len = 6;
    std::vector<std::vector<double>> inputs;
    for (int t = 0; t < seq_len; ++t) {
      std::vector<double> x(2);
      for (double& v : x) v = rng.uniform(-1.0, 1.0);
      inputs.push_back(std::move(x));
    }
    std::vector<double> cost_seeds(seq_len);
    for (double& s : cost_seeds) s = rng.uniform(-1.0, 1.0);

    std::vector<double> grad(net.param_count(), 0.0);
    net.backward_sequence(inputs, cost_seeds, &grad);
    for (std::size_t i = 0; i < grad.size(); ++i)
      track_error(grad[i], fd_scalar(net, inputs, cost_seeds, i, h),
                  &report.max_rel_lstm);
  }

  report.pass = report.max_rel_dense < report.tolerance &&
                report.max_rel_lstm < report.tolerance;
  return report;
}

}  // namespace spinrl
