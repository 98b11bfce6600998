#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spinrl/experiment.hpp"
#include "spinrl/outputs.hpp"

namespace {

using namespace spinrl;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string seeds_text;
  int threads = 1;
  bool deterministic = false;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "key = value configuration file");
  cmd->add_option("--out", opts->out_dir, "output directory");
  cmd->add_option("--seeds", opts->seeds_text,
                  "seed list: `3`, `1,2,5`, or `1..20`");
  cmd->add_option("--threads", opts->threads,
                  "worker threads (execution is currently always serial)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--deterministic", opts->deterministic,
                "force the single-threaded execution path");
}

ExperimentConfig resolve_config(ExperimentKind kind, const CommonOpts& opts) {
  ExperimentConfig cfg = make_experiment_config(kind);
  if (const char* env_dir = std::getenv("SPINRL_OUT_DIR"))
    cfg.output_dir = env_dir;
  if (!opts.config_path.empty()) {
    Config file = Config::from_file(opts.config_path);
    if (file.has("experiment")) {
      const ExperimentKind file_kind =
          experiment_from_string(file.get_string("experiment", ""));
      if (file_kind != kind)
        throw std::runtime_error(
            "config file experiment `" + to_string(file_kind) +
            "` conflicts with the requested `" + to_string(kind) + "`");
    }
    apply_config(cfg, file);
  }
  if (!opts.seeds_text.empty()) cfg.seeds = parse_seed_list(opts.seeds_text);
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  return cfg;
}

void print_records(const ExperimentConfig& cfg,
                   const std::vector<RunRecord>& records) {
  for (const RunRecord& r : records) {
    std::cout << "seed " << r.seed << " [" << r.label << "]";
    if (std::isfinite(r.reward_best))
      std::cout << " reward_best=" << format_g17(r.reward_best);
    if (std::isfinite(r.delta_sigma))
      std::cout << " delta_sigma=" << format_g17(r.delta_sigma);
    if (std::isfinite(r.delta_w))
      std::cout << " delta_w=" << format_g17(r.delta_w);
    if (std::isfinite(r.fidelity))
      std::cout << " fidelity=" << format_g17(r.fidelity);
    if (std::isfinite(r.grad_max_rel_dense))
      std::cout << " grad_max_rel_dense=" << format_g17(r.grad_max_rel_dense)
                << " grad_max_rel_lstm=" << format_g17(r.grad_max_rel_lstm);
    if (r.timed_out) std::cout << " TIMED-OUT(partial)";
    std::cout << "\n";
  }
  std::cout << "outputs written to " << cfg.output_dir << "\n";
}

int run_kind(ExperimentKind kind, const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(kind, opts);
  const std::vector<RunRecord> records = run_experiment(cfg);
  print_records(cfg, records);
  return 0;
}

int run_replay(const std::string& schedule_path, const CommonOpts& opts) {
  ExperimentConfig cfg =
      resolve_config(ExperimentKind::FreeRun, opts);
  const ControlSchedule schedule = read_schedule_csv(schedule_path);
  SystemSpec spec = cfg.system;
  spec.tau = schedule.tau;
  spec.n_steps = schedule.n_steps;
  validate(spec);
  const EnvContext env = make_env(spec);
  const EvalResult res = evaluate_schedule(env, schedule, env.thermal_initial,
                                           cfg.policy.approach);
  std::cout << "sigma=" << format_g17(res.thermo.sigma)
            << " sigma/beta=" << format_g17(res.thermo.sigma / res.thermo.beta)
            << " delta_u=" << format_g17(res.thermo.delta_u)
            << " delta_f=" << format_g17(res.thermo.delta_f)
            << " e_in=" << format_g17(res.thermo.e_in)
            << " reward=" << format_g17(res.reward) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Learned piecewise-constant control schedules for small driven "
      "quantum systems"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string experiment_name = "single-spin-a1";
  std::string schedule_path;
  int samples = -1;
  int trials = -1;

  CLI::App* train = app.add_subcommand("train", "train a policy");
  train->add_option("--experiment", experiment_name,
                    "single-spin-a1|single-spin-a2|single-spin-a3|"
                    "single-spin-b|two-spin-step|two-spin-smooth");
  add_common(train, &opts);

  CLI::App* free_cmd =
      app.add_subcommand("free-run", "zero-control baseline metrics");
  add_common(free_cmd, &opts);

  CLI::App* sweep =
      app.add_subcommand("sweep-beta", "two-spin step coupling, 20 temperatures");
  add_common(sweep, &opts);

  CLI::App* gc = app.add_subcommand(
      "grad-check", "finite-difference gradient verification");
  gc->add_option("--trials", trials, "trials per architecture");
  add_common(gc, &opts);

  CLI::App* replay =
      app.add_subcommand("replay", "replay a schedule csv and print metrics");
  replay->add_option("schedule", schedule_path, "schedule csv path")
      ->required();
  add_common(replay, &opts);

  CLI::App* rs = app.add_subcommand("random-search",
                                    "best-of-N uniform random schedules");
  rs->add_option("--samples", samples, "number of random schedules");
  add_common(rs, &opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      ExperimentKind kind = experiment_from_string(experiment_name);
      if (!opts.config_path.empty() && !train->count("--experiment")) {
        Config file = Config::from_file(opts.config_path);
        if (file.has("experiment"))
          kind = experiment_from_string(file.get_string("experiment", ""));
      }
      return run_kind(kind, opts);
    }
    if (free_cmd->parsed()) return run_kind(ExperimentKind::FreeRun, opts);
    if (sweep->parsed()) return run_kind(ExperimentKind::BetaSweep, opts);
    if (gc->parsed()) {
      ExperimentConfig cfg = resolve_config(ExperimentKind::GradCheck, opts);
      if (trials > 0) cfg.grad_trials = trials;
      const std::vector<RunRecord> records = run_experiment(cfg);
      print_records(cfg, records);
      return 0;
    }
    if (replay->parsed()) return run_replay(schedule_path, opts);
    if (rs->parsed()) {
      ExperimentConfig cfg = resolve_config(ExperimentKind::RandomSearch, opts);
      if (samples > 0) cfg.random_samples = samples;
      const std::vector<RunRecord> records = run_experiment(cfg);
      print_records(cfg, records);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
