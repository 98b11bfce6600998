#include "spinrl/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spinrl {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + dir + ": " +
                             ec.message());
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

nlohmann::json json_num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

struct Stat {
  double mean = 0.0;
  double std = 0.0;
  int count = 0;
};

Stat aggregate(const std::vector<RunRecord>& records,
               double RunRecord::* field) {
  Stat st;
  double sum = 0.0;
  for (const RunRecord& r : records) {
    const double v = r.*field;
    if (!std::isfinite(v)) continue;
    sum += v;
    ++st.count;
  }
  if (st.count == 0) return st;
  st.mean = sum / st.count;
  if (st.count > 1) {
    double acc = 0.0;
    for (const RunRecord& r : records) {
      const double v = r.*field;
      if (!std::isfinite(v)) continue;
      acc += (v - st.mean) * (v - st.mean);
    }
    st.std = std::sqrt(acc / (st.count - 1));
  }
  return st;
}

nlohmann::json stat_json(const Stat& st) {
  return {{"mean", json_num(st.count ? st.mean : kNan)},
          {"std", json_num(st.count ? st.std : kNan)},
          {"count", st.count}};
}

}  // namespace

void write_history_csv(const std::string& dir, const RunRecord& record) {
  std::ofstream out = open_out(dir + "/history_" +
                               std::to_string(record.seed) + ".csv");
  out << "epoch,mean_reward,reward_std,epsilon\n";
  for (std::size_t e = 0; e < record.history.size(); ++e) {
    const EpochStats& s = record.history[e];
    out << e << "," << format_g17(s.mean_reward) << ","
        << format_g17(s.reward_std) << "," << format_g17(s.epsilon) << "\n";
  }
}

void write_schedule_csv(const std::string& dir, const RunRecord& record,
                        double tau) {
  if (record.best_schedule.empty()) return;
  std::ofstream out = open_out(dir + "/schedule_" +
                               std::to_string(record.seed) + ".csv");
  out << "t,f\n";
  const int n = static_cast<int>(record.best_schedule.size());
  const double dt = tau / n;
  for (int i = 0; i < n; ++i)
    out << format_g17(i * dt) << "," << format_g17(record.best_schedule[i])
        << "\n";
  out << format_g17(tau) << "," << format_g17(0.0) << "\n";
}

ControlSchedule read_schedule_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "t,f")
    throw std::runtime_error(path + ": expected header `t,f`");
  std::vector<double> times, values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected `t,f`");
    times.push_back(std::stod(line.substr(0, comma)));
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (times.size() < 2)
    throw std::runtime_error(path + ": need at least one interval");
  ControlSchedule schedule;
  schedule.tau = times.back();
  schedule.n_steps = static_cast<int>(times.size()) - 1;
  values.pop_back();  // the trailing (tau, 0) marker row
  schedule.values = std::move(values);
  validate(schedule);
  return schedule;
}

void write_report_txt(const std::string& dir,
                      const std::vector<RunRecord>& records) {
  std::ofstream out = open_out(dir + "/report.txt");
  out << "variant sigma_free/beta sigma_opt/beta dU_free dU_opt E_in\n";
  char buf[256];
  for (const RunRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%s %.6f %.6f %.6f %.6f %.6f\n",
                  r.label.c_str(), r.free_thermo.sigma / r.free_thermo.beta,
                  r.opt_thermo.sigma / r.opt_thermo.beta,
                  r.free_thermo.delta_u, r.opt_thermo.delta_u,
                  r.opt_thermo.e_in);
    out << buf;
  }
}

void write_summary_json(const std::string& dir, const ExperimentConfig& cfg,
                        const std::vector<RunRecord>& records) {
  nlohmann::json j;
  j["experiment"] = to_string(cfg.experiment);
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  j["config_hash"] = hash_buf;
  j["eta"] = cfg.policy.eta;
  j["canonical_config"] = canonical_text(cfg);

  nlohmann::json runs = nlohmann::json::array();
  for (const RunRecord& r : records) {
    nlohmann::json run;
    run["seed"] = r.seed;
    run["label"] = r.label;
    run["beta"] = r.beta;
    run["eta"] = r.eta;
    run["sigma_free"] = json_num(r.free_thermo.sigma);
    run["sigma_opt"] = json_num(r.opt_thermo.sigma);
    run["sigma_opt_det"] = json_num(r.det_thermo.sigma);
    run["delta_u_free"] = json_num(r.free_thermo.delta_u);
    run["delta_u_opt"] = json_num(r.opt_thermo.delta_u);
    run["delta_f"] = json_num(r.free_thermo.delta_f);
    run["e_in"] = json_num(r.opt_thermo.e_in);
    run["delta_sigma"] = json_num(r.delta_sigma);
    run["delta_sigma_det"] = json_num(r.delta_sigma_det);
    run["delta_w"] = json_num(r.delta_w);
    run["fidelity"] = json_num(r.fidelity);
    run["reward_best"] = json_num(r.reward_best);
    run["reward_det"] = json_num(r.reward_det);
    run["grad_max_rel_dense"] = json_num(r.grad_max_rel_dense);
    run["grad_max_rel_lstm"] = json_num(r.grad_max_rel_lstm);
    run["wall_seconds"] = r.wall_seconds;
    run["timed_out"] = r.timed_out;
    run["epochs_recorded"] = r.history.size();
    runs.push_back(std::move(run));
  }
  j["runs"] = std::move(runs);

  j["aggregate"] = {
      {"delta_sigma", stat_json(aggregate(records, &RunRecord::delta_sigma))},
      {"delta_sigma_det",
       stat_json(aggregate(records, &RunRecord::delta_sigma_det))},
      {"delta_w", stat_json(aggregate(records, &RunRecord::delta_w))},
      {"fidelity", stat_json(aggregate(records, &RunRecord::fidelity))},
      {"reward_det", stat_json(aggregate(records, &RunRecord::reward_det))},
  };

  std::ofstream out = open_out(dir + "/summary.json");
  out << j.dump(2) << "\n";
}

void emit_outputs(const ExperimentConfig& cfg,
                  const std::vector<RunRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("emit_outputs: no records to write");
  ensure_dir(cfg.output_dir);
  for (const RunRecord& r : records) {
    if (!r.history.empty()) write_history_csv(cfg.output_dir, r);
    write_schedule_csv(cfg.output_dir, r, cfg.system.tau);
  }
  write_summary_json(cfg.output_dir, cfg, records);
  write_report_txt(cfg.output_dir, records);
}

}  // namespace spinrl
