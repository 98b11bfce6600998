#pragma once

#include <string>
#include <vector>

#include "spinrl/experiment.hpp"

namespace spinrl {

// 17 significant digits, enough to round-trip a 64-bit float through text.
std::string format_g17(double v);

void ensure_dir(const std::string& dir);

// history_<seed>.csv: epoch, mean_reward, reward_std, epsilon.
void write_history_csv(const std::string& dir, const RunRecord& record);

// schedule_<seed>.csv: t, f at each left endpoint plus a final (tau, 0)
// row, so the grid is fully recoverable from the file.
void write_schedule_csv(const std::string& dir, const RunRecord& record,
                        double tau);

ControlSchedule read_schedule_csv(const std::string& path);

void write_summary_json(const std::string& dir, const ExperimentConfig& cfg,
                        const std::vector<RunRecord>& records);

// Free vs optimized comparison, one row per run:
// variant, sigma_free/beta, sigma_opt/beta, dU_free, dU_opt, E_in.
void write_report_txt(const std::string& dir,
                      const std::vector<RunRecord>& records);

// All of the above for one finished experiment.
void emit_outputs(const ExperimentConfig& cfg,
                  const std::vector<RunRecord>& records);

}  // namespace spinrl
