#pragma once

#include "nslag/config.hpp"
#include "nslag/diagnostics.hpp"
#include "nslag/stationary.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nslag {

enum class StopReason { reached_t_end, stabilized, step_failure };

const char* to_string(StopReason r);

struct RunResult {
    State final_state;
    std::vector<DiagRecord> trajectory;  // one record per accepted step
    std::vector<std::pair<double, State>> snapshots;  // (requested time, state)
    StopReason stop_reason = StopReason::reached_t_end;
    long steps = 0;
    long positivity_retries = 0;
    long contraction_violations = 0;
    std::vector<std::string> init_warnings;
};

/// Integrates from t = 0 until t_end or until the stabilization rule
/// fires: all of ||v||, ||theta - theta_gamma||, ||p - p_S|| (L2) below
/// their thresholds for dwell_fraction of the elapsed time.
RunResult run(const RunConfig& cfg);

/// Full simulate command: run + series.csv, profile_t*.csv, steady.csv,
/// summary.txt under out_dir. Returns 0 on normal termination, 2 on
/// fatal step failure (partial outputs are still written).
int simulate_to_dir(const RunConfig& cfg, const std::string& out_dir,
                    RunResult* result_out = nullptr);

/// Overrides a numeric config key given as "section.key".
void apply_axis_override(RunConfig& cfg, const std::string& axis, double value);

/// One simulate per value, in parallel, each in its own subdirectory;
/// rows land in input order. jobs <= 0 picks hardware concurrency
/// (capped by NSLAG_SWEEP_JOBS when set). Returns 0 when every run
/// completed, 2 otherwise.
int run_sweep(const RunConfig& base, const std::string& axis,
              const std::vector<double>& values, const std::string& out_dir,
              int jobs = 0);

} // namespace nslag
