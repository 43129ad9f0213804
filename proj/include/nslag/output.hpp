#pragma once

#include "nslag/diagnostics.hpp"
#include "nslag/stationary.hpp"

#include <string>
#include <vector>

namespace nslag {

/// Shortest-exact float formatting used by every writer: 17 significant
/// digits, C locale, no trailing whitespace.
std::string fmt_g17(double v);

void write_series_csv(const std::string& path,
                      const std::vector<DiagRecord>& records,
                      const std::vector<double>& q_list, int stride);

void write_profile_csv(const std::string& path, const State& s, const Grid& grid);

void write_steady_csv(const std::string& path, const SteadyProfile& profile,
                      const Grid& grid, const StationaryPressure& ps);

struct SweepRow {
    int index = 0;
    double value = 0.0;
    std::string dir;
    std::string status;       // completed | failed
    std::string stop_reason;
    long steps = 0;
    double final_volume = 0.0;
    double final_v_l2 = 0.0;
    double final_dtheta_l2 = 0.0;
    double final_dp_l2 = 0.0;
    double eta_min = 0.0;
    double eta_max = 0.0;
};

void write_sweep_index(const std::string& path, const std::vector<SweepRow>& rows);

} // namespace nslag
