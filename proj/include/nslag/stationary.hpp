#pragma once

#include "nslag/diagnostics.hpp"
#include "nslag/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nslag {

/// Roots of p(eta, theta_gamma) = c inside a bracket, sorted ascending.
struct RootSet {
    double level = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::vector<double> roots;
    std::vector<double> residuals;  // |p(root) - c|
    std::vector<std::string> warnings;
};

/// Sign-change scan on a dense log-spaced grid followed by bisection.
/// Tangencies (sign touch without crossing) become warnings, not roots.
/// An empty root set is a valid result.
RootSet find_roots(const EosSpec& eos, double theta_gamma, double level,
                   double lo, double hi, double root_tol = 1e-12,
                   int scan_samples = 4096);

struct CellSteady {
    RootSet roots;
    std::optional<double> selected;  // nearest root after classification
    double eta_final = 0.0;
    double distance = 0.0;    // |eta_final - selected|
    double p_residual = 0.0;  // |p(eta_final, theta_gamma) - level|
};

struct SteadyProfile {
    std::vector<CellSteady> cells;
    bool classified = false;
    bool mixed_phase = false;  // at least two distinct roots selected
    std::vector<int> empty_cells;  // cells whose level has no root
};

/// Per-cell root sets at level p_S(x_i). Selection fields stay empty.
SteadyProfile steady_profile(const Problem& prob, double bracket_lo,
                             double bracket_hi, double root_tol = 1e-12,
                             int scan_samples = 4096);

/// Fills the selection: per cell the nearest root to the final eta,
/// with distance and pressure residual; flags a mixed-phase limit.
/// Cells with an empty root set are recorded in empty_cells.
void classify_limit(SteadyProfile& profile, const State& final_state,
                    const EosSpec& eos, double theta_gamma);

struct StabilizationThresholds {
    double v_l2 = 1e-3;
    double dtheta_l2 = 1e-3;
    double dp_l2 = 1e-3;
    double dwell = 0.0;  // required duration below threshold
};

struct FirstPassage {
    std::optional<double> v;
    std::optional<double> dtheta;
    std::optional<double> dp;
};

/// Earliest time after which each monitored norm stays below its
/// threshold for the dwell window (the window must fit inside the
/// recorded trajectory); absent when that never happens.
FirstPassage convergence_metrics(const std::vector<DiagRecord>& trajectory,
                                 const StabilizationThresholds& thresholds);

} // namespace nslag
