#pragma once

#include "nslag/domain.hpp"
#include "nslag/eos.hpp"
#include "nslag/expr.hpp"
#include "nslag/solver.hpp"
#include "nslag/state.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nslag {

/// Parse or validation failure; carries every collected message.
struct ConfigError : std::runtime_error {
    std::vector<std::string> issues;
    explicit ConfigError(std::vector<std::string> list)
        : std::runtime_error(join(list)), issues(std::move(list)) {}
    static std::string join(const std::vector<std::string>& list);
};

struct EosConfig {
    std::string builtin;  // "nuc1" | "tve1" | empty for expression set
    std::string family;   // "nuclear" | "thermoviscoelastic"
    std::string P0, P1, p0, p1;  // expressions in x (= eta)
    std::string kappa = "1";     // expression in x (= eta) and theta
    double cV = 1.0, nu = 1.0;
    double kappa_lo = 1.0, kappa_hi = 1.0;
    double eta_check = 0.0, eta_hat = 0.0;
    double eta_min = 1e-8, eta_max = 1e12;
};

struct DomainConfig {
    double M = 1.0;
    int n = 0;
    double p_gamma = 0.0;
    double theta_gamma = 0.0;
    std::string g = "0";           // expression in x (and M)
    std::vector<double> g_table;   // alternative: piecewise-constant table
};

struct InitialConfig {
    std::string eta0, v0, theta0;  // expressions in x (and M)
    double theta_compat_tol = 1e-9;
};

struct SolverConfig {
    double dt_init = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 0.05;
    double picard_tol = 1e-10;
    int picard_max = 25;
    double positivity_floor = 0.25;
    double t_end = 0.0;
};

struct DiagnosticsConfig {
    std::vector<double> q_list;
    double v_threshold = 1e-3;
    double theta_threshold = 1e-3;
    double p_threshold = 1e-3;
    double dwell_fraction = 0.1;
    bool stop_on_stabilization = true;
};

struct OutputConfig {
    int stride = 1;
    std::vector<double> snapshot_times;
};

struct ValidationConfig {
    bool allow_nonpositive_ps = false;  // opt-out for expansion scenarios
    double ps_floor = 1e-8;
    ValidateOptions eos_opts;
    double nondegeneracy_window = 0.05;
    double nondegeneracy_flat_tol = 1e-9;
};

struct StationaryConfig {
    double bracket_lo = 0.0;  // 0 = derive from initial data
    double bracket_hi = 0.0;
    double root_tol = 1e-12;
    double residual_tol = 1e-9;
    double class_tol = 1e-2;
    int scan_samples = 4096;
};

struct RunConfig {
    EosConfig eos;
    DomainConfig domain;
    InitialConfig initial;
    SolverConfig solver;
    DiagnosticsConfig diagnostics;
    OutputConfig output;
    ValidationConfig validation;
    StationaryConfig stationary;
};

/// Reads and fully validates a config file (flat-sectioned key/value,
/// TOML-compatible subset). All violations are collected and reported
/// together in one ConfigError.
RunConfig parse_config(const std::string& path);

/// Parse from an in-memory string; `origin` labels error messages.
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Semantic validation of an already-populated config (also runs the
/// admissible-data cross-checks against the stationary pressure).
void validate_config(const RunConfig& cfg);

EosSpec build_eos(const RunConfig& cfg);
DomainSpec build_domain(const RunConfig& cfg);
Problem build_problem(const RunConfig& cfg);
InitialProfiles build_initial(const RunConfig& cfg);

/// Default root-search bracket: [min eta0/10, max eta0*10] sampled on
/// the grid, unless fixed in [stationary].
std::pair<double, double> root_bracket(const RunConfig& cfg, const Problem& prob);

struct ScenarioPreset {
    std::string name;
    std::string file;  // absolute path
    std::string expectation;
};

/// The shipped scenario presets S1..S5.
std::vector<ScenarioPreset> scenario_presets();
std::string preset_path(const std::string& name);

} // namespace nslag
