#pragma once

#include "nslag/domain.hpp"
#include "nslag/eos.hpp"
#include "nslag/state.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace nslag {

/// Immutable per-run bundle: the law, the domain, the grid, the
/// stationary pressure profile, and body-force samples at nodes.
struct Problem {
    EosSpec eos;
    DomainSpec domain;
    Grid grid;
    StationaryPressure ps;
    std::vector<double> g_node;  // g at nodes 0..n
};

Problem build_problem(EosSpec eos, DomainSpec domain);

struct StepParams {
    double dt = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 0.05;
    double picard_tol = 1e-10;
    int picard_max = 25;
    double positivity_floor = 0.25;  // admissible fraction of the old field
};

struct StepOutcome {
    bool accepted = false;
    int sweeps = 0;
    double dt_used = 0.0;
    double max_change = 0.0;  // relative change of the full state over the step
    int positivity_retries = 0;
    int contraction_violations = 0;
};

struct StepResult {
    State state;
    StepOutcome outcome;
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& m) : std::runtime_error(m) {}
};

/// Backward-Euler temperature solve, implicit in theta. Conduction
/// coefficients are frozen at `frozen`; the p1*theta work term enters
/// the diagonal so the system stays solvable for either sign of p1*v_x.
/// `base` supplies the old-time temperatures. Throws SolverError when
/// the diagonal loses positivity (dt too large). `extra_source` adds a
/// per-cell heat source (used by manufactured-solution studies).
std::vector<double> solve_temperature(const State& base, const State& frozen,
                                      std::span<const double> v_new,
                                      const Problem& prob, double dt,
                                      std::span<const double> extra_source = {});

inline std::vector<double> solve_temperature(const State& frozen,
                                             std::span<const double> v_new,
                                             const Problem& prob, double dt) {
    return solve_temperature(frozen, frozen, v_new, prob, dt);
}

/// Backward-Euler velocity solve, implicit through the viscous term,
/// with pressure from the frozen eta and the given new temperatures.
/// Node 0 is pinned; node n balances against the ghost stress -p_gamma
/// over its half mass.
std::vector<double> solve_velocity(const State& base, const State& frozen,
                                   std::span<const double> theta_new,
                                   const Problem& prob, double dt);

inline std::vector<double> solve_velocity(const State& frozen,
                                          std::span<const double> theta_new,
                                          const Problem& prob, double dt) {
    return solve_velocity(frozen, frozen, theta_new, prob, dt);
}

/// Exact discrete continuity: eta_i += dt * (v_i - v_{i-1}) / dm.
std::vector<double> update_specific_volume(std::span<const double> eta_old,
                                           std::span<const double> v_new,
                                           double dt, const Grid& grid);

/// One adaptive step: the three solves are Picard-iterated with frozen
/// coefficients refreshed from the latest iterate until the relative
/// max-norm change drops below picard_tol. Positivity failure or sweep
/// exhaustion halves dt and retries; an easy step (<= 2 sweeps) grows
/// dt by 1.2 up to dt_max. Returns accepted=false only when dt would
/// fall below dt_min.
StepResult step(const State& state, const Problem& prob, StepParams& params);

/// Forward-Euler oracle using the same spatial operators as derived():
/// eta from old v_x, v from old stresses (half mass at node n), and the
/// internal energy advanced conservatively, theta recovered from it.
/// Requires dt <= explicit_stable_dt(state, prob).
State explicit_oracle_step(const State& state, const Problem& prob, double dt);

/// Row-sum stability bound for the explicit oracle:
///   dt = 0.9 / max(rate), where for cell i the heat rate is
///   (A_{i-1} + A_i) / (cV dm) with face conductance A = kappa/(etabar dm)
///   (doubled on the half-width Dirichlet face), and for node j the
///   viscous rate is nu (1/eta_j + 1/eta_{j+1}) / dm^2 (half mass at n).
double explicit_stable_dt(const State& state, const Problem& prob);

} // namespace nslag
