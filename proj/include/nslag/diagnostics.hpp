#pragma once

#include "nslag/solver.hpp"

#include <vector>

namespace nslag {

/// Everything the long-time theory constrains, sampled at one instant.
struct DiagRecord {
    double t = 0.0;
    double dt = 0.0;
    int sweeps = 0;
    double energy = 0.0;       // Lyapunov functional
    double dissipation = 0.0;  // its decay rate, nonnegative
    double volume = 0.0;
    double eta_min = 0.0;
    double eta_max = 0.0;
    double v_l2 = 0.0;
    double v2_l2 = 0.0;
    double dtheta_l2 = 0.0;  // ||theta - theta_gamma||
    double dp_l2 = 0.0;      // ||p - p_S||
    double v_l4 = 0.0;
    double v_linf = 0.0;
    std::vector<double> v_lq;  // one entry per configured q
    double balance_residual = 0.0;
    double v_integral = 0.0;      // integral of v dm (momentum indicator)
    double eta_first_cell = 0.0;  // free-end watch for borderline runs
};

/// Kinetic energy + temperature relative entropy + (p_S eta - P(eta,
/// theta_gamma)) integrated by midpoint rule; v^2 at cells is the mean
/// of the adjacent node squares. The additive constant is fixed to 0.
double lyapunov_energy(const State& s, const EosSpec& eos, const Grid& grid,
                       const StationaryPressure& ps, double theta_gamma);

/// theta_gamma * integral(nu rho v_x^2/theta + kappa rho theta_x^2/theta^2),
/// assembled with the same stencils as derived(); the Dirichlet face
/// contributes over its half cell.
double dissipation_rate(const State& s, const EosSpec& eos, const DomainSpec& dom,
                        const Grid& grid);

/// Defect of the discrete total-energy identity over one step, with
/// boundary work, heat loss, and gravity power evaluated at the next
/// time level: d(K+E) - dt (-p_gamma v_n - pi_0 + sum m_j g_j v_j).
double energy_balance_residual(const State& prev, const State& next,
                               const Problem& prob, double dt);

struct NormSet {
    double v_l2 = 0.0;
    double v2_l2 = 0.0;
    double dtheta_l2 = 0.0;
    double dp_l2 = 0.0;
    double v_l4 = 0.0;
    double v_linf = 0.0;
    std::vector<double> v_lq;
    double volume = 0.0;
    double eta_min = 0.0;
    double eta_max = 0.0;
    double v_integral = 0.0;
};

NormSet norms(const State& s, const EosSpec& eos, const Grid& grid,
              const StationaryPressure& ps, double theta_gamma,
              const std::vector<double>& q_list);

DiagRecord diagnose(const State& s, const Problem& prob,
                    const std::vector<double>& q_list, double dt, int sweeps,
                    double balance_residual);

} // namespace nslag
