#include "nslag/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nslag {

double lyapunov_energy(const State& s, const EosSpec& eos, const Grid& grid,
                       const StationaryPressure& ps, double theta_gamma) {
    check_positive(s);
    const int n = grid.n;
    const double dm = grid.dm;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double v2 = 0.5 * (s.v[k] * s.v[k] + s.v[k + 1] * s.v[k + 1]);
        const double a = s.theta[k] / theta_gamma;
        const double rel_entropy = eos.cV * theta_gamma * (a - std::log(a));
        const double potential = ps.cell_values[k] * s.eta[k] -
                                 (eos.P0(s.eta[k]) + eos.P1(s.eta[k]) * theta_gamma);
        sum += (0.5 * v2 + rel_entropy + potential) * dm;
    }
    return sum;
}

double dissipation_rate(const State& s, const EosSpec& eos, const DomainSpec& dom,
                        const Grid& grid) {
    check_positive(s);
    const int n = grid.n;
    const double dm = grid.dm;
    const double th_g = dom.theta_gamma;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double vx = (s.v[k + 1] - s.v[k]) / dm;
        sum += eos.nu * vx * vx / (s.eta[k] * s.theta[k]) * dm;
    }
    // heat term on interior faces plus the half-width Dirichlet face
    {
        const double thf = 0.5 * (s.theta[0] + th_g);
        const double tx = (s.theta[0] - th_g) / (0.5 * dm);
        sum += eos.kappa(s.eta[0], thf) * (1.0 / s.eta[0]) * tx * tx / (thf * thf) * (0.5 * dm);
    }
    for (int j = 1; j < n; ++j) {
        const size_t k = static_cast<size_t>(j);
        const double etab = 0.5 * (s.eta[k - 1] + s.eta[k]);
        const double thb = 0.5 * (s.theta[k - 1] + s.theta[k]);
        const double tx = (s.theta[k] - s.theta[k - 1]) / dm;
        sum += eos.kappa(etab, thb) * (1.0 / etab) * tx * tx / (thb * thb) * dm;
    }
    return th_g * sum;
}

namespace {

// total energy: node-mass kinetic part (half mass at both ends; node 0
// carries v=0) plus internal energy over cells
double total_energy(const State& s, const EosSpec& eos, const Grid& grid) {
    const int n = grid.n;
    const double dm = grid.dm;
    double sum = 0.0;
    for (int j = 1; j <= n; ++j) {
        const size_t k = static_cast<size_t>(j);
        const double m = (j == n) ? 0.5 * dm : dm;
        sum += 0.5 * m * s.v[k] * s.v[k];
    }
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        sum += (-eos.P0(s.eta[k]) + eos.cV * s.theta[k]) * dm;
    }
    return sum;
}

} // namespace

double energy_balance_residual(const State& prev, const State& next,
                               const Problem& prob, double dt) {
    const int n = prob.grid.n;
    const double dm = prob.grid.dm;
    const auto f = derived(next, prob.eos, prob.domain, prob.grid);

    double gravity_power = 0.0;
    for (int j = 1; j <= n; ++j) {
        const size_t k = static_cast<size_t>(j);
        const double m = (j == n) ? 0.5 * dm : dm;
        gravity_power += m * prob.g_node[k] * next.v[k];
    }
    const double rhs = -prob.domain.p_gamma * next.v[static_cast<size_t>(n)] - f.pi[0] +
                       gravity_power;
    return total_energy(next, prob.eos, prob.grid) -
           total_energy(prev, prob.eos, prob.grid) - dt * rhs;
}

NormSet norms(const State& s, const EosSpec& eos, const Grid& grid,
              const StationaryPressure& ps, double theta_gamma,
              const std::vector<double>& q_list) {
    const int n = grid.n;
    const double dm = grid.dm;
    NormSet out;
    out.v_lq.assign(q_list.size(), 0.0);
    out.eta_min = s.eta[0];
    out.eta_max = s.eta[0];

    double v2 = 0.0, v4 = 0.0, dth2 = 0.0, dp2 = 0.0, vol = 0.0, vint = 0.0;
    std::vector<double> vq(q_list.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double a = s.v[k], b = s.v[k + 1];
        v2 += 0.5 * (a * a + b * b) * dm;
        v4 += 0.5 * (a * a * a * a + b * b * b * b) * dm;
        for (size_t q = 0; q < q_list.size(); ++q)
            vq[q] += 0.5 * (std::pow(std::abs(a), q_list[q]) +
                            std::pow(std::abs(b), q_list[q])) * dm;
        const double dth = s.theta[k] - theta_gamma;
        dth2 += dth * dth * dm;
        const double dp = pressure(eos, s.eta[k], s.theta[k]) - ps.cell_values[k];
        dp2 += dp * dp * dm;
        vol += s.eta[k] * dm;
        out.eta_min = std::min(out.eta_min, s.eta[k]);
        out.eta_max = std::max(out.eta_max, s.eta[k]);
    }
    for (int j = 1; j <= n; ++j) {
        const size_t k = static_cast<size_t>(j);
        vint += ((j == n) ? 0.5 * dm : dm) * s.v[k];
        out.v_linf = std::max(out.v_linf, std::abs(s.v[k]));
    }
    out.v_l2 = std::sqrt(v2);
    out.v2_l2 = std::sqrt(v4);
    out.v_l4 = std::pow(v4, 0.25);
    out.dtheta_l2 = std::sqrt(dth2);
    out.dp_l2 = std::sqrt(dp2);
    out.volume = vol;
    out.v_integral = vint;
    for (size_t q = 0; q < q_list.size(); ++q) {
        if (std::isinf(q_list[q]))
            out.v_lq[q] = out.v_linf;
        else
            out.v_lq[q] = std::pow(vq[q], 1.0 / q_list[q]);
    }
    return out;
}

DiagRecord diagnose(const State& s, const Problem& prob,
                    const std::vector<double>& q_list, double dt, int sweeps,
                    double balance_residual) {
    DiagRecord r;
    r.t = s.t;
    r.dt = dt;
    r.sweeps = sweeps;
    r.energy = lyapunov_energy(s, prob.eos, prob.grid, prob.ps, prob.domain.theta_gamma);
    r.dissipation = dissipation_rate(s, prob.eos, prob.domain, prob.grid);
    const NormSet ns = norms(s, prob.eos, prob.grid, prob.ps, prob.domain.theta_gamma, q_list);
    r.volume = ns.volume;
    r.eta_min = ns.eta_min;
    r.eta_max = ns.eta_max;
    r.v_l2 = ns.v_l2;
    r.v2_l2 = ns.v2_l2;
    r.dtheta_l2 = ns.dtheta_l2;
    r.dp_l2 = ns.dp_l2;
    r.v_l4 = ns.v_l4;
    r.v_linf = ns.v_linf;
    r.v_lq = ns.v_lq;
    r.balance_residual = balance_residual;
    r.v_integral = ns.v_integral;
    r.eta_first_cell = s.eta[0];
    return r;
}

} // namespace nslag
