#include "nslag/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nslag {

namespace {

// Thomas algorithm; diagonals are overwritten. No pivoting: every system
// assembled here is strictly diagonally dominant when accepted.
void solve_tridiag(std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper, std::vector<double>& rhs,
                   std::vector<double>& x) {
    const size_t m = diag.size();
    for (size_t i = 1; i < m; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    x.resize(m);
    x[m - 1] = rhs[m - 1] / diag[m - 1];
    for (size_t i = m - 1; i-- > 0;)
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double state_scale(const State& s) {
    return std::max({max_abs(s.eta), max_abs(s.theta), max_abs(s.v), 1e-300});
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Face conductances kappa/(etabar dm) frozen at the given state;
// index j = 0..n with the Dirichlet half face at 0 and zero flux at n.
std::vector<double> face_conductance(const State& frozen, const Problem& prob) {
    const int n = prob.grid.n;
    const double dm = prob.grid.dm;
    std::vector<double> A(static_cast<size_t>(n) + 1);
    A[0] = prob.eos.kappa(frozen.eta[0], 0.5 * (frozen.theta[0] + prob.domain.theta_gamma)) /
           (frozen.eta[0] * 0.5 * dm);
    for (int j = 1; j < n; ++j) {
        const size_t k = static_cast<size_t>(j);
        const double etab = 0.5 * (frozen.eta[k - 1] + frozen.eta[k]);
        const double thb = 0.5 * (frozen.theta[k - 1] + frozen.theta[k]);
        A[k] = prob.eos.kappa(etab, thb) / (etab * dm);
    }
    A[static_cast<size_t>(n)] = 0.0;
    return A;
}

} // namespace

Problem build_problem(EosSpec eos, DomainSpec domain) {
    check_domain(domain);
    Problem p;
    p.eos = std::move(eos);
    p.domain = std::move(domain);
    p.grid = build_grid(p.domain);
    p.ps = stationary_pressure(p.domain, p.grid);
    p.g_node.resize(static_cast<size_t>(p.grid.n) + 1);
    for (int j = 0; j <= p.grid.n; ++j)
        p.g_node[static_cast<size_t>(j)] = gravity_at(p.domain, p.grid.nodes[static_cast<size_t>(j)]);
    return p;
}

std::vector<double> solve_temperature(const State& base, const State& frozen,
                                      std::span<const double> v_new,
                                      const Problem& prob, double dt,
                                      std::span<const double> extra_source) {
    const int n = prob.grid.n;
    const double dm = prob.grid.dm;
    const double cV = prob.eos.cV;
    const auto A = face_conductance(frozen, prob);

    std::vector<double> lower(static_cast<size_t>(n), 0.0);
    std::vector<double> diag(static_cast<size_t>(n), 0.0);
    std::vector<double> upper(static_cast<size_t>(n), 0.0);
    std::vector<double> rhs(static_cast<size_t>(n), 0.0);

    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double vx = (v_new[k + 1] - v_new[k]) / dm;
        const double work_coef = prob.eos.p1(frozen.eta[k]) * vx;
        // implicit reaction term must not defeat the time term
        if (cV / dt + work_coef <= 1e-8 * cV / dt)
            throw SolverError("temperature solve lost diagonal dominance (dt too large)");
        diag[k] = cV / dt + (A[k] + A[k + 1]) / dm + work_coef;
        if (i > 0) lower[k] = -A[k] / dm;
        if (i < n - 1) upper[k] = -A[k + 1] / dm;
        rhs[k] = cV * base.theta[k] / dt + prob.eos.nu * vx * vx / frozen.eta[k];
        if (!extra_source.empty()) rhs[k] += extra_source[k];
    }
    rhs[0] += A[0] * prob.domain.theta_gamma / dm;

    std::vector<double> theta;
    solve_tridiag(lower, diag, upper, rhs, theta);
    return theta;
}

std::vector<double> solve_velocity(const State& base, const State& frozen,
                                   std::span<const double> theta_new,
                                   const Problem& prob, double dt) {
    const int n = prob.grid.n;
    const double dm = prob.grid.dm;
    const double nu = prob.eos.nu;

    // cell pressures with frozen eta and the fresh temperatures
    std::vector<double> p(static_cast<size_t>(n));
    std::vector<double> w(static_cast<size_t>(n));  // nu/(dm^2 eta)
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        p[k] = prob.eos.p0(frozen.eta[k]) + prob.eos.p1(frozen.eta[k]) * theta_new[k];
        w[k] = nu / (dm * dm * frozen.eta[k]);
    }

    // unknowns v_1..v_n
    std::vector<double> lower(static_cast<size_t>(n), 0.0);
    std::vector<double> diag(static_cast<size_t>(n), 0.0);
    std::vector<double> upper(static_cast<size_t>(n), 0.0);
    std::vector<double> rhs(static_cast<size_t>(n), 0.0);

    for (int j = 1; j < n; ++j) {
        const size_t k = static_cast<size_t>(j - 1);
        diag[k] = 1.0 / dt + w[k] + w[k + 1];
        if (j > 1) lower[k] = -w[k];  // v_0 term vanishes for j = 1
        upper[k] = -w[k + 1];
        rhs[k] = base.v[static_cast<size_t>(j)] / dt - (p[k + 1] - p[k]) / dm +
                 prob.g_node[static_cast<size_t>(j)];
    }
    {
        // free node: ghost stress -p_gamma over the half mass dm/2
        const size_t k = static_cast<size_t>(n - 1);
        diag[k] = 1.0 / dt + 2.0 * w[k];
        lower[k] = -2.0 * w[k];
        rhs[k] = base.v[static_cast<size_t>(n)] / dt +
                 2.0 * (p[k] - prob.domain.p_gamma) / dm +
                 prob.g_node[static_cast<size_t>(n)];
    }

    std::vector<double> vi;
    solve_tridiag(lower, diag, upper, rhs, vi);
    std::vector<double> v(static_cast<size_t>(n) + 1);
    v[0] = 0.0;
    std::copy(vi.begin(), vi.end(), v.begin() + 1);
    return v;
}

std::vector<double> update_specific_volume(std::span<const double> eta_old,
                                           std::span<const double> v_new,
                                           double dt, const Grid& grid) {
    std::vector<double> eta(eta_old.size());
    for (size_t i = 0; i < eta_old.size(); ++i)
        eta[i] = eta_old[i] + dt * (v_new[i + 1] - v_new[i]) / grid.dm;
    return eta;
}

StepResult step(const State& state, const Problem& prob, StepParams& params) {
    const int n = prob.grid.n;
    const double scale = state_scale(state);
    double dt = params.dt;
    int halvings = 0;

    while (dt >= params.dt_min) {
        bool failed = false;
        int sweeps = 0;
        int violations = 0;
        State iterate = state;
        bool converged = false;

        try {
            double prev_change = std::numeric_limits<double>::infinity();
            for (sweeps = 1; sweeps <= params.picard_max; ++sweeps) {
                auto theta = solve_temperature(state, iterate, iterate.v, prob, dt);
                auto v = solve_velocity(state, iterate, theta, prob, dt);
                auto eta = update_specific_volume(state.eta, v, dt, prob.grid);
                if (!all_finite(theta) || !all_finite(v) || !all_finite(eta)) {
                    failed = true;
                    break;
                }
                double change = 0.0;
                for (int i = 0; i < n; ++i) {
                    const size_t k = static_cast<size_t>(i);
                    change = std::max(change, std::abs(eta[k] - iterate.eta[k]));
                    change = std::max(change, std::abs(theta[k] - iterate.theta[k]));
                }
                for (int j = 0; j <= n; ++j) {
                    const size_t k = static_cast<size_t>(j);
                    change = std::max(change, std::abs(v[k] - iterate.v[k]));
                }
                change /= scale;
                iterate.eta = std::move(eta);
                iterate.theta = std::move(theta);
                iterate.v = std::move(v);
                if (change > prev_change * (1.0 + 1e-6) && change > 1e-13)
                    ++violations;
                prev_change = change;
                if (change < params.picard_tol) {
                    converged = true;
                    break;
                }
            }
        } catch (const SolverError&) {
            failed = true;
        }

        if (!failed && converged) {
            for (int i = 0; i < n && !failed; ++i) {
                const size_t k = static_cast<size_t>(i);
                if (!(iterate.eta[k] > params.positivity_floor * state.eta[k]) ||
                    !(iterate.theta[k] > params.positivity_floor * state.theta[k]))
                    failed = true;
            }
        }

        if (failed || !converged) {
            dt *= 0.5;
            ++halvings;
            continue;
        }

        StepResult res;
        res.state = std::move(iterate);
        res.state.t = state.t + dt;
        res.outcome.accepted = true;
        res.outcome.sweeps = std::min(sweeps, params.picard_max);
        res.outcome.dt_used = dt;
        res.outcome.contraction_violations = violations;
        {
            double ch = 0.0;
            for (int i = 0; i < n; ++i) {
                const size_t k = static_cast<size_t>(i);
                ch = std::max(ch, std::abs(res.state.eta[k] - state.eta[k]));
                ch = std::max(ch, std::abs(res.state.theta[k] - state.theta[k]));
            }
            for (int j = 0; j <= n; ++j) {
                const size_t k = static_cast<size_t>(j);
                ch = std::max(ch, std::abs(res.state.v[k] - state.v[k]));
            }
            res.outcome.max_change = ch / scale;
        }
        res.outcome.positivity_retries = halvings;
        params.dt = dt;
        if (res.outcome.sweeps <= 2)
            params.dt = std::min(dt * 1.2, params.dt_max);
        return res;
    }

    StepResult res;
    res.state = state;
    res.outcome.accepted = false;
    res.outcome.dt_used = dt;
    return res;
}

double explicit_stable_dt(const State& state, const Problem& prob) {
    const int n = prob.grid.n;
    const double dm = prob.grid.dm;
    const auto A = face_conductance(state, prob);
    double rate = 0.0;
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        rate = std::max(rate, (A[k] + A[k + 1]) / (prob.eos.cV * dm));
    }
    for (int j = 1; j < n; ++j) {
        const size_t k = static_cast<size_t>(j);
        rate = std::max(rate, prob.eos.nu * (1.0 / state.eta[k - 1] + 1.0 / state.eta[k]) /
                                  (dm * dm));
    }
    rate = std::max(rate, 2.0 * prob.eos.nu / (state.eta[static_cast<size_t>(n - 1)] * dm * dm));
    return 0.9 / rate;
}

State explicit_oracle_step(const State& state, const Problem& prob, double dt) {
    if (dt > explicit_stable_dt(state, prob))
        throw std::invalid_argument("explicit_oracle_step: dt above stability limit");
    const int n = prob.grid.n;
    const double dm = prob.grid.dm;
    const auto f = derived(state, prob.eos, prob.domain, prob.grid);

    State next;
    next.t = state.t + dt;
    next.eta.resize(static_cast<size_t>(n));
    next.theta.resize(static_cast<size_t>(n));
    next.v.resize(static_cast<size_t>(n) + 1);

    next.v[0] = 0.0;
    for (int j = 1; j < n; ++j) {
        const size_t k = static_cast<size_t>(j);
        next.v[k] = state.v[k] + dt * ((f.sigma[k] - f.sigma[k - 1]) / dm + prob.g_node[k]);
    }
    {
        const size_t k = static_cast<size_t>(n);
        next.v[k] = state.v[k] +
                    dt * ((-prob.domain.p_gamma - f.sigma[k - 1]) / (0.5 * dm) + prob.g_node[k]);
    }

    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double vx = (state.v[k + 1] - state.v[k]) / dm;
        next.eta[k] = state.eta[k] + dt * vx;
        // conservative energy update, then recover theta
        const double e_new = f.e[k] + dt * (f.sigma[k] * vx + (f.pi[k + 1] - f.pi[k]) / dm);
        if (!(next.eta[k] > 0.0))
            throw std::domain_error("explicit_oracle_step: eta positivity failure at cell " +
                                    std::to_string(i));
        next.theta[k] = (e_new + prob.eos.P0(next.eta[k])) / prob.eos.cV;
        if (!(next.theta[k] > 0.0))
            throw std::domain_error("explicit_oracle_step: theta positivity failure at cell " +
                                    std::to_string(i));
    }
    return next;
}

} // namespace nslag
