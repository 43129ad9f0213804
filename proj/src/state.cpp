#include "nslag/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nslag {

void check_positive(const State& s) {
    for (size_t i = 0; i < s.eta.size(); ++i)
        if (!(s.eta[i] > 0.0))
            throw std::domain_error("state: eta nonpositive at cell " + std::to_string(i) +
                                    ": " + std::to_string(s.eta[i]));
    for (size_t i = 0; i < s.theta.size(); ++i)
        if (!(s.theta[i] > 0.0))
            throw std::domain_error("state: theta nonpositive at cell " + std::to_string(i) +
                                    ": " + std::to_string(s.theta[i]));
}

DerivedFields derived(const State& s, const EosSpec& eos, const DomainSpec& dom,
                      const Grid& grid) {
    check_positive(s);
    const int n = grid.n;
    const double dm = grid.dm;
    DerivedFields f;
    f.rho.resize(static_cast<size_t>(n));
    f.p.resize(static_cast<size_t>(n));
    f.sigma.resize(static_cast<size_t>(n));
    f.e.resize(static_cast<size_t>(n));
    f.pi.resize(static_cast<size_t>(n) + 1);

    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double eta = s.eta[k];
        const double th = s.theta[k];
        f.rho[k] = 1.0 / eta;
        f.p[k] = pressure(eos, eta, th);
        f.e[k] = internal_energy(eos, eta, th);
        const double vx = (s.v[k + 1] - s.v[k]) / dm;
        f.sigma[k] = eos.nu * vx / eta - f.p[k];
    }

    // Dirichlet face at x = 0: half-cell difference against theta_gamma
    {
        const double eta1 = s.eta[0];
        const double thf = 0.5 * (s.theta[0] + dom.theta_gamma);
        f.pi[0] = eos.kappa(eta1, thf) * (1.0 / eta1) *
                  (s.theta[0] - dom.theta_gamma) / (0.5 * dm);
    }
    for (int j = 1; j < n; ++j) {
        const size_t k = static_cast<size_t>(j);
        const double etab = 0.5 * (s.eta[k - 1] + s.eta[k]);
        const double thb = 0.5 * (s.theta[k - 1] + s.theta[k]);
        f.pi[k] = eos.kappa(etab, thb) * (1.0 / etab) * (s.theta[k] - s.theta[k - 1]) / dm;
    }
    f.pi[static_cast<size_t>(n)] = 0.0;  // flux-free end
    return f;
}

State initial_state(const InitialProfiles& init, const Grid& grid,
                    const DomainSpec& dom,
                    std::vector<std::string>* warnings) {
    State s;
    s.t = 0.0;
    s.eta.resize(static_cast<size_t>(grid.n));
    s.theta.resize(static_cast<size_t>(grid.n));
    s.v.resize(static_cast<size_t>(grid.n) + 1);

    for (int i = 0; i < grid.n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double x = grid.centers[k];
        s.eta[k] = init.eta0(x);
        s.theta[k] = init.theta0(x);
        if (!(s.eta[k] > 0.0))
            throw std::domain_error("initial eta nonpositive at cell " + std::to_string(i) +
                                    " (x=" + std::to_string(x) + ")");
        if (!(s.theta[k] > 0.0))
            throw std::domain_error("initial theta nonpositive at cell " + std::to_string(i) +
                                    " (x=" + std::to_string(x) + ")");
    }
    for (int j = 0; j <= grid.n; ++j)
        s.v[static_cast<size_t>(j)] = init.v0(grid.nodes[static_cast<size_t>(j)]);

    if (warnings) {
        if (std::abs(s.v[0]) > 1e-12)
            warnings->push_back("v0(0) = " + std::to_string(s.v[0]) +
                                " clamped to 0 (no-slip end)");
        const double th0 = init.theta0(0.0);
        if (std::abs(th0 - dom.theta_gamma) > init.theta_compat_tol)
            warnings->push_back("theta0(0) = " + std::to_string(th0) +
                                " differs from theta_gamma = " +
                                std::to_string(dom.theta_gamma));
    }
    s.v[0] = 0.0;
    return s;
}

} // namespace nslag
