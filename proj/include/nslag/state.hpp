#pragma once

#include "nslag/domain.hpp"
#include "nslag/eos.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nslag {

/// Discrete fields on the staggered mass grid: specific volume and
/// temperature at cell centers, velocity at nodes. v[0] is pinned to 0.
struct State {
    double t = 0.0;
    std::vector<double> eta;    // size n, positive
    std::vector<double> theta;  // size n, positive
    std::vector<double> v;      // size n + 1, v[0] == 0
};

/// Pointwise derived quantities. Stress sigma lives at cells, heat flux
/// pi at nodes; pi[n] = 0 (flux-free end) and pi[0] closes the Dirichlet
/// face with a half-cell difference against theta_gamma.
struct DerivedFields {
    std::vector<double> rho;    // cells
    std::vector<double> p;      // cells
    std::vector<double> sigma;  // cells
    std::vector<double> e;      // cells
    std::vector<double> pi;     // nodes 0..n
};

/// Throws std::domain_error when any eta or theta is nonpositive.
void check_positive(const State& s);

DerivedFields derived(const State& s, const EosSpec& eos, const DomainSpec& dom,
                      const Grid& grid);

using ProfileFn = std::function<double(double)>;

struct InitialProfiles {
    ProfileFn eta0, v0, theta0;
    double theta_compat_tol = 1e-9;
};

/// Samples the initial profiles on the grid (cell centers for eta and
/// theta, nodes for v), forces v[0] = 0, and reports compatibility
/// warnings: |v0(0)| beyond 1e-12 before clamping, or theta0(0) away
/// from theta_gamma beyond theta_compat_tol.
State initial_state(const InitialProfiles& init, const Grid& grid,
                    const DomainSpec& dom,
                    std::vector<std::string>* warnings = nullptr);

} // namespace nslag
