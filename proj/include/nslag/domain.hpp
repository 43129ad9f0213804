#pragma once

#include <functional>
#include <vector>

namespace nslag {

/// Spatial setup in Lagrangian mass coordinates: the mass interval
/// (0, M), outer pressure and boundary temperature, and the body force
/// g per unit mass (closed form or piecewise-constant table).
struct DomainSpec {
    double total_mass = 1.0;  // M
    int cells = 0;            // n
    double p_gamma = 0.0;
    double theta_gamma = 0.0;
    std::function<double(double)> gravity;  // g(x) on [0, M]
    bool gravity_is_table = false;
    std::vector<double> gravity_table;  // equal-width cells over [0, M]
};

/// Throws std::invalid_argument when M <= 0, n < 2, or theta_gamma <= 0.
void check_domain(const DomainSpec& d);

/// Uniform mass grid: cell centers x_i = (i - 1/2) dm, nodes x_j = j dm.
struct Grid {
    int n = 0;
    double dm = 0.0;
    std::vector<double> centers;  // size n
    std::vector<double> nodes;    // size n + 1
};

Grid build_grid(const DomainSpec& d);

/// p_S(x) = p_gamma - integral of g over (x, M), sampled at cell centers.
struct StationaryPressure {
    std::vector<double> cell_values;
    double at_zero = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Tables integrate exactly; expressions use composite midpoint
/// quadrature on a refinement of the grid (refinement >= 8, even).
/// Extrema are taken over the refined sample set including endpoints.
StationaryPressure stationary_pressure(const DomainSpec& d, const Grid& g,
                                       int refinement = 8);

/// Value of g at a point; table lookup or expression evaluation.
double gravity_at(const DomainSpec& d, double x);

} // namespace nslag
