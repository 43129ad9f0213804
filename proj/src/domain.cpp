#include "nslag/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nslag {

void check_domain(const DomainSpec& d) {
    if (!(d.total_mass > 0.0))
        throw std::invalid_argument("domain: total mass M must be positive");
    if (d.cells < 2)
        throw std::invalid_argument("domain: need at least 2 cells, got " +
                                    std::to_string(d.cells));
    if (!(d.theta_gamma > 0.0))
        throw std::invalid_argument("domain: theta_gamma must be positive");
    if (d.gravity_is_table && d.gravity_table.empty())
        throw std::invalid_argument("domain: empty gravity table");
    if (!d.gravity_is_table && !d.gravity)
        throw std::invalid_argument("domain: gravity function not set");
}

Grid build_grid(const DomainSpec& d) {
    check_domain(d);
    Grid g;
    g.n = d.cells;
    g.dm = d.total_mass / d.cells;
    g.centers.resize(static_cast<size_t>(g.n));
    g.nodes.resize(static_cast<size_t>(g.n) + 1);
    for (int i = 0; i < g.n; ++i)
        g.centers[static_cast<size_t>(i)] = (i + 0.5) * g.dm;
    for (int j = 0; j <= g.n; ++j)
        g.nodes[static_cast<size_t>(j)] = j * g.dm;
    g.nodes.back() = d.total_mass;
    return g;
}

double gravity_at(const DomainSpec& d, double x) {
    if (d.gravity_is_table) {
        const size_t nt = d.gravity_table.size();
        const double w = d.total_mass / static_cast<double>(nt);
        auto idx = static_cast<long>(std::floor(x / w));
        idx = std::clamp<long>(idx, 0, static_cast<long>(nt) - 1);
        return d.gravity_table[static_cast<size_t>(idx)];
    }
    return d.gravity(x);
}

namespace {

// Exact integral of a piecewise-constant table over (a, b) in [0, M].
double table_integral(const DomainSpec& d, double a, double b) {
    const size_t nt = d.gravity_table.size();
    const double w = d.total_mass / static_cast<double>(nt);
    double sum = 0.0;
    for (size_t j = 0; j < nt; ++j) {
        const double lo = std::max(a, j * w);
        const double hi = std::min(b, (j + 1) * w);
        if (hi > lo) sum += d.gravity_table[j] * (hi - lo);
    }
    return sum;
}

} // namespace

StationaryPressure stationary_pressure(const DomainSpec& d, const Grid& g,
                                       int refinement) {
    check_domain(d);
    if (refinement < 8) refinement = 8;
    if (refinement % 2 != 0) ++refinement;

    StationaryPressure ps;
    ps.cell_values.resize(static_cast<size_t>(g.n));

    if (d.gravity_is_table) {
        for (int i = 0; i < g.n; ++i) {
            const double x = g.centers[static_cast<size_t>(i)];
            ps.cell_values[static_cast<size_t>(i)] =
                d.p_gamma - table_integral(d, x, d.total_mass);
        }
        ps.at_zero = d.p_gamma - table_integral(d, 0.0, d.total_mass);
        // table pS is piecewise linear: extrema occur at table breakpoints
        double mn = d.p_gamma, mx = d.p_gamma;
        const size_t nt = d.gravity_table.size();
        const double w = d.total_mass / static_cast<double>(nt);
        for (size_t j = 0; j <= nt; ++j) {
            const double v = d.p_gamma - table_integral(d, j * w, d.total_mass);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        ps.min = mn;
        ps.max = mx;
        return ps;
    }

    const long nr = static_cast<long>(g.n) * refinement;
    const double h = d.total_mass / static_cast<double>(nr);
    // suffix sums of midpoint samples: tail[k] = integral over (k*h, M)
    std::vector<double> tail(static_cast<size_t>(nr) + 1, 0.0);
    for (long k = nr - 1; k >= 0; --k) {
        const double gm = d.gravity((k + 0.5) * h);
        if (!std::isfinite(gm))
            throw std::runtime_error("stationary_pressure: g evaluation failed at x=" +
                                     std::to_string((k + 0.5) * h));
        tail[static_cast<size_t>(k)] = tail[static_cast<size_t>(k) + 1] + gm * h;
    }
    double mn = d.p_gamma - tail[0], mx = mn;
    for (long k = 0; k <= nr; ++k) {
        const double v = d.p_gamma - tail[static_cast<size_t>(k)];
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    for (int i = 0; i < g.n; ++i) {
        // cell center (i + 1/2) dm sits on refined edge i*r + r/2
        const long k = static_cast<long>(i) * refinement + refinement / 2;
        ps.cell_values[static_cast<size_t>(i)] = d.p_gamma - tail[static_cast<size_t>(k)];
    }
    ps.at_zero = d.p_gamma - tail[0];
    ps.min = mn;
    ps.max = mx;
    return ps;
}

} // namespace nslag
