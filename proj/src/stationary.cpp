#include "nslag/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nslag {

RootSet find_roots(const EosSpec& eos, double theta_gamma, double level,
                   double lo, double hi, double root_tol, int scan_samples) {
    if (!(lo > 0.0) || !(lo < hi))
        throw std::invalid_argument("find_roots: need 0 < lo < hi");
    scan_samples = std::max(scan_samples, 4096);

    RootSet rs;
    rs.level = level;
    rs.bracket_lo = lo;
    rs.bracket_hi = hi;

    auto f = [&](double eta) { return pressure(eos, eta, theta_gamma) - level; };

    const double llo = std::log(lo), lhi = std::log(hi);
    double xa = lo, fa = f(lo);
    const double touch_tol = 1e-12 * std::max(1.0, std::abs(level));
    for (int i = 1; i < scan_samples; ++i) {
        const double xb = (i == scan_samples - 1)
                              ? hi
                              : std::exp(llo + (lhi - llo) * i / (scan_samples - 1));
        const double fb = f(xb);
        if (fa == 0.0) {
            rs.roots.push_back(xa);
        } else if (fa * fb < 0.0) {
            double a = xa, b = xb, va = fa;
            while (b - a > root_tol) {
                const double m = 0.5 * (a + b);
                const double vm = f(m);
                if (vm == 0.0) { a = b = m; break; }
                if (va * vm < 0.0) b = m;
                else { a = m; va = vm; }
            }
            rs.roots.push_back(0.5 * (a + b));
        } else if (std::abs(fb) < touch_tol && fa * fb > 0.0) {
            // grazing the level without a sign change
            rs.warnings.push_back("possible tangency near eta=" + std::to_string(xb));
        }
        xa = xb;
        fa = fb;
    }
    if (fa == 0.0) rs.roots.push_back(xa);

    // drop duplicates closer than 2 root_tol
    std::sort(rs.roots.begin(), rs.roots.end());
    std::vector<double> unique;
    for (double r : rs.roots)
        if (unique.empty() || r - unique.back() > 2.0 * root_tol) unique.push_back(r);
    rs.roots = std::move(unique);

    rs.residuals.resize(rs.roots.size());
    for (size_t i = 0; i < rs.roots.size(); ++i)
        rs.residuals[i] = std::abs(f(rs.roots[i]));
    return rs;
}

SteadyProfile steady_profile(const Problem& prob, double bracket_lo,
                             double bracket_hi, double root_tol,
                             int scan_samples) {
    SteadyProfile sp;
    sp.cells.resize(static_cast<size_t>(prob.grid.n));
    for (int i = 0; i < prob.grid.n; ++i) {
        const size_t k = static_cast<size_t>(i);
        sp.cells[k].roots = find_roots(prob.eos, prob.domain.theta_gamma,
                                       prob.ps.cell_values[k], bracket_lo,
                                       bracket_hi, root_tol, scan_samples);
        if (sp.cells[k].roots.roots.empty()) sp.empty_cells.push_back(i);
    }
    return sp;
}

void classify_limit(SteadyProfile& profile, const State& final_state,
                    const EosSpec& eos, double theta_gamma) {
    std::vector<double> chosen;
    for (size_t k = 0; k < profile.cells.size(); ++k) {
        CellSteady& c = profile.cells[k];
        c.eta_final = final_state.eta[k];
        c.p_residual = std::abs(pressure(eos, c.eta_final, theta_gamma) - c.roots.level);
        if (c.roots.roots.empty()) {
            c.selected.reset();
            continue;
        }
        double best = c.roots.roots[0];
        for (double r : c.roots.roots)
            if (std::abs(c.eta_final - r) < std::abs(c.eta_final - best)) best = r;
        c.selected = best;
        c.distance = std::abs(c.eta_final - best);
        const bool seen = std::any_of(chosen.begin(), chosen.end(), [&](double r) {
            return std::abs(r - best) < 1e-12 * std::max(1.0, std::abs(best));
        });
        if (!seen) chosen.push_back(best);
    }
    profile.classified = true;
    profile.mixed_phase = chosen.size() >= 2;
}

namespace {

std::optional<double> first_passage_one(const std::vector<DiagRecord>& traj,
                                        double DiagRecord::*norm, double threshold,
                                        double dwell) {
    const double t_end = traj.back().t;
    std::optional<double> start;
    for (const DiagRecord& r : traj) {
        if (r.*norm < threshold) {
            if (!start) start = r.t;
            if (r.t - *start >= dwell) return start;
        } else {
            start.reset();
        }
    }
    // below through the end of the record: accept only if the dwell
    // window fits inside the observed trajectory
    if (start && t_end - *start >= dwell) return start;
    return std::nullopt;
}

} // namespace

FirstPassage convergence_metrics(const std::vector<DiagRecord>& trajectory,
                                 const StabilizationThresholds& th) {
    if (trajectory.empty())
        throw std::invalid_argument("convergence_metrics: empty trajectory");
    FirstPassage fp;
    fp.v = first_passage_one(trajectory, &DiagRecord::v_l2, th.v_l2, th.dwell);
    fp.dtheta = first_passage_one(trajectory, &DiagRecord::dtheta_l2, th.dtheta_l2, th.dwell);
    fp.dp = first_passage_one(trajectory, &DiagRecord::dp_l2, th.dp_l2, th.dwell);
    return fp;
}

} // namespace nslag
