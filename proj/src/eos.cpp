#include "nslag/eos.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nslag {

namespace {

void require_eta(const EosSpec& s, double eta) {
    if (!(eta > 0.0))
        throw std::domain_error("eos: eta must be positive, got " + std::to_string(eta));
    if (eta < s.eta_min || eta > s.eta_max)
        throw std::domain_error("eos: eta=" + std::to_string(eta) +
                                " outside declared bracket [" + std::to_string(s.eta_min) +
                                ", " + std::to_string(s.eta_max) + "]");
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<size_t>(n));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Golden-section minimization of f on [a, b].
template <class F>
double golden_min(F&& f, double a, double b, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

EosSpec nuc1_eos() {
    EosSpec s;
    s.name = "nuc1";
    s.family = EosSpec::Family::nuclear;
    s.P0 = [](double e) { return -0.5 / (e * e) + 2.0 / e; };
    s.p0 = [](double e) { return 1.0 / (e * e * e) - 2.0 / (e * e); };
    s.P1 = [](double e) { return std::log(e); };
    s.p1 = [](double e) { return 1.0 / e; };
    s.kappa = [](double, double) { return 1.0; };
    s.cV = 1.0;
    s.nu = 1.0;
    s.kappa_lo = s.kappa_hi = 1.0;
    return s;
}

EosSpec tve1_eos() {
    EosSpec s;
    s.name = "tve1";
    s.family = EosSpec::Family::thermoviscoelastic;
    s.P0 = [](double e) { return e - 0.5 * e * e; };
    s.p0 = [](double e) { return 1.0 - e; };
    s.P1 = [](double e) { return e - e * e * e / 3.0; };
    s.p1 = [](double e) { return 1.0 - e * e; };
    s.kappa = [](double, double) { return 1.0; };
    s.cV = 1.0;
    s.nu = 1.0;
    s.kappa_lo = s.kappa_hi = 1.0;
    s.eta_check = 0.8;
    s.eta_hat = 1.2;
    return s;
}

double pressure(const EosSpec& s, double eta, double theta) {
    require_eta(s, eta);
    return s.p0(eta) + s.p1(eta) * theta;
}

double internal_energy(const EosSpec& s, double eta, double theta) {
    require_eta(s, eta);
    return -s.P0(eta) + s.cV * theta;
}

double free_energy(const EosSpec& s, double eta, double theta) {
    require_eta(s, eta);
    if (!(theta > 0.0))
        throw std::domain_error("eos: free energy needs theta > 0, got " + std::to_string(theta));
    return -s.cV * theta * std::log(theta) - s.P0(eta) - s.P1(eta) * theta;
}

InfPressureResult inf_pressure(const EosSpec& s, double theta_gamma,
                               double lo, double hi, int samples) {
    if (!(lo > 0.0) || !(lo < hi))
        throw std::invalid_argument("inf_pressure: need 0 < lo < hi");
    samples = std::max(samples, 64);
    auto f = [&](double eta) { return pressure(s, eta, theta_gamma); };

    const auto grid = log_grid(lo, hi, samples);
    std::vector<double> vals(grid.size());
    size_t imin = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        vals[i] = f(grid[i]);
        if (!std::isfinite(vals[i]))
            throw std::runtime_error("inf_pressure: evaluation failed at eta=" + fmt(grid[i]));
        if (vals[i] < vals[imin]) imin = i;
    }

    InfPressureResult r;
    if (imin == grid.size() - 1) {
        // Minimum sits on the right edge; decide from the declared family
        // what the tail does beyond the bracket.
        bool tail_decreasing = true;
        const size_t k = std::min<size_t>(8, grid.size() - 1);
        for (size_t i = grid.size() - k; i < grid.size(); ++i)
            if (vals[i] >= vals[i - 1]) { tail_decreasing = false; break; }
        if (tail_decreasing && s.family == EosSpec::Family::thermoviscoelastic) {
            r.unbounded_below = true;
            r.value = vals[imin];
            return r;
        }
        // Nuclear laws vanish at infinity: the infimum over eta > 0 is at
        // most 0 even when every bracket sample is positive.
        r.value = std::min(vals[imin], 0.0);
        r.limit_at_large_eta = vals[imin] >= 0.0;
        if (!r.limit_at_large_eta) r.argmin = grid[imin];
        return r;
    }

    const double a = grid[imin == 0 ? 0 : imin - 1];
    const double b = grid[std::min(imin + 1, grid.size() - 1)];
    const double xm = golden_min(f, a, b, 1e-13 * std::max(1.0, b));
    double vm = f(xm);
    double xbest = xm;
    if (vals[imin] < vm) { vm = vals[imin]; xbest = grid[imin]; }
    if (s.family == EosSpec::Family::nuclear && vm > 0.0) {
        r.value = 0.0;
        r.limit_at_large_eta = true;
        return r;
    }
    r.value = vm;
    r.argmin = xbest;
    return r;
}

bool EosValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const EosCheck& c) { return c.pass; });
}

EosValidationReport validate(const EosSpec& s, double ps_min, double ps_max,
                             const ValidateOptions& opt) {
    if (!(ps_min <= ps_max))
        throw std::invalid_argument("validate: ps_min must be <= ps_max");
    EosValidationReport rep;
    rep.family = s.family;
    const auto grid = log_grid(opt.box_eta_lo, opt.box_eta_hi, opt.samples);

    auto add = [&](std::string name, bool pass, std::string witness) {
        rep.checks.push_back({std::move(name), pass, std::move(witness)});
    };

    if (s.family == EosSpec::Family::nuclear) {
        // p0 blows up at small eta
        double p0_first = s.p0(grid.front());
        bool blowup = p0_first > opt.p0_blowup_threshold;
        std::string w;
        for (double e : grid) {
            if (e == grid.front()) continue;
            if (s.p0(e) >= p0_first) {
                blowup = false;
                w = "p0(" + fmt(e) + ")=" + fmt(s.p0(e)) + " >= p0(" + fmt(grid.front()) + ")=" + fmt(p0_first);
                break;
            }
        }
        if (w.empty() && !blowup)
            w = "p0(" + fmt(grid.front()) + ")=" + fmt(p0_first) +
                " <= threshold " + fmt(opt.p0_blowup_threshold);
        add("p0 blows up as eta -> 0", blowup, blowup ? "" : w);

        // p0 -> 0 at large eta: check the top decade of samples
        bool tail_ok = true;
        std::string tw;
        for (double e : grid) {
            if (e < 0.1 * opt.box_eta_hi) continue;
            if (std::abs(s.p0(e)) > opt.p0_tail_tol) {
                tail_ok = false;
                tw = "|p0(" + fmt(e) + ")|=" + fmt(std::abs(s.p0(e))) + " > " + fmt(opt.p0_tail_tol);
                break;
            }
        }
        add("p0 -> 0 as eta -> inf", tail_ok, tw);

        bool p1_ok = true;
        std::string pw;
        for (double e : grid)
            if (s.p1(e) < 0.0) {
                p1_ok = false;
                pw = "p1(" + fmt(e) + ")=" + fmt(s.p1(e)) + " < 0";
                break;
            }
        add("p1 >= 0", p1_ok, pw);

        bool etap1_ok = true;
        std::string ew;
        for (double e : grid) {
            if (e < 0.1 * opt.box_eta_hi) continue;
            if (std::abs(e * s.p1(e)) > opt.eta_p1_bound) {
                etap1_ok = false;
                ew = "eta*p1 at eta=" + fmt(e) + " is " + fmt(e * s.p1(e)) +
                     ", bound " + fmt(opt.eta_p1_bound);
                break;
            }
        }
        add("eta*p1 bounded at large eta", etap1_ok, ew);
        rep.warnings.push_back("asymptotic conditions checked at finite samples only");
    } else {
        if (!(s.eta_check > 0.0) || !(s.eta_check <= s.eta_hat)) {
            add("0 < eta_check <= eta_hat", false,
                "eta_check=" + fmt(s.eta_check) + ", eta_hat=" + fmt(s.eta_hat));
        } else {
            add("0 < eta_check <= eta_hat", true, "");
        }
        bool low_ok = true;
        std::string lw;
        for (double e : grid) {
            if (e > s.eta_check) continue;
            if (s.p0(e) < ps_max) {
                low_ok = false;
                lw = "p0(" + fmt(e) + ")=" + fmt(s.p0(e)) + " < ps_max=" + fmt(ps_max);
                break;
            }
            if (s.p1(e) < 0.0) {
                low_ok = false;
                lw = "p1(" + fmt(e) + ")=" + fmt(s.p1(e)) + " < 0";
                break;
            }
        }
        add("p0 >= ps_max and p1 >= 0 for eta <= eta_check", low_ok, lw);

        bool high_ok = true;
        std::string hw;
        for (double e : grid) {
            if (e < s.eta_hat) continue;
            if (s.p0(e) > ps_min) {
                high_ok = false;
                hw = "p0(" + fmt(e) + ")=" + fmt(s.p0(e)) + " > ps_min=" + fmt(ps_min);
                break;
            }
            if (s.p1(e) > 0.0) {
                high_ok = false;
                hw = "p1(" + fmt(e) + ")=" + fmt(s.p1(e)) + " > 0";
                break;
            }
        }
        add("p0 <= ps_min and p1 <= 0 for eta >= eta_hat", high_ok, hw);
    }

    // conductivity bounds over the operating box
    bool kap_ok = true;
    std::string kw;
    const auto tgrid = log_grid(opt.box_theta_lo, opt.box_theta_hi, 33);
    for (double e : log_grid(opt.box_eta_lo, opt.box_eta_hi, 65)) {
        for (double th : tgrid) {
            const double k = s.kappa(e, th);
            if (!(k >= s.kappa_lo) || !(k <= s.kappa_hi)) {
                kap_ok = false;
                kw = "kappa(" + fmt(e) + "," + fmt(th) + ")=" + fmt(k) +
                     " outside [" + fmt(s.kappa_lo) + "," + fmt(s.kappa_hi) + "]";
                break;
            }
        }
        if (!kap_ok) break;
    }
    add("kappa within declared bounds", kap_ok, kw);

    return rep;
}

std::vector<Plateau> check_nondegeneracy(const EosSpec& s, double theta_gamma,
                                         double c_lo, double c_hi,
                                         double lo, double hi,
                                         double window, double flat_tol,
                                         int samples) {
    if (!(c_lo <= c_hi))
        throw std::invalid_argument("check_nondegeneracy: need c_lo <= c_hi");
    if (!(lo > 0.0) || !(lo < hi))
        throw std::invalid_argument("check_nondegeneracy: bad bracket");
    samples = std::max(samples, 256);
    const auto grid = log_grid(lo, hi, samples);
    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = pressure(s, grid[i], theta_gamma);

    // Two-pointer sweep with monotone deques for the running oscillation;
    // flagged index windows are merged afterwards.
    std::vector<std::pair<size_t, size_t>> flagged;
    std::deque<size_t> qmin, qmax;
    size_t left = 0;
    for (size_t right = 0; right < grid.size(); ++right) {
        while (!qmin.empty() && vals[qmin.back()] >= vals[right]) qmin.pop_back();
        qmin.push_back(right);
        while (!qmax.empty() && vals[qmax.back()] <= vals[right]) qmax.pop_back();
        qmax.push_back(right);
        while (vals[qmax.front()] - vals[qmin.front()] >= flat_tol) {
            ++left;
            if (qmin.front() < left) qmin.pop_front();
            if (qmax.front() < left) qmax.pop_front();
        }
        if (grid[right] - grid[left] >= window) {
            const double level = 0.5 * (vals[qmax.front()] + vals[qmin.front()]);
            if (level >= c_lo && level <= c_hi) {
                if (!flagged.empty() && left <= flagged.back().second)
                    flagged.back().second = right;
                else
                    flagged.emplace_back(left, right);
            }
        }
    }
    std::vector<Plateau> out;
    out.reserve(flagged.size());
    for (auto [a, b] : flagged)
        out.push_back({grid[a], grid[b], vals[(a + b) / 2]});
    return out;
}

bool check_derivative_consistency(const EosSpec& s, double lo, double hi,
                                  int samples, double rel_tol,
                                  std::string* message) {
    const auto grid = log_grid(lo, hi, std::max(samples, 8));
    const double eps = std::numeric_limits<double>::epsilon();
    // Richardson pair: the h^2 truncation of the coarse difference is
    // estimated from the coarse/fine gap, and a cancellation floor covers
    // rounding. Both allowances vanish for a genuinely wrong derivative.
    auto matches = [&](const std::function<double(double)>& P,
                       const std::function<double(double)>& p, double e) {
        const double h = 1e-4 * e;
        const double fd_h = (P(e + h) - P(e - h)) / (2.0 * h);
        const double fd_h2 = (P(e + 0.5 * h) - P(e - 0.5 * h)) / h;
        const double trunc = std::abs(fd_h - fd_h2);
        const double round = 16.0 * eps * (std::abs(P(e + h)) + std::abs(P(e - h))) / h;
        const double scale = std::max(std::abs(p(e)), std::abs(fd_h2));
        return std::abs(fd_h2 - p(e)) <= rel_tol * scale + trunc + round;
    };
    for (double e : grid) {
        if (e - 1e-4 * e <= 0.0) continue;
        if (!matches(s.P0, s.p0, e)) {
            if (message)
                *message = "p0 inconsistent with P0 at eta=" + fmt(e) + ": fd=" +
                           fmt((s.P0(e + 1e-4 * e) - s.P0(e - 1e-4 * e)) / (2e-4 * e)) +
                           " vs p0=" + fmt(s.p0(e));
            return false;
        }
        if (!matches(s.P1, s.p1, e)) {
            if (message)
                *message = "p1 inconsistent with P1 at eta=" + fmt(e) + ": fd=" +
                           fmt((s.P1(e + 1e-4 * e) - s.P1(e - 1e-4 * e)) / (2e-4 * e)) +
                           " vs p1=" + fmt(s.p1(e));
            return false;
        }
    }
    return true;
}

} // namespace nslag
