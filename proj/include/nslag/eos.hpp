#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nslag {

/// Two-term pressure law p(eta,theta) = p0(eta) + p1(eta)*theta together
/// with its generating potentials P0, P1 (p0 = P0', p1 = P1'), the heat
/// capacity cV, viscosity nu, and conductivity kappa(eta,theta) with
/// declared bounds. Immutable after construction; all evaluation is pure.
struct EosSpec {
    enum class Family { nuclear, thermoviscoelastic };

    std::string name = "custom";
    Family family = Family::nuclear;

    std::function<double(double)> P0, P1;   // potentials of eta
    std::function<double(double)> p0, p1;   // their derivatives
    std::function<double(double, double)> kappa; // kappa(eta, theta)

    double cV = 1.0;
    double nu = 1.0;
    double kappa_lo = 1.0;
    double kappa_hi = 1.0;

    // thermoviscoelastic thresholds: 0 < eta_check <= eta_hat
    double eta_check = 0.0;
    double eta_hat = 0.0;

    // declared evaluation bracket for eta
    double eta_min = 1e-8;
    double eta_max = 1e12;
};

/// Built-in law with p0 = eta^-3 - 2 eta^-2 (repulsive core, attractive
/// tail, vanishing at infinity) and p1 = 1/eta. Nonmonotone in eta at
/// low temperature.
EosSpec nuc1_eos();

/// Built-in law with p0 = 1 - eta and p1 = 1 - eta^2; thresholds
/// eta_check = 0.8, eta_hat = 1.2.
EosSpec tve1_eos();

double pressure(const EosSpec& s, double eta, double theta);
double internal_energy(const EosSpec& s, double eta, double theta);
double free_energy(const EosSpec& s, double eta, double theta);

struct InfPressureResult {
    bool unbounded_below = false;
    double value = 0.0;
    std::optional<double> argmin;  // absent when the infimum is a limit value
    bool limit_at_large_eta = false;
};

/// Infimum of p(., theta_gamma). Minimizes over a refinement grid on
/// [lo, hi] and polishes with golden-section search. When the samples
/// decrease monotonically into the right edge, a thermoviscoelastic law
/// is reported unbounded below, while a nuclear law (p0 -> 0, eta*p1
/// bounded) has infimum min(sample minimum, 0) approached at large eta.
InfPressureResult inf_pressure(const EosSpec& s, double theta_gamma,
                               double lo, double hi, int samples = 2048);

struct EosCheck {
    std::string name;
    bool pass = false;
    std::string witness;  // sample point and violated inequality on failure
};

struct EosValidationReport {
    EosSpec::Family family;
    std::vector<EosCheck> checks;
    std::vector<std::string> warnings;
    bool all_pass() const;
};

struct ValidateOptions {
    int samples = 512;
    double box_eta_lo = 1e-3;
    double box_eta_hi = 1e3;
    double box_theta_lo = 1e-3;
    double box_theta_hi = 1e3;
    double p0_blowup_threshold = 1e3;  // p0 at the smallest sample must exceed this
    double p0_tail_tol = 1e-3;         // |p0| at the largest samples must be below this
    double eta_p1_bound = 100.0;       // bound for eta*p1 at large eta
};

/// Checks family membership on a log-spaced sample grid. Nuclear laws:
/// p0 blows up at small eta, vanishes at large eta, p1 >= 0, eta*p1
/// bounded. Thermoviscoelastic laws: p0 >= ps_max and p1 >= 0 for
/// eta <= eta_check; p0 <= ps_min and p1 <= 0 for eta >= eta_hat.
/// Asymptotic conditions are sampled, not proven; that caveat is
/// reported as a warning. Failures are data, never exceptions.
EosValidationReport validate(const EosSpec& s, double ps_min, double ps_max,
                             const ValidateOptions& opt = {});

struct Plateau {
    double eta_lo = 0.0;
    double eta_hi = 0.0;
    double level = 0.0;
};

/// Scans p(., theta_gamma) on a dense log grid and flags every maximal
/// eta-window of width >= window whose oscillation is < flat_tol and
/// whose level lies in [c_lo, c_hi]. Empty result means no degenerate
/// plateau at this resolution.
std::vector<Plateau> check_nondegeneracy(const EosSpec& s, double theta_gamma,
                                         double c_lo, double c_hi,
                                         double lo, double hi,
                                         double window, double flat_tol,
                                         int samples = 16384);

/// Cross-checks p0 against a central finite difference of P0 (and p1
/// against P1) at log-spaced samples. Returns false with a message when
/// the relative mismatch exceeds rel_tol anywhere.
bool check_derivative_consistency(const EosSpec& s, double lo, double hi,
                                  int samples, double rel_tol,
                                  std::string* message = nullptr);

} // namespace nslag
