#include "nslag/state.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace nslag;

namespace {

DomainSpec domain_n(int n, double p_gamma = 0.5, double theta_gamma = 0.1) {
    DomainSpec d;
    d.total_mass = 1.0;
    d.cells = n;
    d.p_gamma = p_gamma;
    d.theta_gamma = theta_gamma;
    d.gravity = [](double) { return 0.0; };
    return d;
}

State uniform_state(int n, double eta, double theta) {
    State s;
    s.eta.assign(static_cast<size_t>(n), eta);
    s.theta.assign(static_cast<size_t>(n), theta);
    s.v.assign(static_cast<size_t>(n) + 1, 0.0);
    return s;
}

} // namespace

TEST_SUITE("state") {

TEST_CASE("uniform equilibrium has uniform stress and zero flux") {
    const EosSpec eos = nuc1_eos();
    const DomainSpec dom = domain_n(8);
    const Grid grid = build_grid(dom);
    // eta* solving p(eta, theta_gamma) = p_gamma, frozen from the root study
    const State s = uniform_state(8, 0.48343912098987967, dom.theta_gamma);
    const DerivedFields f = derived(s, eos, dom, grid);
    for (int i = 0; i < 8; ++i) {
        CHECK(f.sigma[static_cast<size_t>(i)] == doctest::Approx(-0.5).epsilon(1e-9));
        CHECK(f.rho[static_cast<size_t>(i)] * s.eta[static_cast<size_t>(i)] ==
              doctest::Approx(1.0).epsilon(1e-15));
    }
    for (double pi : f.pi) CHECK(pi == doctest::Approx(0.0));
}

TEST_CASE("hand-checked stress at n = 2") {
    const EosSpec eos = nuc1_eos();
    const DomainSpec dom = domain_n(2, 0.5, 1.0);
    const Grid grid = build_grid(dom);
    State s = uniform_state(2, 1.0, 1.0);
    s.v = {0.0, 0.5, 0.5};
    const DerivedFields f = derived(s, eos, dom, grid);
    // sigma_1 = nu*(0.5-0)/(0.5*1) - p(1,1) = 1 - 0 = 1; sigma_2 = 0
    CHECK(f.sigma[0] == doctest::Approx(1.0));
    CHECK(f.sigma[1] == doctest::Approx(0.0));
}

TEST_CASE("linear temperature profile gives a constant interior flux") {
    const EosSpec eos = nuc1_eos();
    DomainSpec dom = domain_n(8, 0.5, 1.0);
    const Grid grid = build_grid(dom);
    State s = uniform_state(8, 1.0, 1.0);
    for (int i = 0; i < 8; ++i)
        s.theta[static_cast<size_t>(i)] = 1.0 + grid.centers[static_cast<size_t>(i)];
    const DerivedFields f = derived(s, eos, dom, grid);
    for (int j = 1; j < 8; ++j)
        CHECK(f.pi[static_cast<size_t>(j)] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.pi[8] == 0.0);
    // Dirichlet face: theta(0) = 1 + dm/2 against theta_gamma = 1
    CHECK(f.pi[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("positivity violations throw with the offending cell") {
    const EosSpec eos = nuc1_eos();
    const DomainSpec dom = domain_n(4);
    const Grid grid = build_grid(dom);
    State s = uniform_state(4, 1.0, 1.0);
    s.eta[2] = -0.1;
    CHECK_THROWS_AS(derived(s, eos, dom, grid), std::domain_error);
}

TEST_CASE("initialize samples profiles and clamps the pinned node") {
    const DomainSpec dom = domain_n(16);
    const Grid grid = build_grid(dom);
    InitialProfiles init;
    init.eta0 = [](double) { return 1.0; };
    init.v0 = [](double x) { return std::sin(M_PI * x); };
    init.theta0 = [&](double) { return dom.theta_gamma; };
    std::vector<std::string> warnings;
    const State s = initial_state(init, grid, dom, &warnings);
    CHECK(s.t == 0.0);
    CHECK(s.v[0] == 0.0);
    CHECK(warnings.empty());  // sin(0) = 0: no clamp warning
    CHECK(s.v[8] == doctest::Approx(std::sin(M_PI * 0.5)));
}

TEST_CASE("compatibility warnings for v0(0) and theta0(0)") {
    const DomainSpec dom = domain_n(8);
    const Grid grid = build_grid(dom);
    InitialProfiles init;
    init.eta0 = [](double) { return 1.0; };
    init.v0 = [](double) { return 0.5; };                       // v0(0) != 0
    init.theta0 = [&](double) { return 2.0 * dom.theta_gamma; };  // theta0(0) != theta_gamma
    std::vector<std::string> warnings;
    const State s = initial_state(init, grid, dom, &warnings);
    CHECK(s.v[0] == 0.0);
    REQUIRE(warnings.size() == 2);
    CHECK(warnings[0].find("v0(0)") != std::string::npos);
    CHECK(warnings[1].find("theta0(0)") != std::string::npos);
}

TEST_CASE("theta0 matching theta_gamma at the wall warns only on mismatch") {
    const DomainSpec dom = domain_n(8);
    const Grid grid = build_grid(dom);
    InitialProfiles init;
    init.theta_compat_tol = 0.0;
    init.eta0 = [](double) { return 1.0; };
    init.v0 = [](double) { return 0.0; };
    init.theta0 = [&](double x) { return dom.theta_gamma + x; };  // equals theta_gamma at 0
    std::vector<std::string> warnings;
    initial_state(init, grid, dom, &warnings);
    CHECK(warnings.empty());
}

TEST_CASE("nonpositive initial profiles are rejected") {
    const DomainSpec dom = domain_n(8);
    const Grid grid = build_grid(dom);
    InitialProfiles init;
    init.eta0 = [](double x) { return 0.5 - x; };  // crosses zero inside
    init.v0 = [](double) { return 0.0; };
    init.theta0 = [&](double) { return dom.theta_gamma; };
    CHECK_THROWS_AS(initial_state(init, grid, dom, nullptr), std::domain_error);
}

TEST_CASE("derived is deterministic") {
    const EosSpec eos = nuc1_eos();
    const DomainSpec dom = domain_n(32);
    const Grid grid = build_grid(dom);
    State s = uniform_state(32, 0.7, 0.2);
    for (int i = 0; i < 32; ++i) {
        s.eta[static_cast<size_t>(i)] += 0.01 * std::sin(7.0 * i);
        s.theta[static_cast<size_t>(i)] += 0.01 * std::cos(3.0 * i);
        s.v[static_cast<size_t>(i) + 1] = 0.05 * std::sin(2.0 * i);
    }
    const DerivedFields a = derived(s, eos, dom, grid);
    const DerivedFields b = derived(s, eos, dom, grid);
    for (size_t i = 0; i < a.sigma.size(); ++i) {
        CHECK(a.sigma[i] == b.sigma[i]);
        CHECK(a.p[i] == b.p[i]);
    }
    for (size_t i = 0; i < a.pi.size(); ++i) CHECK(a.pi[i] == b.pi[i]);
}

} // TEST_SUITE
