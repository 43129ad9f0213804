#include "nslag/config.hpp"

#include <doctest.h>

#include <cmath>

using namespace nslag;

namespace {

std::string minimal_config() {
    return R"cfg(
[eos]
builtin = "nuc1"

[domain]
M = 1.0
n = 8
p_gamma = 0.5
theta_gamma = 0.1

[initial]
eta0 = "0.4834"
theta0 = "0.1"
v0 = "0"

[solver]
t_end = 0.1
)cfg";
}

bool mentions(const ConfigError& e, const std::string& needle) {
    for (const auto& s : e.issues)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("shipped presets parse and validate") {
    for (const ScenarioPreset& p : scenario_presets()) {
        INFO(p.name);
        const RunConfig cfg = parse_config(p.file);
        CHECK(cfg.solver.t_end > 0.0);
        CHECK(cfg.domain.n >= 2);
    }
}

TEST_CASE("minimal config parses with defaults") {
    const RunConfig cfg = parse_config_text(minimal_config(), "mem");
    CHECK(cfg.eos.builtin == "nuc1");
    CHECK(cfg.solver.dt_init == doctest::Approx(1e-4));
    CHECK(cfg.diagnostics.stop_on_stabilization);
    CHECK(cfg.output.stride == 1);
}

TEST_CASE("negative boundary temperature is a validation error") {
    std::string text = minimal_config();
    const auto pos = text.find("theta_gamma = 0.1");
    text.replace(pos, 17, "theta_gamma = -1.0");
    try {
        parse_config_text(text, "mem");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "theta_gamma"));
    }
}

TEST_CASE("nuclear family demands positive stationary pressure") {
    std::string text = minimal_config();
    const auto pos = text.find("p_gamma = 0.5");
    text.replace(pos, 13, "p_gamma = -0.5");
    try {
        parse_config_text(text, "mem");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "p_S"));
        CHECK(mentions(e, "allow_nonpositive_ps"));
    }
    // the documented opt-out clears it
    text += "\n[validation]\nallow_nonpositive_ps = true\n";
    const RunConfig cfg = parse_config_text(text, "mem");
    CHECK(cfg.validation.allow_nonpositive_ps);
}

TEST_CASE("all violations are collected into one report") {
    std::string text = R"cfg(
[eos]
builtin = "nuc1"

[domain]
M = -1.0
n = 1
p_gamma = 0.5
theta_gamma = -0.1

[initial]
eta0 = "1"
theta0 = "0.1"
v0 = "0"

[solver]
t_end = -1.0
)cfg";
    try {
        parse_config_text(text, "mem");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.issues.size() >= 4);
        CHECK(mentions(e, "domain.M"));
        CHECK(mentions(e, "domain.n"));
        CHECK(mentions(e, "theta_gamma"));
        CHECK(mentions(e, "t_end"));
    }
}

TEST_CASE("unknown and duplicate keys are reported with line numbers") {
    std::string text = minimal_config() + "\n[solver]\nbogus_key = 1\n";
    try {
        parse_config_text(text, "mem");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "bogus_key"));
        CHECK(mentions(e, "mem:"));
    }
}

TEST_CASE("expression errors carry the offending key") {
    std::string text = minimal_config();
    const auto pos = text.find("v0 = \"0\"");
    text.replace(pos, 8, "v0 = \"sin(\"");
    try {
        parse_config_text(text, "mem");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "initial.v0"));
    }
}

TEST_CASE("custom law requires a consistent derivative set") {
    std::string text = R"cfg(
[eos]
family = "nuclear"
P0 = "-0.5*x^-2 + 0.5*x^-1"
p0 = "x^-3 - 0.7*x^-2"
P1 = "log(x)"
p1 = "1/x"

[domain]
M = 1.0
n = 8
p_gamma = 0.1
theta_gamma = 0.1
g = "0.1"

[initial]
eta0 = "1"
theta0 = "0.1"
v0 = "0"

[solver]
t_end = 0.1

[validation]
allow_nonpositive_ps = true
)cfg";
    try {
        parse_config_text(text, "mem");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "derivative"));
    }
    // the matching derivative passes
    auto pos = text.find("0.7");
    text.replace(pos, 3, "0.5");
    const RunConfig cfg = parse_config_text(text, "mem");
    const EosSpec eos = build_eos(cfg);
    CHECK(eos.family == EosSpec::Family::nuclear);
    CHECK(pressure(eos, 1.0, 0.1) == doctest::Approx(0.6));
}

TEST_CASE("builders reproduce the configured problem") {
    const RunConfig cfg = parse_config_text(minimal_config(), "mem");
    const Problem prob = build_problem(cfg);
    CHECK(prob.grid.n == 8);
    CHECK(prob.ps.min == doctest::Approx(0.5));
    const InitialProfiles init = build_initial(cfg);
    CHECK(init.eta0(0.3) == doctest::Approx(0.4834));
}

TEST_CASE("g and g_table are mutually exclusive; tables work") {
    std::string text = minimal_config() +
                       "\n[domain]\ng_table = [0.0, 0.4]\n";
    // duplicate [domain] section merges keys; g stays default "0" so
    // only the table applies
    const RunConfig cfg = parse_config_text(text, "mem");
    const DomainSpec dom = build_domain(cfg);
    CHECK(dom.gravity_is_table);
    CHECK(gravity_at(dom, 0.75) == doctest::Approx(0.4));

    std::string bad = text;
    const auto pos = bad.find("g_table");
    bad.insert(pos, "g = \"1\"\n");
    CHECK_THROWS_AS(parse_config_text(bad, "mem"), ConfigError);
}

TEST_CASE("default root bracket follows the initial data") {
    const RunConfig cfg = parse_config_text(minimal_config(), "mem");
    const Problem prob = build_problem(cfg);
    const auto [lo, hi] = root_bracket(cfg, prob);
    CHECK(lo == doctest::Approx(0.04834));
    CHECK(hi == doctest::Approx(4.834));
}

TEST_CASE("fixed stationary bracket wins over the default") {
    std::string text = minimal_config() +
                       "\n[stationary]\nbracket_lo = 0.01\nbracket_hi = 200.0\n";
    const RunConfig cfg = parse_config_text(text, "mem");
    const Problem prob = build_problem(cfg);
    const auto [lo, hi] = root_bracket(cfg, prob);
    CHECK(lo == doctest::Approx(0.01));
    CHECK(hi == doctest::Approx(200.0));
}

} // TEST_SUITE
