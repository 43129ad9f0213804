#include "nslag/driver.hpp"

#include "nslag/output.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace nslag;

namespace {

std::string tiny_config(double t_end) {
    std::ostringstream os;
    os << R"cfg(
[eos]
builtin = "nuc1"

[domain]
M = 1.0
n = 16
p_gamma = 0.5
theta_gamma = 0.1

[initial]
eta0 = "0.4834*(1 + 0.05*sin(2*pi*x))"
theta0 = "0.1*(1 + 0.05*sin(pi*x))"
v0 = "0.01*sin(pi*x)"

[solver]
dt_init = 1e-3
dt_max = 0.02
t_end = )cfg" << t_end << R"cfg(

[output]
stride = 1
snapshot_times = [0.0]
)cfg";
    return os.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t line_count(const std::string& text) {
    size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_SUITE("driver") {

TEST_CASE("t_end = 0 returns the initial record only") {
    const RunConfig cfg = parse_config_text(tiny_config(0.0), "mem");
    const RunResult res = run(cfg);
    CHECK(res.trajectory.size() == 1);
    CHECK(res.steps == 0);
    CHECK(res.stop_reason == StopReason::reached_t_end);

    fs::remove_all("drv_t0");
    CHECK(simulate_to_dir(cfg, "drv_t0") == 0);
    const std::string series = slurp("drv_t0/series.csv");
    CHECK(line_count(series) == 2);  // header + one row
    CHECK(fs::exists("drv_t0/steady.csv"));
    CHECK(fs::exists("drv_t0/summary.txt"));
    CHECK(fs::exists("drv_t0/profile_t0.csv"));
    fs::remove_all("drv_t0");
}

TEST_CASE("runs land exactly on t_end") {
    const RunConfig cfg = parse_config_text(tiny_config(0.05), "mem");
    const RunResult res = run(cfg);
    CHECK(res.final_state.t == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(res.stop_reason == StopReason::reached_t_end);
    CHECK(res.trajectory.size() == static_cast<size_t>(res.steps) + 1);
}

TEST_CASE("repeated runs emit byte-identical series") {
    const RunConfig cfg = parse_config_text(tiny_config(0.05), "mem");
    fs::remove_all("drv_det_a");
    fs::remove_all("drv_det_b");
    REQUIRE(simulate_to_dir(cfg, "drv_det_a") == 0);
    REQUIRE(simulate_to_dir(cfg, "drv_det_b") == 0);
    CHECK(slurp("drv_det_a/series.csv") == slurp("drv_det_b/series.csv"));
    CHECK(slurp("drv_det_a/steady.csv") == slurp("drv_det_b/steady.csv"));
    CHECK(slurp("drv_det_a/summary.txt") == slurp("drv_det_b/summary.txt"));
    fs::remove_all("drv_det_a");
    fs::remove_all("drv_det_b");
}

TEST_CASE("stabilization rule fires on a long run") {
    std::string text = tiny_config(50.0);
    const RunConfig cfg = parse_config_text(text, "mem");
    const RunResult res = run(cfg);
    CHECK(res.stop_reason == StopReason::stabilized);
    CHECK(res.final_state.t < 50.0);
    const DiagRecord& last = res.trajectory.back();
    CHECK(last.v_l2 < cfg.diagnostics.v_threshold);
    CHECK(last.dtheta_l2 < cfg.diagnostics.theta_threshold);
    CHECK(last.dp_l2 < cfg.diagnostics.p_threshold);
}

TEST_CASE("snapshots are emitted at the first crossing") {
    std::string text = tiny_config(0.05);
    text += "\n[output]\nsnapshot_times = [0.0, 0.02]\n";
    // override: last section wins for new keys; both times recorded
    const RunConfig cfg = parse_config_text(tiny_config(0.05), "mem");
    RunConfig cfg2 = cfg;
    cfg2.output.snapshot_times = {0.0, 0.02};
    const RunResult res = run(cfg2);
    REQUIRE(res.snapshots.size() == 2);
    CHECK(res.snapshots[0].first == 0.0);
    CHECK(res.snapshots[0].second.t == 0.0);
    CHECK(res.snapshots[1].first == doctest::Approx(0.02));
    CHECK(res.snapshots[1].second.t >= 0.02);
}

TEST_CASE("sweep: parallel output equals serial output") {
    const RunConfig base = parse_config_text(tiny_config(0.02), "mem");
    const std::vector<double> values = {0.5, 0.45, 0.55};
    fs::remove_all("drv_sweep_ser");
    fs::remove_all("drv_sweep_par");
    REQUIRE(run_sweep(base, "domain.p_gamma", values, "drv_sweep_ser", 1) == 0);
    REQUIRE(run_sweep(base, "domain.p_gamma", values, "drv_sweep_par", 3) == 0);

    CHECK(slurp("drv_sweep_ser/sweep_index.csv") == slurp("drv_sweep_par/sweep_index.csv"));
    for (const char* sub : {"000_0.5", "001_0.45", "002_0.55"}) {
        CHECK(slurp(std::string("drv_sweep_ser/") + sub + "/series.csv") ==
              slurp(std::string("drv_sweep_par/") + sub + "/series.csv"));
    }
    // index rows appear in input order
    const std::string idx = slurp("drv_sweep_ser/sweep_index.csv");
    CHECK(idx.find("000_0.5") < idx.find("001_0.45"));
    CHECK(idx.find("001_0.45") < idx.find("002_0.55"));
    fs::remove_all("drv_sweep_ser");
    fs::remove_all("drv_sweep_par");
}

TEST_CASE("sweep rejects empty value lists and bad axes") {
    const RunConfig base = parse_config_text(tiny_config(0.02), "mem");
    CHECK_THROWS_AS(run_sweep(base, "domain.p_gamma", {}, "drv_never"), ConfigError);
    CHECK_THROWS_AS(run_sweep(base, "domain.nope", {0.5}, "drv_never"), ConfigError);
    CHECK_THROWS_AS(run_sweep(base, "nonsense", {0.5}, "drv_never"), ConfigError);
    CHECK_FALSE(fs::exists("drv_never/sweep_index.csv"));
    fs::remove_all("drv_never");
}

TEST_CASE("sweep records per-run failures and keeps going") {
    RunConfig base = parse_config_text(tiny_config(0.02), "mem");
    // p_gamma = -1 violates the nuclear p_S check inside the sweep
    fs::remove_all("drv_sweep_fail");
    const int code = run_sweep(base, "domain.p_gamma", {0.5, -1.0}, "drv_sweep_fail", 2);
    CHECK(code == 2);
    const std::string idx = slurp("drv_sweep_fail/sweep_index.csv");
    CHECK(idx.find("completed") != std::string::npos);
    CHECK(idx.find("failed") != std::string::npos);
    fs::remove_all("drv_sweep_fail");
}

TEST_CASE("series formatting is locale-free with 17 significant digits") {
    CHECK(fmt_g17(0.1) == "0.10000000000000001");
    CHECK(fmt_g17(1.0) == "1");
    CHECK(fmt_g17(-2.5e-300) == "-2.5e-300");
    CHECK(fmt_g17(0.0) == "0");
}

} // TEST_SUITE
