#include "nslag/config.hpp"
#include "nslag/driver.hpp"
#include "nslag/output.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

using namespace nslag;

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    RunConfig cfg = parse_config(config_path);
    const int code = simulate_to_dir(cfg, out_dir);
    std::cout << "wrote " << out_dir << "/series.csv, steady.csv, summary.txt\n";
    return code;
}

// Shared by validate-eos and analyze-stationary: law membership report,
// infimum pressure, plateau flags, and the per-cell root table.
int cmd_analyze(const std::string& config_path, const std::string& out_dir,
                bool with_root_table) {
    RunConfig cfg = parse_config(config_path);
    Problem prob = build_problem(cfg);

    const EosValidationReport rep =
        validate(prob.eos, prob.ps.min, prob.ps.max, cfg.validation.eos_opts);
    std::cout << "eos: " << prob.eos.name << " ("
              << (prob.eos.family == EosSpec::Family::nuclear ? "nuclear"
                                                              : "thermoviscoelastic")
              << ")\n";
    for (const EosCheck& c : rep.checks) {
        std::cout << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name;
        if (!c.pass) std::cout << "  (" << c.witness << ")";
        std::cout << "\n";
    }
    for (const auto& w : rep.warnings) std::cout << "  note: " << w << "\n";

    const auto [blo, bhi] = root_bracket(cfg, prob);
    const InfPressureResult m =
        inf_pressure(prob.eos, prob.domain.theta_gamma, blo, bhi);
    if (m.unbounded_below)
        std::cout << "m(theta_gamma): unbounded below\n";
    else {
        std::cout << "m(theta_gamma) = " << fmt_g17(m.value);
        if (m.argmin) std::cout << " at eta = " << fmt_g17(*m.argmin);
        if (m.limit_at_large_eta) std::cout << " (limit at large eta)";
        std::cout << "\n";
    }
    std::cout << "p_S range: [" << fmt_g17(prob.ps.min) << ", " << fmt_g17(prob.ps.max)
              << "]\n";

    const auto plateaus = check_nondegeneracy(
        prob.eos, prob.domain.theta_gamma, prob.ps.min, prob.ps.max, blo, bhi,
        cfg.validation.nondegeneracy_window, cfg.validation.nondegeneracy_flat_tol);
    for (const Plateau& p : plateaus)
        std::cout << "degenerate plateau: eta in [" << fmt_g17(p.eta_lo) << ", "
                  << fmt_g17(p.eta_hi) << "] at level " << fmt_g17(p.level) << "\n";
    if (plateaus.empty()) std::cout << "no degenerate plateaus at this resolution\n";

    SteadyProfile profile = steady_profile(prob, blo, bhi, cfg.stationary.root_tol,
                                           cfg.stationary.scan_samples);
    if (with_root_table) {
        std::cout << "x, p_S, roots\n";
        for (int i = 0; i < prob.grid.n; ++i) {
            const size_t k = static_cast<size_t>(i);
            std::cout << fmt_g17(prob.grid.centers[k]) << ", "
                      << fmt_g17(prob.ps.cell_values[k]) << ", ";
            const auto& roots = profile.cells[k].roots.roots;
            for (size_t r = 0; r < roots.size(); ++r)
                std::cout << (r ? "; " : "") << fmt_g17(roots[r]);
            if (roots.empty()) std::cout << "(none)";
            std::cout << "\n";
        }
    }
    if (!profile.empty_cells.empty())
        std::cout << profile.empty_cells.size() << " cell(s) have no stationary root\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_steady_csv(out_dir + "/steady.csv", profile, prob.grid, prob.ps);
        std::cout << "wrote " << out_dir << "/steady.csv\n";
    }

    const bool ok = rep.all_pass() && plateaus.empty() && profile.empty_cells.empty();
    return ok ? 0 : 3;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1d Lagrangian viscous compressible heat-conducting flow lab"};
    app.require_subcommand(1);

    std::string config_path, out_dir, axis, values_csv;
    int jobs = 0;

    auto* sim = app.add_subcommand("simulate", "integrate a configured run");
    sim->add_option("--config", config_path, "config file")->required();
    sim->add_option("--out", out_dir, "output directory")->required();

    auto* veos = app.add_subcommand("validate-eos", "check law membership, m, plateaus");
    veos->add_option("--config", config_path, "config file")->required();

    auto* ana = app.add_subcommand("analyze-stationary",
                                   "per-cell stationary roots without dynamics");
    ana->add_option("--config", config_path, "config file")->required();
    ana->add_option("--out", out_dir, "optional directory for steady.csv");

    auto* swp = app.add_subcommand("sweep", "one run per axis value, in parallel");
    swp->add_option("--config", config_path, "config template")->required();
    swp->add_option("--axis", axis, "numeric config key, e.g. domain.p_gamma")->required();
    swp->add_option("--values", values_csv, "comma-separated values")->required();
    swp->add_option("--out", out_dir, "output directory")->required();
    swp->add_option("--jobs", jobs, "worker cap (default: hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out_dir);
        if (veos->parsed()) return cmd_analyze(config_path, "", false);
        if (ana->parsed()) return cmd_analyze(config_path, out_dir, true);
        if (swp->parsed()) {
            RunConfig cfg = nslag::parse_config(config_path);
            return nslag::run_sweep(cfg, axis, parse_values(values_csv), out_dir, jobs);
        }
    } catch (const nslag::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
