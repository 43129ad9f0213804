#include "nslag/driver.hpp"

#include "nslag/output.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

namespace fs = std::filesystem;

namespace nslag {

const char* to_string(StopReason r) {
    switch (r) {
    case StopReason::reached_t_end: return "reached_t_end";
    case StopReason::stabilized: return "stabilized";
    case StopReason::step_failure: return "step_failure";
    }
    return "unknown";
}

RunResult run(const RunConfig& cfg) {
    Problem prob = build_problem(cfg);
    RunResult res;
    State state = initial_state(build_initial(cfg), prob.grid, prob.domain,
                                &res.init_warnings);

    StepParams params;
    params.dt = cfg.solver.dt_init;
    params.dt_min = cfg.solver.dt_min;
    params.dt_max = cfg.solver.dt_max;
    params.picard_tol = cfg.solver.picard_tol;
    params.picard_max = cfg.solver.picard_max;
    params.positivity_floor = cfg.solver.positivity_floor;

    const auto& q_list = cfg.diagnostics.q_list;
    res.trajectory.push_back(diagnose(state, prob, q_list, 0.0, 0, 0.0));

    std::vector<double> snaps = cfg.output.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    size_t next_snap = 0;
    while (next_snap < snaps.size() && snaps[next_snap] <= 0.0) {
        res.snapshots.emplace_back(snaps[next_snap], state);
        ++next_snap;
    }

    const double t_end = cfg.solver.t_end;
    double below_since = std::numeric_limits<double>::infinity();
    res.stop_reason = StopReason::reached_t_end;

    while (state.t < t_end * (1.0 - 1e-14)) {
        const double remaining = t_end - state.t;
        const double controller_dt = params.dt;
        params.dt = std::min(params.dt, remaining);
        StepResult sr = step(state, prob, params);
        if (!sr.outcome.accepted) {
            res.stop_reason = StopReason::step_failure;
            break;
        }
        // the end-of-run clamp must not feed back into the controller
        if (sr.outcome.dt_used >= remaining * (1.0 - 1e-14))
            params.dt = std::min(std::max(params.dt, controller_dt), params.dt_max);

        const double residual = energy_balance_residual(state, sr.state, prob,
                                                        sr.outcome.dt_used);
        state = std::move(sr.state);
        ++res.steps;
        res.positivity_retries += sr.outcome.positivity_retries;
        res.contraction_violations += sr.outcome.contraction_violations;
        res.trajectory.push_back(diagnose(state, prob, q_list, sr.outcome.dt_used,
                                          sr.outcome.sweeps, residual));

        while (next_snap < snaps.size() && snaps[next_snap] <= state.t) {
            res.snapshots.emplace_back(snaps[next_snap], state);
            ++next_snap;
        }

        const DiagRecord& rec = res.trajectory.back();
        const bool below = rec.v_l2 < cfg.diagnostics.v_threshold &&
                           rec.dtheta_l2 < cfg.diagnostics.theta_threshold &&
                           rec.dp_l2 < cfg.diagnostics.p_threshold;
        if (below) {
            below_since = std::min(below_since, state.t);
            if (cfg.diagnostics.stop_on_stabilization && state.t > 0.0 &&
                state.t - below_since >= cfg.diagnostics.dwell_fraction * state.t &&
                state.t - below_since > 0.0) {
                res.stop_reason = StopReason::stabilized;
                break;
            }
        } else {
            below_since = std::numeric_limits<double>::infinity();
        }
    }

    res.final_state = std::move(state);
    return res;
}

namespace {

void write_summary(const std::string& path, const RunConfig& cfg,
                   const RunResult& res, const SteadyProfile& profile) {
    std::ofstream out(path, std::ios::binary);
    const auto& traj = res.trajectory;
    const DiagRecord& last = traj.back();

    out << "stop_reason: " << to_string(res.stop_reason) << "\n";
    out << "t_final: " << fmt_g17(last.t) << "\n";
    out << "steps: " << res.steps << "\n";
    out << "positivity_retries: " << res.positivity_retries << "\n";
    out << "contraction_violations: " << res.contraction_violations << "\n";
    for (const auto& w : res.init_warnings) out << "warning: " << w << "\n";

    double eta_min_run = traj.front().eta_min, eta_max_run = traj.front().eta_max;
    double max_abs_vint = 0.0;
    for (const DiagRecord& r : traj) {
        eta_min_run = std::min(eta_min_run, r.eta_min);
        eta_max_run = std::max(eta_max_run, r.eta_max);
        max_abs_vint = std::max(max_abs_vint, std::abs(r.v_integral));
    }
    out << "eta_min_run: " << fmt_g17(eta_min_run) << "\n";
    out << "eta_max_run: " << fmt_g17(eta_max_run) << "\n";
    out << "final_v_l2: " << fmt_g17(last.v_l2) << "\n";
    out << "final_dtheta_l2: " << fmt_g17(last.dtheta_l2) << "\n";
    out << "final_dp_l2: " << fmt_g17(last.dp_l2) << "\n";
    out << "final_V: " << fmt_g17(last.volume) << "\n";
    out << "initial_V: " << fmt_g17(traj.front().volume) << "\n";

    // first-passage times at the configured thresholds
    StabilizationThresholds th{cfg.diagnostics.v_threshold,
                               cfg.diagnostics.theta_threshold,
                               cfg.diagnostics.p_threshold,
                               cfg.diagnostics.dwell_fraction * last.t};
    const FirstPassage fp = convergence_metrics(traj, th);
    auto put = [&](const char* name, const std::optional<double>& v) {
        out << name << ": " << (v ? fmt_g17(*v) : std::string("absent")) << "\n";
    };
    put("first_passage_v", fp.v);
    put("first_passage_dtheta", fp.dtheta);
    put("first_passage_dp", fp.dp);

    // volume trend over the final third (expansion indicator)
    {
        const double t0 = last.t * 2.0 / 3.0;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        long m = 0;
        for (const DiagRecord& r : traj) {
            if (r.t < t0 || !(r.volume > 0.0)) continue;
            const double y = std::log(r.volume);
            sx += r.t; sy += y; sxx += r.t * r.t; sxy += r.t * y;
            ++m;
        }
        const double denom = m * sxx - sx * sx;
        const double slope = (m >= 2 && denom != 0.0) ? (m * sxy - sx * sy) / denom : 0.0;
        out << "logV_slope_final_third: " << fmt_g17(slope) << "\n";
    }

    // borderline-case indicators
    out << "max_abs_v_integral: " << fmt_g17(max_abs_vint) << "\n";
    out << "initial_abs_v_integral: " << fmt_g17(std::abs(traj.front().v_integral)) << "\n";
    {
        bool increasing = true;
        const double t0 = last.t * 2.0 / 3.0;
        double prev = -std::numeric_limits<double>::infinity();
        for (const DiagRecord& r : traj) {
            if (r.t < t0) continue;
            if (r.eta_first_cell <= prev) { increasing = false; break; }
            prev = r.eta_first_cell;
        }
        out << "eta_first_cell_increasing_final_third: " << (increasing ? "true" : "false") << "\n";
    }
    out << "eta_first_cell_final: " << fmt_g17(last.eta_first_cell) << "\n";

    out << "mixed_phase: " << (profile.mixed_phase ? "true" : "false") << "\n";
    out << "cells_without_roots: " << profile.empty_cells.size() << "\n";
}

std::string snapshot_name(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", t);
    return std::string("profile_t") + buf + ".csv";
}

} // namespace

int simulate_to_dir(const RunConfig& cfg, const std::string& out_dir,
                    RunResult* result_out) {
    fs::create_directories(out_dir);
    Problem prob = build_problem(cfg);

    RunResult res = run(cfg);

    write_series_csv(out_dir + "/series.csv", res.trajectory, cfg.diagnostics.q_list,
                     cfg.output.stride);
    for (const auto& [t, s] : res.snapshots)
        write_profile_csv(out_dir + "/" + snapshot_name(t), s, prob.grid);
    write_profile_csv(out_dir + "/profile_final.csv", res.final_state, prob.grid);

    const auto [blo, bhi] = root_bracket(cfg, prob);
    SteadyProfile profile = steady_profile(prob, blo, bhi, cfg.stationary.root_tol,
                                           cfg.stationary.scan_samples);
    classify_limit(profile, res.final_state, prob.eos, prob.domain.theta_gamma);
    write_steady_csv(out_dir + "/steady.csv", profile, prob.grid, prob.ps);
    write_summary(out_dir + "/summary.txt", cfg, res, profile);

    const int code = res.stop_reason == StopReason::step_failure ? 2 : 0;
    if (result_out) *result_out = std::move(res);
    return code;
}

void apply_axis_override(RunConfig& cfg, const std::string& axis, double value) {
    auto fail = [&]() {
        throw ConfigError({"sweep axis must name a numeric config key, got '" + axis + "'"});
    };
    const auto dot = axis.find('.');
    if (dot == std::string::npos) fail();
    const std::string sec = axis.substr(0, dot);
    const std::string key = axis.substr(dot + 1);

    if (sec == "domain") {
        if (key == "M") cfg.domain.M = value;
        else if (key == "p_gamma") cfg.domain.p_gamma = value;
        else if (key == "theta_gamma") cfg.domain.theta_gamma = value;
        else if (key == "n") cfg.domain.n = static_cast<int>(value);
        else fail();
    } else if (sec == "eos") {
        if (key == "cV") cfg.eos.cV = value;
        else if (key == "nu") cfg.eos.nu = value;
        else fail();
    } else if (sec == "solver") {
        if (key == "dt_init") cfg.solver.dt_init = value;
        else if (key == "dt_max") cfg.solver.dt_max = value;
        else if (key == "t_end") cfg.solver.t_end = value;
        else if (key == "picard_tol") cfg.solver.picard_tol = value;
        else fail();
    } else {
        fail();
    }
}

int run_sweep(const RunConfig& base, const std::string& axis,
              const std::vector<double>& values, const std::string& out_dir,
              int jobs) {
    if (values.empty())
        throw ConfigError({"sweep: empty value list"});
    // validate the axis name up front so a typo fails fast
    {
        RunConfig probe = base;
        apply_axis_override(probe, axis, values.front());
    }
    fs::create_directories(out_dir);

    if (jobs <= 0) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (const char* cap = std::getenv("NSLAG_SWEEP_JOBS"))
            jobs = std::min(jobs, std::max(1, std::atoi(cap)));
    }
    jobs = std::clamp<int>(jobs, 1, static_cast<int>(values.size()));

    std::vector<SweepRow> rows(values.size());
    std::atomic<size_t> cursor{0};
    std::atomic<bool> any_failed{false};

    auto worker = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= values.size()) return;
            SweepRow& row = rows[i];
            row.index = static_cast<int>(i);
            row.value = values[i];
            char sub[64];
            std::snprintf(sub, sizeof sub, "%03zu_%g", i, values[i]);
            row.dir = sub;
            const std::string dir = out_dir + "/" + sub;
            try {
                RunConfig cfg = base;
                apply_axis_override(cfg, axis, values[i]);
                validate_config(cfg);
                RunResult res;
                simulate_to_dir(cfg, dir, &res);
                const DiagRecord& last = res.trajectory.back();
                row.status = "completed";
                row.stop_reason = to_string(res.stop_reason);
                row.steps = res.steps;
                row.final_volume = last.volume;
                row.final_v_l2 = last.v_l2;
                row.final_dtheta_l2 = last.dtheta_l2;
                row.final_dp_l2 = last.dp_l2;
                double mn = res.trajectory.front().eta_min, mx = res.trajectory.front().eta_max;
                for (const DiagRecord& r : res.trajectory) {
                    mn = std::min(mn, r.eta_min);
                    mx = std::max(mx, r.eta_max);
                }
                row.eta_min = mn;
                row.eta_max = mx;
            } catch (const std::exception& e) {
                row.status = "failed";
                std::string why = e.what();
                for (char& c : why)
                    if (c == ',' || c == '\n' || c == '\r') c = ';';
                row.stop_reason = why;
                any_failed = true;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    write_sweep_index(out_dir + "/sweep_index.csv", rows);
    return any_failed ? 2 : 0;
}

} // namespace nslag
