#include "nslag/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nslag {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

} // namespace

void write_series_csv(const std::string& path,
                      const std::vector<DiagRecord>& records,
                      const std::vector<double>& q_list, int stride) {
    auto out = open_out(path);
    out << "t,dt,sweeps,E,D,V,eta_min,eta_max,v_l2,v2_l2,dtheta_l2,dp_l2,v_l4,v_linf";
    for (double q : q_list) out << ",v_lq_" << fmt_g17(q);
    out << ",balance_residual,v_integral,eta_first_cell\n";
    if (stride < 1) stride = 1;
    for (size_t i = 0; i < records.size(); ++i) {
        if (i % static_cast<size_t>(stride) != 0 && i + 1 != records.size()) continue;
        const DiagRecord& r = records[i];
        out << fmt_g17(r.t) << ',' << fmt_g17(r.dt) << ',' << r.sweeps << ','
            << fmt_g17(r.energy) << ',' << fmt_g17(r.dissipation) << ','
            << fmt_g17(r.volume) << ',' << fmt_g17(r.eta_min) << ','
            << fmt_g17(r.eta_max) << ',' << fmt_g17(r.v_l2) << ','
            << fmt_g17(r.v2_l2) << ',' << fmt_g17(r.dtheta_l2) << ','
            << fmt_g17(r.dp_l2) << ',' << fmt_g17(r.v_l4) << ','
            << fmt_g17(r.v_linf);
        for (double v : r.v_lq) out << ',' << fmt_g17(v);
        out << ',' << fmt_g17(r.balance_residual) << ',' << fmt_g17(r.v_integral)
            << ',' << fmt_g17(r.eta_first_cell) << '\n';
    }
}

void write_profile_csv(const std::string& path, const State& s, const Grid& grid) {
    auto out = open_out(path);
    out << "x,eta,theta,v\n";
    for (int i = 0; i < grid.n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double vc = 0.5 * (s.v[k] + s.v[k + 1]);
        out << fmt_g17(grid.centers[k]) << ',' << fmt_g17(s.eta[k]) << ','
            << fmt_g17(s.theta[k]) << ',' << fmt_g17(vc) << '\n';
    }
}

void write_steady_csv(const std::string& path, const SteadyProfile& profile,
                      const Grid& grid, const StationaryPressure& ps) {
    auto out = open_out(path);
    out << "x,p_s,n_roots,roots,eta_final,selected_root,distance,p_residual\n";
    for (int i = 0; i < grid.n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const CellSteady& c = profile.cells[k];
        out << fmt_g17(grid.centers[k]) << ',' << fmt_g17(ps.cell_values[k]) << ','
            << c.roots.roots.size() << ',';
        for (size_t r = 0; r < c.roots.roots.size(); ++r) {
            if (r) out << ';';
            out << fmt_g17(c.roots.roots[r]);
        }
        out << ',';
        if (profile.classified) {
            out << fmt_g17(c.eta_final) << ',';
            if (c.selected) out << fmt_g17(*c.selected);
            out << ',' << fmt_g17(c.distance) << ',' << fmt_g17(c.p_residual);
        } else {
            out << ",,,";
        }
        out << '\n';
    }
}

void write_sweep_index(const std::string& path, const std::vector<SweepRow>& rows) {
    auto out = open_out(path);
    out << "index,value,dir,status,stop_reason,steps,final_V,final_v_l2,"
           "final_dtheta_l2,final_dp_l2,eta_min,eta_max\n";
    for (const SweepRow& r : rows) {
        out << r.index << ',' << fmt_g17(r.value) << ',' << r.dir << ',' << r.status
            << ',' << r.stop_reason << ',' << r.steps << ',' << fmt_g17(r.final_volume)
            << ',' << fmt_g17(r.final_v_l2) << ',' << fmt_g17(r.final_dtheta_l2)
            << ',' << fmt_g17(r.final_dp_l2) << ',' << fmt_g17(r.eta_min) << ','
            << fmt_g17(r.eta_max) << '\n';
    }
}

} // namespace nslag
