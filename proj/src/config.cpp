#include "nslag/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nslag {

std::string ConfigError::join(const std::vector<std::string>& list) {
    std::string out = "config error";
    for (const auto& s : list) out += "\n  - " + s;
    return out;
}

namespace {

struct RawValue {
    std::string text;
    int line = 0;
    bool used = false;
};

// section -> key -> value, from the TOML-compatible subset:
// [section] headers, key = value lines, '#' comments, quoted strings,
// [v1, v2, ...] arrays, bare numbers and booleans.
struct RawConfig {
    std::map<std::string, std::map<std::string, RawValue>> sections;
    std::string origin;
};

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

RawConfig parse_raw(const std::string& text, const std::string& origin,
                    std::vector<std::string>& issues) {
    RawConfig raw;
    raw.origin = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside quotes
        bool in_quote = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            else if (line[i] == '#' && !in_quote) { line.erase(i); break; }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back(origin + ":" + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                issues.push_back(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back(origin + ":" + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) {
            issues.push_back(origin + ":" + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (section.empty()) {
            issues.push_back(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
            continue;
        }
        if (raw.sections[section].count(key))
            issues.push_back(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                             section + "." + key + "'");
        raw.sections[section][key] = {val, lineno, false};
    }
    return raw;
}

class Reader {
public:
    Reader(RawConfig& raw, std::vector<std::string>& issues)
        : raw_(raw), issues_(issues) {}

    bool has(const std::string& sec, const std::string& key) {
        auto s = raw_.sections.find(sec);
        return s != raw_.sections.end() && s->second.count(key) > 0;
    }

    std::string where(const std::string& sec, const std::string& key) {
        return raw_.origin + ":" + std::to_string(raw_.sections[sec][key].line) + ": " +
               sec + "." + key;
    }

    void number(const std::string& sec, const std::string& key, double& out) {
        if (!has(sec, key)) return;
        RawValue& v = raw_.sections[sec][key];
        v.used = true;
        try {
            size_t pos = 0;
            out = std::stod(v.text, &pos);
            if (pos != v.text.size()) throw std::invalid_argument("");
        } catch (...) {
            issues_.push_back(where(sec, key) + ": not a number: " + v.text);
        }
    }

    void integer(const std::string& sec, const std::string& key, int& out) {
        double d = out;
        if (!has(sec, key)) return;
        number(sec, key, d);
        if (d != std::floor(d))
            issues_.push_back(where(sec, key) + ": expected an integer");
        out = static_cast<int>(d);
    }

    void boolean(const std::string& sec, const std::string& key, bool& out) {
        if (!has(sec, key)) return;
        RawValue& v = raw_.sections[sec][key];
        v.used = true;
        if (v.text == "true") out = true;
        else if (v.text == "false") out = false;
        else issues_.push_back(where(sec, key) + ": expected true or false");
    }

    void string(const std::string& sec, const std::string& key, std::string& out) {
        if (!has(sec, key)) return;
        RawValue& v = raw_.sections[sec][key];
        v.used = true;
        if (v.text.size() >= 2 && v.text.front() == '"' && v.text.back() == '"')
            out = v.text.substr(1, v.text.size() - 2);
        else
            issues_.push_back(where(sec, key) + ": expected a quoted string");
    }

    void number_array(const std::string& sec, const std::string& key,
                      std::vector<double>& out) {
        if (!has(sec, key)) return;
        RawValue& v = raw_.sections[sec][key];
        v.used = true;
        std::string t = trim(v.text);
        if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
            issues_.push_back(where(sec, key) + ": expected [v1, v2, ...]");
            return;
        }
        out.clear();
        std::string body = t.substr(1, t.size() - 2);
        std::istringstream bs(body);
        std::string item;
        while (std::getline(bs, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (...) {
                issues_.push_back(where(sec, key) + ": bad array element: " + item);
            }
        }
    }

    void finish() {
        for (auto& [sec, keys] : raw_.sections)
            for (auto& [key, v] : keys)
                if (!v.used)
                    issues_.push_back(raw_.origin + ":" + std::to_string(v.line) +
                                      ": unknown key '" + sec + "." + key + "'");
    }

private:
    RawConfig& raw_;
    std::vector<std::string>& issues_;
};

Expr parse_expr_or(const std::string& src, const std::string& label,
                   std::vector<std::string>& issues) {
    try {
        return Expr::parse(src);
    } catch (const ExprError& e) {
        issues.push_back(label + ": " + e.what());
        return {};
    }
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::vector<std::string> issues;
    RawConfig raw = parse_raw(text, origin, issues);
    Reader rd(raw, issues);
    RunConfig cfg;

    rd.string("eos", "builtin", cfg.eos.builtin);
    rd.string("eos", "family", cfg.eos.family);
    rd.string("eos", "P0", cfg.eos.P0);
    rd.string("eos", "P1", cfg.eos.P1);
    rd.string("eos", "p0", cfg.eos.p0);
    rd.string("eos", "p1", cfg.eos.p1);
    rd.string("eos", "kappa", cfg.eos.kappa);
    rd.number("eos", "cV", cfg.eos.cV);
    rd.number("eos", "nu", cfg.eos.nu);
    rd.number("eos", "kappa_lo", cfg.eos.kappa_lo);
    rd.number("eos", "kappa_hi", cfg.eos.kappa_hi);
    rd.number("eos", "eta_check", cfg.eos.eta_check);
    rd.number("eos", "eta_hat", cfg.eos.eta_hat);
    rd.number("eos", "eta_min", cfg.eos.eta_min);
    rd.number("eos", "eta_max", cfg.eos.eta_max);

    rd.number("domain", "M", cfg.domain.M);
    rd.integer("domain", "n", cfg.domain.n);
    rd.number("domain", "p_gamma", cfg.domain.p_gamma);
    rd.number("domain", "theta_gamma", cfg.domain.theta_gamma);
    rd.string("domain", "g", cfg.domain.g);
    rd.number_array("domain", "g_table", cfg.domain.g_table);

    rd.string("initial", "eta0", cfg.initial.eta0);
    rd.string("initial", "v0", cfg.initial.v0);
    rd.string("initial", "theta0", cfg.initial.theta0);
    rd.number("initial", "theta_compat_tol", cfg.initial.theta_compat_tol);

    rd.number("solver", "dt_init", cfg.solver.dt_init);
    rd.number("solver", "dt_min", cfg.solver.dt_min);
    rd.number("solver", "dt_max", cfg.solver.dt_max);
    rd.number("solver", "picard_tol", cfg.solver.picard_tol);
    rd.integer("solver", "picard_max", cfg.solver.picard_max);
    rd.number("solver", "positivity_floor", cfg.solver.positivity_floor);
    rd.number("solver", "t_end", cfg.solver.t_end);

    rd.number_array("diagnostics", "q_list", cfg.diagnostics.q_list);
    rd.number("diagnostics", "v_threshold", cfg.diagnostics.v_threshold);
    rd.number("diagnostics", "theta_threshold", cfg.diagnostics.theta_threshold);
    rd.number("diagnostics", "p_threshold", cfg.diagnostics.p_threshold);
    rd.number("diagnostics", "dwell_fraction", cfg.diagnostics.dwell_fraction);
    rd.boolean("diagnostics", "stop_on_stabilization", cfg.diagnostics.stop_on_stabilization);

    rd.integer("output", "stride", cfg.output.stride);
    rd.number_array("output", "snapshot_times", cfg.output.snapshot_times);

    rd.boolean("validation", "allow_nonpositive_ps", cfg.validation.allow_nonpositive_ps);
    rd.number("validation", "ps_floor", cfg.validation.ps_floor);
    rd.integer("validation", "eos_samples", cfg.validation.eos_opts.samples);
    rd.number("validation", "box_eta_lo", cfg.validation.eos_opts.box_eta_lo);
    rd.number("validation", "box_eta_hi", cfg.validation.eos_opts.box_eta_hi);
    rd.number("validation", "box_theta_lo", cfg.validation.eos_opts.box_theta_lo);
    rd.number("validation", "box_theta_hi", cfg.validation.eos_opts.box_theta_hi);
    rd.number("validation", "p0_blowup_threshold", cfg.validation.eos_opts.p0_blowup_threshold);
    rd.number("validation", "p0_tail_tol", cfg.validation.eos_opts.p0_tail_tol);
    rd.number("validation", "eta_p1_bound", cfg.validation.eos_opts.eta_p1_bound);
    rd.number("validation", "nondegeneracy_window", cfg.validation.nondegeneracy_window);
    rd.number("validation", "nondegeneracy_flat_tol", cfg.validation.nondegeneracy_flat_tol);

    rd.number("stationary", "bracket_lo", cfg.stationary.bracket_lo);
    rd.number("stationary", "bracket_hi", cfg.stationary.bracket_hi);
    rd.number("stationary", "root_tol", cfg.stationary.root_tol);
    rd.number("stationary", "residual_tol", cfg.stationary.residual_tol);
    rd.number("stationary", "class_tol", cfg.stationary.class_tol);
    rd.integer("stationary", "scan_samples", cfg.stationary.scan_samples);

    rd.finish();
    if (!issues.empty()) throw ConfigError(std::move(issues));

    validate_config(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot open config file: " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void validate_config(const RunConfig& cfg) {
    std::vector<std::string> issues;

    const bool builtin = !cfg.eos.builtin.empty();
    if (builtin && cfg.eos.builtin != "nuc1" && cfg.eos.builtin != "tve1")
        issues.push_back("eos.builtin must be nuc1 or tve1, got '" + cfg.eos.builtin + "'");
    if (!builtin) {
        if (cfg.eos.family != "nuclear" && cfg.eos.family != "thermoviscoelastic")
            issues.push_back("eos.family must be nuclear or thermoviscoelastic");
        auto need = [&](const std::string& v, const char* label) {
            if (v.empty()) issues.push_back(std::string(label) + " required for a custom law");
            else parse_expr_or(v, label, issues);
        };
        need(cfg.eos.P0, "eos.P0");
        need(cfg.eos.P1, "eos.P1");
        need(cfg.eos.p0, "eos.p0");
        need(cfg.eos.p1, "eos.p1");
        parse_expr_or(cfg.eos.kappa, "eos.kappa", issues);
        if (cfg.eos.family == "thermoviscoelastic" &&
            !(cfg.eos.eta_check > 0.0 && cfg.eos.eta_check <= cfg.eos.eta_hat))
            issues.push_back("thermoviscoelastic law needs 0 < eta_check <= eta_hat");
    }
    if (!(cfg.eos.cV > 0.0)) issues.push_back("eos.cV must be positive");
    if (!(cfg.eos.nu > 0.0)) issues.push_back("eos.nu must be positive");
    if (!(cfg.eos.kappa_lo > 0.0) || !(cfg.eos.kappa_hi >= cfg.eos.kappa_lo))
        issues.push_back("need 0 < kappa_lo <= kappa_hi");
    if (!(cfg.eos.eta_min > 0.0) || !(cfg.eos.eta_min < cfg.eos.eta_max))
        issues.push_back("need 0 < eos.eta_min < eos.eta_max");

    if (!(cfg.domain.M > 0.0)) issues.push_back("domain.M must be positive");
    if (cfg.domain.n < 2) issues.push_back("domain.n must be at least 2");
    if (!(cfg.domain.theta_gamma > 0.0))
        issues.push_back("domain.theta_gamma must be positive");
    if (!cfg.domain.g_table.empty() && cfg.domain.g != "0")
        issues.push_back("give domain.g or domain.g_table, not both");
    if (cfg.domain.g_table.empty())
        parse_expr_or(cfg.domain.g, "domain.g", issues);

    auto need_profile = [&](const std::string& v, const char* label) {
        if (v.empty()) issues.push_back(std::string(label) + " is required");
        else parse_expr_or(v, label, issues);
    };
    need_profile(cfg.initial.eta0, "initial.eta0");
    need_profile(cfg.initial.v0, "initial.v0");
    need_profile(cfg.initial.theta0, "initial.theta0");

    if (!(cfg.solver.dt_init > 0.0)) issues.push_back("solver.dt_init must be positive");
    if (!(cfg.solver.dt_min > 0.0) || cfg.solver.dt_min > cfg.solver.dt_init ||
        cfg.solver.dt_init > cfg.solver.dt_max)
        issues.push_back("need 0 < dt_min <= dt_init <= dt_max");
    if (!(cfg.solver.picard_tol > 0.0)) issues.push_back("solver.picard_tol must be positive");
    if (cfg.solver.picard_max < 1) issues.push_back("solver.picard_max must be >= 1");
    if (!(cfg.solver.positivity_floor > 0.0) || cfg.solver.positivity_floor >= 1.0)
        issues.push_back("solver.positivity_floor must lie in (0, 1)");
    if (cfg.solver.t_end < 0.0) issues.push_back("solver.t_end must be nonnegative");

    for (double q : cfg.diagnostics.q_list)
        if (!(q >= 1.0) && !std::isinf(q))
            issues.push_back("diagnostics.q_list entries must be >= 1 or inf");
    if (!(cfg.diagnostics.dwell_fraction >= 0.0) || cfg.diagnostics.dwell_fraction >= 1.0)
        issues.push_back("diagnostics.dwell_fraction must lie in [0, 1)");
    if (cfg.output.stride < 1) issues.push_back("output.stride must be >= 1");

    if (cfg.stationary.scan_samples < 256)
        issues.push_back("stationary.scan_samples must be >= 256");
    if (!(cfg.stationary.root_tol > 0.0)) issues.push_back("stationary.root_tol must be positive");

    // admissible-data cross-checks need a constructible problem
    if (issues.empty()) {
        try {
            RunConfig probe = cfg;
            Problem prob = build_problem(probe);
            const bool nuclear = prob.eos.family == EosSpec::Family::nuclear;
            if (nuclear && !cfg.validation.allow_nonpositive_ps &&
                prob.ps.min < cfg.validation.ps_floor)
                issues.push_back(
                    "nuclear family requires min p_S >= ps_floor = " +
                    std::to_string(cfg.validation.ps_floor) + " (got " +
                    std::to_string(prob.ps.min) +
                    "); set validation.allow_nonpositive_ps = true to opt out");
            if (!cfg.eos.builtin.empty()) {
                // nothing further: built-ins are consistent by construction
            } else {
                std::string msg;
                if (!check_derivative_consistency(prob.eos, cfg.eos.eta_min * 10,
                                                  std::min(cfg.eos.eta_max / 10, 1e6), 64,
                                                  1e-6, &msg))
                    issues.push_back("eos derivative cross-check failed: " + msg);
            }
            // initial data must be admissible on the grid
            InitialProfiles init = build_initial(cfg);
            for (double x : prob.grid.centers) {
                if (!(init.eta0(x) > 0.0)) {
                    issues.push_back("initial.eta0 nonpositive at x=" + std::to_string(x));
                    break;
                }
                if (!(init.theta0(x) > 0.0)) {
                    issues.push_back("initial.theta0 nonpositive at x=" + std::to_string(x));
                    break;
                }
            }
        } catch (const std::exception& e) {
            issues.push_back(std::string("problem construction failed: ") + e.what());
        }
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));
}

EosSpec build_eos(const RunConfig& cfg) {
    EosSpec s;
    if (cfg.eos.builtin == "nuc1") s = nuc1_eos();
    else if (cfg.eos.builtin == "tve1") s = tve1_eos();
    else {
        s.name = "custom";
        s.family = cfg.eos.family == "nuclear" ? EosSpec::Family::nuclear
                                               : EosSpec::Family::thermoviscoelastic;
        const Expr P0 = Expr::parse(cfg.eos.P0);
        const Expr P1 = Expr::parse(cfg.eos.P1);
        const Expr p0 = Expr::parse(cfg.eos.p0);
        const Expr p1 = Expr::parse(cfg.eos.p1);
        const Expr kap = Expr::parse(cfg.eos.kappa);
        s.P0 = [P0](double e) { return P0.eval(e); };
        s.P1 = [P1](double e) { return P1.eval(e); };
        s.p0 = [p0](double e) { return p0.eval(e); };
        s.p1 = [p1](double e) { return p1.eval(e); };
        s.kappa = [kap](double e, double th) { return kap.eval(e, 0.0, th); };
        s.kappa_lo = cfg.eos.kappa_lo;
        s.kappa_hi = cfg.eos.kappa_hi;
        s.eta_check = cfg.eos.eta_check;
        s.eta_hat = cfg.eos.eta_hat;
    }
    s.cV = cfg.eos.cV;
    s.nu = cfg.eos.nu;
    s.eta_min = cfg.eos.eta_min;
    s.eta_max = cfg.eos.eta_max;
    return s;
}

DomainSpec build_domain(const RunConfig& cfg) {
    DomainSpec d;
    d.total_mass = cfg.domain.M;
    d.cells = cfg.domain.n;
    d.p_gamma = cfg.domain.p_gamma;
    d.theta_gamma = cfg.domain.theta_gamma;
    if (!cfg.domain.g_table.empty()) {
        d.gravity_is_table = true;
        d.gravity_table = cfg.domain.g_table;
        d.gravity = nullptr;
    } else {
        const Expr g = Expr::parse(cfg.domain.g);
        const double M = cfg.domain.M;
        d.gravity = [g, M](double x) { return g.eval(x, M); };
    }
    return d;
}

Problem build_problem(const RunConfig& cfg) {
    return build_problem(build_eos(cfg), build_domain(cfg));
}

InitialProfiles build_initial(const RunConfig& cfg) {
    InitialProfiles init;
    const double M = cfg.domain.M;
    const Expr e0 = Expr::parse(cfg.initial.eta0);
    const Expr v0 = Expr::parse(cfg.initial.v0);
    const Expr t0 = Expr::parse(cfg.initial.theta0);
    init.eta0 = [e0, M](double x) { return e0.eval(x, M); };
    init.v0 = [v0, M](double x) { return v0.eval(x, M); };
    init.theta0 = [t0, M](double x) { return t0.eval(x, M); };
    init.theta_compat_tol = cfg.initial.theta_compat_tol;
    return init;
}

std::pair<double, double> root_bracket(const RunConfig& cfg, const Problem& prob) {
    if (cfg.stationary.bracket_lo > 0.0 && cfg.stationary.bracket_hi > cfg.stationary.bracket_lo)
        return {cfg.stationary.bracket_lo, cfg.stationary.bracket_hi};
    InitialProfiles init = build_initial(cfg);
    double lo = init.eta0(prob.grid.centers.front());
    double hi = lo;
    for (double x : prob.grid.centers) {
        const double e = init.eta0(x);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    lo = std::max(lo / 10.0, prob.eos.eta_min);
    hi = std::min(hi * 10.0, prob.eos.eta_max);
    return {lo, hi};
}

std::string preset_path(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return std::string(NSLAG_PRESET_DIR) + "/" + lower + ".toml";
}

std::vector<ScenarioPreset> scenario_presets() {
    return {
        {"S1", preset_path("S1"), "stabilization to the single-root profile"},
        {"S2", preset_path("S2"), "mixed-phase limit across two roots"},
        {"S3", preset_path("S3"), "unbounded expansion under a deep p_S dip"},
        {"S4", preset_path("S4"), "borderline p_S(0) = 0 monitoring"},
        {"S5", preset_path("S5"), "thermoviscoelastic stabilization without p_S positivity"},
    };
}

} // namespace nslag
