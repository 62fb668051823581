#pragma once

#include <fstream>
#include <sstream>

#include "adreg/analysis.hpp"

// Scenario files: a line-oriented `key = value` format (# comments).
// Vector values are comma-separated. Several keys accept "auto", resolved
// through the library's default recipes before a run; every resolved
// value is reported for audit.

namespace adreg {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioFile {
    std::string model = "example";
    double rho = 0.2;

    double lambda = 1.0;
    double ell = 10.0;
    double kappa = 30.0;
    std::optional<Vec> G;             // absent: auto (all F_e roots at -1)
    std::optional<double> g_last;
    std::optional<Vec> sat_levels;    // absent: auto via level rule
    std::optional<Vec> dz;            // c, a0, eps0; absent: auto via slope rule
    double eps0 = 0.05;
    std::optional<Vec> bounds;        // a1, a2..., a3; absent: attractor estimate
    bool allow_unstable_gains = false;

    double dt = 0.0;          // <= 0: auto
    double t_final = 50.0;
    double exo_warmup = 30.0;
    int record_every = 0;     // <= 0: auto

    Vec w0{1.0, 0.0};
    std::optional<Vec> z0;
    double x0 = 0.0;
    std::optional<Vec> eta0;
    std::optional<Vec> theta_hat0;
    std::optional<Vec> xi_hat0;
    double sigma_hat0 = 0.0;

    double output_tol = 1e-2;
    double param_tol = 5e-2;

    double xi_box_halfwidth = 1.0;  // sampling box for the level rule
    double level_margin = 1.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline Vec parse_vec(const std::string& text, const std::string& key) {
    Vec v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ScenarioError("empty component in value for " + key);
        try {
            size_t pos = 0;
            v.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ScenarioError("malformed number '" + item + "' for key " + key);
        }
    }
    if (v.empty()) throw ScenarioError("empty value for " + key);
    return v;
}

inline double parse_num(const std::string& text, const std::string& key) {
    const Vec v = parse_vec(text, key);
    if (v.size() != 1) throw ScenarioError("expected a single number for " + key);
    return v[0];
}

}  // namespace detail

inline ScenarioFile parse_scenario(std::istream& in) {
    ScenarioFile sc;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (val.empty())
            throw ScenarioError("line " + std::to_string(lineno) + ": empty value for " + key);
        const bool is_auto = (val == "auto");
        using detail::parse_num;
        using detail::parse_vec;

        if (key == "model") sc.model = val;
        else if (key == "rho") sc.rho = parse_num(val, key);
        else if (key == "lambda") sc.lambda = parse_num(val, key);
        else if (key == "ell") sc.ell = parse_num(val, key);
        else if (key == "kappa") sc.kappa = parse_num(val, key);
        else if (key == "g") { if (!is_auto) sc.G = parse_vec(val, key); }
        else if (key == "g_last") { if (!is_auto) sc.g_last = parse_num(val, key); }
        else if (key == "sat_levels") { if (!is_auto) sc.sat_levels = parse_vec(val, key); }
        else if (key == "dz") { if (!is_auto) sc.dz = parse_vec(val, key); }
        else if (key == "eps0") sc.eps0 = parse_num(val, key);
        else if (key == "bounds") { if (!is_auto) sc.bounds = parse_vec(val, key); }
        else if (key == "allow_unstable_gains") sc.allow_unstable_gains = (val == "true" || val == "1");
        else if (key == "dt") { if (!is_auto) sc.dt = parse_num(val, key); }
        else if (key == "t_final") sc.t_final = parse_num(val, key);
        else if (key == "exo_warmup") sc.exo_warmup = parse_num(val, key);
        else if (key == "record_every") { if (!is_auto) sc.record_every = static_cast<int>(parse_num(val, key)); }
        else if (key == "w0") sc.w0 = parse_vec(val, key);
        else if (key == "z0") sc.z0 = parse_vec(val, key);
        else if (key == "x0") sc.x0 = parse_num(val, key);
        else if (key == "eta0") sc.eta0 = parse_vec(val, key);
        else if (key == "theta_hat0") sc.theta_hat0 = parse_vec(val, key);
        else if (key == "xi_hat0") sc.xi_hat0 = parse_vec(val, key);
        else if (key == "sigma_hat0") sc.sigma_hat0 = parse_num(val, key);
        else if (key == "output_tol") sc.output_tol = parse_num(val, key);
        else if (key == "param_tol") sc.param_tol = parse_num(val, key);
        else if (key == "xi_box_halfwidth") sc.xi_box_halfwidth = parse_num(val, key);
        else if (key == "level_margin") sc.level_margin = parse_num(val, key);
        else throw ScenarioError("line " + std::to_string(lineno) + ": unknown key " + key);
    }
    return sc;
}

inline ScenarioFile load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ScenarioError("cannot read scenario file: " + path);
    return parse_scenario(f);
}

// A scenario with every "auto" entry resolved to a concrete value.
struct ResolvedScenario {
    const SystemModel* model = nullptr;
    RegulatorGains gains;
    SimConfig config;
    BoundConstants bounds;
    std::vector<std::pair<std::string, Vec>> resolved;  // audit trail of auto choices
};

inline ResolvedScenario resolve_scenario(const ScenarioFile& sc) {
    ResolvedScenario r;
    const SystemModel& model = find_model(sc.model);
    r.model = &model;
    const int d = model.d;
    const int q = model.q;

    r.gains.lambda = sc.lambda;
    r.gains.ell = sc.ell;
    r.gains.kappa = sc.kappa;
    if (sc.G) {
        if (static_cast<int>(sc.G->size()) != d)
            throw ScenarioError("observer gain vector g must have length " + std::to_string(d));
        r.gains.G = *sc.G;
        r.gains.g_last = sc.g_last.value_or(1.0);
    } else {
        auto [G, g_last] = default_observer_gains(d);
        r.gains.G = G;
        r.gains.g_last = sc.g_last.value_or(g_last);
        Vec audit = G;
        audit.push_back(r.gains.g_last);
        r.resolved.emplace_back("observer_gains", audit);
    }

    // attractor samples feed the bound estimate and the level rule
    std::vector<Vec> taus;
    const Vec rho_grid = grid_axis(model.default_sets.P.lo[0], model.default_sets.P.hi[0], 3);
    auto need_taus = [&]() -> const std::vector<Vec>& {
        if (taus.empty()) taus = attractor_tau_samples(model, rho_grid);
        return taus;
    };

    if (sc.bounds) {
        if (static_cast<int>(sc.bounds->size()) != q + 2)
            throw ScenarioError("bounds must be a1, a2_1..a2_q, a3");
        r.bounds.a1 = (*sc.bounds)[0];
        r.bounds.a2.assign(sc.bounds->begin() + 1, sc.bounds->begin() + 1 + q);
        r.bounds.a3 = (*sc.bounds)[q + 1];
    } else {
        r.bounds = estimate_bounds_on_attractor(model, need_taus(),
                                                model.default_sets.theta_halfwidth);
        Vec audit{r.bounds.a1};
        audit.insert(audit.end(), r.bounds.a2.begin(), r.bounds.a2.end());
        audit.push_back(r.bounds.a3);
        r.resolved.emplace_back("bounds", audit);
    }

    if (sc.dz) {
        if (static_cast<int>(sc.dz->size()) != 3)
            throw ScenarioError("dz must be c, a0, eps0");
        r.gains.dz_params.assign(q, DeadZoneParams{(*sc.dz)[0], (*sc.dz)[1], (*sc.dz)[2]});
    } else {
        r.gains.dz_params = default_deadzone(model, model.default_sets.P, r.bounds, sc.eps0);
        Vec audit;
        for (const auto& p : r.gains.dz_params) {
            audit.push_back(p.c);
            audit.push_back(p.a0);
            audit.push_back(p.eps0);
        }
        r.resolved.emplace_back("dz_params", audit);
    }

    if (sc.sat_levels) {
        if (static_cast<int>(sc.sat_levels->size()) != d + 1)
            throw ScenarioError("sat_levels must have length " + std::to_string(d + 1));
        r.gains.sat_levels.clear();
        for (double l : *sc.sat_levels) r.gains.sat_levels.push_back(SatParams{l});
    } else {
        Box xi_box{Vec(d, -sc.xi_box_halfwidth), Vec(d, sc.xi_box_halfwidth)};
        r.gains.sat_levels =
            saturation_levels(xi_box, model, sc.lambda, sc.level_margin, need_taus(),
                              model.default_sets.theta_halfwidth, rho_grid);
        Vec audit;
        for (const auto& l : r.gains.sat_levels) audit.push_back(l.level);
        r.resolved.emplace_back("sat_levels", audit);
    }

    if (!sc.allow_unstable_gains) {
        const auto issues = validate_gains(r.gains, d, q, &r.bounds);
        if (!issues.empty()) {
            std::string msg = "invalid gains:";
            for (const auto& s : issues) msg += " " + s + ";";
            throw ScenarioError(msg);
        }
    }

    r.config.dt = sc.dt;
    r.config.t_final = sc.t_final;
    r.config.exo_warmup = sc.exo_warmup;
    r.config.record_every = sc.record_every;
    r.config.rho = sc.rho;
    r.config.w0 = sc.w0;
    if (sc.z0) r.config.z0 = *sc.z0;
    RegulatorState reg0 = RegulatorState::zeros(d, q);
    if (sc.eta0) reg0.eta = *sc.eta0;
    if (sc.theta_hat0) reg0.theta_hat = *sc.theta_hat0;
    if (sc.xi_hat0) reg0.xi_hat = *sc.xi_hat0;
    reg0.sigma_hat = sc.sigma_hat0;
    r.config.reg0 = reg0;
    r.config.x0 = sc.x0;
    r.config.output_tol = sc.output_tol;
    r.config.param_tol = sc.param_tol;
    if (sc.dt <= 0.0)
        r.resolved.emplace_back("dt", Vec{resolve_dt(r.config, r.gains, d)});
    return r;
}

}  // namespace adreg
