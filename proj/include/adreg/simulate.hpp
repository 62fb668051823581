#pragma once

#include <map>
#include <optional>

#include "adreg/regulator.hpp"

// Fixed-step RK4 integration of the closed loop, trajectory recording,
// and convergence metrics.

namespace adreg {

struct SimConfig {
    double dt = 0.0;          // <= 0: resolved to min(1e-3, 0.1 / ell^{d+1})
    double t_final = 50.0;
    double exo_warmup = 30.0; // exosystem-only pre-integration
    int record_every = 0;     // <= 0: chosen to cap recorded points near 1e5

    double rho = 0.2;
    Vec w0{1.0, 0.0};
    Vec z0;                   // empty: zeros
    double x0 = 0.0;
    std::optional<RegulatorState> reg0;  // absent: zeros

    double output_tol = 1e-2;
    double param_tol = 5e-2;
    double divergence_guard = 1e8;
};

struct Trajectory {
    Vec times;
    std::vector<Vec> states;  // full closed-loop states at recorded times
    Vec controls;             // u
    Vec outputs;              // y_e = x
};

struct ConvergenceReport {
    double final_output_error = 0.0;
    std::optional<double> output_settle_time;
    double final_param_error = 0.0;
    Vec theta_hat_final;
    std::map<std::string, double> sup_norms;
    bool diverged = false;
    double stop_time = 0.0;
    std::string fault;
    double dt_used = 0.0;
    long steps = 0;
};

namespace detail {
struct Rk4Scratch {
    Vec k1, k2, k3, k4, tmp;
    void resize(size_t n) {
        k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n); tmp.resize(n);
    }
};
}  // namespace detail

// Classical fourth-order Runge-Kutta update. f(state, derivative_out).
// Nonfinite intermediate values abort with the offending stage named.
template <class F>
void rk4_step(F&& f, Vec& state, double dt, detail::Rk4Scratch& s) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
    const size_t n = state.size();
    s.resize(n);
    auto check = [&](const Vec& k, int stage) {
        if (!all_finite(k))
            throw std::runtime_error("rk4_step: nonfinite derivative at stage " +
                                     std::to_string(stage));
    };
    f(std::span<const double>(state), std::span<double>(s.k1));
    check(s.k1, 1);
    for (size_t i = 0; i < n; ++i) s.tmp[i] = state[i] + 0.5 * dt * s.k1[i];
    f(std::span<const double>(s.tmp), std::span<double>(s.k2));
    check(s.k2, 2);
    for (size_t i = 0; i < n; ++i) s.tmp[i] = state[i] + 0.5 * dt * s.k2[i];
    f(std::span<const double>(s.tmp), std::span<double>(s.k3));
    check(s.k3, 3);
    for (size_t i = 0; i < n; ++i) s.tmp[i] = state[i] + dt * s.k3[i];
    f(std::span<const double>(s.tmp), std::span<double>(s.k4));
    check(s.k4, 4);
    for (size_t i = 0; i < n; ++i)
        state[i] += dt / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
}

template <class F>
void rk4_step(F&& f, Vec& state, double dt) {
    detail::Rk4Scratch s;
    rk4_step(std::forward<F>(f), state, dt, s);
}

inline double resolve_dt(const SimConfig& cfg, const RegulatorGains& gains, int d) {
    if (cfg.dt > 0.0) return cfg.dt;
    // sigma_hat carries a factor ell^{d+1}; explicit integration needs
    // dt * ell^{d+1} small
    return std::min(1e-3, 0.1 / std::pow(gains.ell, d + 1));
}

inline int resolve_record_every(const SimConfig& cfg, long steps) {
    if (cfg.record_every >= 1) return cfg.record_every;
    return static_cast<int>(std::max<long>(1, steps / 100000));
}

// Integrate the exosystem alone and return w samples recorded every
// `stride` steps on [t_record_from, t_final].
inline std::vector<Vec> exo_trajectory(const SystemModel& model, double rho, Vec w,
                                       double dt, double t_record_from, double t_final,
                                       int stride) {
    std::vector<Vec> samples;
    detail::Rk4Scratch scratch;
    auto rhs = [&](std::span<const double> s, std::span<double> ds) {
        model.s_fn(rho, s, ds);
    };
    const long steps = static_cast<long>(std::llround(t_final / dt));
    for (long i = 0; i <= steps; ++i) {
        const double t = i * dt;
        if (t >= t_record_from - 1e-12 && i % stride == 0) samples.push_back(w);
        if (i < steps) rk4_step(rhs, w, dt, scratch);
    }
    return samples;
}

inline std::pair<Trajectory, ConvergenceReport> run(const SystemModel& model,
                                                    const RegulatorGains& gains,
                                                    const SimConfig& cfg) {
    const StateLayout L{StateLayout(model)};
    ClosedLoopSystem loop(model, gains);
    const double dt = resolve_dt(cfg, gains, model.d);
    detail::Rk4Scratch scratch;

    // exosystem warm-up, so the closed loop starts near the attractor
    Vec w = cfg.w0;
    if (static_cast<int>(w.size()) != model.exo_dim)
        throw std::invalid_argument("run: w0 has wrong dimension");
    {
        auto rhs = [&](std::span<const double> s, std::span<double> ds) {
            model.s_fn(cfg.rho, s, ds);
        };
        const long wsteps = static_cast<long>(std::llround(cfg.exo_warmup / dt));
        for (long i = 0; i < wsteps; ++i) rk4_step(rhs, w, dt, scratch);
    }

    Vec state(L.size(), 0.0);
    state[0] = cfg.rho;
    for (int i = 0; i < L.exo_dim; ++i) state[L.w() + i] = w[i];
    if (!cfg.z0.empty()) {
        if (static_cast<int>(cfg.z0.size()) != model.n)
            throw std::invalid_argument("run: z0 has wrong dimension");
        for (int i = 0; i < L.n; ++i) state[L.z() + i] = cfg.z0[i];
    }
    state[L.x()] = cfg.x0;
    if (cfg.reg0) {
        const RegulatorState& r = *cfg.reg0;
        if (static_cast<int>(r.eta.size()) != model.d ||
            static_cast<int>(r.theta_hat.size()) != model.q ||
            static_cast<int>(r.xi_hat.size()) != model.d)
            throw std::invalid_argument("run: reg0 has wrong dimensions");
        for (int i = 0; i < L.d; ++i) state[L.eta() + i] = r.eta[i];
        for (int i = 0; i < L.q; ++i) state[L.theta() + i] = r.theta_hat[i];
        for (int i = 0; i < L.d; ++i) state[L.xi() + i] = r.xi_hat[i];
        state[L.sigma()] = r.sigma_hat;
    }

    const long steps = static_cast<long>(std::llround(cfg.t_final / dt));
    const int stride = resolve_record_every(cfg, steps);

    Trajectory traj;
    ConvergenceReport rep;
    rep.dt_used = dt;
    rep.steps = steps;

    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.controls.push_back(loop.control(state));
        traj.outputs.push_back(state[L.x()]);
    };

    record(0.0);
    double t = 0.0;
    for (long i = 0; i < steps; ++i) {
        try {
            rk4_step(loop, state, dt, scratch);
        } catch (const std::runtime_error& e) {
            rep.diverged = true;
            rep.stop_time = t;
            rep.fault = e.what();
            break;
        }
        t = (i + 1) * dt;
        if (inf_norm(state) > cfg.divergence_guard) {
            rep.diverged = true;
            rep.stop_time = t;
            rep.fault = "state norm exceeded divergence guard";
            record(t);
            break;
        }
        if ((i + 1) % stride == 0 || i + 1 == steps) record(t);
    }
    if (!rep.diverged) rep.stop_time = t;

    const Vec& last = traj.states.back();
    rep.final_output_error = std::abs(last[L.x()]);
    rep.theta_hat_final.assign(last.begin() + L.theta(), last.begin() + L.theta() + L.q);
    Vec theta_star(L.q);
    model.theta_true(cfg.rho, theta_star);
    double perr = 0.0;
    for (int i = 0; i < L.q; ++i)
        perr = std::max(perr, std::abs(rep.theta_hat_final[i] - theta_star[i]));
    rep.final_param_error = perr;

    // settle time: first recorded instant after which |y_e| stays below tol
    if (!rep.diverged && cfg.t_final > 0.0) {
        std::optional<size_t> settle_idx;
        for (size_t i = traj.outputs.size(); i-- > 0;) {
            if (std::abs(traj.outputs[i]) <= cfg.output_tol)
                settle_idx = i;
            else
                break;
        }
        if (settle_idx && *settle_idx < traj.outputs.size() &&
            std::abs(traj.outputs.back()) <= cfg.output_tol)
            rep.output_settle_time = traj.times[*settle_idx];
    }

    auto sup_of = [&](int offset) {
        double m = 0.0;
        for (const Vec& s : traj.states) m = std::max(m, std::abs(s[offset]));
        return m;
    };
    for (int i = 0; i < L.exo_dim; ++i)
        rep.sup_norms["w" + std::to_string(i + 1)] = sup_of(L.w() + i);
    for (int i = 0; i < L.n; ++i)
        rep.sup_norms["z" + std::to_string(i + 1)] = sup_of(L.z() + i);
    rep.sup_norms["x"] = sup_of(L.x());
    for (int i = 0; i < L.d; ++i)
        rep.sup_norms["eta_" + std::to_string(i + 1)] = sup_of(L.eta() + i);
    for (int i = 0; i < L.q; ++i)
        rep.sup_norms["theta_hat_" + std::to_string(i + 1)] = sup_of(L.theta() + i);
    for (int i = 0; i < L.d; ++i)
        rep.sup_norms["xi_hat_" + std::to_string(i + 1)] = sup_of(L.xi() + i);
    rep.sup_norms["sigma_hat"] = sup_of(L.sigma());
    {
        double m = 0.0;
        for (double u : traj.controls) m = std::max(m, std::abs(u));
        rep.sup_norms["u"] = m;
    }
    return {std::move(traj), std::move(rep)};
}

// A sweep axis is one scenario parameter and the values it takes.
struct SweepAxis {
    std::string name;
    Vec values;
};

struct SweepRow {
    std::vector<std::pair<std::string, double>> params;
    ConvergenceReport report;
    std::string error;  // nonempty when the run itself failed
};

inline void apply_sweep_param(const std::string& name, double value, RegulatorGains& gains,
                              SimConfig& cfg) {
    if (name == "rho") cfg.rho = value;
    else if (name == "ell") { gains.ell = value; }
    else if (name == "kappa") gains.kappa = value;
    else if (name == "lambda") gains.lambda = value;
    else if (name == "x0") cfg.x0 = value;
    else if (name == "theta_hat0") {
        if (!cfg.reg0) throw std::invalid_argument("sweep: theta_hat0 needs initial regulator state");
        for (double& t : cfg.reg0->theta_hat) t = value;
    } else
        throw std::invalid_argument("sweep: unknown parameter name: " + name);
}

// Cartesian grid over the axes, rows in lexicographic order. Failures of
// individual points are recorded; the sweep continues.
inline std::vector<SweepRow> sweep(const SystemModel& model, const RegulatorGains& gains,
                                   const SimConfig& cfg, const std::vector<SweepAxis>& axes) {
    for (const auto& ax : axes) {
        if (ax.values.empty())
            throw std::invalid_argument("sweep: empty value list for " + ax.name);
        RegulatorGains g = gains;
        SimConfig c = cfg;
        apply_sweep_param(ax.name, ax.values[0], g, c);  // name check up front
    }
    std::vector<SweepRow> rows;
    std::vector<size_t> idx(axes.size(), 0);
    while (true) {
        SweepRow row;
        RegulatorGains g = gains;
        SimConfig c = cfg;
        if (!c.reg0) c.reg0 = RegulatorState::zeros(model.d, model.q);
        for (size_t a = 0; a < axes.size(); ++a) {
            apply_sweep_param(axes[a].name, axes[a].values[idx[a]], g, c);
            row.params.emplace_back(axes[a].name, axes[a].values[idx[a]]);
        }
        try {
            row.report = run(model, g, c).second;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
        // advance the rightmost axis first
        size_t a = axes.size();
        while (a-- > 0) {
            if (++idx[a] < axes[a].values.size()) break;
            idx[a] = 0;
            if (a == 0) return rows;
        }
        if (axes.empty()) return rows;
    }
}

}  // namespace adreg
