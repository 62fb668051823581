#pragma once

#include <optional>

#include "adreg/model.hpp"
#include "adreg/prime.hpp"

// Adaptive internal model with extended-state observer, and the control
// law u = v_u + C_d eta with residual v_u = -kappa x.

namespace adreg {

struct RegulatorGains {
    double lambda = 1.0;
    double ell = 10.0;   // high-gain parameter
    double kappa = 30.0; // residual output feedback
    Vec G;               // observer gains g_1..g_d
    double g_last = 1.0; // g_{d+1}
    std::vector<SatParams> sat_levels;     // l_1..l_{d+1}
    std::vector<DeadZoneParams> dz_params; // one per parameter component
};

struct RegulatorState {
    Vec eta;       // internal model, R^d
    Vec theta_hat; // parameter estimate, R^q
    Vec xi_hat;    // observer state, R^d
    double sigma_hat = 0.0;

    static RegulatorState zeros(int d, int q) {
        RegulatorState s;
        s.eta.assign(d, 0.0);
        s.theta_hat.assign(q, 0.0);
        s.xi_hat.assign(d, 0.0);
        return s;
    }
};

// Returns a list of problems; empty means the gains are usable. The
// Hurwitz requirement on F_e and the strict dead-zone slope bounds are
// checked here once, not per integration step.
inline std::vector<std::string> validate_gains(const RegulatorGains& g, int d, int q,
                                               const BoundConstants* bounds = nullptr) {
    std::vector<std::string> issues;
    if (!(g.lambda > 0.0)) issues.push_back("lambda must be positive");
    if (!(g.ell > 0.0)) issues.push_back("ell must be positive");
    if (g.kappa < 0.0) issues.push_back("kappa must be nonnegative");
    if (static_cast<int>(g.G.size()) != d) {
        issues.push_back("observer gain vector G must have length d");
        return issues;
    }
    if (static_cast<int>(g.sat_levels.size()) != d + 1)
        issues.push_back("sat_levels must have length d+1");
    for (const auto& l : g.sat_levels)
        if (!(l.level > 0.0)) issues.push_back("saturation levels must be positive");
    if (static_cast<int>(g.dz_params.size()) != q)
        issues.push_back("dz_params must have length q");
    for (const auto& p : g.dz_params) {
        if (!(p.c > 0.0)) issues.push_back("dead-zone slope must be positive");
        if (!(p.eps0 > 0.0)) issues.push_back("dead-zone transition width must be positive");
        if (p.a0 < 0.0) issues.push_back("dead-zone threshold must be nonnegative");
    }
    if (!is_hurwitz(build_Fe(g.G, g.g_last)))
        issues.push_back("observer error matrix F_e is not Hurwitz");
    if (bounds && static_cast<int>(g.dz_params.size()) == q &&
        static_cast<int>(bounds->a2.size()) == q) {
        Vec eps0(q);
        for (int i = 0; i < q; ++i) eps0[i] = g.dz_params[i].eps0;
        const Vec lower = min_deadzone_slope(*bounds, eps0);
        for (int i = 0; i < q; ++i)
            if (!(g.dz_params[i].c > lower[i]))
                issues.push_back("dead-zone slope c_" + std::to_string(i + 1) +
                                 " does not exceed its lower bound");
    }
    return issues;
}

inline double control_input(const RegulatorGains& g, const RegulatorState& s, double y) {
    return -g.kappa * y + s.eta[0];
}

namespace detail {

// Shared core of the internal-model/observer dynamics, writing into
// caller-provided derivative spans. `beta_scratch` must have size q.
inline void regulator_rhs(const RegulatorGains& g, const SystemModel& model,
                          std::span<const double> eta, std::span<const double> theta_hat,
                          std::span<const double> xi_hat, double sigma_hat, double v_u,
                          std::span<double> deta, std::span<double> dtheta,
                          std::span<double> dxi, double& dsigma,
                          std::span<double> beta_scratch) {
    const int d = model.d;
    const int q = model.q;
    if (static_cast<int>(eta.size()) != d || static_cast<int>(xi_hat.size()) != d ||
        static_cast<int>(theta_hat.size()) != q ||
        static_cast<int>(g.G.size()) != d ||
        static_cast<int>(g.sat_levels.size()) != d + 1 ||
        static_cast<int>(g.dz_params.size()) != q)
        throw std::invalid_argument("regulator_rhs: dimension mismatch");
    if (!all_finite(eta) || !all_finite(theta_hat) || !all_finite(xi_hat) ||
        !std::isfinite(sigma_hat))
        throw std::runtime_error("regulator_rhs: nonfinite regulator state");

    const double sat_sigma = sat(sigma_hat, g.sat_levels[d]);
    const double innov = v_u + xi_hat[0];

    // shift dynamics plus drive terms
    for (int i = 0; i + 1 < d; ++i) {
        deta[i] = eta[i + 1];
        dxi[i] = xi_hat[i + 1];
    }
    deta[d - 1] = model.phi(theta_hat, eta);
    dxi[d - 1] = sigma_hat;

    // satv((A_d + lambda I) xi_hat) enters both eta and xi dynamics
    for (int i = 0; i < d; ++i) {
        const double arg =
            (i + 1 < d) ? g.lambda * xi_hat[i] + xi_hat[i + 1] : g.lambda * xi_hat[d - 1];
        const double s = sat(arg, g.sat_levels[i]);
        deta[i] -= s;
        dxi[i] -= s;
    }
    deta[d - 1] -= sat_sigma;
    dxi[d - 1] -= sat_sigma;

    // high-gain observer correction, scaled diag(ell, ..., ell^d)
    double lp = 1.0;
    for (int i = 0; i < d; ++i) {
        lp *= g.ell;
        dxi[i] -= lp * g.G[i] * innov;
    }
    dsigma = -lp * g.ell * g.g_last * innov;

    model.beta(eta, beta_scratch);
    for (int j = 0; j < q; ++j)
        dtheta[j] = beta_scratch[j] * sat_sigma - dz(theta_hat[j], g.dz_params[j]);
}

}  // namespace detail

inline RegulatorState regulator_derivatives(const RegulatorGains& g, const RegulatorState& s,
                                            const SystemModel& model, double v_u) {
    RegulatorState ds = RegulatorState::zeros(model.d, model.q);
    Vec beta_scratch(model.q);
    detail::regulator_rhs(g, model, s.eta, s.theta_hat, s.xi_hat, s.sigma_hat, v_u, ds.eta,
                          ds.theta_hat, ds.xi_hat, ds.sigma_hat, beta_scratch);
    return ds;
}

// Flat closed-loop state layout: [rho | w | z | x | eta | theta_hat | xi_hat | sigma_hat]
struct StateLayout {
    int exo_dim = 0, n = 0, d = 0, q = 0;

    explicit StateLayout(const SystemModel& m)
        : exo_dim(m.exo_dim), n(m.n), d(m.d), q(m.q) {}

    int w() const { return 1; }
    int z() const { return 1 + exo_dim; }
    int x() const { return z() + n; }
    int eta() const { return x() + 1; }
    int theta() const { return eta() + d; }
    int xi() const { return theta() + q; }
    int sigma() const { return xi() + d; }
    int size() const { return sigma() + 1; }
};

// Cascade of exosystem, plant, and regulator; evaluates the full
// closed-loop vector field. Owns scratch so repeated evaluation does not
// allocate; evaluation itself is pure.
class ClosedLoopSystem {
  public:
    ClosedLoopSystem(const SystemModel& model, RegulatorGains gains)
        : model_(&model), gains_(std::move(gains)), layout_(model),
          beta_scratch_(model.q), f0_scratch_(model.n), f1_scratch_(model.n) {}

    const StateLayout& layout() const { return layout_; }
    const RegulatorGains& gains() const { return gains_; }
    const SystemModel& model() const { return *model_; }

    void operator()(std::span<const double> s, std::span<double> ds) const {
        const StateLayout& L = layout_;
        const double rho = s[0];
        const auto w = s.subspan(L.w(), L.exo_dim);
        const auto z = s.subspan(L.z(), L.n);
        const double x = s[L.x()];
        const auto eta = s.subspan(L.eta(), L.d);
        const auto theta = s.subspan(L.theta(), L.q);
        const auto xi = s.subspan(L.xi(), L.d);
        const double sigma = s[L.sigma()];

        const double v_u = -gains_.kappa * x;
        const double u = v_u + eta[0];

        ds[0] = 0.0;  // rho is a constant parameter
        model_->s_fn(rho, w, ds.subspan(L.w(), L.exo_dim));
        model_->f0(rho, w, z, f0_scratch_);
        model_->f1(rho, w, z, x, f1_scratch_);
        for (int i = 0; i < L.n; ++i) ds[L.z() + i] = f0_scratch_[i] + f1_scratch_[i] * x;
        ds[L.x()] = model_->q_fn(rho, w, z, x) + model_->b_fn(rho, w, z, x) * u;

        detail::regulator_rhs(gains_, *model_, eta, theta, xi, sigma, v_u,
                              ds.subspan(L.eta(), L.d), ds.subspan(L.theta(), L.q),
                              ds.subspan(L.xi(), L.d), ds[L.sigma()], beta_scratch_);
    }

    double control(std::span<const double> s) const {
        return -gains_.kappa * s[layout_.x()] + s[layout_.eta()];
    }

  private:
    const SystemModel* model_;
    RegulatorGains gains_;
    StateLayout layout_;
    mutable Vec beta_scratch_, f0_scratch_, f1_scratch_;
};

struct ObserverDiagnostic {
    Vec eta_err;  // eta - tau(z_full)
    Vec obs_err;  // eta_err - xi_hat
};

inline ObserverDiagnostic observer_diagnostic(const SystemModel& model,
                                              std::span<const double> full_state) {
    StateLayout L(model);
    ObserverDiagnostic out;
    out.eta_err.assign(L.d, 0.0);
    model.tau(full_state[0], full_state.subspan(L.w(), L.exo_dim),
              full_state.subspan(L.z(), L.n), out.eta_err);
    out.obs_err.resize(L.d);
    for (int i = 0; i < L.d; ++i) {
        out.eta_err[i] = full_state[L.eta() + i] - out.eta_err[i];
        out.obs_err[i] = out.eta_err[i] - full_state[L.xi() + i];
    }
    return out;
}

}  // namespace adreg
