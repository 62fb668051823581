#pragma once

#include "adreg/tuning.hpp"

// Executable checkers for the standing assumptions: monotonic-like
// structure, persistent excitation, bound constants, attractor
// containment, and the lower bound on the control coefficient b.
//
// The KL-boundedness and local exponential stability assumptions on the
// zero dynamics are not finitely checkable; attractor containment plus
// simulation are the empirical surrogate.

namespace adreg {

struct CheckReport {
    std::string name;
    bool passed = false;
    double worst_value = 0.0;
    Vec witness_point;  // layout documented per checker
    long samples_used = 0;
    bool trivial = false;  // vacuous pass (degenerate inputs)
    std::string note;
};

// (s1 - theta)^T beta(r) dphi/ds(s2, r) (s1 - theta) <= 0 over grids of
// theta = theta(rho), s1, s2 in B_0^q and r over the given tau samples.
// Witness layout: [rho, s1..., s2..., r...].
inline CheckReport check_monotonicity(const SystemModel& model, const CompactSets& sets,
                                      const std::vector<Vec>& tau_samples,
                                      int points_per_axis = 11, double tol = 1e-10) {
    if (!model.dphi_dtheta)
        throw std::invalid_argument("check_monotonicity: model lacks dphi_dtheta");
    if (tau_samples.empty())
        throw std::invalid_argument("check_monotonicity: empty tau sample set");
    CheckReport rep;
    rep.name = "monotonicity";
    const int q = model.q;
    Box theta_box{Vec(q), Vec(q)};
    for (int i = 0; i < q; ++i) {
        theta_box.lo[i] = -sets.theta_halfwidth[i];
        theta_box.hi[i] = sets.theta_halfwidth[i];
    }
    Vec theta(q), dphi(q);
    rep.worst_value = -std::numeric_limits<double>::infinity();
    for (double rho : grid_axis(sets.P.lo[0], sets.P.hi[0], points_per_axis)) {
        model.theta_true(rho, theta);
        for (const Vec& r : tau_samples) {
            for_each_grid_point(theta_box, points_per_axis, [&](const Vec& s2) {
                model.dphi_dtheta(s2, r, dphi);
                Vec beta_val(q);
                model.beta(r, beta_val);
                for_each_grid_point(theta_box, points_per_axis, [&](const Vec& s1) {
                    // q = 1 in all catalog models; the general quadratic
                    // form reduces to (s1-theta)^T [beta dphi^T] (s1-theta)
                    double v = 0.0;
                    for (int i = 0; i < q; ++i)
                        for (int j = 0; j < q; ++j)
                            v += (s1[i] - theta[i]) * beta_val[i] * dphi[j] *
                                 (s1[j] - theta[j]);
                    ++rep.samples_used;
                    if (v > rep.worst_value) {
                        rep.worst_value = v;
                        rep.witness_point.clear();
                        rep.witness_point.push_back(rho);
                        rep.witness_point.insert(rep.witness_point.end(), s1.begin(), s1.end());
                        rep.witness_point.insert(rep.witness_point.end(), s2.begin(), s2.end());
                        rep.witness_point.insert(rep.witness_point.end(), r.begin(), r.end());
                    }
                });
            });
        }
    }
    rep.passed = rep.worst_value <= tol;
    return rep;
}

// Finite-sample surrogate for the persistent-excitation implication: for
// each pair s1 != s2 on the grid, some sample must separate phi(s1, .)
// from phi(s2, .). worst_value is the minimal separation over pairs.
// Witness layout: [s1..., s2...].
inline CheckReport check_pe(const SystemModel& model, const std::vector<Vec>& tau_samples,
                            const std::vector<Vec>& s_grid, double tol = 1e-6) {
    if (tau_samples.empty()) throw std::invalid_argument("check_pe: empty trajectory");
    CheckReport rep;
    rep.name = "persistent_excitation";
    if (s_grid.size() < 2) {
        rep.passed = true;
        rep.trivial = true;
        rep.note = "fewer than two grid points; vacuous";
        return rep;
    }
    rep.worst_value = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < s_grid.size(); ++i) {
        for (size_t j = i + 1; j < s_grid.size(); ++j) {
            double sep = 0.0;
            for (const Vec& r : tau_samples) {
                sep = std::max(sep, std::abs(model.phi(s_grid[i], r) - model.phi(s_grid[j], r)));
                ++rep.samples_used;
            }
            if (sep < rep.worst_value) {
                rep.worst_value = sep;
                rep.witness_point.clear();
                rep.witness_point.insert(rep.witness_point.end(), s_grid[i].begin(),
                                         s_grid[i].end());
                rep.witness_point.insert(rep.witness_point.end(), s_grid[j].begin(),
                                         s_grid[j].end());
            }
        }
    }
    rep.passed = rep.worst_value > tol;
    rep.note = "minimal separation margin over grid pairs";
    return rep;
}

// Bound constants via deterministic grid sampling over the declared
// boxes: tau is taken over the exogenous box mapped through tau, theta
// over B_0^q. Each bound is inflated by `safety`.
inline BoundConstants estimate_bounds(const SystemModel& model, const CompactSets& sets,
                                      int points_per_axis = 21, double safety = 1.1,
                                      double a3_user = 0.0) {
    BoundConstants b;
    b.a2.assign(model.q, 0.0);
    Box theta_box{Vec(model.q), Vec(model.q)};
    for (int i = 0; i < model.q; ++i) {
        theta_box.lo[i] = -sets.theta_halfwidth[i];
        theta_box.hi[i] = sets.theta_halfwidth[i];
    }
    Vec r(model.d), beta_val(model.q), z(model.n, 0.0);
    const double rho_mid = (sets.P.lo[0] + sets.P.hi[0]) / 2.0;
    for_each_grid_point(sets.W, points_per_axis, [&](const Vec& w) {
        model.tau(rho_mid, w, z, r);
        model.beta(r, beta_val);
        for (int i = 0; i < model.q; ++i) b.a2[i] = std::max(b.a2[i], std::abs(beta_val[i]));
        for_each_grid_point(theta_box, std::max(3, points_per_axis / 2), [&](const Vec& th) {
            b.a1 = std::max(b.a1, std::abs(model.phi(th, r)));
        });
    });
    b.a1 *= safety;
    for (double& a : b.a2) a *= safety;
    b.a3 = model.exact_immersion ? 0.0 : a3_user;
    return b;
}

// Exosystem-only runs must stay inside the declared |w_i| <= limit box
// after the warm-up time. Witness layout: [rho, t, w...].
inline CheckReport check_attractor_bound(const SystemModel& model, const Vec& rho_values,
                                         double warmup = 50.0, double horizon = 200.0,
                                         double limit = 3.0, double tol = 1e-3,
                                         const Vec& w0 = {1.0, 0.0}, double dt = 1e-3) {
    CheckReport rep;
    rep.name = "attractor_bound";
    if (rho_values.empty()) {
        rep.passed = true;
        rep.trivial = true;
        rep.note = "empty rho list; vacuous";
        return rep;
    }
    rep.worst_value = 0.0;
    bool off_attractor = inf_norm(w0) == 0.0;
    for (double rho : rho_values) {
        Vec w = w0;
        detail::Rk4Scratch scratch;
        auto rhs = [&](std::span<const double> s, std::span<double> ds) {
            model.s_fn(rho, s, ds);
        };
        const long steps = static_cast<long>(std::llround(horizon / dt));
        for (long i = 0; i <= steps; ++i) {
            const double t = i * dt;
            if (t >= warmup) {
                const double m = inf_norm(w);
                ++rep.samples_used;
                if (m > rep.worst_value) {
                    rep.worst_value = m;
                    rep.witness_point = {rho, t};
                    rep.witness_point.insert(rep.witness_point.end(), w.begin(), w.end());
                }
            }
            if (i < steps) rk4_step(rhs, w, dt, scratch);
        }
    }
    rep.passed = rep.worst_value <= limit + tol;
    if (off_attractor) rep.note = "w0 at an equilibrium; trajectory is off the attractor";
    return rep;
}

// min of b over the grid of P x W x Cz x Cx must reach the declared b0.
// Witness layout: [rho, w..., z..., x].
inline CheckReport check_b_lower_bound(const SystemModel& model, const CompactSets& sets,
                                       int points_per_axis = 11) {
    if (sets.P.dim() == 0 || sets.W.dim() == 0 || sets.Cz.dim() == 0)
        throw std::invalid_argument("check_b_lower_bound: empty sampling box");
    CheckReport rep;
    rep.name = "b_lower_bound";
    rep.worst_value = std::numeric_limits<double>::infinity();
    for (double rho : grid_axis(sets.P.lo[0], sets.P.hi[0], points_per_axis)) {
        for_each_grid_point(sets.W, points_per_axis, [&](const Vec& w) {
            for_each_grid_point(sets.Cz, points_per_axis, [&](const Vec& z) {
                for (double x : grid_axis(sets.x_lo, sets.x_hi, points_per_axis)) {
                    const double b = model.b_fn(rho, w, z, x);
                    ++rep.samples_used;
                    if (b < rep.worst_value) {
                        rep.worst_value = b;
                        rep.witness_point = {rho};
                        rep.witness_point.insert(rep.witness_point.end(), w.begin(), w.end());
                        rep.witness_point.insert(rep.witness_point.end(), z.begin(), z.end());
                        rep.witness_point.push_back(x);
                    }
                }
            });
        });
    }
    rep.passed = rep.worst_value >= model.b0;
    return rep;
}

// Residual of the immersion identity d/dt tau = A_d tau + B_d phi(theta, tau)
// along exosystem attractor samples. Valid for models whose tau reads the
// exogenous state directly (as in the catalog example, tau = w).
// Witness layout: [rho, w...].
inline CheckReport check_immersion(const SystemModel& model, const Vec& rho_values,
                                   double warmup = 50.0, double horizon = 150.0,
                                   int samples_per_rho = 1000, double dt = 1e-3,
                                   double tol = 1e-8) {
    CheckReport rep;
    rep.name = "immersion_identity";
    const PrimeTriplet pt = prime_triplet(model.d);
    Vec z(model.n, 0.0), r(model.d), dw(model.exo_dim), theta(model.q);
    rep.worst_value = 0.0;
    for (double rho : rho_values) {
        model.theta_true(rho, theta);
        const long total = static_cast<long>((horizon - warmup) / dt);
        const int stride = std::max(1, static_cast<int>(total / samples_per_rho));
        auto ws = exo_trajectory(model, rho, Vec{1.0, 0.0}, dt, warmup, horizon, stride);
        for (const auto& w : ws) {
            model.tau(rho, w, z, r);
            model.s_fn(rho, w, dw);
            const double phi_val = model.phi(theta, r);
            double res = 0.0;
            for (int i = 0; i < model.d; ++i) {
                double pred = (i + 1 < model.d) ? r[i + 1] : 0.0;
                pred += pt.B[i] * phi_val;
                res += (dw[i] - pred) * (dw[i] - pred);
            }
            res = std::sqrt(res);
            ++rep.samples_used;
            if (res > rep.worst_value) {
                rep.worst_value = res;
                rep.witness_point = {rho};
                rep.witness_point.insert(rep.witness_point.end(), w.begin(), w.end());
            }
        }
    }
    rep.passed = rep.worst_value <= tol;
    return rep;
}

}  // namespace adreg
