#pragma once

#include "adreg/simulate.hpp"

// Selection rules for the regulator's design constants: saturation
// levels from box/attractor sampling, dead-zone coefficients from the
// slope lower bounds, and default observer gains.

namespace adreg {

// Deterministic uniform grid with inclusive endpoints.
inline Vec grid_axis(double lo, double hi, int points) {
    if (points < 1) throw std::invalid_argument("grid_axis: need at least one point");
    Vec g(points);
    if (points == 1) {
        g[0] = (lo + hi) / 2.0;
        return g;
    }
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    return g;
}

// Visits every point of the box grid; `point` is reused between calls.
template <class Fn>
void for_each_grid_point(const Box& box, int points_per_axis, Fn&& fn) {
    const int dim = box.dim();
    if (dim == 0) throw std::invalid_argument("for_each_grid_point: empty box");
    std::vector<Vec> axes(dim);
    for (int i = 0; i < dim; ++i) axes[i] = grid_axis(box.lo[i], box.hi[i], points_per_axis);
    Vec point(dim);
    std::vector<int> idx(dim, 0);
    while (true) {
        for (int i = 0; i < dim; ++i) point[i] = axes[i][idx[i]];
        fn(std::as_const(point));
        int a = dim;
        while (a-- > 0) {
            if (++idx[a] < static_cast<int>(axes[a].size())) break;
            idx[a] = 0;
            if (a == 0) return;
        }
    }
}

// tau values sampled along warmed-up exosystem trajectories, one
// trajectory per rho value. These stand in for tau(Z_c).
inline std::vector<Vec> attractor_tau_samples(const SystemModel& model,
                                              const Vec& rho_values, double warmup = 50.0,
                                              double horizon = 100.0, int samples_per_rho = 500,
                                              double dt = 1e-3) {
    std::vector<Vec> taus;
    for (double rho : rho_values) {
        const long total = static_cast<long>((horizon - warmup) / dt);
        const int stride = std::max(1, static_cast<int>(total / samples_per_rho));
        auto ws = exo_trajectory(model, rho, Vec{1.0, 0.0}, dt, warmup, horizon, stride);
        Vec z(model.n, 0.0);  // attractor of the example has z2 = 0; tau ignores z
        for (const auto& w : ws) {
            Vec t(model.d);
            model.tau(rho, w, z, t);
            taus.push_back(std::move(t));
        }
    }
    return taus;
}

// Saturation levels:
//   l_i     = max |lambda xi_i + xi_{i+1}| + margin   (i < d)
//   l_d     = max |lambda xi_d| + margin
//   l_{d+1} = max |phi(theta_hat, r) - phi(theta, r)| + margin
// with the xi maxima over a grid on `xi_box` and the phi maximum over the
// attractor samples and a grid of theta_hat over B_0^q.
inline std::vector<SatParams> saturation_levels(const Box& xi_box, const SystemModel& model,
                                                double lambda, double margin,
                                                const std::vector<Vec>& attractor_taus,
                                                const Vec& theta_halfwidth,
                                                const Vec& rho_values,
                                                int points_per_axis = 21) {
    const int d = model.d;
    if (xi_box.dim() != d) throw std::invalid_argument("saturation_levels: xi box dimension");
    if (attractor_taus.empty())
        throw std::invalid_argument("saturation_levels: empty attractor sample set");
    if (!(margin >= 1.0)) throw std::invalid_argument("saturation_levels: margin must be >= 1");
    std::vector<SatParams> levels(d + 1);
    Vec maxima(d, 0.0);
    for_each_grid_point(xi_box, points_per_axis, [&](const Vec& xi) {
        for (int i = 0; i + 1 < d; ++i)
            maxima[i] = std::max(maxima[i], std::abs(lambda * xi[i] + xi[i + 1]));
        maxima[d - 1] = std::max(maxima[d - 1], std::abs(lambda * xi[d - 1]));
    });
    for (int i = 0; i < d; ++i) levels[i].level = maxima[i] + margin;

    Box theta_box{Vec(theta_halfwidth.size()), Vec(theta_halfwidth.size())};
    for (size_t i = 0; i < theta_halfwidth.size(); ++i) {
        theta_box.lo[i] = -theta_halfwidth[i];
        theta_box.hi[i] = theta_halfwidth[i];
    }
    double phimax = 0.0;
    Vec theta_star(model.q);
    for (double rho : rho_values) {
        model.theta_true(rho, theta_star);
        for (const Vec& r : attractor_taus) {
            const double base = model.phi(theta_star, r);
            for_each_grid_point(theta_box, 5, [&](const Vec& th) {
                phimax = std::max(phimax, std::abs(model.phi(th, r) - base));
            });
        }
    }
    levels[d].level = phimax + margin;
    return levels;
}

// Bound constants a1 >= |phi|, a2_i >= |beta_i| sampled over the
// attractor tau values and theta over B_0^q, inflated by `safety`.
// a3 is zero for models with an exact immersion on the attractor.
inline BoundConstants estimate_bounds_on_attractor(const SystemModel& model,
                                                   const std::vector<Vec>& attractor_taus,
                                                   const Vec& theta_halfwidth,
                                                   double safety = 1.1,
                                                   double a3_user = 0.0) {
    if (attractor_taus.empty())
        throw std::invalid_argument("estimate_bounds_on_attractor: empty sample set");
    Box theta_box{Vec(theta_halfwidth.size()), Vec(theta_halfwidth.size())};
    for (size_t i = 0; i < theta_halfwidth.size(); ++i) {
        theta_box.lo[i] = -theta_halfwidth[i];
        theta_box.hi[i] = theta_halfwidth[i];
    }
    BoundConstants b;
    b.a2.assign(model.q, 0.0);
    Vec beta_val(model.q);
    for (const Vec& r : attractor_taus) {
        model.beta(r, beta_val);
        for (int i = 0; i < model.q; ++i) b.a2[i] = std::max(b.a2[i], std::abs(beta_val[i]));
        for_each_grid_point(theta_box, 9, [&](const Vec& th) {
            b.a1 = std::max(b.a1, std::abs(model.phi(th, r)));
        });
    }
    b.a1 *= safety;
    for (double& a : b.a2) a *= safety;
    b.a3 = model.exact_immersion ? 0.0 : a3_user;
    return b;
}

// Dead-zone parameters from the slope rule: a_{0,i} = max_rho |theta_i(rho)|
// sampled on a rho grid, c_i strictly above its lower bound.
inline std::vector<DeadZoneParams> default_deadzone(const SystemModel& model,
                                                    const Box& rho_box,
                                                    const BoundConstants& bounds,
                                                    double eps0 = 0.05,
                                                    double slope_factor = 1.1) {
    std::vector<DeadZoneParams> dzp(model.q);
    Vec theta(model.q);
    Vec a0(model.q, 0.0);
    for (double rho : grid_axis(rho_box.lo[0], rho_box.hi[0], 41)) {
        model.theta_true(rho, theta);
        for (int i = 0; i < model.q; ++i) a0[i] = std::max(a0[i], std::abs(theta[i]));
    }
    Vec eps(model.q, eps0);
    const Vec lower = min_deadzone_slope(bounds, eps);
    for (int i = 0; i < model.q; ++i) {
        dzp[i].a0 = a0[i];
        dzp[i].eps0 = eps0;
        dzp[i].c = lower[i] > 0.0 ? slope_factor * lower[i] : 1.0;
    }
    return dzp;
}

}  // namespace adreg
