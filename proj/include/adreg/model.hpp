#pragma once

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>

#include "adreg/nonlin.hpp"

// Plant/exosystem/immersion interfaces and the built-in oscillator example.
//
// Plant:      z' = f0(rho,w,z) + f1(rho,w,z,x) x
//             x' = q(rho,w,z,x) + b(rho,w,z,x) u,   y_e = x
// Exosystem:  rho' = 0,  w' = s(rho,w)
// Immersion:  tau' = A_d tau + B_d phi(theta(rho), tau) along the zero
//             dynamics, with C_d tau the steady-state input.

namespace adreg {

struct Box {
    Vec lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
};

struct CompactSets {
    Box P;                // rho range
    Box W;                // exogenous state box
    Box Cz;               // plant z box
    double x_lo = -1.0;   // C_x interval
    double x_hi = 1.0;
    Vec theta_halfwidth;  // a_{0,i} + eps_{0,i}, half-widths of B_0^q
};

struct SystemModel {
    std::string name;
    int n = 0;        // plant z dimension
    int exo_dim = 0;  // w dimension
    int d = 0;        // immersion dimension
    int q = 0;        // parameter dimension
    double b0 = 0.0;  // declared lower bound on b
    bool exact_immersion = false;  // nu == 0 on the attractor

    using CSpan = std::span<const double>;
    using Span = std::span<double>;

    std::function<void(double rho, CSpan w, CSpan z, Span out)> f0;
    std::function<void(double rho, CSpan w, CSpan z, double x, Span out)> f1;
    std::function<double(double rho, CSpan w, CSpan z, double x)> q_fn;
    std::function<double(double rho, CSpan w, CSpan z, double x)> b_fn;
    std::function<void(double rho, CSpan w, Span out)> s_fn;

    std::function<void(double rho, CSpan w, CSpan z, Span out)> tau;
    std::function<double(CSpan theta, CSpan tau)> phi;
    std::function<void(CSpan theta, CSpan tau, Span out)> dphi_dtheta;
    std::function<void(CSpan tau, Span out)> beta;
    std::function<void(double rho, Span out)> theta_true;

    CompactSets default_sets;
};

// w1' = w2,  w2' = -w1 + (1 - w1^2) w2 / (1 + rho w1)
inline void vdp_exosystem(double rho, std::span<const double> w, std::span<double> dw) {
    const double denom = 1.0 + rho * w[0];
    if (std::abs(denom) < 1e-12)
        throw std::domain_error("vdp_exosystem: singular evaluation, 1 + rho*w1 = 0");
    dw[0] = w[1];
    dw[1] = -w[0] + (1.0 - w[0] * w[0]) * w[1] / denom;
}

// (zeta1, zeta2, zeta3) -> (z1, z2, x): the change of coordinates that
// takes the three-state example to relative degree one.
inline std::array<double, 3> coordinate_reduction(const std::array<double, 3>& zeta) {
    return {zeta[0], zeta[1], zeta[1] + zeta[2]};
}

inline std::array<double, 3> coordinate_reduction_inverse(const std::array<double, 3>& zx) {
    return {zx[0], zx[1], zx[2] - zx[1]};
}

namespace detail {

// inner saturations of the example's phi: identity on the declared ranges
// (|tau_i| <= 3, |theta| <= 0.2), smoothly saturated outside
inline double phi_s_tau(double s) { return sat(s, SatParams{3.0}); }
inline double phi_s_theta(double s) { return sat(s, SatParams{0.2}); }

inline double example_phi(std::span<const double> theta, std::span<const double> tau) {
    const double t1 = phi_s_tau(tau[0]);
    const double t2 = phi_s_tau(tau[1]);
    return -t1 + (1.0 - t1 * t1) * t2 / (1.0 + phi_s_theta(theta[0]) * t1);
}

inline double example_dphi_dtheta(std::span<const double> theta,
                                  std::span<const double> tau) {
    const double t1 = phi_s_tau(tau[0]);
    const double t2 = phi_s_tau(tau[1]);
    const double denom = 1.0 + phi_s_theta(theta[0]) * t1;
    const double dth = sat_deriv(theta[0], SatParams{0.2});
    return -(1.0 - t1 * t1) * t2 * t1 * dth / (denom * denom);
}

inline double example_beta(std::span<const double> tau) {
    const double t1 = phi_s_tau(tau[0]);
    const double t2 = phi_s_tau(tau[1]);
    return (1.0 - t1 * t1) * t1 * t2;
}

}  // namespace detail

// The oscillator-driven example plant in relative-degree-one form:
//   z1' = rho z1 - (z1+w1)^3 + w2 + z2
//   z2' = -z2 + x
//   x'  = -w1 - z2 + z1 z2 + x + u
// with immersion tau = (w1, w2), theta = rho.
inline SystemModel make_example_model() {
    SystemModel m;
    m.name = "example";
    m.n = 2;
    m.exo_dim = 2;
    m.d = 2;
    m.q = 1;
    m.b0 = 1.0;
    m.exact_immersion = true;

    m.f0 = [](double rho, SystemModel::CSpan w, SystemModel::CSpan z, SystemModel::Span out) {
        const double s = z[0] + w[0];
        out[0] = rho * z[0] - s * s * s + w[1] + z[1];
        out[1] = -z[1];
    };
    m.f1 = [](double, SystemModel::CSpan, SystemModel::CSpan, double, SystemModel::Span out) {
        out[0] = 0.0;
        out[1] = 1.0;
    };
    m.q_fn = [](double, SystemModel::CSpan w, SystemModel::CSpan z, double x) {
        return -w[0] - z[1] + z[0] * z[1] + x;
    };
    m.b_fn = [](double, SystemModel::CSpan, SystemModel::CSpan, double) { return 1.0; };
    m.s_fn = [](double rho, SystemModel::CSpan w, SystemModel::Span out) {
        vdp_exosystem(rho, w, out);
    };

    m.tau = [](double, SystemModel::CSpan w, SystemModel::CSpan, SystemModel::Span out) {
        out[0] = w[0];
        out[1] = w[1];
    };
    m.phi = detail::example_phi;
    m.dphi_dtheta = [](SystemModel::CSpan theta, SystemModel::CSpan tau, SystemModel::Span out) {
        out[0] = detail::example_dphi_dtheta(theta, tau);
    };
    m.beta = [](SystemModel::CSpan tau, SystemModel::Span out) {
        out[0] = detail::example_beta(tau);
    };
    m.theta_true = [](double rho, SystemModel::Span out) { out[0] = rho; };

    m.default_sets.P = Box{{-0.2}, {0.2}};
    m.default_sets.W = Box{{-3.0, -3.0}, {3.0, 3.0}};
    m.default_sets.Cz = Box{{-2.0, -2.0}, {2.0, 2.0}};
    m.default_sets.x_lo = -2.0;
    m.default_sets.x_hi = 2.0;
    m.default_sets.theta_halfwidth = {0.25};
    return m;
}

namespace detail {
inline std::map<std::string, SystemModel>& model_registry() {
    static std::map<std::string, SystemModel> reg = [] {
        std::map<std::string, SystemModel> r;
        r.emplace("example", make_example_model());
        return r;
    }();
    return reg;
}
}  // namespace detail

inline void register_model(SystemModel model) {
    detail::model_registry()[model.name] = std::move(model);
}

inline const SystemModel& find_model(const std::string& name) {
    auto& reg = detail::model_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw std::out_of_range("unknown model: " + name);
    return it->second;
}

}  // namespace adreg
