#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "adreg/linalg.hpp"

// Smooth saturation and dead-zone nonlinearities with quadratic blending
// zones (C^1 everywhere), their vector-valued forms, and the lower-bound
// rule for the dead-zone slopes.

namespace adreg {

struct SatParams {
    double level = 1.0;  // l_i > 0
};

struct DeadZoneParams {
    double c = 1.0;     // slope, c_i > 0
    double a0 = 0.0;    // dead-zone half-width, a_{0,i} >= 0
    double eps0 = 1.0;  // transition width, eps_{0,i} > 0
};

// bounds a_1 >= |phi|, a_{2,i} >= |beta_i|, a_3 >= |nu|
struct BoundConstants {
    double a1 = 0.0;
    Vec a2;
    double a3 = 0.0;
};

inline double sign(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }

// identity up to |s| = l, quadratic blend on (l, l+1), constant l + 1/2 beyond
inline double sat(double s, SatParams p) {
    const double l = p.level;
    const double a = std::abs(s);
    if (a <= l) return s;
    if (a < l + 1.0) return s - sign(s) * (a - l) * (a - l) / 2.0;
    return sign(s) * (l + 0.5);
}

inline double sat_deriv(double s, SatParams p) {
    const double l = p.level;
    const double a = std::abs(s);
    if (a <= l) return 1.0;
    if (a < l + 1.0) return 1.0 - (a - l);
    return 0.0;
}

// zero up to |s| = a0, quadratic blend on (a0, a0+eps0), slope c beyond
inline double dz(double s, DeadZoneParams p) {
    const double a = std::abs(s);
    if (a <= p.a0) return 0.0;
    if (a < p.a0 + p.eps0) return p.c * (a - p.a0) * (a - p.a0) / (2.0 * p.eps0) * sign(s);
    return p.c * s - p.c * (p.a0 + p.eps0 / 2.0) * sign(s);
}

inline double dz_deriv(double s, DeadZoneParams p) {
    const double a = std::abs(s);
    if (a <= p.a0) return 0.0;
    if (a < p.a0 + p.eps0) return p.c * (a - p.a0) / p.eps0;
    return p.c;
}

inline void satv(std::span<const double> s, std::span<const SatParams> levels,
                 std::span<double> out) {
    if (s.size() != levels.size() || s.size() != out.size())
        throw std::invalid_argument("satv: length mismatch");
    for (size_t i = 0; i < s.size(); ++i) out[i] = sat(s[i], levels[i]);
}

inline Vec satv(std::span<const double> s, std::span<const SatParams> levels) {
    Vec out(s.size());
    satv(s, levels, out);
    return out;
}

inline void dzv(std::span<const double> s, std::span<const DeadZoneParams> params,
                std::span<double> out) {
    if (s.size() != params.size() || s.size() != out.size())
        throw std::invalid_argument("dzv: length mismatch");
    for (size_t i = 0; i < s.size(); ++i) out[i] = dz(s[i], params[i]);
}

inline Vec dzv(std::span<const double> s, std::span<const DeadZoneParams> params) {
    Vec out(s.size());
    dzv(s, params, out);
    return out;
}

// Strict lower bounds (4 a1 a2_i + 2 a2_i a3) / eps0_i on the dead-zone
// slopes; callers must pick c_i strictly above these.
inline Vec min_deadzone_slope(const BoundConstants& b, std::span<const double> eps0) {
    if (b.a2.size() != eps0.size())
        throw std::invalid_argument("min_deadzone_slope: length mismatch");
    Vec out(eps0.size());
    for (size_t i = 0; i < eps0.size(); ++i) {
        if (!(eps0[i] > 0.0))
            throw std::invalid_argument("min_deadzone_slope: eps0 must be positive");
        out[i] = (4.0 * b.a1 * b.a2[i] + 2.0 * b.a2[i] * b.a3) / eps0[i];
    }
    return out;
}

}  // namespace adreg
