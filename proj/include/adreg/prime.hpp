#pragma once

#include <utility>

#include "adreg/linalg.hpp"

// Prime-form shift/selector matrices, observer error matrix, and a
// Routh-Hurwitz stability test on characteristic polynomials.

namespace adreg {

// (A, B, C) with A the d x d shift matrix (ones on the superdiagonal),
// B the last-entry selector and C the first-entry selector.
struct PrimeTriplet {
    int d = 0;
    Mat A;
    Vec B;
    Vec C;
};

inline PrimeTriplet prime_triplet(int d) {
    if (d < 1) throw std::invalid_argument("prime_triplet: dimension must be >= 1");
    PrimeTriplet t;
    t.d = d;
    t.A = Mat(d, d);
    for (int i = 0; i + 1 < d; ++i) t.A(i, i + 1) = 1.0;
    t.B.assign(d, 0.0);
    t.B[d - 1] = 1.0;
    t.C.assign(d, 0.0);
    t.C[0] = 1.0;
    return t;
}

// diag(ell, ell^2, ..., ell^d)
inline Mat gain_scaling(double ell, int d) {
    if (!(ell > 0.0)) throw std::invalid_argument("gain_scaling: ell must be positive");
    if (d < 1) throw std::invalid_argument("gain_scaling: dimension must be >= 1");
    Mat m(d, d);
    double p = 1.0;
    for (int i = 0; i < d; ++i) {
        p *= ell;
        m(i, i) = p;
    }
    return m;
}

// Characteristic polynomial coefficients, highest degree first, leading
// coefficient 1. Faddeev-LeVerrier recursion; exact for the small
// dimensions used here.
inline Vec characteristic_polynomial(const Mat& m) {
    const int n = m.rows;
    Vec coeffs(static_cast<size_t>(n) + 1, 0.0);
    coeffs[0] = 1.0;
    Mat mk = Mat::identity(n);
    for (int k = 1; k <= n; ++k) {
        mk = matmul(m, mk);
        const double c = -trace(mk) / k;
        coeffs[k] = c;
        for (int i = 0; i < n; ++i) mk(i, i) += c;
    }
    return coeffs;
}

// F_e = [-G  I_d; -g_{d+1}  0], the (d+1) x (d+1) error matrix of the
// extended-state observer. Its characteristic polynomial is
// s^{d+1} + g_1 s^d + ... + g_d s + g_{d+1}.
struct ObserverErrorMatrix {
    int d = 0;
    Vec G;
    double g_last = 0.0;
    Mat Fe;
};

inline ObserverErrorMatrix build_Fe(const Vec& G, double g_last) {
    if (G.empty()) throw std::invalid_argument("build_Fe: G must be nonempty");
    const int d = static_cast<int>(G.size());
    ObserverErrorMatrix m;
    m.d = d;
    m.G = G;
    m.g_last = g_last;
    m.Fe = Mat(d + 1, d + 1);
    for (int i = 0; i < d; ++i) {
        m.Fe(i, 0) = -G[i];
        m.Fe(i, i + 1) = 1.0;
    }
    m.Fe(d, 0) = -g_last;
    return m;
}

struct HurwitzVerdict {
    bool hurwitz = false;
    // set when the Routh table hits a zero leading coefficient or pivot;
    // such polynomials are reported as not Hurwitz
    bool degenerate = false;
};

// Routh-Hurwitz test on polynomial coefficients (highest degree first).
// No root extraction; a zero pivot is conservatively not Hurwitz.
inline HurwitzVerdict routh_hurwitz(Vec coeffs) {
    HurwitzVerdict v;
    while (coeffs.size() > 1 && coeffs.front() == 0.0) {
        v.degenerate = true;
        return v;
    }
    if (coeffs.size() <= 1) {
        v.degenerate = coeffs.empty() || coeffs[0] == 0.0;
        v.hurwitz = !v.degenerate;  // nonzero constant: no roots
        return v;
    }
    if (coeffs[0] < 0.0)
        for (double& c : coeffs) c = -c;

    // all coefficients must be strictly positive for a Hurwitz polynomial
    for (double c : coeffs) {
        if (c == 0.0) {
            v.degenerate = true;
            return v;
        }
        if (c < 0.0) return v;
    }

    const int n = static_cast<int>(coeffs.size()) - 1;  // degree
    const size_t w = static_cast<size_t>(n) / 2 + 1;
    Vec row0(w, 0.0), row1(w, 0.0);
    for (int i = 0; i <= n; i += 2) row0[i / 2] = coeffs[i];
    for (int i = 1; i <= n; i += 2) row1[(i - 1) / 2] = coeffs[i];

    for (int r = 2; r <= n; ++r) {
        const double pivot = row1[0];
        if (pivot == 0.0) {
            v.degenerate = true;
            return v;
        }
        Vec next(w, 0.0);
        for (size_t j = 0; j + 1 < w; ++j)
            next[j] = row0[j + 1] - (row0[0] / pivot) * row1[j + 1];
        row0 = row1;
        row1 = next;
        if (row1[0] == 0.0) {
            v.degenerate = true;
            return v;
        }
        if (row1[0] < 0.0) return v;
    }
    v.hurwitz = true;
    return v;
}

inline HurwitzVerdict hurwitz_verdict(const ObserverErrorMatrix& m) {
    return routh_hurwitz(characteristic_polynomial(m.Fe));
}

inline bool is_hurwitz(const ObserverErrorMatrix& m) { return hurwitz_verdict(m).hurwitz; }

// Default observer gains: place all F_e roots at -1, i.e. the coefficients
// of (s+1)^{d+1}. Hurwitz for every d.
inline std::pair<Vec, double> default_observer_gains(int d) {
    if (d < 1) throw std::invalid_argument("default_observer_gains: dimension must be >= 1");
    Vec g(static_cast<size_t>(d), 0.0);
    double binom = 1.0;  // binomial(d+1, i)
    for (int i = 1; i <= d; ++i) {
        binom = binom * (d + 2 - i) / i;
        g[i - 1] = binom;
    }
    return {g, 1.0};
}

}  // namespace adreg
