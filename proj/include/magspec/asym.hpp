#pragma once

// Closed-form asymptotic predictions, each returned with its separate terms.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "magspec/degennes.hpp"
#include "magspec/errors.hpp"
#include "magspec/specfun.hpp"

namespace magspec::asym {

using degennes::DeGennesConstants;

/// (m - nu - b/2 - sqrt(b) xi - C0)^2 + C1
inline double delta_m(int m, double b, double nu, const DeGennesConstants& K) {
    const double d = m - nu - 0.5 * b - std::sqrt(b) * K.xi - K.c0;
    return d * d + K.c1;
}

/// Integer nearest to nu + b/2 + sqrt(b) xi + C0, ties to the smaller one.
inline int argmin_delta(double b, double nu, const DeGennesConstants& K) {
    const double x = nu + 0.5 * b + std::sqrt(b) * K.xi + K.c0;
    return static_cast<int>(std::ceil(x - 0.5));
}

struct StrongFieldPrediction {
    double b = 0.0, nu = 0.0, gamma = 0.0;
    double term_theta_b = 0.0;
    double term_c_sqrtb = 0.0;
    int m_star = 0;
    double delta_min = 0.0;
    double term_osc = 0.0;
    double total = 0.0;
};

/// Theta b + C sqrt(b) + xi Theta' inf_m Delta_m, with Theta' = phi(0)^2.
inline StrongFieldPrediction predict_strong(double b, double nu, const DeGennesConstants& K) {
    if (!(b >= 1.0)) throw DomainError("predict_strong: requires b >= 1");
    StrongFieldPrediction p;
    p.b = b;
    p.nu = nu;
    p.gamma = K.gamma;
    p.term_theta_b = K.theta * b;
    p.term_c_sqrtb = K.c_upper * std::sqrt(b);
    const int c = argmin_delta(b, nu, K);
    p.m_star = c;
    p.delta_min = delta_m(c, b, nu, K);
    for (int m = c - 5; m <= c + 5; ++m) {
        const double d = delta_m(m, b, nu, K);
        if (d < p.delta_min) {
            p.delta_min = d;
            p.m_star = m;
        }
    }
    p.term_osc = K.xi * K.phi0_sq * p.delta_min;
    p.total = p.term_theta_b + p.term_c_sqrtb + p.term_osc;
    return p;
}

/// b/2 + sqrt(b) xi(gamma) + C0(gamma) + nu
inline double eta_value(double b, double nu, const DeGennesConstants& K) {
    return 0.5 * b + std::sqrt(b) * K.xi + K.c0 + nu;
}

/// (hat_alpha^2 + 1)(Theta'(-hat_alpha) - 2 hat_alpha)/(6 hat_alpha), from constants at gamma = -hat_alpha.
inline double steklov_eta_constant(const DeGennesConstants& K_at_minus_alpha) {
    const double a = -K_at_minus_alpha.gamma;
    return (a * a + 1.0) * (K_at_minus_alpha.phi0_sq - 2.0 * a) / (6.0 * a);
}

/// Which constant term is used in the Steklov version of eta.
///   Generic:  eta_value at gamma = -hat_alpha
///   Printed:  adds +steklov_eta_constant
///   Shifted:  adds -steklov_eta_constant, the value that results from
///             expanding sqrt(b) xi(gamma(b)) with gamma(b) = -hat_alpha - (hat_alpha^2+1)/(3 sqrt(b))
enum class EtaVariant { Generic, Printed, Shifted };

inline double eta_offset(const DeGennesConstants& K, EtaVariant v) {
    switch (v) {
    case EtaVariant::Printed: return steklov_eta_constant(K);
    case EtaVariant::Shifted: return -steklov_eta_constant(K);
    case EtaVariant::Generic: break;
    }
    return 0.0;
}

inline double eta_steklov(double b, double nu, const DeGennesConstants& K_at_minus_alpha, EtaVariant v) {
    return eta_value(b, nu, K_at_minus_alpha) + eta_offset(K_at_minus_alpha, v);
}

struct E0Entry {
    int n = 0;
    int p = 0;
    double b = 0.0;
};

struct E0Sequence {
    double e0 = 0.0, nu = 0.0, gamma = 0.0;
    EtaVariant variant = EtaVariant::Generic;
    std::vector<E0Entry> entries;
};

/// Solves eta(b_n) = p_n + e0 for p_n = n in [n_lo, n_hi] through
/// s = sqrt(b_n) = -xi + sqrt(xi^2 + 2(p_n + e0 - C0 - nu - offset)).
inline E0Sequence build_e0_sequence(double e0, double nu, const DeGennesConstants& K, int n_lo, int n_hi,
                                    EtaVariant v = EtaVariant::Generic) {
    if (!(e0 > -0.5 && e0 <= 0.5)) throw DomainError("build_e0_sequence: e0 must lie in (-1/2, 1/2]");
    if (n_hi < n_lo) throw DomainError("build_e0_sequence: empty range");
    E0Sequence seq{e0, nu, K.gamma, v, {}};
    const double c = K.c0 + nu + eta_offset(K, v);
    for (int n = n_lo; n <= n_hi; ++n) {
        const double q = n + e0 - c;
        if (!(q > 0.0)) throw NoPositiveRoot("build_e0_sequence: no positive b for this n");
        const double s = 2.0 * q / (K.xi + std::sqrt(K.xi * K.xi + 2.0 * q)); // rationalized root
        seq.entries.push_back({n, n, s * s});
    }
    return seq;
}

/// First three eigenvalues along an e0-sequence.
inline std::array<double, 3> predict_levels_on_sequence(double b_n, double e0, double nu, const DeGennesConstants& K) {
    (void)nu;
    const double base = K.theta * b_n + K.c_upper * std::sqrt(b_n);
    const double osc = K.xi * K.phi0_sq;
    const double e = std::abs(e0);
    return {base + (e * e + K.c1) * osc, base + ((1 - e) * (1 - e) + K.c1) * osc,
            base + ((1 + e) * (1 + e) + K.c1) * osc};
}

/// Weak-field Neumann levels b - (correction).
inline double predict_weak(int k, double nu, double b) {
    if (k < 0) throw DomainError("predict_weak: k must be non-negative");
    if (!(b > 0.0 && b < 1.0)) throw DomainError("predict_weak: requires 0 < b < 1");
    if (nu < 0.0 && k == 0) return b - std::pow(2.0, 1.0 + nu) / specfun::gamma_fn(-nu) * std::pow(b, 1.0 - nu);
    const double e = k - nu;
    return b - std::pow(b, e + 2.0) / (std::pow(2.0, e) * specfun::gamma_fn(e + 1.0));
}

struct SteklovPrediction {
    double corollary_value = 0.0; // constants at gamma = -hat_alpha
    double F = 0.0;               // hat_alpha inf_m Delta_m at the approximate Steklov gamma
    double gamma = 0.0;
    double three_term = 0.0;      // two-term + F b^{-1/2}
};

inline double steklov_two_term(double b, double hat_alpha) {
    return hat_alpha * std::sqrt(b) + (hat_alpha * hat_alpha + 1.0) / 3.0;
}

/// `K_at` maps gamma to its de Gennes constants; it is called at -hat_alpha
/// and at gamma(b) = -hat_alpha - (hat_alpha^2 + 1)/(3 sqrt(b)).
template <class KAt>
SteklovPrediction predict_steklov(double b, double nu, double hat_alpha, KAt&& K_at) {
    if (!(b >= 10.0)) throw DomainError("predict_steklov: requires b >= 10");
    SteklovPrediction p;
    const double two = steklov_two_term(b, hat_alpha);
    p.gamma = -two / std::sqrt(b);
    const DeGennesConstants& Kb = K_at(p.gamma);
    const double dmin = predict_strong(b, nu, Kb).delta_min;
    p.F = hat_alpha * dmin;
    p.three_term = two + p.F / std::sqrt(b);
    const DeGennesConstants& Ka = K_at(-hat_alpha);
    const double e0_sq = dmin - Kb.c1;
    p.corollary_value = two + (e0_sq + Ka.c1) * hat_alpha / std::sqrt(b);
    return p;
}

/// Aharonov-Bohm Landau levels in the form stated for the effective operator.
inline double ab_landau_level(int m, int n, double nu) {
    if (!(nu > -0.5 && nu <= 0.5) || nu == 0.0) throw DomainError("ab_landau_level: nu must be in (-1/2, 1/2] \\ {0}");
    if (n < 0) throw DomainError("ab_landau_level: n must be non-negative");
    if (nu >= 0.0) return 2.0 * (nu - m + std::abs(nu - m) + 2 * n + 1);
    return 2.0 * (nu - m + std::abs(nu - m + 1) + 2 * n + 2);
}

/// Spectrum 2(2n + |k| + 1) - 2k of the effective operator, k = m - nu, with the
/// r^{1/2+|k|} branch at the origin.
inline double effective_level(int m, int n, double nu) {
    const double k = m - nu;
    return 2.0 * (2 * n + std::abs(k) + 1.0) - 2.0 * k;
}

/// 2(m - nu) + 1 - sqrt(8(m - nu) + 1); beyond it consecutive ground curves are ordered.
inline double ordering_threshold(int m, double nu) {
    const double x = m - nu;
    if (!(x > 2.0)) throw DomainError("ordering_threshold: requires m - nu > 2");
    return 2.0 * x + 1.0 - std::sqrt(8.0 * x + 1.0);
}

/// 2 Gamma(1 - |nu|) Gamma(|nu| + 1/2) / (sqrt(pi) Gamma(|nu|))
inline double weak_steklov_coefficient(double nu) {
    const double a = std::abs(nu);
    if (!(a > 0.0 && a <= 0.5)) throw DomainError("weak_steklov_coefficient: requires 0 < |nu| <= 1/2");
    return 2.0 * specfun::gamma_fn(1.0 - a) * specfun::gamma_fn(a + 0.5) /
           (std::sqrt(std::numbers::pi) * specfun::gamma_fn(a));
}

/// Small-b expansion of the zero-energy Robin condition on the m = 0 fiber,
/// obtained from the small-z behaviour of U(1/2, 1-nu, z) and U(3/2, 2-nu, z)
/// at z = b/2: lambda = |nu| + D (b/2)^{|nu|}, with D = weak_steklov_coefficient
/// for nu > 0 and D = weak_steklov_coefficient * cos(pi |nu|) for nu < 0.
inline double weak_steklov_lambda_expansion(double nu, double b) {
    if (!(b > 0.0)) throw DomainError("weak_steklov_lambda_expansion: requires b > 0");
    const double a = std::abs(nu);
    double D = weak_steklov_coefficient(nu);
    if (nu < 0.0) D *= std::cos(std::numbers::pi * a);
    return a + D * std::pow(0.5 * b, a);
}

/// Weak-field Steklov Robin parameter -|nu| - C b^{|nu|}, and 2/log b at nu = 0.
inline double weak_steklov_beta(double nu, double b) {
    if (!(b > 0.0 && b < 1.0)) throw DomainError("weak_steklov_beta: requires 0 < b < 1");
    if (nu == 0.0) return 2.0 / std::log(b);
    const double a = std::abs(nu);
    return -a - weak_steklov_coefficient(nu) * std::pow(b, a);
}

} // namespace magspec::asym
