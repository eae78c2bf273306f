#pragma once

// Gamma, digamma, Tricomi's confluent hypergeometric U(a, c, z) for a, z > 0,
// and the decaying parabolic cylinder function D_{1/2}.

#include <algorithm>
#include <array>
#include <initializer_list>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "magspec/errors.hpp"
#include "magspec/numerics.hpp"

namespace magspec::specfun {

inline constexpr double euler_gamma = std::numbers::egamma;

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

inline double gamma_fn(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma_fn: argument not finite");
    if (is_nonpositive_integer(x)) throw PoleError("gamma_fn: pole at non-positive integer");
    return std::tgamma(x);
}

/// 1/Gamma(x), zero at the poles of Gamma.
inline double rgamma(double x) { return is_nonpositive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); }

inline double digamma(double x) {
    if (!std::isfinite(x)) throw DomainError("digamma: argument not finite");
    if (is_nonpositive_integer(x)) throw PoleError("digamma: pole at non-positive integer");
    if (x < 0.0) {
        // reflection psi(1-x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
    }
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Bernoulli tail B_{2k}/(2k)
    constexpr std::array<double, 7> coef = {1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240,
                                            1.0 / 132, -691.0 / 32760, 1.0 / 12};
    const double x2 = 1.0 / (x * x);
    double series = 0.0, p = x2;
    for (double c : coef) {
        series += c * p;
        p *= x2;
    }
    return acc + std::log(x) - 0.5 / x - series;
}

struct HyperUOptions {
    double rel_tol = 1e-13;
    int initial_pieces = 16;
};

/// U(a, c, z) = (1/Gamma(a)) int_0^inf e^{-zt} t^{a-1} (1+t)^{c-a-1} dt, a > 0, z > 0.
/// The piece on (0, 1] is mapped by t = e^{-y} with the value at t = 0
/// removed analytically; the piece on [1, inf) is mapped by t = e^y.
inline double hyperU(double a, double c, double z, const HyperUOptions& opt = {}) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("hyperU: requires a > 0");
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("hyperU: requires z > 0");
    if (!std::isfinite(c)) throw DomainError("hyperU: c not finite");
    const double e = c - a - 1.0;
    auto g = [&](double t) { return std::exp(-z * t + e * std::log1p(t)); };

    const double y0 = 45.0 / (a + 1.0) + 45.0;
    auto near = [&](double y) {
        const double t = std::exp(-y);
        return std::exp(-a * y) * std::expm1(-z * t + e * std::log1p(t));
    };
    const auto i0 = num::integrate(near, 0.0, y0, opt.rel_tol, 0.0, opt.initial_pieces);

    const double t_max = std::max(2.0, (90.0 + 8.0 * (std::abs(c) + a)) / z);
    auto far = [&](double y) {
        const double t = std::exp(y);
        return std::exp(a * y) * g(t);
    };
    const auto i1 = num::integrate(far, 0.0, std::log(t_max), opt.rel_tol, 0.0, opt.initial_pieces);
    return rgamma(a + 1.0) + (i0.value + i1.value) * rgamma(a);
}

inline double hyperU_dz(double a, double c, double z, const HyperUOptions& opt = {}) {
    if (!(a + 1.0 > 0.0)) throw DomainError("hyperU_dz: requires a + 1 > 0");
    return -a * hyperU(a + 1.0, c + 1.0, z, opt);
}

enum class USmallZRegime { C_in_1_2, C_gt_2, C_eq_2_log, C_eq_3 };

/// Leading behaviour of U(a, c, z) as z -> 0+.
///   1 < c < 2 : G(c-1)/G(a) z^{1-c} + G(1-c)/G(a-c+1)
///   c > 2     : G(c-1)/G(a) z^{1-c}
///   c = 2     : 1/(G(a) z) + (log z + psi(a) + 2 gamma_E - 1)/G(a-1)
///   c = 3     : 1/(G(a) z^2) + (2-a)/(G(a) z)
struct USmallZExpansion {
    double a = 0.0;
    double c = 0.0;
    double leading_coefficient = 0.0; // of z^{1-c}
    std::optional<double> constant_term;
    std::optional<double> log_coefficient;   // c = 2 only
    std::optional<double> subleading_coefficient; // c = 3 only, of z^{-1}
    USmallZRegime regime = USmallZRegime::C_in_1_2;

    [[nodiscard]] double evaluate(double z) const {
        double v = leading_coefficient * std::pow(z, 1.0 - c);
        if (constant_term) v += *constant_term;
        if (log_coefficient) v += *log_coefficient * std::log(z);
        if (subleading_coefficient) v += *subleading_coefficient / z;
        return v;
    }
};

inline USmallZExpansion u_small_z_expansion(double a, double c) {
    if (!(a > 0.0)) throw DomainError("u_small_z_expansion: requires a > 0");
    USmallZExpansion ex;
    ex.a = a;
    ex.c = c;
    if (c == 2.0) {
        ex.regime = USmallZRegime::C_eq_2_log;
        ex.leading_coefficient = rgamma(a);
        ex.log_coefficient = rgamma(a - 1.0);
        ex.constant_term = (digamma(a) + 2.0 * euler_gamma - 1.0) * rgamma(a - 1.0);
    } else if (c == 3.0) {
        ex.regime = USmallZRegime::C_eq_3;
        ex.leading_coefficient = rgamma(a);
        ex.subleading_coefficient = (2.0 - a) * rgamma(a);
    } else if (c > 1.0 && c < 2.0) {
        ex.regime = USmallZRegime::C_in_1_2;
        ex.leading_coefficient = gamma_fn(c - 1.0) * rgamma(a);
        ex.constant_term = gamma_fn(1.0 - c) * rgamma(a - c + 1.0);
    } else if (c > 2.0) {
        ex.regime = USmallZRegime::C_gt_2;
        ex.leading_coefficient = gamma_fn(c - 1.0) * rgamma(a);
    } else {
        throw DomainError("u_small_z_expansion: c must be > 1");
    }
    return ex;
}

namespace detail {

struct OdeState {
    double w, dw;
};

// Decaying asymptotic expansion of D_nu at large positive z.
inline OdeState parabolic_asymptotic(double nu, double z) {
    double s = 1.0, ds = 0.0, ck = 1.0;
    const double iz2 = 1.0 / (z * z);
    double p = 1.0;
    for (int k = 1; k <= 8; ++k) {
        ck *= -(nu - 2 * k + 2) * (nu - 2 * k + 1) / (2.0 * k);
        p *= iz2;
        s += ck * p;
        ds += ck * (-2.0 * k) * p / z;
    }
    const double env = std::pow(z, nu) * std::exp(-0.25 * z * z);
    const double w = env * s;
    return {w, w * (nu / z - 0.5 * z) + env * ds};
}

} // namespace detail

/// Decaying solution of w'' + (1 - z^2/4) w = 0, i.e. D_{1/2}(z) up to a
/// positive factor (the asymptotic normalization z^{1/2} e^{-z^2/4} at z = 12
/// is used), obtained by adaptive Dormand-Prince integration from z = 12.
inline double parabolic_D_half(double z, double rtol = 1e-11) {
    if (!(z >= -10.0 && z <= 12.0)) throw DomainError("parabolic_D_half: z outside [-10, 12]");
    constexpr double z_start = 12.0;
    auto s = detail::parabolic_asymptotic(0.5, z_start);
    if (z == z_start) return s.w;

    auto rhs = [](double x, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1], (0.25 * x * x - 1.0) * y[0]};
    };
    // Dormand-Prince 5(4) tableau
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::array<double, 2> y{s.w, s.dw};
    double x = z_start;
    double h = -1e-3;
    auto k1 = rhs(x, y);
    int steps = 0;
    while (x > z) {
        if (x + h < z) h = z - x;
        auto at = [&](std::initializer_list<std::pair<double, const std::array<double, 2>*>> terms) {
            std::array<double, 2> r = y;
            for (auto [c, k] : terms) {
                r[0] += h * c * (*k)[0];
                r[1] += h * c * (*k)[1];
            }
            return r;
        };
        const auto k2 = rhs(x + c2 * h, at({{a21, &k1}}));
        const auto k3 = rhs(x + c3 * h, at({{a31, &k1}, {a32, &k2}}));
        const auto k4 = rhs(x + c4 * h, at({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const auto k5 = rhs(x + c5 * h, at({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const auto k6 = rhs(x + h, at({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const auto y5 = at({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const auto k7 = rhs(x + h, y5);
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = rtol * std::max(std::abs(y[i]), std::abs(y5[i])) + 1e-300;
            err = std::max(err, std::abs(ei) / scale);
        }
        if (err <= 1.0) {
            x += h;
            y = y5;
            k1 = k7;
        }
        const double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (++steps > 1000000) throw NonConvergence("parabolic_D_half: step limit");
    }
    return y[0];
}

/// alpha > 0 with D_{1/2}(-alpha) = 0.
inline double neg_zero_D_half(double rtol = 1e-11) {
    auto f = [rtol](double a) { return parabolic_D_half(-a, rtol); };
    if ((f(0.5) > 0) == (f(1.0) > 0)) throw BracketError("neg_zero_D_half: no sign change on [0.5, 1]");
    return num::brent(f, 0.5, 1.0, 1e-13).x;
}

} // namespace magspec::specfun
