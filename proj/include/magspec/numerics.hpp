#pragma once

// Small numerical toolbox shared by the solvers: scalar root finding,
// 1D minimization, adaptive quadrature and a least-squares line fit.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "magspec/errors.hpp"

namespace magspec::num {

struct RootResult {
    double x;
    double fx;
    int iterations;
};

/// Brent's method on [a, b]; f(a) and f(b) must have opposite signs (or one is zero).
template <class F>
RootResult brent(F&& f, double a, double b, double xtol, int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if ((fa > 0) == (fb > 0)) throw BracketError("brent: endpoints do not bracket a root");

    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 1; it <= max_iter; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return {b, fb, it};

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
        fb = f(b);
    }
    throw NonConvergence("brent: iteration cap reached");
}

struct MinResult {
    double x;
    double fx;
};

/// Golden-section search for a minimum inside [a, b].
template <class F>
MinResult golden_section(F&& f, double a, double b, double xtol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (std::abs(b - a) > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? MinResult{c, fc} : MinResult{d, fd};
}

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double k = fc * kronrod_w[7];
    double g = fc * gauss_w[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kronrod_x[i];
        const double s = f(mid - dx) + f(mid + dx);
        k += kronrod_w[i] * s;
        if (i % 2 == 1) g += gauss_w[i / 2] * s;
    }
    return {k * half, std::abs((k - g) * half)};
}

} // namespace detail

struct QuadResult {
    double value;
    double error;
    int intervals;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b], split into
/// `initial` equal pieces before refinement starts.
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                     int initial = 8, int max_intervals = 20000) {
    struct Piece {
        double a, b, value, error;
    };
    std::vector<Piece> pieces;
    pieces.reserve(static_cast<std::size_t>(initial) * 4);
    double total = 0.0, err = 0.0;
    for (int i = 0; i < initial; ++i) {
        const double lo = a + (b - a) * i / initial;
        const double hi = (i + 1 == initial) ? b : a + (b - a) * (i + 1) / initial;
        auto [v, e] = detail::gk15(f, lo, hi);
        pieces.push_back({lo, hi, v, e});
        total += v;
        err += e;
    }
    auto worse = [](const Piece& x, const Piece& y) { return x.error < y.error; };
    std::make_heap(pieces.begin(), pieces.end(), worse);
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (static_cast<int>(pieces.size()) >= max_intervals) break;
        std::pop_heap(pieces.begin(), pieces.end(), worse);
        Piece p = pieces.back();
        pieces.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {
            // interval below resolution; keep its estimate
            pieces.push_back({p.a, p.b, p.value, 0.0});
            std::push_heap(pieces.begin(), pieces.end(), worse);
            err -= p.error;
            continue;
        }
        auto [v1, e1] = detail::gk15(f, p.a, mid);
        auto [v2, e2] = detail::gk15(f, mid, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        pieces.push_back({p.a, mid, v1, e1});
        std::push_heap(pieces.begin(), pieces.end(), worse);
        pieces.push_back({mid, p.b, v2, e2});
        std::push_heap(pieces.begin(), pieces.end(), worse);
    }
    // re-sum to shed accumulated cancellation in the running totals
    double sum = 0.0, esum = 0.0;
    for (const auto& p : pieces) {
        sum += p.value;
        esum += p.error;
    }
    return {sum, esum, static_cast<int>(pieces.size())};
}

struct LineFit {
    double slope;
    double intercept;
    double rms_residual;
};

/// Ordinary least squares y = slope*x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (slope * x[i] + intercept);
        ss += r * r;
    }
    return {slope, intercept, std::sqrt(ss / n)};
}

/// Fit log(y) = log(C) + p*log(x); returns {p, C}.
inline std::pair<double, double> fit_power_law(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const auto fit = fit_line(lx, ly);
    return {fit.slope, std::exp(fit.intercept)};
}

} // namespace magspec::num
