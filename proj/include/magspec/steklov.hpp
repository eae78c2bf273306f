#pragma once

// Steklov eigenvalue of the exterior disk problem through the Robin link
// mu(b, nu, beta) = 0 <=> beta = -lambda(b, nu), and the two verification
// campaigns built on it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "magspec/asym.hpp"
#include "magspec/degennes.hpp"
#include "magspec/errors.hpp"
#include "magspec/fiber.hpp"
#include "magspec/numerics.hpp"
#include "magspec/parallel.hpp"

namespace magspec::steklov {

struct SteklovResult {
    double b = 0.0, nu = 0.0;
    double lambda_val = 0.0;
    double robin_residual = 0.0; // |ground energy| at beta = -lambda
    std::pair<double, double> bracket{0.0, 0.0};
    int iterations = 0;
    int m = 0; // fiber carrying the ground state at beta = -lambda
};

/// Starting guess for beta = -lambda and its half-width.
inline std::pair<double, double> initial_beta(double b, double nu) {
    if (b >= 10.0) {
        const double a = degennes::hat_alpha();
        return {-asym::steklov_two_term(b, a), 1.0};
    }
    return {-std::abs(nu), 0.5};
}

inline double ground_energy(double b, double nu, double beta, const fiber::GridPolicy& g, int* m = nullptr) {
    const auto ex = fiber::exterior_spectrum_beta(b, nu, beta, 0, g);
    if (m) *m = ex.entries[0].m;
    return ex.entries[0].mu;
}

/// Brent on beta for the zero of the exterior ground-state energy; the energy
/// is increasing in beta, so the bracket is widened outward until it changes sign.
inline SteklovResult steklov_lambda(double b, double nu, const fiber::GridPolicy& g = {}) {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("steklov_lambda: b must be positive");
    if (!std::isfinite(nu)) throw DomainError("steklov_lambda: nu must be finite");
    const auto [guess, w] = initial_beta(b, nu);
    double lo = guess - w, hi = guess + w;
    double glo = ground_energy(b, nu, lo, g), ghi = ground_energy(b, nu, hi, g);
    for (int expand = 0; !(glo < 0.0 && ghi > 0.0); ++expand) {
        if (expand >= 8) throw BracketError("steklov_lambda: no sign change in the Robin bracket");
        const double step = (hi - lo);
        if (glo >= 0.0) {
            hi = lo;
            ghi = glo;
            lo -= step;
            glo = ground_energy(b, nu, lo, g);
        } else {
            lo = hi;
            glo = ghi;
            hi += step;
            ghi = ground_energy(b, nu, hi, g);
        }
    }
    const auto root = num::brent([&](double beta) { return ground_energy(b, nu, beta, g); }, lo, hi, 1e-13 * std::max(1.0, std::abs(lo)));
    SteklovResult r;
    r.b = b;
    r.nu = nu;
    r.lambda_val = -root.x;
    r.bracket = {lo, hi};
    r.iterations = root.iterations;
    r.robin_residual = std::abs(ground_energy(b, nu, root.x, g, &r.m));
    if (!(r.robin_residual <= 1e-9 * std::max(1.0, b)))
        throw NonConvergence("steklov_lambda: Robin residual " + std::to_string(r.robin_residual) + " above tolerance");
    return r;
}

// ---------------------------------------------------------------------------
// Zero-energy form in x = log r
//
// At zero energy the weight r^2 plays no role, so beta = -lambda_m exactly when
// -u'' + (k - b e^{2x}/2)^2 u = 0 has a solution decaying at +infinity with
// u'(0) = beta u(0). The Riccati variable w = u'/u obeys w' = V - w^2 and is
// integrated from the far end back to x = 0, the stable direction for the
// decaying branch.

struct FiberSteklov {
    int m = 0;
    double lambda = 0.0;
    double error = 0.0; // difference between step sizes h and h/2
};

namespace detail {

inline double riccati_w0(double k, double b, double X, std::size_t n) {
    auto V = [k, b](double x) {
        const double a = k - 0.5 * b * std::exp(2.0 * x);
        return a * a;
    };
    auto f = [&](double x, double w) { return V(x) - w * w; };
    const double h = X / static_cast<double>(n);
    double w = -std::sqrt(V(X));
    for (std::size_t i = n; i > 0; --i) {
        const double x = h * static_cast<double>(i);
        const double k1 = f(x, w);
        const double k2 = f(x - 0.5 * h, w - 0.5 * h * k1);
        const double k3 = f(x - 0.5 * h, w - 0.5 * h * k2);
        const double k4 = f(x - h, w - h * k3);
        w -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return w;
}

} // namespace detail

/// lambda_m = -u'(0)/u(0) for the decaying zero-energy solution of fiber m.
inline FiberSteklov fiber_steklov(int m, double nu, double b) {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("fiber_steklov: b must be positive");
    const double k = m - nu;
    // far end where b e^{2x}/2 exceeds |k| by 200, so sqrt(V) >= 200 there
    const double X = std::max(1.0, 0.5 * std::log(2.0 * (std::abs(k) + 200.0) / b));
    const auto n = static_cast<std::size_t>(std::max(4000.0, std::ceil(X / 2e-4)));
    const double w1 = detail::riccati_w0(k, b, X, n);
    const double w2 = detail::riccati_w0(k, b, X, 2 * n);
    return {m, -w2, std::abs(w2 - w1)};
}

/// min over m of the fiber Steklov values, scanned outward from the expected
/// minimizer until three consecutive increases on each side.
inline FiberSteklov steklov_lambda_zero_energy(double b, double nu) {
    int mc = static_cast<int>(std::ceil(nu - 0.5));
    if (b >= 10.0) mc = static_cast<int>(std::lround(nu + b / 2.0 + std::sqrt(b) * degennes::hat_alpha()));
    std::map<int, FiberSteklov> seen;
    auto get = [&](int m) -> const FiberSteklov& {
        auto it = seen.find(m);
        if (it == seen.end()) it = seen.emplace(m, fiber_steklov(m, nu, b)).first;
        return it->second;
    };
    for (int dir : {+1, -1}) {
        int rising = 0;
        for (int m = mc + dir; rising < 3; m += dir) {
            if (std::abs(m - mc) > 400) throw WindowExhausted("steklov_lambda_zero_energy: scan did not terminate");
            rising = get(m).lambda > get(m - dir).lambda ? rising + 1 : 0;
        }
    }
    const auto best = std::min_element(seen.begin(), seen.end(),
                                       [](const auto& a, const auto& c) { return a.second.lambda < c.second.lambda; });
    return best->second;
}

// ---------------------------------------------------------------------------
// Campaigns

enum class Solver { ExteriorBrent, ZeroEnergy };

inline double lambda_with(Solver s, double b, double nu, const fiber::GridPolicy& g = {}) {
    return s == Solver::ExteriorBrent ? steklov_lambda(b, nu, g).lambda_val : steklov_lambda_zero_energy(b, nu).lambda;
}

/// The b^{-1/2} contribution of the expansion of mu = 0 around gamma = -hat_alpha
/// that is not carried by hat_alpha * inf Delta:
///     G = Theta''/(2 Theta') d0^2 + C'/Theta' d0,   d0 = -(hat_alpha^2 + 1)/3,
/// with C(gamma) = (1 - gamma xi) Theta'/3. Derivatives by central differences.
inline double third_term_correction() {
    static const double value = [] {
        const double a = degennes::hat_alpha();
        const double d = 5e-3;
        auto th = [](double g) { return degennes::theta(g).first; };
        auto C = [](double g) { return (1.0 - g * degennes::theta(g).second) * degennes::theta_prime_fd(g) / 3.0; };
        const double t1 = (th(-a + d) - th(-a - d)) / (2 * d);
        const double t2 = (th(-a + d) - 2 * th(-a) + th(-a - d)) / (d * d);
        const double c1 = (C(-a + d) - C(-a - d)) / (2 * d);
        const double d0 = -(a * a + 1.0) / 3.0;
        return 0.5 * t2 / t1 * d0 * d0 + c1 / t1 * d0;
    }();
    return value;
}

struct ThirdTermRow {
    int n = 0;
    double b = 0.0, lambda = 0.0;
    double residual2term = 0.0;   // lambda - hat_alpha b^{1/2} - (hat_alpha^2+1)/3
    double residual3term = 0.0;   // minus (e0^2 + C1(-hat_alpha)) hat_alpha b^{-1/2} as well
    double scaled_residual = 0.0; // b * residual3term
    double residual_corrected = 0.0; // residual3term - third_term_correction() b^{-1/2}
};

struct ThirdTermReport {
    double e0 = 0.0, nu = 0.0;
    asym::EtaVariant variant = asym::EtaVariant::Shifted;
    std::vector<ThirdTermRow> rows;
    double two_term_slope = 0.0;   // log-log slope of |residual2term| in b
    double third_coefficient = 0.0; // least-squares c in residual2term ~ c b^{-1/2}, from the largest half of b
};

/// Steklov eigenvalues along the e0-sequence p_n = n, n in n_list, built at
/// gamma = -hat_alpha with the given eta variant.
inline ThirdTermReport verify_steklov_thirdterm(double e0, double nu, const std::vector<int>& n_list,
                                                asym::EtaVariant variant = asym::EtaVariant::Shifted,
                                                Solver solver = Solver::ExteriorBrent, const fiber::GridPolicy& g = {}) {
    if (n_list.size() < 2) throw DomainError("verify_steklov_thirdterm: need at least two n");
    const double a = degennes::hat_alpha();
    const auto& K = degennes::constants(-a);
    ThirdTermReport rep;
    rep.e0 = e0;
    rep.nu = nu;
    rep.variant = variant;
    std::vector<asym::E0Entry> entries;
    for (int n : n_list) {
        const auto e = asym::build_e0_sequence(e0, nu, K, n, n, variant).entries[0];
        if (!(e.b >= 25.0 && e.b <= 2500.0)) throw DomainError("verify_steklov_thirdterm: b_n outside [25, 2500]");
        entries.push_back(e);
    }
    // the exterior solver already fans out over fibers
    const double G = third_term_correction();
    for (const auto& e : entries) {
        ThirdTermRow r;
        r.n = e.n;
        r.b = e.b;
        r.lambda = lambda_with(solver, e.b, nu, g);
        const double sb = std::sqrt(e.b);
        r.residual2term = r.lambda - asym::steklov_two_term(e.b, a);
        r.residual3term = r.residual2term - (e0 * e0 + K.c1) * a / sb;
        r.scaled_residual = e.b * r.residual3term;
        r.residual_corrected = r.residual3term - G / sb;
        rep.rows.push_back(r);
    }
    std::vector<double> x, y;
    for (const auto& r : rep.rows) {
        x.push_back(r.b);
        y.push_back(std::abs(r.residual2term));
    }
    rep.two_term_slope = num::fit_power_law(x, y).first;
    double num_ = 0.0, den = 0.0;
    for (std::size_t i = rep.rows.size() / 2; i < rep.rows.size(); ++i) {
        const double s = 1.0 / std::sqrt(rep.rows[i].b);
        num_ += s * rep.rows[i].residual2term;
        den += s * s;
    }
    rep.third_coefficient = num_ / den;
    return rep;
}

struct WeakSteklovRow {
    double b = 0.0, lambda = 0.0, excess = 0.0; // excess = lambda - |nu|
};

struct WeakSteklovReport {
    double nu = 0.0;
    std::vector<WeakSteklovRow> rows;
    double exponent = 0.0, coefficient = 0.0; // fit excess ~ coefficient * b^exponent
    double coefficient_fixed = 0.0;           // least squares in log with the exponent held at |nu|
    double stated_coefficient = 0.0;          // 2 Gamma(1-|nu|) Gamma(|nu|+1/2) / (sqrt(pi) Gamma(|nu|))
    double expansion_coefficient = 0.0;       // from the small-z expansion of U, per unit b^{|nu|}
};

inline WeakSteklovReport verify_weak_steklov(double nu, const std::vector<double>& b_grid,
                                             Solver solver = Solver::ZeroEnergy, const fiber::GridPolicy& g = {}) {
    if (nu == 0.0) throw DomainError("verify_weak_steklov: nu must be nonzero");
    if (b_grid.size() < 2) throw DomainError("verify_weak_steklov: need at least two b");
    for (double b : b_grid)
        if (!(b > 0.0 && b <= 0.1)) throw DomainError("verify_weak_steklov: b must lie in (0, 0.1]");
    WeakSteklovReport rep;
    rep.nu = nu;
    rep.rows = parallel_map(b_grid.size(), [&](std::size_t i) {
        const double b = b_grid[i];
        const double lam = lambda_with(solver, b, nu, g);
        return WeakSteklovRow{b, lam, lam - std::abs(nu)};
    });
    std::vector<double> x, y;
    for (const auto& r : rep.rows) {
        if (!(r.excess > 0.0)) throw ConsistencyError("verify_weak_steklov: lambda below |nu|");
        x.push_back(r.b);
        y.push_back(r.excess);
    }
    std::tie(rep.exponent, rep.coefficient) = num::fit_power_law(x, y);
    double mean_log = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean_log += std::log(y[i]) - std::abs(nu) * std::log(x[i]);
    rep.coefficient_fixed = std::exp(mean_log / static_cast<double>(x.size()));
    rep.stated_coefficient = asym::weak_steklov_coefficient(nu);
    const double a = std::abs(nu);
    rep.expansion_coefficient = (asym::weak_steklov_lambda_expansion(nu, 1.0) - a);
    return rep;
}

} // namespace magspec::steklov
