#pragma once

// Spectral constants of the half-line de Gennes operator
//     h0[xi, gamma] = -d^2/dt^2 + (t - xi)^2,   u'(0) = gamma u(0),
// on the truncated interval (0, T) with Dirichlet at T.

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "magspec/errors.hpp"
#include "magspec/numerics.hpp"
#include "magspec/sturm1d.hpp"

namespace magspec::degennes {

struct Settings {
    double T = 20.0;
    std::size_t n = 3999; // h = 0.005 for T = 20

    auto operator<=>(const Settings&) const = default;
};

struct GroundState {
    double mu = 0.0;               // Richardson-extrapolated
    double mu_discrete = 0.0;      // on the base grid
    double richardson_error = 0.0;
    std::vector<double> phi;       // base grid, n+2 nodes, positive
    sturm1d::Interval grid;
};

struct DeGennesConstants {
    double gamma = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    double theta_prime = 0.0; // central difference of theta
    double phi0_sq = 0.0;
    double moment1 = 0.0, moment2 = 0.0, moment3 = 0.0;
    double resolvent_integral = 0.0;
    double k0 = 0.0, k1 = 0.0, k2 = 0.0;
    double k1_as_printed = 0.0; // without the <v0, B R0 A v0> cross term
    double mu1 = 0.0;           // <v0, h1 v0> by quadrature
    double c_upper = 0.0;
    double c0 = 0.0, c1 = 0.0;
    double theta1 = 0.0; // second eigenvalue of h0 at xi
    std::vector<double> phi;
    sturm1d::Interval grid;
};

inline sturm1d::RadialEigenProblem problem(double xi, double gamma, const Settings& s) {
    return {{0.0, s.T, s.n}, [xi](double t) { return (t - xi) * (t - xi); },
            sturm1d::EndpointCondition::robin(gamma), sturm1d::EndpointCondition::dirichlet()};
}

/// Lowest eigenvalue and normalized positive ground state of h0[xi, gamma].
inline GroundState mu0(double xi, double gamma, const Settings& s = {}) {
    if (!(std::abs(xi) <= 10.0) || !(std::abs(gamma) <= 10.0)) throw DomainError("mu0: |xi|, |gamma| must be <= 10");
    const auto p = problem(xi, gamma, s);
    const auto sol = sturm1d::solve(p, 1);
    GroundState g;
    g.mu = sol.eigenvalues[0];
    g.mu_discrete = sol.coarse_eigenvalues[0];
    g.richardson_error = sol.richardson_error[0];
    g.phi = sol.eigenfunctions[0];
    g.grid = p.interval;
    return g;
}

/// Richardson-extrapolated lowest eigenvalue only.
inline double mu0_value(double xi, double gamma, const Settings& s = {}) {
    sturm1d::SolveOptions opt;
    opt.eigenfunctions = false;
    return sturm1d::solve(problem(xi, gamma, s), 1, opt).eigenvalues[0];
}

/// (Theta(gamma), xi(gamma)): minimum over xi of mu0(xi, gamma).
inline std::pair<double, double> theta(double gamma, const Settings& s = {}) {
    if (!(std::abs(gamma) <= 5.0)) throw DomainError("theta: |gamma| must be <= 5");
    auto f = [&](double xi) { return mu0_value(xi, gamma, s); };
    constexpr int scan = 41;
    std::vector<double> vals(scan);
    for (int i = 0; i < scan; ++i) vals[static_cast<std::size_t>(i)] = f(-2.0 + 0.2 * i);
    int best = 0;
    for (int i = 1; i < scan; ++i)
        if (vals[static_cast<std::size_t>(i)] < vals[static_cast<std::size_t>(best)]) best = i;
    if (best == 0 || best == scan - 1) throw BracketError("theta: no interior minimum on [-2, 6]");
    const double lo = -2.0 + 0.2 * (best - 1), hi = -2.0 + 0.2 * (best + 1);
    double xi = num::golden_section(f, lo, hi, 1e-6).x;

    // Newton on the central-difference derivative; mu0 is smooth and the
    // minimum is non-degenerate, so two or three steps reach ~1e-10.
    constexpr double d = 1e-4;
    for (int it = 0; it < 8; ++it) {
        const double fm = f(xi - d), f0 = f(xi), fp = f(xi + d);
        const double g1 = (fp - fm) / (2 * d);
        const double g2 = (fp - 2 * f0 + fm) / (d * d);
        if (!(g2 > 0)) throw ConsistencyError("theta: minimum is not convex");
        const double step = g1 / g2;
        xi -= step;
        if (std::abs(step) < 1e-11) break;
    }
    const double th = f(xi);
    if (std::abs(xi - std::sqrt(std::max(0.0, th + gamma * gamma))) > 1e-6)
        throw ConsistencyError("theta: xi^2 = Theta + gamma^2 violated");
    return {th, xi};
}

inline double theta_prime_fd(double gamma, const Settings& s = {}) {
    constexpr double step = 1e-4;
    return (theta(gamma + step, s).first - theta(gamma - step, s).first) / (2 * step);
}

namespace detail {

// Fourth-order first derivative on a uniform grid; one-sided five-point
// stencils at the two ends of each side.
inline std::vector<double> derivative(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    std::vector<double> d(n);
    const double k = 1.0 / (12.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (v[i - 2] - 8 * v[i - 1] + 8 * v[i + 1] - v[i + 2]) * k;
    d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) * k;
    d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) * k;
    d[n - 1] = (25 * v[n - 1] - 48 * v[n - 2] + 36 * v[n - 3] - 16 * v[n - 4] + 3 * v[n - 5]) * k;
    d[n - 2] = (3 * v[n - 1] + 10 * v[n - 2] - 18 * v[n - 3] + 6 * v[n - 4] - v[n - 5]) * k;
    return d;
}

// Every quantity that constants() extrapolates, evaluated on one grid.
struct GridQuantities {
    double phi0_sq, m1, m2, m3, resolvent, k0, k1, k1_printed, k2, mu1;
};

inline GridQuantities on_grid(double xi, double gamma, const Settings& s) {
    const auto p = problem(xi, gamma, s);
    sturm1d::Discretization disc(p);
    const double lam = disc.eigenvalues(1)[0];
    const auto v = disc.expand(disc.eigenvector(lam).first);
    const double h = p.interval.h();
    const std::size_t n = v.size();
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = p.interval.node(i);

    auto ip = [&](std::span<const double> a, std::span<const double> b) { return sturm1d::trapezoid_dot(h, a, b); };
    auto resolvent = [&](std::span<const double> rhs) {
        return sturm1d::solve_with_orthogonality_constraint(p, lam, rhs, v);
    };
    // h1 = A + delta B, h2 = p2 + delta C + delta^2
    auto apply_A = [&](std::span<const double> f) {
        auto df = derivative(f, h);
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = t[i] - xi;
            r[i] = -df[i] + (t[i] * t[i] * u - 2 * t[i] * u * u) * f[i];
        }
        return r;
    };
    std::vector<double> Bv(n), Cv(n), P2v(n), u1(n), u2(n), u3(n);
    const auto dv = derivative(v, h);
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = t[i], u = ti - xi;
        Bv[i] = -2 * u * v[i];
        Cv[i] = (3 * ti * ti - 4 * ti * xi) * v[i];
        P2v[i] = ti * dv[i] + (-2 * ti * ti * ti * u + 3 * ti * ti * u * u + 0.25 * ti * ti * ti * ti) * v[i];
        u1[i] = u * v[i];
        u2[i] = u * u * v[i];
        u3[i] = u * u * u * v[i];
    }
    const auto Av = apply_A(v);
    const auto w = resolvent(u1);   // R0((t - xi) v)
    const auto RBv = resolvent(Bv); // -2 w
    const auto RAv = resolvent(Av);

    GridQuantities q{};
    q.phi0_sq = v[0] * v[0];
    q.m1 = ip(v, u1);
    q.m2 = ip(v, u2);
    q.m3 = ip(v, u3);
    q.resolvent = ip(u1, w);
    q.k2 = 1.0 - ip(Bv, RBv);
    const double cross_a = ip(v, apply_A(RBv));
    const double cross_b = ip(v, [&] {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = -2 * (t[i] - xi) * RAv[i];
        return r;
    }());
    q.k1 = ip(v, Cv) - cross_a - cross_b;
    q.k1_printed = ip(v, Cv) - cross_a;
    q.k0 = ip(v, P2v) - ip(v, apply_A(RAv));
    q.mu1 = ip(v, Av);
    return q;
}

inline double extrapolate(double coarse, double fine) { return fine + (fine - coarse) / 3.0; }

} // namespace detail

/// Full constant record at gamma; grid-dependent quantities are evaluated on
/// the (n, 2n+1) pair and Richardson-extrapolated individually.
inline DeGennesConstants compute_constants(double gamma, const Settings& s = {}) {
    if (!(std::abs(gamma) <= 5.0)) throw DomainError("constants: |gamma| must be <= 5");
    DeGennesConstants K;
    K.gamma = gamma;
    std::tie(K.theta, K.xi) = theta(gamma, s);
    K.theta_prime = theta_prime_fd(gamma, s);

    const auto c = detail::on_grid(K.xi, gamma, s);
    Settings fine = s;
    fine.n = 2 * s.n + 1;
    const auto f = detail::on_grid(K.xi, gamma, fine);
    using detail::extrapolate;
    K.phi0_sq = extrapolate(c.phi0_sq, f.phi0_sq);
    K.moment1 = extrapolate(c.m1, f.m1);
    K.moment2 = extrapolate(c.m2, f.m2);
    K.moment3 = extrapolate(c.m3, f.m3);
    K.resolvent_integral = extrapolate(c.resolvent, f.resolvent);
    K.k0 = extrapolate(c.k0, f.k0);
    K.k1 = extrapolate(c.k1, f.k1);
    K.k1_as_printed = extrapolate(c.k1_printed, f.k1_printed);
    K.k2 = extrapolate(c.k2, f.k2);
    K.mu1 = extrapolate(c.mu1, f.mu1);
    K.c_upper = (1.0 - gamma * K.xi) * K.phi0_sq / 3.0;
    K.c0 = -K.k1 / (2.0 * K.k2); // minimizer of k0 + k1 d + k2 d^2
    K.c1 = K.k0 / K.k2 - K.k1 * K.k1 / (4.0 * K.k2 * K.k2);

    const auto gs = mu0(K.xi, gamma, s);
    K.phi = gs.phi;
    K.grid = gs.grid;
    sturm1d::SolveOptions opt;
    opt.eigenfunctions = false;
    K.theta1 = sturm1d::solve(problem(K.xi, gamma, s), 2, opt).eigenvalues[1];

    if (!(K.k2 > 0) || std::abs(K.k2 - K.xi * K.phi0_sq) / K.k2 > 1e-3)
        throw ConsistencyError("constants: k2 disagrees with xi phi(0)^2");
    if (std::abs(K.mu1 - K.c_upper) > 1e-6)
        throw ConsistencyError("constants: mu1 quadrature disagrees with (1 - gamma xi) phi(0)^2 / 3");
    return K;
}

/// Memoized compute_constants; safe for concurrent callers.
inline const DeGennesConstants& constants(double gamma, const Settings& s = {}) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, std::size_t>, DeGennesConstants> memo;
    const auto key = std::make_tuple(gamma, s.T, s.n);
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    auto K = compute_constants(gamma, s);
    std::lock_guard lock(mu);
    return memo.try_emplace(key, std::move(K)).first->second;
}

/// The constant hat_alpha > 0 with Theta(-hat_alpha) = 0.
inline double hat_alpha(const Settings& s = {}) {
    static std::mutex mu;
    static std::map<Settings, double> memo;
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(s); it != memo.end()) return it->second;
    }
    auto f = [&](double g) { return theta(g, s).first; };
    const double root = -num::brent(f, -1.0, 0.0, 1e-11).x;
    std::lock_guard lock(mu);
    memo.emplace(s, root);
    return root;
}

} // namespace magspec::degennes
