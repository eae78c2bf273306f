#pragma once

// Angular-momentum fibers of the exterior Robin problem
//     L^(m) u = -u'' - u'/r + ((m - nu)/r - b r/2)^2 u   on (1, inf), u'(1) = beta u(1),
// solved in Liouville form f = r^{1/2} u, where the potential becomes
// ((m - nu)/r - b r/2)^2 - 1/(4 r^2) and the Robin coefficient becomes beta + 1/2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "magspec/asym.hpp"
#include "magspec/degennes.hpp"
#include "magspec/errors.hpp"
#include "magspec/numerics.hpp"
#include "magspec/parallel.hpp"
#include "magspec/specfun.hpp"
#include "magspec/sturm1d.hpp"

namespace magspec::fiber {

struct FiberSpec {
    int m = 0;
    double nu = 0.0;
    double b = 1.0;
    double gamma = 0.0; // beta = sqrt(b) gamma

    [[nodiscard]] double k() const { return m - nu; }
    [[nodiscard]] double beta() const { return std::sqrt(b) * gamma; }

    static FiberSpec with_beta(int m, double nu, double b, double beta) { return {m, nu, b, beta / std::sqrt(b)}; }

    // The operator depends on m - nu only, so nu is not forced into (-1/2, 1/2]
    // here; callers normalize it when they need the canonical range.
    void validate() const {
        if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("FiberSpec: b must be positive");
        if (!std::isfinite(nu) || !std::isfinite(gamma)) throw DomainError("FiberSpec: nu and gamma must be finite");
    }
};

/// Grid policy. `scale` multiplies the node spacing (2 for smoke runs).
struct GridPolicy {
    double scale = 1.0;
    double decay_threshold = 40.0;
};

/// Smallest R > 1 with b (R^2 - 1)/4 - (|k| + 1) log R >= threshold. The left
/// side is convex in R and vanishes at R = 1, so the crossing is unique.
inline double radial_cutoff(double b, double abs_k, double threshold) {
    auto F = [&](double R) { return b * (R * R - 1.0) / 4.0 - (abs_k + 1.0) * std::log(R) - threshold; };
    double lo = 1.0, step = 1.0;
    while (F(lo + step) < 0.0) {
        lo += step;
        step *= 2.0;
        if (step > 1e12) throw DomainError("radial_cutoff: field too weak");
    }
    return num::brent(F, lo, lo + step, 1e-12 * (lo + step)).x;
}

inline double max_spacing(double b, const GridPolicy& g) { return 2e-3 * std::min(1.0, 1.0 / std::sqrt(b)) * g.scale; }

inline sturm1d::RadialEigenProblem fiber_problem(const FiberSpec& s, int count, const GridPolicy& g = {}) {
    s.validate();
    const double k = s.k();
    const double b = s.b;
    const double R = radial_cutoff(b, std::abs(k), g.decay_threshold + 4.0 * (count - 1));
    const double h = max_spacing(b, g);
    const auto n = static_cast<std::size_t>(std::max(64.0, std::ceil((R - 1.0) / h)));
    auto W = [k, b](double r) {
        const double a = k / r - 0.5 * b * r;
        return a * a - 0.25 / (r * r);
    };
    return {{1.0, R, n}, W, sturm1d::EndpointCondition::robin(s.beta() + 0.5), sturm1d::EndpointCondition::dirichlet()};
}

/// Lowest `count` eigenvalues of L^(m). Eigenfunctions are in Liouville form
/// f = r^{1/2} u on the coarse grid.
inline sturm1d::EigenSolution fiber_eigs(const FiberSpec& s, int count, const GridPolicy& g = {},
                                         bool eigenfunctions = true) {
    if (count < 1 || count > 8) throw DomainError("fiber_eigs: count must be in 1..8");
    sturm1d::SolveOptions opt;
    opt.eigenfunctions = eigenfunctions;
    return sturm1d::solve(fiber_problem(s, count, g), count, opt);
}

/// The same fiber written in t = sqrt(b/2)(r - 1): b/2 times
///     -d^2/dt^2 + (4k^2 - 1)/(4 (t + s)^2) + (t + s)^2 - 2k,   s = sqrt(b/2),
/// with Robin coefficient (beta + 1/2)/s at t = 0. `grid_factor` changes the
/// node count relative to the r-grid.
inline sturm1d::EigenSolution scaled_fiber_eigs(const FiberSpec& s, int count, double grid_factor = 1.0,
                                                const GridPolicy& g = {}) {
    const auto base = fiber_problem(s, count, g);
    const double k = s.k();
    const double sc = std::sqrt(0.5 * s.b);
    auto w = [k, sc](double t) {
        const double x = t + sc;
        return (4.0 * k * k - 1.0) / (4.0 * x * x) + x * x - 2.0 * k;
    };
    const auto n = static_cast<std::size_t>(std::ceil(static_cast<double>(base.interval.n) * grid_factor));
    sturm1d::RadialEigenProblem p{{0.0, sc * (base.interval.hi - 1.0), n}, w,
                                  sturm1d::EndpointCondition::robin((s.beta() + 0.5) / sc),
                                  sturm1d::EndpointCondition::dirichlet()};
    sturm1d::SolveOptions opt;
    opt.eigenfunctions = false;
    return sturm1d::solve(p, count, opt);
}

// ---------------------------------------------------------------------------
// Exterior spectrum

struct SpectrumEntry {
    int m = 0;
    int level = 0;
    double mu = 0.0;
    double error = 0.0;
};

struct ExteriorSpectrum {
    std::vector<SpectrumEntry> entries; // ascending in mu
    std::vector<SpectrumEntry> fiber_minima; // mu_0^(m) for every scanned m, ascending in m
    bool truncation_warning = false;
};

namespace detail {

inline double xi_for_window(double gamma) {
    static std::mutex mu;
    static std::map<double, double> memo;
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(gamma); it != memo.end()) return it->second;
    }
    degennes::Settings coarse;
    coarse.n = 999;
    const double xi = degennes::theta(std::clamp(gamma, -5.0, 5.0), coarse).second;
    std::lock_guard lock(mu);
    memo.emplace(gamma, xi);
    return xi;
}

struct FiberLevels {
    int m;
    std::vector<double> mu, err;
};

inline FiberLevels levels(int m, double nu, double b, double beta, int count, const GridPolicy& g) {
    const auto sol = fiber_eigs(FiberSpec::with_beta(m, nu, b, beta), count, g, false);
    return {m, sol.eigenvalues, sol.richardson_error};
}

inline double kth_best(std::vector<SpectrumEntry> all, std::size_t k) {
    if (all.size() <= k) return std::numeric_limits<double>::infinity();
    std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                     [](const auto& a, const auto& c) { return a.mu < c.mu; });
    return all[k].mu;
}

} // namespace detail

/// The k+1 smallest fiber eigenvalues at Robin parameter beta.
inline ExteriorSpectrum exterior_spectrum_beta(double b, double nu, double beta, int k, const GridPolicy& g = {}) {
    if (!(b > 0.0)) throw DomainError("exterior_spectrum: b must be positive");
    if (k < 0 || k > 4) throw DomainError("exterior_spectrum: k must be in 0..4");
    const int count = k + 1;
    const auto kk = static_cast<std::size_t>(k);
    std::map<int, detail::FiberLevels> scanned;
    std::vector<SpectrumEntry> all;
    auto add = [&](const detail::FiberLevels& f) {
        scanned.emplace(f.m, f);
        for (int j = 0; j < count; ++j)
            all.push_back({f.m, j, f.mu[static_cast<std::size_t>(j)], f.err[static_cast<std::size_t>(j)]});
    };

    if (b >= 10.0) {
        const double xi = detail::xi_for_window(beta / std::sqrt(b));
        const int mc = static_cast<int>(std::lround(nu + b / 2.0 + std::sqrt(b) * xi));
        const int W = static_cast<int>(std::ceil(4.0 * std::pow(b, 0.25))) + 8;
        const auto res = parallel_map(static_cast<std::size_t>(2 * W + 1), [&](std::size_t i) {
            return detail::levels(mc - W + static_cast<int>(i), nu, b, beta, count, g);
        });
        for (const auto& f : res) add(f);
        const double cut = detail::kth_best(all, kk);
        if (scanned.at(mc - W).mu[0] <= cut || scanned.at(mc + W).mu[0] <= cut)
            throw WindowExhausted("exterior_spectrum: best levels reach the edge of the m window");
    } else {
        const int mc = static_cast<int>(std::ceil(nu));
        constexpr int max_fibers = 400;
        // upward: stop once the ordering guarantee holds or three consecutive
        // increasing ground energies sit above the current cut
        int rising = 0;
        for (int m = mc;; ++m) {
            if (m - mc > max_fibers) throw WindowExhausted("exterior_spectrum: upward scan did not terminate");
            add(detail::levels(m, nu, b, beta, count, g));
            const double mu0 = scanned.at(m).mu[0];
            const double cut = detail::kth_best(all, kk);
            const bool above = mu0 > cut;
            rising = (above && scanned.count(m - 1) && mu0 > scanned.at(m - 1).mu[0]) ? rising + 1 : 0;
            const bool ordered = beta == 0.0 && m + 1 - nu > 2.0 && b < asym::ordering_threshold(m + 1, nu);
            if (above && (ordered || rising >= 3)) break;
        }
        // downward: for beta >= 0 and m < nu the ground energy exceeds 2|m - nu| b
        rising = 0;
        for (int m = mc - 1;; --m) {
            if (mc - m > max_fibers) throw WindowExhausted("exterior_spectrum: downward scan did not terminate");
            const double cut = detail::kth_best(all, kk);
            if (beta >= 0.0 && m < nu && 2.0 * (nu - m) * b > cut) break;
            add(detail::levels(m, nu, b, beta, count, g));
            const double mu0 = scanned.at(m).mu[0];
            const bool above = mu0 > detail::kth_best(all, kk);
            rising = (above && mu0 > scanned.at(m + 1).mu[0]) ? rising + 1 : 0;
            if (rising >= 3) break;
        }
    }

    std::sort(all.begin(), all.end(), [](const auto& a, const auto& c) {
        return a.mu != c.mu ? a.mu < c.mu : a.m < c.m;
    });
    ExteriorSpectrum out;
    out.entries.assign(all.begin(), all.begin() + count);
    for (const auto& [m, f] : scanned) out.fiber_minima.push_back({m, 0, f.mu[0], f.err[0]});
    // certify the truncated domain for the fibers that made the cut
    std::map<int, int> deepest;
    for (const auto& e : out.entries) deepest[e.m] = std::max(deepest[e.m], e.level + 1);
    for (const auto& [m, depth] : deepest) {
        const auto sol = fiber_eigs(FiberSpec::with_beta(m, nu, b, beta), depth, g, true);
        out.truncation_warning = out.truncation_warning || sol.truncation_warning;
    }
    return out;
}

inline ExteriorSpectrum exterior_spectrum(double b, double nu, double gamma, int k, const GridPolicy& g = {}) {
    return exterior_spectrum_beta(b, nu, std::sqrt(b) * gamma, k, g);
}

// ---------------------------------------------------------------------------
// Dispersion curves

struct DispersionPoint {
    FiberSpec spec;
    int level = 0;
    double mu = std::numeric_limits<double>::quiet_NaN();
    double error = 0.0;
    bool ok = true;
    std::string message;
};

/// All (m, b, level) points, m-major then b then level. Failures are kept in-band.
inline std::vector<DispersionPoint> dispersion_sweep(double nu, double gamma, const std::vector<int>& m_list,
                                                     const std::vector<double>& b_grid, int level_count,
                                                     const GridPolicy& g = {}) {
    for (std::size_t i = 0; i < b_grid.size(); ++i) {
        if (!(b_grid[i] > 0.0) || (i > 0 && !(b_grid[i] > b_grid[i - 1])))
            throw DomainError("dispersion_sweep: b grid must be positive and ascending");
    }
    if (level_count < 1 || level_count > 5) throw DomainError("dispersion_sweep: level_count must be in 1..5");
    const std::size_t nb = b_grid.size();
    const auto blocks = parallel_map(m_list.size() * nb, [&](std::size_t idx) {
        const FiberSpec s{m_list[idx / nb], nu, b_grid[idx % nb], gamma};
        std::vector<DispersionPoint> pts;
        try {
            const auto sol = fiber_eigs(s, level_count, g, false);
            for (int j = 0; j < level_count; ++j)
                pts.push_back({s, j, sol.eigenvalues[static_cast<std::size_t>(j)],
                               sol.richardson_error[static_cast<std::size_t>(j)], true, {}});
        } catch (const std::exception& e) {
            for (int j = 0; j < level_count; ++j)
                pts.push_back({s, j, std::numeric_limits<double>::quiet_NaN(), 0.0, false, e.what()});
        }
        return pts;
    });
    std::vector<DispersionPoint> out;
    for (const auto& blk : blocks) out.insert(out.end(), blk.begin(), blk.end());
    return out;
}

// ---------------------------------------------------------------------------
// Neumann ground state through the hypergeometric U function

struct ImplicitRoot {
    double lambda = 0.0;
    double gap = 0.0; // b - lambda, computed without cancellation
};

/// With k = m - nu, a = (b - lambda)/(2b) and z = b/2 the Neumann condition reads
///     (k - b/2) U(a, k+1, z) - ((b - lambda)/2) U(a+1, k+2, z) = 0.
/// The scan runs over b - lambda = b 10^{-14 j/63}, j = 0..63.
inline ImplicitRoot implicit_eig_U(int m, double nu, double b) {
    const double k = m - nu;
    if (m < 0 || !(b > 0.0) || !(b < 2.0 * k))
        throw NoRootInBracket("implicit_eig_U: requires m >= 0 and 0 < b < 2(m - nu)");
    const double z = 0.5 * b;
    auto F = [&](double d) {
        const double a = d / (2.0 * b);
        return (k - z) * specfun::hyperU(a, k + 1.0, z) - 0.5 * d * specfun::hyperU(a + 1.0, k + 2.0, z);
    };
    auto G = [&](double s) { return F(b * std::exp(s)); }; // s = log((b - lambda)/b)
    constexpr int N = 64;
    const double s_min = -14.0 * std::numbers::ln10;
    double s_prev = 0.0;
    double f_prev = G(s_prev);
    for (int j = 1; j < N; ++j) {
        const double s = s_min * j / (N - 1);
        const double f = G(s);
        if ((f > 0) != (f_prev > 0) || f == 0.0) {
            const double root = num::brent(G, s, s_prev, 1e-12).x;
            const double d = b * std::exp(root);
            return {b - d, d};
        }
        s_prev = s;
        f_prev = f;
    }
    throw NoRootInBracket("implicit_eig_U: no sign change in (0, b)");
}

// ---------------------------------------------------------------------------
// Temple bounds for the Neumann ground state

struct TempleBound {
    FiberSpec spec;
    double norm_sq = 0.0;
    double eta = 0.0;
    double eps_sq = 0.0;
    double beta_gap = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Quasi-mode Psi = chi f with f = r^k e^{-b r^2/4}, chi = 1 + c r^{-2k},
/// c = (k - b/2)/(k + b/2). It satisfies Psi'(1) = 0 and (L - b) Psi = b r chi' f.
inline TempleBound temple_bounds(int m, double nu, double b) {
    const double k = m - nu;
    if (!(b > 0.0)) throw DomainError("temple_bounds: b must be positive");
    if (!(m >= 1 || (m == 0 && nu < 0.0))) throw DomainError("temple_bounds: requires m >= 1, or m = 0 with nu < 0");
    if (m == 0 && !(b < std::abs(nu))) throw DomainError("temple_bounds: m = 0 requires b < |nu|");
    const double c = (k - 0.5 * b) / (k + 0.5 * b);
    const double R = radial_cutoff(b, 2.0 * std::abs(k) + 1.0, 60.0);
    // Every integrand carries e^{-b(r^2-1)/2} so values stay O(1) near r = 1.
    auto gauss = [b](double r) { return std::exp(-0.5 * b * (r * r - 1.0)); };
    auto quad = [&](auto&& f) { return num::integrate(f, 1.0, R, 1e-13, 0.0, 256).value; };
    const double norm_sq = quad([&](double r) {
        const double chi = 1.0 + c * std::pow(r, -2.0 * k);
        return chi * chi * std::pow(r, 2.0 * k + 1.0) * gauss(r);
    });
    const double cross = quad([&](double r) { return (1.0 + c * std::pow(r, -2.0 * k)) * r * gauss(r); });
    const double resid = quad([&](double r) { return std::pow(r, 1.0 - 2.0 * k) * gauss(r); });

    TempleBound t;
    t.spec = {m, nu, b, 0.0};
    t.norm_sq = norm_sq * std::exp(-0.5 * b);
    t.eta = -2.0 * k * c * b * cross / norm_sq;
    const double mean_sq = 4.0 * k * k * c * c * b * b * resid / norm_sq;
    t.eps_sq = std::max(0.0, mean_sq - t.eta * t.eta);
    t.beta_gap = (2.0 + nu) * b;
    if (!(t.beta_gap > t.eta)) throw GapViolation("temple_bounds: gap estimate does not exceed the Rayleigh quotient");
    t.upper = b + t.eta;
    t.lower = b + t.eta - t.eps_sq / (t.beta_gap - t.eta);
    return t;
}

// ---------------------------------------------------------------------------
// Effective weak-field operator

namespace detail {

// Eigenvalues of -(r^a g')' + r^a (r^2 - 2k) g = E r^a g on (0, T), g(T) = 0,
// a = 1 + 2|k|, on N cells by finite volumes, symmetrized by the mass matrix.
inline std::vector<double> effective_fv_eigs(double k, int count, double T, std::size_t N) {
    const double a = 1.0 + 2.0 * std::abs(k);
    const double h = T / static_cast<double>(N);
    auto cell_mass = [&](double lo, double hi) { return (std::pow(hi, a + 1.0) - std::pow(lo, a + 1.0)) / (a + 1.0); };
    std::vector<double> mass(N), diag(N), off(N - 1);
    for (std::size_t i = 0; i < N; ++i) {
        const double r = h * static_cast<double>(i);
        mass[i] = cell_mass(std::max(0.0, r - 0.5 * h), r + 0.5 * h);
    }
    for (std::size_t i = 0; i < N; ++i) {
        const double r = h * static_cast<double>(i);
        const double flux_right = std::pow(r + 0.5 * h, a) / h;
        const double flux_left = i > 0 ? std::pow(r - 0.5 * h, a) / h : 0.0;
        diag[i] = (flux_left + flux_right + mass[i] * (r * r - 2.0 * k)) / mass[i];
        if (i + 1 < N) off[i] = -flux_right / std::sqrt(mass[i] * mass[i + 1]);
    }
    return sturm1d::tridiagonal_eigenvalues(diag, off, count);
}

} // namespace detail

/// Eigenvalues of -d^2/dr^2 + (4k^2 - 1)/(4r^2) + r^2 - 2k on (0, T), k = m - nu,
/// with the decaying branch r^{1/2+|k|} at 0 and Dirichlet at T. The factor
/// r^{1/2+|k|} is divided out so the finite-volume scheme sees a smooth
/// function, and two grids (N, 2N) are Richardson-combined.
inline std::vector<double> effective_op_eigs(int m, double nu, int count, double T = 14.0, std::size_t N = 8000) {
    if (m < 0) throw DomainError("effective_op_eigs: requires m >= 0");
    if (!(nu > -0.5 && nu <= 0.5) || nu == 0.0) throw DomainError("effective_op_eigs: nu must be in (-1/2, 1/2] \\ {0}");
    if (count < 1 || count > 4) throw DomainError("effective_op_eigs: count must be in 1..4");
    const double k = m - nu;
    const auto c = detail::effective_fv_eigs(k, count, T, N);
    const auto f = detail::effective_fv_eigs(k, count, T, 2 * N);
    std::vector<double> out(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) out[j] = f[j] + (f[j] - c[j]) / 3.0;
    return out;
}

// ---------------------------------------------------------------------------
// Boundary-layer profile of the strong-field ground state

struct ProfileFit {
    int m = 0;
    double delta = 0.0;
    double constant = 0.0;
    double relative_residual = 0.0;
};

namespace detail {

inline ProfileFit fit_profile(const sturm1d::EigenSolution& sol, int m, double b, double shift) {
    const auto& f = sol.eigenfunctions[0];
    const double lo = 1.0 + (3.0 + shift) / std::sqrt(b), hi = 1.0 + (8.0 + shift) / std::sqrt(b);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < sol.nodes.size(); ++i) {
        const double r = sol.nodes[i];
        if (r < lo || r > hi || !(f[i] > 0.0)) continue;
        const double log_u = std::log(f[i]) - 0.5 * std::log(r); // radial function u = r^{-1/2} f
        x.push_back(std::log(r * r - 1.0));
        y.push_back(log_u - (m * std::log(r) - 0.25 * b * (r * r - 1.0)));
    }
    if (x.size() < 8) throw FitWindowTooNoisy("profile_exponent_fit: too few nodes in the window");
    const auto fit = num::fit_line(x, y);
    double spread = 0.0;
    for (double v : y) spread = std::max(spread, std::abs(v - y.front()));
    ProfileFit out{m, -fit.slope, fit.intercept, spread > 0 ? fit.rms_residual / spread : 0.0};
    if (out.relative_residual > 0.1) throw FitWindowTooNoisy("profile_exponent_fit: linear fit residual above 10%");
    return out;
}

} // namespace detail

/// Fits log u - (m log r - b(r^2-1)/4) = -delta log(r^2 - 1) + const for the
/// Neumann ground state of the minimizing fiber, on r in [1 + (3+shift)/sqrt(b), 1 + (8+shift)/sqrt(b)].
inline ProfileFit profile_exponent_fit(double b, double nu, double window_shift = 0.0, const GridPolicy& g = {}) {
    if (!(b >= 100.0)) throw DomainError("profile_exponent_fit: requires b >= 100");
    const auto spec = exterior_spectrum(b, nu, 0.0, 0, g);
    const int m = spec.entries.front().m;
    sturm1d::SolveOptions opt;
    const auto sol = sturm1d::solve(fiber_problem({m, nu, b, 0.0}, 1, g), 1, opt);
    return detail::fit_profile(sol, m, b, window_shift);
}

} // namespace magspec::fiber
