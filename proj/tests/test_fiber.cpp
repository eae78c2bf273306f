#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "magspec/asym.hpp"
#include "magspec/degennes.hpp"
#include "magspec/fiber.hpp"
#include "magspec/numerics.hpp"
#include "magspec/specfun.hpp"

using namespace magspec;
using namespace magspec::fiber;

namespace {

double mu0(int m, double nu, double b, double gamma = 0.0) {
    return fiber_eigs({m, nu, b, gamma}, 1, {}, false).eigenvalues[0];
}

} // namespace

TEST(Fiber, ExactEigenfunctionAtCrossing) {
    // r^{k} e^{-b r^2/4} solves the Neumann fiber exactly when b = 2k
    const double nu = 0.25, k = 0.75, b = 2 * k;
    const auto s = fiber_eigs({1, nu, b, 0.0}, 1);
    EXPECT_NEAR(s.eigenvalues[0], b, 1e-7);
    EXPECT_FALSE(s.truncation_warning);
    // Liouville form f = r^{1/2} u, compared up to normalization
    const auto& f = s.eigenfunctions[0];
    const double scale = f[0] / std::exp(-b / 4);
    for (std::size_t i = 0; i < f.size(); i += 97) {
        const double r = s.nodes[i];
        const double ref = scale * std::pow(r, k + 0.5) * std::exp(-b * r * r / 4);
        EXPECT_NEAR(f[i], ref, 1e-5 * std::abs(scale));
    }
}

TEST(Fiber, RobinShiftForLiouvilleForm) {
    // u = r^k e^{-b r^2/4} has u'(1)/u(1) = k - b/2, so it is the exact ground
    // state of the Robin fiber with that beta at eigenvalue b (any b).
    for (double b : {0.4, 3.0, 12.0}) {
        const int m = 2;
        const double nu = -0.25, k = m - nu;
        const auto spec = FiberSpec::with_beta(m, nu, b, k - b / 2);
        EXPECT_NEAR(fiber_eigs(spec, 1, {}, false).eigenvalues[0], b, 1e-8 * std::max(1.0, b)) << b;
    }
}

TEST(Fiber, ExactCrossings) {
    EXPECT_NEAR(mu0(1, 0.25, 1.5), 1.5, 1e-7);
    EXPECT_NEAR(mu0(1, -0.25, 2.5), 2.5, 1e-7);
    EXPECT_NEAR(mu0(2, 0.5, 3.0), 3.0, 1e-7);
}

TEST(Fiber, NegativeMomentumLowerBound) { EXPECT_GT(mu0(-1, 0.25, 0.5), 2 * 1.25 * 0.5); }

TEST(Fiber, WeakFieldLandauLimits) {
    const double b = 0.01;
    const auto s = fiber_eigs({1, -0.25, b, 0.0}, 2, {}, false);
    EXPECT_NEAR(s.eigenvalues[1] / b, 3.0, 0.3);
    EXPECT_NEAR(s.eigenvalues[0] / b, 1.0, 0.05);
    for (int m : {1, 2, 3}) {
        const auto t = fiber_eigs({m, 0.25, 1e-3, 0.0}, 2, {}, false);
        EXPECT_NEAR(t.eigenvalues[0] / 1e-3, 1.0, 0.02) << m;
        EXPECT_NEAR(t.eigenvalues[1] / 1e-3, 3.0, 0.1) << m;
    }
}

TEST(Fiber, ScaledCoordinatesAgree) {
    for (const FiberSpec s : {FiberSpec{1, 0.25, 3.0, 0.3}, FiberSpec{0, -0.25, 0.2, 0.0}, FiberSpec{40, 0.1, 60.0, -0.5}}) {
        const auto r = fiber_eigs(s, 3, {}, false);
        const auto t = scaled_fiber_eigs(s, 3, 1.37);
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_NEAR(0.5 * s.b * t.eigenvalues[j] / r.eigenvalues[j], 1.0, 1e-8) << s.m << " " << j;
    }
}

TEST(Fiber, CrossingRuleSigns) {
    for (double nu : {0.25, -0.25})
        for (int m : {0, 1, 2})
            for (double b : {0.2, 0.7, 1.2, 2.0, 3.0, 4.5}) {
                const double c = 2 * (m - nu) - b;
                if (std::abs(c) < 1e-9) continue;
                EXPECT_EQ(mu0(m, nu, b) - b > 0, c < 0) << nu << " " << m << " " << b;
            }
}

TEST(Fiber, SecondCurveAboveLine) {
    for (int m : {1, 2, 3})
        for (double b : {0.05, 0.5, 2.0, 6.0})
            EXPECT_GT(fiber_eigs({m, 0.25, b, 0.0}, 2, {}, false).eigenvalues[1], b) << m << " " << b;
}

TEST(Fiber, OrderingBeyondThreshold) {
    for (int m : {3, 4, 6}) {
        const double nu = 0.25;
        const double t = asym::ordering_threshold(m, nu);
        for (double frac : {0.1, 0.5, 0.95}) EXPECT_LT(mu0(m - 1, nu, frac * t), mu0(m, nu, frac * t)) << m;
    }
    EXPECT_NEAR(asym::ordering_threshold(3, 0.0), 2.0, 1e-15);
    EXPECT_THROW(asym::ordering_threshold(2, 0.0), DomainError);
}

TEST(Fiber, RadialGapForNegativeFlux) {
    const double b = 0.01, nu = -0.25;
    const auto s = fiber_eigs({0, nu, b, 0.0}, 2, {}, false);
    EXPECT_GE(s.eigenvalues[1] - s.eigenvalues[0], (2 + nu) * b * 0.9);
}

TEST(Fiber, RobinMonotone) {
    double prev = -1e300;
    for (double g : {-1.0, -0.5, 0.0, 0.5}) {
        const double v = mu0(3, 0.1, 5.0, g);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Dispersion, CrossingsAndOrder) {
    for (auto [nu, target] : {std::pair{0.25, 1.5}, std::pair{0.0, 2.0}}) {
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(target - 0.2 + 0.01 * i);
        const auto pts = dispersion_sweep(nu, 0.0, {1}, grid, 1);
        ASSERT_EQ(pts.size(), grid.size());
        double crossing = NAN;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            EXPECT_LT(pts[i - 1].spec.b, pts[i].spec.b);
            const double d0 = pts[i - 1].mu - pts[i - 1].spec.b, d1 = pts[i].mu - pts[i].spec.b;
            if ((d0 < 0) != (d1 < 0)) crossing = pts[i - 1].spec.b - d0 * 0.01 / (d1 - d0);
        }
        EXPECT_NEAR(crossing, target, 1e-3) << nu;
    }
}

TEST(Dispersion, RadialCurveBelowLine) {
    std::vector<double> grid;
    for (int i = 1; i <= 24; ++i) grid.push_back(0.02 * i);
    for (const auto& p : dispersion_sweep(-0.25, 0.0, {0}, grid, 1)) EXPECT_LT(p.mu, p.spec.b) << p.spec.b;
}

TEST(Dispersion, OrderingAndInBandFailures) {
    const auto pts = dispersion_sweep(0.25, 0.0, {0, 2}, {0.5, 1.0}, 2);
    ASSERT_EQ(pts.size(), 8u);
    EXPECT_EQ(pts[0].spec.m, 0);
    EXPECT_EQ(pts[2].spec.b, 1.0);
    EXPECT_EQ(pts[4].spec.m, 2);
    EXPECT_LT(pts[0].mu, pts[1].mu);
    const auto bad = dispersion_sweep(NAN, 0.0, {1}, {0.5}, 1);
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_FALSE(bad[0].ok);
    EXPECT_FALSE(bad[0].message.empty());
    EXPECT_THROW(dispersion_sweep(0.25, 0.0, {1}, {1.0, 0.5}, 1), DomainError);
}

TEST(ImplicitU, AgreesWithFiniteDifferences) {
    for (auto [m, nu, b] : {std::tuple{1, 0.25, 0.05}, std::tuple{0, -0.25, 0.01}, std::tuple{2, 0.25, 0.3}}) {
        const auto r = implicit_eig_U(m, nu, b);
        EXPECT_NEAR(r.lambda, mu0(m, nu, b), 1e-6 * b) << m;
        EXPECT_NEAR(r.lambda + r.gap, b, 1e-15);
    }
    EXPECT_THROW(implicit_eig_U(1, 0.25, 1.6), NoRootInBracket);
}

TEST(ImplicitU, WeakFieldSplittingExponents) {
    std::vector<double> bs, gaps;
    for (double lb = -3.0; lb <= -2.0 + 1e-12; lb += 0.25) {
        bs.push_back(std::pow(10.0, lb));
        gaps.push_back(implicit_eig_U(1, 0.25, bs.back()).gap);
    }
    const auto [p, C] = num::fit_power_law(bs, gaps);
    EXPECT_NEAR(p / 1.75, 1.0, 0.02);
    EXPECT_NEAR(C / (std::pow(2.0, 0.25) / specfun::gamma_fn(0.75)), 1.0, 0.05);

    // the radial branch approaches its power law only as b^{1/4} -> 0
    bs.clear();
    gaps.clear();
    for (double lb = -9.0; lb <= -7.0 + 1e-12; lb += 0.5) {
        bs.push_back(std::pow(10.0, lb));
        gaps.push_back(implicit_eig_U(0, -0.25, bs.back()).gap);
    }
    const auto [q, D] = num::fit_power_law(bs, gaps);
    EXPECT_NEAR(q / 1.25, 1.0, 0.02);
    EXPECT_NEAR(D / (std::pow(2.0, 0.75) / specfun::gamma_fn(0.25)), 1.0, 0.05);
}

TEST(Temple, SandwichesFiniteDifferences) {
    for (auto [m, nu, b] : {std::tuple{1, 0.25, 0.01}, std::tuple{1, 0.25, 1e-3}, std::tuple{0, -0.25, 0.01},
                            std::tuple{2, -0.25, 0.05}}) {
        const auto t = temple_bounds(m, nu, b);
        const double fd = mu0(m, nu, b);
        EXPECT_LE(t.lower, fd) << m << " " << b;
        EXPECT_GE(t.upper, fd) << m << " " << b;
        EXPECT_LT(t.eta, 0.0);
    }
}

TEST(Temple, QuasiModeNorm) {
    const double b = 0.01;
    const auto t = temple_bounds(1, 0.25, b);
    const double ref = std::pow(2.0, 0.75) * specfun::gamma_fn(1.75) / std::pow(b, 1.75);
    EXPECT_NEAR(t.norm_sq / ref, 1.0, 0.05);
}

TEST(Temple, RadialRayleighQuotientAsymptote) {
    // eta ~ 2 nu b^{1-nu} / (2^{-nu} Gamma(1-nu)); the relative error shrinks like b^{|nu|}
    const double nu = -0.25;
    double prev = 1.0;
    for (double b : {1e-2, 1e-4, 1e-6}) {
        const double pred = 2 * nu * std::pow(b, 1 - nu) / (std::pow(2.0, -nu) * specfun::gamma_fn(1 - nu));
        const double dev = std::abs(temple_bounds(0, nu, b).eta / pred - 1.0);
        EXPECT_LT(dev, prev) << b;
        prev = dev;
    }
    EXPECT_LT(prev, 0.1);
}

TEST(Temple, Preconditions) {
    EXPECT_THROW(temple_bounds(0, 0.25, 0.01), DomainError);
    EXPECT_THROW(temple_bounds(0, -0.25, 0.3), DomainError);
}

TEST(EffectiveOperator, ClosedFormSpectrum) {
    // E = 2(2n + |k| + 1) - 2k with k = m - nu
    auto exact = [](int m, double nu, int n) {
        const double k = m - nu;
        return 2 * (2 * n + std::abs(k) + 1) - 2 * k;
    };
    for (auto [m, nu] : {std::pair{0, 0.25}, std::pair{0, -0.25}, std::pair{2, 0.25}, std::pair{1, -0.4}}) {
        const auto e = effective_op_eigs(m, nu, 3);
        for (int n = 0; n < 3; ++n) EXPECT_NEAR(e[static_cast<std::size_t>(n)], exact(m, nu, n), 1e-6) << m << nu;
    }
    const auto e = effective_op_eigs(0, 0.25, 1);
    EXPECT_NEAR(e[0], 4 * 0.25 + 2, 1e-4);
    const auto f = effective_op_eigs(2, 0.25, 2);
    EXPECT_NEAR(f[0], 2.0, 1e-4);
    EXPECT_NEAR(f[1], 6.0, 1e-4);
    EXPECT_THROW(effective_op_eigs(0, 0.0, 1), DomainError);
}

TEST(ExteriorSpectrum, WeakFieldMinimizers) {
    EXPECT_EQ(exterior_spectrum(0.05, 0.25, 0.0, 0).entries[0].m, 1);
    EXPECT_EQ(exterior_spectrum(0.05, -0.25, 0.0, 0).entries[0].m, 0);
    EXPECT_EQ(exterior_spectrum(0.05, 0.0, 0.0, 0).entries[0].m, 1);
}

TEST(ExteriorSpectrum, FluxPeriodicity) {
    for (double b : {0.05, 3.0, 40.0}) {
        const auto a = exterior_spectrum(b, 0.25, 0.0, 2);
        const auto c = exterior_spectrum(b, -0.75, 0.0, 2);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_NEAR(a.entries[i].mu, c.entries[i].mu, 1e-9 * std::max(1.0, b));
            EXPECT_EQ(a.entries[i].m, c.entries[i].m + 1);
        }
    }
}

TEST(ExteriorSpectrum, SortedAndComplete) {
    const auto s = exterior_spectrum(120.0, 0.1, 0.0, 4);
    ASSERT_EQ(s.entries.size(), 5u);
    for (std::size_t i = 1; i < 5; ++i) EXPECT_LE(s.entries[i - 1].mu, s.entries[i].mu);
    EXPECT_FALSE(s.truncation_warning);
    for (const auto& f : s.fiber_minima) EXPECT_GE(f.mu, s.entries[0].mu);
    // strong field: close to Theta0 b
    EXPECT_NEAR(s.entries[0].mu / (degennes::theta(0.0).first * 120.0), 1.0, 0.05);
}

TEST(Profile, BoundaryLayerExponent) {
    const double target = (1 - degennes::theta(0.0).first) / 2;
    for (double nu : {0.0, 0.25}) {
        const auto p = profile_exponent_fit(400.0, nu);
        EXPECT_NEAR(p.delta, target, 0.1) << nu;
        const auto q = profile_exponent_fit(400.0, nu, 1.0);
        EXPECT_NEAR(q.constant / p.constant, 1.0, 0.2) << nu;
    }
    EXPECT_THROW(profile_exponent_fit(50.0, 0.0), DomainError);
}
