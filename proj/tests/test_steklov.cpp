#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "magspec/asym.hpp"
#include "magspec/degennes.hpp"
#include "magspec/fiber.hpp"
#include "magspec/specfun.hpp"
#include "magspec/steklov.hpp"

using namespace magspec;
using namespace magspec::steklov;

namespace {

// -u'(1)/u(1) for u = r^{|k|} e^{-b r^2/4} U(a, |k| + 1, b r^2/2), the decaying
// zero-energy solution, a = (1 + |k| - k)/2.
double kummer_lambda(int m, double nu, double b) {
    const double k = m - nu, K = std::abs(k);
    const double a = 0.5 * (1.0 + K - k);
    const double z = 0.5 * b;
    return -K + 0.5 * b + a * b * specfun::hyperU(a + 1.0, K + 2.0, z) / specfun::hyperU(a, K + 1.0, z);
}

double theta_fd(double g) { return degennes::theta(g).first; }

// the same offset as third_term_correction, with a different difference step
double offset_oracle() {
    const double a = degennes::hat_alpha(), d = 1e-2;
    auto C = [](double g) { return (1.0 - g * degennes::theta(g).second) * degennes::theta_prime_fd(g) / 3.0; };
    const double t1 = (theta_fd(-a + d) - theta_fd(-a - d)) / (2 * d);
    const double t2 = (theta_fd(-a + d) - 2 * theta_fd(-a) + theta_fd(-a - d)) / (d * d);
    const double c1 = (C(-a + d) - C(-a - d)) / (2 * d);
    const double d0 = -(a * a + 1) / 3;
    return t2 / (2 * t1) * d0 * d0 + c1 / t1 * d0;
}

std::vector<int> n_grid() { return {16, 40, 80, 140, 220, 320, 450}; }

} // namespace

TEST(Steklov, ZeroEnergyMatchesKummerU) {
    struct Case {
        int m;
        double nu, b;
    };
    for (const auto& c : {Case{0, 0.25, 0.01}, Case{0, -0.25, 0.01}, Case{1, 0.25, 1.0}, Case{0, 0.0, 0.1},
                          Case{2, 0.5, 3.0}, Case{-1, 0.25, 0.5}})
        EXPECT_NEAR(fiber_steklov(c.m, c.nu, c.b).lambda, kummer_lambda(c.m, c.nu, c.b), 1e-9) << c.m << " " << c.b;
}

TEST(Steklov, BrentMatchesZeroEnergy) {
    struct Case {
        double b, nu;
    };
    for (const auto& c : {Case{0.1, 0.25}, Case{1.0, -0.25}, Case{25.0, 0.0}}) {
        const auto r = steklov_lambda(c.b, c.nu);
        EXPECT_NEAR(r.lambda_val, steklov_lambda_zero_energy(c.b, c.nu).lambda, 1e-9) << c.b;
        EXPECT_LE(r.robin_residual, 1e-9 * std::max(1.0, c.b));
        EXPECT_LE(r.bracket.first, -r.lambda_val);
        EXPECT_GE(r.bracket.second, -r.lambda_val);
    }
}

TEST(Steklov, StrongFieldTwoTerm) {
    const auto r = steklov_lambda(100.0, 0.0);
    EXPECT_NEAR(r.lambda_val, asym::steklov_two_term(100.0, degennes::hat_alpha()), 0.2);
}

TEST(Steklov, WeakFieldLimit) {
    double prev = 1.0;
    for (double b : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double dev = steklov_lambda_zero_energy(b, 0.25).lambda - 0.25;
        EXPECT_GT(dev, 0.0);
        EXPECT_LT(dev, prev);
        prev = dev;
    }
    EXPECT_LT(prev, 0.005);
}

TEST(Steklov, WeakExpansionApproached) {
    for (double nu : {0.25, -0.25}) {
        double prev = 1.0;
        for (double b : {1e-4, 1e-6, 1e-8}) {
            const double ratio = (steklov_lambda_zero_energy(b, nu).lambda - 0.25) /
                                 (asym::weak_steklov_lambda_expansion(nu, b) - 0.25);
            EXPECT_LT(std::abs(ratio - 1), prev) << nu << " " << b;
            prev = std::abs(ratio - 1);
        }
        EXPECT_LT(prev, 0.01);
    }
}

TEST(Steklov, MonotoneInField) {
    for (double b : {1.0, 4.0, 16.0})
        EXPECT_GT(steklov_lambda_zero_energy(2 * b, 0.25).lambda, steklov_lambda_zero_energy(b, 0.25).lambda) << b;
}

TEST(Steklov, RobinEnergyIncreasing) {
    double prev = -1e300;
    for (double beta = -1.0; beta <= 0.5; beta += 0.25) {
        const double g = ground_energy(0.5, 0.25, beta, {});
        EXPECT_GT(g, prev);
        prev = g;
    }
}

TEST(Steklov, WeakFieldMinimizerUnique) {
    const auto r = steklov_lambda(0.05, 0.25);
    const auto ex = fiber::exterior_spectrum_beta(0.05, 0.25, -r.lambda_val, 0);
    double second = 1e300;
    for (const auto& f : ex.fiber_minima)
        if (f.m != r.m) second = std::min(second, f.mu);
    EXPECT_GE(second - ex.entries[0].mu, 1e-8);
    EXPECT_EQ(r.m, 0);
}

TEST(Steklov, Preconditions) {
    EXPECT_THROW(steklov_lambda(0.0, 0.25), DomainError);
    EXPECT_THROW(verify_weak_steklov(0.0, {1e-6, 1e-7}), DomainError);
    EXPECT_THROW(verify_weak_steklov(0.25, {0.2, 1e-7}), DomainError);
    EXPECT_THROW(verify_steklov_thirdterm(0.0, 0.25, {5, 40}), DomainError);
}

TEST(Steklov, CorrectionOffset) { EXPECT_NEAR(third_term_correction(), offset_oracle(), 1e-4); }

TEST(SteklovThirdTerm, ShiftedSequenceWithOffsetIsSecondOrder) {
    const double G = offset_oracle();
    for (double e0 : {0.0, 0.45}) {
        const auto rep = verify_steklov_thirdterm(e0, 0.25, n_grid(), asym::EtaVariant::Shifted, Solver::ZeroEnergy);
        for (const auto& r : rep.rows) {
            EXPECT_LT(std::abs(r.b * (r.residual3term - G / std::sqrt(r.b))), 0.1) << e0 << " " << r.b;
            EXPECT_NEAR(r.residual_corrected, r.residual3term - third_term_correction() / std::sqrt(r.b), 1e-15);
        }
        EXPECT_NEAR(rep.two_term_slope, -0.5, 0.15) << e0;
    }
}

TEST(SteklovThirdTerm, StatedThirdTermLeavesOffset) {
    // the residual of the three-term formula still scales like b^{-1/2}
    const double G = offset_oracle();
    const auto rep = verify_steklov_thirdterm(0.0, 0.25, n_grid(), asym::EtaVariant::Shifted, Solver::ZeroEnergy);
    const auto& last = rep.rows.back();
    EXPECT_NEAR(last.residual3term * std::sqrt(last.b), G, 0.005);
    EXPECT_GT(last.scaled_residual, 3 * rep.rows.front().scaled_residual);
}

TEST(SteklovThirdTerm, EtaVariantDiscrimination) {
    const double a = degennes::hat_alpha();
    const double expected = 0.45 * 0.45 * a;
    auto diff = [&](asym::EtaVariant v) {
        const auto z = verify_steklov_thirdterm(0.0, 0.25, n_grid(), v, Solver::ZeroEnergy);
        const auto h = verify_steklov_thirdterm(0.45, 0.25, n_grid(), v, Solver::ZeroEnergy);
        return h.third_coefficient - z.third_coefficient;
    };
    EXPECT_NEAR(diff(asym::EtaVariant::Shifted), expected, 0.2 * expected);
    EXPECT_GT(std::abs(diff(asym::EtaVariant::Printed) - expected), 0.2 * expected);
}

TEST(SteklovThirdTerm, BrentSolverAgreesOnSequence) {
    const auto z = verify_steklov_thirdterm(0.45, 0.25, {16, 60}, asym::EtaVariant::Shifted, Solver::ZeroEnergy);
    const auto e = verify_steklov_thirdterm(0.45, 0.25, {16, 60}, asym::EtaVariant::Shifted, Solver::ExteriorBrent);
    for (std::size_t i = 0; i < z.rows.size(); ++i) EXPECT_NEAR(z.rows[i].lambda, e.rows[i].lambda, 1e-9);
}

TEST(SteklovWeak, ExponentAndExpansionCoefficient) {
    const std::vector<double> grid{1e-8, 3e-8, 1e-7, 3e-7, 1e-6};
    for (double nu : {0.25, -0.25}) {
        const auto rep = verify_weak_steklov(nu, grid);
        EXPECT_NEAR(rep.exponent, 0.25, 0.05 * 0.25) << nu;
        EXPECT_NEAR(rep.coefficient_fixed / rep.expansion_coefficient, 1.0, 0.05) << nu;
        EXPECT_NEAR(rep.stated_coefficient, asym::weak_steklov_coefficient(0.25), 1e-15);
    }
    const auto rep = verify_weak_steklov(0.4, grid);
    EXPECT_NEAR(rep.exponent, 0.4, 0.05 * 0.4);
    EXPECT_NEAR(rep.coefficient_fixed / rep.expansion_coefficient, 1.0, 0.1);
}
