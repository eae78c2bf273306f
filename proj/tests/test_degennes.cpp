#include <gtest/gtest.h>

#include <cmath>

#include "magspec/degennes.hpp"
#include "magspec/specfun.hpp"

using namespace magspec;
using namespace magspec::degennes;

TEST(DeGennes, ExactGaussianGroundStates) {
    for (double xi : {0.0, 0.3, 0.7, 1.2}) EXPECT_NEAR(mu0_value(xi, xi), 1.0, 1e-8) << xi;
    EXPECT_NEAR(mu0_value(0.0, 0.0), 1.0, 1e-8);
}

TEST(DeGennes, ThetaAtNeumann) {
    const auto [th, xi] = theta(0.0);
    EXPECT_NEAR(th, xi * xi, 1e-8);
    EXPECT_NEAR(mu0_value(xi, 0.0), th, 1e-10);
    // classical value of the Neumann de Gennes constant
    EXPECT_NEAR(th, 0.590106125, 1e-8);
    // xi is a minimum of mu0(., 0)
    EXPECT_GT(mu0_value(xi - 0.05, 0.0), th);
    EXPECT_GT(mu0_value(xi + 0.05, 0.0), th);
}

TEST(DeGennes, ThetaIncreasingAndIdentity) {
    double prev = -1e300;
    for (double g = -1.5; g <= 1.5 + 1e-12; g += 0.5) {
        const auto [th, xi] = theta(g);
        EXPECT_GT(th, prev);
        EXPECT_NEAR(xi * xi, th + g * g, 1e-7);
        prev = th;
    }
    EXPECT_LT(theta(-0.6).first, 0.0);
}

TEST(DeGennes, HatAlpha) {
    const double a = hat_alpha();
    EXPECT_NEAR(a, 0.5409019, 1e-6);
    EXPECT_NEAR(a, specfun::neg_zero_D_half() / std::sqrt(2.0), 1e-6);
    const auto [th, xi] = theta(-a);
    EXPECT_NEAR(th, 0.0, 1e-7);
    EXPECT_NEAR(xi, a, 1e-6);
}

TEST(DeGennes, MomentIdentities) {
    for (double g : {-0.25, 0.0, 0.5, 1.0}) {
        const auto& K = constants(g);
        EXPECT_NEAR(K.moment1, 0.0, 1e-8) << g;
        EXPECT_NEAR(K.moment2, K.theta / 2 - g / 4 * K.phi0_sq, 1e-7) << g;
        EXPECT_NEAR(K.moment3, (1 + 2 * g * K.xi) * K.phi0_sq / 6, 1e-7) << g;
    }
}

TEST(DeGennes, ThetaPrimeIsBoundaryValue) {
    for (double g : {0.0, -hat_alpha()}) EXPECT_NEAR(theta_prime_fd(g), constants(g).phi0_sq, 1e-5) << g;
    for (double g : {-1.0, 0.0, 1.0}) EXPECT_GT(theta_prime_fd(g), 0.0);
}

TEST(DeGennes, ResolventSignAndK2) {
    for (double g : {-hat_alpha(), 0.0, 0.5}) {
        const auto& K = constants(g);
        // the integral comes out as +1/4 - (xi/4) phi(0)^2
        EXPECT_NEAR(K.resolvent_integral, 0.25 - K.xi * K.phi0_sq / 4, 1e-6) << g;
        EXPECT_NEAR((1 - 4 * K.resolvent_integral) / (K.xi * K.phi0_sq), 1.0, 1e-5) << g;
        EXPECT_NEAR(K.k2 / (K.xi * K.phi0_sq), 1.0, 1e-5) << g;
    }
}

TEST(DeGennes, SteklovPointIdentities) {
    const double a = hat_alpha();
    const auto& K = constants(-a);
    EXPECT_NEAR(K.c_upper, (1 + a * a) / 3 * K.theta_prime, 1e-6);
    EXPECT_NEAR(K.mu1, K.c_upper, 1e-6);
    const double d = 1e-3;
    const double dxi = (theta(-a + d).second - theta(-a - d).second) / (2 * d);
    EXPECT_NEAR(dxi, (K.theta_prime - 2 * a) / (2 * a), 1e-4);
}

TEST(DeGennes, SpectralGap) {
    for (double g : {-hat_alpha(), 0.0, 1.0}) {
        const auto& K = constants(g);
        EXPECT_GT(K.theta1 - K.theta, 0.5) << g;
    }
}

TEST(DeGennes, SecondOrderConstantsAreCoherent) {
    const auto& K = constants(0.0);
    // c0 is the minimizer and c1 the minimum / k2 of k0 + k1 x + k2 x^2
    const double x = K.c0;
    EXPECT_NEAR(K.k1 + 2 * K.k2 * x, 0.0, 1e-14);
    EXPECT_NEAR(K.c1, (K.k2 * x * x + K.k1 * x + K.k0) / K.k2, 1e-12);
    EXPECT_NE(K.k1, K.k1_as_printed);
}

TEST(DeGennes, MemoizationReturnsSameRecord) {
    EXPECT_EQ(&constants(0.0), &constants(0.0));
    EXPECT_THROW(constants(7.0), DomainError);
}
