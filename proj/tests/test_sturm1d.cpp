#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "magspec/sturm1d.hpp"

using namespace magspec;
using namespace magspec::sturm1d;

namespace {

RadialEigenProblem oscillator(std::size_t n, EndpointCondition left, double shift = 0.0) {
    return {{0.0, 20.0, n}, [shift](double t) { return (t - shift) * (t - shift); }, left,
            EndpointCondition::dirichlet()};
}

double grid_norm(const EigenSolution& s, std::size_t j) {
    const double h = s.nodes[1] - s.nodes[0];
    return std::sqrt(trapezoid_dot(h, s.eigenfunctions[j], s.eigenfunctions[j]));
}

} // namespace

TEST(Sturm1d, NeumannOscillatorGroundState) {
    const auto s = solve(oscillator(4000, EndpointCondition::robin(0.0)), 1);
    EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-8);
    EXPECT_NEAR(grid_norm(s, 0), 1.0, 1e-12);
    EXPECT_FALSE(s.truncation_warning);
}

TEST(Sturm1d, ShiftedGaussianRobin) {
    const double xi = 0.7;
    const auto s = solve(oscillator(4000, EndpointCondition::robin(xi), xi), 1);
    EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-8);
    // eigenfunction is the normalized Gaussian restricted to the half-line
    const double norm2 = std::sqrt(M_PI) / 2.0 * (1.0 + std::erf(xi));
    for (std::size_t i = 0; i < s.nodes.size(); i += 200) {
        const double ref = std::exp(-0.5 * (s.nodes[i] - xi) * (s.nodes[i] - xi)) / std::sqrt(norm2);
        EXPECT_NEAR(s.eigenfunctions[0][i], ref, 1e-4);
    }
}

TEST(Sturm1d, DirichletOscillatorOddLevels) {
    const auto s = solve(oscillator(4000, EndpointCondition::dirichlet()), 2);
    EXPECT_NEAR(s.eigenvalues[0], 3.0, 1e-7);
    EXPECT_NEAR(s.eigenvalues[1], 7.0, 1e-7);
    EXPECT_NEAR(s.eigenfunctions[0].front(), 0.0, 0.0);
    EXPECT_NEAR(s.eigenfunctions[0].back(), 0.0, 0.0);
}

TEST(Sturm1d, SecondOrderConvergence) {
    struct Case {
        EndpointCondition left;
        double shift;
        double exact;
        int index;
    };
    const Case cases[] = {{EndpointCondition::robin(0.0), 0.0, 1.0, 0},
                          {EndpointCondition::robin(0.7), 0.7, 1.0, 0},
                          {EndpointCondition::dirichlet(), 0.0, 3.0, 0},
                          {EndpointCondition::dirichlet(), 0.0, 7.0, 1}};
    for (const auto& c : cases) {
        SolveOptions opt;
        opt.richardson = false;
        opt.eigenfunctions = false;
        const auto p = oscillator(999, c.left, c.shift);
        const double e1 = solve(p, 2, opt).eigenvalues[static_cast<std::size_t>(c.index)] - c.exact;
        const double e2 = solve(p.refined(), 2, opt).eigenvalues[static_cast<std::size_t>(c.index)] - c.exact;
        const double ratio = e1 / e2;
        EXPECT_GE(ratio, 3.6);
        EXPECT_LE(ratio, 4.4);
    }
}

TEST(Sturm1d, RobinMonotonicity) {
    const double kappas[] = {-0.5, 0.0, 0.5, 1.0, 2.0};
    std::vector<double> prev;
    for (double k : kappas) {
        const auto s = solve(oscillator(2000, EndpointCondition::robin(k), 0.6), 3);
        if (!prev.empty()) {
            for (std::size_t j = 0; j < 3; ++j) EXPECT_GT(s.eigenvalues[j], prev[j]);
        }
        prev = s.eigenvalues;
    }
}

TEST(Sturm1d, DirichletDominatesNeumann) {
    const auto d = solve(oscillator(2000, EndpointCondition::dirichlet(), 0.3), 4);
    const auto r = solve(oscillator(2000, EndpointCondition::robin(0.0), 0.3), 4);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_GT(d.eigenvalues[j], r.eigenvalues[j]);
}

TEST(Sturm1d, ExtrapolationWithinErrorEstimate) {
    const auto p = oscillator(1000, EndpointCondition::robin(0.3), 0.5);
    const auto s = solve(p, 3);
    SolveOptions opt;
    opt.richardson = false;
    opt.eigenfunctions = false;
    const auto fine = solve(p.refined(), 3, opt);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_LE(std::abs(s.eigenvalues[j] - fine.eigenvalues[j]), s.richardson_error[j] + 1e-14 * s.eigenvalues[j]);
        EXPECT_NEAR(grid_norm(s, j), 1.0, 1e-12);
        EXPECT_LE(s.residual_norms[j], 1e-10 * (1 + s.eigenvalues[j]) + 1e-6);
    }
}

TEST(Sturm1d, EigenfunctionsAreOrthonormal) {
    const auto s = solve(oscillator(1500, EndpointCondition::robin(-0.4), 1.0), 4);
    const double h = s.nodes[1] - s.nodes[0];
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_NEAR(trapezoid_dot(h, s.eigenfunctions[i], s.eigenfunctions[j]), i == j ? 1.0 : 0.0, 1e-9);
}

TEST(Sturm1d, RightRobinMatchesReflectedLeftRobin) {
    const double k = 0.8;
    RadialEigenProblem left{{0.0, 12.0, 1200}, [](double t) { return (t - 1) * (t - 1); },
                            EndpointCondition::robin(k), EndpointCondition::dirichlet()};
    RadialEigenProblem right{{-12.0, 0.0, 1200}, [](double t) { return (t + 1) * (t + 1); },
                             EndpointCondition::dirichlet(), EndpointCondition::robin(-k)};
    const auto a = solve(left, 3);
    const auto b = solve(right, 3);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.eigenvalues[j], b.eigenvalues[j], 1e-11);
}

TEST(Sturm1d, TruncationWarningOnShortDomain) {
    RadialEigenProblem p{{0.0, 2.0, 400}, [](double t) { return t * t; }, EndpointCondition::robin(0.0),
                         EndpointCondition::dirichlet()};
    EXPECT_TRUE(solve(p, 1).truncation_warning);
}

TEST(Sturm1d, TinyEigenvalueKeepsRelativeAccuracy) {
    // -f'' + c^2 f on (0, L) Dirichlet: lambda = c^2 + (pi/L)^2 with a tiny c
    const double L = 1.0, c2 = 1e-9;
    RadialEigenProblem p{{0.0, L, 20000}, [c2](double) { return c2; }, EndpointCondition::dirichlet(),
                         EndpointCondition::dirichlet()};
    RadialEigenProblem q = p;
    q.potential = [](double) { return 0.0; };
    SolveOptions opt;
    opt.eigenfunctions = false;
    const double diff = solve(p, 1, opt).eigenvalues[0] - solve(q, 1, opt).eigenvalues[0];
    EXPECT_NEAR(diff, c2, 1e-14);
}

TEST(Sturm1d, RejectsBadInput) {
    EXPECT_THROW(solve(oscillator(40, EndpointCondition::robin(0.0)), 11), DomainError);
    RadialEigenProblem p{{0.0, 1.0, 8}, [](double) { return 0.0; }, {}, {}};
    EXPECT_THROW(solve(p, 1), DomainError);
    RadialEigenProblem q{{0.0, 1.0, 100}, [](double t) { return 1.0 / t; }, EndpointCondition::robin(0.0), {}};
    EXPECT_THROW(solve(q, 1), DomainError);
}

TEST(Sturm1dConstrained, KernelIsAnnihilated) {
    const auto p = oscillator(3000, EndpointCondition::robin(0.0));
    Discretization d(p);
    const double lam = d.eigenvalues(1)[0];
    const auto kernel = d.expand(d.eigenvector(lam).first);
    const auto f = solve_with_orthogonality_constraint(p, lam, kernel, kernel);
    for (double v : f) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Sturm1dConstrained, DefiningProperty) {
    const auto p = oscillator(3000, EndpointCondition::robin(0.4), 0.9);
    Discretization d(p);
    const double lam = d.eigenvalues(1)[0];
    const auto k = d.eigenvector(lam).first;
    std::vector<double> rhs(d.size());
    const auto x = d.unknown_nodes();
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = (x[i] - 0.9) * k[i];
    const double c = d.dot(rhs, k);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= c * k[i];
    const auto f = d.solve_bordered(lam, rhs, k);
    EXPECT_NEAR(d.dot(f, k), 0.0, 1e-12);
    auto r = d.apply(f, lam);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= rhs[i];
    EXPECT_LE(d.norm(r), 1e-10);
}
