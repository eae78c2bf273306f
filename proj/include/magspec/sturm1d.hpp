#pragma once

// Self-adjoint 1D Schroedinger eigensolver  -f'' + W(x) f = lambda f  on [lo, hi]
// with Dirichlet or Robin endpoints, second-order central differences and
// Richardson extrapolation over the grid pair (n, 2n+1).
//
// Robin endpoints are kept as unknowns and the ghost node is eliminated,
// f'(x) = kappa f(x) with the derivative taken along increasing x. The
// resulting matrix is symmetric with respect to trapezoid weights
// (h/2 at a Robin node, h elsewhere), so every inner product here uses them.
//
// Sturm counts are evaluated through the ratio z_i = h^2 q_i - 1 of the
// LDL^T pivots q_i. The recurrence
//     z_i = h^2 (W_i - s) + z_{i-1} / (1 + z_{i-1})
// never forms 2/h^2 + W_i, so eigenvalues that are small compared with
// 1/h^2 keep their relative accuracy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "magspec/errors.hpp"

namespace magspec::sturm1d {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 16; // interior nodes

    [[nodiscard]] double h() const { return (hi - lo) / static_cast<double>(n + 1); }
    [[nodiscard]] double node(std::size_t i) const { return lo + static_cast<double>(i) * h(); }
    [[nodiscard]] Interval refined() const { return {lo, hi, 2 * n + 1}; }

    void validate() const {
        if (!(lo < hi)) throw DomainError("Interval: lo must be < hi");
        if (n < 16) throw DomainError("Interval: need at least 16 interior nodes");
    }
};

enum class BoundaryKind { Dirichlet, Robin };

struct EndpointCondition {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    double coefficient = 0.0; // Robin: f' = coefficient * f

    static EndpointCondition dirichlet() { return {BoundaryKind::Dirichlet, 0.0}; }
    static EndpointCondition robin(double kappa) { return {BoundaryKind::Robin, kappa}; }
    [[nodiscard]] bool is_robin() const { return kind == BoundaryKind::Robin; }
};

struct RadialEigenProblem {
    Interval interval;
    std::function<double(double)> potential;
    EndpointCondition left = EndpointCondition::dirichlet();
    EndpointCondition right = EndpointCondition::dirichlet();

    [[nodiscard]] RadialEigenProblem refined() const {
        return {interval.refined(), potential, left, right};
    }
};

struct EigenSolution {
    std::vector<double> eigenvalues;          // Richardson-extrapolated
    std::vector<double> coarse_eigenvalues;   // on the problem grid
    std::vector<std::vector<double>> eigenfunctions; // problem grid, all n+2 nodes
    std::vector<double> residual_norms;
    std::vector<double> richardson_error;
    std::vector<double> nodes;
    double tail_mass = 0.0;
    bool truncation_warning = false;
};

struct SolveOptions {
    bool richardson = true;
    bool eigenfunctions = true;
    // 0 bisects to full double precision
    double eigenvalue_tol = 0.0;
    int max_inverse_iterations = 6;
    double residual_tol = 1e-10;
    double tail_threshold = 1e-8;
};

/// Discretized operator on one grid. Unknowns are the interior nodes plus
/// any Robin endpoint; Dirichlet endpoint values are fixed at zero.
class Discretization {
public:
    explicit Discretization(const RadialEigenProblem& p) : problem_(p) {
        const auto& iv = p.interval;
        iv.validate();
        if (!p.potential) throw DomainError("RadialEigenProblem: potential not set");
        h_ = iv.h();
        first_ = p.left.is_robin() ? 0 : 1;
        const std::size_t last = p.right.is_robin() ? iv.n + 1 : iv.n;
        size_ = last - first_ + 1;
        w_.resize(size_);
        x_.resize(size_);
        for (std::size_t i = 0; i < size_; ++i) {
            x_[i] = iv.node(first_ + i);
            w_[i] = p.potential(x_[i]);
            if (!std::isfinite(w_[i])) throw DomainError("potential is not finite at a grid node");
        }
        kl_ = p.left.is_robin() ? p.left.coefficient : 0.0;
        kr_ = p.right.is_robin() ? p.right.coefficient : 0.0;
        if (!std::isfinite(kl_) || !std::isfinite(kr_)) throw DomainError("Robin coefficient not finite");
    }

    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] double h() const { return h_; }
    [[nodiscard]] std::span<const double> unknown_nodes() const { return x_; }
    [[nodiscard]] const RadialEigenProblem& problem() const { return problem_; }

    /// Trapezoid weight of unknown i.
    [[nodiscard]] double weight(std::size_t i) const {
        if (i == 0 && problem_.left.is_robin()) return 0.5 * h_;
        if (i + 1 == size_ && problem_.right.is_robin()) return 0.5 * h_;
        return h_;
    }

    /// Number of discrete eigenvalues strictly below s.
    [[nodiscard]] int count_below(double s) const {
        const double h2 = h_ * h_;
        int neg = 0;
        double z = start_z(s);
        if (1.0 + z < 0.0) ++neg;
        const std::size_t n = size_;
        const bool rr = problem_.right.is_robin();
        for (std::size_t i = 1; i < n; ++i) {
            const double eps = h2 * (w_[i] - s);
            const double ratio = z / guard(1.0 + z);
            if (rr && i + 1 == n) {
                if (-h_ * kr_ + 0.5 * eps + ratio < 0.0) ++neg;
            } else {
                z = eps + ratio;
                if (1.0 + z < 0.0) ++neg;
            }
        }
        return neg;
    }

    /// Lowest `count` discrete eigenvalues by Sturm bisection. `hint`, when
    /// given, is an approximation of each eigenvalue used to seed brackets.
    [[nodiscard]] std::vector<double> eigenvalues(int count, double tol = 0.0,
                                                  std::span<const double> hint = {}) const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(count));
        double floor_lo = lower_bound();
        for (int j = 0; j < count; ++j) {
            double lo, hi;
            if (static_cast<std::size_t>(j) < hint.size()) {
                std::tie(lo, hi) = bracket_near(j, hint[static_cast<std::size_t>(j)], floor_lo);
            } else {
                lo = floor_lo;
                double step = std::max(1.0, std::abs(lo));
                hi = lo + step;
                while (count_below(hi) <= j) {
                    lo = hi;
                    step *= 2.0;
                    hi += step;
                    if (!std::isfinite(hi)) throw NonConvergence("eigenvalue bracketing overflow");
                }
            }
            out.push_back(bisect(j, lo, hi, tol));
            floor_lo = out.back();
        }
        for (std::size_t j = 1; j < out.size(); ++j) {
            const double gap = out[j] - out[j - 1];
            if (!(gap > 1e-11 * std::max(1.0, std::abs(out[j]))))
                throw SingularSystem("numerically multiple eigenvalue detected");
        }
        return out;
    }

    /// y = A x for the (non-symmetric row form) discrete operator.
    [[nodiscard]] std::vector<double> apply(std::span<const double> v, double shift = 0.0) const {
        const double ih2 = 1.0 / (h_ * h_);
        const std::size_t n = size_;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double lap;
            if (i == 0 && problem_.left.is_robin()) {
                lap = 2.0 * (1.0 + h_ * kl_) * v[0] - 2.0 * v[1];
            } else if (i + 1 == n && problem_.right.is_robin()) {
                lap = 2.0 * (1.0 - h_ * kr_) * v[i] - 2.0 * v[i - 1];
            } else {
                const double left = i > 0 ? v[i - 1] : 0.0;
                const double right = i + 1 < n ? v[i + 1] : 0.0;
                lap = 2.0 * v[i] - left - right;
            }
            y[i] = lap * ih2 + (w_[i] - shift) * v[i];
        }
        return y;
    }

    [[nodiscard]] double dot(std::span<const double> a, std::span<const double> b) const {
        double s = 0.0;
        for (std::size_t i = 0; i < size_; ++i) s += weight(i) * a[i] * b[i];
        return s;
    }
    [[nodiscard]] double norm(std::span<const double> a) const { return std::sqrt(dot(a, a)); }

    /// Normalized eigenvector (positive at its largest-magnitude entry) for
    /// the discrete eigenvalue `lambda`. Returns the vector and its residual.
    [[nodiscard]] std::pair<std::vector<double>, double> eigenvector(
        double lambda, std::span<const std::vector<double>> lower = {},
        int max_iter = 6, double residual_tol = 1e-10) const {
        auto v = twisted_vector(lambda);
        normalize(v);
        double res = residual(v, lambda);
        const double tol = residual_floor(residual_tol, lambda);
        int it = 0;
        while (res > tol) {
            if (it++ >= max_iter) throw NonConvergence("inverse iteration did not reach the residual target");
            const double delta = 8.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(lambda), 1.0 / (h_ * h_));
            std::vector<double> rhs(v.begin(), v.end());
            v = solve_tridiagonal(lambda + delta, rhs);
            for (const auto& u : lower) {
                const double c = dot(v, u);
                for (std::size_t i = 0; i < size_; ++i) v[i] -= c * u[i];
            }
            normalize(v);
            res = residual(v, lambda);
        }
        const auto imax = static_cast<std::size_t>(
            std::distance(v.begin(), std::max_element(v.begin(), v.end(), [](double a, double b) {
                              return std::abs(a) < std::abs(b);
                          })));
        if (v[imax] < 0) for (auto& x : v) x = -x;
        return {std::move(v), res};
    }

    [[nodiscard]] double residual(std::span<const double> v, double lambda) const {
        const auto r = apply(v, lambda);
        return norm(r);
    }

    /// Solve (A - shift) f = rhs - <kernel, rhs> kernel subject to <f, kernel> = 0
    /// via the bordered system [[A - shift, kernel], [kernel^T W, 0]].
    [[nodiscard]] std::vector<double> solve_bordered(double shift, std::span<const double> rhs,
                                                     std::span<const double> kernel) const;

    /// Grid function on the unknown set -> all n+2 grid nodes (Dirichlet ends 0).
    [[nodiscard]] std::vector<double> expand(std::span<const double> v) const {
        std::vector<double> full(problem_.interval.n + 2, 0.0);
        for (std::size_t i = 0; i < size_; ++i) full[first_ + i] = v[i];
        return full;
    }
    [[nodiscard]] std::vector<double> restrict_to_unknowns(std::span<const double> full) const {
        return {full.begin() + static_cast<std::ptrdiff_t>(first_),
                full.begin() + static_cast<std::ptrdiff_t>(first_ + size_)};
    }

private:
    static double guard(double d) {
        return d != 0.0 ? d : std::numeric_limits<double>::min();
    }

    [[nodiscard]] double start_z(double s) const {
        const double eps = h_ * h_ * (w_[0] - s);
        return problem_.left.is_robin() ? h_ * kl_ + 0.5 * eps : 1.0 + eps;
    }

    [[nodiscard]] double residual_floor(double tol, double lambda) const {
        const double norm_a = 4.0 / (h_ * h_) + std::abs(lambda);
        return std::max(tol, 256.0 * std::numeric_limits<double>::epsilon() * norm_a);
    }

    [[nodiscard]] double lower_bound() const {
        double lo = *std::min_element(w_.begin(), w_.end());
        if (kl_ < 0) lo -= 2.0 * kl_ * kl_ + 1.0;
        if (kr_ > 0) lo -= 2.0 * kr_ * kr_ + 1.0;
        lo -= 1.0;
        double step = std::max(1.0, std::abs(lo));
        while (count_below(lo) > 0) {
            lo -= step;
            step *= 2.0;
            if (!std::isfinite(lo)) throw NonConvergence("no lower spectral bound found");
        }
        return lo;
    }

    [[nodiscard]] std::pair<double, double> bracket_near(int j, double guess, double floor_lo) const {
        double d = std::max(1e-9, 1e-6 * std::abs(guess));
        double lo = std::max(floor_lo, guess - d);
        double hi = guess + d;
        for (int k = 0; k < 200; ++k) {
            const bool lo_ok = count_below(lo) <= j;
            const bool hi_ok = count_below(hi) >= j + 1;
            if (lo_ok && hi_ok) return {lo, hi};
            d *= 8.0;
            if (!lo_ok) lo = std::max(floor_lo, guess - d);
            if (!hi_ok) hi = guess + d;
        }
        throw NonConvergence("could not bracket eigenvalue near hint");
    }

    [[nodiscard]] double bisect(int j, double lo, double hi, double tol) const {
        for (int it = 0; it < 2000; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (hi - lo <= std::max(tol, 2.0 * std::numeric_limits<double>::epsilon() *
                                             std::max(std::abs(lo), std::abs(hi))))
                break;
            if (count_below(mid) <= j) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    void normalize(std::vector<double>& v) const {
        const double nv = norm(v);
        if (!(nv > 0) || !std::isfinite(nv)) throw NonConvergence("degenerate eigenvector");
        for (auto& x : v) x /= nv;
    }

    // One-shot eigenvector from the twisted LDL^T/UDU^T factorization at lambda.
    [[nodiscard]] std::vector<double> twisted_vector(double lambda) const {
        const std::size_t n = size_;
        const double h2 = h_ * h_;
        std::vector<double> zp(n), zm(n);
        zp[0] = start_z(lambda);
        for (std::size_t i = 1; i < n; ++i) zp[i] = h2 * (w_[i] - lambda) + zp[i - 1] / guard(1.0 + zp[i - 1]);
        const double eps_last = h2 * (w_[n - 1] - lambda);
        zm[n - 1] = problem_.right.is_robin() ? -h_ * kr_ + 0.5 * eps_last : 1.0 + eps_last;
        for (std::size_t i = n - 1; i-- > 0;) zm[i] = h2 * (w_[i] - lambda) + zm[i + 1] / guard(1.0 + zm[i + 1]);

        std::size_t twist = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 1; r + 1 < n; ++r) {
            const double g = std::abs(zp[r] + zm[r + 1] / guard(1.0 + zm[r + 1]));
            if (g < best) {
                best = g;
                twist = r;
            }
        }
        std::vector<double> v(n);
        v[twist] = 1.0;
        for (std::size_t i = twist; i-- > 0;) v[i] = v[i + 1] / guard(1.0 + zp[i]);
        for (std::size_t i = twist + 1; i < n; ++i) v[i] = v[i - 1] / guard(1.0 + zm[i]);
        return v;
    }

    // Gaussian elimination with partial pivoting on (A - s) x = rhs.
    [[nodiscard]] std::vector<double> solve_tridiagonal(double s, std::vector<double> rhs) const {
        const std::size_t n = size_;
        const double ih2 = 1.0 / (h_ * h_);
        std::vector<double> a(n, -ih2), b(n), c(n, -ih2);
        for (std::size_t i = 0; i < n; ++i) b[i] = 2.0 * ih2 + w_[i] - s;
        if (problem_.left.is_robin()) {
            b[0] = 2.0 * (1.0 + h_ * kl_) * ih2 + w_[0] - s;
            c[0] = -2.0 * ih2;
        }
        if (problem_.right.is_robin()) {
            b[n - 1] = 2.0 * (1.0 - h_ * kr_) * ih2 + w_[n - 1] - s;
            a[n - 1] = -2.0 * ih2;
        }
        a[0] = 0.0;
        c[n - 1] = 0.0;
        // rows after elimination: u0 x_i + u1 x_{i+1} + u2 x_{i+2}
        std::vector<double> u0(n), u1(n), u2(n, 0.0);
        double p = b[0], q = c[0], y = rhs[0];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double ra = a[i + 1], rb = b[i + 1], rc = c[i + 1], ry = rhs[i + 1];
            double pr0 = p, pr1 = q, pr2 = 0.0, pry = y;
            double or0 = ra, or1 = rb, or2 = rc, ory = ry;
            if (std::abs(ra) > std::abs(p)) {
                std::swap(pr0, or0);
                std::swap(pr1, or1);
                std::swap(pr2, or2);
                std::swap(pry, ory);
            }
            if (pr0 == 0.0) pr0 = std::numeric_limits<double>::min();
            const double m = or0 / pr0;
            u0[i] = pr0;
            u1[i] = pr1;
            u2[i] = pr2;
            rhs[i] = pry;
            p = or1 - m * pr1;
            q = or2 - m * pr2;
            y = ory - m * pry;
        }
        u0[n - 1] = p != 0.0 ? p : std::numeric_limits<double>::min();
        rhs[n - 1] = y;
        std::vector<double> x(n);
        for (std::size_t i = n; i-- > 0;) {
            double acc = rhs[i];
            if (i + 1 < n) acc -= u1[i] * x[i + 1];
            if (i + 2 < n) acc -= u2[i] * x[i + 2];
            x[i] = acc / u0[i];
        }
        return x;
    }

    RadialEigenProblem problem_;
    double h_ = 0.0;
    std::size_t first_ = 0;
    std::size_t size_ = 0;
    std::vector<double> w_;
    std::vector<double> x_;
    double kl_ = 0.0;
    double kr_ = 0.0;
};

inline std::vector<double> Discretization::solve_bordered(double shift, std::span<const double> rhs,
                                                          std::span<const double> kernel) const {
    const std::size_t n = size_;
    const double ih2 = 1.0 / (h_ * h_);
    const double proj = dot(kernel, rhs);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - proj * kernel[i];

    std::vector<double> a(n, -ih2), b(n), c(n, -ih2);
    for (std::size_t i = 0; i < n; ++i) b[i] = 2.0 * ih2 + w_[i] - shift;
    if (problem_.left.is_robin()) {
        b[0] = 2.0 * (1.0 + h_ * kl_) * ih2 + w_[0] - shift;
        c[0] = -2.0 * ih2;
    }
    if (problem_.right.is_robin()) {
        b[n - 1] = 2.0 * (1.0 - h_ * kr_) * ih2 + w_[n - 1] - shift;
        a[n - 1] = -2.0 * ih2;
    }
    a[0] = 0.0;
    c[n - 1] = 0.0;

    // Band rows u0..u2 plus the border column uk; the border row is dense
    // and is eliminated column by column.
    std::vector<double> u0(n), u1(n), u2(n), uk(n), uy(n);
    std::vector<double> border(n);
    for (std::size_t i = 0; i < n; ++i) border[i] = weight(i) * kernel[i];
    double border_k = 0.0, border_y = 0.0;

    double p = b[0], q = c[0], pk = kernel[0], py = r[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double P[4] = {p, q, 0.0, pk};
        double Py = py;
        double O[4] = {a[i + 1], b[i + 1], c[i + 1], kernel[i + 1]};
        double Oy = r[i + 1];
        if (std::abs(O[0]) > std::abs(P[0])) {
            std::swap(P, O);
            std::swap(Py, Oy);
        }
        if (P[0] == 0.0) throw SingularSystem("bordered system: zero pivot");
        const double m = O[0] / P[0];
        u0[i] = P[0];
        u1[i] = P[1];
        u2[i] = P[2];
        uk[i] = P[3];
        uy[i] = Py;
        p = O[1] - m * P[1];
        q = O[2] - m * P[2];
        pk = O[3] - m * P[3];
        py = Oy - m * Py;
        const double mb = border[i] / P[0];
        border[i + 1] -= mb * P[1];
        if (i + 2 < n) border[i + 2] -= mb * P[2];
        border_k -= mb * P[3];
        border_y -= mb * Py;
    }
    // final 2x2 on (x_{n-1}, c)
    const double m11 = p, m12 = pk, m21 = border[n - 1], m22 = border_k;
    const double det = m11 * m22 - m12 * m21;
    const double scale = (std::abs(m11) + std::abs(m12)) * (std::abs(m21) + std::abs(m22));
    if (!(std::abs(det) > 1e-14 * scale)) throw SingularSystem("bordered system is numerically singular");
    std::vector<double> x(n);
    x[n - 1] = (py * m22 - m12 * border_y) / det;
    const double lagrange = (m11 * border_y - m21 * py) / det;
    for (std::size_t i = n - 1; i-- > 0;) {
        double acc = uy[i] - uk[i] * lagrange - u1[i] * x[i + 1];
        if (i + 2 < n) acc -= u2[i] * x[i + 2];
        x[i] = acc / u0[i];
    }
    return x;
}

/// Fraction of the (trapezoid) L2 mass of `v` lying in the last 10% of the interval.
inline double tail_fraction(const Discretization& d, std::span<const double> v) {
    const auto& iv = d.problem().interval;
    const double cut = iv.lo + 0.9 * (iv.hi - iv.lo);
    const auto x = d.unknown_nodes();
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double m = d.weight(i) * v[i] * v[i];
        total += m;
        if (x[i] >= cut) tail += m;
    }
    return total > 0 ? tail / total : 0.0;
}

/// Lowest `count` eigenpairs, Richardson-refined.
inline EigenSolution solve(const RadialEigenProblem& problem, int count, const SolveOptions& opt = {}) {
    if (count < 1) throw DomainError("solve: count must be positive");
    if (static_cast<std::size_t>(count) > problem.interval.n / 4)
        throw DomainError("solve: count exceeds n/4");
    Discretization coarse(problem);
    EigenSolution sol;
    sol.coarse_eigenvalues = coarse.eigenvalues(count, opt.eigenvalue_tol);
    if (opt.richardson) {
        Discretization fine(problem.refined());
        const auto fine_vals = fine.eigenvalues(count, opt.eigenvalue_tol, sol.coarse_eigenvalues);
        for (int j = 0; j < count; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const double delta = fine_vals[jj] - sol.coarse_eigenvalues[jj];
            sol.eigenvalues.push_back(fine_vals[jj] + delta / 3.0);
            sol.richardson_error.push_back(std::abs(delta) / 3.0);
        }
    } else {
        sol.eigenvalues = sol.coarse_eigenvalues;
        sol.richardson_error.assign(static_cast<std::size_t>(count), 0.0);
    }
    if (opt.eigenfunctions) {
        std::vector<std::vector<double>> found;
        for (int j = 0; j < count; ++j) {
            auto [v, res] = coarse.eigenvector(sol.coarse_eigenvalues[static_cast<std::size_t>(j)], found,
                                               opt.max_inverse_iterations, opt.residual_tol);
            sol.tail_mass = std::max(sol.tail_mass, tail_fraction(coarse, v));
            sol.residual_norms.push_back(res);
            sol.eigenfunctions.push_back(coarse.expand(v));
            found.push_back(std::move(v));
        }
        sol.truncation_warning = sol.tail_mass > opt.tail_threshold;
    }
    sol.nodes.resize(problem.interval.n + 2);
    for (std::size_t i = 0; i < sol.nodes.size(); ++i) sol.nodes[i] = problem.interval.node(i);
    return sol;
}

/// f solving (A - shift) f = rhs - <kernel, rhs> kernel with <f, kernel> = 0,
/// all vectors sampled on the n+2 nodes of the problem grid.
inline std::vector<double> solve_with_orthogonality_constraint(const RadialEigenProblem& problem, double shift,
                                                               std::span<const double> rhs,
                                                               std::span<const double> kernel) {
    Discretization d(problem);
    const auto r = d.restrict_to_unknowns(rhs);
    const auto k = d.restrict_to_unknowns(kernel);
    return d.expand(d.solve_bordered(shift, r, k));
}

/// Trapezoid inner product on the n+2 node grid.
inline double trapezoid_dot(double h, std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += w * a[i] * b[i];
    }
    return s * h;
}

/// Lowest `count` eigenvalues of the symmetric tridiagonal matrix with the
/// given diagonal and off-diagonal, by Sturm-count bisection to full precision.
inline std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> off,
                                                   int count) {
    const std::size_t n = diag.size();
    if (n == 0 || off.size() + 1 != n) throw DomainError("tridiagonal_eigenvalues: size mismatch");
    if (count < 1 || static_cast<std::size_t>(count) > n) throw DomainError("tridiagonal_eigenvalues: bad count");
    auto below = [&](double s) {
        int neg = 0;
        double d = diag[0] - s;
        for (std::size_t i = 0;; ++i) {
            if (d < 0.0) ++neg;
            if (i + 1 == n) break;
            if (d == 0.0) d = std::numeric_limits<double>::min();
            d = diag[i + 1] - s - off[i] * off[i] / d;
        }
        return neg;
    };
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    std::vector<double> out;
    for (int j = 0; j < count; ++j) {
        double a = out.empty() ? lo : out.back(), b = hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            (below(mid) > j ? b : a) = mid;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

} // namespace magspec::sturm1d
