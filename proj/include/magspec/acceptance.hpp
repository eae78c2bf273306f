#pragma once

// Acceptance suite: one function per criterion, each returning a pass flag and
// the measured numbers behind it. Shared by the acceptance binary and the CLI.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "magspec/asym.hpp"
#include "magspec/degennes.hpp"
#include "magspec/fiber.hpp"
#include "magspec/numerics.hpp"
#include "magspec/specfun.hpp"
#include "magspec/steklov.hpp"

namespace magspec::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

inline std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Detail {
    std::ostringstream os;
    bool pass = true;
    void check(bool ok, const std::string& what) {
        if (os.tellp() > 0) os << "; ";
        os << (ok ? "" : "FAIL ") << what;
        pass = pass && ok;
    }
};

inline std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> v;
    for (int i = 0; i < points; ++i) v.push_back(lo * std::pow(hi / lo, i / static_cast<double>(points - 1)));
    return v;
}

} // namespace detail

using detail::fmt;

inline CriterionResult c1_hat_alpha() {
    detail::Detail d;
    const double a = degennes::hat_alpha();
    const double z = specfun::neg_zero_D_half() / std::sqrt(2.0);
    d.check(std::abs(a - z) <= 1e-6, fmt("|hat_alpha - z/sqrt2| = %.2e", std::abs(a - z)));
    d.check(std::abs(a - 0.5409019) <= 1e-6, fmt("hat_alpha = %.9f", a));
    d.check(std::abs(z - 0.5409019) <= 1e-6, fmt("z/sqrt2 = %.9f", z));
    return {1, "de Gennes cross-validation", d.pass, d.os.str()};
}

inline CriterionResult c2_exact_states() {
    detail::Detail d;
    double worst = 0.0;
    for (double xi : {0.0, 0.3, 0.7, 1.2}) worst = std::max(worst, std::abs(degennes::mu0_value(xi, xi) - 1.0));
    const double e00 = std::abs(degennes::mu0_value(0.0, 0.0) - 1.0);
    d.check(worst <= 1e-8, fmt("max |mu0(xi,xi) - 1| = %.2e", worst));
    d.check(e00 <= 1e-8, fmt("|mu0(0,0) - 1| = %.2e", e00));
    return {2, "exact Gaussian ground states", d.pass, d.os.str()};
}

inline CriterionResult c3_moments() {
    detail::Detail d;
    double wm = 0.0, wp = 0.0;
    for (double g : {-degennes::hat_alpha(), -0.25, 0.0, 0.5, 1.0}) {
        const auto& K = degennes::constants(g);
        wm = std::max({wm, std::abs(K.moment1), std::abs(K.moment2 - (K.theta / 2 - g / 4 * K.phi0_sq)),
                       std::abs(K.moment3 - (1 + 2 * g * K.xi) * K.phi0_sq / 6)});
        wp = std::max(wp, std::abs(degennes::theta_prime_fd(g) - K.phi0_sq));
    }
    d.check(wm <= 1e-7, fmt("max moment identity error %.2e", wm));
    d.check(wp <= 1e-5, fmt("max |Theta'_fd - phi(0)^2| %.2e", wp));
    return {3, "moment identities", d.pass, d.os.str()};
}

inline CriterionResult c4_resolvent() {
    detail::Detail d;
    for (double g : {-degennes::hat_alpha(), 0.0, 0.5}) {
        const auto& K = degennes::constants(g);
        const double target = K.xi * K.phi0_sq;
        const double rel = std::abs(K.k2 - target) / target;
        const double rel_i = std::abs(1 - 4 * K.resolvent_integral - K.k2) / K.k2;
        d.check(rel <= 1e-5 && rel_i <= 1e-5,
                fmt("gamma=%.4f integral=%+.8f (sign %c) k2 rel %.1e, 1-4I rel %.1e", g, K.resolvent_integral,
                    K.resolvent_integral >= 0 ? '+' : '-', rel, rel_i));
    }
    return {4, "resolvent sign and k2", d.pass, d.os.str()};
}

inline CriterionResult c5_fiber_exact() {
    detail::Detail d;
    for (auto [m, nu] : {std::pair{1, 0.25}, std::pair{1, -0.25}, std::pair{2, 0.5}}) {
        const double b = 2 * (m - nu);
        const double mu = fiber::fiber_eigs({m, nu, b, 0.0}, 1, {}, false).eigenvalues[0];
        d.check(std::abs(mu - b) <= 1e-7, fmt("(m=%d,nu=%g) |mu-b| = %.2e", m, nu, std::abs(mu - b)));
    }
    return {5, "fiber exactness at b = 2(m - nu)", d.pass, d.os.str()};
}

inline CriterionResult c6_effective() {
    detail::Detail d;
    const double p = fiber::effective_op_eigs(0, 0.25, 1)[0];
    const double n = fiber::effective_op_eigs(0, -0.25, 1)[0];
    const auto two = fiber::effective_op_eigs(2, 0.25, 2);
    d.check(std::abs(p - 3.0) <= 1e-4, fmt("S^(0), nu=1/4: %.8f vs 3", p));
    d.check(std::abs(n - 5.0) <= 1e-4, fmt("S^(0), nu=-1/4: %.8f vs 5", n));
    d.check(std::abs(two[0] - 2.0) <= 1e-4 && std::abs(two[1] - 6.0) <= 1e-4,
            fmt("S^(2), nu=1/4: %.8f, %.8f vs 2, 6", two[0], two[1]));
    return {6, "effective operator spectrum", d.pass, d.os.str()};
}

struct WeakFit {
    double p = 0, C = 0, max_cross = 0;
    bool temple_ok = true;
};

inline WeakFit weak_fit(int m, double nu, bool cross_checks) {
    WeakFit w;
    std::vector<double> bs = detail::log_grid(1e-3, 1e-2, 6), gaps;
    for (double b : bs) {
        const double mu = fiber::fiber_eigs({m, nu, b, 0.0}, 1, {}, false).eigenvalues[0];
        gaps.push_back(b - mu);
        if (cross_checks) {
            w.max_cross = std::max(w.max_cross, std::abs(mu - fiber::implicit_eig_U(m, nu, b).lambda));
            const auto t = fiber::temple_bounds(m, nu, b);
            w.temple_ok = w.temple_ok && t.lower <= mu && mu <= t.upper;
        }
    }
    std::tie(w.p, w.C) = num::fit_power_law(bs, gaps);
    return w;
}

inline CriterionResult c7_weak_splitting() {
    detail::Detail d;
    const auto a = weak_fit(1, 0.25, true);
    const double ca = std::pow(2.0, 0.25) / specfun::gamma_fn(0.75);
    d.check(std::abs(a.p / 1.75 - 1) <= 0.02, fmt("nu=1/4 m=1 exponent %.4f vs 1.75", a.p));
    d.check(std::abs(a.C / ca - 1) <= 0.05, fmt("prefactor %.4f vs %.4f", a.C, ca));
    const auto b = weak_fit(0, -0.25, true);
    const double cb = std::pow(2.0, 0.75) / specfun::gamma_fn(0.25);
    d.check(std::abs(b.p / 1.25 - 1) <= 0.02, fmt("nu=-1/4 m=0 exponent %.4f vs 1.25", b.p));
    d.check(std::abs(b.C / cb - 1) <= 0.05, fmt("prefactor %.4f vs %.4f", b.C, cb));
    d.check(std::max(a.max_cross, b.max_cross) <= 1e-6, fmt("max |FD - implicit U| %.1e", std::max(a.max_cross, b.max_cross)));
    d.check(a.temple_ok && b.temple_ok, "Temple bounds sandwich FD");
    return {7, "weak-field splitting", d.pass, d.os.str()};
}

inline CriterionResult c8_weak_excited() {
    detail::Detail d;
    const auto w = weak_fit(2, 0.25, false);
    d.check(std::abs(w.p / 2.75 - 1) <= 0.03, fmt("nu=1/4 m=2 exponent %.4f vs 2.75", w.p));
    return {8, "weak-field excited fiber", d.pass, d.os.str()};
}

inline CriterionResult c9_strong_three_term() {
    detail::Detail d;
    const auto& K = degennes::constants(0.0);
    std::vector<double> s2, s3;
    for (double b : {100.0, 200.0, 400.0}) {
        const double mu = fiber::exterior_spectrum(b, 0.3, 0.0, 0).entries[0].mu;
        const auto p = asym::predict_strong(b, 0.3, K);
        s2.push_back(std::abs(mu - p.term_theta_b - p.term_c_sqrtb) * std::sqrt(b));
        s3.push_back(std::abs(mu - p.total) * std::sqrt(b));
    }
    const double ratio = *std::max_element(s3.begin(), s3.end()) / *std::min_element(s3.begin(), s3.end());
    d.check(ratio <= 3.0, fmt("three-term |r| b^{1/2}: %.4f %.4f %.4f (ratio %.2f)", s3[0], s3[1], s3[2], ratio));
    d.check(s2[0] < s2[1] && s2[1] < s2[2], fmt("two-term |r| b^{1/2}: %.4f %.4f %.4f", s2[0], s2[1], s2[2]));
    return {9, "strong-field three-term", d.pass, d.os.str()};
}

inline CriterionResult c10_spectral_triple() {
    detail::Detail d;
    const auto& K = degennes::constants(0.0);
    const double e0 = 0.3, nu = 0.2;
    const auto seq = asym::build_e0_sequence(e0, nu, K, 150, 260);
    auto best = seq.entries.front();
    for (const auto& e : seq.entries)
        if (std::abs(e.b - 400.0) < std::abs(best.b - 400.0)) best = e;
    const auto ex = fiber::exterior_spectrum(best.b, nu, 0.0, 2);
    const double s = K.xi * K.phi0_sq;
    const double g1 = ex.entries[1].mu - ex.entries[0].mu, p1 = ((1 - e0) * (1 - e0) - e0 * e0) * s;
    const double g2 = ex.entries[2].mu - ex.entries[0].mu, p2 = ((1 + e0) * (1 + e0) - e0 * e0) * s;
    d.check(std::abs(g1 / p1 - 1) <= 0.1, fmt("b_n=%.3f gap1 %.5f vs %.5f", best.b, g1, p1));
    d.check(std::abs(g2 / p2 - 1) <= 0.1, fmt("gap2 %.5f vs %.5f", g2, p2));
    return {10, "spectral triple on an e0-sequence", d.pass, d.os.str()};
}

inline CriterionResult c11_steklov_strong() {
    detail::Detail d;
    const std::vector<int> n_list{16, 30, 60, 110, 200, 320, 450};
    for (double e0 : {0.0, 0.45}) {
        const auto rep = steklov::verify_steklov_thirdterm(e0, 0.25, n_list);
        std::vector<double> x, y, yc;
        for (const auto& r : rep.rows) {
            x.push_back(r.b);
            y.push_back(std::abs(r.scaled_residual));
            yc.push_back(r.b * std::abs(r.residual_corrected));
        }
        // bounded: no growth trend of b_n r_n in log-log
        const double trend = num::fit_power_law(x, y).first;
        d.check(trend <= 0.15, fmt("e0=%.2f b_n r_n %.3f..%.3f, log-log trend %.3f (with offset: max %.3f)", e0,
                                   y.front(), y.back(), trend, *std::max_element(yc.begin(), yc.end())));
        d.check(std::abs(rep.two_term_slope + 0.5) <= 0.15, fmt("two-term slope %.3f", rep.two_term_slope));
    }
    return {11, "Steklov strong field", d.pass, d.os.str()};
}

inline CriterionResult c12_steklov_weak() {
    detail::Detail d;
    const auto grid = detail::log_grid(1e-8, 1e-6, 5);
    for (double nu : {0.25, -0.25}) {
        const auto rep = steklov::verify_weak_steklov(nu, grid);
        d.check(std::abs(rep.exponent / 0.25 - 1) <= 0.05, fmt("nu=%+.2f exponent %.4f", nu, rep.exponent));
        d.check(std::abs(rep.coefficient_fixed / rep.stated_coefficient - 1) <= 0.1,
                fmt("coefficient %.4f vs %.4f", rep.coefficient_fixed, rep.stated_coefficient));
        double prev = 0.0;
        bool mono = true;
        std::string vals;
        for (double b : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
            const double l = steklov::steklov_lambda(b, nu).lambda_val;
            mono = mono && l > prev;
            prev = l;
            vals += fmt(" %.4f", l);
        }
        d.check(mono, "lambda(b) increasing:" + vals);
    }
    return {12, "Steklov weak field", d.pass, d.os.str()};
}

inline CriterionResult c13_symmetry() {
    detail::Detail d;
    const int mp = fiber::exterior_spectrum(0.05, 0.25, 0.0, 0).entries[0].m;
    const int mn = fiber::exterior_spectrum(0.05, -0.25, 0.0, 0).entries[0].m;
    d.check(mp == 1, fmt("b=0.05 nu=1/4 minimizing m = %d", mp));
    d.check(mn == 0, fmt("b=0.05 nu=-1/4 minimizing m = %d", mn));
    double worst = 0.0;
    for (double b : {0.05, 3.0, 40.0}) {
        const auto s = fiber::exterior_spectrum(b, 0.25, 0.0, 2), t = fiber::exterior_spectrum(b, -0.75, 0.0, 2);
        for (std::size_t i = 0; i < s.entries.size(); ++i) worst = std::max(worst, std::abs(s.entries[i].mu - t.entries[i].mu));
    }
    d.check(worst <= 1e-9, fmt("max |spec(b,nu) - spec(b,nu-1)| = %.1e", worst));
    return {13, "symmetry and flux periodicity", d.pass, d.os.str()};
}

inline CriterionResult c14_profile() {
    detail::Detail d;
    const double target = (1.0 - degennes::theta(0.0).first) / 2.0;
    for (double nu : {0.0, 0.25}) {
        const auto f = fiber::profile_exponent_fit(400.0, nu);
        d.check(std::abs(f.delta - target) <= 0.1, fmt("nu=%.2f delta %.4f vs %.4f", nu, f.delta, target));
    }
    return {14, "boundary-layer profile exponent", d.pass, d.os.str()};
}

inline const std::vector<std::function<CriterionResult()>>& criteria() {
    static const std::vector<std::function<CriterionResult()>> all{
        c1_hat_alpha, c2_exact_states,      c3_moments,          c4_resolvent,         c5_fiber_exact,
        c6_effective, c7_weak_splitting,    c8_weak_excited,     c9_strong_three_term, c10_spectral_triple,
        c11_steklov_strong, c12_steklov_weak, c13_symmetry,      c14_profile};
    return all;
}

/// Runs one criterion, turning any exception into a failed result.
inline CriterionResult run_one(int id) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = criteria().at(static_cast<std::size_t>(id - 1))();
    } catch (const std::exception& e) {
        r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::string format_line(const CriterionResult& r) {
    return fmt("[%s] %2d %-36s %7.1fs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds) + r.detail;
}

} // namespace magspec::acceptance
