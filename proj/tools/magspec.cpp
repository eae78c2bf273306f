// magspec: command-line front end for the solvers, the verification campaigns
// and the acceptance suite. Exit codes: 0 success, 1 acceptance failure,
// 2 invalid arguments, 3 solver error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "magspec/acceptance.hpp"
#include "magspec/asym.hpp"
#include "magspec/degennes.hpp"
#include "magspec/errors.hpp"
#include "magspec/fiber.hpp"
#include "magspec/io.hpp"
#include "magspec/steklov.hpp"

namespace fs = std::filesystem;
using namespace magspec;
using io::format_double;
using io::format_int;
using json = nlohmann::ordered_json;

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common {
    std::string out = ".";
    bool fast = false;
};

struct FluxShift {
    double input = 0.0, nu = 0.0;
    int shift = 0; // nu = input - shift, and fiber m maps to m - shift
};

FluxShift normalize_nu(double input) {
    if (!std::isfinite(input)) throw ValidationError("nu must be finite");
    const int s = static_cast<int>(std::ceil(input - 0.5));
    return {input, input - s, s};
}

fiber::GridPolicy grid(const Common& c) {
    fiber::GridPolicy g;
    if (c.fast) g.scale = 2.0;
    return g;
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            const int v = std::stoi(s);
            return {v, v};
        }
        const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
        if (b < a) throw ValidationError("empty range " + s);
        return {a, b};
    } catch (const std::logic_error&) {
        throw ValidationError("cannot parse integer range '" + s + "'");
    }
}

std::vector<double> b_grid(const std::vector<double>& explicit_b, double lo, double hi, int points, bool logarithmic) {
    if (!explicit_b.empty()) {
        for (double b : explicit_b)
            if (!(b > 0.0)) throw ValidationError("b values must be positive");
        return explicit_b;
    }
    if (!(lo > 0.0 && hi > lo)) throw ValidationError("need 0 < bmin < bmax");
    if (points < 2) throw ValidationError("points must be >= 2");
    std::vector<double> v;
    for (int i = 0; i < points; ++i) {
        const double t = i / static_cast<double>(points - 1);
        v.push_back(logarithmic ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    return v;
}

fs::path prepare_out(const Common& c) {
    fs::path dir(c.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + c.out);
    return dir;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& params, const FluxShift* nu,
                    const Common& c) {
    json j;
    j["command"] = command;
    j["parameters"] = params;
    if (nu) j["nu_normalization"] = {{"input", nu->input}, {"nu", nu->nu}, {"shift", nu->shift}};
    j["fast"] = c.fast;
    io::write_json(dir / (command + "_run.json"), j);
    if (nu && nu->shift != 0)
        std::cerr << "nu " << format_double(nu->input) << " normalized to " << format_double(nu->nu) << " (m shifted by "
                  << -nu->shift << ")\n";
}

// --- subcommands -----------------------------------------------------------

int run_degennes(const Common& c, double gamma) {
    if (!(std::abs(gamma) <= 5.0)) throw ValidationError("gamma must satisfy |gamma| <= 5");
    const auto dir = prepare_out(c);
    degennes::Settings s;
    if (c.fast) s.n = (s.n + 1) / 2 - 1;
    const auto K = degennes::compute_constants(gamma, s);
    io::write_json(dir / "degennes.json", io::to_json(K));
    write_manifest(dir, "degennes", {{"gamma", gamma}, {"n", s.n}, {"T", s.T}}, nullptr, c);
    std::cout << (dir / "degennes.json").string() << '\n';
    return 0;
}

int run_dispersion(const Common& c, double nu_in, double gamma, const std::string& mrange, double bmax, int points,
                   int levels) {
    const auto nu = normalize_nu(nu_in);
    const auto [m0, m1] = parse_range(mrange);
    if (!(bmax > 0.0)) throw ValidationError("bmax must be positive");
    if (points < 1) throw ValidationError("points must be >= 1");
    if (levels < 1 || levels > 5) throw ValidationError("levels must be in 1..5");
    if (!std::isfinite(gamma)) throw ValidationError("gamma must be finite");
    std::vector<int> ms;
    for (int m = m0; m <= m1; ++m) ms.push_back(m - nu.shift);
    std::vector<double> bs;
    for (int i = 1; i <= points; ++i) bs.push_back(bmax * i / points);
    const auto dir = prepare_out(c);
    const auto pts = fiber::dispersion_sweep(nu.nu, gamma, ms, bs, levels, grid(c));
    io::CsvWriter csv(dir / "dispersion.csv", {"nu", "gamma", "m", "level", "b", "mu", "err"});
    int failures = 0;
    for (const auto& p : pts) {
        if (!p.ok) {
            ++failures;
            std::cerr << "m=" << p.spec.m << " b=" << format_double(p.spec.b) << ": " << p.message << '\n';
        }
        csv.write_row({format_double(nu.nu), format_double(gamma), format_int(p.spec.m), format_int(p.level),
                       format_double(p.spec.b), format_double(p.ok ? p.mu : kNaN), format_double(p.ok ? p.error : kNaN)});
    }
    write_manifest(dir, "dispersion",
                   {{"nu", nu_in}, {"gamma", gamma}, {"m", mrange}, {"bmax", bmax}, {"points", points}, {"levels", levels}},
                   &nu, c);
    return failures ? 3 : 0;
}

int run_strong(const Common& c, double nu_in, double gamma, std::vector<double> bs_in, double bmin, double bmax,
               int points) {
    const auto nu = normalize_nu(nu_in);
    if (!(std::abs(gamma) <= 5.0)) throw ValidationError("gamma must satisfy |gamma| <= 5");
    if (bs_in.empty() && bmin == 0.0) bs_in = {100.0, 200.0, 400.0};
    const auto bs = b_grid(bs_in, bmin, bmax, points, false);
    for (double b : bs)
        if (!(b >= 10.0)) throw ValidationError("strong: b must be >= 10");
    const auto dir = prepare_out(c);
    const auto& K = degennes::constants(gamma);
    io::CsvWriter csv(dir / "strong.csv", {"b", "nu", "gamma", "m_numeric", "mu_numeric", "m_star", "term_theta_b",
                                           "term_c_sqrtb", "term_osc", "prediction", "residual2term", "residual3term"});
    for (double b : bs) {
        const auto ex = fiber::exterior_spectrum(b, nu.nu, gamma, 0, grid(c));
        const auto p = asym::predict_strong(b, nu.nu, K);
        const double mu = ex.entries[0].mu;
        csv.write_row({format_double(b), format_double(nu.nu), format_double(gamma), format_int(ex.entries[0].m),
                       format_double(mu), format_int(p.m_star), format_double(p.term_theta_b),
                       format_double(p.term_c_sqrtb), format_double(p.term_osc), format_double(p.total),
                       format_double(mu - p.term_theta_b - p.term_c_sqrtb), format_double(mu - p.total)});
    }
    write_manifest(dir, "strong", {{"nu", nu_in}, {"gamma", gamma}, {"b", bs}}, &nu, c);
    return 0;
}

double weak_prediction(int m, double nu, double b) {
    if (!(b < 1.0)) return kNaN;
    if (m == 0 && nu < 0.0) return asym::predict_weak(0, nu, b);
    if (m >= 1) return asym::predict_weak(m - 1, nu, b);
    return kNaN;
}

int run_weak(const Common& c, double nu_in, int m_in, const std::vector<double>& bs_in, double bmin, double bmax,
             int points) {
    const auto nu = normalize_nu(nu_in);
    const int m = m_in - nu.shift;
    const auto bs = b_grid(bs_in, bmin, bmax, points, true);
    const auto dir = prepare_out(c);
    io::CsvWriter csv(dir / "weak.csv", {"nu", "m", "b", "mu", "err", "mu_implicit_u", "temple_lower", "temple_upper",
                                         "prediction", "gap"});
    const auto rows = parallel_map(bs.size(), [&](std::size_t i) {
        const double b = bs[i];
        const auto s = fiber::fiber_eigs({m, nu.nu, b, 0.0}, 1, grid(c), false);
        double u = kNaN, lo = kNaN, hi = kNaN;
        try {
            u = fiber::implicit_eig_U(m, nu.nu, b).lambda;
        } catch (const Error&) {
        }
        try {
            const auto t = fiber::temple_bounds(m, nu.nu, b);
            lo = t.lower;
            hi = t.upper;
        } catch (const Error&) {
        }
        const double mu = s.eigenvalues[0];
        return std::vector<std::string>{format_double(nu.nu), format_int(m), format_double(b), format_double(mu),
                                        format_double(s.richardson_error[0]), format_double(u), format_double(lo),
                                        format_double(hi), format_double(weak_prediction(m, nu.nu, b)),
                                        format_double(b - mu)};
    });
    for (const auto& r : rows) csv.write_row(r);
    write_manifest(dir, "weak", {{"nu", nu_in}, {"m", m_in}, {"b", bs}}, &nu, c);
    return 0;
}

asym::EtaVariant parse_variant(const std::string& v) {
    if (v == "shifted") return asym::EtaVariant::Shifted;
    if (v == "printed") return asym::EtaVariant::Printed;
    if (v == "generic") return asym::EtaVariant::Generic;
    throw ValidationError("variant must be shifted, printed or generic");
}

steklov::Solver parse_solver(const std::string& s) {
    if (s == "brent") return steklov::Solver::ExteriorBrent;
    if (s == "zero-energy") return steklov::Solver::ZeroEnergy;
    throw ValidationError("solver must be brent or zero-energy");
}

int run_steklov(const Common& c, const std::string& mode, double nu_in, double e0, std::vector<int> n_list,
                const std::vector<double>& bs_in, double bmin, double bmax, int points, const std::string& variant,
                const std::string& solver_name) {
    const auto nu = normalize_nu(nu_in);
    const auto dir = prepare_out(c);
    const auto g = grid(c);
    const std::string solver = solver_name.empty() ? (mode == "weak" ? "zero-energy" : "brent") : solver_name;
    if (mode == "strong") {
        if (!(e0 > -0.5 && e0 <= 0.5)) throw ValidationError("e0 must lie in (-1/2, 1/2]");
        if (n_list.empty()) n_list = {16, 30, 60, 110, 200, 320, 450};
        const auto v = parse_variant(variant);
        const auto rep = steklov::verify_steklov_thirdterm(e0, nu.nu, n_list, v, parse_solver(solver), g);
        io::CsvWriter csv(dir / "steklov_strong.csv", {"b", "lambda", "residual2term", "residual3term", "scaled_residual"});
        for (const auto& r : rep.rows)
            csv.write_row({format_double(r.b), format_double(r.lambda), format_double(r.residual2term),
                           format_double(r.residual3term), format_double(r.scaled_residual)});
        json summary{{"e0", e0},
                     {"nu", nu.nu},
                     {"variant", variant},
                     {"two_term_slope", rep.two_term_slope},
                     {"third_coefficient", rep.third_coefficient},
                     {"offset_G", steklov::third_term_correction()}};
        json corrected = json::array();
        for (const auto& r : rep.rows) corrected.push_back({{"b", r.b}, {"residual_corrected", r.residual_corrected}});
        summary["rows"] = corrected;
        io::write_json(dir / "steklov_strong_summary.json", summary);
        write_manifest(dir, "steklov", {{"mode", mode}, {"nu", nu_in}, {"e0", e0}, {"n", n_list}, {"variant", variant}},
                       &nu, c);
        return 0;
    }
    if (mode == "weak") {
        const auto bs = b_grid(bs_in, bmin == 0.0 ? 1e-8 : bmin, bmax == 0.0 ? 1e-6 : bmax, points, true);
        const auto rep = steklov::verify_weak_steklov(nu.nu, bs, parse_solver(solver), g);
        io::CsvWriter csv(dir / "steklov_weak.csv", {"b", "lambda", "excess", "expansion"});
        for (const auto& r : rep.rows)
            csv.write_row({format_double(r.b), format_double(r.lambda), format_double(r.excess),
                           format_double(asym::weak_steklov_lambda_expansion(nu.nu, r.b) - std::abs(nu.nu))});
        io::write_json(dir / "steklov_weak_summary.json",
                       json{{"nu", nu.nu},
                            {"exponent", rep.exponent},
                            {"coefficient", rep.coefficient},
                            {"coefficient_fixed_exponent", rep.coefficient_fixed},
                            {"stated_coefficient", rep.stated_coefficient},
                            {"expansion_coefficient", rep.expansion_coefficient}});
        write_manifest(dir, "steklov", {{"mode", mode}, {"nu", nu_in}, {"b", bs}}, &nu, c);
        return 0;
    }
    if (mode == "value") {
        if (bs_in.empty()) throw ValidationError("value mode needs --b");
        io::CsvWriter csv(dir / "steklov_value.csv", {"b", "nu", "lambda", "robin_residual", "m", "iterations"});
        for (double b : bs_in) {
            if (!(b > 0.0)) throw ValidationError("b values must be positive");
            const auto r = steklov::steklov_lambda(b, nu.nu, g);
            csv.write_row({format_double(b), format_double(nu.nu), format_double(r.lambda_val),
                           format_double(r.robin_residual), format_int(r.m), format_int(r.iterations)});
        }
        write_manifest(dir, "steklov", {{"mode", mode}, {"nu", nu_in}, {"b", bs_in}}, &nu, c);
        return 0;
    }
    throw ValidationError("mode must be strong, weak or value");
}

int run_accept(const Common& c, const std::vector<int>& ids_in) {
    if (c.fast) std::cerr << "accept always runs at full resolution; --fast ignored\n";
    const int total = static_cast<int>(acceptance::criteria().size());
    std::vector<int> ids = ids_in;
    if (ids.empty())
        for (int i = 1; i <= total; ++i) ids.push_back(i);
    for (int id : ids)
        if (id < 1 || id > total) throw ValidationError("unknown criterion " + std::to_string(id));
    const auto dir = prepare_out(c);
    io::CsvWriter csv(dir / "acceptance.csv", {"id", "name", "pass", "seconds", "detail"});
    int failed = 0;
    for (int id : ids) {
        const auto r = acceptance::run_one(id);
        std::cout << acceptance::format_line(r) << std::endl;
        std::string detail = r.detail;
        for (char& ch : detail)
            if (ch == ',') ch = ';';
        csv.write_row({format_int(r.id), r.name, r.pass ? "1" : "0", format_double(r.seconds), detail});
        failed += r.pass ? 0 : 1;
    }
    std::cout << (static_cast<int>(ids.size()) - failed) << "/" << ids.size() << " criteria passed\n";
    return failed ? 1 : 0;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_flag("--fast", c.fast, "halve grid sizes (smoke runs)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"magspec: magnetic Neumann, Robin and Steklov spectra outside the unit disk"};
    app.require_subcommand(1);
    Common common;

    double gamma = 0.0, nu = 0.0, bmax = 0.0, bmin = 0.0, e0 = 0.0;
    int points = 0, levels = 1, m = 1;
    std::string mrange = "0..4", mode = "strong", variant = "shifted", solver;
    std::vector<double> bs;
    std::vector<int> n_list, ids;

    auto* dg = app.add_subcommand("degennes", "de Gennes constants at a Robin parameter, as JSON");
    dg->add_option("--gamma", gamma, "Robin parameter")->required();
    add_common(dg, common);

    auto* dp = app.add_subcommand("dispersion", "ground-state dispersion curves mu_j^(m)(b) as CSV");
    dp->add_option("--nu", nu, "flux")->required();
    dp->add_option("--gamma", gamma, "Robin parameter")->capture_default_str();
    dp->add_option("--m", mrange, "angular momenta a..b")->capture_default_str();
    dp->add_option("--bmax", bmax, "largest field")->required();
    dp->add_option("--points", points, "b points in (0, bmax]")->required();
    dp->add_option("--levels", levels, "levels per fiber")->capture_default_str();
    add_common(dp, common);

    auto* st = app.add_subcommand("strong", "strong-field ground energy against the three-term formula");
    st->add_option("--nu", nu, "flux")->required();
    st->add_option("--gamma", gamma, "Robin parameter")->capture_default_str();
    st->add_option("--b", bs, "field values")->delimiter(',');
    st->add_option("--bmin", bmin, "grid start");
    st->add_option("--bmax", bmax, "grid end");
    st->add_option("--points", points, "grid points");
    add_common(st, common);

    auto* wk = app.add_subcommand("weak", "weak-field fiber energy with implicit-U and Temple cross-checks");
    wk->add_option("--nu", nu, "flux")->required();
    wk->add_option("--m", m, "angular momentum")->capture_default_str();
    wk->add_option("--b", bs, "field values")->delimiter(',');
    wk->add_option("--bmin", bmin, "grid start")->default_val(1e-3);
    wk->add_option("--bmax", bmax, "grid end")->default_val(1e-2);
    wk->add_option("--points", points, "log-spaced points")->default_val(6);
    add_common(wk, common);

    auto* sk = app.add_subcommand("steklov", "Steklov eigenvalue and its strong/weak campaigns");
    sk->add_option("--mode", mode, "strong, weak or value")->capture_default_str();
    sk->add_option("--nu", nu, "flux")->required();
    sk->add_option("--e0", e0, "e0-sequence offset (strong)")->capture_default_str();
    sk->add_option("--n", n_list, "sequence indices (strong)")->delimiter(',');
    sk->add_option("--variant", variant, "eta constant: shifted, printed or generic")->capture_default_str();
    sk->add_option("--solver", solver, "brent or zero-energy (default: brent for strong, zero-energy for weak)");
    sk->add_option("--b", bs, "field values (weak, value)")->delimiter(',');
    sk->add_option("--bmin", bmin, "grid start (weak)");
    sk->add_option("--bmax", bmax, "grid end (weak)");
    sk->add_option("--points", points, "log-spaced points (weak)")->default_val(5);
    add_common(sk, common);

    auto* ac = app.add_subcommand("accept", "run the acceptance suite");
    ac->add_option("ids", ids, "criterion numbers (default: all)");
    add_common(ac, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*dg) return run_degennes(common, gamma);
        if (*dp) return run_dispersion(common, nu, gamma, mrange, bmax, points, levels);
        if (*st) return run_strong(common, nu, gamma, bs, bmin, bmax, points);
        if (*wk) return run_weak(common, nu, m, bs, bmin, bmax, points);
        if (*sk)
            return run_steklov(common, mode, nu, e0, n_list, bs, sk->count("--bmin") ? bmin : 0.0,
                               sk->count("--bmax") ? bmax : 0.0, points, variant, solver);
        if (*ac) return run_accept(common, ids);
    } catch (const ValidationError& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
