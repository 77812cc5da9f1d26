// Command-line front end: emits CSV sweeps and JSON summaries for the
// solitary-wave families, bifurcation ladders, projection integrals, branch
// continuation, operator spectra, and the linearized stability problem.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdvls/continuation.hpp"
#include "kdvls/discretize.hpp"
#include "kdvls/greens.hpp"
#include "kdvls/model.hpp"
#include "kdvls/spectra.hpp"
#include "kdvls/stability.hpp"

using json = nlohmann::ordered_json;
using namespace kdvls;

namespace {

constexpr const char* version_string = "kdvls 0.1.0";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::ofstream out;
    explicit CsvWriter(const std::string& path) : out(path) {
        if (!out) throw ConfigError("cannot open output file: " + path);
    }
    void comment(const std::string& line) { out << "# " << line << "\n"; }
    void header(const std::string& line) { out << line << "\n"; }
    template <typename... Ts>
    void row(Ts... vs) {
        bool first = true;
        ((out << (first ? "" : ",") << cell(vs), first = false), ...);
        out << "\n";
    }
    static std::string cell(double v) { return fmt(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }
};

struct OutputPaths {
    std::string prefix = "kdvls_out";
    std::string format = "both";
    bool want_csv() const { return format != "json"; }
    bool want_json() const { return format != "csv"; }
};

void write_json(const OutputPaths& paths, const json& summary) {
    if (!paths.want_json()) return;
    std::ofstream out(paths.prefix + ".json");
    if (!out) throw ConfigError("cannot open output file: " + paths.prefix + ".json");
    out << summary.dump(2) << "\n";
}

json grid_json(const Grid& g) {
    return json{{"half_length", g.half_length()}, {"points", g.size()},
                {"spacing", g.spacing()}};
}

void csv_preamble(CsvWriter& csv, const Grid* grid, const std::string& tolerances) {
    csv.comment(version_string);
    if (grid)
        csv.comment("grid: L=" + fmt(grid->half_length()) + " N=" +
                    std::to_string(grid->size()) + " h=" + fmt(grid->spacing()));
    csv.comment("tolerances: " + tolerances);
}

struct GridOptions {
    double half_length = 0.0; // 0 = default rule
    int points = 0;           // 0 = default
};

Grid make_grid(const GridOptions& opt, const ModelParams& p, bool omega_scaled) {
    const double L = opt.half_length > 0.0 ? opt.half_length
                                           : default_half_length(p, omega_scaled);
    int n = opt.points > 0 ? opt.points : Grid::default_points();
    if (n % 2 == 0) ++n;
    return Grid(L, n);
}

ExactFamily parse_family(const std::string& name, double c, double omega, double k,
                         int s) {
    if (name == "kdv") return ExactFamily::kdv_uncoupled(ModelParams::relaxed(c, omega, k, s));
    if (name == "bright") return ExactFamily::sech_bright(c, omega, s);
    if (name == "tanh") return ExactFamily::sech_tanh(c, omega, s);
    throw ConfigError("unknown family: " + name);
}

int cmd_exact(const std::string& family, double c, double omega, double k, int s,
              const GridOptions& gopt, const OutputPaths& paths) {
    const auto fam = parse_family(family, c, omega, k, s);
    const Grid grid = make_grid(gopt, fam.params(), family != "kdv");
    const auto profile = fam.sample(grid);
    const auto& p = fam.params();
    const auto residual = residual_ode(profile, p);
    const auto conserved = conserved_quantities(profile, p);

    if (paths.want_csv()) {
        CsvWriter csv(paths.prefix + ".csv");
        csv_preamble(csv, &grid, "boundary=" + fmt(truncation_threshold));
        csv.header("xi,U,A,residual_U,residual_A");
        for (int i = 0; i < grid.size(); ++i)
            csv.row(grid.node(i), profile.U[i], profile.A[i], residual.rU[i],
                    residual.rA[i]);
    }

    json summary{{"family", family},
                 {"c", p.c()},
                 {"omega", p.omega()},
                 {"k", p.k()},
                 {"s", p.s()},
                 {"grid", grid_json(grid)},
                 {"Q", conserved.mass},
                 {"P", conserved.momentum},
                 {"P_U", conserved.momentum_u},
                 {"H", conserved.energy},
                 {"residual_norm", residual.norm},
                 {"truncation_warning", conserved.truncation_warning}};
    summary["first_invariant_max"] = max_abs(first_invariant(profile, p));
    try {
        const auto inv = second_invariant_melnikov(profile, p);
        const auto [lo, hi] = std::minmax_element(inv.begin(), inv.end());
        summary["second_invariant_range"] = *hi - *lo;
        summary["second_invariant_kind"] = "melnikov";
    } catch (const WrongRegime&) {
        try {
            const auto inv = second_invariant_k1(profile, p);
            const auto [lo, hi] = std::minmax_element(inv.begin(), inv.end());
            summary["second_invariant_range"] = *hi - *lo;
            summary["second_invariant_kind"] = "k1";
        } catch (const WrongRegime&) {
            summary["second_invariant_kind"] = "none";
        }
    }
    write_json(paths, summary);
    return 0;
}

int cmd_ladder(double c, double k, const OutputPaths& paths) {
    const auto ladder = bifurcation_ladder(c, k);
    if (paths.want_csv()) {
        CsvWriter csv(paths.prefix + ".csv");
        csv_preamble(csv, nullptr, "closed form");
        csv.header("j,omega_c,exponent");
        for (int j = 1; j <= ladder.levels; ++j)
            csv.row(j, ladder.points[j - 1], ladder.exponents[j - 1]);
    }
    write_json(paths, json{{"c", c},
                           {"k", k},
                           {"levels", ladder.levels},
                           {"points", ladder.points},
                           {"exponents", ladder.exponents}});
    return 0;
}

int cmd_projection(const std::string& which, std::optional<double> single, double lo,
                   double hi, double step, const OutputPaths& paths) {
    const BranchKind kind = which == "second" ? BranchKind::Second : BranchKind::First;
    if (which != "first" && which != "second")
        throw ConfigError("--which must be first or second");

    ProjectionCurve curve;
    if (single) {
        curve.which = kind;
        curve.exponents = {*single};
        curve.values = {kind == BranchKind::First ? projection_integral(*single)
                                                  : projection_integral_tilde(*single)};
    } else {
        curve = projection_curve(kind, lo, hi, step);
    }

    if (paths.want_csv()) {
        CsvWriter csv(paths.prefix + ".csv");
        const Grid g = default_projection_grid();
        csv_preamble(csv, &g, "quadrature=1e-8");
        csv.header("exponent,integral");
        for (std::size_t i = 0; i < curve.exponents.size(); ++i)
            csv.row(curve.exponents[i], curve.values[i]);
    }

    json summary{{"which", which}};
    summary["exponents"] = curve.exponents;
    summary["values"] = curve.values;
    // sign changes located by linear interpolation
    json crossings = json::array();
    for (std::size_t i = 1; i < curve.values.size(); ++i) {
        if (curve.values[i - 1] * curve.values[i] < 0.0) {
            const double t = curve.values[i - 1] /
                             (curve.values[i - 1] - curve.values[i]);
            crossings.push_back(curve.exponents[i - 1] +
                                t * (curve.exponents[i] - curve.exponents[i - 1]));
        }
    }
    summary["sign_changes"] = crossings;
    if (curve.values.size() > 2) {
        const auto it = std::min_element(curve.values.begin(), curve.values.end());
        summary["min_exponent"] = curve.exponents[it - curve.values.begin()];
        summary["min_value"] = *it;
    }
    write_json(paths, summary);
    return 0;
}

struct QuadraticFit {
    double c0, c2, c4;
};

/// Least squares of y = c0 + c2 a^2 + c4 a^4.
QuadraticFit fit_even_quadratic(std::span<const double> a, std::span<const double> y) {
    double s[5] = {0, 0, 0, 0, 0};
    double t0 = 0, t2 = 0, t4 = 0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double a2 = a[i] * a[i];
        s[0] += 1.0;
        s[1] += a2;
        s[2] += a2 * a2;
        s[3] += a2 * a2 * a2;
        s[4] += a2 * a2 * a2 * a2;
        t0 += y[i];
        t2 += y[i] * a2;
        t4 += y[i] * a2 * a2;
    }
    // 3x3 normal equations, solved by Cramer's rule
    const double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
    const double rhs[3] = {t0, t2, t4};
    auto det3 = [](const double a[3][3]) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double d = det3(m);
    double cols[3];
    for (int c = 0; c < 3; ++c) {
        double mm[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) mm[i][j] = j == c ? rhs[i] : m[i][j];
        cols[c] = det3(mm) / d;
    }
    return {cols[0], cols[1], cols[2]};
}

struct SlopeFit {
    double slope, intercept;
};

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

int cmd_branch(int j, double c, double k, double amax, int steps, bool with_classify,
               const GridOptions& gopt, const OutputPaths& paths) {
    const auto ladder = bifurcation_ladder(c, k);
    if (ladder.levels < j) throw OutOfDomain("no such pitchfork for this coupling");
    const ModelParams base(c, ladder.points[j - 1], k);
    const Grid grid = make_grid(gopt, base, true);
    BvpConfig cfg(grid);
    cfg.parity_a = j == 1 ? Parity::Even : Parity::Odd;

    std::vector<double> a_values;
    for (int i = 1; i <= steps; ++i) a_values.push_back(amax * i / steps);
    BranchOptions opts;
    opts.with_spectra = true;
    opts.with_classification = with_classify;
    const auto points = continue_branch(j, c, k, a_values, cfg, opts);
    if (points.empty()) throw NoConvergence("no branch point converged", 0.0);

    if (paths.want_csv()) {
        CsvWriter csv(paths.prefix + ".csv");
        csv_preamble(csv, &grid, "newton=" + fmt(cfg.newton_tol));
        csv.header("a,omega,Q,P,P_U,H,n_lj,z_lj,n_full,z_full,n_hat,z_hat,classification");
        for (const auto& pt : points) {
            const std::string cls =
                !pt.classification ? "-"
                : (*pt.classification == Classification::Minimizer ? "minimizer"
                                                                   : "saddle");
            csv.row(pt.a, pt.params.omega(), pt.conserved.mass, pt.conserved.momentum,
                    pt.conserved.momentum_u, pt.conserved.energy,
                    pt.lj_spectrum ? pt.lj_spectrum->morse_index : -1,
                    pt.lj_spectrum ? pt.lj_spectrum->nullity : -1,
                    pt.full_spectrum ? pt.full_spectrum->morse_index : -1,
                    pt.full_spectrum ? pt.full_spectrum->nullity : -1, pt.n_hat, pt.z_hat,
                    cls);
        }
    }

    // Asymptotic fits against the discrete bifurcation point, which removes
    // the O(h^2) offset of the assembled L2.
    const double omega_ch = discrete_bifurcation_point(j, c, k, grid);
    std::vector<double> av, ov, du, na, dom;
    const auto u0 = ExactFamily::kdv_uncoupled(base).sample(grid);
    for (const auto& pt : points) {
        av.push_back(pt.a);
        ov.push_back(pt.params.omega());
        const double d = std::abs(pt.params.omega() - omega_ch);
        if (d > 0.0) {
            dom.push_back(d);
            double dev = 0.0, amax_v = 0.0;
            for (int i = 0; i < grid.size(); ++i) {
                dev = std::max(dev, std::abs(pt.profile.U[i] - u0.U[i]));
                amax_v = std::max(amax_v, std::abs(pt.profile.A[i]));
            }
            du.push_back(dev);
            na.push_back(amax_v);
        }
    }
    const auto fit = fit_even_quadratic(av, ov);
    const auto slope_u = fit_loglog(dom, du);
    const auto slope_a = fit_loglog(dom, na);

    json summary{{"j", j},
                 {"c", c},
                 {"k", k},
                 {"omega_c", ladder.points[j - 1]},
                 {"omega_c_discrete", omega_ch},
                 {"points", static_cast<int>(points.size())},
                 {"grid", grid_json(grid)},
                 {"quad_coeff", fit.c2},
                 {"quartic_coeff", fit.c4},
                 {"slope_u_vs_domega", slope_u.slope},
                 {"slope_a_vs_domega", slope_a.slope},
                 {"delta_omega_sign", fit.c2 > 0.0 ? +1 : -1}};
    const auto& last = points.back();
    if (last.classification) {
        summary["classification"] =
            *last.classification == Classification::Minimizer ? "minimizer" : "saddle";
        summary["n_hat"] = last.n_hat;
        summary["z_hat"] = last.z_hat;
    }
    write_json(paths, summary);
    return 0;
}

int cmd_spectrum(const std::string& which, const std::string& family, double c,
                 double omega, double k, int s, double gamma, int m,
                 const GridOptions& gopt, const OutputPaths& paths) {
    DiscreteOperator op = [&] {
        if (which == "ljgamma") {
            GridOptions def = gopt;
            if (def.half_length <= 0.0) def.half_length = 40.0;
            int n = def.points > 0 ? def.points : Grid::default_points();
            if (n % 2 == 0) ++n;
            return assemble_lj_gamma(gamma, Grid(def.half_length, n));
        }
        const auto fam = parse_family(family, c, omega, k, s);
        const Grid grid = make_grid(gopt, fam.params(), family != "kdv");
        const auto profile = fam.sample(grid);
        BlockStructure block;
        if (which == "l1") block = BlockStructure::L1;
        else if (which == "l2") block = BlockStructure::L2;
        else if (which == "lj") block = BlockStructure::LJ;
        else if (which == "full") block = BlockStructure::Full;
        else throw ConfigError("unknown operator: " + which);
        return assemble(block, profile, fam.params());
    }();

    const auto report = low_spectrum(op, m);
    if (paths.want_csv()) {
        CsvWriter csv(paths.prefix + ".csv");
        csv_preamble(csv, &op.grid, "tol_zero=" + fmt(report.tol_zero));
        csv.header("index,eigenvalue");
        for (std::size_t i = 0; i < report.eigenvalues.size(); ++i)
            csv.row(static_cast<int>(i), report.eigenvalues[i]);
    }
    json summary{{"operator", which},
                 {"morse_index", report.morse_index},
                 {"nullity", report.nullity},
                 {"tol_zero", report.tol_zero},
                 {"continuum_edge", report.continuum_edge},
                 {"eigenvalues", report.eigenvalues},
                 {"grid", grid_json(op.grid)}};
    if (report.spurious_edge_note)
        summary["spurious_edge_note"] = *report.spurious_edge_note;
    write_json(paths, summary);
    return 0;
}

int cmd_stability(const std::string& family, double c, double omega, double k, int s,
                  double window_lo, double window_hi, const GridOptions& gopt,
                  const OutputPaths& paths) {
    const auto fam = parse_family(family, c, omega, k, s);
    const Grid grid = make_grid(gopt, fam.params(), family != "kdv");
    const auto profile = fam.sample(grid);
    const auto& p = fam.params();
    const StabilityOperator op(profile, p);

    double lo = window_lo, hi = window_hi;
    if (hi <= lo) {
        const auto l2 = assemble(BlockStructure::L2, profile, p);
        const auto ground = lowest_eigenpairs(l2.matrix, 1, false);
        const double omega_hat = 0.5 * std::abs(p.k() * ground.values[0]);
        lo = 0.7 * omega_hat;
        hi = 1.3 * omega_hat + 10.0 * op.band_tol();
    }
    const auto modes = neutral_modes(op, lo, hi);
    const double pairing = quadruplet_pairing_error(op, lo, hi);

    if (paths.want_csv()) {
        CsvWriter csv(paths.prefix + ".csv");
        csv_preamble(csv, &grid, "residual=1e-8");
        csv.header("re,im,krein,localized,mass,embedded,residual");
        for (const auto& mode : modes)
            csv.row(mode.lambda.real(), mode.lambda.imag(), mode.krein,
                    mode.localized ? 1 : 0, mode.localization_mass,
                    mode.embedded ? 1 : 0, mode.residual);
    }

    json summary{{"family", family},
                 {"c", p.c()},
                 {"omega", p.omega()},
                 {"k", p.k()},
                 {"window", json::array({lo, hi})},
                 {"abs_omega", op.abs_omega()},
                 {"band_tol", op.band_tol()},
                 {"pairing_error", pairing},
                 {"modes", static_cast<int>(modes.size())},
                 {"grid", grid_json(grid)}};
    const ModeReport* best = nullptr;
    for (const auto& mode : modes)
        if (mode.localized && (!best || mode.localization_mass > best->localization_mass))
            best = &mode;
    if (best) {
        summary["omega1"] = std::abs(best->lambda.imag());
        summary["krein"] = best->krein;
        summary["embedded"] = best->embedded;
    }
    write_json(paths, summary);
    return 0;
}

struct VerifyRow {
    std::string name;
    double expected, computed, tolerance;
    bool pass() const { return std::abs(expected - computed) <= tolerance; }
};

int cmd_verify(const OutputPaths& paths) {
    std::vector<VerifyRow> rows;
    auto add = [&](std::string name, double expected, double computed, double tol) {
        rows.push_back({std::move(name), expected, computed, tol});
    };

    const auto pt = poschl_teller_spectrum(12.0);
    add("T1 ground (-5)", -5.0, pt.eigenvalues[0] + 4.0, 1e-12);
    add("T1 middle (0)", 0.0, pt.eigenvalues[1] + 4.0, 1e-12);
    add("T1 top (3)", 3.0, pt.eigenvalues[2] + 4.0, 1e-12);

    const auto lad = bifurcation_ladder(1.0, 0.5);
    add("Omega_c(1, k=1/2)", -1.0, lad.points[0], 1e-12);
    add("Omega_c(2, k=1/2)", -0.25, lad.points[1], 1e-12);
    add("Omega_c(1, k=1/6)", -0.25, bifurcation_ladder(1.0, 1.0 / 6.0).points[0], 1e-12);

    add("projection(p=1)", -0.25, projection_integral(1.0), 1e-7);
    add("projection~(q=1)", 1.0 / 60.0, projection_integral_tilde(1.0), 1e-7);

    for (double c : {1.0, 4.0}) {
        const ModelParams p(c, -0.25 * c, 0.5);
        const auto prof = ExactFamily::kdv_uncoupled(p).sample(
            Grid(default_half_length(p, false), Grid::default_points()));
        add("P(KdV, c=" + fmt(c) + ")", 12.0 * std::pow(c, 1.5),
            conserved_quantities(prof, p).momentum, 1e-8 * 12.0 * std::pow(c, 1.5));
    }
    {
        const auto fam = ExactFamily::sech_bright(1.0, -0.125, +1);
        const auto prof = fam.sample(fam.default_grid());
        const auto cq = conserved_quantities(prof, fam.params());
        add("P_U(bright)", 96.0 * std::pow(0.125, 1.5), cq.momentum_u, 1e-6 * 4.24);
        add("Q(bright)", 144.0 * 0.5 * std::sqrt(0.125), cq.mass, 1e-6 * 25.5);
    }

    const auto window = instability_k_window();
    add("k_minus", (8.0 - 5.0 * std::sqrt(2.0)) / 12.0, window.k_minus, 1e-15);
    add("k_plus", (8.0 + 5.0 * std::sqrt(2.0)) / 12.0, window.k_plus, 1e-15);

    const auto d = d_matrix_exact_bright(1.0, -0.125);
    add("D11 exact bright", 0.0, d.dP_dc, 1e-15);
    add("det D < 0 (sign)", -1.0, d.det() < 0.0 ? -1.0 : 1.0, 0.5);

    add("delta-omega coeff (k=1/6)", 1.0 / 12.0,
        delta_omega_prediction(1.0, 1.0, 1.0 / 6.0, BranchKind::First), 1e-6);

    {
        const Grid eta(40.0, 20001);
        add("<L1(4)^-1 sech^2, sech^2>", -0.25, sech2_resolvent_scalar(4.0, eta), 1e-6);
        const auto gen = translational_generalized_mode(6.0, eta);
        add("mu0(gamma=6)", 8.0, gen.mu, 8.0 * 1e-3);
        add("<K z0, z0>(gamma=6)", 4.0 / 15.0 * 2.0, gen.quad_form, 1e-5);
    }

    int failures = 0;
    std::printf("%-34s %18s %18s %12s %s\n", "check", "paper", "computed", "tol", "status");
    for (const auto& row : rows) {
        const bool ok = row.pass();
        if (!ok) ++failures;
        std::printf("%-34s %18.10g %18.10g %12.2e %s\n", row.name.c_str(), row.expected,
                    row.computed, row.tolerance, ok ? "PASS" : "FAIL");
    }
    std::printf("%d/%zu checks passed\n", static_cast<int>(rows.size()) - failures,
                rows.size());

    json summary = json::array();
    for (const auto& row : rows)
        summary.push_back(json{{"name", row.name},
                               {"expected", row.expected},
                               {"computed", row.computed},
                               {"tolerance", row.tolerance},
                               {"pass", row.pass()}});
    write_json(paths, json{{"checks", summary}, {"failures", failures}});
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solitary-wave families, pitchfork bifurcations, and spectral "
                 "stability of the coupled KdV-LS system"};
    app.require_subcommand(1);

    OutputPaths paths;
    app.add_option("--out", paths.prefix, "output file prefix")->capture_default_str();
    app.add_option("--format", paths.format, "csv, json, or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();

    GridOptions gopt;
    app.add_option("--L", gopt.half_length, "grid half-length override");
    app.add_option("--N", gopt.points, "grid point count override");

    std::string family = "kdv";
    double c = 1.0, omega = -0.25, k = 0.5, gamma = 6.0;
    int s = +1, j = 1, m = 8, steps = 20;
    double amax = 0.2, lo = 0.05, hi = 4.0, step = 0.025;
    double window_lo = 0.0, window_hi = 0.0;
    std::optional<double> exponent;
    bool with_classify = false;
    std::string which = "first";

    auto* exact = app.add_subcommand("exact", "sample a closed-form family");
    exact->add_option("--family", family, "kdv, bright, or tanh")->required();
    exact->add_option("--c", c, "wave speed")->required();
    exact->add_option("--omega", omega, "frequency shift Omega");
    exact->add_option("--k", k, "coupling (kdv family only)");
    exact->add_option("--s", s, "sign parameter");

    auto* ladder = app.add_subcommand("ladder", "pitchfork bifurcation points");
    ladder->add_option("--c", c, "wave speed")->required();
    ladder->add_option("--k", k, "coupling")->required();

    auto* projection = app.add_subcommand("projection", "projection-integral sweep");
    projection->add_option("--which", which, "first or second")->required();
    projection->add_option("--p,--exponent", exponent, "single exponent");
    projection->add_option("--lo", lo, "sweep start")->capture_default_str();
    projection->add_option("--hi", hi, "sweep end")->capture_default_str();
    projection->add_option("--step", step, "sweep step")->capture_default_str();

    auto* branch = app.add_subcommand("branch", "continue a bifurcating family");
    branch->add_option("--j", j, "pitchfork index (1 or 2)")->required();
    branch->add_option("--c", c, "wave speed")->required();
    branch->add_option("--k", k, "coupling")->required();
    branch->add_option("--amax", amax, "largest amplitude")->capture_default_str();
    branch->add_option("--steps", steps, "number of amplitudes")->capture_default_str();
    branch->add_flag("--classify", with_classify, "constrained classification per point");

    auto* spectrum = app.add_subcommand("spectrum", "low spectrum of a Hessian block");
    spectrum->add_option("--which", which, "l1, l2, lj, full, or ljgamma")->required();
    spectrum->add_option("--family", family, "profile family");
    spectrum->add_option("--c", c, "wave speed");
    spectrum->add_option("--omega", omega, "frequency shift Omega");
    spectrum->add_option("--k", k, "coupling");
    spectrum->add_option("--s", s, "sign parameter");
    spectrum->add_option("--gamma", gamma, "normalized-block parameter");
    spectrum->add_option("--m", m, "eigenvalue count")->capture_default_str();

    auto* stability = app.add_subcommand("stability", "neutral modes of J L");
    stability->add_option("--family", family, "profile family");
    stability->add_option("--c", c, "wave speed")->required();
    stability->add_option("--omega", omega, "frequency shift Omega")->required();
    stability->add_option("--k", k, "coupling")->required();
    stability->add_option("--s", s, "sign parameter");
    stability->add_option("--window-lo", window_lo, "window lower Im bound");
    stability->add_option("--window-hi", window_hi, "window upper Im bound");

    auto* verify = app.add_subcommand("verify", "regression table of closed-form values");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (exact->parsed()) {
            if (family == "kdv" && !exact->count("--omega")) omega = -0.25 * c;
            return cmd_exact(family, c, omega, k, s, gopt, paths);
        }
        if (ladder->parsed()) return cmd_ladder(c, k, paths);
        if (projection->parsed())
            return cmd_projection(which, exponent, lo, hi, step, paths);
        if (branch->parsed())
            return cmd_branch(j, c, k, amax, steps, with_classify, gopt, paths);
        if (spectrum->parsed())
            return cmd_spectrum(which, family, c, omega, k, s, gamma, m, gopt, paths);
        if (stability->parsed())
            return cmd_stability(family, c, omega, k, s, window_lo, window_hi, gopt,
                                 paths);
        if (verify->parsed()) return cmd_verify(paths);
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
