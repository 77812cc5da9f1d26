#include "kdvls/greens.hpp"

#include <cmath>
#include <functional>

#include "kdvls/spectra.hpp"

namespace kdvls {

namespace {

double sech(double y) { return 1.0 / std::cosh(y); }

/// Core of the variation-of-parameters construction.  rhs must be even.
/// Works on the right half [0, L] and mirrors, so the parity of the result
/// is exact by construction.
std::vector<double> solve_inhomogeneous(const Grid& ygrid,
                                        const std::function<double(double)>& rhs) {
    const int n = ygrid.size();
    const int c0 = ygrid.center_index();
    const int m = ygrid.half_size();
    const double h = ygrid.spacing();

    std::vector<double> w1(m), w2(m), f(m);
    for (int i = 0; i < m; ++i) {
        const double y = ygrid.node(c0 + i);
        const auto hp = homogeneous_pair(y);
        w1[i] = hp.w1;
        w2[i] = hp.w2;
        f[i] = rhs(y);
    }

    // F(y) = int_0^y W2 rhs, odd continuation of an even integrand.
    std::vector<double> w2f(m);
    for (int i = 0; i < m; ++i) w2f[i] = w2[i] * f[i];
    const auto F = cumulative_simpson(h, w2f);

    // T(y) = int_{-inf}^y W1 rhs = -int_y^{inf} W1 rhs for y >= 0; the
    // reverse cumulative integral of a decaying single-signed tail.
    std::vector<double> w1f_rev(m);
    for (int i = 0; i < m; ++i) w1f_rev[i] = w1[m - 1 - i] * f[m - 1 - i];
    const auto R_rev = cumulative_simpson(h, w1f_rev);

    std::vector<double> half(m);
    for (int i = 0; i < m; ++i) {
        const double T = -R_rev[m - 1 - i]; // -int_y^L W1 rhs
        half[i] = w1[i] * F[i] - w2[i] * T;
    }

    std::vector<double> result(n);
    for (int i = 0; i < m; ++i) {
        result[c0 + i] = half[i];
        result[c0 - i] = half[i];
    }
    return result;
}

} // namespace

HomogeneousPair homogeneous_pair(double y) {
    const double s = sech(y);
    const double t = std::tanh(y);
    const double w1 = t * s * s;
    const double w2 = 5.0 / 8.0 + 0.25 * std::cosh(y) * std::cosh(y) +
                      15.0 / 8.0 * s * s * (y * t - 1.0);
    return {w1, w2};
}

Grid default_projection_grid() {
    static const Grid g(40.0, 80001);
    return g;
}

std::vector<double> solve_w(double p, const Grid& ygrid) {
    if (!(p > 0.0)) throw OutOfDomain("solve_w needs exponent p > 0");
    return solve_inhomogeneous(ygrid, [p](double y) { return std::pow(sech(y), 2.0 * p); });
}

std::vector<double> solve_w_tilde(double q, const Grid& ygrid) {
    if (!(q > 0.0)) throw OutOfDomain("solve_w_tilde needs exponent q > 0");
    return solve_inhomogeneous(ygrid, [q](double y) {
        const double t = std::tanh(y);
        return std::pow(sech(y), 2.0 * q) * t * t;
    });
}

double projection_integral(double p, const Grid& ygrid) {
    const auto W = solve_w(p, ygrid);
    std::vector<double> integrand(ygrid.size());
    for (int i = 0; i < ygrid.size(); ++i)
        integrand[i] = std::pow(sech(ygrid.node(i)), 2.0 * p) * W[i];
    return simpson(ygrid, integrand);
}

double projection_integral(double p) { return projection_integral(p, default_projection_grid()); }

double projection_integral_tilde(double q, const Grid& ygrid) {
    const auto W = solve_w_tilde(q, ygrid);
    std::vector<double> integrand(ygrid.size());
    for (int i = 0; i < ygrid.size(); ++i) {
        const double t = std::tanh(ygrid.node(i));
        integrand[i] = std::pow(sech(ygrid.node(i)), 2.0 * q) * t * t * W[i];
    }
    return simpson(ygrid, integrand);
}

double projection_integral_tilde(double q) {
    return projection_integral_tilde(q, default_projection_grid());
}

ProjectionCurve projection_curve(BranchKind which, double lo, double hi, double step) {
    if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0))
        throw OutOfDomain("projection sweep needs 0 < lo <= hi and step > 0");
    ProjectionCurve curve{which, {}, {}};
    const Grid grid = default_projection_grid();
    // Each exponent is evaluated independently of the others, so a concurrent
    // sweep is bitwise identical to this sequential one.
    for (double e = lo; e <= hi + 0.5 * step; e += step) {
        curve.exponents.push_back(e);
        curve.values.push_back(which == BranchKind::First ? projection_integral(e, grid)
                                                          : projection_integral_tilde(e, grid));
    }
    return curve;
}

double sech_power_moment(double two_p, int tanh_power) {
    const Grid grid = default_projection_grid();
    std::vector<double> f(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double t = std::tanh(grid.node(i));
        double v = std::pow(sech(grid.node(i)), two_p);
        for (int j = 0; j < tanh_power; ++j) v *= t * t;
        f[i] = v;
    }
    return simpson(grid, f);
}

double delta_omega_prediction(double a, double c, double k, BranchKind which) {
    if (!(c > 0.0)) throw OutOfDomain("delta_omega_prediction needs c > 0");
    double integral, norm;
    if (which == BranchKind::First) {
        const double p = p_of(k);
        integral = projection_integral(p);
        norm = sech_power_moment(2.0 * p);
    } else {
        const double q = q_of(k);
        integral = projection_integral_tilde(q);
        norm = sech_power_moment(2.0 * q, 1);
    }
    return -4.0 * k * a * a * integral / (c * norm);
}

} // namespace kdvls
