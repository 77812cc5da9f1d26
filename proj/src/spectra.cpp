#include "kdvls/spectra.hpp"

#include <algorithm>
#include <cmath>

namespace kdvls {

namespace {

// Floating-point floor is unreliable exactly at integers, so resonance uses
// an explicit near-integer test.
constexpr double resonance_tol = 1e-12;

} // namespace

PTSpectrum poschl_teller_spectrum(double gamma) {
    if (!(gamma > 0.0))
        throw OutOfDomain("Poschl-Teller spectrum needs gamma > 0");
    const double nu = 0.5 * (std::sqrt(1.0 + 4.0 * gamma) - 1.0);
    const double rounded = std::round(nu);
    const bool resonance = std::abs(nu - rounded) < resonance_tol * std::max(1.0, nu);

    PTSpectrum spectrum{gamma, {}, resonance};
    const int n_top = resonance ? static_cast<int>(rounded) - 1
                                : static_cast<int>(std::floor(nu));
    for (int n = 0; n <= n_top; ++n) {
        const double level = nu - n;
        spectrum.eigenvalues.push_back(-level * level);
    }
    std::sort(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end());
    return spectrum;
}

BifurcationLadder bifurcation_ladder(double c, double k) {
    if (!(c > 0.0))
        throw DomainError("bifurcation ladder needs c > 0");
    if (!(k > 0.0))
        throw NoBifurcations("no pitchfork points for k <= 0");
    const double t = std::sqrt(1.0 + 48.0 * k);
    BifurcationLadder ladder{c, k, 0, {}, {}};
    int j = 1;
    while (k > j * (j - 1) / 12.0) {
        const double e = 0.5 * (t - 2.0 * j + 1.0);
        ladder.points.push_back(-c / 16.0 * (t - 2.0 * j + 1.0) * (t - 2.0 * j + 1.0));
        ladder.exponents.push_back(e);
        ++j;
    }
    ladder.levels = static_cast<int>(ladder.points.size());
    return ladder;
}

double p_of(double k) {
    if (!(k > 0.0)) throw OutOfDomain("p(k) needs k > 0");
    return 0.5 * (std::sqrt(1.0 + 48.0 * k) - 1.0);
}

double q_of(double k) {
    if (!(k > 1.0 / 6.0)) throw OutOfDomain("q(k) needs k > 1/6");
    return 0.5 * (std::sqrt(1.0 + 48.0 * k) - 3.0);
}

double mode_g(double c, double k, double xi) {
    const double p = p_of(k);
    return std::pow(1.0 / std::cosh(0.5 * std::sqrt(c) * xi), p);
}

double mode_gtilde(double c, double k, double xi) {
    const double q = q_of(k);
    const double z = 0.5 * std::sqrt(c) * xi;
    return std::pow(1.0 / std::cosh(z), q) * std::tanh(z);
}

KWindow instability_k_window() {
    const double r = 5.0 * std::sqrt(2.0);
    return {(8.0 - r) / 12.0, (8.0 + r) / 12.0};
}

} // namespace kdvls
