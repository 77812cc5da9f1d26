#pragma once

#include <vector>

#include "kdvls/errors.hpp"

namespace kdvls {

/// Bound states of T = -d^2/dx^2 - gamma sech^2(x).
struct PTSpectrum {
    double gamma;
    std::vector<double> eigenvalues; // ascending, strictly negative
    bool resonance_at_zero;          // nu = (sqrt(1+4 gamma)-1)/2 is an integer
};

PTSpectrum poschl_teller_spectrum(double gamma);

/// The sequence Omega_c^{(j)} = -(c/16)(sqrt(1+48k) - 2j + 1)^2 of pitchfork
/// points on the uncoupled-soliton branch, j = 1..J with J the largest
/// integer satisfying k > J(J-1)/12.
struct BifurcationLadder {
    double c;
    double k;
    int levels;                     // J
    std::vector<double> points;     // Omega_c^{(j)}, increasing toward 0
    std::vector<double> exponents;  // mode exponents, (sqrt(1+48k) - 2j + 1)/2
};

BifurcationLadder bifurcation_ladder(double c, double k);

/// Mode exponents of the kernel eigenfunctions.
double p_of(double k); // (sqrt(1+48k) - 1)/2, needs k > 0
double q_of(double k); // (sqrt(1+48k) - 3)/2, needs k > 1/6 for decay

/// Kernel eigenfunction of L2 at the first bifurcation point,
/// g = sech^p(sqrt(c) xi / 2).
double mode_g(double c, double k, double xi);

/// Kernel eigenfunction at the second bifurcation point,
/// g~ = sech^q(sqrt(c) xi / 2) tanh(sqrt(c) xi / 2).
double mode_gtilde(double c, double k, double xi);

/// Coupling window (k-, k+) = ((8 -+ 5 sqrt 2)/12) inside which the neutral
/// pair at the second bifurcation is embedded in the continuous spectrum.
struct KWindow {
    double k_minus;
    double k_plus;
};

KWindow instability_k_window();

} // namespace kdvls
