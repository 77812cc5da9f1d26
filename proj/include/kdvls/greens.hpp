#pragma once

#include <vector>

#include "kdvls/grid.hpp"

namespace kdvls {

enum class BranchKind { First, Second };

/// Homogeneous solutions of -W'' + 4W - 12 sech^2(y) W = 0, normalized so the
/// Wronskian W1 W2' - W1' W2 equals 1.  W1 is odd and decaying, W2 even and
/// growing like e^{2|y|}.
struct HomogeneousPair {
    double w1;
    double w2;
};

HomogeneousPair homogeneous_pair(double y);

/// Default quadrature grid for the projection machinery: y in [-40, 40].
/// The fine spacing keeps the stencil defect of the computed W below 1e-6
/// and the p = 1 quadratures below 1e-8.
Grid default_projection_grid();

/// Even decaying solution of -W'' + 4W - 12 sech^2(y) W = sech^{2p}(y)
/// by variation of parameters,
///   W(y) = W1(y) int_0^y W2 g^2 - W2(y) int_{-inf}^y W1 g^2.
/// The second integral is evaluated in tail form for y > 0 (the full-line
/// integral vanishes by parity), which avoids the e^{2|y|} blow-up of W2
/// against a cancelling integral.
std::vector<double> solve_w(double p, const Grid& ygrid);

/// Same with right-hand side sech^{2q}(y) tanh^2(y).
std::vector<double> solve_w_tilde(double q, const Grid& ygrid);

/// int g^2 W dy with g = sech^p, equal to (c^{3/2}/8) <g^2, L1^{-1} g^2>.
double projection_integral(double p, const Grid& ygrid);
double projection_integral(double p);

/// int g~^2 W~ dy with g~ = sech^q tanh.
double projection_integral_tilde(double q, const Grid& ygrid);
double projection_integral_tilde(double q);

struct ProjectionCurve {
    BranchKind which;
    std::vector<double> exponents;
    std::vector<double> values;
};

/// Sweep of the projection integral over an exponent range (inclusive ends).
ProjectionCurve projection_curve(BranchKind which, double lo, double hi, double step);

/// Leading-order frequency shift along the bifurcating branch,
/// delta Omega = -k a^2 <g^2, L1^{-1} g^2> / ||g||^2 = -(4 k a^2 / c) I / S
/// with I the projection integral and S = int g^2 dy.
double delta_omega_prediction(double a, double c, double k, BranchKind which);

/// int sech^{2p}(y) tanh^{2m}(y) dy on the default grid (m = 0 or 1).
double sech_power_moment(double two_p, int tanh_power = 0);

} // namespace kdvls
