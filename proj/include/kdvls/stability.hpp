#pragma once

#include <complex>
#include <vector>

#include "kdvls/discretize.hpp"
#include "kdvls/model.hpp"

namespace kdvls {

/// Linearized-flow operator J L on the interior nodes: J carries the exactly
/// skew central-difference d/dxi in the KdV slot and the k/(2s) rotation
/// between the two Schrodinger slots; L is the symmetric Hessian.
class StabilityOperator {
public:
    StabilityOperator(const WaveProfile& profile, const ModelParams& p);

    int size() const { return n_; }                  // 3 * interior nodes
    const Grid& grid() const { return grid_; }
    double abs_omega() const { return abs_omega_; }  // LS band edge |Omega|
    double band_tol() const { return band_tol_; }

    /// y = (J L) x for real x.
    std::vector<double> apply(std::span<const double> x) const;

    /// Quadratic form <L x, x> (the Krein form) for a complex vector.
    double hessian_form(std::span<const std::complex<double>> x) const;

    /// Complex banded factorization of (J L - sigma I).
    ComplexBanded shifted(std::complex<double> sigma) const;

    /// Dense diagonal block of J L for one component; meaningful when the
    /// profile is uncoupled (A = 0) and the blocks decouple.  Column-major.
    std::vector<double> block_dense(int component) const;

    /// Fraction of |x|^2 mass inside |xi| <= half_length/2 (components stacked).
    double localized_mass(std::span<const std::complex<double>> x) const;

private:
    Grid grid_;
    int n_int_, n_;
    int kl_, ku_;
    double abs_omega_, band_tol_;
    SymmetricBanded hess_;
    GeneralBanded jl_;
};

StabilityOperator build_stability(const WaveProfile& profile, const ModelParams& p);

struct ModeReport {
    std::complex<double> lambda;
    std::vector<std::complex<double>> vec;
    int krein;              // sign of <L v, v>; 0 within tolerance
    bool embedded;          // |Im lambda| >= |Omega| - band_tol, near the axis
    bool localized;
    double localization_mass;
    double residual;
};

/// Eigenvalues of J L with Im(lambda) inside [omega_lo, omega_hi], computed by
/// shift-inverted Arnoldi around the window center.  Quasi-continuum modes are
/// separated from genuine eigenfunctions by the localization test.
std::vector<ModeReport> neutral_modes(const StabilityOperator& op, double omega_lo,
                                      double omega_hi, int krylov = 80);

/// Largest pairing defect max_i min_j |lambda_i + lambda_j| between a window
/// and its mirror, a direct check of the lambda -> -lambda symmetry.
double quadruplet_pairing_error(const StabilityOperator& op, double omega_lo,
                                double omega_hi, int krylov = 80);

/// Looks for the L2-ground-state pair at Omega = Omega_c^{(2)}(k) on the
/// uncoupled soliton and reports whether it is an embedded negative-Krein pair.
struct EmbeddedPairScan {
    bool present;   // embedded and krein == -1
    double omega1;  // |Im lambda| of the localized pair
    int krein;
    bool embedded;
};

EmbeddedPairScan detect_embedded_pair(double c, double k,
                                      int grid_n = Grid::default_points());

/// Bisection for the k at which the embedded flag flips inside [k_lo, k_hi]
/// (the bracket must straddle a flip).
double scan_window_endpoint(double c, double k_lo, double k_hi, double k_tol,
                            int grid_n = Grid::default_points());

} // namespace kdvls
