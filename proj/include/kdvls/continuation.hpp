#pragma once

#include <optional>
#include <vector>

#include "kdvls/discretize.hpp"
#include "kdvls/greens.hpp"
#include "kdvls/model.hpp"

namespace kdvls {

/// Newton settings for the traveling-wave boundary-value solves.  Profiles are
/// computed on the half line with the center condition set by parity (U is
/// always even; A even or odd), which pins translations, and mirrored back.
struct BvpConfig {
    Grid grid;
    double newton_tol = 1e-10;
    int max_iter = 50;
    double damping = 1.0;
    Parity parity_a = Parity::Even;

    explicit BvpConfig(Grid g) : grid(g) {
        if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
    }
};

struct ProfileSolve {
    WaveProfile profile;
    int iterations;
    std::vector<double> residual_history; // infinity norms, one per iteration
    bool trivial_branch;                  // converged to A == 0
};

/// Newton iteration for the profile equations at fixed parameters.  The
/// Jacobian is the L_J block assembled on the parity-restricted half grid.
ProfileSolve solve_profile(const ModelParams& p, const WaveProfile& initial,
                           const BvpConfig& cfg);

enum class Classification { Minimizer, Saddle };

/// One point of a bifurcating family, parameterized by the amplitude
/// a = <g_j, A> / ||g_j||^2.
struct BranchPoint {
    double a;
    ModelParams params; // Omega solved by the augmented system
    WaveProfile profile;
    ConservedQuantities conserved;
    std::optional<SpectrumReport> lj_spectrum;
    std::optional<SpectrumReport> full_spectrum;
    std::optional<DMatrix> d_matrix;
    std::optional<Classification> classification;
    int n_hat = -1;
    int z_hat = -1;
};

struct BranchOptions {
    bool with_spectra = true;
    bool with_classification = false; // implies spectra; adds four BVP re-solves
};

/// Amplitude-parameterized continuation from the j-th pitchfork point.  For
/// each requested amplitude the augmented system {profile equations,
/// <g_j, A> = a ||g_j||^2} is solved for (U, A, Omega); the first predictor
/// uses the explicit reduction terms, later ones secant extrapolation.
/// Stops at the first non-converged amplitude, returning the completed prefix.
std::vector<BranchPoint> continue_branch(int j, double c, double k,
                                         std::span<const double> a_values,
                                         const BvpConfig& cfg,
                                         const BranchOptions& opts = {});

/// Central-difference D matrix at a branch point: four fixed-Omega (or
/// fixed-c) re-solves seeded from the point's profile.  Steps are
/// 1e-4 * c and 1e-4 * |Omega|.
DMatrix d_matrix_numeric(const BranchPoint& point, const BvpConfig& cfg);

struct ClassificationResult {
    Classification cls;
    int n_hat;
    int z_hat;
};

/// Constrained classification from the full-Hessian counts and the D matrix;
/// a point is a minimizer exactly when the corrected Morse count vanishes.
ClassificationResult classify(const SpectrumReport& full_spectrum, const DMatrix& d);

/// P-constrained counts of the uncoupled soliton (mass plays no role on the
/// A = 0 branch).  Returns the unconstrained Morse count of the full Hessian
/// and the momentum-constrained classification.
struct UncoupledClassification {
    int n_unconstrained;
    int n_hat;
    int z_hat;
    Classification cls;
};

UncoupledClassification classify_uncoupled(const ModelParams& p, int grid_n = Grid::default_points());

struct MorseCheck {
    double lambda_measured;  // near-zero eigenvalue of L_J, translational excluded
    double lambda_predicted; // a^2 lambda^(2) from the projection integral
};

MorseCheck morse_perturbation_check(int j, double c, double k, double a,
                                    const BvpConfig& cfg);

/// Discrete bifurcation point of the assembled L2: the Omega at which its
/// j-th eigenvalue crosses zero (exactly linear in Omega, so one eigensolve
/// suffices).  Used to remove the O(h^2) offset from asymptotic fits.
double discrete_bifurcation_point(int j, double c, double k, const Grid& grid);

} // namespace kdvls
