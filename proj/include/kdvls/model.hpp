#pragma once

#include <utility>
#include <vector>

#include "kdvls/grid.hpp"

namespace kdvls {

/// Coefficients of the unnormalized long-wave/short-wave system.
struct PhysicalCoefficients {
    double alpha;
    double beta;
    double gamma;
    double kappa;
    double sigma;
};

struct Coupling {
    double k;
    int s; // +1 or -1
};

/// k = sigma*beta/(alpha*kappa), s = sgn(alpha*gamma).
Coupling normalize_coefficients(const PhysicalCoefficients& pc);

/// The parameter tuple (c, Omega, k, s) every profile and operator is indexed
/// by.  Omega = omega + c^2/4 is the shifted frequency.  The checked
/// constructor enforces s = sgn(k), which keeps the continuous spectrum of the
/// Hessian positive; relaxed() skips that pairing for the integrable-family
/// regimes (k = 1 with s = -1) where only the ODE and its invariants are used.
class ModelParams {
public:
    ModelParams(double c, double omega, double k);
    static ModelParams relaxed(double c, double omega, double k, int s);

    double c() const { return c_; }
    double omega() const { return omega_; }
    double k() const { return k_; }
    int s() const { return s_; }

    /// Frequency of the carrier oscillation, omega_lab = Omega - c^2/4.
    double lab_frequency() const { return omega_ - c_ * c_ / 4.0; }

    bool sign_paired() const { return (k_ > 0.0) == (s_ > 0); }

private:
    ModelParams(double c, double omega, double k, int s, bool check_pairing);
    double c_, omega_, k_;
    int s_;
};

enum class Family { KdvUncoupled, SechBright, SechTanh };

enum class Parity { Even, Odd, Zero };

/// Sampled traveling-wave pair (U, A) with declared parities and the max-norm
/// of the profile equations' stencil residual.
struct WaveProfile {
    Grid grid;
    std::vector<double> U;
    std::vector<double> A;
    Parity parity_u = Parity::Even;
    Parity parity_a = Parity::Even;
    double residual_norm = 0.0;
};

/// One of the three closed-form solitary-wave families.  Construction checks
/// the family constraints; the amplitude factor may vanish (bifurcation-point
/// limit) but a negative radicand is rejected.
class ExactFamily {
public:
    static ExactFamily kdv_uncoupled(const ModelParams& p);
    static ExactFamily sech_bright(double c, double omega, int s);
    static ExactFamily sech_tanh(double c, double omega, int s);

    Family family() const { return family_; }
    const ModelParams& params() const { return params_; }

    /// Closed-form (U, A) at xi; the point of symmetry sits at xi = 0.
    std::pair<double, double> eval(double xi) const;

    WaveProfile sample(const Grid& grid) const;

    /// Grid with the default resolution and the half-length rule
    /// L = 40/sqrt(c), widened to 40/sqrt(|Omega|) when |Omega| < c.
    Grid default_grid(int n_points = Grid::default_points()) const;

private:
    ExactFamily(Family f, ModelParams p) : family_(f), params_(std::move(p)) {}
    Family family_;
    ModelParams params_;
};

/// Half-length rule shared by profile-bearing grids.
double default_half_length(const ModelParams& p, bool omega_scaled);

struct OdeResidual {
    std::vector<double> rU;
    std::vector<double> rA;
    double norm;
};

/// Stencil residual of U'' - cU + U^2/2 + sA^2 and A'' + (Omega + kU)A.
OdeResidual residual_ode(const WaveProfile& profile, const ModelParams& p);

/// Pointwise first invariant
/// H = (U')^2/2 - cU^2/2 + U^3/6 + (s/k)(A')^2 + sUA^2 + (Omega s/k)A^2,
/// constant along solutions.
std::vector<double> first_invariant(const WaveProfile& profile, const ModelParams& p);

/// Second invariant of the integrable k = 1/6 case.
std::vector<double> second_invariant_melnikov(const WaveProfile& profile, const ModelParams& p);

/// Second invariant of the integrable k = 1, Omega = -c, s = -1 case.
std::vector<double> second_invariant_k1(const WaveProfile& profile, const ModelParams& p);

struct ConservedQuantities {
    double mass;        // Q = (s/k) int A^2
    double momentum;    // P = int U^2 / 2 - (cs/2k) int A^2
    double momentum_u;  // KdV part alone, int U^2 / 2
    double energy;      // H with the carrier substitution
    bool truncation_warning;
    double boundary_max;
};

ConservedQuantities conserved_quantities(const WaveProfile& profile, const ModelParams& p);

/// Max |f(L)|, |f(-L)| above which conserved-quantity quadratures flag truncation.
inline constexpr double truncation_threshold = 1e-10;

} // namespace kdvls
