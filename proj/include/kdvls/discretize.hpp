#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kdvls/banded.hpp"
#include "kdvls/grid.hpp"
#include "kdvls/model.hpp"

namespace kdvls {

enum class BlockStructure { L1, L2, LJ, Full, LJGamma };

/// Finite-difference operator on the interior nodes of a grid (Dirichlet ends
/// eliminated), components interleaved per node, symmetric banded storage.
struct DiscreteOperator {
    BlockStructure which;
    SymmetricBanded matrix;
    Grid grid;
    int components;
    double edge_l1;          // continuous-spectrum edge of the first block
    double edge_l2;          // edge of the L2-type blocks
    double potential_scale;  // max |potential diagonal|, used by tol_zero

    int interior() const { return grid.size() - 2; }
    double edge() const { return edge_l1 < edge_l2 ? edge_l1 : edge_l2; }
};

/// Second-order central-difference assembly of L1, L2, the 2x2 block L_J, or
/// the full 3x3 Hessian at a profile.  Requires s = sgn(k).
DiscreteOperator assemble(BlockStructure which, const WaveProfile& profile,
                          const ModelParams& p);

/// The |Omega|-normalized Hessian block of the bright family,
/// L_J(gamma) on the eta grid; needs gamma > 4.
DiscreteOperator assemble_lj_gamma(double gamma, const Grid& eta_grid);

/// Scalar Schrodinger operator -d^2/dx^2 + V with V sampled on the full grid.
DiscreteOperator assemble_schrodinger(const Grid& grid, std::span<const double> potential,
                                      double edge);

/// Zero-classification half-width for a discretized operator; tracks the
/// O(h^2) shift of exact kernel eigenvalues.
double tol_zero_for(const DiscreteOperator& op);

struct SpectrumReport {
    std::vector<double> eigenvalues; // ascending, the m lowest
    int morse_index;                 // count < -tol_zero
    int nullity;                     // count within [-tol_zero, tol_zero]
    double tol_zero;
    double continuum_edge;
    std::optional<double> spurious_edge_note; // lowest eigenvalue at/above the edge
};

SpectrumReport low_spectrum(const DiscreteOperator& op, int m = 8);
SpectrumReport low_spectrum(const DiscreteOperator& op, int m, double tol_zero);

/// As low_spectrum but also returns eigenvectors on the interior nodes.
BandedEigenResult low_eigenpairs(const DiscreteOperator& op, int m);

/// Residual norm ||A v|| / ||v|| for a full-grid candidate kernel vector
/// (components stacked per node in assembly order).
double kernel_residual(const DiscreteOperator& op, std::span<const double> full_vector);

/// Banded LU solve A x = b with b given on interior nodes.
std::vector<double> solve_linear(const DiscreteOperator& op, std::span<const double> rhs);

/// Restriction of a full-grid per-component sample to interleaved interior values.
std::vector<double> interleave_interior(const DiscreteOperator& op,
                                        std::span<const std::vector<double>> components);

/// 2x2 matrix of conserved-quantity derivatives along a two-parameter family,
/// with the positive/zero eigenvalue counts of its symmetrization.
struct DMatrix {
    double dP_dc;
    double dP_dabs_omega;
    double dQ_dc;
    double dQ_dabs_omega;
    int p0;
    int z0;

    double det() const { return dP_dc * dQ_dabs_omega - dP_dabs_omega * dQ_dc; }
    std::array<double, 2> symmetric_eigenvalues() const;
};

/// Populate p0/z0 from the symmetrized entries.  zero_tol is relative to the
/// matrix scale.
DMatrix make_d_matrix(double dP_dc, double dP_dabs_omega, double dQ_dc,
                      double dQ_dabs_omega, double zero_tol = 1e-9);

/// Closed-form D along the k = 1/6 bright family (Omega in (-c/4, 0)).
DMatrix d_matrix_exact_bright(double c, double omega);

struct ConstrainedCounts {
    int n_hat;
    int z_hat;
};

/// Constrained Morse/nullity counts, n^ = n - p0 - z0 and z^ = z + z0.
ConstrainedCounts constrained_index(const SpectrumReport& report, const DMatrix& d);

/// Solve (-d^2 + V) x = rhs for even V, rhs on a symmetric grid, restricted to
/// the even subspace (Neumann at 0, Dirichlet at L); returns x on the full grid.
std::vector<double> invert_schrodinger_even(const Grid& grid,
                                            std::span<const double> potential,
                                            std::span<const double> rhs);

/// <L1(gamma)^{-1} sech^2, sech^2> on the eta grid (even-restricted solve);
/// equals -1/4 at gamma = 4 and decreases on (4, 9).
double sech2_resolvent_scalar(double gamma, const Grid& eta_grid);

/// Translational eigenvalue mu0 of L2 z = mu K z, K = sech L1(gamma)^{-1} sech,
/// solved by shift-inverted iteration, plus the quadratic form <K z0, z0> at
/// the closed-form mode z0 = (gamma-4) tanh sech.
struct GeneralizedModeResult {
    double mu;
    double quad_form;
    int iterations;
};

GeneralizedModeResult translational_generalized_mode(double gamma, const Grid& eta_grid,
                                                     double mu_guess = 0.0);

} // namespace kdvls
