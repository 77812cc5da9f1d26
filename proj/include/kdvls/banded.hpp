#pragma once

// Banded linear algebra used by the discretized operators: symmetric banded
// storage with a bisection/inverse-iteration eigensolver (dsbevx) and banded
// LU solves (dgbtrf/zgbtrf) for Newton steps and shift-inverted iterations.

#include <complex>
#include <span>
#include <vector>

#include "kdvls/errors.hpp"

namespace kdvls {

/// Symmetric banded matrix in LAPACK lower storage: ab(kd+1, n) column-major,
/// ab[j*(kd+1) + (i-j)] = A(i,j) for j <= i <= min(n-1, j+kd).
class SymmetricBanded {
public:
    SymmetricBanded(int n, int kd)
        : n_(n), kd_(kd), ab_((kd + 1) * static_cast<std::size_t>(n), 0.0) {}

    int size() const { return n_; }
    int bandwidth() const { return kd_; }

    double& at(int i, int j) {
        if (i < j) std::swap(i, j);
        return ab_[static_cast<std::size_t>(j) * (kd_ + 1) + (i - j)];
    }
    double at(int i, int j) const {
        if (i < j) std::swap(i, j);
        return ab_[static_cast<std::size_t>(j) * (kd_ + 1) + (i - j)];
    }
    void add(int i, int j, double v) { at(i, j) += v; }

    std::vector<double> apply(std::span<const double> x) const;

    const std::vector<double>& storage() const { return ab_; }

private:
    int n_, kd_;
    std::vector<double> ab_;
};

struct BandedEigenResult {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> vectors; // empty unless requested
};

/// Lowest m eigenvalues (optionally eigenvectors) of a symmetric banded matrix.
BandedEigenResult lowest_eigenpairs(const SymmetricBanded& a, int m, bool want_vectors);

/// General banded matrix with LU factorization (kl extra rows reserved for fill).
class GeneralBanded {
public:
    GeneralBanded(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
          ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

    int size() const { return n_; }
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }
    double& at(int i, int j) {
        return ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j];
    }
    double get(int i, int j) const {
        return ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j];
    }
    void add(int i, int j, double v) { at(i, j) += v; }

    void factor();
    void solve(std::span<double> rhs) const; // in place
    bool factored() const { return factored_; }

private:
    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;
    std::vector<int> ipiv_;
    bool factored_ = false;
};

/// Complex banded LU, used for shift-inverted nonsymmetric eigensolves.
class ComplexBanded {
public:
    using cd = std::complex<double>;

    ComplexBanded(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
          ab_(static_cast<std::size_t>(ldab_) * n, cd(0.0, 0.0)) {}

    int size() const { return n_; }
    cd& at(int i, int j) {
        return ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j];
    }
    void add(int i, int j, cd v) { at(i, j) += v; }

    void factor();
    void solve(std::span<cd> rhs) const;

private:
    int n_, kl_, ku_, ldab_;
    std::vector<cd> ab_;
    std::vector<int> ipiv_;
    bool factored_ = false;
};

/// Eigen-decomposition of a small dense complex matrix (column-major, destroyed).
void dense_complex_eig(std::vector<std::complex<double>>& a, int n,
                       std::vector<std::complex<double>>& values,
                       std::vector<std::complex<double>>& vectors);

} // namespace kdvls
