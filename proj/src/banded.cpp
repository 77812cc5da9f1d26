#include "kdvls/banded.hpp"

#include <algorithm>
#include <cmath>

#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#include <lapacke.h>

static_assert(sizeof(lapack_int) == sizeof(int), "expected 32-bit LAPACK integers");

namespace kdvls {

std::vector<double> SymmetricBanded::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw ShapeError("banded apply: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        const int imax = std::min(n_ - 1, j + kd_);
        y[j] += ab_[static_cast<std::size_t>(j) * (kd_ + 1)] * x[j];
        for (int i = j + 1; i <= imax; ++i) {
            const double v = ab_[static_cast<std::size_t>(j) * (kd_ + 1) + (i - j)];
            y[i] += v * x[j];
            y[j] += v * x[i];
        }
    }
    return y;
}

namespace {

/// Eigenvector for a computed eigenvalue by shifted inverse iteration on the
/// banded matrix, orthogonalized against already-accepted vectors so that
/// degenerate clusters come out as an orthogonal set.
std::vector<double> inverse_iteration_vector(
    const SymmetricBanded& a, double value,
    const std::vector<std::vector<double>>& previous) {
    const int n = a.size();
    const int kd = a.bandwidth();
    const double shift = value + 1e-7 * std::max(1.0, std::abs(value));

    GeneralBanded lu(n, kd, kd);
    for (int j = 0; j < n; ++j) {
        for (int i = std::max(0, j - kd); i <= std::min(n - 1, j + kd); ++i)
            lu.at(i, j) = a.at(i, j);
        lu.at(j, j) -= shift;
    }
    lu.factor();

    std::vector<double> v(n);
    // deterministic start, nonzero against any fixed subspace in practice
    for (int i = 0; i < n; ++i) v[i] = std::sin(0.7 * i + 0.3) + 0.01;
    auto orthonormalize = [&]() {
        for (const auto& u : previous) {
            double proj = 0.0;
            for (int i = 0; i < n; ++i) proj += u[i] * v[i];
            for (int i = 0; i < n; ++i) v[i] -= proj * u[i];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw NumericalFailure("inverse iteration collapsed");
        for (auto& x : v) x /= norm;
    };
    orthonormalize();
    for (int it = 0; it < 4; ++it) {
        lu.solve(v);
        orthonormalize();
    }
    return v;
}

} // namespace

BandedEigenResult lowest_eigenpairs(const SymmetricBanded& a, int m, bool want_vectors) {
    const int n = a.size();
    const int kd = a.bandwidth();
    if (m < 1) throw ConfigError("at least one eigenvalue must be requested");
    m = std::min(m, n);

    std::vector<double> ab = a.storage(); // dsbevx overwrites the band
    std::vector<double> w(n, 0.0);
    double z_dummy = 0.0, q_dummy = 0.0;
    std::vector<lapack_int> ifail(n, 0);
    lapack_int found = 0;

    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_dsbevx(
        LAPACK_COL_MAJOR, 'N', 'I', 'L', n, kd, ab.data(), kd + 1, &q_dummy, 1,
        0.0, 0.0, 1, m, abstol, &found, w.data(), &z_dummy, 1, ifail.data());
    if (info != 0)
        throw NumericalFailure("dsbevx failed", static_cast<int>(info));

    BandedEigenResult result;
    result.values.assign(w.begin(), w.begin() + found);
    if (want_vectors) {
        for (double value : result.values)
            result.vectors.push_back(inverse_iteration_vector(a, value, result.vectors));
    }
    return result;
}

void GeneralBanded::factor() {
    ipiv_.assign(n_, 0);
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
                                           ab_.data(), ldab_, ipiv_.data());
    if (info != 0)
        throw NumericalFailure("dgbtrf failed (singular pivot)", static_cast<int>(info));
    factored_ = true;
}

void GeneralBanded::solve(std::span<double> rhs) const {
    if (!factored_) throw NumericalFailure("solve called before factor");
    if (static_cast<int>(rhs.size()) != n_)
        throw ShapeError("banded solve: rhs size mismatch");
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1,
                                           ab_.data(), ldab_, ipiv_.data(), rhs.data(), n_);
    if (info != 0)
        throw NumericalFailure("dgbtrs failed", static_cast<int>(info));
}

void ComplexBanded::factor() {
    ipiv_.assign(n_, 0);
    const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
                                           ab_.data(), ldab_, ipiv_.data());
    if (info != 0)
        throw NumericalFailure("zgbtrf failed (singular pivot)", static_cast<int>(info));
    factored_ = true;
}

void ComplexBanded::solve(std::span<cd> rhs) const {
    if (!factored_) throw NumericalFailure("solve called before factor");
    if (static_cast<int>(rhs.size()) != n_)
        throw ShapeError("banded solve: rhs size mismatch");
    const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1,
                                           ab_.data(), ldab_, ipiv_.data(), rhs.data(), n_);
    if (info != 0)
        throw NumericalFailure("zgbtrs failed", static_cast<int>(info));
}

void dense_complex_eig(std::vector<std::complex<double>>& a, int n,
                       std::vector<std::complex<double>>& values,
                       std::vector<std::complex<double>>& vectors) {
    values.assign(n, {});
    vectors.assign(static_cast<std::size_t>(n) * n, {});
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n,
                                          values.data(), nullptr, 1, vectors.data(), n);
    if (info != 0)
        throw NumericalFailure("zgeev failed", static_cast<int>(info));
}

} // namespace kdvls
