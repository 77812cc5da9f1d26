#include "kdvls/model.hpp"

#include <algorithm>
#include <cmath>

namespace kdvls {

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

constexpr double regime_tol = 1e-12;

} // namespace

Coupling normalize_coefficients(const PhysicalCoefficients& pc) {
    if (pc.alpha == 0.0 || pc.beta == 0.0 || pc.gamma == 0.0 || pc.kappa == 0.0 ||
        pc.sigma == 0.0)
        throw InvalidCoefficients("all five coefficients must be nonzero");
    const double k = pc.sigma * pc.beta / (pc.alpha * pc.kappa);
    const int s = (pc.alpha * pc.gamma) > 0.0 ? +1 : -1;
    return {k, s};
}

ModelParams::ModelParams(double c, double omega, double k, int s, bool check_pairing)
    : c_(c), omega_(omega), k_(k), s_(s) {
    if (!(c > 0.0)) throw DomainError("wave speed c must be positive");
    if (!(omega < 0.0)) throw DomainError("frequency shift Omega must be negative");
    if (k == 0.0) throw DomainError("coupling k must be nonzero");
    if (s != +1 && s != -1) throw DomainError("sign parameter s must be +1 or -1");
    if (check_pairing && !sign_paired())
        throw DomainError("s must equal sgn(k); use ModelParams::relaxed to bypass");
}

ModelParams::ModelParams(double c, double omega, double k)
    : ModelParams(c, omega, k, k > 0.0 ? +1 : -1, true) {}

ModelParams ModelParams::relaxed(double c, double omega, double k, int s) {
    return ModelParams(c, omega, k, s, false);
}

ExactFamily ExactFamily::kdv_uncoupled(const ModelParams& p) {
    return ExactFamily(Family::KdvUncoupled, p);
}

ExactFamily ExactFamily::sech_bright(double c, double omega, int s) {
    ModelParams p = ModelParams::relaxed(c, omega, 1.0 / 6.0, s);
    const double radicand = s * (c + 4.0 * omega);
    if (radicand < 0.0)
        throw InvalidFamily("sech-bright family needs s(c + 4 Omega) >= 0");
    return ExactFamily(Family::SechBright, p);
}

ExactFamily ExactFamily::sech_tanh(double c, double omega, int s) {
    if (!(c - 2.0 * omega > 0.0))
        throw InvalidFamily("sech-tanh family needs c - 2 Omega > 0");
    const double k = -3.0 * omega / (c - 2.0 * omega);
    ModelParams p = ModelParams::relaxed(c, omega, k, s);
    const double radicand = s * (c + 4.0 * omega);
    if (radicand < 0.0)
        throw InvalidFamily("sech-tanh family needs s(c + 4 Omega) >= 0");
    return ExactFamily(Family::SechTanh, p);
}

std::pair<double, double> ExactFamily::eval(double xi) const {
    const double c = params_.c();
    const double omega = params_.omega();
    const int s = params_.s();
    switch (family_) {
    case Family::KdvUncoupled: {
        const double sc = sech(0.5 * std::sqrt(c) * xi);
        return {3.0 * c * sc * sc, 0.0};
    }
    case Family::SechBright: {
        const double mu = std::sqrt(-omega);
        const double sc = sech(mu * xi);
        const double amp2 = std::max(0.0, -12.0 * s * omega * (c + 4.0 * omega));
        return {-12.0 * omega * sc * sc, std::sqrt(amp2) * sc};
    }
    case Family::SechTanh: {
        const double mu = std::sqrt(-omega);
        const double sc = sech(mu * xi);
        const double th = std::tanh(mu * xi);
        const double amp2 = std::max(0.0, 2.0 * s * (c + 4.0 * omega) * (c - 2.0 * omega));
        return {2.0 * (c - 2.0 * omega) * sc * sc, std::sqrt(amp2) * sc * th};
    }
    }
    throw InvalidFamily("unknown family");
}

WaveProfile ExactFamily::sample(const Grid& grid) const {
    WaveProfile profile{grid, std::vector<double>(grid.size()),
                        std::vector<double>(grid.size()), Parity::Even, Parity::Even, 0.0};
    for (int i = 0; i < grid.size(); ++i) {
        const auto [u, a] = eval(grid.node(i));
        profile.U[i] = u;
        profile.A[i] = a;
    }
    switch (family_) {
    case Family::KdvUncoupled: profile.parity_a = Parity::Zero; break;
    case Family::SechBright: profile.parity_a = Parity::Even; break;
    case Family::SechTanh: profile.parity_a = Parity::Odd; break;
    }
    profile.residual_norm = residual_ode(profile, params_).norm;
    return profile;
}

double default_half_length(const ModelParams& p, bool omega_scaled) {
    const double base = 40.0 / std::sqrt(p.c());
    if (!omega_scaled) return base;
    const double abs_omega = -p.omega();
    if (abs_omega < p.c()) return 40.0 / std::sqrt(abs_omega);
    return base;
}

Grid ExactFamily::default_grid(int n_points) const {
    const bool omega_scaled = family_ != Family::KdvUncoupled;
    return Grid(default_half_length(params_, omega_scaled), n_points);
}

OdeResidual residual_ode(const WaveProfile& profile, const ModelParams& p) {
    const int n = profile.grid.size();
    if (static_cast<int>(profile.U.size()) != n || static_cast<int>(profile.A.size()) != n)
        throw ShapeError("profile vectors do not match grid");
    const double h = profile.grid.spacing();
    const auto ddU = second_derivative(h, profile.U);
    const auto ddA = second_derivative(h, profile.A);
    OdeResidual r{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (int i = 0; i < n; ++i) {
        const double U = profile.U[i], A = profile.A[i];
        r.rU[i] = ddU[i] - p.c() * U + 0.5 * U * U + p.s() * A * A;
        r.rA[i] = ddA[i] + (p.omega() + p.k() * U) * A;
    }
    r.norm = std::max(max_abs(r.rU), max_abs(r.rA));
    return r;
}

std::vector<double> first_invariant(const WaveProfile& profile, const ModelParams& p) {
    const int n = profile.grid.size();
    if (static_cast<int>(profile.U.size()) != n || static_cast<int>(profile.A.size()) != n)
        throw ShapeError("profile vectors do not match grid");
    const double h = profile.grid.spacing();
    const auto dU = first_derivative(h, profile.U);
    const auto dA = first_derivative(h, profile.A);
    const double sk = p.s() / p.k();
    std::vector<double> H(n);
    for (int i = 0; i < n; ++i) {
        const double U = profile.U[i], A = profile.A[i];
        H[i] = 0.5 * dU[i] * dU[i] - 0.5 * p.c() * U * U + U * U * U / 6.0 +
               sk * dA[i] * dA[i] + p.s() * U * A * A + p.omega() * sk * A * A;
    }
    return H;
}

std::vector<double> second_invariant_melnikov(const WaveProfile& profile,
                                              const ModelParams& p) {
    if (std::abs(p.k() - 1.0 / 6.0) > regime_tol)
        throw WrongRegime("melnikov invariant is valid for k = 1/6 only");
    const int n = profile.grid.size();
    const double h = profile.grid.spacing();
    const auto dU = first_derivative(h, profile.U);
    const auto dA = first_derivative(h, profile.A);
    std::vector<double> I(n);
    for (int i = 0; i < n; ++i) {
        const double U = profile.U[i], A = profile.A[i];
        I[i] = A * dA[i] * dU[i] - U * dA[i] * dA[i] +
               A * A * (p.omega() * U + U * U / 12.0 + 0.25 * p.s() * A * A) +
               3.0 * (p.c() + 4.0 * p.omega()) * (dA[i] * dA[i] + p.omega() * A * A);
    }
    return I;
}

std::vector<double> second_invariant_k1(const WaveProfile& profile, const ModelParams& p) {
    if (std::abs(p.k() - 1.0) > regime_tol || std::abs(p.omega() + p.c()) > regime_tol ||
        p.s() != -1)
        throw WrongRegime("this invariant is valid for k = 1, Omega = -c, s = -1 only");
    const int n = profile.grid.size();
    const double h = profile.grid.spacing();
    const auto dU = first_derivative(h, profile.U);
    const auto dA = first_derivative(h, profile.A);
    std::vector<double> I(n);
    for (int i = 0; i < n; ++i) {
        const double U = profile.U[i], A = profile.A[i];
        I[i] = dA[i] * dU[i] - p.c() * A * U + p.s() * A * A * A / 3.0 + 0.5 * A * U * U;
    }
    return I;
}

ConservedQuantities conserved_quantities(const WaveProfile& profile, const ModelParams& p) {
    const Grid& g = profile.grid;
    const int n = g.size();
    if (static_cast<int>(profile.U.size()) != n || static_cast<int>(profile.A.size()) != n)
        throw ShapeError("profile vectors do not match grid");
    const double h = g.spacing();
    const auto dU = first_derivative(h, profile.U);
    const auto dA = first_derivative(h, profile.A);
    const double sk = p.s() / p.k();
    const double c = p.c();

    std::vector<double> a2(n), u2(n), e(n);
    for (int i = 0; i < n; ++i) {
        const double U = profile.U[i], A = profile.A[i];
        a2[i] = A * A;
        u2[i] = U * U;
        e[i] = dU[i] * dU[i] - U * U * U / 3.0 +
               2.0 * sk * (dA[i] * dA[i] + 0.25 * c * c * A * A) - 2.0 * p.s() * U * A * A;
    }
    const double int_a2 = simpson(g, a2);
    const double int_u2 = simpson(g, u2);

    ConservedQuantities q{};
    q.mass = sk * int_a2;
    q.momentum_u = 0.5 * int_u2;
    // The carrier factor e^{ic xi/2} contributes -(cs/2k) int A^2 to the
    // momentum; this sign makes H + cP - omega Q reproduce the action.
    q.momentum = q.momentum_u - 0.5 * c * sk * int_a2;
    q.energy = 0.5 * simpson(g, e);
    q.boundary_max = std::max({std::abs(profile.U.front()), std::abs(profile.U.back()),
                               std::abs(profile.A.front()), std::abs(profile.A.back())});
    q.truncation_warning = q.boundary_max > truncation_threshold;
    return q;
}

} // namespace kdvls
