#include "kdvls/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "kdvls/spectra.hpp"

namespace kdvls {

namespace {

using cd = std::complex<double>;

constexpr int kdv_slot = 0;
constexpr int z1_slot = 1;
constexpr int z2_slot = 2;

} // namespace

StabilityOperator::StabilityOperator(const WaveProfile& profile, const ModelParams& p)
    : grid_(profile.grid), n_int_(profile.grid.size() - 2), n_(3 * n_int_),
      kl_(8), ku_(8), abs_omega_(-p.omega()),
      hess_(1, 1), jl_(1, 1, 1) {
    if (!p.sign_paired())
        throw DomainError("stability operator requires s = sgn(k)");
    const auto full = assemble(BlockStructure::Full, profile, p);
    hess_ = full.matrix;

    // Row map of J: row (comp, node a) pulls rows of L with a scale factor.
    //   w-row:  (1/2h) [L-row(w, a+1) - L-row(w, a-1)]
    //   z1-row: (k/2s)  L-row(z2, a)
    //   z2-row: (k/2s) [2sA(a) restricted to w-column] - (k/2s) L-row(z1, a)
    // The last line is just -(k/2s) L-row(z1, a) since the 2sA coupling is
    // already part of L's z1 row; J's rotation swaps the two LS rows.
    jl_ = GeneralBanded(n_, kl_, ku_);
    const double h = grid_.spacing();
    const double rot = p.k() / (2.0 * p.s());
    const int kd = hess_.bandwidth();

    auto add_scaled_l_row = [&](int dest_row, int src_row, double factor) {
        const int lo = std::max(0, src_row - kd);
        const int hi = std::min(n_ - 1, src_row + kd);
        for (int j = lo; j <= hi; ++j) {
            const double v = hess_.at(src_row, j);
            if (v != 0.0) jl_.add(dest_row, j, factor * v);
        }
    };

    for (int a = 0; a < n_int_; ++a) {
        const int w_row = 3 * a + kdv_slot;
        if (a + 1 < n_int_) add_scaled_l_row(w_row, 3 * (a + 1) + kdv_slot, 0.5 / h);
        if (a - 1 >= 0) add_scaled_l_row(w_row, 3 * (a - 1) + kdv_slot, -0.5 / h);
        add_scaled_l_row(3 * a + z1_slot, 3 * a + z2_slot, rot);
        add_scaled_l_row(3 * a + z2_slot, 3 * a + z1_slot, -rot);
    }

    // Quasi-continuum omega-spacing at the LS band edge on this grid: the
    // lowest Dirichlet-box modes of the zero-profile operator.
    const double mu1 = 2.0 / (h * h) * (1.0 - std::cos(M_PI / (n_int_ + 1)));
    const double mu2 = 2.0 / (h * h) * (1.0 - std::cos(2.0 * M_PI / (n_int_ + 1)));
    band_tol_ = 2.0 * (mu2 - mu1);
}

StabilityOperator build_stability(const WaveProfile& profile, const ModelParams& p) {
    return StabilityOperator(profile, p);
}

std::vector<double> StabilityOperator::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw ShapeError("apply: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const int lo = std::max(0, i - kl_);
        const int hi = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (int j = lo; j <= hi; ++j) s += jl_.get(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double StabilityOperator::hessian_form(std::span<const std::complex<double>> x) const {
    if (static_cast<int>(x.size()) != n_) throw ShapeError("hessian_form: size mismatch");
    std::vector<double> re(n_), im(n_);
    for (int i = 0; i < n_; ++i) {
        re[i] = x[i].real();
        im[i] = x[i].imag();
    }
    const auto lre = hess_.apply(re);
    const auto lim = hess_.apply(im);
    double q = 0.0, norm = 0.0;
    for (int i = 0; i < n_; ++i) {
        q += re[i] * lre[i] + im[i] * lim[i];
        norm += re[i] * re[i] + im[i] * im[i];
    }
    return q / norm;
}

ComplexBanded StabilityOperator::shifted(std::complex<double> sigma) const {
    ComplexBanded m(n_, kl_, ku_);
    for (int i = 0; i < n_; ++i) {
        const int lo = std::max(0, i - kl_);
        const int hi = std::min(n_ - 1, i + ku_);
        for (int j = lo; j <= hi; ++j) {
            const double v = jl_.get(i, j);
            if (v != 0.0) m.at(i, j) = cd(v, 0.0);
        }
        m.at(i, i) -= sigma;
    }
    return m;
}

std::vector<double> StabilityOperator::block_dense(int component) const {
    if (component < 0 || component > 2) throw ConfigError("component must be 0, 1, or 2");
    std::vector<double> dense(static_cast<std::size_t>(n_int_) * n_int_, 0.0);
    for (int a = 0; a < n_int_; ++a) {
        const int row = 3 * a + component;
        const int lo = std::max(0, row - kl_);
        const int hi = std::min(n_ - 1, row + ku_);
        for (int j = lo; j <= hi; ++j) {
            if (j % 3 != component) continue;
            const double v = jl_.get(row, j);
            if (v != 0.0) dense[static_cast<std::size_t>(j / 3) * n_int_ + a] = v;
        }
    }
    return dense;
}

double StabilityOperator::localized_mass(std::span<const std::complex<double>> x) const {
    if (static_cast<int>(x.size()) != n_) throw ShapeError("localized_mass: size mismatch");
    const double cut = 0.5 * grid_.half_length();
    double inside = 0.0, total = 0.0;
    for (int a = 0; a < n_int_; ++a) {
        const double xi = grid_.node(a + 1);
        for (int c = 0; c < 3; ++c) {
            const double m = std::norm(x[3 * a + c]);
            total += m;
            if (std::abs(xi) <= cut) inside += m;
        }
    }
    return total > 0.0 ? inside / total : 0.0;
}

namespace {

struct RitzPair {
    cd lambda;
    std::vector<cd> vec;
    double residual;
};

/// Shift-inverted Arnoldi around sigma; returns converged Ritz pairs.
std::vector<RitzPair> shift_invert_arnoldi(const StabilityOperator& op, cd sigma,
                                           int m) {
    const int n = op.size();
    m = std::min(m, n);
    ComplexBanded lu = op.shifted(sigma);
    lu.factor();

    std::vector<std::vector<cd>> V;
    V.reserve(m + 1);
    std::vector<cd> H(static_cast<std::size_t>(m + 1) * m, cd(0.0, 0.0));
    auto h_at = [&](int i, int j) -> cd& { return H[static_cast<std::size_t>(j) * (m + 1) + i]; };

    std::mt19937 rng(20240613u);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<cd> v0(n);
    double nrm = 0.0;
    for (auto& v : v0) {
        v = cd(uni(rng), uni(rng));
        nrm += std::norm(v);
    }
    nrm = std::sqrt(nrm);
    for (auto& v : v0) v /= nrm;
    V.push_back(std::move(v0));

    int steps = 0;
    for (int j = 0; j < m; ++j) {
        std::vector<cd> w = V[j];
        lu.solve(w);
        // modified Gram-Schmidt with one reorthogonalization pass
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                cd proj(0.0, 0.0);
                for (int r = 0; r < n; ++r) proj += std::conj(V[i][r]) * w[r];
                for (int r = 0; r < n; ++r) w[r] -= proj * V[i][r];
                h_at(i, j) += proj;
            }
        }
        double beta = 0.0;
        for (const auto& v : w) beta += std::norm(v);
        beta = std::sqrt(beta);
        h_at(j + 1, j) = beta;
        steps = j + 1;
        if (beta < 1e-13) break;
        for (auto& v : w) v /= beta;
        V.push_back(std::move(w));
    }

    // Ritz values of the leading steps x steps Hessenberg block.
    std::vector<cd> hm(static_cast<std::size_t>(steps) * steps);
    for (int j = 0; j < steps; ++j)
        for (int i = 0; i < steps; ++i) hm[static_cast<std::size_t>(j) * steps + i] = h_at(i, j);
    std::vector<cd> theta, y;
    dense_complex_eig(hm, steps, theta, y);

    std::vector<RitzPair> pairs;
    for (int idx = 0; idx < steps; ++idx) {
        if (std::abs(theta[idx]) < 1e-14) continue;
        const cd lambda = sigma + 1.0 / theta[idx];
        std::vector<cd> x(n, cd(0.0, 0.0));
        for (int j = 0; j < steps; ++j) {
            const cd coef = y[static_cast<std::size_t>(idx) * steps + j];
            for (int r = 0; r < n; ++r) x[r] += coef * V[j][r];
        }
        double xn = 0.0;
        for (const auto& v : x) xn += std::norm(v);
        xn = std::sqrt(xn);
        if (xn == 0.0) continue;
        for (auto& v : x) v /= xn;

        // direct residual ||JL x - lambda x||
        std::vector<double> re(n), im(n);
        for (int r = 0; r < n; ++r) {
            re[r] = x[r].real();
            im[r] = x[r].imag();
        }
        const auto are = op.apply(re);
        const auto aim = op.apply(im);
        double rnorm = 0.0;
        for (int r = 0; r < n; ++r) {
            const cd ax(are[r], aim[r]);
            rnorm += std::norm(ax - lambda * x[r]);
        }
        pairs.push_back({lambda, std::move(x), std::sqrt(rnorm)});
    }
    return pairs;
}

std::vector<ModeReport> window_modes(const StabilityOperator& op, double omega_lo,
                                     double omega_hi, int krylov) {
    if (!(omega_hi > omega_lo)) throw ConfigError("empty frequency window");
    const double mid = 0.5 * (omega_lo + omega_hi);
    // Shift slightly off the window center so an eigenvalue sitting exactly
    // there does not make the factorization singular.
    const cd sigma(1e-8 * std::max(1.0, std::abs(mid)), mid * (1.0 + 1e-4));
    auto pairs = shift_invert_arnoldi(op, sigma, krylov);

    std::vector<RitzPair> kept;
    for (auto& pair : pairs) {
        const double im = pair.lambda.imag();
        if (im < omega_lo || im > omega_hi) continue;
        if (pair.residual > 1e-8 * std::max(1.0, std::abs(pair.lambda))) continue;
        bool dup = false;
        for (auto& other : kept) {
            if (std::abs(other.lambda - pair.lambda) <
                1e-9 * std::max(1.0, std::abs(pair.lambda))) {
                dup = true;
                if (pair.residual < other.residual) other = std::move(pair);
                break;
            }
        }
        if (!dup) kept.push_back(std::move(pair));
    }

    std::vector<ModeReport> modes;
    for (auto& pair : kept) {
        ModeReport mode{pair.lambda, std::move(pair.vec), 0, false, false, 0.0,
                        pair.residual};
        mode.localization_mass = op.localized_mass(mode.vec);
        mode.localized = mode.localization_mass >= 0.99;
        const double q = op.hessian_form(mode.vec);
        mode.krein = std::abs(q) <= 1e-8 ? 0 : (q > 0.0 ? +1 : -1);
        const bool near_axis = std::abs(mode.lambda.real()) <=
                               1e-6 * std::max(1.0, std::abs(mode.lambda.imag()));
        mode.embedded = near_axis &&
                        std::abs(mode.lambda.imag()) >= op.abs_omega() - op.band_tol();
        modes.push_back(std::move(mode));
    }
    std::sort(modes.begin(), modes.end(), [](const ModeReport& a, const ModeReport& b) {
        return a.lambda.imag() < b.lambda.imag();
    });
    return modes;
}

} // namespace

std::vector<ModeReport> neutral_modes(const StabilityOperator& op, double omega_lo,
                                      double omega_hi, int krylov) {
    return window_modes(op, omega_lo, omega_hi, krylov);
}

double quadruplet_pairing_error(const StabilityOperator& op, double omega_lo,
                                double omega_hi, int krylov) {
    const auto upper = window_modes(op, omega_lo, omega_hi, krylov);
    const auto lower = window_modes(op, -omega_hi, -omega_lo, krylov);
    double worst = 0.0;
    for (const auto& u : upper) {
        if (!u.localized) continue;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& l : lower) best = std::min(best, std::abs(u.lambda + l.lambda));
        worst = std::max(worst, best);
    }
    return worst;
}

EmbeddedPairScan detect_embedded_pair(double c, double k, int grid_n) {
    if (!(c > 0.0) || !(k > 0.0)) throw DomainError("scan needs c > 0 and k > 0");
    const double t = std::sqrt(1.0 + 48.0 * k);
    const double omega_tilde = -c / 16.0 * (t - 3.0) * (t - 3.0);
    if (!(omega_tilde < 0.0)) throw OutOfDomain("degenerate second pitchfork point");

    const ModelParams p(c, omega_tilde, k);
    const Grid grid(default_half_length(p, false), grid_n);
    const auto profile = ExactFamily::kdv_uncoupled(p).sample(grid);

    // Predicted pair location from the discretized L2 ground state.
    const auto l2 = assemble(BlockStructure::L2, profile, p);
    const auto ground = lowest_eigenpairs(l2.matrix, 1, false);
    const double omega_hat = 0.5 * k * std::abs(ground.values[0]);

    const StabilityOperator op(profile, p);
    // The window stays clear of the zero cluster (translational modes of the
    // KdV block are also localized) and brackets the predicted pair.
    const double lo = 0.6 * omega_hat;
    const double hi = 1.4 * omega_hat + 2.0 * op.band_tol();
    const auto modes = neutral_modes(op, lo, hi);

    EmbeddedPairScan scan{false, 0.0, 0, false};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mode : modes) {
        if (!mode.localized) continue;
        const double dist = std::abs(std::abs(mode.lambda.imag()) - omega_hat);
        if (dist < best) {
            best = dist;
            scan.omega1 = std::abs(mode.lambda.imag());
            scan.krein = mode.krein;
            // The scan flag uses the sharp band edge; band_tol blurs the
            // endpoint by more than the +-0.005 the window check needs.
            scan.embedded = scan.omega1 >= -p.omega();
        }
    }
    if (!std::isfinite(best))
        throw NumericalFailure("no localized pair found in the scan window");
    scan.present = scan.embedded && scan.krein == -1;
    return scan;
}

double scan_window_endpoint(double c, double k_lo, double k_hi, double k_tol, int grid_n) {
    bool lo_flag = detect_embedded_pair(c, k_lo, grid_n).present;
    const bool hi_flag = detect_embedded_pair(c, k_hi, grid_n).present;
    if (lo_flag == hi_flag)
        throw DomainError("bracket does not straddle a window endpoint");
    while (k_hi - k_lo > k_tol) {
        const double mid = 0.5 * (k_lo + k_hi);
        if (detect_embedded_pair(c, mid, grid_n).present == lo_flag) k_lo = mid;
        else k_hi = mid;
    }
    return 0.5 * (k_lo + k_hi);
}

} // namespace kdvls
