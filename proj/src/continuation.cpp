#include "kdvls/continuation.hpp"

#include <algorithm>
#include <cmath>

#include "kdvls/spectra.hpp"

namespace kdvls {

namespace {

/// Half-line Newton system for the profile equations.  Unknowns live at the
/// nodes [0, L) of the symmetric grid (Dirichlet at L eliminated), two
/// components interleaved per node.  The center condition encodes parity:
/// U is even (mirrored ghost), A mirrored or pinned to zero.
class HalfSystem {
public:
    HalfSystem(const ModelParams& p, const BvpConfig& cfg)
        : p_(p), grid_(cfg.grid), parity_a_(cfg.parity_a),
          c0_(grid_.center_index()), m_(grid_.half_size() - 1),
          h_(grid_.spacing()), l2f_(2.0 * p.s() / p.k()) {
        if (parity_a_ == Parity::Zero)
            throw ConfigError("A-parity must be even or odd for a BVP solve");
        if (m_ < 3) throw ConfigError("grid too coarse for the half-line solver");
    }

    int unknowns() const { return 2 * m_; }

    void set_omega(double omega) { omega_ = omega; }
    double omega() const { return omega_; }

    std::vector<double> restrict_half(const WaveProfile& profile) const {
        if (!(profile.grid == grid_))
            throw ShapeError("initial profile lives on a different grid");
        std::vector<double> x(unknowns());
        for (int a = 0; a < m_; ++a) {
            x[2 * a] = profile.U[c0_ + a];
            x[2 * a + 1] = profile.A[c0_ + a];
        }
        if (parity_a_ == Parity::Odd) x[1] = 0.0;
        return x;
    }

    WaveProfile mirror_full(std::span<const double> x) const {
        WaveProfile profile{grid_, std::vector<double>(grid_.size(), 0.0),
                            std::vector<double>(grid_.size(), 0.0), Parity::Even,
                            parity_a_, 0.0};
        const double sign = parity_a_ == Parity::Odd ? -1.0 : 1.0;
        for (int a = 0; a < m_; ++a) {
            profile.U[c0_ + a] = x[2 * a];
            profile.U[c0_ - a] = x[2 * a];
            profile.A[c0_ + a] = x[2 * a + 1];
            profile.A[c0_ - a] = sign * x[2 * a + 1];
        }
        const auto params = ModelParams::relaxed(p_.c(), omega_, p_.k(), p_.s());
        profile.residual_norm = residual_ode(profile, params).norm;
        return profile;
    }

    std::vector<double> residual(std::span<const double> x) const {
        std::vector<double> f(unknowns());
        const double inv = 1.0 / (h_ * h_);
        for (int a = 0; a < m_; ++a) {
            const double U = x[2 * a], A = x[2 * a + 1];
            const double Ul = a > 0 ? x[2 * (a - 1)] : x[2]; // even ghost at center
            const double Ur = a + 1 < m_ ? x[2 * (a + 1)] : 0.0;
            double Al, Ar;
            if (a > 0) Al = x[2 * (a - 1) + 1];
            else Al = parity_a_ == Parity::Even ? x[3] : -x[3];
            Ar = a + 1 < m_ ? x[2 * (a + 1) + 1] : 0.0;

            f[2 * a] = -(Ul - 2.0 * U + Ur) * inv + p_.c() * U - 0.5 * U * U -
                       p_.s() * A * A;
            f[2 * a + 1] =
                l2f_ * (-(Al - 2.0 * A + Ar) * inv - (omega_ + p_.k() * U) * A);
        }
        if (parity_a_ == Parity::Odd)
            f[1] = 2.0 * l2f_ * inv * x[1]; // pin A(0) = 0
        return f;
    }

    GeneralBanded jacobian(std::span<const double> x) const {
        GeneralBanded jac(unknowns(), 2, 2);
        const double inv = 1.0 / (h_ * h_);
        for (int a = 0; a < m_; ++a) {
            const double U = x[2 * a], A = x[2 * a + 1];
            const int iu = 2 * a, ia = 2 * a + 1;
            jac.at(iu, iu) = 2.0 * inv + p_.c() - U;
            jac.at(iu, ia) = -2.0 * p_.s() * A;
            jac.at(ia, ia) = l2f_ * (2.0 * inv - omega_ - p_.k() * U);
            jac.at(ia, iu) = -2.0 * p_.s() * A;
            if (a + 1 < m_) {
                jac.at(iu, iu + 2) = -inv;
                jac.at(iu + 2, iu) = -inv;
                jac.at(ia, ia + 2) = -l2f_ * inv;
                jac.at(ia + 2, ia) = -l2f_ * inv;
            }
        }
        // Center ghost couplings double the first off-diagonal.
        jac.at(0, 2) += -inv;
        if (parity_a_ == Parity::Even) {
            jac.at(1, 3) += -l2f_ * inv;
        } else {
            jac.at(1, 0) = 0.0;
            jac.at(1, 3) = 0.0;
            jac.at(1, 1) = 2.0 * l2f_ * inv;
        }
        return jac;
    }

    /// Derivative of the residual with respect to Omega.
    std::vector<double> omega_column(std::span<const double> x) const {
        std::vector<double> b(unknowns(), 0.0);
        for (int a = 0; a < m_; ++a) b[2 * a + 1] = -l2f_ * x[2 * a + 1];
        if (parity_a_ == Parity::Odd) b[1] = 0.0;
        return b;
    }

    int half_count() const { return m_; }
    int center() const { return c0_; }

private:
    ModelParams p_;
    Grid grid_;
    Parity parity_a_;
    int c0_, m_;
    double h_, l2f_;
    double omega_ = 0.0;
};

bool is_trivial(std::span<const double> x, int m) {
    double max_a = 0.0, max_u = 0.0;
    for (int a = 0; a < m; ++a) {
        max_u = std::max(max_u, std::abs(x[2 * a]));
        max_a = std::max(max_a, std::abs(x[2 * a + 1]));
    }
    return max_a < 1e-8 * std::max(1.0, max_u);
}

} // namespace

ProfileSolve solve_profile(const ModelParams& p, const WaveProfile& initial,
                           const BvpConfig& cfg) {
    HalfSystem sys(p, cfg);
    sys.set_omega(p.omega());
    std::vector<double> x = sys.restrict_half(initial);
    std::vector<double> history;

    for (int it = 0; it <= cfg.max_iter; ++it) {
        auto f = sys.residual(x);
        const double res = max_abs(f);
        history.push_back(res);
        if (res <= cfg.newton_tol) {
            const bool trivial = is_trivial(x, sys.half_count());
            auto profile = sys.mirror_full(x);
            if (trivial) profile.parity_a = Parity::Zero;
            return {std::move(profile), it, std::move(history), trivial};
        }
        if (it == cfg.max_iter) break;
        auto jac = sys.jacobian(x);
        jac.factor();
        jac.solve(f);
        for (int i = 0; i < sys.unknowns(); ++i) x[i] -= cfg.damping * f[i];
    }
    throw NoConvergence("profile Newton did not reach tolerance", history.back());
}

namespace {

struct AugmentedResult {
    std::vector<double> x;
    double omega;
};

/// Newton on the bordered system {F(x; Omega) = 0, <g, A> = a ||g||^2}.
AugmentedResult solve_augmented(HalfSystem& sys, std::vector<double> x, double omega,
                                double a_target, std::span<const double> gw,
                                double g_norm2, const BvpConfig& cfg) {
    double last_res = 0.0;
    for (int it = 0; it <= cfg.max_iter; ++it) {
        sys.set_omega(omega);
        auto f = sys.residual(x);
        double gc = -a_target * g_norm2;
        for (int a = 0; a < sys.half_count(); ++a) gc += gw[a] * x[2 * a + 1];
        last_res = std::max(max_abs(f), std::abs(gc) / g_norm2);
        if (last_res <= cfg.newton_tol) return {std::move(x), omega};
        if (it == cfg.max_iter) break;

        auto jac = sys.jacobian(x);
        jac.factor();
        std::vector<double> z1(f);
        for (auto& v : z1) v = -v;
        jac.solve(z1);
        auto z2 = sys.omega_column(x);
        jac.solve(z2);

        double rz1 = 0.0, rz2 = 0.0;
        for (int a = 0; a < sys.half_count(); ++a) {
            rz1 += gw[a] * z1[2 * a + 1];
            rz2 += gw[a] * z2[2 * a + 1];
        }
        if (rz2 == 0.0)
            throw NumericalFailure("degenerate bordered system in continuation");
        const double domega = (rz1 + gc) / rz2;
        for (int i = 0; i < sys.unknowns(); ++i)
            x[i] += cfg.damping * (z1[i] - domega * z2[i]);
        omega += cfg.damping * domega;
    }
    throw NoConvergence("augmented Newton did not reach tolerance", last_res);
}

} // namespace

std::vector<BranchPoint> continue_branch(int j, double c, double k,
                                         std::span<const double> a_values,
                                         const BvpConfig& cfg, const BranchOptions& opts) {
    if (j != 1 && j != 2) throw ConfigError("only the first two pitchforks are continued");
    const Parity want = j == 1 ? Parity::Even : Parity::Odd;
    if (cfg.parity_a != want)
        throw ConfigError("A-parity of the config does not match the branch index");
    if (a_values.empty()) return {};
    for (std::size_t i = 0; i < a_values.size(); ++i)
        if (!(a_values[i] > 0.0) || (i > 0 && a_values[i] <= a_values[i - 1]))
            throw ConfigError("amplitudes must be positive and strictly increasing");

    const auto ladder = bifurcation_ladder(c, k);
    if (ladder.levels < j)
        throw OutOfDomain("requested pitchfork does not exist for this coupling");
    const double omega_c = ladder.points[j - 1];
    const BranchKind kind = j == 1 ? BranchKind::First : BranchKind::Second;

    const Grid& grid = cfg.grid;
    const ModelParams base(c, omega_c, k);
    HalfSystem sys(base, cfg);
    const int c0 = grid.center_index();
    const int m = grid.half_size() - 1;

    // Kernel mode, its norm, and the constraint weights (full-line Simpson
    // weights folded onto the half grid; g A is even for both parities).
    std::vector<double> g_full(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        g_full[i] = j == 1 ? mode_g(c, k, grid.node(i)) : mode_gtilde(c, k, grid.node(i));
    std::vector<double> g2(grid.size());
    for (int i = 0; i < grid.size(); ++i) g2[i] = g_full[i] * g_full[i];
    const double g_norm2 = simpson(grid, g2);

    std::vector<double> wfull(grid.size());
    {
        const double h = grid.spacing();
        for (int i = 0; i < grid.size(); ++i) {
            const bool end = i == 0 || i == grid.size() - 1;
            wfull[i] = end ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
        }
    }
    std::vector<double> gw(m);
    for (int a = 0; a < m; ++a) {
        double w = wfull[c0 + a];
        if (a > 0) w += wfull[c0 - a];
        gw[a] = w * g_full[c0 + a];
    }

    // First predictor from the reduction: U = U0 + a^2 s L1^{-1} g^2, A = a g.
    const auto u0 = ExactFamily::kdv_uncoupled(base).sample(grid);
    std::vector<double> v1(grid.size());
    for (int i = 0; i < grid.size(); ++i) v1[i] = c - u0.U[i];
    const auto w2 = invert_schrodinger_even(grid, v1, g2);

    std::vector<BranchPoint> points;
    std::vector<double> x_prev, x_curr;
    double omega_prev = 0.0, omega_curr = 0.0;

    for (std::size_t idx = 0; idx < a_values.size(); ++idx) {
        const double a = a_values[idx];
        std::vector<double> x0(2 * m, 0.0);
        double omega0;
        if (points.empty()) {
            for (int i = 0; i < m; ++i) {
                x0[2 * i] = u0.U[c0 + i] + a * a * base.s() * w2[c0 + i];
                x0[2 * i + 1] = a * g_full[c0 + i];
            }
            omega0 = omega_c + delta_omega_prediction(a, c, k, kind);
        } else if (points.size() == 1) {
            x0 = x_curr;
            omega0 = omega_curr;
        } else {
            const double ratio = (a - a_values[idx - 1]) /
                                 (a_values[idx - 1] - a_values[idx - 2]);
            for (int i = 0; i < 2 * m; ++i)
                x0[i] = x_curr[i] + ratio * (x_curr[i] - x_prev[i]);
            omega0 = omega_curr + ratio * (omega_curr - omega_prev);
        }

        AugmentedResult solved;
        try {
            solved = solve_augmented(sys, std::move(x0), omega0, a, gw, g_norm2, cfg);
        } catch (const NumericalError&) {
            break; // return the completed prefix
        }

        x_prev = std::move(x_curr);
        omega_prev = omega_curr;
        x_curr = solved.x;
        omega_curr = solved.omega;

        sys.set_omega(solved.omega);
        BranchPoint point{a, ModelParams(c, solved.omega, k), sys.mirror_full(solved.x),
                          {}, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                          -1, -1};
        point.conserved = conserved_quantities(point.profile, point.params);
        if (opts.with_spectra || opts.with_classification) {
            point.lj_spectrum = low_spectrum(assemble(BlockStructure::LJ, point.profile,
                                                      point.params));
            point.full_spectrum = low_spectrum(assemble(BlockStructure::Full, point.profile,
                                                        point.params));
        }
        if (opts.with_classification) {
            point.d_matrix = d_matrix_numeric(point, cfg);
            const auto cls = classify(*point.full_spectrum, *point.d_matrix);
            point.classification = cls.cls;
            point.n_hat = cls.n_hat;
            point.z_hat = cls.z_hat;
        }
        points.push_back(std::move(point));
    }
    return points;
}

DMatrix d_matrix_numeric(const BranchPoint& point, const BvpConfig& cfg) {
    const double c = point.params.c();
    const double omega = point.params.omega();
    const double k = point.params.k();
    const double dc = 1e-4 * c;
    const double dom = 1e-4 * std::abs(omega);

    auto solve_at = [&](double cc, double oo) {
        const ModelParams p(cc, oo, k);
        const auto solved = solve_profile(p, point.profile, cfg);
        return conserved_quantities(solved.profile, p);
    };

    const auto c_plus = solve_at(c + dc, omega);
    const auto c_minus = solve_at(c - dc, omega);
    // |Omega| + d corresponds to Omega - d.
    const auto o_plus = solve_at(c, omega - dom);
    const auto o_minus = solve_at(c, omega + dom);

    return make_d_matrix((c_plus.momentum_u - c_minus.momentum_u) / (2.0 * dc),
                         (o_plus.momentum_u - o_minus.momentum_u) / (2.0 * dom),
                         (c_plus.mass - c_minus.mass) / (2.0 * dc),
                         (o_plus.mass - o_minus.mass) / (2.0 * dom));
}

ClassificationResult classify(const SpectrumReport& full_spectrum, const DMatrix& d) {
    const auto counts = constrained_index(full_spectrum, d);
    return {counts.n_hat == 0 ? Classification::Minimizer : Classification::Saddle,
            counts.n_hat, counts.z_hat};
}

UncoupledClassification classify_uncoupled(const ModelParams& p, int grid_n) {
    const Grid grid(default_half_length(p, false), grid_n);
    const auto profile = ExactFamily::kdv_uncoupled(p).sample(grid);
    const auto report = low_spectrum(assemble(BlockStructure::Full, profile, p), 10);
    // dP/dc = 18 sqrt(c) > 0 on the soliton family, so the momentum
    // constraint always removes one negative direction.
    const int n_hat = report.morse_index - 1;
    return {report.morse_index, n_hat, report.nullity,
            n_hat == 0 ? Classification::Minimizer : Classification::Saddle};
}

MorseCheck morse_perturbation_check(int j, double c, double k, double a,
                                    const BvpConfig& cfg) {
    const BranchKind kind = j == 1 ? BranchKind::First : BranchKind::Second;
    double integral, norm;
    if (kind == BranchKind::First) {
        const double p = p_of(k);
        integral = projection_integral(p);
        norm = sech_power_moment(2.0 * p);
    } else {
        const double q = q_of(k);
        integral = projection_integral_tilde(q);
        norm = sech_power_moment(2.0 * q, 1);
    }
    const double lambda2 = -16.0 * integral / (c * norm);
    if (a == 0.0) return {0.0, 0.0};

    const double values[] = {a};
    const auto points = continue_branch(j, c, k, values, cfg, {false, false});
    if (points.empty())
        throw NoConvergence("branch point solve failed in morse check", 0.0);
    const auto& point = points.front();

    const auto lj = assemble(BlockStructure::LJ, point.profile, point.params);
    const auto pairs = low_eigenpairs(lj, 6);

    // Discretized translational direction (U', A').
    const double h = cfg.grid.spacing();
    const auto du = first_derivative(h, point.profile.U);
    const auto da = first_derivative(h, point.profile.A);
    const std::vector<std::vector<double>> comps = {du, da};
    const auto t = interleave_interior(lj, comps);
    double t_norm = 0.0;
    for (double v : t) t_norm += v * v;
    t_norm = std::sqrt(t_norm);

    // The two smallest-magnitude eigenvalues are the translational zero and
    // the split mode; tell them apart by overlap with (U', A').
    int i1 = 0;
    for (std::size_t i = 1; i < pairs.values.size(); ++i)
        if (std::abs(pairs.values[i]) < std::abs(pairs.values[i1])) i1 = static_cast<int>(i);
    int i2 = i1 == 0 ? 1 : 0;
    for (std::size_t i = 0; i < pairs.values.size(); ++i) {
        if (static_cast<int>(i) == i1) continue;
        if (std::abs(pairs.values[i]) < std::abs(pairs.values[i2])) i2 = static_cast<int>(i);
    }
    auto overlap = [&](int idx) {
        double o = 0.0, n2 = 0.0;
        for (std::size_t r = 0; r < t.size(); ++r) {
            o += pairs.vectors[idx][r] * t[r];
            n2 += pairs.vectors[idx][r] * pairs.vectors[idx][r];
        }
        return std::abs(o) / (std::sqrt(n2) * t_norm);
    };
    const double measured = overlap(i1) > overlap(i2) ? pairs.values[i2] : pairs.values[i1];
    return {measured, lambda2 * a * a};
}

double discrete_bifurcation_point(int j, double c, double k, const Grid& grid) {
    const auto ladder = bifurcation_ladder(c, k);
    if (ladder.levels < j) throw OutOfDomain("no such rung in the ladder");
    const double omega_ref = ladder.points[j - 1];
    const ModelParams p(c, omega_ref, k);
    const auto profile = ExactFamily::kdv_uncoupled(p).sample(grid);
    const auto eig = lowest_eigenpairs(assemble(BlockStructure::L2, profile, p).matrix,
                                       j, false);
    // L2 eigenvalues are exactly linear in Omega with slope -2/k.
    return omega_ref + 0.5 * k * eig.values[j - 1];
}

} // namespace kdvls
