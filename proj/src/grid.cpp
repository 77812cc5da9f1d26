#include "kdvls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace kdvls {

Grid::Grid(double half_length, int n_points)
    : half_length_(half_length), n_(n_points) {
    if (!(half_length > 0.0))
        throw ConfigError("grid half-length must be positive");
    if (n_points < 3 || n_points % 2 == 0)
        throw ConfigError("grid needs an odd number of points >= 3");
    h_ = 2.0 * half_length_ / (n_ - 1);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(n_);
    for (int i = 0; i < n_; ++i) x[i] = node(i);
    return x;
}

int Grid::default_points() {
    static const int n = [] {
        int value = 4001;
        if (const char* env = std::getenv("KDVLS_GRID_N")) {
            const long parsed = std::strtol(env, nullptr, 10);
            if (parsed >= 3) value = static_cast<int>(parsed);
        }
        if (value % 2 == 0) ++value;
        return value;
    }();
    return n;
}

double simpson(double h, std::span<const double> f) {
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0)
        throw ShapeError("simpson needs an odd number of samples >= 3");
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < n; i += 2) odd += f[i];
    for (std::size_t i = 2; i + 1 < n; i += 2) even += f[i];
    return h / 3.0 * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

double simpson(const Grid& g, std::span<const double> f) {
    if (static_cast<int>(f.size()) != g.size())
        throw ShapeError("sample count does not match grid");
    return simpson(g.spacing(), f);
}

std::vector<double> cumulative_simpson(double h, std::span<const double> f) {
    const std::size_t n = f.size();
    if (n < 3)
        throw ShapeError("cumulative_simpson needs at least 3 samples");
    std::vector<double> F(n, 0.0);
    for (std::size_t i = 2; i < n; i += 2)
        F[i] = F[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    // First odd node from the quadratic through (0, 1, 2):
    // int_{x_0}^{x_1} = h(5 f_0 + 8 f_1 - f_2)/12.
    F[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    // Remaining odd nodes: trailing interval from the quadratic through
    // (i-2, i-1, i), int_{x_{i-1}}^{x_i} = h(-f_{i-2} + 8 f_{i-1} + 5 f_i)/12.
    for (std::size_t i = 3; i < n; i += 2)
        F[i] = F[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    return F;
}

std::vector<double> second_derivative(double h, std::span<const double> f) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    const double inv = 1.0 / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? f[i - 1] : 0.0;
        const double right = i + 1 < n ? f[i + 1] : 0.0;
        d[i] = (left - 2.0 * f[i] + right) * inv;
    }
    return d;
}

std::vector<double> first_derivative(double h, std::span<const double> f) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    const double inv = 1.0 / (2.0 * h);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? f[i - 1] : 0.0;
        const double right = i + 1 < n ? f[i + 1] : 0.0;
        d[i] = (right - left) * inv;
    }
    return d;
}

double max_abs(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

} // namespace kdvls
