#pragma once

#include <span>
#include <vector>

#include "kdvls/errors.hpp"

namespace kdvls {

/// Uniform symmetric grid on [-L, L] with an odd number of nodes, so that
/// xi = 0 is a node and composite Simpson weights apply directly.
class Grid {
public:
    Grid(double half_length, int n_points);

    double half_length() const { return half_length_; }
    int size() const { return n_; }
    double spacing() const { return h_; }
    int center_index() const { return (n_ - 1) / 2; }
    double node(int i) const { return -half_length_ + h_ * i; }
    std::vector<double> nodes() const;

    /// Number of nodes on the half line [0, L], center included.
    int half_size() const { return (n_ + 1) / 2; }

    bool operator==(const Grid& other) const {
        return n_ == other.n_ && half_length_ == other.half_length_;
    }

    /// Default node count, overridable through the KDVLS_GRID_N environment
    /// variable (value is rounded up to the next odd integer).
    static int default_points();

private:
    double half_length_;
    int n_;
    double h_;
};

/// Composite Simpson rule over the whole grid (node count is odd by construction).
double simpson(double h, std::span<const double> f);
double simpson(const Grid& g, std::span<const double> f);

/// Cumulative Simpson integral F_i = int_{x_0}^{x_i} f.  Even nodes use the
/// composite rule; odd nodes add the 3-point Newton-Cotes correction for the
/// trailing interval, keeping O(h^4) accuracy at every node.
std::vector<double> cumulative_simpson(double h, std::span<const double> f);

/// Second-order central differences with zero ghost values outside the grid
/// (consistent with Dirichlet truncation of decaying profiles).
std::vector<double> second_derivative(double h, std::span<const double> f);
std::vector<double> first_derivative(double h, std::span<const double> f);

double max_abs(std::span<const double> f);

} // namespace kdvls
