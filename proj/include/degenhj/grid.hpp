#pragma once

#include "degenhj/kernel.hpp"
#include "degenhj/terminal.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace degenhj {

/// Discretisation of the Legendre dual variable: {0} plus radii x directions.
struct ControlSet {
    std::vector<double> radii;       ///< increasing, radii.front() == 0
    std::vector<Vector> directions;  ///< unit vectors

    [[nodiscard]] double a_max() const { return radii.back(); }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(directions.front().size()); }

    /// a_max = 4 L B (4 B when L = 0); `n_radii` geometric radii from a_max/100 to a_max.
    /// Directions: n_angles uniform angles for N = 2, {+1, -1} for N = 1, and the
    /// signed axes plus the 2^N signed diagonals otherwise.
    [[nodiscard]] static ControlSet standard(std::size_t n, double L, double B, std::size_t n_radii = 16,
                                             std::size_t n_angles = 32);

    void validate() const;
};

/// Uniform space-time grid: [lo, hi]^N with nx nodes per axis, t_k = k T / nt.
struct GridSpec {
    std::size_t dim = 1;
    double lo = -1.0;
    double hi = 1.0;
    std::size_t nx = 3;
    std::size_t nt = 1;
    double T = 1.0;

    [[nodiscard]] double dx() const { return (hi - lo) / static_cast<double>(nx - 1); }
    [[nodiscard]] double dt() const { return T / static_cast<double>(nt); }
    [[nodiscard]] std::size_t nodes() const;
    [[nodiscard]] double time(std::size_t k) const;
};

/// v(node, t_k) for k = 0..nt. Node index is axis-0 fastest.
class ValueGrid {
public:
    ValueGrid(GridSpec spec, TerminalData terminal, double a_max, double B);

    [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const TerminalData& terminal() const noexcept { return terminal_; }
    [[nodiscard]] double a_max() const noexcept { return a_max_; }
    [[nodiscard]] double B() const noexcept { return B_; }

    [[nodiscard]] std::span<double> slice(std::size_t k) { return slices_.at(k); }
    [[nodiscard]] std::span<const double> slice(std::size_t k) const { return slices_.at(k); }
    [[nodiscard]] double value(std::size_t k, std::size_t node) const { return slices_.at(k)[node]; }

    [[nodiscard]] double coord(std::size_t axis_index) const;
    /// Node coordinates of a flat node index.
    void node_point(std::size_t node, std::span<double> out) const;
    [[nodiscard]] Vector node_point(std::size_t node) const;

    /// Interior box [lo + B a_max (T - t), hi - B a_max (T - t)] where boundary
    /// treatment cannot have reached; empty when first > second.
    [[nodiscard]] std::pair<double, double> interior(double t) const;
    [[nodiscard]] bool in_interior(std::span<const double> y, double t) const;

private:
    GridSpec spec_;
    TerminalData terminal_;
    double a_max_;
    double B_;
    std::vector<std::vector<double>> slices_;
};

/// Multilinear in space, linear in time. Throws Range outside [lo, hi]^N x [0, T].
[[nodiscard]] double evaluate(const ValueGrid& grid, std::span<const double> y, double t);
[[nodiscard]] double evaluate(const ValueGrid& grid, const Vector& y, double t);

}  // namespace degenhj
