#pragma once

#include "degenhj/kernel.hpp"

#include <cstddef>
#include <ostream>
#include <vector>

namespace degenhj {

/// Piecewise-constant control on [breakpoints.front(), breakpoints.back()].
/// values[k] is applied on [breakpoints[k], breakpoints[k+1]).
class PiecewiseControl {
public:
    PiecewiseControl(std::vector<double> breakpoints, std::vector<Vector> values);

    /// Single constant segment on [start, end].
    static PiecewiseControl constant(double start, double end, const Vector& value);
    /// Zero control of dimension n on [start, end].
    static PiecewiseControl zero(std::size_t n, double start, double end);
    /// `segments` equal segments on [start, end] with the given values.
    static PiecewiseControl uniform(double start, double end, std::vector<Vector> values);

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.front().size()); }
    [[nodiscard]] std::size_t segments() const noexcept { return values_.size(); }
    [[nodiscard]] double start() const noexcept { return breakpoints_.front(); }
    [[nodiscard]] double end() const noexcept { return breakpoints_.back(); }
    [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    [[nodiscard]] const std::vector<Vector>& values() const noexcept { return values_; }

    /// Index of the segment containing s; the right end belongs to the last segment.
    [[nodiscard]] std::size_t segment_at(double s) const;
    [[nodiscard]] const Vector& value_at(double s) const { return values_[segment_at(s)]; }

private:
    std::vector<double> breakpoints_;
    std::vector<Vector> values_;
};

/// x' = sqrt(E(x)) alpha sampled at every integrator step.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    PiecewiseControl control;

    [[nodiscard]] const Vector& final_state() const { return states.back(); }
};

/// Integral of |alpha|^2, exact for piecewise-constant controls.
[[nodiscard]] double energy(const PiecewiseControl& control);

/// Classical RK4 with step at most `step`, restarted at every breakpoint.
/// Integrates from t to control.end(); the control must already be defined at t.
[[nodiscard]] Trajectory integrate(const ConfigPoint& y, double t, const PiecewiseControl& control, double step);

/// Prepends a zero segment on [from, control.start()).
[[nodiscard]] PiecewiseControl pad_with_zero(const PiecewiseControl& control, double from);

/// Shifts every breakpoint by `by` >= 0.
[[nodiscard]] PiecewiseControl time_shift(const PiecewiseControl& control, double by);

/// alpha_bar(s) = -alpha(t_end - (s - t_start)) on the same interval.
[[nodiscard]] PiecewiseControl time_reverse(const PiecewiseControl& control);

/// Reversed trajectory x_bar(s) = x(t_end - (s - t_start)) driven by time_reverse(control).
[[nodiscard]] Trajectory time_reverse(const Trajectory& trajectory);

/// Largest per-step mismatch |x(s_{k+1}) - x(s_k) - int sqrt(E(x)) alpha ds|, with
/// the integral by Simpson's rule on the cubic Hermite interpolant of the samples.
[[nodiscard]] double max_ode_residual(const Trajectory& trajectory);

/// CSV with columns s, x_1..x_N, alpha_1..alpha_N.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace degenhj
