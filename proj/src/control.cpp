#include "degenhj/control.hpp"

#include "degenhj/error.hpp"
#include "degenhj/io.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace degenhj {

PiecewiseControl::PiecewiseControl(std::vector<double> breakpoints, std::vector<Vector> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::InvalidInput, "a control needs at least one segment");
    if (breakpoints_.size() != values_.size() + 1) {
        throw Error(ErrorCode::InvalidInput, "a control with M segments needs M + 1 breakpoints");
    }
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
        if (!std::isfinite(breakpoints_[k]) || !std::isfinite(breakpoints_[k + 1]) ||
            !(breakpoints_[k] < breakpoints_[k + 1])) {
            throw Error(ErrorCode::Ordering, "control breakpoints must be finite and strictly increasing");
        }
    }
    const auto n = values_.front().size();
    if (n < 1) throw Error(ErrorCode::Dimension, "control values need at least one component");
    for (const auto& v : values_) {
        if (v.size() != n) throw Error(ErrorCode::Dimension, "control values have inconsistent dimension");
        if (!v.allFinite()) throw Error(ErrorCode::InvalidInput, "control value is not finite");
    }
}

PiecewiseControl PiecewiseControl::constant(double start, double end, const Vector& value) {
    return PiecewiseControl({start, end}, {value});
}

PiecewiseControl PiecewiseControl::zero(std::size_t n, double start, double end) {
    return constant(start, end, Vector::Zero(static_cast<Eigen::Index>(n)));
}

PiecewiseControl PiecewiseControl::uniform(double start, double end, std::vector<Vector> values) {
    const std::size_t m = values.size();
    if (m == 0) throw Error(ErrorCode::InvalidInput, "a control needs at least one segment");
    std::vector<double> bp(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        bp[k] = start + (end - start) * static_cast<double>(k) / static_cast<double>(m);
    }
    bp.back() = end;
    return PiecewiseControl(std::move(bp), std::move(values));
}

std::size_t PiecewiseControl::segment_at(double s) const {
    if (s < start() || s > end()) {
        throw Error(ErrorCode::Range, "time " + std::to_string(s) + " outside the control interval");
    }
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
    const auto idx = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
    return std::min(idx == 0 ? 0 : idx - 1, values_.size() - 1);
}

double energy(const PiecewiseControl& control) {
    double total = 0.0;
    const auto& bp = control.breakpoints();
    for (std::size_t k = 0; k < control.segments(); ++k) {
        total += control.values()[k].squaredNorm() * (bp[k + 1] - bp[k]);
    }
    return total;
}

namespace {

Vector velocity(const Vector& x, const Vector& alpha) {
    Vector out(x.size());
    apply_sqrt_kernel({x.data(), static_cast<std::size_t>(x.size())},
                      {alpha.data(), static_cast<std::size_t>(alpha.size())},
                      {out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

}  // namespace

Trajectory integrate(const ConfigPoint& y, double t, const PiecewiseControl& control, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorCode::InvalidInput, "integration step must be positive");
    if (y.dim() != control.dim()) throw Error(ErrorCode::Dimension, "state and control dimensions differ");
    if (t < control.start() || t > control.end()) {
        throw Error(ErrorCode::Range, "start time is outside the control interval");
    }
    Trajectory traj{{t}, {y.coords()}, control};
    Vector x = y.coords();
    const auto& bp = control.breakpoints();
    for (std::size_t k = control.segment_at(t); k < control.segments(); ++k) {
        const double a = std::max(bp[k], t);
        const double b = bp[k + 1];
        if (!(b > a)) continue;
        const Vector& alpha = control.values()[k];
        const auto n_sub = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / step - 1e-9)));
        const double h = (b - a) / static_cast<double>(n_sub);
        for (std::size_t i = 0; i < n_sub; ++i) {
            const Vector k1 = velocity(x, alpha);
            const Vector k2 = velocity(x + 0.5 * h * k1, alpha);
            const Vector k3 = velocity(x + 0.5 * h * k2, alpha);
            const Vector k4 = velocity(x + h * k3, alpha);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!x.allFinite()) throw Error(ErrorCode::Divergence, "non-finite state during integration");
            traj.times.push_back(i + 1 == n_sub ? b : a + h * static_cast<double>(i + 1));
            traj.states.push_back(x);
        }
    }
    return traj;
}

PiecewiseControl pad_with_zero(const PiecewiseControl& control, double from) {
    if (from > control.start()) {
        throw Error(ErrorCode::Ordering, "padding time lies after the control start");
    }
    if (from == control.start()) return control;
    std::vector<double> bp{from};
    bp.insert(bp.end(), control.breakpoints().begin(), control.breakpoints().end());
    std::vector<Vector> vals{Vector::Zero(static_cast<Eigen::Index>(control.dim()))};
    vals.insert(vals.end(), control.values().begin(), control.values().end());
    return PiecewiseControl(std::move(bp), std::move(vals));
}

PiecewiseControl time_shift(const PiecewiseControl& control, double by) {
    if (!(by >= 0.0)) throw Error(ErrorCode::InvalidInput, "time shift must be nonnegative");
    if (by == 0.0) return control;
    std::vector<double> bp = control.breakpoints();
    for (auto& s : bp) s += by;
    return PiecewiseControl(std::move(bp), control.values());
}

PiecewiseControl time_reverse(const PiecewiseControl& control) {
    const double t0 = control.start();
    const double t1 = control.end();
    const auto& bp = control.breakpoints();
    std::vector<double> rbp(bp.size());
    for (std::size_t k = 0; k < bp.size(); ++k) rbp[k] = t0 + (t1 - bp[bp.size() - 1 - k]);
    rbp.front() = t0;
    rbp.back() = t1;
    std::vector<Vector> rvals(control.values().rbegin(), control.values().rend());
    for (auto& v : rvals) v = -v;
    return PiecewiseControl(std::move(rbp), std::move(rvals));
}

Trajectory time_reverse(const Trajectory& trajectory) {
    const double t0 = trajectory.times.front();
    const double t1 = trajectory.times.back();
    Trajectory r{{}, {}, time_reverse(trajectory.control)};
    r.times.reserve(trajectory.times.size());
    for (auto it = trajectory.times.rbegin(); it != trajectory.times.rend(); ++it) r.times.push_back(t0 + (t1 - *it));
    r.times.front() = t0;
    r.times.back() = t1;
    r.states.assign(trajectory.states.rbegin(), trajectory.states.rend());
    return r;
}

double max_ode_residual(const Trajectory& trajectory) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < trajectory.times.size(); ++k) {
        const double sa = trajectory.times[k];
        const double sb = trajectory.times[k + 1];
        const double h = sb - sa;
        if (!(h > 0.0)) continue;
        const Vector& alpha = trajectory.control.value_at(0.5 * (sa + sb));
        const Vector& xa = trajectory.states[k];
        const Vector& xb = trajectory.states[k + 1];
        const Vector fa = velocity(xa, alpha);
        const Vector fb = velocity(xb, alpha);
        const Vector xm = 0.5 * (xa + xb) + (h / 8.0) * (fa - fb);
        const Vector fm = velocity(xm, alpha);
        const Vector integral = (h / 6.0) * (fa + 4.0 * fm + fb);
        worst = std::max(worst, (xb - xa - integral).norm());
    }
    return worst;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
    const std::size_t n = trajectory.control.dim();
    os << "s";
    for (std::size_t i = 1; i <= n; ++i) os << ",x_" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",alpha_" << i;
    os << '\n';
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        const double s = trajectory.times[k];
        const Vector& alpha = trajectory.control.value_at(std::clamp(s, trajectory.control.start(), trajectory.control.end()));
        os << format_double(s);
        for (Eigen::Index i = 0; i < trajectory.states[k].size(); ++i) os << ',' << format_double(trajectory.states[k](i));
        for (Eigen::Index i = 0; i < alpha.size(); ++i) os << ',' << format_double(alpha(i));
        os << '\n';
    }
}

}  // namespace degenhj
