#include "degenhj/grid.hpp"

#include "degenhj/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace degenhj {

ControlSet ControlSet::standard(std::size_t n, double L, double B, std::size_t n_radii, std::size_t n_angles) {
    if (n < 1) throw Error(ErrorCode::Dimension, "control set dimension must be >= 1");
    if (n_radii < 1) throw Error(ErrorCode::Configuration, "control set needs at least one nonzero radius");
    if (n == 2 && n_angles < 3) throw Error(ErrorCode::Configuration, "control set needs at least three angles");
    const double a_max = 4.0 * (L > 0.0 ? L : 1.0) * B;
    ControlSet cs;
    cs.radii.push_back(0.0);
    const double r0 = a_max / 100.0;
    for (std::size_t k = 0; k < n_radii; ++k) {
        const double f = n_radii == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(n_radii - 1);
        cs.radii.push_back(r0 * std::pow(100.0, f));
    }
    cs.radii.back() = a_max;
    const auto dim = static_cast<Eigen::Index>(n);
    if (n == 1) {
        cs.directions = {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
    } else if (n == 2) {
        for (std::size_t k = 0; k < n_angles; ++k) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_angles);
            Vector u(2);
            u << std::cos(th), std::sin(th);
            cs.directions.push_back(u);
        }
    } else {
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (const double s : {1.0, -1.0}) {
                Vector u = Vector::Zero(dim);
                u(i) = s;
                cs.directions.push_back(u);
            }
        }
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Vector u(dim);
            for (Eigen::Index i = 0; i < dim; ++i) u(i) = ((mask >> i) & 1U) ? -scale : scale;
            cs.directions.push_back(u);
        }
    }
    return cs;
}

void ControlSet::validate() const {
    if (radii.size() < 2 || radii.front() != 0.0) {
        throw Error(ErrorCode::Configuration, "control radii must start at 0 and contain a positive radius");
    }
    for (std::size_t k = 1; k < radii.size(); ++k) {
        if (!(radii[k] > radii[k - 1]) || !std::isfinite(radii[k])) {
            throw Error(ErrorCode::Configuration, "control radii must be finite and strictly increasing");
        }
    }
    if (directions.empty()) throw Error(ErrorCode::Configuration, "control set has no directions");
    for (const auto& u : directions) {
        if (u.size() != directions.front().size() || std::abs(u.norm() - 1.0) > 1e-12) {
            throw Error(ErrorCode::Configuration, "control directions must be unit vectors of one dimension");
        }
    }
}

std::size_t GridSpec::nodes() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < dim; ++i) n *= nx;
    return n;
}

double GridSpec::time(std::size_t k) const {
    return k == nt ? T : T * static_cast<double>(k) / static_cast<double>(nt);
}

ValueGrid::ValueGrid(GridSpec spec, TerminalData terminal, double a_max, double B)
    : spec_(spec), terminal_(std::move(terminal)), a_max_(a_max), B_(B) {
    if (spec_.dim < 1) throw Error(ErrorCode::Configuration, "grid dimension must be >= 1");
    if (spec_.nx < 3) throw Error(ErrorCode::Configuration, "nx must be at least 3");
    if (spec_.nt < 1) throw Error(ErrorCode::Configuration, "nt must be at least 1");
    if (!(spec_.hi > spec_.lo) || !std::isfinite(spec_.lo) || !std::isfinite(spec_.hi)) {
        throw Error(ErrorCode::Configuration, "domain bounds must satisfy lo < hi");
    }
    if (!(spec_.T > 0.0) || !std::isfinite(spec_.T)) throw Error(ErrorCode::Configuration, "horizon T must be positive");
    slices_.assign(spec_.nt + 1, std::vector<double>(spec_.nodes(), 0.0));
}

double ValueGrid::coord(std::size_t axis_index) const {
    return axis_index + 1 == spec_.nx ? spec_.hi : spec_.lo + spec_.dx() * static_cast<double>(axis_index);
}

void ValueGrid::node_point(std::size_t node, std::span<double> out) const {
    for (std::size_t a = 0; a < spec_.dim; ++a) {
        out[a] = coord(node % spec_.nx);
        node /= spec_.nx;
    }
}

Vector ValueGrid::node_point(std::size_t node) const {
    Vector p(static_cast<Eigen::Index>(spec_.dim));
    node_point(node, {p.data(), spec_.dim});
    return p;
}

std::pair<double, double> ValueGrid::interior(double t) const {
    const double shrink = B_ * a_max_ * (spec_.T - t);
    return {spec_.lo + shrink, spec_.hi - shrink};
}

bool ValueGrid::in_interior(std::span<const double> y, double t) const {
    const auto [a, b] = interior(t);
    return std::all_of(y.begin(), y.end(), [a = a, b = b](double v) { return v >= a && v <= b; });
}

namespace {

// Fractional grid coordinate snapped to integers within round-off so node queries are exact.
double grid_coordinate(double z, double lo, double step) {
    const double u = (z - lo) / step;
    const double r = std::round(u);
    return std::abs(u - r) < 1e-9 ? r : u;
}

}  // namespace

double evaluate(const ValueGrid& grid, std::span<const double> y, double t) {
    const auto& s = grid.spec();
    if (y.size() != s.dim) throw Error(ErrorCode::Dimension, "evaluate: point has the wrong dimension");
    const double slack = 1e-12 * (s.hi - s.lo);
    for (const double v : y) {
        if (!(v >= s.lo - slack && v <= s.hi + slack)) throw Error(ErrorCode::Range, "evaluate: point outside the domain");
    }
    if (!(t >= -1e-12 * s.T && t <= s.T * (1.0 + 1e-12))) throw Error(ErrorCode::Range, "evaluate: time outside [0, T]");

    std::vector<std::size_t> base(s.dim);
    std::vector<double> theta(s.dim);
    for (std::size_t a = 0; a < s.dim; ++a) {
        const double u = std::clamp(grid_coordinate(y[a], s.lo, s.dx()), 0.0, static_cast<double>(s.nx - 1));
        const auto i = std::min(static_cast<std::size_t>(u), s.nx - 2);
        base[a] = i;
        theta[a] = u - static_cast<double>(i);
    }
    const double ut = std::clamp(grid_coordinate(t, 0.0, s.dt()), 0.0, static_cast<double>(s.nt));
    const auto k = std::min(static_cast<std::size_t>(ut), s.nt - 1);
    const double tau = ut - static_cast<double>(k);

    // Nested linear interpolation, one axis at a time.
    auto spatial = [&](std::span<const double> slice) {
        const std::size_t corners = std::size_t{1} << s.dim;
        std::vector<double> vals(corners);
        for (std::size_t c = 0; c < corners; ++c) {
            std::size_t idx = 0;
            std::size_t stride = 1;
            for (std::size_t a = 0; a < s.dim; ++a) {
                idx += (base[a] + ((c >> a) & 1U)) * stride;
                stride *= s.nx;
            }
            vals[c] = slice[idx];
        }
        for (std::size_t a = 0; a < s.dim; ++a) {
            const std::size_t half = corners >> (a + 1);
            for (std::size_t c = 0; c < half; ++c) {
                const double lo_v = vals[2 * c];
                const double hi_v = vals[2 * c + 1];
                vals[c] = lo_v + theta[a] * (hi_v - lo_v);
            }
        }
        return vals[0];
    };
    const double v0 = spatial(grid.slice(k));
    if (tau == 0.0) return v0;
    const double v1 = spatial(grid.slice(k + 1));
    if (tau == 1.0) return v1;
    return v0 + tau * (v1 - v0);
}

double evaluate(const ValueGrid& grid, const Vector& y, double t) {
    return evaluate(grid, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), t);
}

}  // namespace degenhj
