#include "sweep.hpp"

#include <algorithm>
#include <cmath>

namespace degenhj::detail {

namespace {

// Multilinear interpolation as a weighted sum over the 2^N cell corners.
double interpolate_clamped(const GridSpec& s, double lipschitz, std::span<const double> next,
                           const std::vector<double>& foot, std::vector<std::size_t>& base,
                           std::vector<double>& theta) {
    const double dx = s.dx();
    double overflow2 = 0.0;
    for (std::size_t a = 0; a < s.dim; ++a) {
        const double z = std::clamp(foot[a], s.lo, s.hi);
        overflow2 += (foot[a] - z) * (foot[a] - z);
        const double u = (z - s.lo) / dx;
        const auto i = std::min(static_cast<std::size_t>(u), s.nx - 2);
        base[a] = i;
        theta[a] = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
    }
    double value = 0.0;
    for (std::size_t c = 0; c < (std::size_t{1} << s.dim); ++c) {
        double w = 1.0;
        std::size_t idx = 0;
        std::size_t stride = 1;
        for (std::size_t a = 0; a < s.dim; ++a) {
            const bool up = (c >> a) & 1U;
            w *= up ? theta[a] : 1.0 - theta[a];
            idx += (base[a] + (up ? 1 : 0)) * stride;
            stride *= s.nx;
        }
        value += w * next[idx];
    }
    return value + lipschitz * std::sqrt(overflow2);
}

}  // namespace

void sweep_slice_serial(const SweepContext& ctx, std::span<const double> next, std::span<double> out) {
    const GridSpec& s = ctx.spec;
    const ControlSet& cs = *ctx.controls;
    const std::size_t n = s.dim;
    const double dt = s.dt();
    const double dx = s.dx();
    std::vector<double> y(n), foot(n), theta(n);
    std::vector<std::size_t> base(n);
    for (std::size_t node = 0; node < s.nodes(); ++node) {
        std::size_t rest = node;
        for (std::size_t a = 0; a < n; ++a) {
            const std::size_t i = rest % s.nx;
            y[a] = i + 1 == s.nx ? s.hi : s.lo + dx * static_cast<double>(i);
            rest /= s.nx;
        }
        const double* root = ctx.sqrt_e.data() + node * n * n;
        double best = next[node];  // zero control
        for (const auto& u : cs.directions) {
            for (std::size_t r = 1; r < cs.radii.size(); ++r) {
                const double radius = cs.radii[r];
                for (std::size_t a = 0; a < n; ++a) {
                    double v = 0.0;
                    for (std::size_t b = 0; b < n; ++b) v += root[a * n + b] * u(static_cast<Eigen::Index>(b));
                    foot[a] = y[a] + dt * radius * v;
                }
                const double candidate = 0.5 * dt * radius * radius +
                                         interpolate_clamped(s, ctx.lipschitz, next, foot, base, theta);
                best = std::min(best, candidate);
            }
        }
        out[node] = best;
    }
}

}  // namespace degenhj::detail
