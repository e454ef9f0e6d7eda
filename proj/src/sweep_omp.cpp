#include "sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace degenhj::detail {

namespace {

struct Axis {
    double lo;
    double hi;
    double inv_dx;
    std::size_t last_cell;  // nx - 2

    // Clamps z into the box, returning the cell index and fraction; overflow is the clamp distance.
    void locate(double z, std::size_t& cell, double& frac, double& overflow) const {
        const double zc = z < lo ? lo : (z > hi ? hi : z);
        overflow = z - zc;
        const double u = (zc - lo) * inv_dx;
        cell = std::min(static_cast<std::size_t>(u), last_cell);
        frac = std::min(1.0, u - static_cast<double>(cell));
    }
};

struct RadiusTable {
    std::vector<double> radius;
    std::vector<double> cost;  // dt r^2 / 2
};

RadiusTable radius_table(const ControlSet& cs, double dt) {
    RadiusTable t;
    for (std::size_t r = 1; r < cs.radii.size(); ++r) {
        t.radius.push_back(cs.radii[r]);
        t.cost.push_back(0.5 * dt * cs.radii[r] * cs.radii[r]);
    }
    return t;
}

double slice_min(std::span<const double> v) {
    double m = std::numeric_limits<double>::infinity();
    for (const double x : v) m = std::min(m, x);
    return m;
}

void sweep_1d(const SweepContext& ctx, std::span<const double> next, std::span<double> out) {
    const GridSpec& s = ctx.spec;
    const double dt = s.dt();
    const double dx = s.dx();
    const Axis ax{s.lo, s.hi, 1.0 / dx, s.nx - 2};
    const RadiusTable rt = radius_table(*ctx.controls, dt);
    const double floor_value = slice_min(next);
    const auto& dirs = ctx.controls->directions;
    const auto nx = static_cast<std::ptrdiff_t>(s.nx);
    const double L = ctx.lipschitz;

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nx; ++i) {
        const double y = i + 1 == nx ? s.hi : s.lo + dx * static_cast<double>(i);
        double best = next[static_cast<std::size_t>(i)];
        for (const auto& u : dirs) {
            const double w = dt * u(0);  // sqrt(E) = 1 in one dimension
            for (std::size_t r = 0; r < rt.radius.size(); ++r) {
                if (rt.cost[r] + floor_value >= best) break;
                std::size_t c;
                double f, over;
                ax.locate(y + rt.radius[r] * w, c, f, over);
                const double a = next[c];
                const double v = a + f * (next[c + 1] - a) + L * std::abs(over) + rt.cost[r];
                if (v < best) best = v;
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    }
}

void sweep_2d(const SweepContext& ctx, std::span<const double> next, std::span<double> out) {
    const GridSpec& s = ctx.spec;
    const double dt = s.dt();
    const double dx = s.dx();
    const Axis ax{s.lo, s.hi, 1.0 / dx, s.nx - 2};
    const RadiusTable rt = radius_table(*ctx.controls, dt);
    const double floor_value = slice_min(next);
    const auto& dirs = ctx.controls->directions;
    const std::size_t nx = s.nx;
    const auto total = static_cast<std::ptrdiff_t>(s.nodes());
    const double L = ctx.lipschitz;
    const double* roots = ctx.sqrt_e.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
        const auto node = static_cast<std::size_t>(flat);
        const std::size_t i = node % nx;
        const std::size_t j = node / nx;
        const double y0 = i + 1 == nx ? s.hi : s.lo + dx * static_cast<double>(i);
        const double y1 = j + 1 == nx ? s.hi : s.lo + dx * static_cast<double>(j);
        const double d = roots[4 * node];
        const double o = roots[4 * node + 1];
        double best = next[node];
        for (const auto& u : dirs) {
            const double w0 = dt * (d * u(0) + o * u(1));
            const double w1 = dt * (o * u(0) + d * u(1));
            for (std::size_t r = 0; r < rt.radius.size(); ++r) {
                if (rt.cost[r] + floor_value >= best) break;
                std::size_t ci, cj;
                double fi, fj, oi, oj;
                ax.locate(y0 + rt.radius[r] * w0, ci, fi, oi);
                ax.locate(y1 + rt.radius[r] * w1, cj, fj, oj);
                const double* row0 = next.data() + cj * nx + ci;
                const double* row1 = row0 + nx;
                const double bottom = row0[0] + fi * (row0[1] - row0[0]);
                const double top = row1[0] + fi * (row1[1] - row1[0]);
                double v = bottom + fj * (top - bottom) + rt.cost[r];
                if (oi != 0.0 || oj != 0.0) v += L * std::sqrt(oi * oi + oj * oj);
                if (v < best) best = v;
            }
        }
        out[node] = best;
    }
}

void sweep_generic(const SweepContext& ctx, std::span<const double> next, std::span<double> out) {
    const GridSpec& s = ctx.spec;
    const std::size_t n = s.dim;
    const double dt = s.dt();
    const double dx = s.dx();
    const Axis ax{s.lo, s.hi, 1.0 / dx, s.nx - 2};
    const RadiusTable rt = radius_table(*ctx.controls, dt);
    const double floor_value = slice_min(next);
    const auto& dirs = ctx.controls->directions;
    const auto total = static_cast<std::ptrdiff_t>(s.nodes());
    const std::size_t corners = std::size_t{1} << n;

#pragma omp parallel
    {
        std::vector<double> y(n), w(n), frac(n), vals(corners);
        std::vector<std::size_t> cell(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
            const auto node = static_cast<std::size_t>(flat);
            std::size_t rest = node;
            for (std::size_t a = 0; a < n; ++a) {
                const std::size_t i = rest % s.nx;
                y[a] = i + 1 == s.nx ? s.hi : s.lo + dx * static_cast<double>(i);
                rest /= s.nx;
            }
            const double* root = ctx.sqrt_e.data() + node * n * n;
            double best = next[node];
            for (const auto& u : dirs) {
                for (std::size_t a = 0; a < n; ++a) {
                    double acc = 0.0;
                    for (std::size_t b = 0; b < n; ++b) acc += root[a * n + b] * u(static_cast<Eigen::Index>(b));
                    w[a] = dt * acc;
                }
                for (std::size_t r = 0; r < rt.radius.size(); ++r) {
                    if (rt.cost[r] + floor_value >= best) break;
                    double over2 = 0.0;
                    for (std::size_t a = 0; a < n; ++a) {
                        double over;
                        ax.locate(y[a] + rt.radius[r] * w[a], cell[a], frac[a], over);
                        over2 += over * over;
                    }
                    for (std::size_t c = 0; c < corners; ++c) {
                        std::size_t idx = 0;
                        std::size_t stride = 1;
                        for (std::size_t a = 0; a < n; ++a) {
                            idx += (cell[a] + ((c >> a) & 1U)) * stride;
                            stride *= s.nx;
                        }
                        vals[c] = next[idx];
                    }
                    for (std::size_t a = 0; a < n; ++a) {
                        const std::size_t half = corners >> (a + 1);
                        for (std::size_t c = 0; c < half; ++c) {
                            vals[c] = vals[2 * c] + frac[a] * (vals[2 * c + 1] - vals[2 * c]);
                        }
                    }
                    double v = vals[0] + rt.cost[r];
                    if (over2 != 0.0) v += ctx.lipschitz * std::sqrt(over2);
                    if (v < best) best = v;
                }
            }
            out[node] = best;
        }
    }
}

}  // namespace

void sweep_slice_omp(const SweepContext& ctx, std::span<const double> next, std::span<double> out) {
    switch (ctx.spec.dim) {
        case 1: sweep_1d(ctx, next, out); break;
        case 2: sweep_2d(ctx, next, out); break;
        default: sweep_generic(ctx, next, out); break;
    }
}

}  // namespace degenhj::detail
