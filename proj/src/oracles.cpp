#include "degenhj/oracles.hpp"

#include "degenhj/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace degenhj {

double hopflax_1d(const TerminalData& g, double y, double t, double T, std::size_t z_grid) {
    const double s = T - t;
    auto at = [&](double z) { return g(std::span<const double>(&z, 1)); };
    if (!(s > 0.0)) return at(y);
    z_grid = std::max<std::size_t>(z_grid, 3);
    const double width = g.L * s * (1.0 + 1e-6) + 1e-12;
    auto objective = [&](double z) { return (y - z) * (y - z) / (2.0 * s) + at(z); };

    const double h = 2.0 * width / static_cast<double>(z_grid - 1);
    std::size_t best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z_grid; ++i) {
        const double v = objective(y - width + h * static_cast<double>(i));
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    best = std::min(best, objective(y));

    // Golden-section search on the two cells around the discrete argmin.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = y - width + h * (static_cast<double>(best_i) - 1.0);
    double b = y - width + h * (static_cast<double>(best_i) + 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 100 && b - a > 1e-14 * (1.0 + std::abs(y)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    return std::min({best, fc, fd});
}

namespace {

// RK4 final state for uniform segments; mirrors integrate() without storing samples.
bool final_state(const Vector& y, double t, double T, std::size_t n, std::size_t segments,
                 const std::vector<double>& params, double step, Vector& out) {
    const double seg_len = (T - t) / static_cast<double>(segments);
    const auto sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(seg_len / step - 1e-12)));
    const double h = seg_len / static_cast<double>(sub);
    std::vector<double> x(y.data(), y.data() + n), tmp(n), k1(n), k2(n), k3(n), k4(n);
    for (std::size_t m = 0; m < segments; ++m) {
        const std::span<const double> a(params.data() + m * n, n);
        for (std::size_t i = 0; i < sub; ++i) {
            apply_sqrt_kernel(x, a, k1);
            for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * h * k1[j];
            apply_sqrt_kernel(tmp, a, k2);
            for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * h * k2[j];
            apply_sqrt_kernel(tmp, a, k3);
            for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + h * k3[j];
            apply_sqrt_kernel(tmp, a, k4);
            for (std::size_t j = 0; j < n; ++j) x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(x[j])) return false;
        out(static_cast<Eigen::Index>(j)) = x[j];
    }
    return true;
}

struct NelderMead {
    std::size_t evaluations = 0;

    template <class F>
    std::pair<std::vector<double>, double> minimize(F&& f, std::vector<double> x0, double scale, std::size_t budget) {
        const std::size_t dim = x0.size();
        std::vector<std::vector<double>> simplex(dim + 1, x0);
        for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += scale;
        std::vector<double> fv(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) fv[i] = eval(f, simplex[i]);
        std::vector<std::size_t> order(dim + 1);
        std::vector<double> centroid(dim), trial(dim), trial2(dim);
        std::size_t used = dim + 1;
        while (used < budget) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second = order[dim - 1];
            if (std::abs(fv[worst] - fv[best]) <= 1e-12 * (1.0 + std::abs(fv[best]))) {
                double spread = 0.0;
                for (std::size_t i = 0; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j) spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
                }
                if (spread < 1e-9) break;
            }
            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t i = 0; i <= dim; ++i) {
                if (i == worst) continue;
                for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);
            }
            for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + (centroid[j] - simplex[worst][j]);
            const double fr = eval(f, trial);
            ++used;
            if (fr < fv[best]) {
                for (std::size_t j = 0; j < dim; ++j) trial2[j] = centroid[j] + 2.0 * (centroid[j] - simplex[worst][j]);
                const double fe = eval(f, trial2);
                ++used;
                if (fe < fr) {
                    simplex[worst] = trial2;
                    fv[worst] = fe;
                } else {
                    simplex[worst] = trial;
                    fv[worst] = fr;
                }
                continue;
            }
            if (fr < fv[second]) {
                simplex[worst] = trial;
                fv[worst] = fr;
                continue;
            }
            const bool outside = fr < fv[worst];
            for (std::size_t j = 0; j < dim; ++j) {
                trial2[j] = outside ? centroid[j] + 0.5 * (trial[j] - centroid[j])
                                    : centroid[j] + 0.5 * (simplex[worst][j] - centroid[j]);
            }
            const double fc = eval(f, trial2);
            ++used;
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = trial2;
                fv[worst] = fc;
                continue;
            }
            for (std::size_t i = 0; i <= dim; ++i) {
                if (i == best) continue;
                for (std::size_t j = 0; j < dim; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
                fv[i] = eval(f, simplex[i]);
                ++used;
            }
        }
        const auto it = std::min_element(fv.begin(), fv.end());
        return {simplex[static_cast<std::size_t>(it - fv.begin())], *it};
    }

    template <class F>
    double eval(F& f, const std::vector<double>& x) {
        ++evaluations;
        return f(x);
    }
};

}  // namespace

ShootResult direct_shoot(const ConfigPoint& y, double t, double T, const TerminalData& g, const ShootOptions& options) {
    if (options.segments < 1 || options.restarts < 1) {
        throw Error(ErrorCode::InvalidInput, "direct_shoot needs at least one segment and one restart");
    }
    if (!(T > t)) throw Error(ErrorCode::InvalidInput, "direct_shoot needs t < T");
    if (!(options.step > 0.0)) throw Error(ErrorCode::InvalidInput, "direct_shoot step must be positive");
    const std::size_t n = y.dim();
    const std::size_t dim = n * options.segments;
    const double seg_len = (T - t) / static_cast<double>(options.segments);
    Vector end(static_cast<Eigen::Index>(n));
    auto cost = [&](const std::vector<double>& p) {
        double e = 0.0;
        for (const double v : p) e += v * v;
        e *= seg_len;
        if (!final_state(y.coords(), t, T, n, options.segments, p, options.step, end)) {
            return std::numeric_limits<double>::infinity();
        }
        const double c = 0.5 * e + g(end);
        return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
    };

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, options.start_scale);
    NelderMead nm;
    std::vector<double> best_p(dim, 0.0);
    double best = cost(best_p);
    for (std::size_t r = 0; r < options.restarts; ++r) {
        std::vector<double> start(dim, 0.0);
        if (r > 0) {
            for (auto& v : start) v = normal(rng);
        }
        auto [p, f] = nm.minimize(cost, start, 0.5 * options.start_scale, options.max_evaluations);
        if (f < best) {
            best = f;
            best_p = std::move(p);
        }
    }
    std::vector<Vector> values;
    for (std::size_t m = 0; m < options.segments; ++m) {
        values.push_back(Vector::Map(best_p.data() + m * n, static_cast<Eigen::Index>(n)));
    }
    return {best, PiecewiseControl::uniform(t, T, std::move(values)), nm.evaluations + 1};
}

}  // namespace degenhj
