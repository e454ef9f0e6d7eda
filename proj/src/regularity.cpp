#include "degenhj/regularity.hpp"

#include "degenhj/error.hpp"
#include "degenhj/io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace degenhj {

namespace {

// Node index range [first, last] along one axis inside [a, b].
std::pair<std::size_t, std::size_t> index_range(const GridSpec& s, double a, double b) {
    const double dx = s.dx();
    const double lo = std::max(0.0, std::ceil((a - s.lo) / dx - 1e-9));
    const double hi = std::min(static_cast<double>(s.nx - 1), std::floor((b - s.lo) / dx + 1e-9));
    if (hi < lo) return {1, 0};
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

std::vector<std::size_t> admissible_slices(const ValueGrid& grid, const std::vector<std::size_t>& requested) {
    const auto& s = grid.spec();
    std::vector<std::size_t> out;
    auto ok = [&](std::size_t k) {
        const auto [a, b] = grid.interior(s.time(k));
        return k < s.nt && a < b;
    };
    if (requested.empty()) {
        for (std::size_t k = 0; k < s.nt; ++k) {
            if (ok(k)) out.push_back(k);
        }
    } else {
        for (const std::size_t k : requested) {
            if (k > s.nt) throw Error(ErrorCode::Configuration, "requested slice beyond nt");
            if (ok(k)) out.push_back(k);
        }
    }
    return out;
}

bool same_side_region(const Region& region, double gap_a, double gap_b) {
    switch (region.tag) {
        case RegionTag::Omega1: return gap_a >= 0.5 && gap_b >= 0.5;
        case RegionTag::Omega2: return std::abs(gap_a) <= 0.5 && std::abs(gap_b) <= 0.5;
        case RegionTag::Omega3: return gap_a <= -0.5 && gap_b <= -0.5;
        case RegionTag::OmegaDelta:
            return (gap_a >= region.delta && gap_b >= region.delta) || (gap_a <= -region.delta && gap_b <= -region.delta);
        case RegionTag::Diagonal: return false;
    }
    return false;
}

std::pair<double, double> sampling_box(const ValueGrid& grid, double t,
                                       const std::optional<std::pair<double, double>>& window) {
    auto box = grid.interior(t);
    if (window) {
        box.first = std::max(box.first, window->first);
        box.second = std::min(box.second, window->second);
    }
    return box;
}

bool inside(double a, double b, const Vector& y) { return (y.array() >= a).all() && (y.array() <= b).all(); }

}  // namespace

TimeLipschitzEstimate estimate_time_lipschitz(const ValueGrid& grid, std::size_t samples, std::uint64_t seed,
                                              const TimeSampleFilter& filter) {
    const auto& s = grid.spec();
    if (samples < 1) throw Error(ErrorCode::InvalidInput, "time Lipschitz estimate needs samples >= 1");
    TimeLipschitzEstimate est;
    const double LB = grid.terminal().L * grid.B();
    est.k_bound = 0.5 * LB * LB;

    std::vector<std::size_t> early;
    for (const std::size_t k : admissible_slices(grid, {})) {
        const auto [a, b] = grid.interior(s.time(k));
        const auto [i0, i1] = index_range(s, a, b);
        if (k + 2 <= s.nt && i0 <= i1) early.push_back(k);
    }
    if (early.empty()) throw Error(ErrorCode::EmptySample, "no slice pair with an interior node");

    std::mt19937_64 rng(seed);
    std::vector<double> y(s.dim);
    const std::size_t attempts = 50 * samples;
    for (std::size_t n = 0; n < attempts && est.count < samples; ++n) {
        const std::size_t k = early[std::uniform_int_distribution<std::size_t>(0, early.size() - 1)(rng)];
        const std::size_t kt = std::uniform_int_distribution<std::size_t>(k + 2, s.nt)(rng);
        const auto [a, b] = grid.interior(s.time(k));
        const auto [i0, i1] = index_range(s, a, b);
        std::size_t node = 0;
        std::size_t stride = 1;
        for (std::size_t ax = 0; ax < s.dim; ++ax) {
            node += std::uniform_int_distribution<std::size_t>(i0, i1)(rng) * stride;
            stride *= s.nx;
        }
        grid.node_point(node, y);
        if (filter && !filter(y, s.time(k), s.time(kt))) continue;
        const double ratio = std::abs(grid.value(kt, node) - grid.value(k, node)) / (s.time(kt) - s.time(k));
        est.k_hat = std::max(est.k_hat, ratio);
        ++est.count;
    }
    if (est.count == 0) throw Error(ErrorCode::EmptySample, "no admissible time samples");
    return est;
}

double claimed_exponent(const Region& region) {
    return region.tag == RegionTag::Diagonal || region.tag == RegionTag::Omega2 ? 0.5 : 1.0;
}

HolderFit estimate_space_holder(const ValueGrid& grid, const HolderOptions& o) {
    const auto& s = grid.spec();
    if (s.dim != 2) throw Error(ErrorCode::Dimension, "spatial Hoelder estimate is defined for N = 2");
    if (o.samples < o.min_pairs) throw Error(ErrorCode::InvalidInput, "samples must be at least min_pairs");
    const double d_lo = std::max(o.dist_lo, 2.0 * s.dx());
    if (!(o.dist_hi > d_lo)) throw Error(ErrorCode::Configuration, "dist_hi must exceed max(dist_lo, 2 dx)");
    if (std::log10(o.dist_hi / d_lo) < o.min_decades) {
        throw Error(ErrorCode::Configuration, "distance range spans fewer than the required decades");
    }
    const auto slices = admissible_slices(grid, o.slices);
    if (slices.empty()) throw Error(ErrorCode::EmptySample, "no slice with a nonempty interior");

    HolderFit fit;
    fit.gamma_claimed = claimed_exponent(o.region);
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_lo = std::log(d_lo);
    const double log_hi = std::log(o.dist_hi);
    const Vector normal = (Vector(2) << 1.0, -1.0).finished() / std::numbers::sqrt2;
    const bool cross = o.region.tag == RegionTag::Diagonal;

    // Pairs come in rays: one anchor and direction with `ladder` log-spaced distances. A ray is
    // accepted or rejected as a whole (by its longest pair), so the accepted geometry does not
    // depend on the distance and the log-log slope is not biased by rejection.
    const std::size_t ladder = std::max<std::size_t>(o.ladder, 1);
    const std::size_t rays = (o.samples + ladder - 1) / ladder;
    std::vector<PairSample> drawn;
    const std::size_t attempts = 200 * rays;
    std::vector<double> dists(ladder);
    for (std::size_t n = 0, kept = 0; n < attempts && kept < rays; ++n) {
        const std::size_t k = slices[std::uniform_int_distribution<std::size_t>(0, slices.size() - 1)(rng)];
        const double t = s.time(k);
        const auto [a, b] = sampling_box(grid, t, o.window);
        const double offset = unit(rng);
        for (std::size_t j = 0; j < ladder; ++j) {
            dists[j] = std::exp(log_lo + (log_hi - log_lo) * (static_cast<double>(j) + offset) / static_cast<double>(ladder));
        }
        Vector base(2), dir(2);
        double theta = 1.0;
        if (cross) {
            const double tau = a + (b - a) * unit(rng);
            theta = unit(rng);
            base << tau, tau;
            dir = normal;
        } else {
            base << a + (b - a) * unit(rng), a + (b - a) * unit(rng);
            const double phi = 2.0 * std::numbers::pi * unit(rng);
            if (o.transverse) {
                dir = phi < std::numbers::pi ? normal : Vector(-normal);
            } else {
                dir << std::cos(phi), std::sin(phi);
            }
        }
        auto endpoints = [&](double d) {
            if (cross) return std::make_pair(Vector(base + theta * d * dir), Vector(base - (1.0 - theta) * d * dir));
            return std::make_pair(base, Vector(base + d * dir));
        };
        if (!(a < b)) continue;
        const auto [y_far, yt_far] = endpoints(dists.back());
        if (!inside(a, b, y_far) || !inside(a, b, yt_far)) continue;
        if (!cross && !same_side_region(o.region, y_far(1) - y_far(0), yt_far(1) - yt_far(0))) continue;
        ++kept;
        for (std::size_t j = 0; j < ladder && drawn.size() < o.samples; ++j) {
            const auto [y, yt] = endpoints(dists[j]);
            const double dv = std::abs(evaluate(grid, y, t) - evaluate(grid, yt, t));
            drawn.push_back({y, yt, t, (y - yt).norm(), dv});
        }
    }
    if (drawn.empty()) throw Error(ErrorCode::EmptySample, "region has no admissible pairs on this grid");

    for (auto& p : drawn) {
        if (p.dv <= 10.0 * o.scheme_error) {
            ++fit.discarded;
        } else {
            fit.pairs.push_back(std::move(p));
        }
    }
    if (fit.pairs.empty()) {
        fit.flat = true;
        return fit;
    }
    if (fit.pairs.size() < o.min_pairs) {
        throw Error(ErrorCode::EmptySample, "only " + std::to_string(fit.pairs.size()) + " pairs survived; need " +
                                                std::to_string(o.min_pairs));
    }

    fit.count = fit.pairs.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    fit.dist_min = fit.pairs.front().dist;
    fit.dist_max = fit.pairs.front().dist;
    for (const auto& p : fit.pairs) {
        const double lx = std::log(p.dist);
        const double ly = std::log(p.dv);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        fit.dist_min = std::min(fit.dist_min, p.dist);
        fit.dist_max = std::max(fit.dist_max, p.dist);
        fit.c_hat = std::max(fit.c_hat, p.dv / std::pow(p.dist, fit.gamma_claimed));
    }
    const auto m = static_cast<double>(fit.pairs.size());
    const double var = sxx - sx * sx / m;
    if (!(var > 0.0)) throw Error(ErrorCode::Numeric, "log distances have no spread");
    fit.gamma_hat = (sxy - sx * sy / m) / var;
    fit.intercept = (sy - fit.gamma_hat * sx) / m;
    double rss = 0.0;
    for (const auto& p : fit.pairs) {
        const double r = std::log(p.dv) - fit.intercept - fit.gamma_hat * std::log(p.dist);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

double estimate_lipschitz_omega_delta(const ValueGrid& grid, double delta, const OmegaDeltaOptions& o) {
    const auto& s = grid.spec();
    if (s.dim != 2) throw Error(ErrorCode::Dimension, "Omega(delta) estimate is defined for N = 2");
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidInput, "delta must be positive");
    const double d_lo = 2.0 * s.dx();
    if (!(o.dist_hi > d_lo)) throw Error(ErrorCode::Configuration, "dist_hi must exceed 2 dx");
    const auto slices = admissible_slices(grid, o.slices);
    if (slices.empty()) throw Error(ErrorCode::EmptySample, "no slice with a nonempty interior");

    // The pool depends only on the seed and the grid, never on delta.
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_lo = std::log(d_lo);
    const double log_hi = std::log(o.dist_hi);
    const Region region = Region::omega_delta(delta);
    double c_hat = 0.0;
    std::size_t used = 0;
    for (std::size_t n = 0; n < o.samples; ++n) {
        const std::size_t k = slices[std::uniform_int_distribution<std::size_t>(0, slices.size() - 1)(rng)];
        const double t = s.time(k);
        const auto [a, b] = sampling_box(grid, t, o.window);
        Vector y(2);
        y << a + (b - a) * unit(rng), a + (b - a) * unit(rng);
        const double d = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        const Vector yt = y + d * (Vector(2) << std::cos(phi), std::sin(phi)).finished();
        if (!(a < b) || !inside(a, b, yt) || !same_side_region(region, y(1) - y(0), yt(1) - yt(0))) continue;
        c_hat = std::max(c_hat, std::abs(evaluate(grid, y, t) - evaluate(grid, yt, t)) / d);
        ++used;
    }
    if (used == 0) throw Error(ErrorCode::EmptySample, "Omega(delta) has no admissible pairs on this grid");
    return c_hat;
}

void write_pairs_csv(std::ostream& os, const std::vector<PairSample>& pairs) {
    const std::size_t n = pairs.empty() ? 2 : static_cast<std::size_t>(pairs.front().y.size());
    for (std::size_t i = 1; i <= n; ++i) os << "y_" << i << ',';
    for (std::size_t i = 1; i <= n; ++i) os << "yt_" << i << ',';
    os << "t,dist,dv\n";
    for (const auto& p : pairs) {
        for (Eigen::Index i = 0; i < p.y.size(); ++i) os << format_double(p.y(i)) << ',';
        for (Eigen::Index i = 0; i < p.y_tilde.size(); ++i) os << format_double(p.y_tilde(i)) << ',';
        os << format_double(p.t) << ',' << format_double(p.dist) << ',' << format_double(p.dv) << '\n';
    }
}

}  // namespace degenhj
