#include "degenhj/terminal.hpp"

#include "degenhj/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace degenhj {

TerminalData constant_terminal(double c) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidInput, "constant terminal value must be finite");
    return {"constant", [c](std::span<const double>) { return c; }, 0.0, std::abs(c)};
}

TerminalData clamped_distance_terminal(Vector center, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidInput, "clamp radius must be >= 0");
    if (!center.allFinite() || center.size() < 1) throw Error(ErrorCode::InvalidInput, "clamp center must be finite");
    auto g = [center = std::move(center), radius](std::span<const double> y) {
        if (y.size() != static_cast<std::size_t>(center.size())) {
            throw Error(ErrorCode::Dimension, "terminal data evaluated at a point of the wrong dimension");
        }
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double d = y[i] - center(static_cast<Eigen::Index>(i));
            s += d * d;
        }
        return std::min(std::sqrt(s), radius);
    };
    return {"clamped_distance", std::move(g), radius > 0.0 ? 1.0 : 0.0, radius};
}

TerminalData sine_product_terminal(double scale, double frequency) {
    if (!std::isfinite(scale) || !(frequency > 0.0)) throw Error(ErrorCode::InvalidInput, "bad sine terminal parameters");
    auto g = [scale, frequency](std::span<const double> y) {
        double p = scale;
        for (const double v : y) p *= std::sin(frequency * v);
        return p;
    };
    return {"sine_product", std::move(g), std::abs(scale) * frequency, std::abs(scale)};
}

TerminalSpotCheck spot_check(const TerminalData& data, std::size_t n, double lo, double hi, std::size_t samples,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    TerminalSpotCheck out;
    std::vector<double> a(n), b(n);
    for (std::size_t k = 0; k < samples; ++k) {
        double dist2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
            dist2 += (a[i] - b[i]) * (a[i] - b[i]);
        }
        const double ga = data(a);
        const double gb = data(b);
        if (data.sup_norm > 0.0) out.sup_ratio = std::max(out.sup_ratio, std::abs(ga) / data.sup_norm);
        const double dg = std::abs(ga - gb);
        if (dist2 > 0.0 && dg > 0.0) {
            out.lipschitz_ratio = std::max(out.lipschitz_ratio, data.L > 0.0 ? dg / (data.L * std::sqrt(dist2))
                                                                              : std::numeric_limits<double>::infinity());
        }
    }
    return out;
}

}  // namespace degenhj
