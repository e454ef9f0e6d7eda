#pragma once

#include "degenhj/kernel.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace degenhj {

/// Bounded Lipschitz terminal cost g with its exact Lipschitz constant and sup norm.
struct TerminalData {
    std::string name;
    std::function<double(std::span<const double>)> g;
    double L = 0.0;
    double sup_norm = 0.0;

    double operator()(std::span<const double> y) const { return g(y); }
    double operator()(const Vector& y) const { return g({y.data(), static_cast<std::size_t>(y.size())}); }
};

/// g == c.
[[nodiscard]] TerminalData constant_terminal(double c);

/// g(y) = min(|y - center|, radius); L = 1, sup = radius.
[[nodiscard]] TerminalData clamped_distance_terminal(Vector center, double radius);

/// g(y) = scale * prod_i sin(frequency * y_i); L = |scale| * frequency, sup = |scale|.
[[nodiscard]] TerminalData sine_product_terminal(double scale, double frequency = 1.0);

/// Largest |g(y) - g(y')| / (L |y - y'|) and max |g| / sup over random pairs in [lo, hi]^n.
/// Both ratios are <= 1 for correctly declared constants.
struct TerminalSpotCheck {
    double lipschitz_ratio = 0.0;
    double sup_ratio = 0.0;
};

[[nodiscard]] TerminalSpotCheck spot_check(const TerminalData& data, std::size_t n, double lo, double hi,
                                           std::size_t samples, std::uint64_t seed);

}  // namespace degenhj
