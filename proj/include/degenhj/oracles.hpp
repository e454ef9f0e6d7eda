#pragma once

#include "degenhj/control.hpp"
#include "degenhj/kernel.hpp"
#include "degenhj/terminal.hpp"

#include <cstddef>
#include <cstdint>

namespace degenhj {

/// N = 1 value function by the Hopf-Lax formula
///   v(y, t) = min_z |y - z|^2 / (2 (T - t)) + g(z),
/// scanned on `z_grid` points of [y - L s, y + L s] (the minimiser cannot lie further out)
/// and refined by golden-section search around the discrete argmin. Returns g(y) at t = T.
[[nodiscard]] double hopflax_1d(const TerminalData& g, double y, double t, double T, std::size_t z_grid = 2001);

struct ShootOptions {
    std::size_t segments = 4;       ///< M equal control segments on [t, T]
    std::size_t restarts = 6;       ///< R local searches; the first starts from the zero control
    std::uint64_t seed = 1;
    double start_scale = 1.0;       ///< std-dev of random starting values
    double step = 0.01;             ///< RK4 step
    std::size_t max_evaluations = 4000;  ///< per restart
};

struct ShootResult {
    double cost;
    PiecewiseControl control;
    std::size_t evaluations;
};

/// Upper bound for v(y, t): Nelder-Mead over the M N values of a piecewise-constant
/// control minimising energy / 2 + g(x(T)). Divergent candidates cost +inf.
[[nodiscard]] ShootResult direct_shoot(const ConfigPoint& y, double t, double T, const TerminalData& g,
                                       const ShootOptions& options = {});

}  // namespace degenhj
