#pragma once

#include "degenhj/grid.hpp"
#include "degenhj/terminal.hpp"

#include <cstddef>
#include <istream>
#include <ostream>

namespace degenhj {

/// Smallest nt with a_max B T / nt <= dx, so foot points stay within one cell.
[[nodiscard]] std::size_t cfl_time_slices(const GridSpec& spec, const ControlSet& controls, double B);

/// Backward semi-Lagrangian dynamic programming for the value function
///   v(y, t_k) = min_a { dt |a|^2 / 2 + I[v(., t_{k+1})](y + dt sqrt(E(y)) a) },  v(., T) = g,
/// with multilinear I. Foot points outside the box are clamped and charged L * (clamp distance).
/// Nodes of one slice are relaxed in parallel (OpenMP); the result does not depend on the
/// thread count.
[[nodiscard]] ValueGrid solve(const GridSpec& spec, const TerminalData& g, const ControlSet& controls);

/// Same recursion, single-threaded, generic in N, without pruning or specialised kernels.
/// Kept as the reference for the parallel sweep.
[[nodiscard]] ValueGrid solve_reference(const GridSpec& spec, const TerminalData& g, const ControlSet& controls);

/// CSV with columns t, y_1..y_N, v (one row per node and slice).
void write_grid_csv(std::ostream& os, const ValueGrid& grid);

/// Rebuilds a grid written by write_grid_csv. Domain, nx, nt and T are inferred from the rows;
/// `terminal`, `a_max` and `B` describe the problem that produced it.
[[nodiscard]] ValueGrid read_grid_csv(std::istream& is, const TerminalData& terminal, double a_max, double B);

}  // namespace degenhj
