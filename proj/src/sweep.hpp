#pragma once

// Private: one backward slice of the semi-Lagrangian recursion.

#include "degenhj/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace degenhj::detail {

struct SweepContext {
    GridSpec spec;
    double lipschitz;               ///< boundary penalty slope
    const ControlSet* controls;
    std::vector<double> sqrt_e;     ///< row-major N x N sqrt(E(node)) per node
};

[[nodiscard]] SweepContext make_context(const GridSpec& spec, const TerminalData& g, const ControlSet& controls);

void sweep_slice_serial(const SweepContext& ctx, std::span<const double> next, std::span<double> out);
void sweep_slice_omp(const SweepContext& ctx, std::span<const double> next, std::span<double> out);

}  // namespace degenhj::detail
