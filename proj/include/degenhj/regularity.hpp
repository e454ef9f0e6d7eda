#pragma once

#include "degenhj/grid.hpp"
#include "degenhj/witness.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <ostream>
#include <span>
#include <vector>

namespace degenhj {

/// Optional restriction on time samples: (y, t, t_tilde) -> keep?
using TimeSampleFilter = std::function<bool(std::span<const double>, double, double)>;

struct TimeLipschitzEstimate {
    double k_hat = 0.0;
    double k_bound = 0.0;  ///< (L B)^2 / 2
    std::size_t count = 0;
};

/// k_hat = max |v(y,t) - v(y,t')| / |t - t'| over random nodes and slice pairs at least
/// two slices apart, with y inside the domain of dependence at the earlier time.
[[nodiscard]] TimeLipschitzEstimate estimate_time_lipschitz(const ValueGrid& grid, std::size_t samples,
                                                            std::uint64_t seed, const TimeSampleFilter& filter = {});

struct PairSample {
    Vector y;
    Vector y_tilde;
    double t;
    double dist;
    double dv;
};

struct HolderOptions {
    /// Diagonal selects pairs whose segment crosses D transversally; any other tag
    /// selects pairs with both endpoints and the segment inside that region.
    Region region{RegionTag::Diagonal, 0.0};
    double dist_lo = 0.0;  ///< raised to 2 dx if smaller
    double dist_hi = 0.5;
    std::size_t samples = 400;
    /// Pairs per ray (anchor and direction shared, distances log-spaced over the range).
    std::size_t ladder = 8;
    /// Region pairs run along +-(1, -1)/sqrt(2), the direction cross-diagonal pairs use;
    /// false draws a uniform direction.
    bool transverse = true;
    std::uint64_t seed = 1;
    /// Pairs with |dv| <= 10 * scheme_error are discarded.
    double scheme_error = 1e-13;
    std::size_t min_pairs = 200;
    double min_decades = 1.0;
    /// Slices to draw times from; empty means every slice k < nt with a nonempty interior.
    std::vector<std::size_t> slices;
    /// Optional sampling window [lo, hi]^2, intersected with the interior box.
    std::optional<std::pair<double, double>> window;
};

struct HolderFit {
    double gamma_hat = 0.0;
    double intercept = 0.0;     ///< log c in log|dv| = log c + gamma log|dy|
    double residual = 0.0;      ///< RMS of the log-log fit
    double gamma_claimed = 0.0;
    double c_hat = 0.0;         ///< max |dv| / |dy|^gamma_claimed
    std::size_t count = 0;
    std::size_t discarded = 0;
    double dist_min = 0.0;
    double dist_max = 0.0;
    bool flat = false;          ///< every pair was below the discard threshold
    std::vector<PairSample> pairs;
};

/// 1/2 for D and Omega2 pairs, 1 for Omega1, Omega3 and Omega(delta).
[[nodiscard]] double claimed_exponent(const Region& region);

/// N = 2 only. Throws EmptySample when fewer than min_pairs pairs survive (unless all are flat).
[[nodiscard]] HolderFit estimate_space_holder(const ValueGrid& grid, const HolderOptions& options);

struct OmegaDeltaOptions {
    std::size_t samples = 4000;  ///< size of the candidate pool, independent of delta
    std::uint64_t seed = 1;
    double dist_hi = 1.0;
    std::vector<std::size_t> slices;
    std::optional<std::pair<double, double>> window;
};

/// C_hat = max |dv| / |dy| over same-time pairs with both points on one side of D at gap >= delta.
/// Candidates come from one seeded pool filtered by delta, so C_hat is nonincreasing in delta.
[[nodiscard]] double estimate_lipschitz_omega_delta(const ValueGrid& grid, double delta, const OmegaDeltaOptions& options);

/// y_1..y_N, yt_1..yt_N, t, dist, dv.
void write_pairs_csv(std::ostream& os, const std::vector<PairSample>& pairs);

}  // namespace degenhj
