#pragma once

#include "degenhj/control.hpp"
#include "degenhj/kernel.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace degenhj {

// Region decomposition of R^2 by the signed gap y2 - y1.

enum class RegionTag { Diagonal, Omega1, Omega2, Omega3, OmegaDelta };

struct Region {
    RegionTag tag = RegionTag::Omega2;
    double delta = 0.0;  ///< only meaningful for OmegaDelta

    static Region omega_delta(double delta) { return {RegionTag::OmegaDelta, delta}; }
};

[[nodiscard]] std::string_view to_string(RegionTag tag) noexcept;

/// Membership of a point in every region. The sets overlap on |y2 - y1| = 1/2;
/// `primary` resolves the overlap in favour of Omega2.
struct RegionClass {
    RegionTag primary;
    double signed_gap;  ///< y2 - y1
    bool on_diagonal;
    bool in_omega1;
    bool in_omega2;
    bool in_omega3;
    std::optional<bool> in_omega_delta;
};

[[nodiscard]] RegionClass classify_region(const ConfigPoint& y, std::optional<double> delta = std::nullopt);

/// True when y belongs to the closed region (Diagonal means on D).
[[nodiscard]] bool in_region(const Region& region, const ConfigPoint& y);

// Witness certificates.

enum class WitnessLemma { DiagonalToPoint, AlongDiagonal, StraightHolder, StraightLipschitz };

[[nodiscard]] std::string_view to_string(WitnessLemma lemma) noexcept;

enum class StraightMode { Holder, Lipschitz };

struct WitnessOptions {
    double lipschitz = 1.0;  ///< L of the terminal data
    double horizon = std::numeric_limits<double>::infinity();
    std::size_t initial_segments = 512;
    std::size_t max_segments = 1U << 15;
    double energy_rel_change = 1e-8;  ///< stop doubling once energy moves less than this
    std::size_t substeps = 2;         ///< RK4 steps per control segment
};

/// A feasible control steering y_tilde (at time t) to y (at t_tilde = t + a|y - y_tilde|^gamma)
/// with energy at most b|y - y_tilde|^gamma, plus the resulting Hoelder constant c.
struct WitnessCertificate {
    WitnessLemma lemma;
    ConfigPoint y;
    ConfigPoint y_tilde;
    double t;
    double t_tilde;
    double a;
    double b;
    double gamma;
    std::optional<Trajectory> trajectory;  ///< empty for the zero-duration certificate y == y_tilde
    double L;
    double B;
    double c;
    bool exceeds_horizon = false;

    [[nodiscard]] double distance() const { return (y.coords() - y_tilde.coords()).norm(); }
    [[nodiscard]] double energy_bound() const;
    [[nodiscard]] double measured_energy() const;
};

struct VerificationReport {
    bool endpoint_ok = false;
    bool residual_ok = false;
    bool energy_ok = false;
    bool detour_ok = false;
    double endpoint_error = 0.0;
    double duration_error = 0.0;
    double max_residual = 0.0;
    double energy = 0.0;
    double energy_bound = 0.0;
    double max_detour = 0.0;

    [[nodiscard]] bool valid() const noexcept { return endpoint_ok && residual_ok && energy_ok && detour_ok; }
};

/// y on D, y_tilde off D, |y - y_tilde| <= 1: quadratic ramp towards y, a = 2, gamma = 1/2, b = 4 + sqrt(2).
[[nodiscard]] WitnessCertificate witness_diagonal_to_point(const ConfigPoint& y, const ConfigPoint& y_tilde, double t,
                                                           const WitnessOptions& opts = {});

/// Both points on D: constant control sgn(y1 - y_tilde1) (1, 0), a = 1, gamma = 1, b = 1.
[[nodiscard]] WitnessCertificate witness_along_diagonal(const ConfigPoint& y, const ConfigPoint& y_tilde, double t,
                                                        const WitnessOptions& opts = {});

/// Straight segment between same-side points. Holder: both in Omega2, |y - y_tilde| <= 1/2 and
/// min gap > sqrt(2)|y - y_tilde|, duration |y - y_tilde|^{1/2}. Lipschitz: segment in Omega1 or
/// Omega3, duration |y - y_tilde|.
[[nodiscard]] WitnessCertificate witness_straight_offdiagonal(const ConfigPoint& y, const ConfigPoint& y_tilde,
                                                              double t, StraightMode mode,
                                                              const WitnessOptions& opts = {});

/// Checks the endpoint (including t_tilde - t = a d^gamma), ODE residual, energy and detour conditions.
[[nodiscard]] VerificationReport verify_certificate(const WitnessCertificate& cert, double tol);

/// Reversed certificate from y to y_tilde built from the same path run backwards.
[[nodiscard]] WitnessCertificate reverse_certificate(const WitnessCertificate& cert);

/// c = b/2 + L dist^{1 - gamma} + a (L B)^2 / 2.
[[nodiscard]] double holder_constant(double a, double b, double gamma, double L, double B, double dist);

/// Sequence of certificates joining y_tilde to y through intermediate points, used where the
/// regularity argument goes through a projection or intersection point.
struct WitnessChain {
    std::vector<WitnessCertificate> legs;
    /// Sum over legs of c_i |leg_i|^{gamma_i}: a bound on |v(y,t) - v(y_tilde,t)|.
    double holder_bound = 0.0;
};

/// Picks the applicable construction for a pair in R^2 with |y - y_tilde| < 1/2.
[[nodiscard]] WitnessChain witness_chain(const ConfigPoint& y, const ConfigPoint& y_tilde, double t,
                                         const WitnessOptions& opts = {});

}  // namespace degenhj
