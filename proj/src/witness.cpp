#include "degenhj/witness.hpp"

#include "degenhj/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace degenhj {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double gap_of(const ConfigPoint& p) { return p[1] - p[0]; }
bool on_diagonal(const ConfigPoint& p) { return std::abs(gap_of(p)) < kDegeneracyFloor; }

void require_2d(const ConfigPoint& a, const ConfigPoint& b, const char* op) {
    if (a.dim() != 2 || b.dim() != 2) {
        throw Error(ErrorCode::Dimension, std::string(op) + " is defined for N = 2 only");
    }
}

void require_options(const WitnessOptions& opts) {
    if (opts.initial_segments < 1 || opts.max_segments < opts.initial_segments || opts.substeps < 1) {
        throw Error(ErrorCode::InvalidInput, "witness sampling options are inconsistent");
    }
    if (!(opts.lipschitz >= 0.0)) throw Error(ErrorCode::InvalidInput, "Lipschitz constant must be nonnegative");
}

// Samples alpha at segment midpoints, doubling the segment count until the energy settles,
// then integrates the resulting piecewise-constant control from `start`.
template <class AlphaAt>
Trajectory sample_and_integrate(const ConfigPoint& start, double t0, double t1, AlphaAt&& alpha_at,
                                const WitnessOptions& opts) {
    std::size_t m = opts.initial_segments;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (;;) {
        std::vector<Vector> values;
        values.reserve(m);
        const double h = (t1 - t0) / static_cast<double>(m);
        for (std::size_t k = 0; k < m; ++k) {
            values.push_back(alpha_at(t0 + (static_cast<double>(k) + 0.5) * h));
        }
        PiecewiseControl control = PiecewiseControl::uniform(t0, t1, std::move(values));
        const double e = energy(control);
        const bool settled = std::isfinite(previous) && std::abs(e - previous) <= opts.energy_rel_change * std::max(e, 1e-300);
        if (settled || m * 2 > opts.max_segments) {
            return integrate(start, t0, control, h / static_cast<double>(opts.substeps));
        }
        previous = e;
        m *= 2;
    }
}

WitnessCertificate make_certificate(WitnessLemma lemma, const ConfigPoint& y, const ConfigPoint& y_tilde, double t,
                                    double a, double b, double gamma, const WitnessOptions& opts) {
    const double d = (y.coords() - y_tilde.coords()).norm();
    const double B = global_sqrt_kernel_bound(2);
    WitnessCertificate cert{lemma, y, y_tilde, t, t + a * std::pow(d, gamma), a, b, gamma, std::nullopt,
                            opts.lipschitz, B, holder_constant(a, b, gamma, opts.lipschitz, B, d)};
    cert.exceeds_horizon = cert.t_tilde > opts.horizon;
    return cert;
}

}  // namespace

std::string_view to_string(RegionTag tag) noexcept {
    switch (tag) {
        case RegionTag::Diagonal: return "diagonal";
        case RegionTag::Omega1: return "omega1";
        case RegionTag::Omega2: return "omega2";
        case RegionTag::Omega3: return "omega3";
        case RegionTag::OmegaDelta: return "omega_delta";
    }
    return "unknown";
}

std::string_view to_string(WitnessLemma lemma) noexcept {
    switch (lemma) {
        case WitnessLemma::DiagonalToPoint: return "diagonal_to_point";
        case WitnessLemma::AlongDiagonal: return "along_diagonal";
        case WitnessLemma::StraightHolder: return "straight_holder";
        case WitnessLemma::StraightLipschitz: return "straight_lipschitz";
    }
    return "unknown";
}

RegionClass classify_region(const ConfigPoint& y, std::optional<double> delta) {
    if (y.dim() != 2) throw Error(ErrorCode::Dimension, "regions are defined in R^2");
    const double g = gap_of(y);
    RegionClass rc{};
    rc.signed_gap = g;
    rc.on_diagonal = on_diagonal(y);
    rc.in_omega1 = g >= 0.5;
    rc.in_omega2 = std::abs(g) <= 0.5;
    rc.in_omega3 = g <= -0.5;
    rc.primary = rc.in_omega2 ? RegionTag::Omega2 : (rc.in_omega1 ? RegionTag::Omega1 : RegionTag::Omega3);
    if (delta) rc.in_omega_delta = std::abs(g) >= *delta;
    return rc;
}

bool in_region(const Region& region, const ConfigPoint& y) {
    const auto rc = classify_region(y, region.delta);
    switch (region.tag) {
        case RegionTag::Diagonal: return rc.on_diagonal;
        case RegionTag::Omega1: return rc.in_omega1;
        case RegionTag::Omega2: return rc.in_omega2;
        case RegionTag::Omega3: return rc.in_omega3;
        case RegionTag::OmegaDelta: return *rc.in_omega_delta;
    }
    return false;
}

double WitnessCertificate::energy_bound() const { return b * std::pow(distance(), gamma); }

double WitnessCertificate::measured_energy() const { return trajectory ? energy(trajectory->control) : 0.0; }

double holder_constant(double a, double b, double gamma, double L, double B, double dist) {
    if (a < 0.0 || b < 0.0 || L < 0.0 || B < 0.0 || dist < 0.0) {
        throw Error(ErrorCode::InvalidInput, "holder_constant needs nonnegative inputs");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::InvalidInput, "gamma must lie in (0, 1]");
    const double lb = L * B;
    return 0.5 * b + L * std::pow(dist, 1.0 - gamma) + 0.5 * a * lb * lb;
}

WitnessCertificate witness_diagonal_to_point(const ConfigPoint& y, const ConfigPoint& y_tilde, double t,
                                             const WitnessOptions& opts) {
    require_2d(y, y_tilde, "witness_diagonal_to_point");
    require_options(opts);
    if (!on_diagonal(y)) throw Error(ErrorCode::Region, "target point y must lie on the diagonal");
    if (on_diagonal(y_tilde)) throw Error(ErrorCode::Region, "start point y_tilde must lie off the diagonal");
    const Vector xi = y.coords() - y_tilde.coords();
    const double d = xi.norm();
    if (d > 1.0) throw Error(ErrorCode::OutOfScope, "diagonal witness needs |y - y_tilde| <= 1");

    auto cert = make_certificate(WitnessLemma::DiagonalToPoint, y, y_tilde, t, 2.0, 4.0 + kSqrt2, 0.5, opts);
    const double root_d = std::sqrt(d);
    const double gap_tilde = std::abs(gap_of(y_tilde));
    const double sum = xi(0) + xi(1);
    const double diff = xi(0) - xi(1);
    // alpha(s) = tau^{-1} sqrt(E(x(s)))^{-1} (y - x(s)) with x(s) = sigma y_tilde + (1 - sigma) y,
    // tau = sqrt(d) - (s - t)/2 and sigma = tau^2/d; written so that tau -> 0 stays finite.
    auto alpha_at = [&](double s) {
        const double tau = root_d - 0.5 * (s - t);
        const double ratio = tau / d;  // sigma / tau
        const double gap = tau * tau / d * gap_tilde;
        const double along = ratio * sum / std::sqrt(1.0 + std::exp(-gap));
        const double across = ratio * diff / std::sqrt(-std::expm1(-gap));
        Vector a(2);
        a << 0.5 * (along + across), 0.5 * (along - across);
        return a;
    };
    cert.trajectory = sample_and_integrate(y_tilde, t, cert.t_tilde, alpha_at, opts);
    return cert;
}

WitnessCertificate witness_along_diagonal(const ConfigPoint& y, const ConfigPoint& y_tilde, double t,
                                          const WitnessOptions& opts) {
    require_2d(y, y_tilde, "witness_along_diagonal");
    require_options(opts);
    if (!on_diagonal(y) || !on_diagonal(y_tilde)) {
        throw Error(ErrorCode::Region, "both points must lie on the diagonal");
    }
    auto cert = make_certificate(WitnessLemma::AlongDiagonal, y, y_tilde, t, 1.0, 1.0, 1.0, opts);
    const double d = cert.distance();
    if (d == 0.0) return cert;
    Vector alpha(2);
    alpha << (y[0] > y_tilde[0] ? 1.0 : -1.0), 0.0;
    const auto control = PiecewiseControl::constant(t, cert.t_tilde, alpha);
    cert.trajectory = integrate(y_tilde, t, control, d / static_cast<double>(opts.initial_segments));
    return cert;
}

WitnessCertificate witness_straight_offdiagonal(const ConfigPoint& y, const ConfigPoint& y_tilde, double t,
                                                StraightMode mode, const WitnessOptions& opts) {
    require_2d(y, y_tilde, "witness_straight_offdiagonal");
    require_options(opts);
    const Vector xi = y.coords() - y_tilde.coords();
    const double d = xi.norm();
    const double g = gap_of(y);
    const double gt = gap_of(y_tilde);
    const auto lemma = mode == StraightMode::Holder ? WitnessLemma::StraightHolder : WitnessLemma::StraightLipschitz;
    const double gamma = mode == StraightMode::Holder ? 0.5 : 1.0;
    const double b = mode == StraightMode::Holder ? (3.0 + kSqrt2) / (2.0 * kSqrt2) : 1.0 + 1.0 / (-std::expm1(-0.5));
    if (d == 0.0) return make_certificate(lemma, y, y_tilde, t, 1.0, b, gamma, opts);

    if (on_diagonal(y) || on_diagonal(y_tilde) || (g > 0.0) != (gt > 0.0)) {
        throw Error(ErrorCode::Region, "straight witness needs both points strictly on the same side of D");
    }
    if (mode == StraightMode::Holder) {
        if (std::abs(g) > 0.5 || std::abs(gt) > 0.5) throw Error(ErrorCode::OutOfScope, "Hoelder mode needs both points in Omega2");
        if (d > 0.5) throw Error(ErrorCode::OutOfScope, "Hoelder mode needs |y - y_tilde| <= 1/2");
        if (!(std::min(std::abs(g), std::abs(gt)) > kSqrt2 * d)) {
            throw Error(ErrorCode::OutOfScope, "Hoelder mode needs min |x1 - x2| > sqrt(2) |y - y_tilde|");
        }
    } else if (std::min(std::abs(g), std::abs(gt)) < 0.5) {
        throw Error(ErrorCode::OutOfScope, "Lipschitz mode needs the segment inside Omega1 or Omega3");
    }

    auto cert = make_certificate(lemma, y, y_tilde, t, 1.0, b, gamma, opts);
    const double duration = cert.t_tilde - t;
    const Eigen::Vector2d xi2(xi(0), xi(1));
    auto alpha_at = [&](double s) {
        const Vector x = y_tilde.coords() + ((s - t) / duration) * xi;
        const Eigen::Vector2d a = inv_sqrt_apply(ConfigPoint(x), xi2) / duration;
        return Vector(a);
    };
    cert.trajectory = sample_and_integrate(y_tilde, t, cert.t_tilde, alpha_at, opts);
    return cert;
}

VerificationReport verify_certificate(const WitnessCertificate& cert, double tol) {
    VerificationReport r;
    const double d = cert.distance();
    r.duration_error = std::abs((cert.t_tilde - cert.t) - cert.a * std::pow(d, cert.gamma));
    const bool duration_ok = r.duration_error <= 1e-12 * std::max(1.0, std::abs(cert.t_tilde));
    r.energy_bound = cert.energy_bound();
    if (!cert.trajectory) {
        r.endpoint_error = d;
        r.endpoint_ok = d <= tol && duration_ok;
        r.residual_ok = true;
        r.energy_ok = true;
        r.detour_ok = true;
        return r;
    }
    const Trajectory& tr = *cert.trajectory;
    const double start_error = (tr.states.front() - cert.y_tilde.coords()).norm();
    r.endpoint_error = std::max((tr.final_state() - cert.y.coords()).norm(), start_error);
    const bool times_ok = std::abs(tr.times.front() - cert.t) <= 1e-12 * std::max(1.0, std::abs(cert.t)) &&
                          std::abs(tr.times.back() - cert.t_tilde) <= 1e-12 * std::max(1.0, std::abs(cert.t_tilde));
    r.endpoint_ok = r.endpoint_error <= tol && duration_ok && times_ok;
    r.max_residual = max_ode_residual(tr);
    r.residual_ok = r.max_residual <= tol;
    r.energy = energy(tr.control);
    r.energy_ok = r.energy <= r.energy_bound * (1.0 + 1e-8);
    for (const auto& x : tr.states) r.max_detour = std::max(r.max_detour, (cert.y.coords() - x).norm());
    r.detour_ok = r.max_detour <= d + tol;
    return r;
}

WitnessCertificate reverse_certificate(const WitnessCertificate& cert) {
    WitnessCertificate r = cert;
    r.y = cert.y_tilde;
    r.y_tilde = cert.y;
    if (cert.trajectory) r.trajectory = time_reverse(*cert.trajectory);
    return r;
}

namespace {

void append_leg(WitnessChain& chain, WitnessCertificate leg) {
    chain.holder_bound += leg.c * std::pow(leg.distance(), leg.gamma);
    chain.legs.push_back(std::move(leg));
}

// Legs through a diagonal point xi, each covered by the diagonal-to-point construction.
void chain_through_diagonal(WitnessChain& chain, const ConfigPoint& xi, const ConfigPoint& p, const ConfigPoint& q,
                            double t, const WitnessOptions& opts) {
    for (const ConfigPoint* end : {&p, &q}) {
        if (on_diagonal(*end)) {
            append_leg(chain, witness_along_diagonal(xi, *end, t, opts));
        } else {
            append_leg(chain, witness_diagonal_to_point(xi, *end, t, opts));
        }
    }
}

ConfigPoint project_to_diagonal(const ConfigPoint& p) {
    const double m = 0.5 * (p[0] + p[1]);
    return ConfigPoint{m, m};
}

// Point of the segment [p, q] with gap equal to `target`, assuming the gaps bracket it.
ConfigPoint segment_point_with_gap(const ConfigPoint& p, const ConfigPoint& q, double target) {
    const double gp = gap_of(p);
    const double gq = gap_of(q);
    const double theta = (target - gp) / (gq - gp);
    Vector x = (1.0 - theta) * p.coords() + theta * q.coords();
    // Snap the gap exactly to the target so membership of closed regions is not lost to round-off.
    const double mid = 0.5 * (x(0) + x(1));
    x(0) = mid - 0.5 * target;
    x(1) = mid + 0.5 * target;
    return ConfigPoint(x);
}

void chain_omega2(WitnessChain& chain, const ConfigPoint& y, const ConfigPoint& y_tilde, double t,
                  const WitnessOptions& opts) {
    const double d = (y.coords() - y_tilde.coords()).norm();
    if (d == 0.0) return;
    const bool y_on = on_diagonal(y);
    const bool yt_on = on_diagonal(y_tilde);
    if (y_on && yt_on) {
        append_leg(chain, witness_along_diagonal(y, y_tilde, t, opts));
        return;
    }
    if (y_on || yt_on) {
        append_leg(chain, y_on ? witness_diagonal_to_point(y, y_tilde, t, opts)
                               : witness_diagonal_to_point(y_tilde, y, t, opts));
        return;
    }
    const double g = gap_of(y);
    const double gt = gap_of(y_tilde);
    if ((g > 0.0) == (gt > 0.0)) {
        const double min_gap = std::min(std::abs(g), std::abs(gt));
        if (min_gap > kSqrt2 * d) {
            append_leg(chain, witness_straight_offdiagonal(y, y_tilde, t, StraightMode::Holder, opts));
            return;
        }
        const ConfigPoint& closer = std::abs(g) <= std::abs(gt) ? y : y_tilde;
        chain_through_diagonal(chain, project_to_diagonal(closer), y, y_tilde, t, opts);
        return;
    }
    chain_through_diagonal(chain, segment_point_with_gap(y, y_tilde, 0.0), y, y_tilde, t, opts);
}

}  // namespace

WitnessChain witness_chain(const ConfigPoint& y, const ConfigPoint& y_tilde, double t, const WitnessOptions& opts) {
    require_2d(y, y_tilde, "witness_chain");
    WitnessChain chain;
    const double d = (y.coords() - y_tilde.coords()).norm();
    if (d == 0.0) return chain;
    if (d >= 0.5) throw Error(ErrorCode::OutOfScope, "witness chains cover |y - y_tilde| < 1/2 only");
    const auto ry = classify_region(y);
    const auto rt = classify_region(y_tilde);
    if ((ry.in_omega1 && rt.in_omega1) || (ry.in_omega3 && rt.in_omega3)) {
        append_leg(chain, witness_straight_offdiagonal(y, y_tilde, t, StraightMode::Lipschitz, opts));
        return chain;
    }
    if (ry.in_omega2 && rt.in_omega2) {
        chain_omega2(chain, y, y_tilde, t, opts);
        return chain;
    }
    // One point strictly inside Omega1 (or Omega3), the other in Omega2: split where the segment
    // leaves the outer region.
    const bool y_outer = !ry.in_omega2;
    const ConfigPoint& outer = y_outer ? y : y_tilde;
    const ConfigPoint& inner = y_outer ? y_tilde : y;
    const double boundary = gap_of(outer) > 0.0 ? 0.5 : -0.5;
    const ConfigPoint xi = segment_point_with_gap(outer, inner, boundary);
    append_leg(chain, witness_straight_offdiagonal(outer, xi, t, StraightMode::Lipschitz, opts));
    chain_omega2(chain, xi, inner, t, opts);
    return chain;
}

}  // namespace degenhj
