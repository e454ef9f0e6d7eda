#include "degenhj/error.hpp"
#include "degenhj/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace degenhj;

namespace {

double closed_form_abs(double y, double s) { return std::abs(y) >= s ? std::abs(y) - 0.5 * s : y * y / (2.0 * s); }

double brute_scan(const TerminalData& g, double y, double s) {
    double best = g(Vector::Constant(1, y));
    for (int i = -200000; i <= 200000; ++i) {
        const double z = y + 1e-5 * i * 2.0;
        best = std::min(best, (y - z) * (y - z) / (2.0 * s) + g(Vector::Constant(1, z)));
    }
    return best;
}

}  // namespace

TEST_CASE("Hopf-Lax formula") {
    const auto c = constant_terminal(2.5);
    CHECK(hopflax_1d(c, 0.3, 0.0, 1.0) == doctest::Approx(2.5));

    const auto g = clamped_distance_terminal(Vector::Zero(1), 100.0);
    for (double s : {0.25, 1.0, 2.0}) {
        for (double y : {-3.0, -1.0, -0.3, 0.0, 0.2, 0.9, 2.5}) {
            CHECK(hopflax_1d(g, y, 1.0 - s, 1.0) == doctest::Approx(closed_form_abs(y, s)).epsilon(1e-10));
        }
    }
    const auto clamped = clamped_distance_terminal(Vector::Zero(1), 1.2);
    for (double y : {-1.5, -0.4, 0.7, 1.1, 3.0}) {
        CHECK(hopflax_1d(clamped, y, 0.0, 1.0) == doctest::Approx(brute_scan(clamped, y, 1.0)).epsilon(1e-8));
    }
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0), t(0.0, 0.99);
    const auto sine = sine_product_terminal(1.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double y = u(rng);
        CHECK(hopflax_1d(sine, y, t(rng), 1.0) <= sine(Vector::Constant(1, y)) + 1e-15);
    }
    CHECK(hopflax_1d(g, 0.7, 1.0, 1.0) == doctest::Approx(0.7));
}

TEST_CASE("direct shooting") {
    const auto zero = constant_terminal(0.0);
    const auto r0 = direct_shoot({0.3, -0.2}, 0.0, 1.0, zero);
    CHECK(r0.cost == 0.0);
    CHECK(energy(r0.control) == 0.0);

    const auto g = clamped_distance_terminal(Vector::Zero(1), 100.0);
    for (double y : {-1.0, 0.0, 2.0}) {
        const auto r = direct_shoot(ConfigPoint{y}, 0.0, 1.0, g);
        CHECK(std::abs(r.cost - hopflax_1d(g, y, 0.0, 1.0)) <= 1e-3);
    }

    // The reported cost is realised by the returned control.
    const auto cone = clamped_distance_terminal(Vector::Zero(2), 3.0);
    const ConfigPoint y{1.0, -0.5};
    ShootOptions opts;
    opts.segments = 3;
    const auto r = direct_shoot(y, 0.2, 1.2, cone, opts);
    const auto tr = integrate(y, 0.2, r.control, opts.step);
    CHECK(r.cost == doctest::Approx(0.5 * energy(r.control) + cone(tr.final_state())).epsilon(1e-9));
    CHECK(r.cost <= cone(y.coords()));
    CHECK(r.control.segments() == 3);

    opts.seed = 99;
    const auto again = direct_shoot(y, 0.2, 1.2, cone, opts);
    opts.seed = 99;
    CHECK(direct_shoot(y, 0.2, 1.2, cone, opts).cost == again.cost);

    ShootOptions bad;
    bad.segments = 0;
    CHECK_THROWS_AS((void)direct_shoot(y, 0.0, 1.0, cone, bad), Error);
    bad = {};
    bad.restarts = 0;
    CHECK_THROWS_AS((void)direct_shoot(y, 0.0, 1.0, cone, bad), Error);
    CHECK_THROWS_AS((void)direct_shoot(y, 1.0, 1.0, cone), Error);
}
