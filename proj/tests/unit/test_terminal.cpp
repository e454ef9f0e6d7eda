#include "degenhj/error.hpp"
#include "degenhj/terminal.hpp"

#include <doctest.h>

#include <cmath>

using namespace degenhj;

TEST_CASE("shipped terminal data") {
    const auto c = constant_terminal(-2.0);
    CHECK(c(Vector::Zero(3)) == -2.0);
    CHECK(c.L == 0.0);
    CHECK(c.sup_norm == 2.0);

    Vector y0(2);
    y0 << 0.75, -0.75;
    const auto d = clamped_distance_terminal(y0, 1.5);
    CHECK(d(y0) == 0.0);
    Vector y(2);
    y << 0.75, 0.25;
    CHECK(d(y) == doctest::Approx(1.0));
    y << 10.0, 10.0;
    CHECK(d(y) == 1.5);
    CHECK(d.L == 1.0);
    CHECK(d.sup_norm == 1.5);
    CHECK_THROWS_AS((void)d(Vector::Zero(3)), Error);

    const auto s = sine_product_terminal(-0.5, 2.0);
    y << M_PI / 4.0, M_PI / 4.0;
    CHECK(s(y) == doctest::Approx(-0.5));
    CHECK(s.L == 1.0);
    CHECK(s.sup_norm == 0.5);

    CHECK_THROWS_AS((void)clamped_distance_terminal(y0, -1.0), Error);
    CHECK_THROWS_AS((void)sine_product_terminal(1.0, 0.0), Error);
}

TEST_CASE("declared constants hold on random pairs") {
    Vector y0(2);
    y0 << 0.3, -1.0;
    for (const auto& g : {clamped_distance_terminal(y0, 2.0), sine_product_terminal(1.3, 0.7), constant_terminal(4.0)}) {
        const auto sc = spot_check(g, 2, -5.0, 5.0, 5000, 1);
        CHECK(sc.lipschitz_ratio <= 1.0 + 1e-12);
        CHECK(sc.sup_ratio <= 1.0 + 1e-12);
    }
    const auto sc = spot_check(clamped_distance_terminal(y0, 2.0), 2, -5.0, 5.0, 5000, 1);
    CHECK(sc.lipschitz_ratio > 0.9);
    CHECK(sc.sup_ratio == doctest::Approx(1.0));
}
