#include "degenhj/error.hpp"
#include "degenhj/regularity.hpp"
#include "degenhj/value_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

using namespace degenhj;

namespace {

// Grid filled from a closed form, with a negligible domain of dependence so the whole box is interior.
ValueGrid synthetic(const std::function<double(double, double, double)>& f, std::size_t nx = 257, double L = 1.0) {
    GridSpec s{2, -2.0, 2.0, nx, 8, 1.0};
    TerminalData g = constant_terminal(0.0);
    g.L = L;
    ValueGrid grid(s, g, 1e-12, std::sqrt(2.0));
    for (std::size_t k = 0; k <= s.nt; ++k) {
        auto sl = grid.slice(k);
        for (std::size_t node = 0; node < s.nodes(); ++node) {
            const Vector y = grid.node_point(node);
            sl[node] = f(y(0), y(1), s.time(k));
        }
    }
    return grid;
}

HolderOptions options(Region region) {
    HolderOptions o;
    o.region = region;
    o.dist_hi = 0.5;
    o.samples = 800;
    return o;
}

}  // namespace

TEST_CASE("exponent of square-root growth across D") {
    const auto grid = synthetic([](double a, double b, double) { return std::sqrt(std::abs(b - a)); });
    const auto fit = estimate_space_holder(grid, options({RegionTag::Diagonal, 0.0}));
    CHECK(fit.gamma_claimed == 0.5);
    CHECK(fit.gamma_hat == doctest::Approx(0.5).epsilon(0.04));
    CHECK(fit.count == fit.pairs.size());
    CHECK(fit.count >= 200);
    CHECK(fit.dist_min >= 2.0 * grid.spec().dx() - 1e-12);
    CHECK(fit.dist_max <= 0.5 + 1e-12);
    for (const auto& p : fit.pairs) CHECK((p.y(1) - p.y(0)) * (p.y_tilde(1) - p.y_tilde(0)) <= 0.0);
}

TEST_CASE("exponent of a linear function") {
    const auto grid = synthetic([](double a, double, double) { return a; });
    const auto cross = estimate_space_holder(grid, options({RegionTag::Diagonal, 0.0}));
    CHECK(cross.gamma_hat == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cross.residual < 1e-6);
    const auto away = estimate_space_holder(grid, options(Region::omega_delta(0.5)));
    CHECK(away.gamma_claimed == 1.0);
    CHECK(away.gamma_hat == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(away.c_hat <= 1.0 + 1e-9);
    for (const auto& p : away.pairs) {
        CHECK(std::abs(p.y(1) - p.y(0)) >= 0.5);
        CHECK(std::abs(p.y_tilde(1) - p.y_tilde(0)) >= 0.5);
    }
    auto o = options(Region::omega_delta(0.5));
    o.transverse = false;
    // Random directions give each ray its own intercept |cos phi|, so the pooled slope is only close to 1.
    CHECK(estimate_space_holder(grid, o).gamma_hat == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("window restricts the samples") {
    const auto grid = synthetic([](double a, double b, double) { return a * b; });
    auto o = options(Region::omega_delta(0.5));
    o.window = std::make_pair(-1.0, 1.0);
    const auto fit = estimate_space_holder(grid, o);
    for (const auto& p : fit.pairs) {
        CHECK(p.y.cwiseAbs().maxCoeff() <= 1.0);
        CHECK(p.y_tilde.cwiseAbs().maxCoeff() <= 1.0);
    }
}

TEST_CASE("flat data") {
    const auto grid = synthetic([](double, double, double) { return 3.0; });
    const auto fit = estimate_space_holder(grid, options({RegionTag::Diagonal, 0.0}));
    CHECK(fit.flat);
    CHECK(fit.pairs.empty());
    CHECK(fit.discarded > 0);
    OmegaDeltaOptions od;
    CHECK(estimate_lipschitz_omega_delta(grid, 0.5, od) == 0.0);
    const auto k = estimate_time_lipschitz(grid, 500, 1);
    CHECK(k.k_hat == 0.0);
    CHECK(k.k_bound == doctest::Approx(1.0));
}

TEST_CASE("estimator preconditions") {
    const auto grid = synthetic([](double a, double, double) { return a; });
    auto o = options({RegionTag::Diagonal, 0.0});
    o.min_decades = 2.0;
    CHECK_THROWS_AS((void)estimate_space_holder(grid, o), Error);
    o = options({RegionTag::Diagonal, 0.0});
    o.min_pairs = 5000;
    CHECK_THROWS_AS((void)estimate_space_holder(grid, o), Error);
    o = options({RegionTag::Diagonal, 0.0});
    o.min_pairs = 700;
    o.window = std::make_pair(-0.05, 0.05);
    o.dist_hi = 0.3;
    o.min_decades = 0.5;
    try {
        (void)estimate_space_holder(grid, o);
        CHECK(false);
    } catch (const Error& e) {
        INFO(e.what());
        CHECK(e.code() == ErrorCode::EmptySample);
    }
    GridSpec s1{1, -1.0, 1.0, 9, 4, 1.0};
    ValueGrid one(s1, constant_terminal(0.0), 1e-12, 1.0);
    CHECK_THROWS_AS((void)estimate_space_holder(one, options({RegionTag::Diagonal, 0.0})), Error);
}

TEST_CASE("time Lipschitz estimate") {
    const auto grid = synthetic([](double a, double, double t) { return a + 0.3 * t; });
    const auto k = estimate_time_lipschitz(grid, 2000, 7);
    CHECK(k.k_hat == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(k.count == 2000);

    auto half = estimate_time_lipschitz(grid, 100, 7, [](std::span<const double> y, double, double) { return y[0] > 0.0; });
    CHECK(half.count == 100);

    const auto twice = estimate_time_lipschitz(grid, 2000, 7);
    CHECK(twice.k_hat == k.k_hat);
}

TEST_CASE("time slope of the one-dimensional cone") {
    const auto g = clamped_distance_terminal(Vector::Zero(1), 3.0);
    const auto cs = ControlSet::standard(1, 1.0, 1.0);
    GridSpec s{1, -4.0, 4.0, 257, 256, 1.0};
    const auto grid = solve(s, g, cs);
    const double T = s.T;
    const auto k = estimate_time_lipschitz(grid, 5000, 3, [T](std::span<const double> y, double t, double) {
        return std::abs(y[0]) >= T - t && std::abs(y[0]) <= 2.5;
    });
    CHECK(k.k_hat >= 0.4);
    CHECK(k.k_hat <= 0.6);
    CHECK(k.k_bound == doctest::Approx(0.5));
    CHECK(estimate_time_lipschitz(grid, 5000, 3).k_hat <= 0.5 * 1.2);
}

TEST_CASE("Lipschitz constant away from D") {
    const auto grid = synthetic([](double a, double b, double) { return std::sqrt(std::abs(b - a)); });
    OmegaDeltaOptions od;
    od.dist_hi = 0.3;
    double previous = std::numeric_limits<double>::infinity();
    for (double delta : {0.25, 0.5, 0.75, 1.0, 1.5}) {
        const double c = estimate_lipschitz_omega_delta(grid, delta, od);
        CHECK(std::isfinite(c));
        CHECK(c <= previous);
        // |d/dy sqrt|y2 - y1|| = 1 / (sqrt(2) sqrt(gap)) at the edge of the region.
        CHECK(c <= 1.0 / (std::sqrt(2.0) * std::sqrt(delta)) * 1.02);
        previous = c;
    }
    CHECK_THROWS_AS((void)estimate_lipschitz_omega_delta(grid, 0.0, od), Error);
}

TEST_CASE("pairs csv") {
    const auto grid = synthetic([](double a, double, double) { return a; });
    const auto fit = estimate_space_holder(grid, options({RegionTag::Diagonal, 0.0}));
    std::ostringstream os;
    write_pairs_csv(os, fit.pairs);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "y_1,y_2,yt_1,yt_2,t,dist,dv");
}
