#include "degenhj/error.hpp"
#include "degenhj/oracles.hpp"
#include "degenhj/value_solver.hpp"

#include <doctest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace degenhj;

namespace {

struct Problem {
    GridSpec spec;
    TerminalData g;
    ControlSet controls;
};

Problem make(std::size_t dim, double lo, double hi, std::size_t nx, double T, TerminalData g,
             std::size_t n_radii = 8, std::size_t n_angles = 16) {
    const double B = global_sqrt_kernel_bound(dim);
    Problem p{{dim, lo, hi, nx, 1, T}, std::move(g), ControlSet::standard(dim, 0.0, B, n_radii, n_angles)};
    p.controls = ControlSet::standard(dim, p.g.L, B, n_radii, n_angles);
    p.spec.nt = cfl_time_slices(p.spec, p.controls, B);
    return p;
}

Vector center2(double a, double b) {
    Vector c(2);
    c << a, b;
    return c;
}

double max_abs_diff(const ValueGrid& a, const ValueGrid& b) {
    double m = 0.0;
    for (std::size_t k = 0; k <= a.spec().nt; ++k) {
        const auto sa = a.slice(k);
        const auto sb = b.slice(k);
        for (std::size_t i = 0; i < sa.size(); ++i) m = std::max(m, std::abs(sa[i] - sb[i]));
    }
    return m;
}

}  // namespace

TEST_CASE("constant terminal data is invariant") {
    for (std::size_t dim : {1, 2, 3}) {
        for (double c : {0.0, 5.0}) {
            auto p = make(dim, -1.0, 1.0, dim == 3 ? 5 : 9, 0.5, constant_terminal(c));
            const auto grid = solve(p.spec, p.g, p.controls);
            for (std::size_t k = 0; k <= p.spec.nt; ++k)
                for (double v : grid.slice(k)) CHECK(v == c);
        }
    }
}

TEST_CASE("parallel sweep matches the serial reference") {
    SUBCASE("N = 1") {
        auto p = make(1, -4.0, 4.0, 65, 1.0, clamped_distance_terminal(Vector::Zero(1), 3.0));
        CHECK(max_abs_diff(solve(p.spec, p.g, p.controls), solve_reference(p.spec, p.g, p.controls)) < 1e-12);
    }
    SUBCASE("N = 2") {
        auto p = make(2, -3.0, 3.0, 25, 0.5, clamped_distance_terminal(center2(0.5, -0.5), 2.0));
        CHECK(max_abs_diff(solve(p.spec, p.g, p.controls), solve_reference(p.spec, p.g, p.controls)) < 1e-12);
    }
    SUBCASE("N = 2 sine") {
        auto p = make(2, -3.0, 3.0, 21, 0.4, sine_product_terminal(0.7, 1.3));
        CHECK(max_abs_diff(solve(p.spec, p.g, p.controls), solve_reference(p.spec, p.g, p.controls)) < 1e-12);
    }
    SUBCASE("N = 3") {
        auto p = make(3, -2.0, 2.0, 9, 0.2, clamped_distance_terminal(Vector::Zero(3), 1.5));
        CHECK(max_abs_diff(solve(p.spec, p.g, p.controls), solve_reference(p.spec, p.g, p.controls)) < 1e-12);
    }
}

TEST_CASE("thread count does not change the result") {
    auto p = make(2, -3.0, 3.0, 33, 0.5, clamped_distance_terminal(center2(0.5, -0.5), 2.0));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = solve(p.spec, p.g, p.controls);
    omp_set_num_threads(4);
    const auto four = solve(p.spec, p.g, p.controls);
    omp_set_num_threads(saved);
    CHECK(max_abs_diff(one, four) == 0.0);
}

TEST_CASE("bounds and zero-control admissibility") {
    auto p = make(2, -3.0, 3.0, 33, 0.6, sine_product_terminal(1.0, 1.0));
    const auto grid = solve(p.spec, p.g, p.controls);
    const auto last = grid.slice(p.spec.nt);
    for (std::size_t node = 0; node < last.size(); ++node) {
        CHECK(last[node] == p.g(grid.node_point(node)));
    }
    for (std::size_t k = 0; k < p.spec.nt; ++k) {
        const auto s = grid.slice(k);
        const auto next = grid.slice(k + 1);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(std::abs(s[i]) <= p.g.sup_norm);
            CHECK(s[i] <= next[i]);
            CHECK(s[i] <= last[i]);
        }
    }
}

TEST_CASE("monotone in the terminal data") {
    auto lo = make(2, -3.0, 3.0, 25, 0.5, clamped_distance_terminal(center2(0.0, 0.0), 1.0));
    auto hi = make(2, -3.0, 3.0, 25, 0.5, clamped_distance_terminal(center2(0.0, 0.0), 2.0));
    // Same L, so the grids and control sets coincide.
    REQUIRE(lo.spec.nt == hi.spec.nt);
    const auto a = solve(lo.spec, lo.g, lo.controls);
    const auto b = solve(hi.spec, hi.g, hi.controls);
    for (std::size_t k = 0; k <= lo.spec.nt; ++k) {
        const auto sa = a.slice(k);
        const auto sb = b.slice(k);
        for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i] <= sb[i]);
    }
}

TEST_CASE("translation along the diagonal") {
    const std::size_t nx = 41;
    auto p = make(2, -4.0, 4.0, nx, 0.3, clamped_distance_terminal(center2(0.4, -0.6), 2.5));
    const double tau = 4.0 * p.spec.dx();
    auto q = make(2, -4.0, 4.0, nx, 0.3, clamped_distance_terminal(center2(0.4 + tau, -0.6 + tau), 2.5));
    const auto a = solve(p.spec, p.g, p.controls);
    const auto b = solve(q.spec, q.g, q.controls);
    double worst = 0.0;
    for (std::size_t k = 0; k < p.spec.nt; ++k) {
        const double t = p.spec.time(k);
        for (std::size_t node = 0; node < p.spec.nodes(); ++node) {
            const Vector y = a.node_point(node);
            const Vector ys = y + Vector::Constant(2, tau);
            if (!a.in_interior({y.data(), 2}, t) || !b.in_interior({ys.data(), 2}, t)) continue;
            worst = std::max(worst, std::abs(a.value(k, node) - evaluate(b, ys, t)));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("one dimension against the Hopf-Lax formula") {
    double err[2];
    const std::size_t nxs[2] = {65, 129};
    for (int r = 0; r < 2; ++r) {
        auto p = make(1, -4.0, 4.0, nxs[r], 1.0, clamped_distance_terminal(Vector::Zero(1), 3.0), 16);
        const auto grid = solve(p.spec, p.g, p.controls);
        err[r] = 0.0;
        for (std::size_t k = 0; k < p.spec.nt; ++k) {
            const double t = p.spec.time(k);
            for (std::size_t i = 0; i < p.spec.nx; ++i) {
                const double y = grid.coord(i);
                if (!grid.in_interior({&y, 1}, t)) continue;
                err[r] = std::max(err[r], std::abs(grid.value(k, i) - hopflax_1d(p.g, y, t, 1.0)));
            }
        }
    }
    CHECK(err[0] < 0.12);
    CHECK(err[1] < 0.07);
    CHECK(err[1] < err[0]);
}

TEST_CASE("evaluate") {
    GridSpec s{1, 0.0, 2.0, 3, 2, 1.0};
    ValueGrid grid(s, constant_terminal(0.0), 1.0, 1.0);
    for (std::size_t k = 0; k <= 2; ++k) {
        grid.slice(k)[0] = 1.0;
        grid.slice(k)[1] = 3.0;
        grid.slice(k)[2] = 7.0;
    }
    grid.slice(2)[1] = 5.0;
    CHECK(evaluate(grid, Vector::Constant(1, 1.0), 0.0) == 3.0);
    CHECK(evaluate(grid, Vector::Constant(1, 0.5), 0.0) == 2.0);
    CHECK(evaluate(grid, Vector::Constant(1, 1.0), 0.75) == doctest::Approx(4.0));
    CHECK_THROWS_AS((void)evaluate(grid, Vector::Constant(1, 2.5), 0.0), Error);
    CHECK_THROWS_AS((void)evaluate(grid, Vector::Constant(1, 1.0), 1.5), Error);

    auto p = make(2, -2.0, 2.0, 33, 0.5, sine_product_terminal(1.0, 1.0));
    const auto g2 = solve(p.spec, p.g, p.controls);
    const double h = p.spec.dx();
    Vector y(2);
    y << 0.3, -0.7;
    CHECK(std::abs(evaluate(g2, y, 0.5) - p.g(y)) <= h * h);
}

TEST_CASE("configuration errors") {
    auto p = make(1, -1.0, 1.0, 9, 1.0, clamped_distance_terminal(Vector::Zero(1), 1.0));
    GridSpec bad = p.spec;
    bad.nt = 1;  // a_max B dt = 4 > half the width
    CHECK_THROWS_AS((void)solve(bad, p.g, p.controls), Error);
    GridSpec tiny = p.spec;
    tiny.nx = 2;
    CHECK_THROWS_AS((void)solve(tiny, p.g, p.controls), Error);
    auto two = ControlSet::standard(2, 1.0, std::sqrt(2.0));
    CHECK_THROWS_AS((void)solve(p.spec, p.g, two), Error);
    try {
        (void)solve(bad, p.g, p.controls);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Configuration);
    }
}

TEST_CASE("time slices from the CFL rule") {
    const auto cs = ControlSet::standard(2, 1.0, std::sqrt(2.0));
    CHECK(cs.a_max() == doctest::Approx(4.0 * std::sqrt(2.0)));
    CHECK(cs.radii.front() == 0.0);
    CHECK(cs.radii.size() == 17);
    CHECK(cs.directions.size() == 32);
    CHECK(ControlSet::standard(1, 0.0, 1.0).a_max() == 4.0);
    GridSpec s{2, -3.0, 3.0, 61, 1, 1.5};
    const std::size_t nt = cfl_time_slices(s, cs, std::sqrt(2.0));
    s.nt = nt;
    CHECK(cs.a_max() * std::sqrt(2.0) * s.dt() <= s.dx() * (1.0 + 1e-12));
    s.nt = nt - 1;
    CHECK(cs.a_max() * std::sqrt(2.0) * s.dt() > s.dx());
}

TEST_CASE("grid csv round trip") {
    auto p = make(2, -2.0, 2.0, 9, 0.25, clamped_distance_terminal(center2(0.2, 0.1), 1.0));
    const auto grid = solve(p.spec, p.g, p.controls);
    std::stringstream ss;
    write_grid_csv(ss, grid);
    std::istringstream first(ss.str());
    std::string header;
    std::getline(first, header);
    CHECK(header == "t,y_1,y_2,v");
    const auto back = read_grid_csv(ss, p.g, grid.a_max(), grid.B());
    CHECK(back.spec().nx == p.spec.nx);
    CHECK(back.spec().nt == p.spec.nt);
    CHECK(back.spec().lo == p.spec.lo);
    CHECK(back.spec().hi == p.spec.hi);
    CHECK(back.spec().T == doctest::Approx(p.spec.T));
    CHECK(max_abs_diff(grid, back) == 0.0);

    std::istringstream junk("t,y_1,v\n0,0,1\n");
    CHECK_THROWS_AS((void)read_grid_csv(junk, p.g, 1.0, 1.0), Error);
}
