#include <catch2/catch_amalgamated.hpp>

#include "dns2d/bounds.hpp"
#include "test_helpers.hpp"

using namespace dns2d;
using testutil::rel_diff;

TEST_CASE("frozen bound values") {
    const double inv16s3 = 1.0 / (16.0 * std::sqrt(3.0));
    const double inv64s3 = 1.0 / (64.0 * std::sqrt(3.0));
    REQUIRE(rel_diff(dim_bound_rot(1.0, 1.0, 1.0), inv16s3) <= 1e-14);
    REQUIRE(rel_diff(dim_bound_s(1.0, 1.0, 0.0, 1.0), inv64s3) <= 1e-14);
    REQUIRE(dim_bound_s(1.0, 1.0, 0.5, 1.0) == 3.0 / 256.0);  // exact binary value
    REQUIRE(dim_bound_s(1.0, 1.0, -0.5, 1.0) == 3.0 / 256.0);
    REQUIRE(dim_bound_periodic(1.0, 1.0, 1.0, 1.0) == 0.375);
    REQUIRE(rel_diff(dim_bound_s(1.0, 1.0, 1.0, 1.0), inv16s3) <= 1e-14);
    REQUIRE(rel_diff(dim_bound_s(1.0, 1.0, -1.0, 1.0), inv16s3) <= 1e-14);
}

TEST_CASE("bound zero for zero forcing norm") {
    for (double s : default_s_grid())
        REQUIRE(dim_bound_s(0.7, 1.3, s, 0.0) == 0.0);
}

TEST_CASE("endpoint continuity of the coefficient") {
    const double at_one = dim_bound_s(1.0, 1.0, 1.0, 1.0);
    const double near = dim_bound_s(1.0, 1.0, 1.0 - 1e-6, 1.0);
    REQUIRE(std::abs(near - at_one) / at_one <= 1e-4);
    const double near_neg = dim_bound_s(1.0, 1.0, -1.0 + 1e-6, 1.0);
    REQUIRE(std::abs(near_neg - at_one) / at_one <= 1e-4);
    // consistency of the rot endpoint with the s -> 1 limit
    REQUIRE(rel_diff(dim_bound_s(1.0, 1.0, 1.0 - 1e-8, 1.0),
                     dim_bound_rot(1.0, 1.0, 1.0)) <= 1e-6);
}

TEST_CASE("coefficient is even in s") {
    for (double s : {0.1, 0.25, 0.4, 0.77, 0.95, 1.0})
        REQUIRE(rel_diff(dim_bound_s(1.0, 1.0, s, 1.0),
                         dim_bound_s(1.0, 1.0, -s, 1.0)) <= 1e-15);
}

TEST_CASE("quadratic homogeneity in the forcing norm") {
    REQUIRE(rel_diff(dim_bound_rot(0.3, 0.7, 2.0),
                     4.0 * dim_bound_rot(0.3, 0.7, 1.0)) <= 1e-15);
    REQUIRE(rel_diff(dim_bound_s(0.3, 0.7, 0.4, 2.0),
                     4.0 * dim_bound_s(0.3, 0.7, 0.4, 1.0)) <= 1e-15);
}

TEST_CASE("bounds decrease in nu and alpha") {
    double prev = 1e300;
    for (double nu : {0.01, 0.1, 1.0, 10.0}) {
        const double b = dim_bound_rot(nu, 1.0, 1.0);
        REQUIRE(b < prev);
        prev = b;
    }
    prev = 1e300;
    for (double alpha : {0.01, 0.1, 1.0, 10.0}) {
        const double b = dim_bound_rot(1.0, alpha, 1.0);
        REQUIRE(b < prev);
        prev = b;
    }
}

TEST_CASE("argument validation") {
    REQUIRE_THROWS_AS(dim_bound_s(1.0, 1.0, 1.5, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(dim_bound_s(1.0, 1.0, -1.01, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(dim_bound_rot(0.0, 1.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(dim_bound_rot(1.0, -1.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(dim_bound_periodic(1.0, 1.0, 0.0, 1.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(dim_via_trace(-1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(scaling_transform(0.0, 1.0, VectorField{}),
                      std::invalid_argument);
}

TEST_CASE("periodic bound selects the active branch") {
    // first < second  iff  (8 sqrt6 / 3) L alpha^2 < ||rot g||; nu cancels.
    const double r = 100.0;
    const double first = std::sqrt(6.0) * r * 1.0 / (2.0 * 1.0);
    REQUIRE(rel_diff(dim_bound_periodic(2.0, 1.0, 1.0, r), first) <= 1e-15);
    const double second_small = (3.0 / 8.0) * 0.01 * 0.01 / (2.0 * 1.0);
    REQUIRE(rel_diff(dim_bound_periodic(2.0, 1.0, 1.0, 0.01), second_small) <=
            1e-15);
    // L -> infinity with the rest fixed: the L-independent branch survives
    const double second = 0.375;
    REQUIRE(rel_diff(dim_bound_periodic(1.0, 1.0, 1e9, 1.0), second) <= 1e-15);
}

TEST_CASE("dim via trace") {
    REQUIRE(dim_via_trace(0.0) == 0.0);
    REQUIRE(rel_diff(dim_via_trace(16.0 * std::sqrt(3.0)), 1.0) <= 1e-15);
}

TEST_CASE("gradient majorant ties to the bound coefficient") {
    // majorant(s, n) = 16 sqrt(3) * coefficient(s) * n^2, and at s = 1 it
    // collapses to the rot-endpoint chain: majorant(1, n) = n^2.
    REQUIRE(rel_diff(grad_sq_majorant(1.0, 2.0), 4.0) <= 1e-14);
    for (double s : {0.0, 0.3, 0.8}) {
        const double expected = (1.0 - s * s) / 4.0 *
                                std::pow((1.0 + s) / (1.0 - s), s) * 9.0;
        REQUIRE(rel_diff(grad_sq_majorant(s, 3.0), expected) <= 1e-13);
    }
}

TEST_CASE("scaling transform norm identity") {
    auto grid = Grid::make(32, 2.0 * kPi);
    VectorField g = testutil::random_divfree(grid, 8, 3, 1.9);
    const double nu = 0.03, alpha = 0.4;
    VectorField scaled = scaling_transform(nu, alpha, g);
    REQUIRE(rel_diff(scaled.grid().box_length(),
                     std::sqrt(alpha / nu) * 2.0 * kPi) <= 1e-15);
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const double expected = std::pow(nu / alpha, s) /
                                (alpha * alpha * nu * nu) *
                                sobolev_norm_sq(g, s);
        REQUIRE(rel_diff(sobolev_norm_sq(scaled, s), expected) <= 1e-12);
    }
    // identity transform at nu = alpha = 1
    VectorField same = scaling_transform(1.0, 1.0, g);
    VectorField diff = same;
    diff -= g;
    REQUIRE(l2_norm(diff) == 0.0);
    REQUIRE(same.grid().box_length() == g.grid().box_length());
}

TEST_CASE("homogeneous norm scaling law on single modes") {
    // ||g(gamma .)||_{Hdot^s}^2 = gamma^{2(s-1)} ||g||_{Hdot^s}^2: realize
    // g(gamma x) on the box L/gamma carrying the same integer mode.
    const double gamma = 2.5;
    auto grid = Grid::make(32, 2.0 * kPi);
    auto grid2 = Grid::make(32, 2.0 * kPi / gamma);
    for (double s : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
        VectorField a = testutil::single_mode(grid, 2, 1);
        VectorField b(grid2);
        for (int c = 0; c < 2; ++c) b.comp(c) = a.comp(c);
        REQUIRE(rel_diff(sobolev_norm_sq(b, s),
                         std::pow(gamma, 2.0 * (s - 1.0)) *
                             sobolev_norm_sq(a, s)) <= 1e-13);
    }
}

TEST_CASE("scaled-route bound equals the direct bound") {
    auto grid = Grid::make(32, 2.0 * kPi);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    auto sgrid = default_s_grid();
    for (int trial = 0; trial < 100; ++trial) {
        const double nu = std::pow(10.0, logu(rng));
        const double alpha = std::pow(10.0, logu(rng));
        VectorField g = testutil::random_divfree(grid, 9, 1000 + trial, 1.0);
        VectorField scaled = scaling_transform(nu, alpha, g);
        for (double s : sgrid) {
            const double direct =
                dim_bound_s(nu, alpha, s, sobolev_norm(g, s));
            const double via_scaled =
                dim_bound_s(1.0, 1.0, s, sobolev_norm(scaled, s));
            REQUIRE(rel_diff(direct, via_scaled) <= 1e-12);
        }
    }
}

TEST_CASE("best bound over s: single low mode") {
    auto grid = Grid::make(32, 2.0 * kPi);
    VectorField g = testutil::single_mode(grid, 1, 0);  // |k| = 1 scaled units
    BoundInputs in;
    in.forcing = &g;
    auto rep = best_bound_over_s(in);
    // all Hdot^s norms coincide, so the minimizer is the coefficient argmin
    double best_coef = 1e300, best_s = 0.0;
    for (double s : in.s_grid) {
        const double c = dim_bound_coefficient(s);
        if (c < best_coef) {
            best_coef = c;
            best_s = s;
        }
    }
    REQUIRE(rep.best_s == best_s);
    const double norm = l2_norm(g);
    REQUIRE(rel_diff(rep.best_bound, best_coef * norm * norm) <= 1e-13);
}

TEST_CASE("best bound over s: high-mode forcing pushes s negative") {
    auto grid = Grid::make(32, 2.0 * kPi);
    VectorField g = testutil::single_mode(grid, 8, 0);
    BoundInputs in;
    in.forcing = &g;
    auto rep = best_bound_over_s(in);
    REQUIRE(rep.best_s < -0.5);
    REQUIRE(rep.best_bound < dim_bound_s(1.0, 1.0, 0.0, sobolev_norm(g, 0.0)));
}

TEST_CASE("best bound over s: zero forcing gives zero bounds") {
    auto grid = Grid::make(16, 2.0 * kPi);
    VectorField g(grid);
    g.set_divergence_free(true);
    BoundInputs in;
    in.forcing = &g;
    auto rep = best_bound_over_s(in);
    REQUIRE(rep.best_bound == 0.0);
    REQUIRE(rep.rot_endpoint_bound == 0.0);
    REQUIRE(rep.periodic_min_bound == 0.0);
    for (const auto& e : rep.per_s) REQUIRE(e.bound == 0.0);
}

TEST_CASE("best bound report fields are consistent") {
    auto grid = Grid::make(32, 2.0 * kPi);
    VectorField g = testutil::random_divfree(grid, 6, 7, 2.0);
    BoundInputs in;
    in.nu = 0.05;
    in.alpha = 0.4;
    in.forcing = &g;
    auto rep = best_bound_over_s(in);
    REQUIRE(rep.per_s.size() == in.s_grid.size());
    for (const auto& e : rep.per_s) {
        REQUIRE(e.bound >= 0.0);
        REQUIRE(rep.best_bound <= e.bound * (1.0 + 1e-15));
    }
    REQUIRE(rel_diff(rep.rot_endpoint_bound,
                     dim_bound_rot(in.nu, in.alpha, l2_norm(rot(g)))) <= 1e-14);
    const double L = g.grid().box_length();
    REQUIRE(rel_diff(rep.grashof, l2_norm(g) * L * L / (in.nu * in.nu)) <=
            1e-14);
    REQUIRE_THROWS_AS(
        [&] {
            BoundInputs bad = in;
            bad.s_grid.clear();
            return best_bound_over_s(bad);
        }(),
        std::invalid_argument);
}
