#include <catch2/catch_amalgamated.hpp>

#include "dns2d/inequalities.hpp"
#include "test_helpers.hpp"

using namespace dns2d;
using testutil::rel_diff;

TEST_CASE("pointwise inequality: hand-checked saturation") {
    // A = ((1,0),(0,-1)), v = (1,0): |(Av,v)| = 1 and the bound is
    // 2^{-1/2} sqrt(2) = 1, so the slack vanishes.
    const double slack =
        pointwise_inequality_slack({1.0, 0.0, 0.0, -1.0}, {1.0, 0.0});
    REQUIRE(std::abs(slack) <= 1e-12);
}

TEST_CASE("pointwise inequality: zero vector") {
    REQUIRE(pointwise_inequality_slack({0.3, 1.2, -0.7, -0.3}, {0.0, 0.0}) ==
            0.0);
}

TEST_CASE("pointwise inequality: saturation on the symmetric traceless family") {
    // A = ((a,b),(b,-a)) saturates at v aligned with the half-angle of
    // (a, b): the Cauchy-Schwarz step is tight when b = c.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> radius(0.1, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double th = angle(rng), r = radius(rng);
        const double a = r * std::cos(th), b = r * std::sin(th);
        const std::array<double, 4> A{a, b, b, -a};
        const std::array<double, 2> v{std::cos(th / 2.0), std::sin(th / 2.0)};
        const double frob = std::sqrt(2.0) * r;
        REQUIRE(std::abs(pointwise_inequality_slack(A, v)) <= 1e-12 * frob);
    }
}

TEST_CASE("pointwise inequality: random trials stay nonnegative") {
    auto rep = run_pointwise_trials(100000, 11);
    REQUIRE(rep.trials == 100000);
    REQUIRE(rep.min_slack >= -1e-12);
    REQUIRE(rep.empirical_constant <= 1.0 + 1e-12);
}

TEST_CASE("pointwise inequality rejects non-traceless input") {
    REQUIRE_THROWS_AS(
        pointwise_inequality_slack({1.0, 0.0, 0.0, 1.0}, {1.0, 0.0}),
        std::invalid_argument);
}

TEST_CASE("lieb-thirring ratio: single-mode closed form") {
    // v = normalized single mode: rho = (1/L^2)(1 + cos(2 k.x)) and
    // ||rho||^2 = (3/2)/L^2, sum ||grad v||^2 = |k|^2, so the ratio is
    // (3/2)/(L |k|)^2 = (3/2)/(2 pi m)^2, box-size independent.
    for (double L : {2.0 * kPi, 4.0 * kPi}) {
        auto grid = Grid::make(64, L);
        OrthonormalFamily fam;
        VectorField v = testutil::single_mode(grid, 1, 0);
        v *= 1.0 / l2_norm(v);
        fam.members.push_back(v);
        fam.gram_defect = gram_defect(fam.members);
        REQUIRE(fam.gram_defect <= 1e-12);
        const double expected = 1.5 / std::pow(2.0 * kPi, 2.0);
        REQUIRE(rel_diff(lieb_thirring_ratio(fam), expected) <= 1e-12);
    }
}

TEST_CASE("lieb-thirring ratio: box rescaling invariance") {
    auto grid1 = Grid::make(32, 2.0 * kPi);
    auto grid2 = Grid::make(32, 11.0);
    auto fam1 = random_orthonormal_family(grid1, 4, 3, cubic_band(32));
    OrthonormalFamily fam2;
    for (const auto& v : fam1.members) {
        VectorField w(grid2);
        // same coefficients on the rescaled box, renormalized in its L2
        for (int c = 0; c < 2; ++c) w.comp(c) = v.comp(c);
        w *= 1.0 / l2_norm(w);
        fam2.members.push_back(std::move(w));
    }
    REQUIRE(rel_diff(lieb_thirring_ratio(fam1), lieb_thirring_ratio(fam2)) <=
            1e-10);
}

TEST_CASE("lieb-thirring bound holds on random families") {
    auto rep = run_lieb_thirring_trials(10, 6, 64, 17);
    REQUIRE(rep.trials == 60);
    REQUIRE(rep.empirical_constant <= lieb_thirring_constant() + 1e-10);
}

TEST_CASE("ladyzhenskaya ratio: single-mode closed form and invariances") {
    auto grid = Grid::make(64, 2.0 * kPi);
    VectorField u = testutil::single_mode(grid, 1, 0);
    // u = p_hat cos(k.x) up to phase: ratio = sqrt(3/2)/(|k| L) with
    // |k| L = 2 pi m
    const double expected = std::sqrt(1.5) / (2.0 * kPi);
    REQUIRE(rel_diff(ladyzhenskaya_ratio(u), expected) <= 1e-12);
    // amplitude invariance
    VectorField w = u;
    w *= 37.5;
    REQUIRE(rel_diff(ladyzhenskaya_ratio(w), ladyzhenskaya_ratio(u)) <= 1e-13);
    // isotropic box rescaling invariance (same integer mode)
    auto grid2 = Grid::make(64, 5.0);
    VectorField u2(grid2);
    for (int c = 0; c < 2; ++c) u2.comp(c) = u.comp(c);
    REQUIRE(rel_diff(ladyzhenskaya_ratio(u2), ladyzhenskaya_ratio(u)) <= 1e-12);
    REQUIRE_THROWS_AS(ladyzhenskaya_ratio(VectorField(grid)),
                      std::invalid_argument);
}

TEST_CASE("ladyzhenskaya ensemble supremum is finite and reported") {
    auto rep = run_ladyzhenskaya_trials(100, 32, 23);
    REQUIRE(rep.trials == 100);
    REQUIRE(rep.empirical_constant > 0.0);
    REQUIRE(rep.empirical_constant < 1.0);  // sane magnitude on the torus
}

TEST_CASE("orthogonality residuals vanish for divergence-free inputs") {
    auto grid = Grid::make(64, 2.0 * kPi);
    const int band = cubic_band(64);
    SECTION("single-mode u, arbitrary v") {
        VectorField u = testutil::single_mode(grid, 2, 1);
        VectorField v = testutil::random_divfree(grid, band, 31, 1.3);
        auto res = orthogonality_residuals(u, v);
        REQUIRE(res.r1 <= 1e-12);
    }
    SECTION("u = v random") {
        VectorField u = testutil::random_divfree(grid, band, 32, 1.7);
        auto res = orthogonality_residuals(u, u);
        REQUIRE(res.r1 <= 1e-11);
        REQUIRE(res.r2 <= 1e-11);
    }
}

TEST_CASE("orthogonality residual tracks the divergence coupling") {
    auto grid = Grid::make(64, 2.0 * kPi);
    const int band = cubic_band(64);
    // deliberately non-divergence-free u
    VectorField u = testutil::random_vector(grid, band, 41);
    VectorField v = testutil::random_divfree(grid, band, 42, 1.1);
    auto res = orthogonality_residuals(u, v);
    // ((u,grad)v, v) = -1/2 (div u, |v|^2) exactly for band-limited fields
    REQUIRE(rel_diff(res.trilinear_uvv, res.divergence_coupling) <= 1e-11);
    REQUIRE(res.r1 > 1e-9);  // genuinely nonzero without div-free
}

TEST_CASE("orthogonality Monte Carlo battery") {
    auto rep = run_orthogonality_trials(50, 32, 51);
    REQUIRE(rep.trials == 50);
    REQUIRE(rep.empirical_constant <= 1e-11);
}

TEST_CASE("random orthonormal family properties") {
    auto grid = Grid::make(32, 2.0 * kPi);
    auto fam = random_orthonormal_family(grid, 6, 77, 7);
    REQUIRE(fam.members.size() == 6);
    REQUIRE(fam.gram_defect <= 1e-12);
    for (const auto& v : fam.members) {
        REQUIRE(v.divergence_defect() <= 1e-12 * l2_norm(v));
        REQUIRE(std::abs(v.mean_mode(0)) == 0.0);
        REQUIRE(std::abs(v.mean_mode(1)) == 0.0);
    }
    // determinism: same seed gives bit-identical members
    auto fam2 = random_orthonormal_family(grid, 6, 77, 7);
    for (int j = 0; j < 6; ++j)
        for (int c = 0; c < 2; ++c)
            REQUIRE(fam.members[j].comp(c) == fam2.members[j].comp(c));
    // m exceeding the band-limited divergence-free dimension
    REQUIRE_THROWS_AS(random_orthonormal_family(grid, 10, 1, 1),
                      std::invalid_argument);
}

TEST_CASE("interpolation inequality battery") {
    auto rep = run_interpolation_trials(200, 32, 61);
    REQUIRE(rep.trials == 200);
    REQUIRE(rep.min_slack >= -1e-13);
}
