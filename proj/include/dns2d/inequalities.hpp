#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dns2d/operators.hpp"
#include "dns2d/tangent.hpp"

namespace dns2d {

// Standalone numerical verification of the functional inequalities and
// algebraic identities behind the dimension estimates. Cubic and quartic
// products are kept alias-free by generating inputs strictly inside the
// quarter band (4|m_j| < n) and evaluating the quartic quadratures on a
// 2x zero-padded grid.

inline int cubic_band(int n) { return (n - 1) / 4; }

struct OrthonormalFamily {
    std::vector<VectorField> members;
    double gram_defect = 0.0;
};

/// Deterministic mean-free divergence-free L2-orthonormal family.
inline OrthonormalFamily random_orthonormal_family(GridPtr grid, int m,
                                                   std::uint64_t seed,
                                                   int band_limit) {
    OrthonormalFamily fam;
    fam.members = random_divfree_family(std::move(grid), m, seed, band_limit);
    fam.gram_defect = gram_defect(fam.members);
    return fam;
}

/// ||rho||^2 / sum_j ||grad v_j||^2 for rho = sum_j |v_j|^2, with rho
/// evaluated pointwise on the 2x padded grid so the quartic quadrature is
/// exact for quarter-band families.
inline double lieb_thirring_ratio(const OrthonormalFamily& fam) {
    if (fam.members.empty())
        throw std::invalid_argument("lieb_thirring_ratio: empty family");
    const Grid& g = fam.members.front().grid();
    const int p = 2 * g.n();
    std::vector<double> rho(static_cast<std::size_t>(p) * p, 0.0);
    double grad_sum = 0.0;
    for (const auto& v : fam.members) {
        for (int c = 0; c < 2; ++c) {
            auto phys = to_physical_padded(g, v.comp(c), p);
            for (std::size_t i = 0; i < rho.size(); ++i)
                rho[i] += phys[i] * phys[i];
        }
        grad_sum += grad_norm_sq(v);
    }
    if (!(grad_sum > 0.0))
        throw std::logic_error(
            "lieb_thirring_ratio: zero gradient sum for a mean-free family");
    for (auto& r : rho) r *= r;
    const double rho_sq = quadrature_integral(g.box_length(), p, rho);
    return rho_sq / grad_sum;
}

inline double lieb_thirring_constant() { return 1.0 / (2.0 * std::sqrt(3.0)); }

/// Slack of |(A v, v)| <= 2^{-1/2} |A|_F |v|^2 for traceless A.
/// Requires |tr A| <= 1e-14 |A|_F.
inline double pointwise_inequality_slack(const std::array<double, 4>& A,
                                         const std::array<double, 2>& v) {
    const double frob = std::sqrt(A[0] * A[0] + A[1] * A[1] + A[2] * A[2] +
                                  A[3] * A[3]);
    if (std::abs(A[0] + A[3]) > 1e-14 * std::max(frob, 1e-300))
        throw std::invalid_argument("pointwise_inequality_slack: A not traceless");
    const double quad = std::abs(v[0] * (A[0] * v[0] + A[1] * v[1]) +
                                 v[1] * (A[2] * v[0] + A[3] * v[1]));
    const double v2 = v[0] * v[0] + v[1] * v[1];
    return frob * v2 / std::sqrt(2.0) - quad;
}

/// ||u||_{L4}^2 / (||u|| ||grad u||), the measured interpolation ratio; the
/// L4 norm uses the 2x padded quadrature.
inline double ladyzhenskaya_ratio(const VectorField& u) {
    const double norm = l2_norm(u);
    if (!(norm > 0.0))
        throw std::invalid_argument("ladyzhenskaya_ratio: zero field");
    const Grid& g = u.grid();
    const int p = 2 * g.n();
    auto u0 = to_physical_padded(g, u.comp(0), p);
    auto u1 = to_physical_padded(g, u.comp(1), p);
    std::vector<double> quartic(u0.size());
    for (std::size_t i = 0; i < u0.size(); ++i) {
        const double m2 = u0[i] * u0[i] + u1[i] * u1[i];
        quartic[i] = m2 * m2;
    }
    const double l4_sq =
        std::sqrt(quadrature_integral(g.box_length(), p, quartic));
    return l4_sq / (norm * std::sqrt(grad_norm_sq(u)));
}

/// Relative residuals of the two orthogonality identities,
///   r1 = |((u,grad)v, v)| / (||u|| ||grad v|| ||v|| + eps)
///   r2 = |((u,grad)u, lap u)| / (||u|| ||grad u|| ||lap u|| + eps),
/// with the trilinear integrals evaluated pointwise in physical space
/// (exact for quarter-band inputs).
struct OrthogonalityResiduals {
    double r1 = 0.0;
    double r2 = 0.0;
    double divergence_coupling = 0.0;  // -1/2 (div u, |v|^2)
    double trilinear_uvv = 0.0;        // ((u,grad)v, v)
};

inline OrthogonalityResiduals orthogonality_residuals(const VectorField& u,
                                                      const VectorField& v) {
    const Grid& g = u.grid();
    const int n = g.n();
    AdvectionContext cu = make_advection_context(u);
    AdvectionContext cv = make_advection_context(v);

    std::vector<Complex> div_spec(g.size());
    {
        std::vector<Complex> dx, dy;
        spectral_derivative(g, u.comp(0), 0, dx);
        spectral_derivative(g, u.comp(1), 1, dy);
        for (std::size_t i = 0; i < div_spec.size(); ++i)
            div_spec[i] = dx[i] + dy[i];
    }
    auto div_phys = to_physical(ScalarField(u.grid_ptr(), div_spec));

    const std::size_t total = g.size();
    double tri_uvv = 0.0, div_v2 = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        const double adv0 = cu.u[0][i] * cv.grad[0][0][i] +
                            cu.u[1][i] * cv.grad[0][1][i];
        const double adv1 = cu.u[0][i] * cv.grad[1][0][i] +
                            cu.u[1][i] * cv.grad[1][1][i];
        tri_uvv += adv0 * cv.u[0][i] + adv1 * cv.u[1][i];
        const double v2 = cv.u[0][i] * cv.u[0][i] + cv.u[1][i] * cv.u[1][i];
        div_v2 += div_phys[i] * v2;
    }
    const double cell = (g.box_length() / n) * (g.box_length() / n);
    tri_uvv *= cell;
    div_v2 *= cell;

    // ((u,grad)u, lap u) pointwise against the spectral Laplacian of u.
    VectorField lap = laplacian(u);
    auto lap0 = to_physical(ScalarField(u.grid_ptr(), lap.comp(0)));
    auto lap1 = to_physical(ScalarField(u.grid_ptr(), lap.comp(1)));
    double tri_uul = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        const double adv0 = cu.u[0][i] * cu.grad[0][0][i] +
                            cu.u[1][i] * cu.grad[0][1][i];
        const double adv1 = cu.u[0][i] * cu.grad[1][0][i] +
                            cu.u[1][i] * cu.grad[1][1][i];
        tri_uul += adv0 * lap0[i] + adv1 * lap1[i];
    }
    tri_uul *= cell;

    constexpr double eps = 1e-300;
    OrthogonalityResiduals out;
    out.trilinear_uvv = tri_uvv;
    out.divergence_coupling = -0.5 * div_v2;
    out.r1 = std::abs(tri_uvv) /
             (l2_norm(u) * std::sqrt(grad_norm_sq(v)) * l2_norm(v) + eps);
    out.r2 = std::abs(tri_uul) /
             (l2_norm(u) * std::sqrt(grad_norm_sq(u)) *
                  std::sqrt(laplacian_norm_sq(u)) + eps);
    return out;
}

/// Per-inequality Monte Carlo summary; min_slack is the signed distance to
/// the asserted bound (nonnegative means the bound held on every trial).
struct IneqTrialReport {
    std::string name;
    long trials = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double empirical_constant = 0.0;
    std::uint64_t worst_case_seed = 0;
};

inline IneqTrialReport run_pointwise_trials(long trials, std::uint64_t seed) {
    IneqTrialReport rep;
    rep.name = "pointwise_traceless";
    rep.trials = trials;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst_ratio = 0.0;
    for (long i = 0; i < trials; ++i) {
        const double a = gauss(rng), b = gauss(rng), c = gauss(rng);
        const std::array<double, 4> A{a, b, c, -a};
        const std::array<double, 2> v{gauss(rng), gauss(rng)};
        const double slack = pointwise_inequality_slack(A, v);
        const double frob = std::sqrt(2 * a * a + b * b + c * c);
        const double scale = frob * (v[0] * v[0] + v[1] * v[1]);
        const double rel = scale > 0.0 ? slack / scale : 0.0;
        if (rel < rep.min_slack) {
            rep.min_slack = rel;
            rep.worst_case_seed = seed + i;
        }
        if (scale > 0.0) worst_ratio = std::max(worst_ratio, 1.0 - rel);
    }
    rep.empirical_constant = worst_ratio;  // fraction of the bound attained
    return rep;
}

inline IneqTrialReport run_lieb_thirring_trials(int families_per_m, int m_max,
                                                int grid_n, std::uint64_t seed) {
    IneqTrialReport rep;
    rep.name = "lieb_thirring";
    auto grid = Grid::make(grid_n, 2.0 * kPi);
    const int band = cubic_band(grid_n);
    double max_ratio = 0.0;
    long count = 0;
    for (int m = 1; m <= m_max; ++m) {
        for (int trial = 0; trial < families_per_m; ++trial) {
            const std::uint64_t s = seed + 1000003ull * m + trial;
            auto fam = random_orthonormal_family(grid, m, s, band);
            const double ratio = lieb_thirring_ratio(fam);
            if (ratio > max_ratio) {
                max_ratio = ratio;
                rep.worst_case_seed = s;
            }
            ++count;
        }
    }
    rep.trials = count;
    rep.empirical_constant = max_ratio;
    rep.min_slack = lieb_thirring_constant() - max_ratio;
    return rep;
}

inline IneqTrialReport run_orthogonality_trials(int trials, int grid_n,
                                                std::uint64_t seed) {
    IneqTrialReport rep;
    rep.name = "orthogonality";
    rep.trials = trials;
    auto grid = Grid::make(grid_n, 2.0 * kPi);
    const int band = cubic_band(grid_n);
    double max_res = 0.0;
    for (int i = 0; i < trials; ++i) {
        auto fam = random_divfree_family(grid, 2, seed + i, band);
        const auto res = orthogonality_residuals(fam[0], fam[1]);
        const double worst = std::max(res.r1, res.r2);
        if (worst > max_res) {
            max_res = worst;
            rep.worst_case_seed = seed + i;
        }
    }
    rep.empirical_constant = max_res;
    rep.min_slack = 1e-11 - max_res;  // documented residual tolerance
    return rep;
}

inline IneqTrialReport run_ladyzhenskaya_trials(int trials, int grid_n,
                                                std::uint64_t seed) {
    IneqTrialReport rep;
    rep.name = "ladyzhenskaya";
    rep.trials = trials;
    auto grid = Grid::make(grid_n, 2.0 * kPi);
    const int band = cubic_band(grid_n);
    double sup = 0.0;
    for (int i = 0; i < trials; ++i) {
        auto fam = random_divfree_family(grid, 1, seed + i, band);
        const double ratio = ladyzhenskaya_ratio(fam[0]);
        if (ratio > sup) {
            sup = ratio;
            rep.worst_case_seed = seed + i;
        }
    }
    rep.empirical_constant = sup;  // measured constant, reported not asserted
    rep.min_slack = 0.0;
    return rep;
}

inline IneqTrialReport run_interpolation_trials(int trials, int grid_n,
                                                std::uint64_t seed) {
    IneqTrialReport rep;
    rep.name = "sobolev_interpolation";
    rep.trials = trials;
    auto grid = Grid::make(grid_n, 2.0 * kPi);
    const int band = grid_n / 3;
    std::mt19937_64 srng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> sdist(0.0, 1.0);
    for (int i = 0; i < trials; ++i) {
        auto fam = random_divfree_family(grid, 1, seed + i, band);
        const VectorField& f = fam[0];
        const double s = sdist(srng);
        const double l2 = l2_norm(f);
        const double h1 = std::sqrt(grad_norm_sq(f));
        const double h2 = std::sqrt(laplacian_norm_sq(f));
        const double rhs1 = std::pow(l2, 1.0 - s) * std::pow(h1, s);
        const double slack1 = (rhs1 - sobolev_norm(f, s)) / rhs1;
        const double rhs2 = std::pow(h1, s) * std::pow(h2, 1.0 - s);
        const double slack2 = (rhs2 - sobolev_norm(f, 2.0 - s)) / rhs2;
        const double worst = std::min(slack1, slack2);
        if (worst < rep.min_slack) {
            rep.min_slack = worst;
            rep.worst_case_seed = seed + i;
        }
    }
    rep.empirical_constant = rep.min_slack;
    return rep;
}

}  // namespace dns2d
