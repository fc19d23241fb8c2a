#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here stays off the implementation paths it checks: the fine-grid advection
// oracle builds its own transforms, the Gram-determinant oracle goes through
// Eigen, and quadratures are plain lattice sums.

#include <Eigen/Dense>
#include <random>

#include "dns2d/config.hpp"
#include "dns2d/operators.hpp"

namespace testutil {

using dns2d::Complex;
using dns2d::GridPtr;
using dns2d::ScalarField;
using dns2d::VectorField;

inline VectorField random_divfree(GridPtr grid, int band, std::uint64_t seed,
                                  double norm = 1.0) {
    std::mt19937_64 rng(seed);
    VectorField v(grid);
    ScalarField a(grid), b(grid);
    dns2d::fill_random_band(a, band, rng);
    dns2d::fill_random_band(b, band, rng);
    v.comp(0) = a.coeff();
    v.comp(1) = b.coeff();
    v = dns2d::leray_project(v);
    v.comp(0)[0] = Complex{};
    v.comp(1)[0] = Complex{};
    const double n0 = dns2d::l2_norm(v);
    if (n0 > 0.0) v *= norm / n0;
    return v;
}

inline VectorField random_vector(GridPtr grid, int band, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VectorField v(grid);
    ScalarField a(grid), b(grid);
    dns2d::fill_random_band(a, band, rng);
    dns2d::fill_random_band(b, band, rng);
    v.comp(0) = a.coeff();
    v.comp(1) = b.coeff();
    return v;
}

/// Single divergence-free mode: u = 2 Re(a e^{i k.x}) with a perpendicular
/// to k, normalized to unit amplitude coefficient pair.
inline VectorField single_mode(GridPtr grid, int k1, int k2,
                               Complex amplitude = Complex(0.5, 0.0)) {
    VectorField u(grid);
    const int n = grid->n();
    const int i = k1 >= 0 ? k1 : n + k1;
    const int j = k2 >= 0 ? k2 : n + k2;
    const double norm = std::sqrt(double(k1) * k1 + double(k2) * k2);
    // unit vector perpendicular to k
    const double p0 = -k2 / norm, p1 = k1 / norm;
    u.at(0, i, j) = amplitude * p0;
    u.at(1, i, j) = amplitude * p1;
    u.at(0, grid->conj_index(i), grid->conj_index(j)) = std::conj(amplitude) * p0;
    u.at(1, grid->conj_index(i), grid->conj_index(j)) = std::conj(amplitude) * p1;
    u.set_divergence_free(true);
    return u;
}

/// Physical-space L2 norm by plain lattice quadrature (independent of the
/// spectral Parseval path).
inline double physical_l2_norm(const VectorField& u) {
    auto phys = dns2d::to_physical(u);
    double q = 0.0;
    for (std::size_t i = 0; i < phys[0].size(); ++i)
        q += phys[0][i] * phys[0][i] + phys[1][i] * phys[1][i];
    const double h = u.grid().box_length() / u.grid().n();
    return std::sqrt(q * h * h);
}

/// Exact (u,grad)u oracle on a 2x finer grid: embeds the coefficients,
/// multiplies there (alias-free for inputs inside the coarse dealias band)
/// and restricts back. Independent of nonlinear_term's masked product path.
inline VectorField fine_grid_advection_oracle(const VectorField& u) {
    const dns2d::Grid& g = u.grid();
    const int n = g.n();
    const int p = 2 * n;
    auto fine = dns2d::Grid::make(p, g.box_length());
    VectorField uf(fine);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < n; ++i) {
            const int mi = g.kindex(i);
            const int ip = mi >= 0 ? mi : p + mi;
            for (int j = 0; j < n; ++j) {
                const int mj = g.kindex(j);
                const int jp = mj >= 0 ? mj : p + mj;
                uf.at(c, ip, jp) = u.at(c, i, j);
            }
        }
    VectorField advf = dns2d::nonlinear_term(uf);
    VectorField out(u.grid_ptr());
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < n; ++i) {
            const int mi = g.kindex(i);
            const int ip = mi >= 0 ? mi : p + mi;
            for (int j = 0; j < n; ++j) {
                const int mj = g.kindex(j);
                const int jp = mj >= 0 ? mj : p + mj;
                out.at(c, i, j) = g.dealias_keep(i, j) ? advf.at(c, ip, jp)
                                                       : Complex{};
            }
        }
    return out;
}

/// log sqrt(det Gram) of a family, via Eigen LDLT on the m x m Gram matrix.
inline double log_volume(const std::vector<VectorField>& fam) {
    const int m = static_cast<int>(fam.size());
    Eigen::MatrixXd gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            gram(i, j) = dns2d::l2_inner(fam[i], fam[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    double logdet = 0.0;
    for (int i = 0; i < m; ++i) logdet += std::log(es.eigenvalues()[i]);
    return 0.5 * logdet;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace testutil
