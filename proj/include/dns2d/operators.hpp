#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dns2d/errors.hpp"
#include "dns2d/fft.hpp"
#include "dns2d/field.hpp"

namespace dns2d {

// Norm convention (fixed for the whole artifact): for coefficients in the
// series u(x) = sum_k u_hat(k) exp(i k.x) on the box [0,L]^2,
//
//   ||u||_{L2}^2      = L^2 * sum_k |u_hat(k)|^2
//   ||u||_{Hdot^s}^2  = L^2 * sum_{k != 0} |k|^{2s} |u_hat(k)|^2,  k = 2*pi*m/L
//
// which makes ||.||_{Hdot^0} the physical L2 norm, ||.||_{Hdot^1} = ||grad u||
// and ||.||_{Hdot^2} = ||lap u||. Physical-space quadrature of a lattice
// sample is (L/n)^2 * sum_x, exact for band-limited integrands.

inline std::vector<double> to_physical(const ScalarField& f) {
    const Grid& g = f.grid();
    std::vector<Complex> buf = f.coeff();
    Fft::of(g.n()).inverse(buf.data());
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
    return out;
}

inline ScalarField to_spectral(GridPtr grid, const std::vector<double>& phys) {
    if (phys.size() != grid->size())
        throw std::invalid_argument("to_spectral: sample count mismatch");
    std::vector<Complex> buf(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i) buf[i] = Complex(phys[i], 0.0);
    Fft::of(grid->n()).forward(buf.data());
    return ScalarField(std::move(grid), std::move(buf));
}

inline std::array<std::vector<double>, 2> to_physical(const VectorField& u) {
    return {to_physical(ScalarField(u.grid_ptr(), u.comp(0))),
            to_physical(ScalarField(u.grid_ptr(), u.comp(1)))};
}

inline VectorField vector_to_spectral(GridPtr grid,
                                      const std::vector<double>& phys0,
                                      const std::vector<double>& phys1) {
    VectorField out(grid);
    out.comp(0) = to_spectral(grid, phys0).coeff();
    out.comp(1) = to_spectral(grid, phys1).coeff();
    return out;
}

// The Nyquist index n/2 is its own conjugate partner, so any operator odd in
// k would break reality symmetry there; such operators zero that line, the
// usual pseudo-spectral convention. Every constructor in the artifact
// band-limits fields to |m_j| <= n/3, so the line is empty in practice.

/// d/dx_axis in spectral space: multiply by i*k_axis.
inline void spectral_derivative(const Grid& g, const std::vector<Complex>& in,
                                int axis, std::vector<Complex>& out) {
    const int n = g.n();
    out.resize(in.size());
    for (int i = 0; i < n; ++i) {
        const double ki = g.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const int m = (axis == 0) ? g.kindex(i) : g.kindex(j);
            const double k = (axis == 0) ? ki : g.wavenumber(j);
            const Complex v = in[g.index(i, j)];
            out[g.index(i, j)] = (2 * m == n)
                                     ? Complex{}
                                     : Complex(-k * v.imag(), k * v.real());
        }
    }
}

/// Leray orthogonal projection onto divergence-free fields:
/// (P f)(k) = f_hat(k) - k (k . f_hat(k)) / |k|^2, (P f)(0) = 0.
inline VectorField leray_project(const VectorField& f) {
    const Grid& g = f.grid();
    const int n = g.n();
    VectorField out(f.grid_ptr());
    for (int i = 0; i < n; ++i) {
        const double kx = g.wavenumber(i);
        const bool nyq_i = 2 * g.kindex(i) == n;
        for (int j = 0; j < n; ++j) {
            const double ky = g.wavenumber(j);
            const double k2 = kx * kx + ky * ky;
            const std::size_t id = g.index(i, j);
            if (k2 == 0.0 || nyq_i || 2 * g.kindex(j) == n) continue;
            const Complex d = (kx * f.comp(0)[id] + ky * f.comp(1)[id]) / k2;
            out.comp(0)[id] = f.comp(0)[id] - kx * d;
            out.comp(1)[id] = f.comp(1)[id] - ky * d;
        }
    }
    out.set_divergence_free(true);
    return out;
}

/// rot u = d(u^2)/dx_1 - d(u^1)/dx_2.
inline ScalarField rot(const VectorField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    ScalarField out(u.grid_ptr());
    for (int i = 0; i < n; ++i) {
        const double kx = g.wavenumber(i);
        const bool nyq_i = 2 * g.kindex(i) == n;
        for (int j = 0; j < n; ++j) {
            const std::size_t id = g.index(i, j);
            if (nyq_i || 2 * g.kindex(j) == n) continue;
            const double ky = g.wavenumber(j);
            const Complex a = u.comp(1)[id];
            const Complex b = u.comp(0)[id];
            out.coeff()[id] = Complex(-kx * a.imag() + ky * b.imag(),
                                      kx * a.real() - ky * b.real());
        }
    }
    return out;
}

inline VectorField laplacian(const VectorField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    VectorField out = u;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double k2 = g.k_squared(i, j);
            const std::size_t id = g.index(i, j);
            out.comp(0)[id] *= -k2;
            out.comp(1)[id] *= -k2;
        }
    return out;
}

inline double l2_norm_sq(const ScalarField& f) {
    double s = 0.0;
    for (const auto& v : f.coeff()) s += std::norm(v);
    const double L = f.grid().box_length();
    return L * L * s;
}
inline double l2_norm(const ScalarField& f) { return std::sqrt(l2_norm_sq(f)); }

inline double l2_norm_sq(const VectorField& u) {
    double s = 0.0;
    for (int c = 0; c < 2; ++c)
        for (const auto& v : u.comp(c)) s += std::norm(v);
    const double L = u.grid().box_length();
    return L * L * s;
}
inline double l2_norm(const VectorField& u) { return std::sqrt(l2_norm_sq(u)); }

inline double l2_inner(const VectorField& a, const VectorField& b) {
    double s = 0.0;
    for (int c = 0; c < 2; ++c) {
        const auto& ac = a.comp(c);
        const auto& bc = b.comp(c);
        for (std::size_t i = 0; i < ac.size(); ++i)
            s += ac[i].real() * bc[i].real() + ac[i].imag() * bc[i].imag();
    }
    const double L = a.grid().box_length();
    return L * L * s;
}

inline double l2_inner(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coeff().size(); ++i)
        s += a.coeff()[i].real() * b.coeff()[i].real() +
             a.coeff()[i].imag() * b.coeff()[i].imag();
    const double L = a.grid().box_length();
    return L * L * s;
}

/// Homogeneous Sobolev norm; s outside [-2, 2] is outside the validated
/// range and rejected. The k = 0 mode never contributes.
inline double sobolev_norm_sq(const VectorField& u, double s) {
    if (s < -2.0 || s > 2.0)
        throw std::invalid_argument("sobolev_norm: s must lie in [-2, 2]");
    const Grid& g = u.grid();
    const int n = g.n();
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double k2 = g.k_squared(i, j);
            if (k2 == 0.0) continue;
            const std::size_t id = g.index(i, j);
            const double w = std::pow(k2, s);
            sum += w * (std::norm(u.comp(0)[id]) + std::norm(u.comp(1)[id]));
        }
    const double L = g.box_length();
    return L * L * sum;
}
inline double sobolev_norm(const VectorField& u, double s) {
    return std::sqrt(sobolev_norm_sq(u, s));
}

inline double grad_norm_sq(const VectorField& u) { return sobolev_norm_sq(u, 1.0); }
inline double laplacian_norm_sq(const VectorField& u) {
    return sobolev_norm_sq(u, 2.0);
}

inline void apply_dealias(VectorField& u) {
    const auto& mask = u.grid().dealias_mask();
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (!mask[i]) u.comp(c)[i] = Complex{};
}

/// Zero every mode with |m_j| > band on either axis.
inline void truncate_band(VectorField& u, int band) {
    const Grid& g = u.grid();
    const int n = g.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(g.kindex(i)) > band || std::abs(g.kindex(j)) > band)
                for (int c = 0; c < 2; ++c) u.at(c, i, j) = Complex{};
}

/// Physical velocity and velocity gradient of a base field, kept around so
/// several advection products against the same base share the transforms.
struct AdvectionContext {
    GridPtr grid;
    std::array<std::vector<double>, 2> u;           // u^c(x)
    std::array<std::array<std::vector<double>, 2>, 2> grad;  // grad[c][axis]
};

inline AdvectionContext make_advection_context(const VectorField& u) {
    AdvectionContext ctx;
    ctx.grid = u.grid_ptr();
    const Grid& g = u.grid();
    std::vector<Complex> deriv;
    for (int c = 0; c < 2; ++c) {
        ctx.u[c] = to_physical(ScalarField(u.grid_ptr(), u.comp(c)));
        for (int axis = 0; axis < 2; ++axis) {
            spectral_derivative(g, u.comp(c), axis, deriv);
            ctx.grad[c][axis] =
                to_physical(ScalarField(u.grid_ptr(), deriv));
        }
    }
    return ctx;
}

/// Dealiased (u,grad)u from a prepared context.
inline VectorField self_advection(const AdvectionContext& ctx) {
    const std::size_t total = ctx.grid->size();
    std::vector<double> w0(total), w1(total);
    for (std::size_t i = 0; i < total; ++i) {
        w0[i] = ctx.u[0][i] * ctx.grad[0][0][i] + ctx.u[1][i] * ctx.grad[0][1][i];
        w1[i] = ctx.u[0][i] * ctx.grad[1][0][i] + ctx.u[1][i] * ctx.grad[1][1][i];
    }
    VectorField out = vector_to_spectral(ctx.grid, w0, w1);
    apply_dealias(out);
    return out;
}

/// Dealiased pseudo-spectral (u,grad)u; not Leray-projected.
inline VectorField nonlinear_term(const VectorField& u) {
    return self_advection(make_advection_context(u));
}

/// Dealiased (v,grad)u + (u,grad)v against the prepared base u.
inline VectorField tangent_advection(const AdvectionContext& base,
                                     const VectorField& v) {
    const Grid& g = *base.grid;
    const std::size_t total = g.size();
    std::array<std::vector<double>, 2> vp;
    std::array<std::array<std::vector<double>, 2>, 2> gv;
    std::vector<Complex> deriv;
    for (int c = 0; c < 2; ++c) {
        vp[c] = to_physical(ScalarField(v.grid_ptr(), v.comp(c)));
        for (int axis = 0; axis < 2; ++axis) {
            spectral_derivative(g, v.comp(c), axis, deriv);
            gv[c][axis] = to_physical(ScalarField(v.grid_ptr(), deriv));
        }
    }
    std::vector<double> w0(total), w1(total);
    for (std::size_t i = 0; i < total; ++i) {
        w0[i] = vp[0][i] * base.grad[0][0][i] + vp[1][i] * base.grad[0][1][i] +
                base.u[0][i] * gv[0][0][i] + base.u[1][i] * gv[0][1][i];
        w1[i] = vp[0][i] * base.grad[1][0][i] + vp[1][i] * base.grad[1][1][i] +
                base.u[0][i] * gv[1][0][i] + base.u[1][i] * gv[1][1][i];
    }
    VectorField out = vector_to_spectral(base.grid, w0, w1);
    apply_dealias(out);
    return out;
}

/// Physical samples of one scalar coefficient set on a p x p lattice
/// (p >= n, both powers of two), by zero-padded spectral interpolation.
/// Input must be band-limited below the source Nyquist row.
inline std::vector<double> to_physical_padded(const Grid& g,
                                              const std::vector<Complex>& coeff,
                                              int p) {
    if (p < g.n()) throw std::invalid_argument("to_physical_padded: p < n");
    if (p == g.n()) {
        std::vector<Complex> buf = coeff;
        Fft::of(p).inverse(buf.data());
        std::vector<double> out(buf.size());
        for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
        return out;
    }
    const int n = g.n();
    std::vector<Complex> buf(static_cast<std::size_t>(p) * p, Complex{});
    for (int i = 0; i < n; ++i) {
        const int mi = g.kindex(i);
        const int ip = mi >= 0 ? mi : p + mi;
        for (int j = 0; j < n; ++j) {
            const int mj = g.kindex(j);
            const int jp = mj >= 0 ? mj : p + mj;
            buf[static_cast<std::size_t>(ip) * p + jp] = coeff[g.index(i, j)];
        }
    }
    Fft::of(p).inverse(buf.data());
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
    return out;
}

/// (L/p)^2 * sum of samples: exact integral for band-limited integrands.
inline double quadrature_integral(double box_length, int p,
                                  const std::vector<double>& samples) {
    double s = 0.0;
    for (double v : samples) s += v;
    const double h = box_length / p;
    return h * h * s;
}

/// Two-pass modified Gram-Schmidt in the L2 inner product. Returns the
/// diagonal stretch factors removed from each member. Throws on rank
/// collapse (stretch below 1e-300).
inline std::vector<double> orthonormalize(std::vector<VectorField>& family) {
    std::vector<double> diag(family.size());
    for (std::size_t j = 0; j < family.size(); ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                const double c = l2_inner(family[j], family[i]);
                family[j].axpy(-c, family[i]);
            }
        diag[j] = l2_norm(family[j]);
        if (!(diag[j] > 1e-300))
            throw NumericalFailure("orthonormalize: rank collapse at member " +
                                   std::to_string(j));
        family[j] *= 1.0 / diag[j];
    }
    return diag;
}

/// Max |Gram - Identity| entry of a family in the L2 inner product.
inline double gram_defect(const std::vector<VectorField>& family) {
    double worst = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double gij = l2_inner(family[i], family[j]);
            worst = std::max(worst, std::abs(gij - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace dns2d
