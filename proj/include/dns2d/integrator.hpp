#pragma once

#include <cstdint>
#include <vector>

#include "dns2d/config.hpp"
#include "dns2d/operators.hpp"

namespace dns2d {

struct TrajectoryState {
    double t = 0.0;
    std::int64_t step = 0;
    VectorField u;
};

/// Right-hand side of the damped-driven system in spectral space:
/// P(-(u,grad)u) - alpha u + nu lap u + g (g is divergence-free already).
inline VectorField rhs(const VectorField& u, double nu, double alpha,
                       const VectorField& g) {
    VectorField out = leray_project(nonlinear_term(u));
    out *= -1.0;
    const Grid& grid = u.grid();
    const int n = grid.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double lam = -(alpha + nu * grid.k_squared(i, j));
            const std::size_t id = grid.index(i, j);
            for (int c = 0; c < 2; ++c)
                out.comp(c)[id] += lam * u.comp(c)[id] + g.comp(c)[id];
        }
    out.set_divergence_free(true);
    return out;
}

/// One-trajectory time stepper. The linear part -(alpha + nu |k|^2) is
/// integrated exactly per mode by the default Lawson exponential RK4; the
/// IMEX scheme treats it with Crank-Nicolson and the advection with AB2.
///
/// Internally the projected advection uses the rotation form
///   P((u,grad)u) = P(omega u_perp),  omega = rot u, u_perp = (-u2, u1),
/// and its polarization for tangents; the gradient part is annihilated by
/// the projection, so this matches the full advection exactly on the
/// dealias band while needing 5 transforms per evaluation instead of 8.
///
/// Tangent fields advance jointly through the same stages, which makes the
/// tangent update the exact derivative of the discrete base map.
///
/// Stateful (AB2 history, stage scratch); one instance per trajectory.
class Stepper {
  public:
    Stepper(GridPtr grid, double nu, double alpha, double dt,
            IntegratorKind kind, VectorField forcing)
        : grid_(std::move(grid)),
          nu_(nu),
          alpha_(alpha),
          dt_(dt),
          kind_(kind),
          forcing_(std::move(forcing)) {
        const Grid& g = *grid_;
        const int n = g.n();
        e_full_.resize(g.size());
        e_half_.resize(g.size());
        cn_plus_.resize(g.size());
        cn_inv_.resize(g.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double lam = -(alpha + nu * g.k_squared(i, j));
                const std::size_t id = g.index(i, j);
                e_full_[id] = std::exp(dt * lam);
                e_half_[id] = std::exp(0.5 * dt * lam);
                cn_plus_[id] = 1.0 + 0.5 * dt * lam;
                cn_inv_[id] = 1.0 / (1.0 - 0.5 * dt * lam);
            }
    }

    double dt() const { return dt_; }
    double nu() const { return nu_; }
    double alpha() const { return alpha_; }
    const VectorField& forcing() const { return forcing_; }
    const GridPtr& grid() const { return grid_; }

    void advance(TrajectoryState& s) {
        std::vector<VectorField> none;
        advance(s, none);
    }

    void advance(TrajectoryState& s, std::vector<VectorField>& tangents) {
        if (kind_ == IntegratorKind::exponential_rk4)
            advance_lawson(s, tangents);
        else
            advance_imex(s, tangents);
        ++s.step;
        s.t = s.step * dt_;
        if (!s.u.finite())
            throw NumericalFailure("solution blew up at t = " +
                                   std::to_string(s.t) +
                                   " (unstable dt or misconfiguration)");
    }

  private:
    // Physical-space velocity and vorticity of one stage state.
    struct StageContext {
        std::vector<double> u0, u1, omega;
    };

    void fill_physical(const std::vector<Complex>& spec,
                       std::vector<double>& out) const {
        work_ = spec;
        Fft::of(grid_->n()).inverse(work_.data());
        out.resize(work_.size());
        for (std::size_t i = 0; i < work_.size(); ++i) out[i] = work_[i].real();
    }

    void build_context(const VectorField& u, StageContext& ctx) const {
        fill_physical(u.comp(0), ctx.u0);
        fill_physical(u.comp(1), ctx.u1);
        const Grid& g = *grid_;
        const int n = g.n();
        work2_.resize(g.size());
        for (int i = 0; i < n; ++i) {
            const double kx = g.wavenumber(i);
            const bool nyq_i = 2 * g.kindex(i) == n;
            for (int j = 0; j < n; ++j) {
                const std::size_t id = g.index(i, j);
                if (nyq_i || 2 * g.kindex(j) == n) {
                    work2_[id] = Complex{};
                    continue;
                }
                const double ky = g.wavenumber(j);
                const Complex a = u.comp(1)[id];
                const Complex b = u.comp(0)[id];
                work2_[id] = Complex(-kx * a.imag() + ky * b.imag(),
                                     kx * a.real() - ky * b.real());
            }
        }
        fill_physical(work2_, ctx.omega);
    }

    // Spectral projection of the rotation-form product, dealiased:
    // out = -P(omega_base * w_perp + omega_w * base_perp) for the tangent
    // variant, or -P(omega * u_perp) when self-interacting. Forcing is
    // added by the caller when needed.
    void projected_advection(const std::vector<double>& p0,
                             const std::vector<double>& p1,
                             VectorField& out) const {
        const Grid& g = *grid_;
        const int n = g.n();
        work_.resize(g.size());
        work2_.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            work_[i] = Complex(p0[i], 0.0);
            work2_[i] = Complex(p1[i], 0.0);
        }
        Fft::of(n).forward(work_.data());
        Fft::of(n).forward(work2_.data());
        for (int i = 0; i < n; ++i) {
            const double kx = g.wavenumber(i);
            const bool nyq_i = 2 * g.kindex(i) == n;
            for (int j = 0; j < n; ++j) {
                const std::size_t id = g.index(i, j);
                if (!g.dealias_mask()[id] || nyq_i || 2 * g.kindex(j) == n) {
                    out.comp(0)[id] = Complex{};
                    out.comp(1)[id] = Complex{};
                    continue;
                }
                const double ky = g.wavenumber(j);
                const double k2 = kx * kx + ky * ky;
                Complex f0 = work_[id], f1 = work2_[id];
                if (k2 > 0.0) {
                    const Complex d = (kx * f0 + ky * f1) / k2;
                    f0 -= kx * d;
                    f1 -= ky * d;
                } else {
                    f0 = Complex{};
                    f1 = Complex{};
                }
                out.comp(0)[id] = -f0;
                out.comp(1)[id] = -f1;
            }
        }
        out.set_divergence_free(true);
    }

    // N(u) = P(-(u,grad)u) + g via the rotation form.
    void nonlinear(const StageContext& ctx, VectorField& out) const {
        prod0_.resize(ctx.u0.size());
        prod1_.resize(ctx.u0.size());
        for (std::size_t i = 0; i < ctx.u0.size(); ++i) {
            prod0_[i] = -ctx.omega[i] * ctx.u1[i];
            prod1_[i] = ctx.omega[i] * ctx.u0[i];
        }
        projected_advection(prod0_, prod1_, out);
        out += forcing_;
    }

    // A(u) v = P(-((v,grad)u + (u,grad)v)) via the polarized rotation form.
    void tangent_nonlinear(const StageContext& base, const VectorField& v,
                           VectorField& out) const {
        build_context(v, vctx_);
        prod0_.resize(base.u0.size());
        prod1_.resize(base.u0.size());
        for (std::size_t i = 0; i < base.u0.size(); ++i) {
            prod0_[i] = -(base.omega[i] * vctx_.u1[i] +
                          vctx_.omega[i] * base.u1[i]);
            prod1_[i] = base.omega[i] * vctx_.u0[i] +
                        vctx_.omega[i] * base.u0[i];
        }
        projected_advection(prod0_, prod1_, out);
    }

    VectorField scaled(const VectorField& f, const std::vector<double>& fac) const {
        VectorField out = f;
        out.scale_modes(fac);
        return out;
    }

    void advance_lawson(TrajectoryState& s, std::vector<VectorField>& tangents) {
        const double h = dt_;
        const VectorField& u = s.u;
        VectorField b1(grid_), b2(grid_), b3(grid_), b4(grid_);

        build_context(u, stage_[0]);
        nonlinear(stage_[0], b1);

        VectorField u2 = u;
        u2.axpy(0.5 * h, b1);
        u2.scale_modes(e_half_);
        build_context(u2, stage_[1]);
        nonlinear(stage_[1], b2);

        VectorField u3 = scaled(u, e_half_);
        u3.axpy(0.5 * h, b2);
        build_context(u3, stage_[2]);
        nonlinear(stage_[2], b3);

        VectorField u4 = scaled(u, e_full_);
        u4.axpy(h, scaled(b3, e_half_));
        build_context(u4, stage_[3]);
        nonlinear(stage_[3], b4);

        VectorField unew = scaled(u, e_full_);
        unew.axpy(h / 6.0, scaled(b1, e_full_));
        {
            VectorField mid = b2;
            mid += b3;
            unew.axpy(h / 3.0, scaled(mid, e_half_));
        }
        unew.axpy(h / 6.0, b4);
        unew.set_divergence_free(true);

        for (auto& v : tangents) {
            VectorField d1(grid_), d2(grid_), d3(grid_), d4(grid_);
            tangent_nonlinear(stage_[0], v, d1);
            VectorField v2 = v;
            v2.axpy(0.5 * h, d1);
            v2.scale_modes(e_half_);
            tangent_nonlinear(stage_[1], v2, d2);
            VectorField v3 = scaled(v, e_half_);
            v3.axpy(0.5 * h, d2);
            tangent_nonlinear(stage_[2], v3, d3);
            VectorField v4 = scaled(v, e_full_);
            v4.axpy(h, scaled(d3, e_half_));
            tangent_nonlinear(stage_[3], v4, d4);

            VectorField vnew = scaled(v, e_full_);
            vnew.axpy(h / 6.0, scaled(d1, e_full_));
            VectorField mid = d2;
            mid += d3;
            vnew.axpy(h / 3.0, scaled(mid, e_half_));
            vnew.axpy(h / 6.0, d4);
            vnew.set_divergence_free(true);
            v = std::move(vnew);
        }
        s.u = std::move(unew);
    }

    void advance_imex(TrajectoryState& s, std::vector<VectorField>& tangents) {
        const double h = dt_;
        build_context(s.u, stage_[0]);
        VectorField nl(grid_);
        nonlinear(stage_[0], nl);
        if (!have_prev_) {
            prev_nl_ = nl;
            prev_tangent_nl_.clear();
        }
        VectorField unew = scaled(s.u, cn_plus_);
        unew.axpy(1.5 * h, nl);
        unew.axpy(-0.5 * h, prev_nl_);
        unew.scale_modes(cn_inv_);
        unew.set_divergence_free(true);

        if (prev_tangent_nl_.size() != tangents.size()) {
            prev_tangent_nl_.resize(tangents.size(), VectorField(grid_));
            for (std::size_t i = 0; i < tangents.size(); ++i)
                tangent_nonlinear(stage_[0], tangents[i], prev_tangent_nl_[i]);
        }
        for (std::size_t i = 0; i < tangents.size(); ++i) {
            VectorField tl(grid_);
            tangent_nonlinear(stage_[0], tangents[i], tl);
            VectorField vnew = scaled(tangents[i], cn_plus_);
            vnew.axpy(1.5 * h, tl);
            vnew.axpy(-0.5 * h, prev_tangent_nl_[i]);
            vnew.scale_modes(cn_inv_);
            vnew.set_divergence_free(true);
            prev_tangent_nl_[i] = std::move(tl);
            tangents[i] = std::move(vnew);
        }
        prev_nl_ = std::move(nl);
        have_prev_ = true;
        s.u = std::move(unew);
    }

    GridPtr grid_;
    double nu_, alpha_, dt_;
    IntegratorKind kind_;
    VectorField forcing_;
    std::vector<double> e_full_, e_half_, cn_plus_, cn_inv_;
    bool have_prev_ = false;
    VectorField prev_nl_;
    std::vector<VectorField> prev_tangent_nl_;
    mutable StageContext stage_[4];
    mutable StageContext vctx_;
    mutable std::vector<Complex> work_, work2_;
    mutable std::vector<double> prod0_, prod1_;
};

}  // namespace dns2d
