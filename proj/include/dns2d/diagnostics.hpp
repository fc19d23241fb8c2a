#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dns2d/operators.hpp"

namespace dns2d {

/// Per-sample energies, powers and running identity residuals.
struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;                 // ||u||^2
    double grad_energy = 0.0;            // ||grad u||^2
    double laplacian_energy = 0.0;       // ||lap u||^2
    double forcing_power = 0.0;          // (g, u)
    double strong_forcing_power = 0.0;   // (g, lap u)
    double energy_residual = 0.0;
    double strong_energy_residual = 0.0;
};

inline DiagnosticsRecord measure_diagnostics(const VectorField& u,
                                             const VectorField& g, double t) {
    DiagnosticsRecord r;
    r.t = t;
    r.energy = l2_norm_sq(u);
    r.grad_energy = grad_norm_sq(u);
    r.laplacian_energy = laplacian_norm_sq(u);
    r.forcing_power = l2_inner(g, u);
    r.strong_forcing_power = l2_inner(g, laplacian(u));
    return r;
}

/// Composite quadrature on uniform samples: Simpson panels, with a 3/8 tail
/// when the panel count is odd; trapezoid when only two points exist.
inline double integrate_samples(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (y[0] + y[1]);
    if (n == 3) return h / 3.0 * (y[0] + 4.0 * y[1] + y[2]);
    const std::size_t panels = n - 1;
    if (panels % 2 == 0) {
        double s = y[0] + y[n - 1];
        for (std::size_t i = 1; i < panels; i += 2) s += 4.0 * y[i];
        for (std::size_t i = 2; i < panels; i += 2) s += 2.0 * y[i];
        return s * h / 3.0;
    }
    // Simpson on the first panels-3 (even), 3/8 rule on the last three.
    const std::size_t head = n - 3;  // points 0..head-1 span panels-3 panels
    double s = 0.0;
    if (head >= 3)
        s = integrate_samples(y.first(head), h);
    const std::size_t b = n - 4;
    s += 3.0 * h / 8.0 * (y[b] + 3.0 * y[b + 1] + 3.0 * y[b + 2] + y[b + 3]);
    if (head < 3) return s;  // n == 4: pure 3/8
    return s;
}

namespace detail {
inline void require_uniform(std::span<const DiagnosticsRecord> w) {
    if (w.size() < 2)
        throw std::invalid_argument("diagnostics window needs >= 2 records");
    const double h = w[1].t - w[0].t;
    for (std::size_t i = 1; i < w.size(); ++i) {
        const double d = w[i].t - w[i - 1].t;
        if (std::abs(d - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("diagnostics window is not uniform in t");
    }
}
}  // namespace detail

/// Residual of the integrated energy identity
///   1/2 d/dt||u||^2 + nu||grad u||^2 + alpha||u||^2 = (g,u)
/// over the window, normalized by the integrated dissipation.
inline double energy_balance_residual(std::span<const DiagnosticsRecord> w,
                                      double nu, double alpha) {
    detail::require_uniform(w);
    const double h = w[1].t - w[0].t;
    std::vector<double> integrand(w.size()), dissip(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        dissip[i] = nu * w[i].grad_energy + alpha * w[i].energy;
        integrand[i] = dissip[i] - w[i].forcing_power;
    }
    const double num =
        0.5 * (w.back().energy - w.front().energy) + integrate_samples(integrand, h);
    const double den = integrate_samples(dissip, h);
    return den > 0.0 ? std::abs(num) / den : std::abs(num);
}

/// Residual of the integrated gradient-energy identity
///   1/2 d/dt||grad u||^2 + nu||lap u||^2 + alpha||grad u||^2 = -(g, lap u).
/// (Pairing the momentum equation with -lap u puts (grad g, grad u) on the
/// right; a single-mode solution fixes the sign unambiguously.)
inline double strong_energy_balance_residual(std::span<const DiagnosticsRecord> w,
                                             double nu, double alpha) {
    detail::require_uniform(w);
    const double h = w[1].t - w[0].t;
    std::vector<double> integrand(w.size()), dissip(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        dissip[i] = nu * w[i].laplacian_energy + alpha * w[i].grad_energy;
        integrand[i] = dissip[i] + w[i].strong_forcing_power;
    }
    const double num = 0.5 * (w.back().grad_energy - w.front().grad_energy) +
                       integrate_samples(integrand, h);
    const double den = integrate_samples(dissip, h);
    return den > 0.0 ? std::abs(num) / den : std::abs(num);
}

/// Slack report for the dissipative estimates. Pointwise part:
///   ||u(t)||^2 <= ||u(t0)||^2 exp(-alpha (t-t0)) + ||g||^2/alpha^2,
/// window part (trapezoid prefix sums over all sample pairs):
///   2 nu int_t^{t+T} ||grad u||^2 <= T ||g||^2/alpha + ||u(t)||^2.
struct DissipativeReport {
    double min_pointwise_slack = std::numeric_limits<double>::infinity();
    double t_at_min_pointwise = 0.0;
    double min_window_slack = std::numeric_limits<double>::infinity();
    double window_start = 0.0, window_end = 0.0;
};

inline DissipativeReport check_dissipative_estimate(
    std::span<const DiagnosticsRecord> w, double nu, double alpha,
    double g_norm_sq) {
    detail::require_uniform(w);
    DissipativeReport rep;
    const double e0 = w.front().energy;
    const double t0 = w.front().t;
    for (const auto& r : w) {
        const double bound =
            e0 * std::exp(-alpha * (r.t - t0)) + g_norm_sq / (alpha * alpha);
        const double slack =
            bound > 0.0 ? (bound - r.energy) / bound : -r.energy;
        if (slack < rep.min_pointwise_slack) {
            rep.min_pointwise_slack = slack;
            rep.t_at_min_pointwise = r.t;
        }
    }
    const double h = w[1].t - w[0].t;
    std::vector<double> prefix(w.size(), 0.0);
    for (std::size_t i = 1; i < w.size(); ++i)
        prefix[i] = prefix[i - 1] +
                    0.5 * h * (w[i - 1].grad_energy + w[i].grad_energy);
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j < w.size(); ++j) {
            const double lhs = 2.0 * nu * (prefix[j] - prefix[i]);
            const double rhs =
                (w[j].t - w[i].t) * g_norm_sq / alpha + w[i].energy;
            const double slack = rhs > 0.0 ? (rhs - lhs) / rhs : -lhs;
            if (slack < rep.min_window_slack) {
                rep.min_window_slack = slack;
                rep.window_start = w[i].t;
                rep.window_end = w[j].t;
            }
        }
    }
    if (w.size() < 2) rep.min_window_slack = 0.0;
    return rep;
}

/// Same shape for the strong estimates:
///   ||grad u(t)||^2 <= ||grad u(t0)||^2 exp(-alpha (t-t0)) + ||g||^2/(2 alpha nu),
///   nu int_t^{t+T} ||lap u||^2 <= T ||g||^2/nu + ||grad u(t)||^2.
inline DissipativeReport check_strong_estimates(
    std::span<const DiagnosticsRecord> w, double nu, double alpha,
    double g_norm_sq) {
    detail::require_uniform(w);
    DissipativeReport rep;
    const double e0 = w.front().grad_energy;
    const double t0 = w.front().t;
    for (const auto& r : w) {
        const double bound = e0 * std::exp(-alpha * (r.t - t0)) +
                             g_norm_sq / (2.0 * alpha * nu);
        const double slack =
            bound > 0.0 ? (bound - r.grad_energy) / bound : -r.grad_energy;
        if (slack < rep.min_pointwise_slack) {
            rep.min_pointwise_slack = slack;
            rep.t_at_min_pointwise = r.t;
        }
    }
    const double h = w[1].t - w[0].t;
    std::vector<double> prefix(w.size(), 0.0);
    for (std::size_t i = 1; i < w.size(); ++i)
        prefix[i] = prefix[i - 1] +
                    0.5 * h * (w[i - 1].laplacian_energy + w[i].laplacian_energy);
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j < w.size(); ++j) {
            const double lhs = nu * (prefix[j] - prefix[i]);
            const double rhs =
                (w[j].t - w[i].t) * g_norm_sq / nu + w[i].grad_energy;
            const double slack = rhs > 0.0 ? (rhs - lhs) / rhs : -lhs;
            if (slack < rep.min_window_slack) {
                rep.min_window_slack = slack;
                rep.window_start = w[i].t;
                rep.window_end = w[j].t;
            }
        }
    }
    if (w.size() < 2) rep.min_window_slack = 0.0;
    return rep;
}

/// sup over samples 0 < t <= 1 of t ||u(t)||_{H1}^2 / (||u0||^2 + ||g||^2).
inline double smoothing_ratio(std::span<const DiagnosticsRecord> w,
                              double u0_norm_sq, double g_norm_sq) {
    double sup = -1.0;
    const double den = u0_norm_sq + g_norm_sq;
    for (const auto& r : w) {
        if (r.t <= 0.0 || r.t > 1.0) continue;
        const double h1 = r.energy + r.grad_energy;
        sup = std::max(sup, den > 0.0 ? r.t * h1 / den : 0.0);
    }
    if (sup < 0.0)
        throw std::invalid_argument("smoothing_ratio: no samples in (0, 1]");
    return sup;
}

struct AbsorbingReport {
    enum class Status { already_inside, entered, not_entered, degenerate };
    Status status = Status::not_entered;
    double entry_time = std::numeric_limits<double>::quiet_NaN();
    double predicted_bound = std::numeric_limits<double>::quiet_NaN();
};

/// First sample with ||u||^2 <= 2 ||g||^2 / alpha^2, against the entry-time
/// bound alpha^-1 log(alpha^2 ||u0||^2 / ||g||^2) implied by the decay part
/// of the dissipative estimate.
inline AbsorbingReport absorbing_entry_time(std::span<const DiagnosticsRecord> w,
                                            double alpha, double g_norm_sq) {
    if (w.empty()) throw std::invalid_argument("absorbing_entry_time: empty");
    AbsorbingReport rep;
    if (g_norm_sq == 0.0) {
        rep.status = w.front().energy == 0.0
                         ? AbsorbingReport::Status::already_inside
                         : AbsorbingReport::Status::degenerate;
        if (rep.status == AbsorbingReport::Status::already_inside)
            rep.entry_time = w.front().t;
        return rep;
    }
    const double threshold = 2.0 * g_norm_sq / (alpha * alpha);
    const double e0 = w.front().energy;
    if (e0 > g_norm_sq / (alpha * alpha))
        rep.predicted_bound =
            std::log(alpha * alpha * e0 / g_norm_sq) / alpha;
    else
        rep.predicted_bound = 0.0;
    if (e0 <= threshold) {
        rep.status = AbsorbingReport::Status::already_inside;
        rep.entry_time = w.front().t;
        return rep;
    }
    for (const auto& r : w) {
        if (r.energy <= threshold) {
            rep.status = AbsorbingReport::Status::entered;
            rep.entry_time = r.t - w.front().t;
            return rep;
        }
    }
    rep.status = AbsorbingReport::Status::not_entered;
    return rep;
}

}  // namespace dns2d
