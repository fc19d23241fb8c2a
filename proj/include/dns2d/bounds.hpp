#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dns2d/operators.hpp"

namespace dns2d {

// Closed-form attractor-dimension bounds over the homogeneous Sobolev scale
// s in [-1, 1], their scaling reduction to the nu = alpha = 1 frame, and the
// gradient majorant they rest on. All constant arithmetic runs in long
// double so the frozen rational values (3/256, 3/8, ...) come out exact in
// double.

namespace detail {
inline long double bound_coefficient_l(long double s) {
    const long double a = std::fabs(s);
    if (a > 1.0L)
        throw std::invalid_argument("dimension bound: |s| must be <= 1");
    const long double sqrt3 = std::sqrt(3.0L);
    if (a == 1.0L) return 4.0L / (64.0L * sqrt3);  // (1+s)^{1+s}(1-s)^{1-s} -> 4
    return (1.0L - s * s) * std::pow((1.0L + a) / (1.0L - a), a) /
           (64.0L * sqrt3);
}
}  // namespace detail

/// Coefficient (1-s^2)/(64 sqrt 3) * ((1+|s|)/(1-|s|))^{|s|} with the
/// closed-form endpoint value 1/(16 sqrt 3) at |s| = 1.
inline double dim_bound_coefficient(double s) {
    return static_cast<double>(detail::bound_coefficient_l(s));
}

/// Dimension bound for forcing measured in Hdot^s:
/// coefficient(s) * norm^2 / (alpha^{2+s} nu^{2-s}).
inline double dim_bound_s(double nu, double alpha, double s, double norm_s) {
    if (!(nu > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("dim_bound_s: nu and alpha must be positive");
    if (norm_s < 0.0)
        throw std::invalid_argument("dim_bound_s: norm must be nonnegative");
    const long double coef = detail::bound_coefficient_l(s);
    const long double nu_l = nu, al = alpha;
    const long double scale =
        1.0L / (al * al * nu_l * nu_l) * std::pow(nu_l / al, s);
    return static_cast<double>(coef * scale * static_cast<long double>(norm_s) *
                               norm_s);
}

/// Endpoint s = 1 bound: ||rot g||^2 / (16 sqrt 3 alpha^3 nu).
inline double dim_bound_rot(double nu, double alpha, double rot_norm) {
    if (!(nu > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("dim_bound_rot: nu and alpha must be positive");
    if (rot_norm < 0.0)
        throw std::invalid_argument("dim_bound_rot: norm must be nonnegative");
    const long double sqrt3 = std::sqrt(3.0L);
    return static_cast<double>(static_cast<long double>(rot_norm) * rot_norm /
                               (16.0L * sqrt3 * alpha * alpha * alpha * nu));
}

/// Periodic-box bound: min(sqrt6 ||rot g|| L / (nu alpha),
///                         (3/8) ||rot g||^2 / (nu alpha^3)).
inline double dim_bound_periodic(double nu, double alpha, double box_length,
                                 double rot_norm) {
    if (!(nu > 0.0) || !(alpha > 0.0) || !(box_length > 0.0))
        throw std::invalid_argument(
            "dim_bound_periodic: nu, alpha, L must be positive");
    if (rot_norm < 0.0)
        throw std::invalid_argument("dim_bound_periodic: norm must be nonnegative");
    const long double r = rot_norm;
    const long double first = std::sqrt(6.0L) * r * box_length / (nu * alpha);
    const long double second =
        (3.0L / 8.0L) * r * r / (nu * alpha * alpha * alpha);
    return static_cast<double>(first < second ? first : second);
}

/// Time-averaged gradient majorant in the nu = alpha = 1 frame:
/// (1-s^2)/4 * ((1+|s|)/(1-|s|))^{|s|} * norm^2 = 16 sqrt 3 * coefficient(s) * norm^2.
inline double grad_sq_majorant(double s, double norm) {
    const long double sqrt3 = std::sqrt(3.0L);
    return static_cast<double>(16.0L * sqrt3 * detail::bound_coefficient_l(s) *
                               static_cast<long double>(norm) * norm);
}

/// Dimension via the trace estimate: (1/(16 sqrt 3)) * avg ||grad u||^2,
/// with the average taken in the nu = alpha = 1 frame.
inline double dim_via_trace(double avg_grad_sq) {
    if (avg_grad_sq < 0.0)
        throw std::invalid_argument("dim_via_trace: average must be nonnegative");
    return static_cast<double>(static_cast<long double>(avg_grad_sq) /
                               (16.0L * std::sqrt(3.0L)));
}

/// Rescales the forcing to the frame where nu' = alpha' = 1:
/// box L' = sqrt(alpha/nu) L, coefficients scaled by alpha^{-3/2} nu^{-1/2}
/// on the same integer lattice, so that
/// ||g~||_{Hdot^s}^2 = (1/(alpha^2 nu^2)) (nu/alpha)^s ||g||_{Hdot^s}^2.
inline VectorField scaling_transform(double nu, double alpha,
                                     const VectorField& g) {
    if (!(nu > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("scaling_transform: nu, alpha must be positive");
    const double gamma = std::sqrt(alpha / nu);
    auto scaled_grid = Grid::make(g.grid().n(), gamma * g.grid().box_length());
    VectorField out(scaled_grid);
    const double c = 1.0 / (alpha * std::sqrt(alpha * nu));
    for (int comp = 0; comp < 2; ++comp)
        for (std::size_t i = 0; i < out.comp(comp).size(); ++i)
            out.comp(comp)[i] = c * g.comp(comp)[i];
    out.set_divergence_free(g.divergence_free());
    return out;
}

inline std::vector<double> default_s_grid() {
    std::vector<double> s(41);
    for (int i = 0; i < 41; ++i) s[i] = -1.0 + i * (2.0 / 40.0);
    s.front() = -1.0;
    s.back() = 1.0;
    return s;
}

struct BoundInputs {
    double nu = 1.0;
    double alpha = 1.0;
    const VectorField* forcing = nullptr;
    std::vector<double> s_grid = default_s_grid();
};

struct BoundEntry {
    double s = 0.0;
    double norm = 0.0;   // ||g||_{Hdot^s}
    double bound = 0.0;
};

struct BoundReport {
    std::vector<BoundEntry> per_s;
    double best_s = 0.0;
    double best_bound = 0.0;
    double periodic_min_bound = 0.0;
    double rot_endpoint_bound = 0.0;
    double grashof = 0.0;          // ||g|| L^2 / nu^2, metadata only
    double scaled_box_length = 0.0;
    double scaled_forcing_norm = 0.0;
};

/// Tabulates the bound over the s grid and reports the minimizer together
/// with the periodic-case and rot-endpoint values.
inline BoundReport best_bound_over_s(const BoundInputs& in) {
    if (in.s_grid.empty())
        throw std::invalid_argument("best_bound_over_s: empty s grid");
    if (in.forcing == nullptr)
        throw std::invalid_argument("best_bound_over_s: missing forcing");
    const VectorField& g = *in.forcing;
    BoundReport rep;
    rep.per_s.reserve(in.s_grid.size());
    for (double s : in.s_grid) {
        BoundEntry e;
        e.s = s;
        e.norm = sobolev_norm(g, s);
        e.bound = dim_bound_s(in.nu, in.alpha, s, e.norm);
        rep.per_s.push_back(e);
    }
    const BoundEntry* best = &rep.per_s.front();
    for (const auto& e : rep.per_s)
        if (e.bound < best->bound) best = &e;
    rep.best_s = best->s;
    rep.best_bound = best->bound;
    const double rot_norm = l2_norm(rot(g));
    rep.rot_endpoint_bound = dim_bound_rot(in.nu, in.alpha, rot_norm);
    rep.periodic_min_bound =
        dim_bound_periodic(in.nu, in.alpha, g.grid().box_length(), rot_norm);
    const double L = g.grid().box_length();
    rep.grashof = l2_norm(g) * L * L / (in.nu * in.nu);
    VectorField scaled = scaling_transform(in.nu, in.alpha, g);
    rep.scaled_box_length = scaled.grid().box_length();
    rep.scaled_forcing_norm = l2_norm(scaled);
    return rep;
}

}  // namespace dns2d
