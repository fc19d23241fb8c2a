#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dns2d/simulation.hpp"

namespace dns2d {

/// Generator of the equation of variations around base state u:
///   L v = -P((v,grad)u + (u,grad)v) - alpha v + nu lap v.
inline VectorField tangent_rhs(const VectorField& v, const VectorField& u,
                               double nu, double alpha) {
    AdvectionContext ctx = make_advection_context(u);
    VectorField out = leray_project(tangent_advection(ctx, v));
    out *= -1.0;
    const Grid& g = v.grid();
    const int n = g.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double lam = -(alpha + nu * g.k_squared(i, j));
            const std::size_t id = g.index(i, j);
            for (int c = 0; c < 2; ++c) out.comp(c)[id] += lam * v.comp(c)[id];
        }
    out.set_divergence_free(true);
    return out;
}

/// (L v_j, v_j) for every member against base u. Because the members are
/// divergence-free the Leray projection drops out of the quadratic form,
/// leaving -alpha||v||^2 - nu||grad v||^2 - (adv, v).
inline std::vector<double> tangent_quadratic_forms(
    const VectorField& u, const std::vector<VectorField>& family, double nu,
    double alpha) {
    AdvectionContext ctx = make_advection_context(u);
    std::vector<double> out;
    out.reserve(family.size());
    for (const auto& v : family) {
        const double q = -alpha * l2_norm_sq(v) - nu * grad_norm_sq(v) -
                         l2_inner(tangent_advection(ctx, v), v);
        out.push_back(q);
    }
    return out;
}

/// m orthonormal tangent fields with accumulated log stretch factors.
struct TangentBundle {
    std::vector<VectorField> tangents;
    std::vector<double> log_sums;
    double t_accumulated = 0.0;
    double reorth_interval = 0.05;
};

/// Random mean-free divergence-free orthonormal family, deterministic in
/// the seed; band-limits every member to |m_j| <= band.
inline std::vector<VectorField> random_divfree_family(GridPtr grid, int m,
                                                      std::uint64_t seed,
                                                      int band) {
    const int dim = (2 * band + 1) * (2 * band + 1) - 1;
    if (m > dim)
        throw std::invalid_argument(
            "random family: m exceeds the band-limited divergence-free dimension");
    std::mt19937_64 rng(seed);
    std::vector<VectorField> fam;
    fam.reserve(m);
    for (int j = 0; j < m; ++j) {
        VectorField v(grid);
        ScalarField a(grid), b(grid);
        fill_random_band(a, band, rng);
        fill_random_band(b, band, rng);
        v.comp(0) = std::move(a.coeff());
        v.comp(1) = std::move(b.coeff());
        v = leray_project(v);
        v.comp(0)[0] = Complex{};
        v.comp(1)[0] = Complex{};
        fam.push_back(std::move(v));
    }
    orthonormalize(fam);
    return fam;
}

inline TangentBundle make_tangent_bundle(GridPtr grid, int m,
                                         std::uint64_t seed, int band,
                                         double reorth_interval) {
    TangentBundle b;
    b.tangents = random_divfree_family(std::move(grid), m, seed, band);
    b.log_sums.assign(m, 0.0);
    b.reorth_interval = reorth_interval;
    return b;
}

struct ReorthEvent {
    double t = 0.0;                     // trajectory time
    double t_accumulated = 0.0;         // bundle averaging time
    const std::vector<double>* log_stretch = nullptr;
    const std::vector<double>* log_sums = nullptr;
    const std::vector<VectorField>* tangents = nullptr;  // orthonormal again
    const VectorField* base_u = nullptr;
};

/// Benettin QR evolution: advances base and bundle jointly for `duration`,
/// reorthonormalizes every bundle.reorth_interval and accumulates the log
/// stretch factors. Ends on a reorthonormalization so the accumulators
/// account for the whole window.
inline void evolve_bundle(Stepper& stepper, TrajectoryState& state,
                          TangentBundle& bundle, double duration,
                          const std::function<void(const ReorthEvent&)>& observer = {}) {
    const double dt = stepper.dt();
    const std::int64_t steps = std::llround(duration / dt);
    const std::int64_t reorth_every =
        std::max<std::int64_t>(1, std::llround(bundle.reorth_interval / dt));
    std::vector<double> stretch;
    for (std::int64_t s = 1; s <= steps; ++s) {
        stepper.advance(state, bundle.tangents);
        bundle.t_accumulated += dt;
        if (s % reorth_every == 0 || s == steps) {
            stretch = orthonormalize(bundle.tangents);
            for (std::size_t j = 0; j < stretch.size(); ++j)
                bundle.log_sums[j] += std::log(stretch[j]);
            if (observer) {
                ReorthEvent ev;
                ev.t = state.t;
                ev.t_accumulated = bundle.t_accumulated;
                ev.log_stretch = &stretch;
                ev.log_sums = &bundle.log_sums;
                ev.tangents = &bundle.tangents;
                ev.base_u = &state.u;
                observer(ev);
            }
        }
    }
}

struct LyapunovReport {
    int m = 0;
    std::vector<double> exponents;      // sorted nonincreasing, 1/time
    std::vector<double> partial_sums;   // partial_sums[j] = sum_{i<=j}
    double kaplan_yorke = 0.0;
    bool ky_defined = true;             // false: no sign change, increase m
    bool converged = false;
    double trend = std::numeric_limits<double>::quiet_NaN();
};

/// Piecewise-linear interpolation of the partial sums at real order
/// m_real in [1, m].
inline double q_proxy(const LyapunovReport& rep, double m_real) {
    if (m_real < 1.0 || m_real > rep.m)
        throw std::invalid_argument("q_proxy: m_real outside [1, m]");
    const int j = std::clamp(static_cast<int>(std::floor(m_real)), 1,
                             std::max(1, rep.m - 1));
    const double frac = m_real - j;
    const double pj = rep.partial_sums[j - 1];
    if (frac == 0.0) return pj;
    return pj + frac * (rep.partial_sums[j] - pj);
}

/// Interpolated zero crossing of the partial sums: 0 when the leading
/// exponent is already nonpositive, j* + p(j*)/|lambda_{j*+1}| at the last
/// positive partial sum otherwise. Undefined (ky_defined = false) when the
/// sums never cross zero within the bundle.
inline void fill_kaplan_yorke(LyapunovReport& rep) {
    rep.ky_defined = true;
    if (rep.partial_sums.empty()) {
        rep.kaplan_yorke = 0.0;
        return;
    }
    if (rep.partial_sums[0] <= 0.0) {
        rep.kaplan_yorke = 0.0;
        return;
    }
    int jstar = 0;  // 0-based index of last positive partial sum
    for (int j = 0; j < rep.m; ++j)
        if (rep.partial_sums[j] > 0.0) jstar = j;
    if (jstar == rep.m - 1) {
        rep.ky_defined = false;  // still positive at the end: increase m
        rep.kaplan_yorke = static_cast<double>(rep.m);
        return;
    }
    rep.kaplan_yorke = (jstar + 1) +
                       rep.partial_sums[jstar] / std::abs(rep.exponents[jstar + 1]);
}

inline LyapunovReport finalize_lyapunov(const TangentBundle& bundle,
                                        std::optional<std::pair<double, std::vector<double>>>
                                            halfway = std::nullopt,
                                        double trend_tolerance = 5e-2) {
    LyapunovReport rep;
    rep.m = static_cast<int>(bundle.tangents.size());
    rep.exponents.resize(rep.m);
    for (int j = 0; j < rep.m; ++j)
        rep.exponents[j] = bundle.log_sums[j] / bundle.t_accumulated;
    std::sort(rep.exponents.begin(), rep.exponents.end(), std::greater<>());
    rep.partial_sums.resize(rep.m);
    double acc = 0.0;
    for (int j = 0; j < rep.m; ++j) {
        acc += rep.exponents[j];
        rep.partial_sums[j] = acc;
    }
    fill_kaplan_yorke(rep);
    if (halfway && halfway->first > 0.0) {
        std::vector<double> half = halfway->second;
        std::sort(half.begin(), half.end(), std::greater<>());
        double scale = 0.0;
        for (double e : rep.exponents) scale = std::max(scale, std::abs(e));
        double worst = 0.0;
        for (int j = 0; j < rep.m; ++j)
            worst = std::max(worst,
                             std::abs(half[j] / halfway->first - rep.exponents[j]));
        rep.trend = scale > 0.0 ? worst / scale : 0.0;
        rep.converged = rep.trend <= trend_tolerance;
    }
    return rep;
}

/// Accumulates, per reorthonormalization instant, the trace forms
/// sum_{j<=m}(L v_j, v_j), ||grad u||^2, and the instantaneous slack of
///   sum_j (L v_j, v_j) <= -m + (1/(16 sqrt 3)) ||grad u||^2
/// (valid as a bound in the nu = alpha = 1 frame).
class TraceCheck {
  public:
    TraceCheck(double nu, double alpha) : nu_(nu), alpha_(alpha) {}

    void observe(const ReorthEvent& ev) {
        const auto forms =
            tangent_quadratic_forms(*ev.base_u, *ev.tangents, nu_, alpha_);
        const double grad_sq = grad_norm_sq(*ev.base_u);
        grad_samples_.push_back(grad_sq);
        if (trace_partial_mean_.empty()) trace_partial_mean_.assign(forms.size(), 0.0);
        double acc = 0.0;
        const double c = trace_coefficient();
        for (std::size_t j = 0; j < forms.size(); ++j) {
            acc += forms[j];
            trace_partial_mean_[j] += acc;
            const double slack = (-(static_cast<double>(j) + 1.0) + c * grad_sq) - acc;
            if (slack < min_slack_) {
                min_slack_ = slack;
                t_at_min_ = ev.t;
                m_at_min_ = static_cast<int>(j) + 1;
            }
        }
        ++events_;
    }

    static double trace_coefficient() { return 1.0 / (16.0 * std::sqrt(3.0)); }

    struct Result {
        double min_instant_slack = std::numeric_limits<double>::infinity();
        double t_at_min = 0.0;
        int m_at_min = 0;
        std::vector<double> avg_trace_partial;  // mean over instants
        double avg_grad_sq = 0.0;
        long events = 0;
    };

    Result finalize() const {
        Result r;
        r.min_instant_slack = min_slack_;
        r.t_at_min = t_at_min_;
        r.m_at_min = m_at_min_;
        r.events = events_;
        if (events_ > 0) {
            r.avg_trace_partial = trace_partial_mean_;
            for (auto& v : r.avg_trace_partial) v /= events_;
            double s = 0.0;
            for (double v : grad_samples_) s += v;
            r.avg_grad_sq = s / events_;
        }
        return r;
    }

  private:
    double nu_, alpha_;
    std::vector<double> trace_partial_mean_;
    std::vector<double> grad_samples_;
    double min_slack_ = std::numeric_limits<double>::infinity();
    double t_at_min_ = 0.0;
    int m_at_min_ = 0;
    long events_ = 0;
};

struct QuasiDiffReport {
    std::vector<double> eps;
    std::vector<double> remainder;  // ||S(t)(u0+eps xi) - S(t)u0 - eps v(t)||
    double fitted_order = 0.0;
    int usable_points = 0;
};

/// Remainder order of the quasi-differential: v solves the equation of
/// variations with v(0) = xi along the base trajectory; the remainder of
/// the first-order expansion is fitted against the epsilon ladder.
inline QuasiDiffReport quasi_differential_check(const SimConfig& cfg,
                                                const VectorField& u0,
                                                const VectorField& xi,
                                                double horizon,
                                                const std::vector<double>& ladder) {
    const double floor_eps = 1e-10 * l2_norm(u0);
    for (double e : ladder)
        if (e < floor_eps)
            throw std::invalid_argument(
                "quasi_differential_check: epsilon below the rounding floor");

    SimConfig base_cfg = cfg;
    base_cfg.t_end = horizon;
    auto grid = base_cfg.make_grid();
    VectorField g = base_cfg.build_forcing(grid);

    TrajectoryState st;
    st.u = u0;
    Stepper stepper(grid, cfg.nu, cfg.alpha, cfg.dt, cfg.integrator, g);
    std::vector<VectorField> tangents{xi};
    const std::int64_t steps = std::llround(horizon / cfg.dt);
    for (std::int64_t s = 0; s < steps; ++s) stepper.advance(st, tangents);
    const VectorField& base_T = st.u;
    const VectorField& v_T = tangents[0];

    QuasiDiffReport rep;
    for (double e : ladder) {
        TrajectoryState ps;
        ps.u = u0;
        ps.u.axpy(e, xi);
        Stepper pstep(grid, cfg.nu, cfg.alpha, cfg.dt, cfg.integrator, g);
        for (std::int64_t s = 0; s < steps; ++s) pstep.advance(ps);
        VectorField rem = ps.u;
        rem -= base_T;
        rem.axpy(-e, v_T);
        rep.eps.push_back(e);
        rep.remainder.push_back(l2_norm(rem));
    }
    // least-squares slope of log remainder vs log eps over nonzero points
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < rep.eps.size(); ++i) {
        if (!(rep.remainder[i] > 0.0)) continue;
        const double x = std::log(rep.eps[i]);
        const double y = std::log(rep.remainder[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    rep.usable_points = n;
    if (n >= 2 && sxx * n - sx * sx > 0.0)
        rep.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    else
        rep.fitted_order = std::numeric_limits<double>::infinity();
    return rep;
}

struct LyapunovJobResult {
    LyapunovReport report;
    TraceCheck::Result trace;
    double avg_grad_sq = 0.0;   // trapezoid average over the window
    double burned_in_t = 0.0;
    std::vector<std::pair<double, std::vector<double>>> running;  // t, exponents
};

/// Full Lyapunov job: burn-in on the base trajectory, then Benettin QR over
/// the averaging window with running-average rows per instant.
inline LyapunovJobResult run_lyapunov_job(const SimConfig& cfg,
                                          const LyapunovParams& p) {
    auto grid = cfg.make_grid();
    VectorField g = cfg.build_forcing(grid);
    TrajectoryState st;
    st.u = leray_project(cfg.build_initial(grid));
    st.u.comp(0)[0] = Complex{};
    st.u.comp(1)[0] = Complex{};
    Stepper stepper(grid, cfg.nu, cfg.alpha, cfg.dt, cfg.integrator, g);

    const std::int64_t burn_steps = std::llround(p.burn_in / cfg.dt);
    for (std::int64_t s = 0; s < burn_steps; ++s) stepper.advance(st);

    LyapunovJobResult out;
    out.burned_in_t = st.t;
    TangentBundle bundle = make_tangent_bundle(grid, p.m, p.tangent_seed,
                                               p.tangent_band, p.reorth_interval);
    TraceCheck trace(cfg.nu, cfg.alpha);
    std::optional<std::pair<double, std::vector<double>>> halfway;
    std::vector<double> grad_series;
    evolve_bundle(stepper, st, bundle, p.averaging_time,
                  [&](const ReorthEvent& ev) {
                      trace.observe(ev);
                      grad_series.push_back(grad_norm_sq(*ev.base_u));
                      std::vector<double> running(ev.log_sums->size());
                      for (std::size_t j = 0; j < running.size(); ++j)
                          running[j] = (*ev.log_sums)[j] / ev.t_accumulated;
                      std::sort(running.begin(), running.end(), std::greater<>());
                      out.running.emplace_back(ev.t, running);
                      if (!halfway && ev.t_accumulated >= 0.5 * p.averaging_time)
                          halfway = std::make_pair(ev.t_accumulated, *ev.log_sums);
                  });
    out.report = finalize_lyapunov(bundle, halfway);
    out.trace = trace.finalize();
    out.avg_grad_sq = out.trace.avg_grad_sq;
    if (grad_series.size() >= 2) {
        // trapezoid average over the evenly spaced instants
        double s = 0.5 * (grad_series.front() + grad_series.back());
        for (std::size_t i = 1; i + 1 < grad_series.size(); ++i)
            s += grad_series[i];
        out.avg_grad_sq = s / (static_cast<double>(grad_series.size()) - 1.0);
    }
    return out;
}

}  // namespace dns2d
