#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dns2d/bounds.hpp"
#include "dns2d/config.hpp"
#include "dns2d/inequalities.hpp"
#include "dns2d/simulation.hpp"
#include "dns2d/tangent.hpp"
#include "dns2d/version.hpp"

namespace dns2d {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline constexpr const char* kDiagnosticsHeader =
    "t,energy,grad_energy,laplacian_energy,forcing_power,"
    "strong_forcing_power,energy_residual,strong_energy_residual";

inline std::string diagnostics_row(const DiagnosticsRecord& r) {
    std::ostringstream os;
    os << format_double(r.t) << ',' << format_double(r.energy) << ','
       << format_double(r.grad_energy) << ','
       << format_double(r.laplacian_energy) << ','
       << format_double(r.forcing_power) << ','
       << format_double(r.strong_forcing_power) << ','
       << format_double(r.energy_residual) << ','
       << format_double(r.strong_energy_residual);
    return os.str();
}

/// Rescales a run to the nu' = alpha' = 1 frame: t' = alpha t,
/// L' = sqrt(alpha/nu) L, u~ = (alpha nu)^{-1/2} u,
/// g~ = alpha^{-1} (alpha nu)^{-1/2} g.
inline SimConfig scaled_sim_config(const SimConfig& cfg) {
    SimConfig out = cfg;
    auto grid = cfg.make_grid();
    VectorField g = cfg.build_forcing(grid);
    VectorField scaled_g = scaling_transform(cfg.nu, cfg.alpha, g);
    auto scaled_grid = scaled_g.grid_ptr();
    VectorField u0 = leray_project(cfg.build_initial(grid));
    VectorField scaled_u0(scaled_grid);
    const double cu = 1.0 / std::sqrt(cfg.alpha * cfg.nu);
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < u0.comp(c).size(); ++i)
            scaled_u0.comp(c)[i] = cu * u0.comp(c)[i];
    scaled_u0.set_divergence_free(true);
    out.nu = 1.0;
    out.alpha = 1.0;
    out.box_length = scaled_grid->box_length();
    out.dt = cfg.alpha * cfg.dt;
    out.t_end = cfg.alpha * cfg.t_end;
    out.sample_interval = cfg.alpha * cfg.sample_interval;
    out.checkpoint_interval = cfg.alpha * cfg.checkpoint_interval;
    out.forcing_override = std::make_shared<VectorField>(std::move(scaled_g));
    out.initial_override = std::make_shared<VectorField>(std::move(scaled_u0));
    return out;
}

inline LyapunovParams scaled_lyapunov_params(const LyapunovParams& p,
                                             double alpha) {
    LyapunovParams out = p;
    out.reorth_interval = alpha * p.reorth_interval;
    out.burn_in = alpha * p.burn_in;
    out.averaging_time = alpha * p.averaging_time;
    return out;
}

struct AnalysisSet {
    bool diagnostics = false;
    bool lyapunov = false;
    bool bounds = false;
    bool inequalities = false;
    bool any() const { return diagnostics || lyapunov || bounds || inequalities; }
};

struct RunSpec {
    std::string label;
    SimConfig sim;
    std::optional<LyapunovParams> lyapunov;
    AnalysisSet analyses;
    long ineq_trials = 200;
    int ineq_grid = 64;
};

struct ExperimentPlan {
    std::string output_dir;
    int max_parallel = 1;
    std::vector<RunSpec> runs;
};

struct RunManifest {
    std::string label;
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::string started_at, finished_at;
    std::vector<std::string> artifacts;
    std::string status = "ok";  // or "failed: <reason>"
};

/// One summary row; absent quantities stay NaN.
struct SummaryRow {
    std::string label;
    double nu = 0, alpha = 0;
    int grid_n = 0;
    double box_length = 0;
    double best_s = std::nan(""), best_bound = std::nan(""), periodic_bound = std::nan(""),
           rot_bound = std::nan(""), grashof = std::nan("");
    double kaplan_yorke = std::nan("");
    int ky_defined = 1;
    double lambda_max_scaled = std::nan(""), avg_grad_sq_scaled = std::nan("");
    double trace_min_slack = std::nan("");
    double diss_pointwise_slack = std::nan(""), diss_window_slack = std::nan("");
    double strong_pointwise_slack = std::nan(""), strong_window_slack = std::nan("");
    double absorbing_entry = std::nan(""), absorbing_bound = std::nan("");
    double max_energy_residual = std::nan(""), max_strong_residual = std::nan("");
    double lt_max_ratio = std::nan(""), pointwise_min_slack = std::nan("");
    double orthogonality_max_residual = std::nan("");
    std::string status = "ok";
};

inline constexpr const char* kSummaryHeader =
    "label,nu,alpha,grid_n,box_length,best_s,best_bound,periodic_bound,"
    "rot_bound,grashof,kaplan_yorke,ky_defined,lambda_max_scaled,"
    "avg_grad_sq_scaled,trace_min_slack,diss_pointwise_slack,"
    "diss_window_slack,strong_pointwise_slack,strong_window_slack,"
    "absorbing_entry,absorbing_bound,max_energy_residual,"
    "max_strong_residual,lt_max_ratio,pointwise_min_slack,"
    "orthogonality_max_residual,status";

inline std::string summary_row_csv(const SummaryRow& r) {
    std::ostringstream os;
    os << r.label << ',' << format_double(r.nu) << ',' << format_double(r.alpha)
       << ',' << r.grid_n << ',' << format_double(r.box_length) << ','
       << format_double(r.best_s) << ',' << format_double(r.best_bound) << ','
       << format_double(r.periodic_bound) << ',' << format_double(r.rot_bound)
       << ',' << format_double(r.grashof) << ','
       << format_double(r.kaplan_yorke) << ',' << r.ky_defined << ','
       << format_double(r.lambda_max_scaled) << ','
       << format_double(r.avg_grad_sq_scaled) << ','
       << format_double(r.trace_min_slack) << ','
       << format_double(r.diss_pointwise_slack) << ','
       << format_double(r.diss_window_slack) << ','
       << format_double(r.strong_pointwise_slack) << ','
       << format_double(r.strong_window_slack) << ','
       << format_double(r.absorbing_entry) << ','
       << format_double(r.absorbing_bound) << ','
       << format_double(r.max_energy_residual) << ','
       << format_double(r.max_strong_residual) << ','
       << format_double(r.lt_max_ratio) << ','
       << format_double(r.pointwise_min_slack) << ','
       << format_double(r.orthogonality_max_residual) << ',' << r.status;
    return os.str();
}

namespace detail {

inline std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

inline AnalysisSet parse_analyses(const nlohmann::json& arr) {
    AnalysisSet set;
    for (const auto& a : arr) {
        const std::string s = a.get<std::string>();
        if (s == "diagnostics") set.diagnostics = true;
        else if (s == "lyapunov") set.lyapunov = true;
        else if (s == "bounds") set.bounds = true;
        else if (s == "inequalities") set.inequalities = true;
        else throw ConfigError("unknown analysis: " + s);
    }
    if (!set.any()) throw ConfigError("analysis set must be nonempty");
    return set;
}

inline void validate_label(const std::string& label) {
    if (label.empty()) throw ConfigError("run label must be nonempty");
    for (char c : label)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
              c == '-' || c == '.'))
            throw ConfigError("run label has unsupported character: " + label);
}

}  // namespace detail

inline ExperimentPlan parse_plan(const nlohmann::json& j) {
    ExperimentPlan plan;
    plan.output_dir = detail::get_field<std::string>(j, "output_dir", "out");
    plan.max_parallel = detail::get_field<int>(j, "max_parallel", 1);
    if (plan.max_parallel < 1)
        throw ConfigError("plan key 'max_parallel' must be >= 1");
    std::set<std::string> labels;
    auto add_run = [&](RunSpec spec) {
        detail::validate_label(spec.label);
        if (!labels.insert(spec.label).second)
            throw ConfigError("duplicate run label: " + spec.label);
        plan.runs.push_back(std::move(spec));
    };
    if (j.contains("runs")) {
        for (const auto& rj : j.at("runs")) {
            RunSpec spec;
            spec.label = detail::require_field<std::string>(rj, "label");
            spec.sim = parse_sim_config(rj.at("config"));
            spec.analyses = detail::parse_analyses(
                rj.value("analyses", nlohmann::json::array({"diagnostics"})));
            if (rj.contains("lyapunov"))
                spec.lyapunov = parse_lyapunov_params(rj.at("lyapunov"));
            if (spec.analyses.lyapunov && !spec.lyapunov)
                throw ConfigError("run '" + spec.label +
                                  "' requests lyapunov analysis without lyapunov params");
            spec.ineq_trials = detail::get_field<long>(rj, "ineq_trials", 200);
            spec.ineq_grid = detail::get_field<int>(rj, "ineq_grid", 64);
            add_run(std::move(spec));
        }
    }
    if (j.contains("sweep")) {
        const auto& sj = j.at("sweep");
        SimConfig base = parse_sim_config(sj.at("base"));
        AnalysisSet analyses = detail::parse_analyses(
            sj.value("analyses", nlohmann::json::array({"diagnostics", "bounds"})));
        std::optional<LyapunovParams> lyap;
        if (sj.contains("lyapunov"))
            lyap = parse_lyapunov_params(sj.at("lyapunov"));
        if (analyses.lyapunov && !lyap)
            throw ConfigError("sweep requests lyapunov analysis without lyapunov params");
        std::vector<double> nus{base.nu}, alphas{base.alpha};
        if (sj.contains("nu")) nus = sj.at("nu").get<std::vector<double>>();
        if (sj.contains("alpha"))
            alphas = sj.at("alpha").get<std::vector<double>>();
        const std::string prefix =
            detail::get_field<std::string>(sj, "label_prefix", "sweep");
        for (std::size_t i = 0; i < nus.size(); ++i) {
            for (std::size_t k = 0; k < alphas.size(); ++k) {
                RunSpec spec;
                spec.sim = base;
                spec.sim.nu = nus[i];
                spec.sim.alpha = alphas[k];
                std::ostringstream lbl;
                lbl << prefix << "_nu" << i << "_al" << k;
                spec.label = lbl.str();
                spec.analyses = analyses;
                spec.lyapunov = lyap;
                spec.ineq_trials = detail::get_field<long>(sj, "ineq_trials", 200);
                spec.ineq_grid = detail::get_field<int>(sj, "ineq_grid", 64);
                add_run(std::move(spec));
            }
        }
    }
    return plan;
}

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    return {{"label", m.label},
            {"config_hash", m.config_hash},
            {"tool_version", m.tool_version},
            {"started_at", m.started_at},
            {"finished_at", m.finished_at},
            {"artifacts", m.artifacts},
            {"status", m.status}};
}

inline nlohmann::json lyapunov_report_to_json(const LyapunovReport& rep,
                                              double alpha_for_physical) {
    nlohmann::json j;
    j["m"] = rep.m;
    j["exponents_scaled"] = rep.exponents;
    std::vector<double> phys(rep.exponents);
    for (auto& e : phys) e *= alpha_for_physical;
    j["exponents_physical"] = phys;
    j["partial_sums_scaled"] = rep.partial_sums;
    j["kaplan_yorke"] = rep.kaplan_yorke;
    j["ky_defined"] = rep.ky_defined;
    j["converged"] = rep.converged;
    j["trend"] = rep.trend;
    return j;
}

inline nlohmann::json trial_report_to_json(const IneqTrialReport& r) {
    return {{"name", r.name},
            {"trials", r.trials},
            {"min_slack", r.min_slack},
            {"empirical_constant", r.empirical_constant},
            {"worst_case_seed", r.worst_case_seed}};
}

/// Executes one run's analysis set into out_dir/<label>/; never throws
/// (failures land in the manifest status).
inline RunManifest execute_run(const RunSpec& spec, const std::string& out_root,
                               SummaryRow& row) {
    RunManifest man;
    man.label = spec.label;
    man.started_at = detail::iso_now();
    const std::string dir = out_root + "/" + spec.label;
    row.label = spec.label;
    row.nu = spec.sim.nu;
    row.alpha = spec.sim.alpha;
    row.grid_n = spec.sim.grid_n;
    row.box_length = spec.sim.box_length;
    try {
        std::filesystem::create_directories(dir);
        nlohmann::json cfg_json = sim_config_to_json(spec.sim);
        man.config_hash = config_hash(cfg_json);
        detail::write_text(dir + "/config.json", cfg_json.dump(2) + "\n");
        man.artifacts.push_back("config.json");

        auto grid = spec.sim.make_grid();
        VectorField g = spec.sim.build_forcing(grid);
        const double g_norm_sq = l2_norm_sq(g);

        if (spec.analyses.diagnostics) {
            Simulation sim(spec.sim);
            std::ofstream csv(dir + "/diagnostics.csv");
            csv << kDiagnosticsHeader << "\n";
            std::vector<DiagnosticsRecord> records;
            auto records_out = sim.run(
                [&](const DiagnosticsRecord& r) {
                    records.push_back(r);
                    csv << diagnostics_row(r) << "\n";
                },
                [&](const TrajectoryState& st,
                    const std::vector<DiagnosticsRecord>& recent) {
                    Checkpoint meta;
                    meta.t = st.t;
                    meta.step = st.step;
                    meta.config_hash = man.config_hash;
                    meta.recent = recent;
                    write_checkpoint(dir + "/checkpoint", st.u, meta);
                });
            csv.close();
            man.artifacts.push_back("diagnostics.csv");
            {
                Checkpoint meta;
                meta.t = sim.state().t;
                meta.step = sim.state().step;
                meta.config_hash = man.config_hash;
                meta.recent = sim.recent_samples();
                write_checkpoint(dir + "/checkpoint", sim.state().u, meta);
                man.artifacts.push_back("checkpoint/state.fld");
                man.artifacts.push_back("checkpoint/meta.json");
            }
            const auto diss =
                check_dissipative_estimate(records, spec.sim.nu, spec.sim.alpha,
                                           g_norm_sq);
            const auto strong =
                check_strong_estimates(records, spec.sim.nu, spec.sim.alpha,
                                       g_norm_sq);
            const auto absorb =
                absorbing_entry_time(records, spec.sim.alpha, g_norm_sq);
            row.diss_pointwise_slack = diss.min_pointwise_slack;
            row.diss_window_slack = diss.min_window_slack;
            row.strong_pointwise_slack = strong.min_pointwise_slack;
            row.strong_window_slack = strong.min_window_slack;
            if (absorb.status == AbsorbingReport::Status::entered ||
                absorb.status == AbsorbingReport::Status::already_inside)
                row.absorbing_entry = absorb.entry_time;
            row.absorbing_bound = absorb.predicted_bound;
            double max_res = 0.0, max_sres = 0.0;
            for (const auto& r : records) {
                max_res = std::max(max_res, r.energy_residual);
                max_sres = std::max(max_sres, r.strong_energy_residual);
            }
            row.max_energy_residual = max_res;
            row.max_strong_residual = max_sres;
            nlohmann::json dj;
            dj["dissipative"] = {{"min_pointwise_slack", diss.min_pointwise_slack},
                                 {"t_at_min", diss.t_at_min_pointwise},
                                 {"min_window_slack", diss.min_window_slack}};
            dj["strong"] = {{"min_pointwise_slack", strong.min_pointwise_slack},
                            {"min_window_slack", strong.min_window_slack}};
            dj["absorbing"] = {
                {"status", static_cast<int>(absorb.status)},
                {"entry_time", absorb.entry_time},
                {"predicted_bound", absorb.predicted_bound}};
            dj["max_energy_residual"] = max_res;
            dj["max_strong_residual"] = max_sres;
            detail::write_text(dir + "/diagnostics.json", dj.dump(2) + "\n");
            man.artifacts.push_back("diagnostics.json");
        }

        if (spec.analyses.lyapunov) {
            SimConfig scaled = scaled_sim_config(spec.sim);
            LyapunovParams lp =
                scaled_lyapunov_params(*spec.lyapunov, spec.sim.alpha);
            auto job = run_lyapunov_job(scaled, lp);
            std::ofstream csv(dir + "/exponents.csv");
            csv << "t_scaled";
            for (int j2 = 1; j2 <= job.report.m; ++j2) csv << ",lambda_" << j2;
            csv << "\n";
            for (const auto& [t, exps] : job.running) {
                csv << format_double(t);
                for (double e : exps) csv << ',' << format_double(e);
                csv << "\n";
            }
            csv.close();
            man.artifacts.push_back("exponents.csv");
            nlohmann::json lj = lyapunov_report_to_json(job.report, spec.sim.alpha);
            lj["frame"] = "scaled_nu1_alpha1";
            lj["avg_grad_sq_scaled"] = job.avg_grad_sq;
            lj["trace_min_instant_slack"] = job.trace.min_instant_slack;
            lj["trace_events"] = job.trace.events;
            lj["trace_avg_partial"] = job.trace.avg_trace_partial;
            lj["dim_via_trace"] = dim_via_trace(job.avg_grad_sq);
            detail::write_text(dir + "/lyapunov.json", lj.dump(2) + "\n");
            man.artifacts.push_back("lyapunov.json");
            row.kaplan_yorke = job.report.kaplan_yorke;
            row.ky_defined = job.report.ky_defined ? 1 : 0;
            row.lambda_max_scaled = job.report.exponents.front();
            row.avg_grad_sq_scaled = job.avg_grad_sq;
            row.trace_min_slack = job.trace.min_instant_slack;
        }

        if (spec.analyses.bounds) {
            BoundInputs bi;
            bi.nu = spec.sim.nu;
            bi.alpha = spec.sim.alpha;
            bi.forcing = &g;
            auto rep = best_bound_over_s(bi);
            std::ofstream csv(dir + "/bounds.csv");
            csv << "s,norm,bound\n";
            for (const auto& e : rep.per_s)
                csv << format_double(e.s) << ',' << format_double(e.norm) << ','
                    << format_double(e.bound) << "\n";
            csv.close();
            man.artifacts.push_back("bounds.csv");
            nlohmann::json bj;
            bj["best_s"] = rep.best_s;
            bj["best_bound"] = rep.best_bound;
            bj["periodic_min_bound"] = rep.periodic_min_bound;
            bj["rot_endpoint_bound"] = rep.rot_endpoint_bound;
            bj["grashof"] = rep.grashof;
            bj["scaled_box_length"] = rep.scaled_box_length;
            bj["scaled_forcing_norm"] = rep.scaled_forcing_norm;
            detail::write_text(dir + "/bounds.json", bj.dump(2) + "\n");
            man.artifacts.push_back("bounds.json");
            row.best_s = rep.best_s;
            row.best_bound = rep.best_bound;
            row.periodic_bound = rep.periodic_min_bound;
            row.rot_bound = rep.rot_endpoint_bound;
            row.grashof = rep.grashof;
        }

        if (spec.analyses.inequalities) {
            const std::uint64_t seed = spec.sim.seed + 17;
            std::vector<IneqTrialReport> reps;
            reps.push_back(run_pointwise_trials(
                std::max<long>(spec.ineq_trials * 100, 10000), seed));
            reps.push_back(run_lieb_thirring_trials(
                std::max<int>(static_cast<int>(spec.ineq_trials / 20), 5), 8,
                spec.ineq_grid, seed));
            reps.push_back(run_orthogonality_trials(
                static_cast<int>(spec.ineq_trials), spec.ineq_grid / 2, seed));
            reps.push_back(run_ladyzhenskaya_trials(
                static_cast<int>(spec.ineq_trials), spec.ineq_grid / 2, seed));
            reps.push_back(run_interpolation_trials(
                static_cast<int>(spec.ineq_trials), spec.ineq_grid / 2, seed));
            nlohmann::json ij = nlohmann::json::array();
            for (const auto& r : reps) ij.push_back(trial_report_to_json(r));
            detail::write_text(dir + "/inequalities.json", ij.dump(2) + "\n");
            man.artifacts.push_back("inequalities.json");
            row.lt_max_ratio = reps[1].empirical_constant;
            row.pointwise_min_slack = reps[0].min_slack;
            row.orthogonality_max_residual = reps[2].empirical_constant;
        }
    } catch (const std::exception& e) {
        man.status = std::string("failed: ") + e.what();
        row.status = man.status;
    }
    man.finished_at = detail::iso_now();
    try {
        detail::write_text(dir + "/manifest.json",
                           manifest_to_json(man).dump(2) + "\n");
    } catch (...) {
        // directory creation already failed; status carries the reason
    }
    return man;
}

/// Runs every entry of the plan on a bounded worker pool; failures stay
/// isolated per run. Summary rows keep plan order.
inline std::vector<RunManifest> run_plan(const ExperimentPlan& plan) {
    std::filesystem::create_directories(plan.output_dir);
    std::vector<RunManifest> manifests(plan.runs.size());
    std::vector<SummaryRow> rows(plan.runs.size());
    std::atomic<std::size_t> next{0};
    const int workers =
        std::max(1, std::min<int>(plan.max_parallel,
                                  static_cast<int>(plan.runs.size())));
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= plan.runs.size()) break;
            manifests[i] = execute_run(plan.runs[i], plan.output_dir, rows[i]);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::ofstream csv(plan.output_dir + "/summary.csv");
    csv << kSummaryHeader << "\n";
    for (const auto& r : rows) csv << summary_row_csv(r) << "\n";
    return manifests;
}

struct Verdict {
    std::string label;
    std::string check;
    bool pass = true;
    bool applicable = false;
    double slack = 0.0;
};

/// PASS/FAIL table for the theorem inequalities a summary row can witness.
inline std::vector<Verdict> compare_report(const std::vector<SummaryRow>& rows) {
    std::vector<Verdict> out;
    auto push = [&](const std::string& label, const std::string& check,
                    double slack, bool applicable) {
        Verdict v;
        v.label = label;
        v.check = check;
        v.applicable = applicable;
        v.slack = slack;
        v.pass = !applicable || slack >= 0.0;
        out.push_back(v);
    };
    for (const auto& r : rows) {
        const bool has_ky = !std::isnan(r.kaplan_yorke) && r.ky_defined == 1;
        const bool has_bound = !std::isnan(r.best_bound);
        push(r.label, "kaplan_yorke<=best_bound",
             has_ky && has_bound
                 ? r.best_bound - r.kaplan_yorke +
                       1e-9 * std::max(1.0, r.best_bound)
                 : 0.0,
             has_ky && has_bound);
        const bool has_avg = !std::isnan(r.avg_grad_sq_scaled);
        const double majorant = 16.0 * std::sqrt(3.0) * r.best_bound;
        push(r.label, "avg_grad_sq<=majorant",
             has_avg && has_bound
                 ? majorant - r.avg_grad_sq_scaled +
                       1e-9 * std::max(1.0, majorant)
                 : 0.0,
             has_avg && has_bound);
        push(r.label, "dissipative_pointwise",
             r.diss_pointwise_slack + 1e-9, !std::isnan(r.diss_pointwise_slack));
        push(r.label, "dissipative_window", r.diss_window_slack + 1e-9,
             !std::isnan(r.diss_window_slack));
        push(r.label, "strong_pointwise", r.strong_pointwise_slack + 1e-9,
             !std::isnan(r.strong_pointwise_slack));
        push(r.label, "strong_window", r.strong_window_slack + 1e-9,
             !std::isnan(r.strong_window_slack));
        push(r.label, "trace_instantaneous", r.trace_min_slack + 1e-10,
             !std::isnan(r.trace_min_slack));
        push(r.label, "lieb_thirring",
             lieb_thirring_constant() + 1e-10 - r.lt_max_ratio,
             !std::isnan(r.lt_max_ratio));
        push(r.label, "pointwise_traceless", r.pointwise_min_slack + 1e-12,
             !std::isnan(r.pointwise_min_slack));
    }
    return out;
}

/// Reads summary.csv back into rows (plumbing for the report subcommand).
inline std::vector<SummaryRow> read_summary_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open summary: " + path);
    std::string header;
    std::getline(is, header);
    if (header != kSummaryHeader)
        throw ConfigError("summary header mismatch in " + path);
    std::vector<SummaryRow> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 27)
            throw ConfigError("summary row has too few columns");
        SummaryRow r;
        int i = 0;
        r.label = cells[i++];
        r.nu = std::stod(cells[i++]);
        r.alpha = std::stod(cells[i++]);
        r.grid_n = std::stoi(cells[i++]);
        r.box_length = std::stod(cells[i++]);
        r.best_s = std::stod(cells[i++]);
        r.best_bound = std::stod(cells[i++]);
        r.periodic_bound = std::stod(cells[i++]);
        r.rot_bound = std::stod(cells[i++]);
        r.grashof = std::stod(cells[i++]);
        r.kaplan_yorke = std::stod(cells[i++]);
        r.ky_defined = std::stoi(cells[i++]);
        r.lambda_max_scaled = std::stod(cells[i++]);
        r.avg_grad_sq_scaled = std::stod(cells[i++]);
        r.trace_min_slack = std::stod(cells[i++]);
        r.diss_pointwise_slack = std::stod(cells[i++]);
        r.diss_window_slack = std::stod(cells[i++]);
        r.strong_pointwise_slack = std::stod(cells[i++]);
        r.strong_window_slack = std::stod(cells[i++]);
        r.absorbing_entry = std::stod(cells[i++]);
        r.absorbing_bound = std::stod(cells[i++]);
        r.max_energy_residual = std::stod(cells[i++]);
        r.max_strong_residual = std::stod(cells[i++]);
        r.lt_max_ratio = std::stod(cells[i++]);
        r.pointwise_min_slack = std::stod(cells[i++]);
        r.orthogonality_max_residual = std::stod(cells[i++]);
        r.status = cells[i++];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace dns2d
