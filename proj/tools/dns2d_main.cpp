// Command-line front end: simulate, lyapunov, bounds, verify-inequalities,
// sweep, report. Exit codes: 0 ok, 2 config error, 3 numerical failure,
// 4 failed assertion in report --strict.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dns2d/config.hpp"
#include "dns2d/plan.hpp"
#include "dns2d/simulation.hpp"
#include "dns2d/tangent.hpp"
#include "dns2d/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAssertion = 4;

int default_threads() {
    if (const char* env = std::getenv("DNS2D_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::string& resume) {
    const auto doc = dns2d::load_config_document(config_path);
    dns2d::SimConfig cfg = dns2d::parse_sim_config(doc);
    const auto canonical = dns2d::sim_config_to_json(cfg);
    const std::string hash = dns2d::config_hash(canonical);
    std::filesystem::create_directories(out_dir);
    dns2d::detail::write_text(out_dir + "/config.json", canonical.dump(2) + "\n");

    std::unique_ptr<dns2d::Simulation> sim;
    bool resumed = false;
    if (!resume.empty()) {
        auto [u, meta] = dns2d::read_checkpoint(resume);
        if (!meta.config_hash.empty() && meta.config_hash != hash)
            throw dns2d::ConfigError("checkpoint config hash does not match: " +
                                     resume);
        sim = std::make_unique<dns2d::Simulation>(cfg, std::move(u), meta.t,
                                                  meta.step, meta.recent);
        resumed = true;
    } else {
        sim = std::make_unique<dns2d::Simulation>(cfg);
    }

    std::ofstream csv(out_dir + "/diagnostics.csv",
                      resumed ? std::ios::app : std::ios::out);
    if (!resumed) csv << dns2d::kDiagnosticsHeader << "\n";
    auto records = sim->run(
        [&](const dns2d::DiagnosticsRecord& r) {
            csv << dns2d::diagnostics_row(r) << "\n";
        },
        [&](const dns2d::TrajectoryState& st,
            const std::vector<dns2d::DiagnosticsRecord>& recent) {
            dns2d::Checkpoint meta;
            meta.t = st.t;
            meta.step = st.step;
            meta.config_hash = hash;
            meta.recent = recent;
            dns2d::write_checkpoint(out_dir + "/checkpoint", st.u, meta);
        });
    csv.close();
    dns2d::Checkpoint meta;
    meta.t = sim->state().t;
    meta.step = sim->state().step;
    meta.config_hash = hash;
    meta.recent = sim->recent_samples();
    dns2d::write_checkpoint(out_dir + "/checkpoint", sim->state().u, meta);
    std::cout << "simulate: " << records.size() << " samples, final t = "
              << sim->state().t << ", ||u||^2 = "
              << dns2d::l2_norm_sq(sim->state().u) << "\n";
    return kExitOk;
}

int cmd_lyapunov(const std::string& config_path, const std::string& out_dir,
                 bool rescale) {
    const auto doc = dns2d::load_config_document(config_path);
    dns2d::SimConfig cfg = dns2d::parse_sim_config(doc);
    if (!doc.contains("lyapunov"))
        throw dns2d::ConfigError("config key 'lyapunov' is missing");
    dns2d::LyapunovParams lp = dns2d::parse_lyapunov_params(doc.at("lyapunov"));
    const double alpha = cfg.alpha;
    if (rescale) {
        lp = dns2d::scaled_lyapunov_params(lp, cfg.alpha);
        cfg = dns2d::scaled_sim_config(cfg);
    }
    std::filesystem::create_directories(out_dir);
    auto job = dns2d::run_lyapunov_job(cfg, lp);
    std::ofstream csv(out_dir + "/exponents.csv");
    csv << "t";
    for (int j = 1; j <= job.report.m; ++j) csv << ",lambda_" << j;
    csv << "\n";
    for (const auto& [t, exps] : job.running) {
        csv << dns2d::format_double(t);
        for (double e : exps) csv << ',' << dns2d::format_double(e);
        csv << "\n";
    }
    csv.close();
    nlohmann::json lj =
        dns2d::lyapunov_report_to_json(job.report, rescale ? alpha : 1.0);
    lj["frame"] = rescale ? "scaled_nu1_alpha1" : "as_configured";
    lj["avg_grad_sq"] = job.avg_grad_sq;
    lj["trace_min_instant_slack"] = job.trace.min_instant_slack;
    lj["dim_via_trace"] = dns2d::dim_via_trace(job.avg_grad_sq);
    dns2d::detail::write_text(out_dir + "/lyapunov.json", lj.dump(2) + "\n");
    std::cout << "lyapunov: lambda_max = " << job.report.exponents.front()
              << ", kaplan_yorke = " << job.report.kaplan_yorke
              << (job.report.ky_defined ? "" : " (increase m)") << "\n";
    return kExitOk;
}

int cmd_bounds(const std::string& config_path, const std::string& out_path) {
    const auto doc = dns2d::load_config_document(config_path);
    dns2d::SimConfig cfg = dns2d::parse_sim_config(doc);
    auto grid = cfg.make_grid();
    dns2d::VectorField g = cfg.build_forcing(grid);
    dns2d::BoundInputs bi;
    bi.nu = cfg.nu;
    bi.alpha = cfg.alpha;
    bi.forcing = &g;
    if (doc.contains("s_grid"))
        bi.s_grid = doc.at("s_grid").get<std::vector<double>>();
    auto rep = dns2d::best_bound_over_s(bi);
    nlohmann::json bj;
    bj["best_s"] = rep.best_s;
    bj["best_bound"] = rep.best_bound;
    bj["periodic_min_bound"] = rep.periodic_min_bound;
    bj["rot_endpoint_bound"] = rep.rot_endpoint_bound;
    bj["grashof"] = rep.grashof;
    bj["scaled_box_length"] = rep.scaled_box_length;
    bj["scaled_forcing_norm"] = rep.scaled_forcing_norm;
    bj["table"] = nlohmann::json::array();
    for (const auto& e : rep.per_s)
        bj["table"].push_back({{"s", e.s}, {"norm", e.norm}, {"bound", e.bound}});
    dns2d::detail::write_text(out_path, bj.dump(2) + "\n");
    const std::string csv_path =
        out_path.size() > 5 && out_path.ends_with(".json")
            ? out_path.substr(0, out_path.size() - 5) + ".csv"
            : out_path + ".csv";
    std::ofstream csv(csv_path);
    csv << "s,norm,bound\n";
    for (const auto& e : rep.per_s)
        csv << dns2d::format_double(e.s) << ',' << dns2d::format_double(e.norm)
            << ',' << dns2d::format_double(e.bound) << "\n";
    std::cout << "bounds: best_s = " << rep.best_s
              << ", best_bound = " << rep.best_bound
              << ", periodic = " << rep.periodic_min_bound << "\n";
    return kExitOk;
}

int cmd_verify_inequalities(long trials, int grid_n, std::uint64_t seed,
                            const std::string& out_path) {
    using namespace dns2d;
    std::vector<IneqTrialReport> reps;
    reps.push_back(run_pointwise_trials(std::max(trials * 100, 10000L), seed));
    reps.push_back(run_lieb_thirring_trials(
        std::max<int>(static_cast<int>(trials / 20), 5), 8, grid_n, seed));
    reps.push_back(run_orthogonality_trials(static_cast<int>(trials),
                                            std::max(16, grid_n / 2), seed));
    reps.push_back(run_ladyzhenskaya_trials(static_cast<int>(trials),
                                            std::max(16, grid_n / 2), seed));
    reps.push_back(run_interpolation_trials(static_cast<int>(trials),
                                            std::max(16, grid_n / 2), seed));
    nlohmann::json out = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : reps) {
        out.push_back(trial_report_to_json(r));
        std::cout << r.name << ": trials = " << r.trials
                  << ", min_slack = " << r.min_slack
                  << ", empirical = " << r.empirical_constant << "\n";
        if (r.name != "ladyzhenskaya" && r.min_slack < -1e-10) ok = false;
    }
    detail::write_text(out_path, out.dump(2) + "\n");
    if (!ok) {
        std::cerr << "verify-inequalities: an asserted bound was violated\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& plan_path, const std::string& out_dir,
              int max_parallel) {
    auto doc = dns2d::load_config_document(plan_path);
    dns2d::ExperimentPlan plan = dns2d::parse_plan(doc);
    if (!out_dir.empty()) plan.output_dir = out_dir;
    if (max_parallel > 0) plan.max_parallel = max_parallel;
    auto manifests = dns2d::run_plan(plan);
    int failed = 0;
    for (const auto& m : manifests) {
        std::cout << m.label << ": " << m.status << "\n";
        if (m.status != "ok") ++failed;
    }
    std::cout << "sweep: " << manifests.size() - failed << "/"
              << manifests.size() << " runs ok, summary at "
              << plan.output_dir << "/summary.csv\n";
    return failed == 0 ? kExitOk : kExitNumerical;
}

int cmd_report(const std::string& summary_path, const std::string& out_path,
               bool strict) {
    auto rows = dns2d::read_summary_csv(summary_path);
    auto verdicts = dns2d::compare_report(rows);
    nlohmann::json out = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& v : verdicts) {
        if (!v.applicable) continue;
        out.push_back({{"label", v.label},
                       {"check", v.check},
                       {"pass", v.pass},
                       {"slack", v.slack}});
        std::cout << (v.pass ? "PASS" : "FAIL") << "  " << v.label << "  "
                  << v.check << "  slack = " << v.slack << "\n";
        if (!v.pass) all_pass = false;
    }
    if (!out_path.empty())
        dns2d::detail::write_text(out_path, out.dump(2) + "\n");
    if (strict && !all_pass) return kExitAssertion;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(dns2d::kToolVersion) +
                 " - damped-driven 2D Navier-Stokes toolkit"};
    app.require_subcommand(1);

    std::string config_path, out = "out", resume, plan_path, summary_path;
    std::string bounds_out = "report.json", ineq_out = "report.json";
    std::string report_out;
    bool rescale = false, strict = false;
    long trials = 100;
    int grid_n = 64;
    int max_parallel = 0;
    std::uint64_t seed = 1;

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory");
    sim->add_option("--config", config_path, "run config (JSON or TOML)")
        ->required();
    sim->add_option("--out", out, "output directory");
    sim->add_option("--resume", resume, "checkpoint directory to resume from");

    auto* lyap = app.add_subcommand("lyapunov", "Lyapunov exponents via QR");
    lyap->add_option("--config", config_path, "run config with lyapunov block")
        ->required();
    lyap->add_option("--out", out, "output directory");
    lyap->add_flag("--scaled", rescale,
                   "rescale the run to nu = alpha = 1 first");

    auto* bnd = app.add_subcommand("bounds", "closed-form dimension bounds");
    bnd->add_option("--config", config_path, "run config (forcing, nu, alpha)")
        ->required();
    bnd->add_option("--out", bounds_out, "report path (.json; .csv beside it)");

    auto* ver = app.add_subcommand("verify-inequalities",
                                   "Monte Carlo inequality verification");
    ver->add_option("--trials", trials, "trial count scale");
    ver->add_option("--grid", grid_n, "lattice size for field trials");
    ver->add_option("--seed", seed, "base seed");
    ver->add_option("--out", ineq_out, "report path");

    auto* swp = app.add_subcommand("sweep", "run an experiment plan");
    swp->add_option("--plan", plan_path, "plan document (JSON or TOML)")
        ->required();
    swp->add_option("--out", out, "output root (overrides plan)");
    swp->add_option("--max-parallel", max_parallel,
                    "worker pool size (default: plan or DNS2D_THREADS)");

    auto* rep = app.add_subcommand("report", "PASS/FAIL verdicts from a summary");
    rep->add_option("--summary", summary_path, "summary.csv path")->required();
    rep->add_option("--out", report_out, "verdict JSON path");
    rep->add_flag("--strict", strict, "exit 4 on any FAIL");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out, resume);
        if (lyap->parsed()) return cmd_lyapunov(config_path, out, rescale);
        if (bnd->parsed()) return cmd_bounds(config_path, bounds_out);
        if (ver->parsed())
            return cmd_verify_inequalities(trials, grid_n, seed, ineq_out);
        if (swp->parsed())
            return cmd_sweep(plan_path, out,
                             max_parallel > 0 ? max_parallel : default_threads());
        if (rep->parsed()) return cmd_report(summary_path, report_out, strict);
    } catch (const dns2d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const dns2d::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
