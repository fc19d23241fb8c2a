#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dns2d/errors.hpp"
#include "dns2d/operators.hpp"
#include "dns2d/snapshot.hpp"
#include "dns2d/tomlmini.hpp"

namespace dns2d {

enum class IntegratorKind { exponential_rk4, imex_cn_ab2 };

inline std::string to_string(IntegratorKind k) {
    return k == IntegratorKind::exponential_rk4 ? "exponential_rk4"
                                                : "imex_cn_ab2";
}

/// Forcing / initial-condition descriptor.
///
/// "modes" lists one representative per conjugate pair; the builder writes
/// the conjugate partner, Leray-projects, zeroes the mean mode and
/// optionally rescales to a requested L2 norm, so the built field is always
/// real, divergence-free and mean-free. "random_band" draws complex
/// Gaussians with |m|^-2 decay on the annulus kmin <= |m| <= kmax.
struct FieldSpec {
    enum class Kind { zero, modes, random_band, snapshot };
    struct Mode {
        int k[2] = {0, 0};
        Complex amp[2] = {Complex{}, Complex{}};
    };

    Kind kind = Kind::zero;
    std::vector<Mode> modes;
    int kmin = 1, kmax = 4;
    std::uint64_t seed = 0;
    std::optional<double> l2_norm;
    std::string path;
};

inline void fill_random_annulus(VectorField& f, int kmin, int kmax,
                                std::mt19937_64& rng) {
    const Grid& g = f.grid();
    const int n = g.n();
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int c = 0; c < 2; ++c)
        for (auto& v : f.comp(c)) v = Complex{};
    for (int i = 0; i < n; ++i) {
        const int mi = g.kindex(i);
        for (int j = 0; j < n; ++j) {
            const int mj = g.kindex(j);
            const double m = std::sqrt(static_cast<double>(mi) * mi +
                                       static_cast<double>(mj) * mj);
            if (m < kmin || m > kmax) continue;
            const double amp = 1.0 / (m * m);
            for (int c = 0; c < 2; ++c)
                f.at(c, i, j) = Complex(gauss(rng), gauss(rng)) * amp;
        }
    }
    f.symmetrize();
}

inline VectorField build_field(const FieldSpec& spec, GridPtr grid) {
    VectorField f(grid);
    switch (spec.kind) {
        case FieldSpec::Kind::zero:
            f.set_divergence_free(true);
            return f;
        case FieldSpec::Kind::modes: {
            const Grid& g = *grid;
            const int n = g.n();
            for (const auto& m : spec.modes) {
                if (m.k[0] == 0 && m.k[1] == 0)
                    throw ConfigError("forcing.modes: k = (0,0) not allowed");
                if (3 * std::abs(m.k[0]) > n || 3 * std::abs(m.k[1]) > n)
                    throw ConfigError(
                        "forcing.modes: |k| exceeds the dealias band n/3");
                const int i = m.k[0] >= 0 ? m.k[0] : n + m.k[0];
                const int j = m.k[1] >= 0 ? m.k[1] : n + m.k[1];
                for (int c = 0; c < 2; ++c) {
                    f.at(c, i, j) += m.amp[c];
                    f.at(c, g.conj_index(i), g.conj_index(j)) +=
                        std::conj(m.amp[c]);
                }
            }
            break;
        }
        case FieldSpec::Kind::random_band: {
            if (spec.kmin < 1) throw ConfigError("random_band: kmin must be >= 1");
            if (3 * spec.kmax > grid->n())
                throw ConfigError("random_band: kmax exceeds the dealias band n/3");
            std::mt19937_64 rng(spec.seed);
            fill_random_annulus(f, spec.kmin, spec.kmax, rng);
            break;
        }
        case FieldSpec::Kind::snapshot: {
            VectorField loaded = read_field(spec.path);
            if (!loaded.grid().same_layout(*grid))
                throw ConfigError("snapshot field layout does not match grid: " +
                                  spec.path);
            f = std::move(loaded);
            break;
        }
    }
    f = leray_project(f);
    f.comp(0)[0] = Complex{};
    f.comp(1)[0] = Complex{};
    if (spec.l2_norm) {
        const double norm = l2_norm(f);
        if (norm == 0.0 && *spec.l2_norm > 0.0)
            throw ConfigError("cannot normalize a zero field to a nonzero norm");
        if (norm > 0.0) f *= (*spec.l2_norm / norm);
    }
    return f;
}

/// Physical and numerical parameters of one run.
struct SimConfig {
    double nu = 1.0;
    double alpha = 1.0;
    int grid_n = 64;
    double box_length = 2.0 * kPi;
    double dt = 1e-3;
    double t_end = 1.0;
    double sample_interval = 1e-2;
    IntegratorKind integrator = IntegratorKind::exponential_rk4;
    std::uint64_t seed = 0;
    FieldSpec forcing;
    FieldSpec initial;
    double checkpoint_interval = 0.0;  // simulated time units; 0 disables

    // Prebuilt fields used by the internal rescaling pipeline; they bypass
    // the descriptors and are never serialized.
    std::shared_ptr<const VectorField> forcing_override;
    std::shared_ptr<const VectorField> initial_override;

    GridPtr make_grid() const { return Grid::make(grid_n, box_length); }
    VectorField build_forcing(GridPtr grid) const {
        return forcing_override ? *forcing_override : build_field(forcing, grid);
    }
    VectorField build_initial(GridPtr grid) const {
        return initial_override ? *initial_override : build_field(initial, grid);
    }
};

/// Lyapunov job parameters layered on top of SimConfig.
struct LyapunovParams {
    int m = 4;
    double reorth_interval = 0.05;
    double burn_in = 0.0;
    double averaging_time = 1.0;
    std::uint64_t tangent_seed = 1;
    int tangent_band = 4;
};

namespace detail {

template <typename T>
T get_field(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has wrong type");
    }
}

template <typename T>
T require_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key))
        throw ConfigError(std::string("config key '") + key + "' is missing");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has wrong type");
    }
}

}  // namespace detail

inline FieldSpec parse_field_spec(const nlohmann::json& j, const char* where) {
    FieldSpec spec;
    const std::string type = detail::get_field<std::string>(j, "type", "zero");
    if (type == "zero") {
        spec.kind = FieldSpec::Kind::zero;
    } else if (type == "modes") {
        spec.kind = FieldSpec::Kind::modes;
        if (!j.contains("modes"))
            throw ConfigError(std::string(where) + ".modes is missing");
        for (const auto& mj : j.at("modes")) {
            FieldSpec::Mode m;
            const auto& k = mj.at("k");
            m.k[0] = k.at(0).get<int>();
            m.k[1] = k.at(1).get<int>();
            if (mj.contains("amp1")) {
                m.amp[0] = Complex(mj.at("amp1").at(0).get<double>(),
                                   mj.at("amp1").at(1).get<double>());
            }
            if (mj.contains("amp2")) {
                m.amp[1] = Complex(mj.at("amp2").at(0).get<double>(),
                                   mj.at("amp2").at(1).get<double>());
            }
            spec.modes.push_back(m);
        }
    } else if (type == "random_band") {
        spec.kind = FieldSpec::Kind::random_band;
        spec.kmin = detail::get_field<int>(j, "kmin", 1);
        spec.kmax = detail::get_field<int>(j, "kmax", 4);
        spec.seed = detail::get_field<std::uint64_t>(j, "seed", 0);
    } else if (type == "snapshot") {
        spec.kind = FieldSpec::Kind::snapshot;
        spec.path = detail::require_field<std::string>(j, "path");
    } else {
        throw ConfigError(std::string(where) + ".type unknown: " + type);
    }
    if (j.contains("l2_norm"))
        spec.l2_norm = detail::require_field<double>(j, "l2_norm");
    return spec;
}

inline nlohmann::json field_spec_to_json(const FieldSpec& spec) {
    nlohmann::json j;
    switch (spec.kind) {
        case FieldSpec::Kind::zero: j["type"] = "zero"; break;
        case FieldSpec::Kind::modes: {
            j["type"] = "modes";
            j["modes"] = nlohmann::json::array();
            for (const auto& m : spec.modes)
                j["modes"].push_back(
                    {{"k", {m.k[0], m.k[1]}},
                     {"amp1", {m.amp[0].real(), m.amp[0].imag()}},
                     {"amp2", {m.amp[1].real(), m.amp[1].imag()}}});
            break;
        }
        case FieldSpec::Kind::random_band:
            j["type"] = "random_band";
            j["kmin"] = spec.kmin;
            j["kmax"] = spec.kmax;
            j["seed"] = spec.seed;
            break;
        case FieldSpec::Kind::snapshot:
            j["type"] = "snapshot";
            j["path"] = spec.path;
            break;
    }
    if (spec.l2_norm) j["l2_norm"] = *spec.l2_norm;
    return j;
}

inline SimConfig parse_sim_config(const nlohmann::json& j) {
    SimConfig cfg;
    cfg.nu = detail::require_field<double>(j, "nu");
    cfg.alpha = detail::require_field<double>(j, "alpha");
    if (cfg.nu <= 0.0) throw ConfigError("config key 'nu' must be positive");
    if (cfg.alpha <= 0.0) throw ConfigError("config key 'alpha' must be positive");
    if (!j.contains("grid")) throw ConfigError("config key 'grid' is missing");
    cfg.grid_n = detail::require_field<int>(j.at("grid"), "n");
    cfg.box_length = detail::get_field<double>(j.at("grid"), "box_length", 2.0 * kPi);
    if (cfg.box_length <= 0.0)
        throw ConfigError("config key 'grid.box_length' must be positive");
    cfg.dt = detail::require_field<double>(j, "dt");
    if (cfg.dt <= 0.0) throw ConfigError("config key 'dt' must be positive");
    cfg.t_end = detail::require_field<double>(j, "t_end");
    if (cfg.t_end <= 0.0) throw ConfigError("config key 't_end' must be positive");
    cfg.sample_interval =
        detail::get_field<double>(j, "sample_interval", 10.0 * cfg.dt);
    if (cfg.sample_interval <= 0.0)
        throw ConfigError("config key 'sample_interval' must be positive");
    const std::string integ =
        detail::get_field<std::string>(j, "integrator", "exponential_rk4");
    if (integ == "exponential_rk4")
        cfg.integrator = IntegratorKind::exponential_rk4;
    else if (integ == "imex_cn_ab2")
        cfg.integrator = IntegratorKind::imex_cn_ab2;
    else
        throw ConfigError("config key 'integrator' unknown: " + integ);
    cfg.seed = detail::get_field<std::uint64_t>(j, "seed", 0);
    if (j.contains("forcing"))
        cfg.forcing = parse_field_spec(j.at("forcing"), "forcing");
    if (j.contains("initial"))
        cfg.initial = parse_field_spec(j.at("initial"), "initial");
    cfg.checkpoint_interval =
        detail::get_field<double>(j, "checkpoint_interval", 0.0);
    return cfg;
}

inline nlohmann::json sim_config_to_json(const SimConfig& cfg) {
    nlohmann::json j;
    j["nu"] = cfg.nu;
    j["alpha"] = cfg.alpha;
    j["grid"] = {{"n", cfg.grid_n}, {"box_length", cfg.box_length}};
    j["dt"] = cfg.dt;
    j["t_end"] = cfg.t_end;
    j["sample_interval"] = cfg.sample_interval;
    j["integrator"] = to_string(cfg.integrator);
    j["seed"] = cfg.seed;
    j["forcing"] = field_spec_to_json(cfg.forcing);
    j["initial"] = field_spec_to_json(cfg.initial);
    j["checkpoint_interval"] = cfg.checkpoint_interval;
    return j;
}

inline LyapunovParams parse_lyapunov_params(const nlohmann::json& j) {
    LyapunovParams p;
    p.m = detail::require_field<int>(j, "m");
    if (p.m < 1) throw ConfigError("lyapunov key 'm' must be >= 1");
    p.reorth_interval =
        detail::require_field<double>(j, "reorthonormalization_interval");
    if (p.reorth_interval <= 0.0)
        throw ConfigError("lyapunov key 'reorthonormalization_interval' must be positive");
    p.burn_in = detail::get_field<double>(j, "burn_in", 0.0);
    p.averaging_time = detail::require_field<double>(j, "averaging_time");
    p.tangent_seed = detail::get_field<std::uint64_t>(j, "tangent_seed", 1);
    p.tangent_band = detail::get_field<int>(j, "tangent_band", 4);
    return p;
}

inline nlohmann::json lyapunov_params_to_json(const LyapunovParams& p) {
    nlohmann::json j;
    j["m"] = p.m;
    j["reorthonormalization_interval"] = p.reorth_interval;
    j["burn_in"] = p.burn_in;
    j["averaging_time"] = p.averaging_time;
    j["tangent_seed"] = p.tangent_seed;
    j["tangent_band"] = p.tangent_band;
    return j;
}

/// Loads a config document from JSON or TOML, deciding by extension
/// (.toml) with a JSON-first fallback for other extensions.
inline nlohmann::json load_config_document(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    const std::string text = ss.str();
    const bool looks_toml = path.size() > 5 && path.ends_with(".toml");
    if (looks_toml) {
        try {
            return parse_toml(text);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config parse failed: ") + e.what());
        }
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        try {
            return parse_toml(text);
        } catch (const std::exception& e) {
            throw ConfigError("config is neither valid JSON nor supported TOML: " +
                              std::string(e.what()));
        }
    }
}

/// FNV-1a hash of the canonical (sorted-key) JSON form.
inline std::string config_hash(const nlohmann::json& canonical) {
    const std::string s = canonical.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace dns2d
