#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dns2d/diagnostics.hpp"
#include "dns2d/field.hpp"

namespace dns2d {

// Field snapshot, little-endian binary:
//   bytes 0..7   magic "DNS2DFLD"
//   u32          version (1)
//   u32          n (modes per axis)
//   u32          component count (1 scalar, 2 vector)
//   u32          flags (bit 0: divergence-free certificate)
//   f64          box_length
//   payload      per component, row-major k-order, (re f64, im f64) each
// A lossless JSON debug dump is available for n <= 64.

namespace detail {
inline constexpr char kFieldMagic[8] = {'D', 'N', 'S', '2', 'D', 'F', 'L', 'D'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace detail

inline void write_field(const std::string& path, const VectorField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    os.write(detail::kFieldMagic, 8);
    detail::write_pod(os, std::uint32_t{1});
    detail::write_pod(os, static_cast<std::uint32_t>(f.grid().n()));
    detail::write_pod(os, std::uint32_t{2});
    detail::write_pod(os, std::uint32_t{f.divergence_free() ? 1u : 0u});
    detail::write_pod(os, f.grid().box_length());
    for (int c = 0; c < 2; ++c)
        os.write(reinterpret_cast<const char*>(f.comp(c).data()),
                 static_cast<std::streamsize>(f.comp(c).size() * sizeof(Complex)));
    if (!os) throw std::runtime_error("write_field: short write to " + path);
}

inline VectorField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, detail::kFieldMagic, 8) != 0)
        throw std::runtime_error("read_field: bad magic in " + path);
    std::uint32_t version = 0, n = 0, ncomp = 0, flags = 0;
    double box_length = 0.0;
    detail::read_pod(is, version);
    detail::read_pod(is, n);
    detail::read_pod(is, ncomp);
    detail::read_pod(is, flags);
    detail::read_pod(is, box_length);
    if (version != 1) throw std::runtime_error("read_field: unknown version");
    if (ncomp != 2) throw std::runtime_error("read_field: expected 2 components");
    VectorField f(Grid::make(static_cast<int>(n), box_length));
    for (int c = 0; c < 2; ++c)
        is.read(reinterpret_cast<char*>(f.comp(c).data()),
                static_cast<std::streamsize>(f.comp(c).size() * sizeof(Complex)));
    if (!is) throw std::runtime_error("read_field: truncated " + path);
    f.set_divergence_free(flags & 1u);
    return f;
}

inline nlohmann::json field_to_json(const VectorField& f) {
    if (f.grid().n() > 64)
        throw std::invalid_argument("field_to_json: JSON dump limited to n <= 64");
    nlohmann::json j;
    j["n"] = f.grid().n();
    j["box_length"] = f.grid().box_length();
    j["divergence_free"] = f.divergence_free();
    for (int c = 0; c < 2; ++c) {
        nlohmann::json comp = nlohmann::json::array();
        for (const auto& v : f.comp(c))
            comp.push_back({v.real(), v.imag()});
        j["components"].push_back(std::move(comp));
    }
    return j;
}

inline VectorField field_from_json(const nlohmann::json& j) {
    VectorField f(Grid::make(j.at("n").get<int>(), j.at("box_length").get<double>()));
    const auto& comps = j.at("components");
    for (int c = 0; c < 2; ++c) {
        const auto& comp = comps.at(c);
        if (comp.size() != f.grid().size())
            throw std::runtime_error("field_from_json: size mismatch");
        for (std::size_t i = 0; i < f.comp(c).size(); ++i)
            f.comp(c)[i] = Complex(comp[i][0].get<double>(), comp[i][1].get<double>());
    }
    f.set_divergence_free(j.value("divergence_free", false));
    return f;
}

/// Checkpoint: the state field plus metadata needed to resume a run with
/// identical sampled diagnostics (the residual columns look two samples back).
struct Checkpoint {
    double t = 0.0;
    std::int64_t step = 0;
    std::string config_hash;
    std::vector<DiagnosticsRecord> recent;  // up to last two samples
};

inline nlohmann::json record_to_json(const DiagnosticsRecord& r) {
    return {{"t", r.t},
            {"energy", r.energy},
            {"grad_energy", r.grad_energy},
            {"laplacian_energy", r.laplacian_energy},
            {"forcing_power", r.forcing_power},
            {"strong_forcing_power", r.strong_forcing_power},
            {"energy_residual", r.energy_residual},
            {"strong_energy_residual", r.strong_energy_residual}};
}

inline DiagnosticsRecord record_from_json(const nlohmann::json& j) {
    DiagnosticsRecord r;
    r.t = j.at("t").get<double>();
    r.energy = j.at("energy").get<double>();
    r.grad_energy = j.at("grad_energy").get<double>();
    r.laplacian_energy = j.at("laplacian_energy").get<double>();
    r.forcing_power = j.at("forcing_power").get<double>();
    r.strong_forcing_power = j.at("strong_forcing_power").get<double>();
    r.energy_residual = j.at("energy_residual").get<double>();
    r.strong_energy_residual = j.at("strong_energy_residual").get<double>();
    return r;
}

inline void write_checkpoint(const std::string& dir, const VectorField& u,
                             const Checkpoint& meta) {
    std::filesystem::create_directories(dir);
    write_field(dir + "/state.fld", u);
    nlohmann::json j;
    j["t"] = meta.t;
    j["step"] = meta.step;
    j["config_hash"] = meta.config_hash;
    j["recent"] = nlohmann::json::array();
    for (const auto& r : meta.recent) j["recent"].push_back(record_to_json(r));
    std::ofstream os(dir + "/meta.json");
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("write_checkpoint: cannot write meta.json");
}

inline std::pair<VectorField, Checkpoint> read_checkpoint(const std::string& dir) {
    VectorField u = read_field(dir + "/state.fld");
    std::ifstream is(dir + "/meta.json");
    if (!is) throw std::runtime_error("read_checkpoint: missing meta.json in " + dir);
    nlohmann::json j = nlohmann::json::parse(is);
    Checkpoint meta;
    meta.t = j.at("t").get<double>();
    meta.step = j.at("step").get<std::int64_t>();
    meta.config_hash = j.value("config_hash", "");
    for (const auto& rj : j.value("recent", nlohmann::json::array()))
        meta.recent.push_back(record_from_json(rj));
    return {std::move(u), std::move(meta)};
}

}  // namespace dns2d
