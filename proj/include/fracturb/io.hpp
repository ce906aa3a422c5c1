#pragma once

// Experiment I/O: JSON configs, CSV outputs, run manifests.
//
// Needs nlohmann/json and OpenSSL libcrypto (SHA-256) in addition to the core
// library dependencies.
//
// Config files are single JSON objects. Unknown keys and type errors are
// collected and reported together. A run manifest is also accepted as a
// config: its embedded "config" object is used, so a manifest reproduces its
// own run.
//
// ns-run keys (all optional):
//   preset            named (beta, mu) pair; explicit beta/mu override it
//   beta, mu          fractional orders
//   grid              {"n": points per side, "length": box size}
//   nu, dt, t_end     dissipation coefficient, step, final time
//   forcing           null or {"k_lo", "k_hi", "amplitude", "seed"}
//   dealias, advection, history_len, seed, cfl, memory_tolerance
//   initial           {"kind": "gaussian" | "shell", "k_peak", "width", "energy"}
//   snapshot_times    list of times for spectrum snapshots
//
// ctrw-run keys (all optional):
//   preset, beta, mu, n_particles, t_max, seed, n_times,
//   truncation        jump cutoff, or null for untruncated jumps (beta = 2 only)
//   q                 moment order, or null for beta / 3
//
// CSV numbers are printed with %.17g, which round-trips every double.

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fracturb/anomalous_diffusion.hpp"
#include "fracturb/analysis.hpp"
#include "fracturb/errors.hpp"
#include "fracturb/scaling_laws.hpp"
#include "fracturb/spectral_solver.hpp"

namespace fracturb::io {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kManifestKind = "fracturb-manifest";

struct Preset {
    const char* name;
    double beta;
    double mu;
};

inline constexpr std::array<Preset, 5> kPresets{{
    {"kolmogorov", 2.0, 0.0},
    {"richardson", 2.0 / 3.0, 0.0},
    {"ballistic", 1.0, 0.0},
    {"boundary_layer", 0.5, 0.0},
    {"subdiffusive", 2.0, 0.5},
}};

inline std::optional<Preset> find_preset(const std::string& name) {
    for (const auto& p : kPresets)
        if (name == p.name) return p;
    return std::nullopt;
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------- JSON reading

namespace detail {

/// Reads keys from one JSON object, recording problems instead of throwing.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string where, std::vector<std::string>& problems)
        : obj_(obj), where_(std::move(where)), problems_(problems) {
        if (!obj_.is_object()) problems_.push_back(where_ + " must be a JSON object");
    }

    bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }

    const json* raw(const std::string& key) {
        if (!has(key)) return nullptr;
        seen_.insert(key);
        return &obj_.at(key);
    }

    void read(const std::string& key, double& out) {
        if (auto* v = raw(key)) {
            if (v->is_number()) out = v->get<double>();
            else bad_type(key, "a number");
        }
    }

    void read(const std::string& key, bool& out) {
        if (auto* v = raw(key)) {
            if (v->is_boolean()) out = v->get<bool>();
            else bad_type(key, "true or false");
        }
    }

    void read(const std::string& key, std::uint64_t& out) {
        if (auto* v = raw(key)) {
            if (v->is_number_unsigned()) out = v->get<std::uint64_t>();
            else if (v->is_number_integer() && v->get<std::int64_t>() >= 0) out = v->get<std::uint64_t>();
            else bad_type(key, "a non-negative integer");
        }
    }

    void read_count(const std::string& key, std::size_t& out) {
        std::uint64_t tmp = out;
        read(key, tmp);
        out = static_cast<std::size_t>(tmp);
    }

    void read(const std::string& key, std::string& out) {
        if (auto* v = raw(key)) {
            if (v->is_string()) out = v->get<std::string>();
            else bad_type(key, "a string");
        }
    }

    void read(const std::string& key, std::optional<double>& out) {
        if (auto* v = raw(key)) {
            if (v->is_null()) out.reset();
            else if (v->is_number()) out = v->get<double>();
            else bad_type(key, "a number or null");
        }
    }

    void read(const std::string& key, std::vector<double>& out) {
        if (auto* v = raw(key)) {
            if (!v->is_array()) return bad_type(key, "an array of numbers");
            std::vector<double> tmp;
            for (const auto& e : *v) {
                if (!e.is_number()) return bad_type(key, "an array of numbers");
                tmp.push_back(e.get<double>());
            }
            out = std::move(tmp);
        }
    }

    /// Reports every key that no read() touched.
    void finish() {
        if (!obj_.is_object()) return;
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key())) problems_.push_back(where_ + ": unknown key \"" + it.key() + "\"");
    }

    std::string path(const std::string& key) const { return where_ == "config" ? key : where_ + "." + key; }

private:
    void bad_type(const std::string& key, const char* expected) {
        problems_.push_back(path(key) + " must be " + expected);
    }

    const json& obj_;
    std::string where_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

/// Reads preset/beta/mu; returns the orders if they are valid.
inline std::optional<FractionalOrders> read_orders(ObjectReader& r, std::string& preset,
                                                   std::vector<std::string>& problems, double beta, double mu) {
    r.read("preset", preset);
    if (!preset.empty()) {
        if (auto p = find_preset(preset)) {
            beta = p->beta;
            mu = p->mu;
        } else {
            std::string names;
            for (const auto& q : kPresets) names += std::string(names.empty() ? "" : ", ") + q.name;
            problems.push_back("unknown preset \"" + preset + "\" (known: " + names + ")");
        }
    }
    r.read("beta", beta);
    r.read("mu", mu);
    try {
        return FractionalOrders(beta, mu);
    } catch (const DomainError& e) {
        problems.push_back(e.what());
        return std::nullopt;
    }
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
}

} // namespace detail

/// Parsed config text. `empty` is set for blank files and `{}`.
struct ConfigDocument {
    json body = json::object();
    bool empty = true;
    bool from_manifest = false;
};

inline ConfigDocument parse_config_text(const std::string& text, const std::string& command) {
    ConfigDocument doc;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return doc;
    json j = detail::parse_json_text(text);
    if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
    if (j.contains("kind") && j["kind"] == kManifestKind) {
        if (!j.contains("command") || j["command"] != command)
            throw ConfigError({"manifest was written by a different command than " + command});
        if (!j.contains("config") || !j["config"].is_object()) throw ConfigError({"manifest has no config object"});
        doc.body = j["config"];
        doc.from_manifest = true;
    } else {
        doc.body = std::move(j);
    }
    doc.empty = doc.body.empty();
    return doc;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({"cannot read " + path.string()});
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------- ns-run config

struct NsRunConfig {
    std::string preset;
    SolverConfig solver;
};

inline json to_json(const NsRunConfig& c) {
    const auto& s = c.solver;
    json j;
    if (!c.preset.empty()) j["preset"] = c.preset;
    j["beta"] = s.orders.beta();
    j["mu"] = s.orders.mu();
    j["grid"] = {{"n", s.grid.n}, {"length", s.grid.length}};
    j["nu"] = s.nu;
    j["dt"] = s.dt;
    j["t_end"] = s.t_end;
    if (s.forcing)
        j["forcing"] = {{"k_lo", s.forcing->k_lo},
                        {"k_hi", s.forcing->k_hi},
                        {"amplitude", s.forcing->amplitude},
                        {"seed", s.forcing->seed}};
    else
        j["forcing"] = nullptr;
    j["dealias"] = s.dealias;
    j["advection"] = s.advection;
    j["history_len"] = s.history_len;
    j["seed"] = s.seed;
    j["cfl"] = s.cfl;
    j["memory_tolerance"] = s.memory_tolerance;
    j["initial"] = {{"kind", s.initial.kind == SpectrumShape::Kind::shell ? "shell" : "gaussian"},
                    {"k_peak", s.initial.k_peak},
                    {"width", s.initial.width},
                    {"energy", s.initial.energy}};
    j["snapshot_times"] = s.snapshot_times;
    return j;
}

inline NsRunConfig default_ns_config() {
    NsRunConfig c;
    c.solver.grid = GridSpec{2, 64, 2.0 * std::numbers::pi};
    c.solver.nu = 1e-3;
    c.solver.dt = 5e-3;
    c.solver.t_end = 1.0;
    return c;
}

inline NsRunConfig ns_config_from_json(const json& body) {
    std::vector<std::string> problems;
    NsRunConfig c = default_ns_config();
    detail::ObjectReader r(body, "config", problems);
    auto orders = detail::read_orders(r, c.preset, problems, c.solver.orders.beta(), c.solver.orders.mu());
    if (orders) c.solver.orders = *orders;

    if (const json* g = r.raw("grid")) {
        detail::ObjectReader gr(*g, "grid", problems);
        gr.read_count("n", c.solver.grid.n);
        gr.read("length", c.solver.grid.length);
        gr.finish();
    }
    r.read("nu", c.solver.nu);
    r.read("dt", c.solver.dt);
    r.read("t_end", c.solver.t_end);
    if (const json* f = r.raw("forcing")) {
        if (f->is_null()) {
            c.solver.forcing.reset();
        } else {
            BandForcing bf;
            detail::ObjectReader fr(*f, "forcing", problems);
            fr.read("k_lo", bf.k_lo);
            fr.read("k_hi", bf.k_hi);
            fr.read("amplitude", bf.amplitude);
            fr.read("seed", bf.seed);
            fr.finish();
            c.solver.forcing = bf;
        }
    }
    r.read("dealias", c.solver.dealias);
    r.read("advection", c.solver.advection);
    r.read_count("history_len", c.solver.history_len);
    r.read("seed", c.solver.seed);
    r.read("cfl", c.solver.cfl);
    r.read("memory_tolerance", c.solver.memory_tolerance);
    if (const json* init = r.raw("initial")) {
        detail::ObjectReader ir(*init, "initial", problems);
        std::string kind = c.solver.initial.kind == SpectrumShape::Kind::shell ? "shell" : "gaussian";
        ir.read("kind", kind);
        if (kind == "shell") c.solver.initial.kind = SpectrumShape::Kind::shell;
        else if (kind == "gaussian") c.solver.initial.kind = SpectrumShape::Kind::gaussian;
        else problems.push_back("initial.kind must be \"gaussian\" or \"shell\"");
        ir.read("k_peak", c.solver.initial.k_peak);
        ir.read("width", c.solver.initial.width);
        ir.read("energy", c.solver.initial.energy);
        ir.finish();
    }
    r.read("snapshot_times", c.solver.snapshot_times);
    r.finish();

    try {
        c.solver.validate();
    } catch (const ConfigError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
    if (!problems.empty()) throw ConfigError(problems);
    return c;
}

// ---------------------------------------------------------------- ctrw-run config

struct CtrwRunConfig {
    std::string preset;
    CtrwConfig ctrw;
    std::optional<double> q; ///< empty: beta / 3
};

inline CtrwRunConfig default_ctrw_config() {
    CtrwRunConfig c;
    c.ctrw.n_particles = 100000;
    c.ctrw.t_max = 1000.0;
    c.ctrw.truncation = 1000.0;
    return c;
}

inline json to_json(const CtrwRunConfig& c) {
    json j;
    if (!c.preset.empty()) j["preset"] = c.preset;
    j["beta"] = c.ctrw.orders.beta();
    j["mu"] = c.ctrw.orders.mu();
    j["n_particles"] = c.ctrw.n_particles;
    j["t_max"] = c.ctrw.t_max;
    j["seed"] = c.ctrw.seed;
    j["n_times"] = c.ctrw.n_times;
    j["truncation"] = c.ctrw.truncation ? json(*c.ctrw.truncation) : json(nullptr);
    j["q"] = c.q ? json(*c.q) : json(nullptr);
    return j;
}

inline CtrwRunConfig ctrw_config_from_json(const json& body) {
    std::vector<std::string> problems;
    CtrwRunConfig c = default_ctrw_config();
    detail::ObjectReader r(body, "config", problems);
    auto orders = detail::read_orders(r, c.preset, problems, c.ctrw.orders.beta(), c.ctrw.orders.mu());
    if (orders) c.ctrw.orders = *orders;
    r.read_count("n_particles", c.ctrw.n_particles);
    r.read("t_max", c.ctrw.t_max);
    r.read("seed", c.ctrw.seed);
    r.read_count("n_times", c.ctrw.n_times);
    r.read("truncation", c.ctrw.truncation);
    r.read("q", c.q);
    r.finish();

    try {
        c.ctrw.validate();
    } catch (const ConfigError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
    if (c.q && !(*c.q > 0.0)) problems.push_back("q must be positive");
    if (!problems.empty()) throw ConfigError(problems);
    return c;
}

// ---------------------------------------------------------------- CSV

inline std::string spectrum_csv(const SpectrumSeries& s) {
    std::string out = "shell,k_center,energy\n";
    for (std::size_t i = 0; i < s.values.size(); ++i)
        out += std::to_string(s.shells[i]) + "," + format_number(s.k_center[i]) + "," + format_number(s.values[i]) + "\n";
    return out;
}

inline std::string diagnostics_csv(const std::vector<StepDiagnostics>& d) {
    std::string out = "step,time,energy,enstrophy,dissipation_rate\n";
    for (const auto& r : d)
        out += std::to_string(r.step) + "," + format_number(r.time) + "," + format_number(r.energy) + "," +
               format_number(r.enstrophy) + "," + format_number(r.dissipation_rate) + "\n";
    return out;
}

inline std::string msd_csv(const MsdSeries& s) {
    std::string out = "time,width_sq,q_used\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
        out += format_number(s.times[i]) + "," + format_number(s.width_sq[i]) + "," + format_number(s.q) + "\n";
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        cells.push_back(cell);
    }
    return cells;
}

inline double parse_number(const std::string& s, std::size_t line_no, std::vector<std::string>& problems) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    problems.push_back("line " + std::to_string(line_no) + ": \"" + s + "\" is not a number");
    return 0.0;
}

} // namespace detail

/// Reads a spectrum CSV with header shell,k_center,energy.
inline SpectrumSeries parse_spectrum_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> problems;
    if (!std::getline(in, line) || detail::split_csv_line(line) != std::vector<std::string>{"shell", "k_center", "energy"})
        throw ConfigError({"spectrum CSV must start with the header shell,k_center,energy"});
    SpectrumSeries s;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 3) {
            problems.push_back("line " + std::to_string(line_no) + ": expected 3 columns");
            continue;
        }
        const double shell = detail::parse_number(cells[0], line_no, problems);
        s.shells.push_back(static_cast<int>(shell));
        s.k_center.push_back(detail::parse_number(cells[1], line_no, problems));
        s.values.push_back(detail::parse_number(cells[2], line_no, problems));
        s.total_energy += s.values.back();
    }
    if (!problems.empty()) throw ConfigError(problems);
    return s;
}

// ---------------------------------------------------------------- digests and files

inline std::string sha256_hex(const std::string& data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

struct OutputFile {
    std::string file; ///< name relative to the output directory
    std::string sha256;
};

inline OutputFile write_output(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("error while writing " + (dir / name).string());
    return {name, sha256_hex(content)};
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunManifest {
    std::string command;
    json config;
    std::uint64_t seed = 0;
    std::string started_at;
    std::string finished_at;
    std::vector<OutputFile> outputs;
    json results = json::object();
};

inline json to_json(const RunManifest& m) {
    json outputs = json::array();
    for (const auto& o : m.outputs) outputs.push_back({{"file", o.file}, {"sha256", o.sha256}});
    return {{"kind", kManifestKind},     {"version", kVersion},          {"command", m.command},
            {"seed", m.seed},            {"config", m.config},           {"started_at", m.started_at},
            {"finished_at", m.finished_at}, {"outputs", outputs},        {"results", m.results}};
}

/// "p/q" when v is a fraction with denominator below 100, otherwise empty.
inline std::string fraction_form(double v) {
    for (long q = 2; q < 100; ++q) {
        const double p = std::round(v * static_cast<double>(q));
        if (std::abs(p / static_cast<double>(q) - v) <= 1e-12 * std::max(1.0, std::abs(v)))
            return std::gcd(static_cast<long>(p), q) == 1 ? std::to_string(static_cast<long>(p)) + "/" + std::to_string(q) : "";
    }
    return "";
}

/// Header lines naming the orders and what the scaling laws predict for them.
inline std::string prediction_header(const FractionalOrders& o, const std::string& preset) {
    const auto p = predict(o);
    std::ostringstream os;
    os.precision(10);
    os << "# orders: beta = " << o.beta() << ", mu = " << o.mu();
    if (!preset.empty()) os << " (preset " << preset << ")";
    os << "\n# predicted spectrum exponent " << p.spectrum_exponent;
    if (const auto f = fraction_form(p.spectrum_exponent); !f.empty()) os << " (" << f << ")";
    os << ", flux power " << p.flux_power << ", MSD exponent eta " << p.msd_exponent << " (" << to_string(p.regime) << ")";
    if (p.extrapolated) os << " [extrapolated]";
    os << "\n";
    return os.str();
}

} // namespace fracturb::io
