// fracturb command-line driver.
//
//   fracturb predict --beta B --mu M [--json]
//   fracturb ns-run CONFIG.json
//   fracturb ctrw-run CONFIG.json
//   fracturb spectrum-fit SPECTRUM.csv --k-min A --k-max B --beta B --mu M
//
// Common options (before or after the subcommand): --seed, --threads, --output-dir.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 fit-domain error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "fracturb/fracturb.hpp"
#include "fracturb/io.hpp"

namespace fs = std::filesystem;
using namespace fracturb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitFitDomain = 4;

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string output_dir = "fracturb_out";
};

int cmd_predict(double beta, double mu, bool as_json) {
    const FractionalOrders orders(beta, mu);
    const auto p = predict(orders);
    if (as_json) {
        io::json j = {{"beta", beta},
                      {"mu", mu},
                      {"spectrum_exponent", p.spectrum_exponent},
                      {"flux_power", p.flux_power},
                      {"msd_exponent", p.msd_exponent},
                      {"regime", std::string(to_string(p.regime))},
                      {"extrapolated", p.extrapolated}};
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }
    std::printf("beta                %s\n", io::format_number(beta).c_str());
    std::printf("mu                  %s\n", io::format_number(mu).c_str());
    std::printf("spectrum exponent   %s\n", io::format_number(p.spectrum_exponent).c_str());
    std::printf("flux power          %s\n", io::format_number(p.flux_power).c_str());
    std::printf("MSD exponent (eta)  %s\n", io::format_number(p.msd_exponent).c_str());
    std::printf("regime              %s\n", std::string(to_string(p.regime)).c_str());
    std::printf("extrapolated        %s\n", p.extrapolated ? "yes" : "no");
    return kExitOk;
}

/// Loads a config document; prints the defaults and returns false if it is empty.
template <class Defaults>
bool load_document(const std::string& path, const std::string& command, const Defaults& defaults, io::json& body) {
    const auto doc = io::parse_config_text(io::read_text_file(path), command);
    if (doc.empty) {
        std::cout << "# " << path << " is empty; refusing to run. Defaults for " << command << ":\n"
                  << io::to_json(defaults).dump(2) << '\n';
        return false;
    }
    body = doc.body;
    return true;
}

int cmd_ns_run(const std::string& config_path, const CommonOptions& common) {
    io::json body;
    if (!load_document(config_path, "ns-run", io::default_ns_config(), body)) return kExitConfig;
    if (common.seed) body["seed"] = *common.seed;
    const auto cfg = io::ns_config_from_json(body);
    std::cout << io::prediction_header(cfg.solver.orders, cfg.preset);

    const auto started = std::chrono::system_clock::now();
    const SpectralSolver solver(cfg.solver);
    RunOutput out;
    try {
        out = solver.run();
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    const auto finished = std::chrono::system_clock::now();

    const fs::path dir = common.output_dir;
    io::RunManifest m;
    m.command = "ns-run";
    m.config = io::to_json(cfg);
    m.seed = cfg.solver.seed;
    m.outputs.push_back(io::write_output(dir, "diagnostics.csv", io::diagnostics_csv(out.diagnostics)));
    m.outputs.push_back(io::write_output(dir, "spectrum.csv", io::spectrum_csv(out.final_spectrum)));
    for (std::size_t i = 0; i < out.snapshots.size(); ++i)
        m.outputs.push_back(io::write_output(dir, "spectrum_snapshot_" + std::to_string(i) + ".csv",
                                             io::spectrum_csv(out.snapshots[i].spectrum)));
    const auto& last = out.diagnostics.back();
    m.results = {{"final_time", last.time},
                 {"final_energy", last.energy},
                 {"final_enstrophy", last.enstrophy},
                 {"snapshot_times", io::json::array()},
                 {"warnings", out.warnings}};
    for (const auto& s : out.snapshots) m.results["snapshot_times"].push_back(s.time);
    m.started_at = io::utc_timestamp(started);
    m.finished_at = io::utc_timestamp(finished);
    io::write_output(dir, "manifest.json", io::to_json(m).dump(2) + "\n");

    for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
    std::printf("steps %zu, final time %s, energy %s, enstrophy %s\n", last.step, io::format_number(last.time).c_str(),
                io::format_number(last.energy).c_str(), io::format_number(last.enstrophy).c_str());
    std::printf("outputs written to %s\n", dir.string().c_str());
    return kExitOk;
}

int cmd_ctrw_run(const std::string& config_path, const CommonOptions& common) {
    io::json body;
    if (!load_document(config_path, "ctrw-run", io::default_ctrw_config(), body)) return kExitConfig;
    if (common.seed) body["seed"] = *common.seed;
    const auto cfg = io::ctrw_config_from_json(body);
    std::cout << io::prediction_header(cfg.ctrw.orders, cfg.preset);

    const auto started = std::chrono::system_clock::now();
    const auto ensemble = ctrw_simulate(cfg.ctrw, common.threads);
    const double q = cfg.q.value_or(default_moment_order(ensemble));
    const auto series = width_series(ensemble, q);
    const auto fit = fit_width(series, default_fit_window(series.times));
    const auto finished = std::chrono::system_clock::now();

    const double eta_pred = msd_exponent(cfg.ctrw.orders);
    const fs::path dir = common.output_dir;
    io::RunManifest m;
    m.command = "ctrw-run";
    m.config = io::to_json(cfg);
    m.seed = cfg.ctrw.seed;
    m.outputs.push_back(io::write_output(dir, "msd.csv", io::msd_csv(series)));
    m.results = {{"eta_fitted", fit.eta},
                 {"eta_std_error", fit.std_error},
                 {"eta_predicted", eta_pred},
                 {"q", q},
                 {"window", {fit.window.t_lo, fit.window.t_hi}},
                 {"points", fit.points}};
    m.started_at = io::utc_timestamp(started);
    m.finished_at = io::utc_timestamp(finished);
    io::write_output(dir, "manifest.json", io::to_json(m).dump(2) + "\n");

    std::printf("fitted eta %s +/- %s (q = %s, %zu points in [%s, %s])\n", io::format_number(fit.eta).c_str(),
                io::format_number(fit.std_error).c_str(), io::format_number(q).c_str(), fit.points,
                io::format_number(fit.window.t_lo).c_str(), io::format_number(fit.window.t_hi).c_str());
    std::printf("predicted eta %s\n", io::format_number(eta_pred).c_str());
    std::printf("outputs written to %s\n", dir.string().c_str());
    return kExitOk;
}

int cmd_spectrum_fit(const std::string& csv_path, double k_min, double k_max, double beta, double mu,
                     double z_threshold) {
    const FractionalOrders orders(beta, mu);
    const auto series = io::parse_spectrum_csv(io::read_text_file(csv_path));
    const auto fit = fit_power_law(series, k_min, k_max);
    const auto report = compare_prediction(fit, predict(orders), z_threshold);
    std::cout << io::prediction_header(orders, "");
    std::printf("window              [%s, %s], %zu shells, r^2 %s\n", io::format_number(k_min).c_str(),
                io::format_number(k_max).c_str(), fit.points, io::format_number(fit.r_squared).c_str());
    std::cout << format_report(report);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional-dissipation turbulence laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    app.add_option("--seed", common.seed, "Override the config seed");
    app.add_option("--threads", common.threads, "Worker threads (results do not depend on this)")
        ->check(CLI::PositiveNumber);
    app.add_option("--output-dir", common.output_dir, "Directory for CSV and manifest outputs");

    double beta = 2.0, mu = 0.0;
    bool as_json = false;
    auto* predict_cmd = app.add_subcommand("predict", "Print predicted scaling exponents");
    predict_cmd->add_option("--beta", beta, "Space-fractional order in (0, 2]")->required();
    predict_cmd->add_option("--mu", mu, "Time-fractional order in [0, 1)")->required();
    predict_cmd->add_flag("--json", as_json, "Emit JSON instead of a table");

    std::string config_path;
    auto* ns_cmd = app.add_subcommand("ns-run", "Run the pseudo-spectral solver");
    ns_cmd->add_option("config", config_path, "JSON config or manifest")->required();

    auto* ctrw_cmd = app.add_subcommand("ctrw-run", "Run the continuous-time random walk");
    ctrw_cmd->add_option("config", config_path, "JSON config or manifest")->required();

    std::string csv_path;
    double k_min = 0.0, k_max = 0.0, z_threshold = 3.0;
    auto* fit_cmd = app.add_subcommand("spectrum-fit", "Fit a spectrum CSV and compare with the prediction");
    fit_cmd->add_option("spectrum", csv_path, "CSV with header shell,k_center,energy")->required();
    fit_cmd->add_option("--k-min", k_min, "Lower edge of the fit window")->required();
    fit_cmd->add_option("--k-max", k_max, "Upper edge of the fit window")->required();
    fit_cmd->add_option("--beta", beta, "Space-fractional order in (0, 2]")->required();
    fit_cmd->add_option("--mu", mu, "Time-fractional order in [0, 1)")->required();
    fit_cmd->add_option("--z-threshold", z_threshold, "Pass threshold on |z|");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*predict_cmd) return cmd_predict(beta, mu, as_json);
        if (*ns_cmd) return cmd_ns_run(config_path, common);
        if (*ctrw_cmd) return cmd_ctrw_run(config_path, common);
        if (*fit_cmd) return cmd_spectrum_fit(csv_path, k_min, k_max, beta, mu, z_threshold);
    } catch (const ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& p : e.problems()) std::cerr << "  - " << p << '\n';
        return kExitConfig;
    } catch (const FitDomainError& e) {
        std::cerr << "fit error: " << e.what() << '\n';
        return kExitFitDomain;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const EstimatorValidityError& e) {
        std::cerr << "invalid estimator: " << e.what() << '\n';
        return kExitConfig;
    } catch (const StepSizeError& e) {
        std::cerr << "step size error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitConfig;
}
