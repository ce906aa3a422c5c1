#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fracturb/io.hpp"

using namespace fracturb;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

const fs::path& scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "fracturb_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CliResult run_cli(const std::string& args) {
    const auto err_file = scratch() / "stderr.txt";
    const std::string cmd = std::string(FRACTURB_CLI) + " " + args + " 2>" + err_file.string();
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = io::read_text_file(err_file);
    return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const auto p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

io::json read_manifest(const fs::path& dir) { return io::json::parse(io::read_text_file(dir / "manifest.json")); }

/// Manifest with the wall-clock fields removed.
io::json without_times(io::json m) {
    m.erase("started_at");
    m.erase("finished_at");
    return m;
}

const char* kSmallNs = R"({"grid": {"n": 32}, "nu": 0.01, "dt": 0.01, "t_end": 0.1, "seed": 5,
  "forcing": {"k_lo": 2, "k_hi": 4, "amplitude": 0.5, "seed": 2}, "snapshot_times": [0.05]})";
const char* kSmallCtrw = R"({"beta": 1.5, "mu": 0.3, "n_particles": 3000, "t_max": 100, "truncation": 100, "q": 0.5, "seed": 9})";

} // namespace

TEST(CliPredict, TableJsonAndExtrapolation) {
    auto r = run_cli("predict --beta 2 --mu 0");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("spectrum exponent   -1.6666666666666667"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("MSD exponent (eta)  1\n"), std::string::npos);
    r = run_cli("predict --beta 0.5 --mu 0 --json");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = io::json::parse(r.out);
    EXPECT_DOUBLE_EQ(j["spectrum_exponent"].get<double>(), -8.0 / 3.0);
    EXPECT_EQ(j["extrapolated"], false);
    r = run_cli("predict --beta 1.3 --mu 0.2");
    EXPECT_NE(r.out.find("extrapolated        yes"), std::string::npos);
}

TEST(CliExitCodes, UsageAndDomainErrors) {
    EXPECT_EQ(run_cli("predict --beta 3 --mu 0").exit_code, 2);
    EXPECT_EQ(run_cli("predict --beta 1").exit_code, 2);
    EXPECT_EQ(run_cli("").exit_code, 2);
    EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
    EXPECT_EQ(run_cli("ns-run /nonexistent/config.json").exit_code, 2);
    EXPECT_EQ(run_cli("--threads 0 predict --beta 2 --mu 0").exit_code, 2);
}

TEST(CliExitCodes, EmptyConfigPrintsDefaultsAndRefuses) {
    for (const char* text : {"", "{}\n"}) {
        const auto path = write_config("empty.json", text);
        auto r = run_cli("ns-run " + path.string() + " --output-dir " + (scratch() / "empty_out").string());
        EXPECT_EQ(r.exit_code, 2);
        EXPECT_NE(r.out.find("\"nu\""), std::string::npos) << r.out;
        EXPECT_NE(r.out.find("\"history_len\""), std::string::npos);
        r = run_cli("ctrw-run " + path.string());
        EXPECT_EQ(r.exit_code, 2);
        EXPECT_NE(r.out.find("\"n_particles\""), std::string::npos);
    }
    EXPECT_FALSE(fs::exists(scratch() / "empty_out"));
}

TEST(CliExitCodes, BadConfigListsEveryProblem) {
    const auto path = write_config("bad.json", R"({"nu": -1, "dt": 0, "colour": "red", "grid": {"n": 12}})");
    const auto r = run_cli("ns-run " + path.string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("unknown key \"colour\""), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("nu"), std::string::npos);
    EXPECT_NE(r.err.find("dt"), std::string::npos);
    EXPECT_NE(r.err.find("grid n"), std::string::npos);
}

TEST(CliExitCodes, NumericalFailureIsThree) {
    const auto path = write_config("blowup.json", R"({"grid": {"n": 16}, "dt": 0.1, "t_end": 5, "cfl": 1e300,
        "initial": {"energy": 1e30}})");
    const auto r = run_cli("ns-run " + path.string() + " --output-dir " + (scratch() / "blowup").string());
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.err.find("last good state"), std::string::npos) << r.err;
}

TEST(CliExitCodes, CflViolationIsAConfigurationError) {
    const auto path = write_config("cfl.json", R"({"grid": {"n": 64}, "dt": 1.0, "t_end": 5})");
    const auto r = run_cli("ns-run " + path.string() + " --output-dir " + (scratch() / "cfl").string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("reduce dt"), std::string::npos) << r.err;
}

TEST(CliNsRun, OutputsAndDeterminismAcrossThreads) {
    const auto cfg = write_config("ns.json", kSmallNs);
    const auto a = scratch() / "ns_a", b = scratch() / "ns_b";
    ASSERT_EQ(run_cli("ns-run " + cfg.string() + " --output-dir " + a.string() + " --threads 1").exit_code, 0);
    ASSERT_EQ(run_cli("--threads 4 ns-run " + cfg.string() + " --output-dir " + b.string()).exit_code, 0);
    for (const char* f : {"diagnostics.csv", "spectrum.csv", "spectrum_snapshot_0.csv"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(io::read_text_file(a / f), io::read_text_file(b / f)) << f;
    }
    const auto ma = read_manifest(a), mb = read_manifest(b);
    EXPECT_EQ(ma["outputs"], mb["outputs"]);
    EXPECT_EQ(without_times(ma).dump(), without_times(mb).dump());
    for (const auto& o : ma["outputs"])
        EXPECT_EQ(o["sha256"], io::sha256_hex(io::read_text_file(a / o["file"].get<std::string>())));
    const auto diag = io::read_text_file(a / "diagnostics.csv");
    EXPECT_EQ(diag.substr(0, diag.find('\n')), "step,time,energy,enstrophy,dissipation_rate");
    EXPECT_EQ(ma["command"], "ns-run");
    EXPECT_EQ(ma["seed"], 5);
}

TEST(CliNsRun, ManifestRerunReproducesDigests) {
    const auto cfg = write_config("ns_manifest.json", kSmallNs);
    const auto a = scratch() / "ns_m1", b = scratch() / "ns_m2";
    ASSERT_EQ(run_cli("ns-run " + cfg.string() + " --output-dir " + a.string()).exit_code, 0);
    ASSERT_EQ(run_cli("ns-run " + (a / "manifest.json").string() + " --output-dir " + b.string()).exit_code, 0);
    EXPECT_EQ(read_manifest(a)["outputs"], read_manifest(b)["outputs"]);
    EXPECT_EQ(read_manifest(a)["config"], read_manifest(b)["config"]);
    // A manifest from another command is rejected.
    EXPECT_EQ(run_cli("ctrw-run " + (a / "manifest.json").string()).exit_code, 2);
}

TEST(CliNsRun, SeedOverrideChangesOutputs) {
    const auto cfg = write_config("ns_seed.json", kSmallNs);
    const auto a = scratch() / "ns_s1", b = scratch() / "ns_s2";
    ASSERT_EQ(run_cli("ns-run " + cfg.string() + " --output-dir " + a.string()).exit_code, 0);
    ASSERT_EQ(run_cli("ns-run " + cfg.string() + " --seed 6 --output-dir " + b.string()).exit_code, 0);
    EXPECT_EQ(read_manifest(b)["seed"], 6);
    EXPECT_EQ(read_manifest(b)["config"]["seed"], 6);
    EXPECT_NE(read_manifest(a)["outputs"], read_manifest(b)["outputs"]);
}

TEST(CliCtrwRun, DeterministicAcrossThreadCounts) {
    const auto cfg = write_config("ctrw.json", kSmallCtrw);
    const auto a = scratch() / "ctrw_a", b = scratch() / "ctrw_b";
    const auto ra = run_cli("ctrw-run " + cfg.string() + " --threads 1 --output-dir " + a.string());
    const auto rb = run_cli("ctrw-run " + cfg.string() + " --threads 3 --output-dir " + b.string());
    ASSERT_EQ(ra.exit_code, 0) << ra.err;
    ASSERT_EQ(rb.exit_code, 0) << rb.err;
    EXPECT_EQ(io::read_text_file(a / "msd.csv"), io::read_text_file(b / "msd.csv"));
    EXPECT_EQ(without_times(read_manifest(a)).dump(), without_times(read_manifest(b)).dump());
    const auto msd = io::read_text_file(a / "msd.csv");
    EXPECT_EQ(msd.substr(0, msd.find('\n')), "time,width_sq,q_used");
    EXPECT_NE(ra.out.find("fitted eta"), std::string::npos);
}

TEST(CliCtrwRun, RichardsonHeaderCitesPredictions) {
    const auto cfg = write_config("rich.json", R"({"preset": "richardson", "n_particles": 500, "t_max": 10, "truncation": 1e6})");
    const auto r = run_cli("ctrw-run " + cfg.string() + " --output-dir " + (scratch() / "rich").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("eta 3 "), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("-23/9"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("preset richardson"), std::string::npos);
}

TEST(CliCtrwRun, EstimatorValidityIsAConfigurationError) {
    // Untruncated jumps are rejected before any estimator runs.
    const auto cfg = write_config("ctrw_bad.json", R"({"beta": 1.5, "truncation": null, "n_particles": 10})");
    const auto r = run_cli("ctrw-run " + cfg.string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("truncation"), std::string::npos) << r.err;
}

TEST(CliSpectrumFit, ReportAndFitDomainError) {
    std::string csv = "shell,k_center,energy\n0,0,0\n";
    for (int s = 1; s <= 20; ++s) csv += std::to_string(s) + "," + std::to_string(s) + "," + io::format_number(std::pow(s, -5.0 / 3.0)) + "\n";
    const auto path = write_config("spectrum.csv", csv);
    auto r = run_cli("spectrum-fit " + path.string() + " --k-min 2 --k-max 16 --beta 2 --mu 0");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("result             PASS"), std::string::npos) << r.out;
    r = run_cli("spectrum-fit " + path.string() + " --k-min 2 --k-max 16 --beta 0.5 --mu 0");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("result             FAIL"), std::string::npos) << r.out;
    r = run_cli("spectrum-fit " + path.string() + " --k-min 2 --k-max 4 --beta 2 --mu 0");
    EXPECT_EQ(r.exit_code, 4);
    r = run_cli("spectrum-fit " + path.string() + " --k-min 0 --k-max 8 --beta 2 --mu 0");
    EXPECT_EQ(r.exit_code, 4);
}

TEST(CliConfigs, ShippedConfigsParse) {
    for (const auto& entry : fs::directory_iterator(FRACTURB_CONFIG_DIR)) {
        const auto name = entry.path().filename().string();
        const auto doc = io::parse_config_text(io::read_text_file(entry.path()), name.rfind("ns_", 0) == 0 ? "ns-run" : "ctrw-run");
        ASSERT_FALSE(doc.empty) << name;
        if (name.rfind("ns_", 0) == 0) EXPECT_NO_THROW(io::ns_config_from_json(doc.body)) << name;
        else EXPECT_NO_THROW(io::ctrw_config_from_json(doc.body)) << name;
    }
}
