#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "qwalk/commands.hpp"
#include "qwalk/config.hpp"
#include "qwalk/landscape.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qwalk_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path path = dir / "config.json";
    std::ofstream out(path);
    out << body;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string error_of(const fs::path& config_path) {
    try {
        load_config(config_path);
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("defaults describe the 18-step lossy balanced walk") {
    const RunConfig cfg = default_config();
    CHECK(cfg.steps == 18);
    CHECK(cfg.step_defaults.coin.omega == doctest::Approx(kPi / 2.0));
    CHECK(cfg.step_defaults.coin.gamma == 0.0);
    CHECK(cfg.step_defaults.transmission == doctest::Approx(0.98992).epsilon(1e-5));
    CHECK(cfg.bin_spacing_ps == 4.3);
    CHECK(cfg.grid().bin_count == 19);
    CHECK(cfg.schedule().size() == 18);
    CHECK(cfg.input.kind == InputSpec::Kind::single_bin);
    CHECK(cfg.pump_calibrated);
}

TEST_CASE("config keys resolve into internal units") {
    const fs::path dir = fresh_dir("parse_units");
    const fs::path path = write_config(dir, R"({
        "steps": 4,
        "seed": 9,
        "outputs": "results",
        "emit_plots": true,
        "mean_photon_number": 0.8,
        "grid": {"bin_spacing_ps": 2.0},
        "input": {"kind": "two_bin", "k": 2, "nu_deg": 180.0},
        "schedule": {"defaults": {"omega_deg": 45.0, "gamma_deg": 90.0, "loss_db": -0.5}},
        "gate": {"theta_deg": 45.0, "lambda_s_nm": 720.0, "z_steps": 101,
                 "pump_shape": "rectangular", "pump_fwhm_ps": 2.5, "pump_peak_intensity": 1e13},
        "trace": {"signal_fwhm_ps": 0.2, "background": 0.001, "scan_step_ps": 0.1,
                  "scan_start_ps": -1.0, "scan_stop_ps": 20.0},
        "drift": {"sigma_gamma_deg": 1.5, "samples": 10, "sample_interval_h": 2.0},
        "variance": {"max_steps": 12, "fit_min": 4, "fit_max": 10},
        "budget": {"components": [{"name": "mirror", "loss_db": -0.1, "count": 3}],
                   "crystal_steps": 4}
    })");
    const RunConfig cfg = load_config(path);
    CHECK(cfg.steps == 4);
    CHECK(cfg.seed == 9);
    CHECK(cfg.outputs == fs::path("results"));
    CHECK(cfg.emit_plots);
    CHECK(cfg.bin_spacing_ps == 2.0);
    CHECK(cfg.input.kind == InputSpec::Kind::two_bin);
    CHECK(cfg.input.k == 2);
    CHECK(cfg.input.nu == doctest::Approx(kPi));
    CHECK(cfg.step_defaults.coin.omega == doctest::Approx(kPi / 4.0));
    CHECK(cfg.step_defaults.coin.gamma == doctest::Approx(kPi / 2.0));
    CHECK(cfg.step_defaults.transmission == doctest::Approx(std::pow(10.0, -0.05)).epsilon(1e-12));
    CHECK(cfg.gate.theta == doctest::Approx(kPi / 4.0));
    CHECK(cfg.gate.lambda_s == doctest::Approx(720e-9));
    CHECK(cfg.gate.z_steps == 101);
    CHECK(cfg.pump.shape == PulseShape::rectangular);
    CHECK(cfg.pump.fwhm_ps == 2.5);
    CHECK_FALSE(cfg.pump_calibrated);
    CHECK(cfg.pump.peak_intensity == 1e13);
    CHECK(cfg.trace.signal_fwhm_ps == 0.2);
    CHECK(cfg.trace.scan_start_ps.value() == -1.0);
    CHECK(cfg.drift.sigma_gamma_deg == 1.5);
    CHECK(cfg.drift.samples == 10);
    CHECK(cfg.variance.max_steps == 12);
    CHECK(cfg.budget.components.size() == 1);
    CHECK(cfg.budget.components[0].count == 3);
    CHECK(cfg.grid().bin_count == 4 + 2 + 1);
}

TEST_CASE("per-step schedule entries inherit the defaults") {
    const fs::path dir = fresh_dir("parse_schedule");
    const fs::path path = write_config(dir, R"({
        "schedule": {
            "defaults": {"omega_deg": 90.0, "loss_db": 0.0},
            "steps": [{}, {"gamma_deg": 90.0}, {"omega_deg": 0.0, "loss_db": -1.0}]
        }
    })");
    const RunConfig cfg = load_config(path);
    REQUIRE(cfg.schedule_steps.size() == 3);
    CHECK(cfg.steps == 3);
    CHECK(cfg.schedule_steps[0].coin.omega == doctest::Approx(kPi / 2.0));
    CHECK(cfg.schedule_steps[0].transmission == 1.0);
    CHECK(cfg.schedule_steps[1].coin.gamma == doctest::Approx(kPi / 2.0));
    CHECK(cfg.schedule_steps[2].coin.omega == 0.0);
    CHECK(cfg.schedule_steps[2].transmission == doctest::Approx(std::pow(10.0, -0.1)).epsilon(1e-12));
}

TEST_CASE("explicit input entries parse into amplitudes") {
    const fs::path dir = fresh_dir("parse_explicit");
    const fs::path path = write_config(dir, R"({
        "input": {"kind": "explicit", "entries": [
            {"pol": "H", "bin": 0, "re": 0.70710678118654752},
            {"pol": "V", "bin": 1, "im": -0.70710678118654752}
        ]}
    })");
    const RunConfig cfg = load_config(path);
    REQUIRE(cfg.input.kind == InputSpec::Kind::explicit_entries);
    REQUIRE(cfg.input.entries.size() == 2);
    CHECK(cfg.input.entries[1].pol == Polarization::V);
    CHECK(cfg.input.entries[1].bin == 1);
    CHECK(cfg.input.entries[1].amplitude.imag() == doctest::Approx(-1.0 / std::numbers::sqrt2));
}

TEST_CASE("parse failures name the offending key") {
    const fs::path dir = fresh_dir("parse_errors");
    CHECK(error_of(write_config(dir, R"({"stepz": 3})")).find("stepz") != std::string::npos);
    CHECK(error_of(write_config(dir, R"({"gate": {"z_steps": 4}})")).find("gate.z_steps") !=
          std::string::npos);
    CHECK(error_of(write_config(dir, R"({"steps": "three"})")).find("steps") != std::string::npos);
    CHECK(error_of(write_config(dir, R"({"input": {"kind": "sideways"}})")).find("input.kind") !=
          std::string::npos);
    CHECK(error_of(write_config(dir, R"({"schedule": {"defaults": {"loss_db": 0.3}}})"))
              .find("loss_db") != std::string::npos);
    CHECK(error_of(write_config(dir, R"({"steps": 3, "schedule": {"steps": [{}]}})"))
              .find("steps") != std::string::npos);
    CHECK(error_of(write_config(dir, "not json")).find("valid JSON") != std::string::npos);
    CHECK(error_of(dir / "missing.json").find("cannot open") != std::string::npos);
}

TEST_CASE("output directory precedence is flag, then environment, then config") {
    const fs::path dir = fresh_dir("precedence");
    const fs::path path = write_config(dir, R"({"outputs": "from_config"})");

    CliOptions options;
    options.command = "walk";
    options.config_path = path.string();
    CHECK(resolve_config(options).outputs == fs::path("from_config"));

    setenv("TIMEBIN_QWALK_OUT", "from_env", 1);
    CHECK(resolve_config(options).outputs == fs::path("from_env"));

    options.out_dir = "from_flag";
    CHECK(resolve_config(options).outputs == fs::path("from_flag"));
    unsetenv("TIMEBIN_QWALK_OUT");
}

TEST_CASE("steps override trims or pads an explicit schedule") {
    const fs::path dir = fresh_dir("steps_override");
    const fs::path path = write_config(dir, R"({
        "schedule": {"steps": [{"omega_deg": 10.0}, {"omega_deg": 20.0}, {"omega_deg": 30.0}]}
    })");
    CliOptions options;
    options.command = "walk";
    options.config_path = path.string();
    options.steps = 2;
    RunConfig cfg = resolve_config(options);
    CHECK(cfg.schedule().size() == 2);
    CHECK(cfg.schedule().steps[1].coin.omega == doctest::Approx(20.0 * kPi / 180.0));

    options.steps = 5;
    cfg = resolve_config(options);
    CHECK(cfg.schedule().size() == 5);
    CHECK(cfg.schedule().steps[4].coin.omega == doctest::Approx(kPi / 2.0));
}

TEST_CASE("a zero-step walk records only the input row") {
    RunConfig cfg = default_config();
    cfg.steps = 0;
    cfg.outputs = fresh_dir("walk_zero");
    cmd_walk(cfg);
    CHECK(slurp(cfg.outputs / "evolution.csv") == "step,bin,polarization,probability\n0,0,H,1\n");
    CHECK(slurp(cfg.outputs / "fidelity.csv") == "step,fidelity\n0,1\n");
}

TEST_CASE("the default walk stays on the oracle at every step") {
    RunConfig cfg = default_config();
    cfg.outputs = fresh_dir("walk_default");
    cmd_walk(cfg);

    std::ifstream fid(cfg.outputs / "fidelity.csv");
    std::string line;
    std::getline(fid, line);
    REQUIRE(line == "step,fidelity");
    std::size_t rows = 0;
    while (std::getline(fid, line)) {
        const double value = std::stod(line.substr(line.find(',') + 1));
        CHECK(std::abs(value - 1.0) < 1e-10);
        ++rows;
    }
    CHECK(rows == 19);

    std::ifstream evo(cfg.outputs / "evolution.csv");
    std::getline(evo, line);
    std::size_t last_step = 0, row_count = 0;
    while (std::getline(evo, line)) {
        last_step = static_cast<std::size_t>(std::stoul(line.substr(0, line.find(','))));
        ++row_count;
    }
    CHECK(last_step == 18);
    CHECK(row_count > 100);  // nonzero slots only, all 19 steps present
}

TEST_CASE("two-step lossless walk matches the golden file") {
    CliOptions options;
    options.command = "walk";
    options.config_path = (fs::path(QWALK_CONFIG_DIR) / "walk_2step_lossless.json").string();
    RunConfig cfg = resolve_config(options);
    cfg.outputs = fresh_dir("walk_golden2");
    cmd_walk(cfg);
    CHECK(slurp(cfg.outputs / "evolution.csv") ==
          slurp(fs::path(QWALK_GOLDEN_DIR) / "evolution_2step.csv"));
}

TEST_CASE("default 18-step walk matches the golden file") {
    RunConfig cfg = default_config();
    cfg.outputs = fresh_dir("walk_golden18");
    cmd_walk(cfg);
    CHECK(slurp(cfg.outputs / "evolution.csv") ==
          slurp(fs::path(QWALK_GOLDEN_DIR) / "evolution_18step.csv"));
}

TEST_CASE("trace command round-trips and reruns byte-identically") {
    RunConfig cfg = default_config();
    cfg.steps = 2;
    cfg.step_defaults.transmission = 1.0;
    cfg.trace.scan_stop_ps = 12.0;
    cfg.outputs = fresh_dir("trace_a");
    cmd_trace(cfg);
    const std::string trace_h = slurp(cfg.outputs / "trace_H.csv");
    const std::string readout = slurp(cfg.outputs / "readout.csv");
    CHECK(trace_h.substr(0, 18) == "delay_ps,intensity");

    cfg.outputs = fresh_dir("trace_b");
    cmd_trace(cfg);
    CHECK(slurp(cfg.outputs / "trace_H.csv") == trace_h);
    CHECK(slurp(cfg.outputs / "readout.csv") == readout);
}

TEST_CASE("variance command reports the classical quarter rule") {
    RunConfig cfg = default_config();
    cfg.variance.max_steps = 8;
    cfg.variance.fit_min = 3;
    cfg.variance.fit_max = 8;
    cfg.outputs = fresh_dir("variance_cmd");
    cmd_variance(cfg);

    std::ifstream in(cfg.outputs / "variance.csv");
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "step,variance_quantum,variance_classical");
    std::size_t n = 0;
    while (std::getline(in, line)) {
        const auto second_comma = line.find(',', line.find(',') + 1);
        CHECK(std::stod(line.substr(second_comma + 1)) ==
              doctest::Approx(static_cast<double>(n) / 4.0).epsilon(1e-12));
        ++n;
    }
    CHECK(n == 9);
    CHECK(slurp(cfg.outputs / "exponent.txt").find("quantum exponent") != std::string::npos);
}

TEST_CASE("stability command is deterministic for a fixed seed") {
    RunConfig cfg = default_config();
    cfg.steps = 6;
    cfg.drift.samples = 8;
    cfg.seed = 5;
    cfg.outputs = fresh_dir("stab_a");
    cmd_stability(cfg);
    const std::string first = slurp(cfg.outputs / "stability.csv");
    CHECK(first.substr(0, 26) == "time_h,fidelity_H,fidelity");

    cfg.outputs = fresh_dir("stab_b");
    cmd_stability(cfg);
    CHECK(slurp(cfg.outputs / "stability.csv") == first);

    cfg.seed = 6;
    cfg.outputs = fresh_dir("stab_c");
    cmd_stability(cfg);
    CHECK(slurp(cfg.outputs / "stability.csv") != first);
}

TEST_CASE("budget report lists components and the dB total") {
    RunConfig cfg = default_config();
    std::ostringstream out;
    cmd_budget(cfg, out);
    const std::string report = out.str();
    CHECK(report.find("crystal passes") != std::string::npos);
    CHECK(report.find("total: -8.201 dB") != std::string::npos);
    CHECK(report.find("linear efficiency: 15.13") != std::string::npos);

    RunConfig empty = cfg;
    empty.budget.components = {{"lossless", 0.0, 1}};
    std::ostringstream out2;
    cmd_budget(empty, out2);
    CHECK(out2.str().find("total: 0 dB") != std::string::npos);
    CHECK(out2.str().find("linear efficiency: 100%") != std::string::npos);
}

TEST_CASE("bundled landscape table parses into typed rows") {
    const auto entries = landscape_entries();
    CHECK(entries.size() == 31);
    bool found = false;
    for (const LandscapeEntry& e : entries) {
        if (e.reference != "this_work") continue;
        found = true;
        CHECK(e.steps == 18);
        CHECK(e.loss_db_per_step.value() == doctest::Approx(-0.044));
        CHECK(e.fidelity.value() == doctest::Approx(0.98));
        CHECK(e.photons == 1);
    }
    CHECK(found);
    CHECK(parse_landscape(landscape_csv()).size() == entries.size());
    CHECK_THROWS_AS(parse_landscape("wrong,header\n1,2\n"), std::runtime_error);
}

TEST_CASE("the CLI front end runs commands and rejects bad invocations") {
    const fs::path out_dir = fresh_dir("cli_front");
    const std::string out_str = out_dir.string();
    const char* walk_argv[] = {"timebin-qwalk", "walk", "--steps", "2", "--out", out_str.c_str()};
    CHECK(run_cli(6, walk_argv) == 0);
    CHECK(fs::exists(out_dir / "evolution.csv"));

    const char* bad_cmd[] = {"timebin-qwalk", "dance"};
    CHECK(run_cli(2, bad_cmd) != 0);

    const fs::path cfg_dir = fresh_dir("cli_badcfg");
    const fs::path bad_cfg = write_config(cfg_dir, R"({"stepz": 1})");
    const std::string bad_cfg_str = bad_cfg.string();
    const char* bad_argv[] = {"timebin-qwalk", "walk", "--config", bad_cfg_str.c_str()};
    CHECK(run_cli(4, bad_argv) == 1);
    const char* no_cmd[] = {"timebin-qwalk"};
    CHECK(run_cli(1, no_cmd) != 0);
}

TEST_CASE("emit_plots writes the svg charts") {
    RunConfig cfg = default_config();
    cfg.steps = 2;
    cfg.emit_plots = true;
    cfg.outputs = fresh_dir("plots");
    cmd_walk(cfg);
    CHECK(fs::exists(cfg.outputs / "step_00.svg"));
    CHECK(fs::exists(cfg.outputs / "step_02.svg"));
    const std::string svg = slurp(cfg.outputs / "step_02.svg");
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    std::ostringstream sink;
    cfg.budget.crystal_steps = 18;
    cmd_budget(cfg, sink);
    CHECK(fs::exists(cfg.outputs / "landscape.svg"));
}
