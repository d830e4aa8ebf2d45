#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/kerr.hpp"
#include "qwalk/operators.hpp"
#include "qwalk/prepare.hpp"

namespace qwalk {

// Gate-scan settings for the trace command. Scan bounds default to a window
// padded 2 ps past the occupied bins.
struct TraceSection {
    double signal_fwhm_ps = 0.3;
    double background = 0.0;
    double scan_step_ps = 0.05;
    std::optional<double> scan_start_ps;
    std::optional<double> scan_stop_ps;
};

struct DriftSection {
    double sigma_gamma_deg = 0.9;
    double sigma_omega_deg = 0.0;
    std::size_t samples = 50;
    double sample_interval_h = 1.0;
    bool calibrate = false;
    double calibrate_target = 0.97;
    std::size_t calibrate_trials = 64;
};

struct VarianceSection {
    std::size_t max_steps = 30;
    std::size_t fit_min = 5;
    std::size_t fit_max = 18;
};

// Empty components means the built-in table with crystal_steps crystal
// passes; an explicit list is taken verbatim.
struct BudgetSection {
    std::vector<LossComponent> components;
    int crystal_steps = 18;
};

// Everything a command needs, resolved to internal units (radians, meters,
// picoseconds). Config files speak degrees and nanometers where noted.
struct RunConfig {
    InputSpec input;
    std::size_t steps = 18;
    StepConfig step_defaults;
    // Per-step overrides; empty means `steps` copies of step_defaults.
    std::vector<StepConfig> schedule_steps;
    double bin_spacing_ps = 4.3;

    GateConfig gate;
    PumpPulse pump;
    // Unset peak intensity: calibrate so the peak phase shift reaches pi.
    bool pump_calibrated = true;

    TraceSection trace;
    DriftSection drift;
    VarianceSection variance;
    BudgetSection budget;

    std::filesystem::path outputs = "out";
    bool emit_plots = false;
    std::uint64_t seed = 1;
    // Source brightness bookkeeping; carried through, never used in math.
    double mean_photon_number = 0.8;

    StepSchedule schedule() const;
    BinGrid grid() const;
};

RunConfig default_config();

// Parses a JSON config. Unknown or ill-typed keys fail with a message naming
// the key.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace qwalk
