#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qwalk/config.hpp"

namespace qwalk {

// Parsed command line, before config resolution.
struct CliOptions {
    std::string command;
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps;
};

// Loads the config (or defaults when none is given) and applies overrides.
// Output directory precedence: --out flag, then TIMEBIN_QWALK_OUT, then the
// config value.
RunConfig resolve_config(const CliOptions& options);

// Step-by-step walk: evolution.csv, fidelity.csv, per-step bar charts.
void cmd_walk(const RunConfig& cfg);

// Gated readout: trace_H.csv, trace_V.csv, readout.csv, trace plot.
void cmd_trace(const RunConfig& cfg);

// Spreading: variance.csv, exponent.txt, variance plot.
void cmd_variance(const RunConfig& cfg);

// Coin drift: stability.csv, drift.txt, stability plot.
void cmd_stability(const RunConfig& cfg);

// Loss table report on `out`; landscape plot when plots are enabled.
void cmd_budget(const RunConfig& cfg, std::ostream& out);

// Full front end; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace qwalk
