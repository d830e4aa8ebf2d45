#include "qwalk/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "qwalk/analysis.hpp"
#include "qwalk/csv.hpp"
#include "qwalk/kerr.hpp"
#include "qwalk/landscape.hpp"
#include "qwalk/operators.hpp"
#include "qwalk/svg.hpp"

namespace qwalk {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Commands assemble every output first and only then touch the disk, so a
// failure in the numerics leaves no partial files behind.
using OutputSet = std::map<std::filesystem::path, std::string>;

void write_outputs(const RunConfig& cfg, const OutputSet& outputs) {
    for (const auto& [name, content] : outputs) write_file(cfg.outputs / name, content);
}

std::string step_plot_name(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "step_%02zu.svg", step);
    return buf;
}

StepSchedule schedule_of_length(const RunConfig& cfg, std::size_t n) {
    StepSchedule schedule = cfg.schedule();
    if (schedule.size() > n) schedule.steps.resize(n);
    while (schedule.size() < n) schedule.steps.push_back(cfg.step_defaults);
    return schedule;
}

svg::BarGroup bar_group(const Distribution& dist, Polarization pol, const std::string& color) {
    svg::BarGroup group;
    group.label = to_string(pol);
    group.color = color;
    group.values.resize(dist.bin_count());
    for (std::size_t b = 0; b < dist.bin_count(); ++b) group.values[b] = dist.probability(b, pol);
    return group;
}

std::string distribution_plot(const Distribution& dist, const std::string& title) {
    svg::ChartSpec spec;
    spec.title = title;
    spec.x.label = "delay [ps]";
    spec.y.label = "probability";
    std::vector<double> positions(dist.bin_count());
    for (std::size_t b = 0; b < dist.bin_count(); ++b) positions[b] = dist.grid().delay_ps(b);
    return svg::bar_chart(spec, positions,
                          {bar_group(dist, Polarization::H, "#1f77b4"),
                           bar_group(dist, Polarization::V, "#d62728")});
}

PumpPulse resolve_pump(const RunConfig& cfg) {
    if (cfg.pump_calibrated) return calibrate_pump(cfg.gate, cfg.pump);
    return cfg.pump;
}

std::vector<double> scan_grid(const RunConfig& cfg, const BinGrid& grid) {
    const double start = cfg.trace.scan_start_ps.value_or(-2.0);
    const double stop =
        cfg.trace.scan_stop_ps.value_or(grid.delay_ps(grid.bin_count - 1) + 2.0);
    if (!(start < stop)) throw std::runtime_error("trace: scan window is empty");
    std::vector<double> delays;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / cfg.trace.scan_step_ps));
    delays.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i)
        delays.push_back(start + static_cast<double>(i) * cfg.trace.scan_step_ps);
    return delays;
}

}  // namespace

RunConfig resolve_config(const CliOptions& options) {
    RunConfig cfg = options.config_path ? load_config(*options.config_path) : default_config();
    if (options.steps) {
        cfg.steps = *options.steps;
        if (!cfg.schedule_steps.empty()) {
            // An explicit per-step list is trimmed or padded with the
            // defaults so --steps still means "walk this many steps".
            if (cfg.schedule_steps.size() > cfg.steps) cfg.schedule_steps.resize(cfg.steps);
            while (cfg.schedule_steps.size() < cfg.steps) cfg.schedule_steps.push_back(cfg.step_defaults);
        }
    }
    if (options.seed) cfg.seed = *options.seed;
    if (const char* env = std::getenv("TIMEBIN_QWALK_OUT"); env && *env) cfg.outputs = env;
    if (options.out_dir) cfg.outputs = *options.out_dir;
    return cfg;
}

void cmd_walk(const RunConfig& cfg) {
    const StepSchedule schedule = cfg.schedule();
    const BinGrid grid = cfg.grid();
    const WalkerState input = prepare(cfg.input, grid);
    const std::vector<WalkerState> snapshots = evolve(input, schedule);

    std::string evolution = "step,bin,polarization,probability\n";
    for (std::size_t n = 0; n < snapshots.size(); ++n) {
        const Distribution dist = probabilities(snapshots[n]);
        for (std::size_t b = 0; b < dist.bin_count(); ++b) {
            for (Polarization pol : {Polarization::H, Polarization::V}) {
                const double p = dist.probability(b, pol);
                if (p == 0.0) continue;
                evolution += std::to_string(n);
                evolution += ',';
                evolution += std::to_string(b);
                evolution += ',';
                evolution += to_string(pol);
                evolution += ',';
                evolution += format_double(p);
                evolution += '\n';
            }
        }
    }

    std::string fidelity_rows = "step,fidelity\n";
    for (std::size_t n = 0; n < snapshots.size(); ++n) {
        StepSchedule prefix;
        prefix.steps.assign(schedule.steps.begin(), schedule.steps.begin() + static_cast<long>(n));
        const WalkMatrix oracle = dense_walk_oracle(prefix, grid);
        const Distribution direct = probabilities(snapshots[n]).normalized();
        const Distribution cross = probabilities(oracle.apply(input)).normalized();
        fidelity_rows += std::to_string(n);
        fidelity_rows += ',';
        fidelity_rows += format_double(fidelity(direct, cross, grid.bin_count - 1));
        fidelity_rows += '\n';
    }

    OutputSet outputs;
    outputs["evolution.csv"] = evolution;
    outputs["fidelity.csv"] = fidelity_rows;
    if (cfg.emit_plots) {
        for (std::size_t n = 0; n < snapshots.size(); ++n)
            outputs[step_plot_name(n)] = distribution_plot(
                probabilities(snapshots[n]), "walk distribution after " + std::to_string(n) + " steps");
    }
    write_outputs(cfg, outputs);
}

void cmd_trace(const RunConfig& cfg) {
    const BinGrid grid = cfg.grid();
    const WalkerState input = prepare(cfg.input, grid);
    const Distribution dist = probabilities(evolve(input, cfg.schedule()).back());
    const PumpPulse pump = resolve_pump(cfg);
    const std::vector<double> delays = scan_grid(cfg, grid);

    const TemporalTrace trace_h =
        synthesize_trace(select_polarization(dist, Polarization::H), cfg.gate, pump,
                         cfg.trace.signal_fwhm_ps, delays, cfg.trace.background);
    const TemporalTrace trace_v =
        synthesize_trace(select_polarization(dist, Polarization::V), cfg.gate, pump,
                         cfg.trace.signal_fwhm_ps, delays, cfg.trace.background);

    // Peak heights read back off the traces, renormalized over both
    // polarizations to form the readout distribution.
    const Distribution raw_h = discretize_trace(trace_h, grid, Polarization::H);
    const Distribution raw_v = discretize_trace(trace_v, grid, Polarization::V);
    std::vector<double> combined(2 * grid.bin_count, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < combined.size(); ++i) {
        combined[i] = raw_h.probabilities()[i] + raw_v.probabilities()[i];
        total += combined[i];
    }
    if (total <= 0.0) throw std::runtime_error("trace: readout has zero total intensity");
    for (double& p : combined) p /= total;
    const Distribution readout(grid, std::move(combined));

    OutputSet outputs;
    outputs["trace_H.csv"] = to_csv(trace_h);
    outputs["trace_V.csv"] = to_csv(trace_v);
    outputs["readout.csv"] = to_csv(readout);
    if (cfg.emit_plots) {
        svg::ChartSpec spec;
        spec.title = "gated readout scan";
        spec.x.label = "gate delay [ps]";
        spec.y.label = "gated intensity";
        svg::Series h{"H", "#1f77b4", {}, true, false};
        svg::Series v{"V", "#d62728", {}, true, false};
        for (std::size_t i = 0; i < trace_h.delays_ps.size(); ++i) {
            h.points.emplace_back(trace_h.delays_ps[i], trace_h.intensities[i]);
            v.points.emplace_back(trace_v.delays_ps[i], trace_v.intensities[i]);
        }
        outputs["trace.svg"] = svg::line_chart(spec, {h, v});
    }
    write_outputs(cfg, outputs);
}

void cmd_variance(const RunConfig& cfg) {
    const std::size_t max_steps = cfg.variance.max_steps;
    const StepSchedule schedule = schedule_of_length(cfg, max_steps);
    const BinGrid grid{cfg.bin_spacing_ps, max_steps + max_input_bin(cfg.input) + 1};
    const std::vector<WalkerState> snapshots = evolve(prepare(cfg.input, grid), schedule);

    std::vector<VariancePoint> quantum, classical;
    for (std::size_t n = 0; n <= max_steps; ++n) {
        quantum.push_back({n, variance(probabilities(snapshots[n]))});
        classical.push_back({n, variance(classical_rw_distribution(n, cfg.bin_spacing_ps))});
    }

    std::ostringstream report;
    report << "log-log variance growth over steps " << cfg.variance.fit_min << ".."
           << cfg.variance.fit_max << "\n";
    report << "quantum exponent: "
           << format_double(growth_exponent(quantum, cfg.variance.fit_min, cfg.variance.fit_max))
           << "\n";
    report << "classical exponent: "
           << format_double(growth_exponent(classical, cfg.variance.fit_min, cfg.variance.fit_max))
           << "\n";

    OutputSet outputs;
    outputs["variance.csv"] = variance_csv(quantum, classical);
    outputs["exponent.txt"] = report.str();
    if (cfg.emit_plots) {
        svg::ChartSpec spec;
        spec.title = "variance growth";
        spec.x.label = "step";
        spec.y.label = "variance [bins^2]";
        spec.x.log = true;
        spec.y.log = true;
        svg::Series q{"quantum", "#1f77b4", {}, true, true};
        svg::Series c{"classical", "#7f7f7f", {}, true, true};
        for (std::size_t n = 1; n <= max_steps; ++n) {
            if (quantum[n].variance > 0.0)
                q.points.emplace_back(static_cast<double>(n), quantum[n].variance);
            c.points.emplace_back(static_cast<double>(n), classical[n].variance);
        }
        outputs["variance.svg"] = svg::line_chart(spec, {q, c});
    }
    write_outputs(cfg, outputs);
}

void cmd_stability(const RunConfig& cfg) {
    const StepSchedule schedule = cfg.schedule();
    DriftModel drift;
    drift.sigma_gamma = cfg.drift.sigma_gamma_deg * kDegToRad;
    drift.sigma_omega = cfg.drift.sigma_omega_deg * kDegToRad;
    drift.seed = cfg.seed;
    drift.samples = cfg.drift.samples;
    drift.sample_interval_h = cfg.drift.sample_interval_h;
    if (cfg.drift.calibrate) {
        drift.sigma_gamma = calibrate_drift_sigma(schedule, cfg.input, drift,
                                                  cfg.drift.calibrate_target,
                                                  cfg.drift.calibrate_trials);
        drift.sigma_omega = 0.0;
    }
    const std::vector<StabilitySample> samples = stability_run(schedule, cfg.input, drift);

    std::ostringstream note;
    note << "sigma_gamma [rad/sample]: " << format_double(drift.sigma_gamma) << "\n";
    note << "sigma_omega [rad/sample]: " << format_double(drift.sigma_omega) << "\n";
    if (cfg.drift.calibrate)
        note << "calibrated to mean endpoint fidelity " << format_double(cfg.drift.calibrate_target)
             << "\n";
    else
        note << "taken from config; calibration off\n";

    OutputSet outputs;
    outputs["stability.csv"] = stability_csv(samples);
    outputs["drift.txt"] = note.str();
    if (cfg.emit_plots) {
        svg::ChartSpec spec;
        spec.title = "fidelity under coin drift";
        spec.x.label = "time [h]";
        spec.y.label = "fidelity";
        svg::Series h{"H", "#1f77b4", {}, true, true};
        svg::Series v{"V", "#d62728", {}, true, true};
        for (const StabilitySample& s : samples) {
            h.points.emplace_back(s.time_h, s.fidelity_h);
            v.points.emplace_back(s.time_h, s.fidelity_v);
        }
        outputs["stability.svg"] = svg::line_chart(spec, {h, v});
    }
    write_outputs(cfg, outputs);
}

void cmd_budget(const RunConfig& cfg, std::ostream& out) {
    const std::vector<LossComponent> components =
        cfg.budget.components.empty() ? reference_loss_components(cfg.budget.crystal_steps)
                                      : cfg.budget.components;
    const LossBudget budget = loss_budget(components);

    std::size_t width = 0;
    for (const LossComponent& c : components) width = std::max(width, c.name.size());
    for (const LossComponent& c : components) {
        out << c.name << std::string(width - c.name.size(), ' ') << "  " << format_double(c.loss_db)
            << " dB";
        if (c.count != 1) out << " x " << c.count;
        out << "\n";
    }
    out << "total: " << format_double(budget.total_db) << " dB\n";
    out << "linear efficiency: " << format_double(budget.linear_efficiency * 100.0) << "%\n";

    if (!cfg.emit_plots) return;
    svg::ChartSpec spec;
    spec.title = "loss per step across published walks";
    spec.x.label = "number of steps";
    spec.y.label = "loss per step [dB]";
    spec.x.log = true;
    std::vector<svg::ScatterPoint> points;
    for (const LandscapeEntry& e : landscape_entries()) {
        if (!e.loss_db_per_step) continue;
        svg::ScatterPoint p;
        p.x = static_cast<double>(e.steps);
        p.y = *e.loss_db_per_step;
        p.shape = e.photons >= 2 ? "triangle" : "circle";
        // Color encodes fidelity from 0.75 up; unreported stays white.
        p.fill = e.fidelity ? svg::colormap((*e.fidelity - 0.75) / 0.25) : "white";
        p.highlight = e.reference == "this_work";
        points.push_back(p);
    }
    write_file(cfg.outputs / "landscape.svg", svg::scatter_chart(spec, points));
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Programmable time-bin quantum walk simulator"};
    app.require_subcommand(1);

    CliOptions options;
    const std::map<std::string, std::string> commands = {
        {"walk", "step-by-step evolution and oracle fidelities"},
        {"trace", "gated temporal readout of the final distribution"},
        {"variance", "quantum vs classical spreading"},
        {"stability", "fidelity series under slow coin drift"},
        {"budget", "loss budget report"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", options.config_path, "JSON config file");
        sub->add_option("--out", options.out_dir, "output directory");
        sub->add_option("--seed", options.seed, "RNG seed override");
        sub->add_option("--steps", options.steps, "step count override");
        sub->callback([&options, name = name] { options.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const RunConfig cfg = resolve_config(options);
        if (options.command == "walk")
            cmd_walk(cfg);
        else if (options.command == "trace")
            cmd_trace(cfg);
        else if (options.command == "variance")
            cmd_variance(cfg);
        else if (options.command == "stability")
            cmd_stability(cfg);
        else
            cmd_budget(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "timebin-qwalk: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace qwalk
