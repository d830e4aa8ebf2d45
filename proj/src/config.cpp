#include "qwalk/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace qwalk {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

[[noreturn]] void bad_key(const std::string& path, const std::string& why) {
    throw std::runtime_error("config: key '" + path + "' " + why);
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) bad_key(path, "must be an object");
}

// Catches typos early: every object must consist solely of handled keys.
void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& known) {
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) bad_key(path.empty() ? key : path + "." + key, "is not a recognized key");
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? key : path + "." + key;
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) bad_key(join(path, key), "must be a number");
    return v.get<double>();
}

std::size_t get_count(const json& obj, const std::string& path, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        bad_key(join(path, key), "must be a nonnegative integer");
    return static_cast<std::size_t>(v.get<long long>());
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) bad_key(join(path, key), "must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) bad_key(join(path, key), "must be a string");
    return v.get<std::string>();
}

double transmission_from_db(double loss_db, const std::string& path) {
    if (!std::isfinite(loss_db) || loss_db > 0.0) bad_key(path, "must be a nonpositive dB value");
    return std::pow(10.0, loss_db / 10.0);
}

StepConfig parse_step(const json& j, const std::string& path, const StepConfig& defaults) {
    require_object(j, path);
    reject_unknown(j, path, {"omega_deg", "gamma_deg", "loss_db", "shift_enabled"});
    StepConfig step = defaults;
    step.coin.omega = get_number(j, path, "omega_deg", step.coin.omega / kDegToRad) * kDegToRad;
    step.coin.gamma = get_number(j, path, "gamma_deg", step.coin.gamma / kDegToRad) * kDegToRad;
    if (j.contains("loss_db"))
        step.transmission = transmission_from_db(get_number(j, path, "loss_db", 0.0), join(path, "loss_db"));
    step.shift_enabled = get_bool(j, path, "shift_enabled", step.shift_enabled);
    return step;
}

void parse_input(const json& j, const std::string& path, RunConfig& cfg) {
    require_object(j, path);
    reject_unknown(j, path,
                   {"kind", "alpha_re", "alpha_im", "beta_re", "beta_im", "k", "nu_deg", "entries"});
    const std::string kind = get_string(j, path, "kind", "single_bin");
    if (kind == "single_bin") {
        cfg.input = InputSpec::single_bin(
            {get_number(j, path, "alpha_re", 1.0), get_number(j, path, "alpha_im", 0.0)},
            {get_number(j, path, "beta_re", 0.0), get_number(j, path, "beta_im", 0.0)});
    } else if (kind == "two_bin") {
        cfg.input = InputSpec::two_bin(get_count(j, path, "k", 1),
                                       get_number(j, path, "nu_deg", 0.0) * kDegToRad);
    } else if (kind == "explicit") {
        if (!j.contains("entries") || !j.at("entries").is_array())
            bad_key(join(path, "entries"), "must be an array of amplitude entries");
        std::vector<AmplitudeEntry> entries;
        std::size_t i = 0;
        for (const json& e : j.at("entries")) {
            const std::string entry_path = join(path, "entries") + "[" + std::to_string(i++) + "]";
            require_object(e, entry_path);
            reject_unknown(e, entry_path, {"pol", "bin", "re", "im"});
            const std::string pol = get_string(e, entry_path, "pol", "H");
            if (pol != "H" && pol != "V") bad_key(entry_path + ".pol", "must be \"H\" or \"V\"");
            entries.push_back({pol == "H" ? Polarization::H : Polarization::V,
                               get_count(e, entry_path, "bin", 0),
                               {get_number(e, entry_path, "re", 0.0),
                                get_number(e, entry_path, "im", 0.0)}});
        }
        cfg.input = InputSpec::explicit_state(std::move(entries));
    } else {
        bad_key(join(path, "kind"), "must be \"single_bin\", \"two_bin\", or \"explicit\"");
    }
}

void parse_schedule(const json& j, const std::string& path, RunConfig& cfg, bool steps_given) {
    require_object(j, path);
    reject_unknown(j, path, {"defaults", "steps"});
    if (j.contains("defaults"))
        cfg.step_defaults = parse_step(j.at("defaults"), join(path, "defaults"), cfg.step_defaults);
    if (j.contains("steps")) {
        if (steps_given) bad_key("steps", "conflicts with an explicit schedule.steps list");
        const json& list = j.at("steps");
        if (!list.is_array()) bad_key(join(path, "steps"), "must be an array");
        cfg.schedule_steps.clear();
        std::size_t i = 0;
        for (const json& s : list)
            cfg.schedule_steps.push_back(
                parse_step(s, join(path, "steps") + "[" + std::to_string(i++) + "]", cfg.step_defaults));
        cfg.steps = cfg.schedule_steps.size();
    }
}

void parse_gate(const json& j, const std::string& path, RunConfig& cfg) {
    require_object(j, path);
    reject_unknown(j, path,
                   {"theta_deg", "n2", "lambda_s_nm", "length_m", "walkoff_ps_per_m", "z_steps",
                    "pump_shape", "pump_fwhm_ps", "pump_peak_intensity"});
    cfg.gate.theta = get_number(j, path, "theta_deg", cfg.gate.theta / kDegToRad) * kDegToRad;
    cfg.gate.n2 = get_number(j, path, "n2", cfg.gate.n2);
    cfg.gate.lambda_s = get_number(j, path, "lambda_s_nm", cfg.gate.lambda_s * 1e9) * 1e-9;
    cfg.gate.fiber_length = get_number(j, path, "length_m", cfg.gate.fiber_length);
    cfg.gate.walkoff_ps_per_m = get_number(j, path, "walkoff_ps_per_m", cfg.gate.walkoff_ps_per_m);
    if (!(cfg.gate.n2 > 0.0)) bad_key(join(path, "n2"), "must be positive");
    if (!(cfg.gate.lambda_s > 0.0)) bad_key(join(path, "lambda_s_nm"), "must be positive");
    if (!(cfg.gate.fiber_length > 0.0)) bad_key(join(path, "length_m"), "must be positive");
    const std::size_t z = get_count(j, path, "z_steps", static_cast<std::size_t>(cfg.gate.z_steps));
    if (z < 3 || z % 2 == 0) bad_key(join(path, "z_steps"), "must be odd and at least 3");
    cfg.gate.z_steps = static_cast<int>(z);
    const std::string shape = get_string(j, path, "pump_shape",
                                         cfg.pump.shape == PulseShape::gaussian ? "gaussian"
                                                                                : "rectangular");
    if (shape == "gaussian")
        cfg.pump.shape = PulseShape::gaussian;
    else if (shape == "rectangular")
        cfg.pump.shape = PulseShape::rectangular;
    else
        bad_key(join(path, "pump_shape"), "must be \"gaussian\" or \"rectangular\"");
    cfg.pump.fwhm_ps = get_number(j, path, "pump_fwhm_ps", cfg.pump.fwhm_ps);
    if (!(cfg.pump.fwhm_ps > 0.0)) bad_key(join(path, "pump_fwhm_ps"), "must be positive");
    if (j.contains("pump_peak_intensity")) {
        cfg.pump.peak_intensity = get_number(j, path, "pump_peak_intensity", 0.0);
        if (!(cfg.pump.peak_intensity >= 0.0))
            bad_key(join(path, "pump_peak_intensity"), "must be nonnegative");
        cfg.pump_calibrated = false;
    }
}

void parse_trace(const json& j, const std::string& path, TraceSection& trace) {
    require_object(j, path);
    reject_unknown(j, path,
                   {"signal_fwhm_ps", "background", "scan_step_ps", "scan_start_ps", "scan_stop_ps"});
    trace.signal_fwhm_ps = get_number(j, path, "signal_fwhm_ps", trace.signal_fwhm_ps);
    trace.background = get_number(j, path, "background", trace.background);
    trace.scan_step_ps = get_number(j, path, "scan_step_ps", trace.scan_step_ps);
    if (!(trace.scan_step_ps > 0.0)) bad_key(join(path, "scan_step_ps"), "must be positive");
    if (j.contains("scan_start_ps")) trace.scan_start_ps = get_number(j, path, "scan_start_ps", 0.0);
    if (j.contains("scan_stop_ps")) trace.scan_stop_ps = get_number(j, path, "scan_stop_ps", 0.0);
}

void parse_drift(const json& j, const std::string& path, DriftSection& drift) {
    require_object(j, path);
    reject_unknown(j, path,
                   {"sigma_gamma_deg", "sigma_omega_deg", "samples", "sample_interval_h", "calibrate",
                    "calibrate_target", "calibrate_trials"});
    drift.sigma_gamma_deg = get_number(j, path, "sigma_gamma_deg", drift.sigma_gamma_deg);
    drift.sigma_omega_deg = get_number(j, path, "sigma_omega_deg", drift.sigma_omega_deg);
    if (drift.sigma_gamma_deg < 0.0) bad_key(join(path, "sigma_gamma_deg"), "must be nonnegative");
    if (drift.sigma_omega_deg < 0.0) bad_key(join(path, "sigma_omega_deg"), "must be nonnegative");
    drift.samples = get_count(j, path, "samples", drift.samples);
    if (drift.samples == 0) bad_key(join(path, "samples"), "must be at least 1");
    drift.sample_interval_h = get_number(j, path, "sample_interval_h", drift.sample_interval_h);
    if (!(drift.sample_interval_h > 0.0)) bad_key(join(path, "sample_interval_h"), "must be positive");
    drift.calibrate = get_bool(j, path, "calibrate", drift.calibrate);
    drift.calibrate_target = get_number(j, path, "calibrate_target", drift.calibrate_target);
    if (!(drift.calibrate_target > 0.0 && drift.calibrate_target < 1.0))
        bad_key(join(path, "calibrate_target"), "must lie strictly between 0 and 1");
    drift.calibrate_trials = get_count(j, path, "calibrate_trials", drift.calibrate_trials);
    if (drift.calibrate_trials == 0) bad_key(join(path, "calibrate_trials"), "must be at least 1");
}

void parse_variance(const json& j, const std::string& path, VarianceSection& variance) {
    require_object(j, path);
    reject_unknown(j, path, {"max_steps", "fit_min", "fit_max"});
    variance.max_steps = get_count(j, path, "max_steps", variance.max_steps);
    if (variance.max_steps == 0) bad_key(join(path, "max_steps"), "must be at least 1");
    variance.fit_min = get_count(j, path, "fit_min", variance.fit_min);
    variance.fit_max = get_count(j, path, "fit_max", variance.fit_max);
    if (variance.fit_min > variance.fit_max) bad_key(join(path, "fit_min"), "must not exceed fit_max");
    if (variance.fit_max > variance.max_steps) bad_key(join(path, "fit_max"), "must not exceed max_steps");
}

void parse_budget(const json& j, const std::string& path, BudgetSection& budget) {
    require_object(j, path);
    reject_unknown(j, path, {"components", "crystal_steps"});
    if (j.contains("components")) {
        const json& list = j.at("components");
        if (!list.is_array()) bad_key(join(path, "components"), "must be an array");
        budget.components.clear();
        std::size_t i = 0;
        for (const json& c : list) {
            const std::string comp_path = join(path, "components") + "[" + std::to_string(i++) + "]";
            require_object(c, comp_path);
            reject_unknown(c, comp_path, {"name", "loss_db", "count"});
            LossComponent component;
            component.name = get_string(c, comp_path, "name", "");
            if (component.name.empty()) bad_key(comp_path + ".name", "must be a nonempty string");
            if (!c.contains("loss_db")) bad_key(comp_path + ".loss_db", "is required");
            component.loss_db = get_number(c, comp_path, "loss_db", 0.0);
            component.count = static_cast<int>(get_count(c, comp_path, "count", 1));
            budget.components.push_back(std::move(component));
        }
    }
    budget.crystal_steps = static_cast<int>(
        get_count(j, path, "crystal_steps", static_cast<std::size_t>(budget.crystal_steps)));
}

}  // namespace

StepSchedule RunConfig::schedule() const {
    if (!schedule_steps.empty()) return StepSchedule{schedule_steps};
    return StepSchedule::uniform(steps, step_defaults);
}

BinGrid RunConfig::grid() const {
    return BinGrid{bin_spacing_ps, steps + max_input_bin(input) + 1};
}

RunConfig default_config() {
    RunConfig cfg;
    cfg.step_defaults.coin = {std::numbers::pi / 2.0, 0.0};
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: " + path.string() + " is not valid JSON: " + e.what());
    }
    require_object(j, "");
    reject_unknown(j, "",
                   {"steps", "seed", "outputs", "emit_plots", "mean_photon_number", "input", "grid",
                    "schedule", "gate", "trace", "drift", "variance", "budget"});

    RunConfig cfg = default_config();
    const bool steps_given = j.contains("steps");
    cfg.steps = get_count(j, "", "steps", cfg.steps);
    cfg.seed = get_count(j, "", "seed", static_cast<std::size_t>(cfg.seed));
    cfg.outputs = get_string(j, "", "outputs", cfg.outputs.string());
    cfg.emit_plots = get_bool(j, "", "emit_plots", cfg.emit_plots);
    cfg.mean_photon_number = get_number(j, "", "mean_photon_number", cfg.mean_photon_number);
    if (!(cfg.mean_photon_number > 0.0)) bad_key("mean_photon_number", "must be positive");

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        require_object(g, "grid");
        reject_unknown(g, "grid", {"bin_spacing_ps"});
        cfg.bin_spacing_ps = get_number(g, "grid", "bin_spacing_ps", cfg.bin_spacing_ps);
        if (!(cfg.bin_spacing_ps > 0.0)) bad_key("grid.bin_spacing_ps", "must be positive");
    }
    if (j.contains("input")) parse_input(j.at("input"), "input", cfg);
    if (j.contains("schedule")) parse_schedule(j.at("schedule"), "schedule", cfg, steps_given);
    if (j.contains("gate")) parse_gate(j.at("gate"), "gate", cfg);
    if (j.contains("trace")) parse_trace(j.at("trace"), "trace", cfg.trace);
    if (j.contains("drift")) parse_drift(j.at("drift"), "drift", cfg.drift);
    if (j.contains("variance")) parse_variance(j.at("variance"), "variance", cfg.variance);
    if (j.contains("budget")) parse_budget(j.at("budget"), "budget", cfg.budget);
    return cfg;
}

}  // namespace qwalk
