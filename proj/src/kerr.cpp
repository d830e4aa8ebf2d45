#include "qwalk/kerr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qwalk/csv.hpp"

namespace qwalk {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_gate(const GateConfig& cfg) {
    if (!(cfg.n2 > 0.0)) throw std::invalid_argument("gate: n2 must be positive");
    if (!(cfg.lambda_s > 0.0)) throw std::invalid_argument("gate: signal wavelength must be positive");
    if (!(cfg.fiber_length > 0.0)) throw std::invalid_argument("gate: fiber length must be positive");
    if (!std::isfinite(cfg.walkoff_ps_per_m)) throw std::invalid_argument("gate: non-finite walkoff");
    if (cfg.z_steps < 3 || cfg.z_steps % 2 == 0)
        throw std::invalid_argument("gate: z_steps must be odd and at least 3");
}

void check_pump(const PumpPulse& pump) {
    if (!(pump.peak_intensity >= 0.0) || !std::isfinite(pump.peak_intensity))
        throw std::invalid_argument("pump: peak intensity must be finite and nonnegative");
    if (!(pump.fwhm_ps > 0.0)) throw std::invalid_argument("pump: width must be positive");
}

// Golden-section refinement of the phase maximum inside [lo, hi].
double refine_peak(const GateConfig& cfg, const PumpPulse& pump, double lo, double hi) {
    constexpr double kInvPhi = 0.61803398874989485;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = nonlinear_phase(c, cfg, pump);
    double fd = nonlinear_phase(d, cfg, pump);
    while (b - a > 1e-10) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = nonlinear_phase(c, cfg, pump);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = nonlinear_phase(d, cfg, pump);
        }
    }
    return 0.5 * (a + b);
}

// Gate response sampled on a uniform grid, recentered so index zero sits on
// the response peak. Sampled once, reused for every scan point.
struct GateTable {
    double half_width;
    double step;
    std::vector<double> values;  // values[i] = eta(t_peak + (i - n) * step), i in [0, 2n]

    double at(double u) const {
        // Linear interpolation; the table is dense enough that this is far
        // below the accuracy the trace needs.
        if (std::abs(u) >= half_width) return 0.0;
        const double x = (u + half_width) / step;
        const auto i = static_cast<std::size_t>(x);
        const double frac = x - static_cast<double>(i);
        if (i + 1 >= values.size()) return values.back();
        return values[i] * (1.0 - frac) + values[i + 1] * frac;
    }
};

GateTable build_gate_table(const GateConfig& cfg, const PumpPulse& pump, double signal_fwhm_ps) {
    const double t_peak = gate_peak_delay(cfg, pump);
    const double sweep = std::abs(cfg.walkoff_ps_per_m) * cfg.fiber_length;
    const double half_width = 3.5 * pump.fwhm_ps + sweep + 4.0 * signal_fwhm_ps + 1.0;
    const double step = 0.002;
    const auto n = static_cast<std::size_t>(std::ceil(half_width / step));
    GateTable table;
    table.half_width = static_cast<double>(n) * step;
    table.step = step;
    table.values.resize(2 * n + 1);
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        const double u = (static_cast<double>(i) - static_cast<double>(n)) * step;
        table.values[i] = gate_efficiency(t_peak + u, cfg, pump);
    }
    return table;
}

}  // namespace

double PumpPulse::intensity_at(double t_ps) const {
    switch (shape) {
        case PulseShape::gaussian:
            return peak_intensity * std::exp(-4.0 * kLn2 * t_ps * t_ps / (fwhm_ps * fwhm_ps));
        case PulseShape::rectangular:
            return std::abs(t_ps) <= fwhm_ps / 2.0 ? peak_intensity : 0.0;
    }
    throw std::logic_error("pump: unknown pulse shape");
}

double nonlinear_phase(double T_ps, const GateConfig& cfg, const PumpPulse& pump) {
    check_gate(cfg);
    check_pump(pump);
    if (!std::isfinite(T_ps)) throw std::invalid_argument("nonlinear_phase: non-finite delay");

    const int n = cfg.z_steps;
    const double h = cfg.fiber_length / static_cast<double>(n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = static_cast<double>(i) * h;
        const double weight = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += weight * pump.intensity_at(T_ps - cfg.walkoff_ps_per_m * z);
    }
    const double integral = acc * h / 3.0;
    return 8.0 * std::numbers::pi * cfg.n2 / (3.0 * cfg.lambda_s) * integral;
}

double gate_efficiency(double T_ps, const GateConfig& cfg, const PumpPulse& pump) {
    const double s = std::sin(2.0 * cfg.theta);
    const double half = std::sin(nonlinear_phase(T_ps, cfg, pump) / 2.0);
    return s * s * half * half;
}

double gate_peak_delay(const GateConfig& cfg, const PumpPulse& pump) {
    check_gate(cfg);
    check_pump(pump);
    // The optimum lies inside the walkoff sweep [0, walkoff * L] padded by
    // the pump width. Coarse scan first, then golden-section polish; the
    // phase is unimodal in T for both pump shapes.
    const double sweep = cfg.walkoff_ps_per_m * cfg.fiber_length;
    const double lo = std::min(0.0, sweep) - 2.0 * pump.fwhm_ps;
    const double hi = std::max(0.0, sweep) + 2.0 * pump.fwhm_ps;
    const double step = pump.fwhm_ps / 50.0;
    double best_t = lo;
    double best_phase = -1.0;
    for (double t = lo; t <= hi; t += step) {
        const double phase = nonlinear_phase(t, cfg, pump);
        if (phase > best_phase) {
            best_phase = phase;
            best_t = t;
        }
    }
    return refine_peak(cfg, pump, best_t - step, best_t + step);
}

PumpPulse calibrate_pump(const GateConfig& cfg, const PumpPulse& prototype) {
    check_gate(cfg);
    check_pump(prototype);
    PumpPulse probe = prototype;
    probe.peak_intensity = 1.0;
    const double t_peak = gate_peak_delay(cfg, probe);

    auto peak_phase = [&](double intensity) {
        probe.peak_intensity = intensity;
        return nonlinear_phase(t_peak, cfg, probe);
    };

    double hi = 1.0;
    int doublings = 0;
    while (peak_phase(hi) < std::numbers::pi) {
        hi *= 2.0;
        if (++doublings > 200)
            throw std::runtime_error("calibrate_pump: cannot bracket a pi phase shift");
    }
    double lo = 0.0;
    double mid = hi;
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double phase = peak_phase(mid);
        if (std::abs(phase - std::numbers::pi) < 1e-6) break;
        (phase < std::numbers::pi ? lo : hi) = mid;
    }
    if (std::abs(peak_phase(mid) - std::numbers::pi) >= 1e-6)
        throw std::runtime_error("calibrate_pump: bisection did not converge");

    PumpPulse out = prototype;
    out.peak_intensity = mid;
    return out;
}

TemporalTrace synthesize_trace(const Distribution& dist, const GateConfig& cfg,
                               const PumpPulse& pump, double signal_fwhm_ps,
                               const std::vector<double>& scan_delays_ps, double background) {
    check_gate(cfg);
    check_pump(pump);
    if (!(signal_fwhm_ps > 0.0)) throw std::invalid_argument("synthesize_trace: signal width must be positive");
    if (!(background >= 0.0)) throw std::invalid_argument("synthesize_trace: background must be nonnegative");
    if (scan_delays_ps.empty()) throw std::invalid_argument("synthesize_trace: empty scan grid");
    for (std::size_t i = 1; i < scan_delays_ps.size(); ++i)
        if (!(scan_delays_ps[i] > scan_delays_ps[i - 1]))
            throw std::invalid_argument("synthesize_trace: scan delays must be strictly increasing");

    const GateTable gate = build_gate_table(cfg, pump, signal_fwhm_ps);

    // Overlap of the centered gate with a unit-area Gaussian signal packet
    // displaced by v, tabulated once over the gate's support.
    const double s_half = 4.0 * signal_fwhm_ps;
    const double a = 4.0 * kLn2 / (signal_fwhm_ps * signal_fwhm_ps);
    const double g_norm = std::sqrt(a / std::numbers::pi);
    auto s_count = static_cast<std::size_t>(std::ceil(2.0 * s_half / gate.step));
    if (s_count % 2 == 1) ++s_count;  // even interval count for Simpson
    const double s_step = 2.0 * s_half / static_cast<double>(s_count);

    const double kernel_step = 0.005;
    const auto kernel_n = static_cast<std::size_t>(std::ceil(gate.half_width / kernel_step));
    std::vector<double> kernel(2 * kernel_n + 1, 0.0);
    for (std::size_t j = 0; j < kernel.size(); ++j) {
        const double v = (static_cast<double>(j) - static_cast<double>(kernel_n)) * kernel_step;
        double acc = 0.0;
        for (std::size_t i = 0; i <= s_count; ++i) {
            const double s = -s_half + static_cast<double>(i) * s_step;
            const double weight = (i == 0 || i == s_count) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += weight * gate.at(s + v) * g_norm * std::exp(-a * s * s);
        }
        kernel[j] = acc * s_step / 3.0;
    }
    const double kernel_half = static_cast<double>(kernel_n) * kernel_step;
    auto kernel_at = [&](double v) {
        if (std::abs(v) >= kernel_half) return 0.0;
        const double x = (v + kernel_half) / kernel_step;
        const auto i = static_cast<std::size_t>(x);
        const double frac = x - static_cast<double>(i);
        if (i + 1 >= kernel.size()) return kernel.back();
        return kernel[i] * (1.0 - frac) + kernel[i + 1] * frac;
    };

    const std::vector<double> weights = dist.bin_marginal();
    TemporalTrace trace;
    trace.delays_ps = scan_delays_ps;
    trace.intensities.resize(scan_delays_ps.size(), 0.0);
    for (std::size_t j = 0; j < scan_delays_ps.size(); ++j) {
        double value = background;
        for (std::size_t b = 0; b < weights.size(); ++b) {
            if (weights[b] == 0.0) continue;
            value += weights[b] * kernel_at(dist.grid().delay_ps(b) - scan_delays_ps[j]);
        }
        trace.intensities[j] = value;
    }
    return trace;
}

Distribution discretize_trace(const TemporalTrace& trace, const BinGrid& grid, Polarization pol) {
    if (trace.delays_ps.empty() || trace.delays_ps.size() != trace.intensities.size())
        throw std::invalid_argument("discretize_trace: malformed trace");
    std::vector<double> probs(2 * grid.bin_count, 0.0);
    for (std::size_t b = 0; b < grid.bin_count; ++b) {
        const double delay = grid.delay_ps(b);
        if (delay < trace.delays_ps.front() || delay > trace.delays_ps.back())
            throw std::out_of_range("discretize_trace: bin delay outside the scanned range");
        const auto it = std::lower_bound(trace.delays_ps.begin(), trace.delays_ps.end(), delay);
        std::size_t i = static_cast<std::size_t>(it - trace.delays_ps.begin());
        if (i > 0 && (i == trace.delays_ps.size() ||
                      delay - trace.delays_ps[i - 1] <= trace.delays_ps[i] - delay))
            --i;
        probs[2 * b + static_cast<std::size_t>(pol)] = trace.intensities[i];
    }
    return Distribution(grid, std::move(probs));
}

std::string to_csv(const TemporalTrace& trace) {
    if (trace.delays_ps.size() != trace.intensities.size())
        throw std::invalid_argument("trace csv: malformed trace");
    std::string out = "delay_ps,intensity\n";
    for (std::size_t i = 0; i < trace.delays_ps.size(); ++i) {
        out += format_double(trace.delays_ps[i]);
        out += ',';
        out += format_double(trace.intensities[i]);
        out += '\n';
    }
    return out;
}

}  // namespace qwalk
