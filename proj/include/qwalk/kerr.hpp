#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qwalk/state.hpp"

namespace qwalk {

enum class PulseShape { gaussian, rectangular };

// Pump envelope in the time domain. peak_intensity is in W/m^2, times in ps.
// For the rectangular shape fwhm_ps is the full width of the flat top.
struct PumpPulse {
    double peak_intensity = 1.0;
    double fwhm_ps = 1.0;
    PulseShape shape = PulseShape::gaussian;

    double intensity_at(double t_ps) const;
};

// Kerr shutter built around a short fiber. theta is the signal launch angle
// against the pump axis, lambda_s the signal wavelength in meters, n2 the
// fiber's nonlinear index in m^2/W. walkoff_ps_per_m captures the group
// delay between pump and signal; z_steps is the quadrature point count along
// the fiber (odd, at least 3).
struct GateConfig {
    double theta = 0.78539816339744831;  // pi/4, full switching
    double n2 = 2.7e-20;
    double lambda_s = 720e-9;
    double fiber_length = 0.10;
    double walkoff_ps_per_m = 0.01;
    int z_steps = 2001;
};

// Cross-phase shift picked up by a signal arriving at delay T_ps relative to
// the pump peak's launch time:
//   (8 pi n2) / (3 lambda_s) * integral_0^L I_pump(T - walkoff * z) dz
// evaluated by composite Simpson over the fiber length.
double nonlinear_phase(double T_ps, const GateConfig& cfg, const PumpPulse& pump);

// Switching efficiency sin^2(2 theta) * sin^2(phase / 2).
double gate_efficiency(double T_ps, const GateConfig& cfg, const PumpPulse& pump);

// Arrival delay that maximizes the nonlinear phase. With walkoff the sweep
// along the fiber shifts the optimum away from zero.
double gate_peak_delay(const GateConfig& cfg, const PumpPulse& pump);

// Scales the prototype pump's peak intensity until the peak nonlinear phase
// hits pi to within 1e-6, by bisection. Shape and width are kept.
PumpPulse calibrate_pump(const GateConfig& cfg, const PumpPulse& prototype);

// Sampled gate scan: intensity recorded while stepping the gate delay.
struct TemporalTrace {
    std::vector<double> delays_ps;
    std::vector<double> intensities;
};

// Predicts the scan a gated detector would record for the given arrival-time
// distribution. Each occupied bin contributes its probability times the
// overlap of a unit-area Gaussian signal packet (signal_fwhm_ps wide) with
// the gate response centered on its own peak; background adds a constant
// floor to every sample. scan_delays_ps must be strictly increasing.
TemporalTrace synthesize_trace(const Distribution& dist, const GateConfig& cfg,
                               const PumpPulse& pump, double signal_fwhm_ps,
                               const std::vector<double>& scan_delays_ps,
                               double background = 0.0);

// Reads the trace back onto the bin grid: each bin takes the sample nearest
// its own delay, landing in the given polarization slot. Values are raw
// sample heights; renormalizing over both polarization components is the
// caller's job. Bins outside the scanned range are an error.
Distribution discretize_trace(const TemporalTrace& trace, const BinGrid& grid, Polarization pol);

// Columns: delay_ps,intensity
std::string to_csv(const TemporalTrace& trace);

}  // namespace qwalk
