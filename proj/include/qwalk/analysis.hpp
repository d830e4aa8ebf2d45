#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/operators.hpp"
#include "qwalk/prepare.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

// Overlap of two arrival-time distributions after n steps:
//   ( sum over bins 0..n and both polarizations of sqrt(p * q) )^2
// Both inputs must be normalized to 1 within 1e-6 and share the bin spacing.
double fidelity(const Distribution& p, const Distribution& q, std::size_t n);

// Total variation distance, half the L1 difference over every slot.
// Same normalization requirements as fidelity.
double distance(const Distribution& p, const Distribution& q);

// Overlap of one polarization component after renormalizing that component
// on each side. A component with zero weight on either side is an error.
double component_fidelity(const Distribution& p, const Distribution& q, Polarization pol);

// Variance of the bin-index marginal, in units of bins squared. The marginal
// is renormalized first so lossy distributions are handled consistently.
double variance(const Distribution& dist);

// Unbiased classical random walk folded onto the one-sided bin axis: after n
// steps bin i carries C(n, i) / 2^n. Polarization plays no role classically;
// the mass is parked in the H slots. Variance is exactly n / 4.
Distribution classical_rw_distribution(std::size_t n, double bin_spacing_ps = 4.3);

struct VariancePoint {
    std::size_t step;
    double variance;
};

// Least-squares slope of log(variance) against log(step) over the points
// with fit_min <= step <= fit_max. Needs at least three usable points;
// step 0 and nonpositive variances cannot enter the fit.
double growth_exponent(const std::vector<VariancePoint>& series, std::size_t fit_min,
                       std::size_t fit_max);

// Columns: step,variance_quantum,variance_classical
std::string variance_csv(const std::vector<VariancePoint>& quantum,
                         const std::vector<VariancePoint>& classical);

// One entry of the loss table. loss_db is per unit and nonpositive; count
// scales it (e.g. one pass through each of 18 crystals).
struct LossComponent {
    std::string name;
    double loss_db = 0.0;
    int count = 1;
};

struct LossBudget {
    double total_db = 0.0;
    double linear_efficiency = 1.0;
};

// Sums count-weighted dB and converts to a linear efficiency.
LossBudget loss_budget(const std::vector<LossComponent>& components);

// Built-in component table for the full loop readout chain, plus one
// crystal pass per step.
std::vector<LossComponent> reference_loss_components(int crystal_steps = 18);

// Slow Gaussian drift of the coin angles. Each sampled time adds one fresh
// increment per step per angle on top of the previous offsets, so the
// schedule performs a random walk over the samples.
struct DriftModel {
    double sigma_gamma = 0.0;
    double sigma_omega = 0.0;
    std::uint64_t seed = 1;
    std::size_t samples = 50;
    double sample_interval_h = 1.0;
};

struct StabilitySample {
    double time_h;
    double fidelity_h;
    double fidelity_v;
};

// Evolves the drifted schedule at each sampled time and scores both
// polarization components against the undrifted output.
std::vector<StabilitySample> stability_run(const StepSchedule& schedule, const InputSpec& input,
                                           const DriftModel& drift);

// Finds the gamma drift strength whose mean endpoint fidelity (the worse of
// the two components, averaged over independent trials) lands on target.
// Bisection, reusing the same seeds at every candidate strength.
double calibrate_drift_sigma(const StepSchedule& schedule, const InputSpec& input,
                             const DriftModel& prototype, double target, std::size_t trials = 64);

// Columns: time_h,fidelity_H,fidelity_V
std::string stability_csv(const std::vector<StabilitySample>& samples);

}  // namespace qwalk
