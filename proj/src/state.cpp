#include "qwalk/state.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qwalk/csv.hpp"

namespace qwalk {

namespace {

// Slack on the unit-norm ceiling; keeps long lossless evolutions from
// tripping on accumulated rounding.
constexpr double kNormSlack = 1e-9;

}  // namespace

const char* to_string(Polarization pol) {
    return pol == Polarization::H ? "H" : "V";
}

WalkerState::WalkerState(BinGrid grid)
    : grid_(grid), amps_(2 * grid.bin_count, Complex{}) {
    if (grid.bin_count == 0) throw std::invalid_argument("state: grid has no bins");
    if (!(grid.bin_spacing_ps > 0.0)) throw std::invalid_argument("state: bin spacing must be positive");
}

WalkerState::WalkerState(BinGrid grid, std::vector<Complex> amplitudes)
    : WalkerState(grid) {
    if (amplitudes.size() != amps_.size())
        throw std::invalid_argument("state: amplitude vector does not match grid size");
    double total = 0.0;
    for (const Complex& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("state: non-finite amplitude");
        total += std::norm(a);
    }
    if (total > 1.0 + kNormSlack)
        throw std::invalid_argument("state: squared norm exceeds 1");
    amps_ = std::move(amplitudes);
}

std::size_t WalkerState::index(std::size_t bin, Polarization pol) const {
    if (bin >= grid_.bin_count) throw std::out_of_range("state: bin index out of range");
    return 2 * bin + static_cast<std::size_t>(pol);
}

Distribution::Distribution(BinGrid grid)
    : grid_(grid), probs_(2 * grid.bin_count, 0.0) {
    if (grid.bin_count == 0) throw std::invalid_argument("distribution: grid has no bins");
    if (!(grid.bin_spacing_ps > 0.0))
        throw std::invalid_argument("distribution: bin spacing must be positive");
}

Distribution::Distribution(BinGrid grid, std::vector<double> probabilities)
    : Distribution(grid) {
    if (probabilities.size() != probs_.size())
        throw std::invalid_argument("distribution: probability vector does not match grid size");
    double total = 0.0;
    for (double p : probabilities) {
        if (!std::isfinite(p)) throw std::invalid_argument("distribution: non-finite probability");
        if (p < 0.0) throw std::invalid_argument("distribution: negative probability");
        total += p;
    }
    if (total > 1.0 + kNormSlack)
        throw std::invalid_argument("distribution: probabilities sum above 1");
    probs_ = std::move(probabilities);
}

std::size_t Distribution::index(std::size_t bin, Polarization pol) const {
    if (bin >= grid_.bin_count) throw std::out_of_range("distribution: bin index out of range");
    return 2 * bin + static_cast<std::size_t>(pol);
}

double Distribution::sum() const {
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

std::vector<double> Distribution::bin_marginal() const {
    std::vector<double> out(grid_.bin_count, 0.0);
    for (std::size_t b = 0; b < grid_.bin_count; ++b)
        out[b] = probs_[2 * b] + probs_[2 * b + 1];
    return out;
}

Distribution Distribution::normalized() const {
    const double total = sum();
    if (total <= 0.0) throw std::runtime_error("distribution: cannot normalize zero total");
    std::vector<double> scaled = probs_;
    for (double& p : scaled) p /= total;
    return Distribution(grid_, std::move(scaled));
}

WalkerState make_state(const std::vector<AmplitudeEntry>& entries, const BinGrid& grid) {
    WalkerState zero(grid);
    std::vector<Complex> amps = zero.amplitudes();
    std::vector<bool> seen(amps.size(), false);
    for (const AmplitudeEntry& e : entries) {
        if (e.bin >= grid.bin_count) throw std::out_of_range("make_state: bin index out of range");
        if (!std::isfinite(e.amplitude.real()) || !std::isfinite(e.amplitude.imag()))
            throw std::invalid_argument("make_state: non-finite amplitude");
        const std::size_t i = zero.index(e.bin, e.pol);
        if (seen[i]) throw std::invalid_argument("make_state: duplicate entry for a (bin, polarization) slot");
        seen[i] = true;
        amps[i] = e.amplitude;
    }
    return WalkerState(grid, std::move(amps));
}

double norm_squared(const WalkerState& state) {
    double total = 0.0;
    for (const Complex& a : state.amplitudes()) total += std::norm(a);
    return total;
}

Distribution probabilities(const WalkerState& state) {
    std::vector<double> probs(state.amplitudes().size());
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::norm(state.amplitudes()[i]);
    return Distribution(state.grid(), std::move(probs));
}

Distribution select_polarization(const Distribution& dist, Polarization pol) {
    std::vector<double> probs(dist.probabilities().size(), 0.0);
    for (std::size_t b = 0; b < dist.bin_count(); ++b) {
        const std::size_t i = dist.index(b, pol);
        probs[i] = dist.probabilities()[i];
    }
    return Distribution(dist.grid(), std::move(probs));
}

std::string to_csv(const Distribution& dist) {
    std::string out = "bin,delay_ps,polarization,probability\n";
    for (std::size_t b = 0; b < dist.bin_count(); ++b) {
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            out += std::to_string(b);
            out += ',';
            out += format_double(dist.grid().delay_ps(b));
            out += ',';
            out += to_string(pol);
            out += ',';
            out += format_double(dist.probability(b, pol));
            out += '\n';
        }
    }
    return out;
}

}  // namespace qwalk
