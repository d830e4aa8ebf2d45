#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qwalk/mat2.hpp"

namespace qwalk {

// The coin degree of freedom. H stays put under the shift, V advances.
enum class Polarization { H = 0, V = 1 };

const char* to_string(Polarization pol);

// Uniform comb of time bins. Bin b sits at delay b * bin_spacing_ps relative
// to bin 0; the walk only ever moves amplitude toward later bins, so bin 0 is
// the earliest slot a packet can occupy.
struct BinGrid {
    double bin_spacing_ps = 4.3;
    std::size_t bin_count = 0;

    double delay_ps(std::size_t bin) const { return bin_spacing_ps * static_cast<double>(bin); }

    friend bool operator==(const BinGrid&, const BinGrid&) = default;
};

// One nonzero amplitude for building states entry by entry.
struct AmplitudeEntry {
    Polarization pol = Polarization::H;
    std::size_t bin = 0;
    Complex amplitude{};
};

// Pure state of the walker: one complex amplitude per (bin, polarization)
// slot, stored bin major with H before V. The squared norm may sit below 1
// when loss has been applied, but never above it.
class WalkerState {
public:
    explicit WalkerState(BinGrid grid);
    WalkerState(BinGrid grid, std::vector<Complex> amplitudes);

    const BinGrid& grid() const { return grid_; }
    std::size_t bin_count() const { return grid_.bin_count; }

    Complex amplitude(std::size_t bin, Polarization pol) const {
        return amps_[index(bin, pol)];
    }
    const std::vector<Complex>& amplitudes() const { return amps_; }

    std::size_t index(std::size_t bin, Polarization pol) const;

private:
    BinGrid grid_;
    std::vector<Complex> amps_;
};

// Measured (or predicted) probabilities on the same layout as WalkerState.
// Entries are nonnegative; the total may fall short of 1 under loss but a
// sum above 1 is rejected.
class Distribution {
public:
    explicit Distribution(BinGrid grid);
    Distribution(BinGrid grid, std::vector<double> probabilities);

    const BinGrid& grid() const { return grid_; }
    std::size_t bin_count() const { return grid_.bin_count; }

    double probability(std::size_t bin, Polarization pol) const {
        return probs_[index(bin, pol)];
    }
    const std::vector<double>& probabilities() const { return probs_; }

    std::size_t index(std::size_t bin, Polarization pol) const;

    double sum() const;
    // Probability per bin, summed over polarization.
    std::vector<double> bin_marginal() const;
    // Scales the entries to unit total. Zero total is an error.
    Distribution normalized() const;

private:
    BinGrid grid_;
    std::vector<double> probs_;
};

// Builds a state from sparse entries. Amplitudes are taken at face value,
// no normalization happens here. Rejects out of range bins, duplicate
// slots, non-finite amplitudes, and totals above unit norm.
WalkerState make_state(const std::vector<AmplitudeEntry>& entries, const BinGrid& grid);

double norm_squared(const WalkerState& state);

// Born rule, slot by slot.
Distribution probabilities(const WalkerState& state);

// Copy with every slot of the other polarization zeroed. Not renormalized.
Distribution select_polarization(const Distribution& dist, Polarization pol);

// Rows sorted by bin, H before V within a bin.
// Columns: bin,delay_ps,polarization,probability
std::string to_csv(const Distribution& dist);

}  // namespace qwalk
