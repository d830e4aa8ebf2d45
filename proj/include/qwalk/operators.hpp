#pragma once

#include <cstddef>
#include <vector>

#include "qwalk/mat2.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

// Coin angles in radians. omega sets the splitting ratio, gamma the relative
// phase picked up on the off-diagonal.
struct CoinParams {
    double omega = 0.0;
    double gamma = 0.0;
};

// Per-pass intensity transmission of one shift stage, -0.044 dB.
double default_step_transmission();

// One round trip of the loop: a coin, then the polarization-dependent delay,
// then uniform loss. shift_enabled exists so a coin-only pass can be modeled.
struct StepConfig {
    CoinParams coin{};
    double transmission = default_step_transmission();
    bool shift_enabled = true;
};

struct StepSchedule {
    std::vector<StepConfig> steps;

    std::size_t size() const { return steps.size(); }

    static StepSchedule uniform(std::size_t n, const StepConfig& step);
};

using CoinMatrix = Mat2;

//   [ cos(omega/2)              e^{i gamma} sin(omega/2) ]
//   [ e^{-i gamma} sin(omega/2)            -cos(omega/2) ]
// Unitary and traceless for any real angles.
CoinMatrix coin_matrix(const CoinParams& params);

// Same coin rotation applied in every occupied bin.
WalkerState apply_coin(const WalkerState& state, const CoinParams& params);

// V amplitudes advance one bin, H stays. The grid does not grow, so the last
// bin must hold no V amplitude; sizing the grid as steps + input extent + 1
// guarantees that.
WalkerState apply_shift(const WalkerState& state);

WalkerState apply_step(const WalkerState& state, const StepConfig& step);

// Snapshots after 0..N steps; element 0 is the input itself.
std::vector<WalkerState> evolve(const WalkerState& input, const StepSchedule& schedule);

// Explicit matrix of the whole walk on the flattened (bin, polarization)
// space. Row major, same slot ordering as WalkerState.
class WalkMatrix {
public:
    WalkMatrix(std::size_t dim, std::vector<Complex> entries);

    std::size_t dim() const { return dim_; }
    Complex at(std::size_t row, std::size_t col) const;

    std::vector<Complex> apply(const std::vector<Complex>& vec) const;
    WalkerState apply(const WalkerState& state) const;

private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

// Builds the schedule's full operator by dense matrix products. Slow and
// memory hungry on purpose; it exists as an independent cross-check for the
// sparse stepping above, not as a fast path.
WalkMatrix dense_walk_oracle(const StepSchedule& schedule, const BinGrid& grid);

}  // namespace qwalk
