#pragma once

#include <cstddef>
#include <vector>

#include "qwalk/mat2.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

// Recipe for the launched state. Three flavors:
//   single_bin  alpha |H> + beta |V> in bin 0
//   two_bin     |H> in an equal superposition of bin 0 and bin k, relative
//               phase nu on the later bin
//   explicit_entries  arbitrary normalized amplitude list
struct InputSpec {
    enum class Kind { single_bin, two_bin, explicit_entries };

    Kind kind = Kind::single_bin;

    // single_bin
    Complex pol_alpha{1.0, 0.0};
    Complex pol_beta{0.0, 0.0};

    // two_bin
    std::size_t k = 1;
    double nu = 0.0;

    // explicit_entries
    std::vector<AmplitudeEntry> entries;

    static InputSpec single_bin(Complex alpha, Complex beta);
    static InputSpec two_bin(std::size_t k, double nu);
    static InputSpec explicit_state(std::vector<AmplitudeEntry> entries);
};

// Highest bin the spec touches; the grid for an n-step walk needs
// n + max_input_bin + 1 bins.
std::size_t max_input_bin(const InputSpec& spec);

// Builds the normalized input state on the given grid. The overall phase is
// pinned by making the first nonzero amplitude (bin major, H before V) real
// and nonnegative, so equal physical inputs compare equal.
WalkerState prepare(const InputSpec& spec, const BinGrid& grid);

enum class WaveplateKind { half, quarter };

using JonesMatrix = Mat2;

// Jones matrix of a waveplate whose fast axis sits at axis_angle (radians)
// from horizontal. Retardance is split symmetrically between the axes:
//   R(angle) * diag(e^{i d/2}, e^{-i d/2}) * R(-angle)
// with d = pi for a half-wave plate and pi/2 for a quarter-wave plate.
// A quarter-wave plate at 45 degrees takes |H> to (|H> + i|V>)/sqrt(2).
JonesMatrix waveplate(WaveplateKind kind, double axis_angle);

}  // namespace qwalk
