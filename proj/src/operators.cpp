#include "qwalk/operators.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace qwalk {

double default_step_transmission() {
    static const double value = std::pow(10.0, -0.044 / 10.0);
    return value;
}

StepSchedule StepSchedule::uniform(std::size_t n, const StepConfig& step) {
    StepSchedule schedule;
    schedule.steps.assign(n, step);
    return schedule;
}

CoinMatrix coin_matrix(const CoinParams& params) {
    if (!std::isfinite(params.omega) || !std::isfinite(params.gamma))
        throw std::invalid_argument("coin_matrix: non-finite angle");
    const double c = std::cos(params.omega / 2.0);
    const double s = std::sin(params.omega / 2.0);
    const Complex phase = std::polar(1.0, params.gamma);
    Mat2 out;
    out(0, 0) = c;
    out(0, 1) = phase * s;
    out(1, 0) = std::conj(phase) * s;
    out(1, 1) = -c;
    return out;
}

WalkerState apply_coin(const WalkerState& state, const CoinParams& params) {
    const CoinMatrix coin = coin_matrix(params);
    std::vector<Complex> amps = state.amplitudes();
    for (std::size_t b = 0; b < state.bin_count(); ++b) {
        const auto [h, v] = coin.apply(amps[2 * b], amps[2 * b + 1]);
        amps[2 * b] = h;
        amps[2 * b + 1] = v;
    }
    return WalkerState(state.grid(), std::move(amps));
}

WalkerState apply_shift(const WalkerState& state) {
    const std::size_t last = state.bin_count() - 1;
    if (state.amplitude(last, Polarization::V) != Complex{})
        throw std::runtime_error("apply_shift: V amplitude in the last bin would leave the grid");
    std::vector<Complex> amps = state.amplitudes();
    for (std::size_t b = last; b > 0; --b) {
        amps[2 * b + 1] = amps[2 * (b - 1) + 1];
    }
    amps[1] = Complex{};
    return WalkerState(state.grid(), std::move(amps));
}

WalkerState apply_step(const WalkerState& state, const StepConfig& step) {
    if (!(step.transmission >= 0.0 && step.transmission <= 1.0))
        throw std::invalid_argument("apply_step: transmission must lie in [0, 1]");
    WalkerState out = apply_coin(state, step.coin);
    if (step.shift_enabled) out = apply_shift(out);
    if (step.transmission == 1.0) return out;
    const double scale = std::sqrt(step.transmission);
    std::vector<Complex> amps = out.amplitudes();
    for (Complex& a : amps) a *= scale;
    return WalkerState(out.grid(), std::move(amps));
}

std::vector<WalkerState> evolve(const WalkerState& input, const StepSchedule& schedule) {
    std::vector<WalkerState> snapshots;
    snapshots.reserve(schedule.size() + 1);
    snapshots.push_back(input);
    for (const StepConfig& step : schedule.steps)
        snapshots.push_back(apply_step(snapshots.back(), step));
    return snapshots;
}

WalkMatrix::WalkMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim_ == 0) throw std::invalid_argument("walk matrix: dimension must be positive");
    if (entries_.size() != dim_ * dim_)
        throw std::invalid_argument("walk matrix: entry count does not match dimension");
}

Complex WalkMatrix::at(std::size_t row, std::size_t col) const {
    if (row >= dim_ || col >= dim_) throw std::out_of_range("walk matrix: index out of range");
    return entries_[row * dim_ + col];
}

std::vector<Complex> WalkMatrix::apply(const std::vector<Complex>& vec) const {
    if (vec.size() != dim_) throw std::invalid_argument("walk matrix: vector does not match dimension");
    std::vector<Complex> out(dim_, Complex{});
    for (std::size_t r = 0; r < dim_; ++r) {
        Complex acc{};
        const Complex* row = entries_.data() + r * dim_;
        for (std::size_t c = 0; c < dim_; ++c) acc += row[c] * vec[c];
        out[r] = acc;
    }
    return out;
}

WalkerState WalkMatrix::apply(const WalkerState& state) const {
    return WalkerState(state.grid(), apply(state.amplitudes()));
}

WalkMatrix dense_walk_oracle(const StepSchedule& schedule, const BinGrid& grid) {
    using Mat = Eigen::MatrixXcd;
    const std::size_t bins = grid.bin_count;
    if (bins == 0) throw std::invalid_argument("dense_walk_oracle: grid has no bins");
    const auto dim = static_cast<Eigen::Index>(2 * bins);

    // Shift permutation: V slot of bin b feeds bin b+1. The V slot of the
    // last bin has no image; a walk that reaches it is a sizing bug, and the
    // zero row keeps the oracle from silently wrapping it anywhere.
    Mat shift = Mat::Zero(dim, dim);
    for (std::size_t b = 0; b < bins; ++b) {
        shift(static_cast<Eigen::Index>(2 * b), static_cast<Eigen::Index>(2 * b)) = 1.0;
        if (b + 1 < bins)
            shift(static_cast<Eigen::Index>(2 * (b + 1) + 1), static_cast<Eigen::Index>(2 * b + 1)) = 1.0;
    }

    Mat total = Mat::Identity(dim, dim);
    for (const StepConfig& step : schedule.steps) {
        if (!(step.transmission >= 0.0 && step.transmission <= 1.0))
            throw std::invalid_argument("dense_walk_oracle: transmission must lie in [0, 1]");
        const CoinMatrix coin = coin_matrix(step.coin);
        Mat coin_full = Mat::Zero(dim, dim);
        for (std::size_t b = 0; b < bins; ++b)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    coin_full(static_cast<Eigen::Index>(2 * b + r), static_cast<Eigen::Index>(2 * b + c)) =
                        coin(r, c);
        Mat step_mat = coin_full;
        if (step.shift_enabled) step_mat = shift * step_mat;
        total = std::sqrt(step.transmission) * step_mat * total;
    }

    std::vector<Complex> entries(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            entries[static_cast<std::size_t>(r) * 2 * bins + static_cast<std::size_t>(c)] = total(r, c);
    return WalkMatrix(2 * bins, std::move(entries));
}

}  // namespace qwalk
