#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qwalk/operators.hpp"

using namespace qwalk;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

StepConfig lossless_hadamard() {
    StepConfig step;
    step.coin = {kPi / 2.0, 0.0};
    step.transmission = 1.0;
    return step;
}

}  // namespace

TEST_CASE("coin matrix hits the textbook corners") {
    const CoinMatrix had = coin_matrix({kPi / 2.0, 0.0});
    CHECK(std::abs(had(0, 0) - kInvSqrt2) < 1e-15);
    CHECK(std::abs(had(0, 1) - kInvSqrt2) < 1e-15);
    CHECK(std::abs(had(1, 0) - kInvSqrt2) < 1e-15);
    CHECK(std::abs(had(1, 1) + kInvSqrt2) < 1e-15);

    const CoinMatrix mirror = coin_matrix({0.0, 0.3});
    CHECK(std::abs(mirror(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(mirror(0, 1)) < 1e-15);
    CHECK(std::abs(mirror(1, 0)) < 1e-15);
    CHECK(std::abs(mirror(1, 1) + 1.0) < 1e-15);

    const CoinMatrix phased = coin_matrix({kPi / 2.0, kPi / 2.0});
    CHECK(std::abs(phased(0, 1) - Complex{0.0, kInvSqrt2}) < 1e-15);
    CHECK(std::abs(phased(1, 0) - Complex{0.0, -kInvSqrt2}) < 1e-15);

    CHECK_THROWS_AS(coin_matrix({std::nan(""), 0.0}), std::invalid_argument);
}

TEST_CASE("coin matrix is unitary for random angles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int i = 0; i < 50; ++i) {
        const CoinMatrix coin = coin_matrix({angle(rng), angle(rng)});
        CHECK(coin.unitarity_defect() < 1e-14);
    }
}

TEST_CASE("shift advances V by one bin and leaves H alone") {
    const BinGrid grid{4.3, 3};
    const WalkerState state = make_state({{Polarization::H, 0, {0.6, 0.0}},
                                          {Polarization::V, 0, {0.0, 0.8}}},
                                         grid);
    const WalkerState shifted = apply_shift(state);
    CHECK(shifted.amplitude(0, Polarization::H) == Complex{0.6, 0.0});
    CHECK(shifted.amplitude(0, Polarization::V) == Complex{});
    CHECK(shifted.amplitude(1, Polarization::V) == Complex{0.0, 0.8});
    CHECK(norm_squared(shifted) == doctest::Approx(norm_squared(state)).epsilon(1e-15));
}

TEST_CASE("shift refuses to push amplitude off the grid") {
    const BinGrid grid{4.3, 2};
    const WalkerState state = make_state({{Polarization::V, 1, {1.0, 0.0}}}, grid);
    CHECK_THROWS_AS(apply_shift(state), std::runtime_error);
}

TEST_CASE("step transmission scales the squared norm") {
    const BinGrid grid{4.3, 4};
    const WalkerState state = make_state({{Polarization::H, 0, {1.0, 0.0}}}, grid);
    StepConfig step = lossless_hadamard();
    step.transmission = 0.9;
    const WalkerState out = apply_step(state, step);
    CHECK(norm_squared(out) == doctest::Approx(0.9).epsilon(1e-12));

    step.transmission = 1.5;
    CHECK_THROWS_AS(apply_step(state, step), std::invalid_argument);
}

TEST_CASE("disabling the shift leaves a coin-only pass") {
    const BinGrid grid{4.3, 2};
    const WalkerState state = make_state({{Polarization::H, 0, {1.0, 0.0}}}, grid);
    StepConfig step = lossless_hadamard();
    step.shift_enabled = false;
    const WalkerState out = apply_step(state, step);
    CHECK(std::abs(out.amplitude(0, Polarization::V) - kInvSqrt2) < 1e-15);
    CHECK(out.amplitude(1, Polarization::V) == Complex{});
}

TEST_CASE("two lossless Hadamard steps from H in bin 0") {
    const BinGrid grid{4.3, 3};
    const WalkerState input = make_state({{Polarization::H, 0, {1.0, 0.0}}}, grid);
    const StepSchedule schedule = StepSchedule::uniform(2, lossless_hadamard());
    const std::vector<WalkerState> snapshots = evolve(input, schedule);
    REQUIRE(snapshots.size() == 3);

    const Distribution dist = probabilities(snapshots.back());
    CHECK(dist.probability(0, Polarization::H) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(dist.probability(1, Polarization::H) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(dist.probability(2, Polarization::H) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dist.probability(0, Polarization::V) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dist.probability(1, Polarization::V) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(dist.probability(2, Polarization::V) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("three lossless Hadamard steps pile up near the undelayed side") {
    const BinGrid grid{4.3, 4};
    const WalkerState input = make_state({{Polarization::H, 0, {1.0, 0.0}}}, grid);
    const std::vector<WalkerState> snapshots =
        evolve(input, StepSchedule::uniform(3, lossless_hadamard()));
    const std::vector<double> marginal = probabilities(snapshots.back()).bin_marginal();
    CHECK(marginal[0] == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(marginal[1] == doctest::Approx(0.625).epsilon(1e-14));
    CHECK(marginal[2] == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(marginal[3] == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("lossless evolution conserves the norm at every step") {
    const BinGrid grid{4.3, 20};
    const WalkerState input = make_state({{Polarization::H, 0, {1.0, 0.0}}}, grid);
    for (const WalkerState& state : evolve(input, StepSchedule::uniform(19, lossless_hadamard())))
        CHECK(std::abs(norm_squared(state) - 1.0) < 1e-12);
}

TEST_CASE("dense oracle matches stepping on a mixed schedule") {
    const BinGrid grid{4.3, 6};
    const WalkerState input = make_state({{Polarization::H, 0, {kInvSqrt2, 0.0}},
                                          {Polarization::V, 1, {0.0, kInvSqrt2}}},
                                         grid);
    StepSchedule schedule;
    schedule.steps.push_back({{kPi / 2.0, 0.0}, 0.95, true});
    schedule.steps.push_back({{1.1, 2.3}, 1.0, true});
    schedule.steps.push_back({{2.7, 5.9}, 0.98, true});
    schedule.steps.push_back({{0.4, 1.0}, 1.0, false});

    const WalkerState direct = evolve(input, schedule).back();
    const WalkerState via_matrix = dense_walk_oracle(schedule, grid).apply(input);
    for (std::size_t i = 0; i < direct.amplitudes().size(); ++i)
        CHECK(std::abs(direct.amplitudes()[i] - via_matrix.amplitudes()[i]) < 1e-12);
}

TEST_CASE("oracle of an empty schedule is the identity") {
    const BinGrid grid{4.3, 2};
    const WalkMatrix identity = dense_walk_oracle({}, grid);
    for (std::size_t r = 0; r < identity.dim(); ++r)
        for (std::size_t c = 0; c < identity.dim(); ++c)
            CHECK(identity.at(r, c) == (r == c ? Complex{1.0, 0.0} : Complex{}));
}

TEST_CASE("default per-step transmission matches -0.044 dB") {
    CHECK(std::abs(default_step_transmission() - 0.98992) < 1e-5);
}
