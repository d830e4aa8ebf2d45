#include "qwalk/prepare.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qwalk {

namespace {

constexpr double kNormTolerance = 1e-9;

WalkerState fix_global_phase(const WalkerState& state) {
    for (const Complex& a : state.amplitudes()) {
        if (a == Complex{}) continue;
        const Complex rotation = std::polar(1.0, -std::arg(a));
        std::vector<Complex> amps = state.amplitudes();
        for (Complex& x : amps) x *= rotation;
        return WalkerState(state.grid(), std::move(amps));
    }
    throw std::invalid_argument("prepare: input state is identically zero");
}

}  // namespace

InputSpec InputSpec::single_bin(Complex alpha, Complex beta) {
    InputSpec spec;
    spec.kind = Kind::single_bin;
    spec.pol_alpha = alpha;
    spec.pol_beta = beta;
    return spec;
}

InputSpec InputSpec::two_bin(std::size_t k, double nu) {
    InputSpec spec;
    spec.kind = Kind::two_bin;
    spec.k = k;
    spec.nu = nu;
    return spec;
}

InputSpec InputSpec::explicit_state(std::vector<AmplitudeEntry> entries) {
    InputSpec spec;
    spec.kind = Kind::explicit_entries;
    spec.entries = std::move(entries);
    return spec;
}

std::size_t max_input_bin(const InputSpec& spec) {
    switch (spec.kind) {
        case InputSpec::Kind::single_bin:
            return 0;
        case InputSpec::Kind::two_bin:
            return spec.k;
        case InputSpec::Kind::explicit_entries: {
            std::size_t top = 0;
            for (const AmplitudeEntry& e : spec.entries) top = std::max(top, e.bin);
            return top;
        }
    }
    throw std::logic_error("max_input_bin: unknown input kind");
}

WalkerState prepare(const InputSpec& spec, const BinGrid& grid) {
    switch (spec.kind) {
        case InputSpec::Kind::single_bin: {
            const double total = std::norm(spec.pol_alpha) + std::norm(spec.pol_beta);
            if (std::abs(total - 1.0) > kNormTolerance)
                throw std::invalid_argument("prepare: polarization pair is not normalized");
            return fix_global_phase(make_state(
                {{Polarization::H, 0, spec.pol_alpha}, {Polarization::V, 0, spec.pol_beta}}, grid));
        }
        case InputSpec::Kind::two_bin: {
            if (spec.k == 0) throw std::invalid_argument("prepare: two-bin separation must be at least 1");
            if (spec.k >= grid.bin_count)
                throw std::out_of_range("prepare: two-bin separation falls outside the grid");
            const double amp = 1.0 / std::numbers::sqrt2;
            return fix_global_phase(make_state({{Polarization::H, 0, amp},
                                                {Polarization::H, spec.k, amp * std::polar(1.0, spec.nu)}},
                                               grid));
        }
        case InputSpec::Kind::explicit_entries: {
            const WalkerState state = make_state(spec.entries, grid);
            if (std::abs(norm_squared(state) - 1.0) > kNormTolerance)
                throw std::invalid_argument("prepare: explicit amplitudes are not normalized");
            return fix_global_phase(state);
        }
    }
    throw std::logic_error("prepare: unknown input kind");
}

JonesMatrix waveplate(WaveplateKind kind, double axis_angle) {
    if (!std::isfinite(axis_angle)) throw std::invalid_argument("waveplate: non-finite axis angle");
    const double delta = (kind == WaveplateKind::half) ? std::numbers::pi : std::numbers::pi / 2.0;
    const double c = std::cos(axis_angle);
    const double s = std::sin(axis_angle);
    const Complex fast = std::polar(1.0, delta / 2.0);
    const Complex slow = std::polar(1.0, -delta / 2.0);
    Mat2 out;
    out(0, 0) = c * c * fast + s * s * slow;
    out(0, 1) = c * s * (fast - slow);
    out(1, 0) = c * s * (fast - slow);
    out(1, 1) = s * s * fast + c * c * slow;
    return out;
}

}  // namespace qwalk
