#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace qwalk {

using Complex = std::complex<double>;

// Dense complex 2x2 matrix, row major. Small enough that everything lives
// in the header and the compiler can fold constant coin algebra.
struct Mat2 {
    std::array<Complex, 4> m{};

    constexpr Complex operator()(int row, int col) const { return m[2 * row + col]; }
    constexpr Complex& operator()(int row, int col) { return m[2 * row + col]; }

    static constexpr Mat2 identity() { return Mat2{{Complex{1.0, 0.0}, {}, {}, Complex{1.0, 0.0}}}; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        Mat2 out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
        return out;
    }

    Mat2 adjoint() const {
        Mat2 out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                out(r, c) = std::conj((*this)(c, r));
        return out;
    }

    // Applies the matrix to a column vector (a, b).
    std::array<Complex, 2> apply(Complex a, Complex b) const {
        return {m[0] * a + m[1] * b, m[2] * a + m[3] * b};
    }

    // Largest entrywise deviation of M^dagger * M from the identity.
    double unitarity_defect() const {
        const Mat2 p = adjoint() * (*this);
        double worst = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                const Complex want = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
                worst = std::max(worst, std::abs(p(r, c) - want));
            }
        return worst;
    }
};

}  // namespace qwalk
