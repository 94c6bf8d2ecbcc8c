#pragma once

#include <array>
#include <complex>
#include <optional>

#include "aportrait/integrator.hpp"
#include "aportrait/linalg.hpp"

namespace aportrait {

// Invariant direction of a real eigenvalue.
struct RealLine {
    Vec direction;  // unit
};

// Invariant plane of a conjugate eigenvalue pair, spanned by an orthonormal
// basis built from the real and imaginary parts of the complex eigenvector.
struct ComplexPlane {
    Vec u, v;
};

// Eigenvalues of a 2x2 or 3x3 real matrix with their invariant structures.
// Values are sorted by descending real part, ties by descending imaginary
// part, so identical inputs always produce identical orderings.
struct Spectrum {
    int dimension = 0;
    std::array<std::complex<double>, 3> values{};
    std::array<std::optional<RealLine>, 3> lines{};  // per eigenvalue, real ones only
    std::optional<ComplexPlane> plane;               // shared by the conjugate pair
    bool defective = false;

    double real_part(int i) const { return values[static_cast<size_t>(i)].real(); }
    bool has_complex_pair() const { return plane.has_value(); }
};

// Closed-form eigen decomposition (quadratic formula / trigonometric-Cardano
// cubic), each root polished by one Newton step on the characteristic
// polynomial of the scale-normalized matrix.
Spectrum eigen(const Mat& M);

// Root-only fast path: eigenvalues sorted by descending real part (ties by
// descending imaginary part), without eigenvector extraction.
std::array<std::complex<double>, 3> eigen_values(const Mat& M);

// Real parts of eigen_values, sorted descending.
std::array<double, 3> eigen_real_parts(const Mat& M);

// Floquet exponents extracted from a monodromy matrix. Imaginary parts are
// reported in the principal branch (-pi/T, pi/T]; the matrix logarithm's
// branch is not otherwise determined, so only real parts should feed
// quantitative tables.
struct FloquetExponents {
    int dimension = 0;
    std::array<double, 3> real_parts{};  // sorted descending
    std::array<double, 3> imag_parts{};
    double window_length = 0;
};

FloquetExponents floquet_from_monodromy(const FundamentalMatrix& fm);

}  // namespace aportrait
