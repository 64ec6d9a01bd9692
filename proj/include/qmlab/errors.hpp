// errors.hpp
// Exception types thrown on contract violations.

#pragma once

#include <stdexcept>
#include <string>

namespace qmlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested ball state lies outside the closed unit ball.
struct NormExceeded : Error {
    explicit NormExceeded(double norm)
        : Error("point lies outside the unit ball (|w| = " + std::to_string(norm) + ")") {}
};

// The center of the ball has no preferred diameter; an axis must be supplied.
struct DegenerateDecomposition : Error {
    DegenerateDecomposition()
        : Error("decomposition of the ball center requires an explicit axis") {}
};

// Matrix fails the density-operator invariants beyond tolerance.
struct InvalidDensity : Error {
    explicit InvalidDensity(const std::string& what) : Error("invalid density matrix: " + what) {}
};

// Matrix expected to be Hermitian is not.
struct NonHermitian : Error {
    NonHermitian() : Error("matrix is not Hermitian within tolerance") {}
};

}  // namespace qmlab
