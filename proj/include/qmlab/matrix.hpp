// matrix.hpp
// Small fixed-size complex matrices (2x2 qubit, 4x4 two-qubit) and the bits of
// linear algebra the simulator needs: products, adjoints, traces, Hermitian
// checks, and the closed-form 2x2 Hermitian eigenvalues.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

#include "qmlab/errors.hpp"

namespace qmlab {

using cplx = std::complex<double>;

template <std::size_t N>
class SquareMatrix {
  public:
    SquareMatrix() = default;

    // Row-major entries; must supply exactly N*N values.
    SquareMatrix(std::initializer_list<cplx> entries) {
        if (entries.size() != N * N)
            throw std::invalid_argument("SquareMatrix: wrong number of entries");
        std::size_t k = 0;
        for (const cplx& v : entries) e_[k++] = v;
    }

    static SquareMatrix zero() { return SquareMatrix{}; }

    static SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    cplx& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return e_[r * N + c]; }

    static constexpr std::size_t dim() { return N; }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    SquareMatrix adjoint() const {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t k = 0; k < N * N; ++k) m.e_[k] = a.e_[k] + b.e_[k];
        return m;
    }

    friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t k = 0; k < N * N; ++k) m.e_[k] = a.e_[k] - b.e_[k];
        return m;
    }

    friend SquareMatrix operator*(const cplx& s, const SquareMatrix& a) {
        SquareMatrix m;
        for (std::size_t k = 0; k < N * N; ++k) m.e_[k] = s * a.e_[k];
        return m;
    }

    friend SquareMatrix operator*(const SquareMatrix& a, const cplx& s) { return s * a; }

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) {
                cplx acc = 0.0;
                for (std::size_t k = 0; k < N; ++k) acc += a(r, k) * b(k, c);
                m(r, c) = acc;
            }
        return m;
    }

    friend std::array<cplx, N> operator*(const SquareMatrix& a, const std::array<cplx, N>& v) {
        std::array<cplx, N> out{};
        for (std::size_t r = 0; r < N; ++r) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < N; ++c) acc += a(r, c) * v[c];
            out[r] = acc;
        }
        return out;
    }

  private:
    std::array<cplx, N * N> e_{};
};

using Mat2 = SquareMatrix<2>;
using Mat4 = SquareMatrix<4>;

// A density matrix is any Mat2/Mat4 satisfying the density invariants;
// validate_density() (bloch.hpp) is the runtime check.
using DensityMatrix = Mat2;

template <std::size_t N>
double max_abs_entry(const SquareMatrix<N>& m) {
    double mx = 0.0;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) mx = std::max(mx, std::abs(m(r, c)));
    return mx;
}

template <std::size_t N>
bool approx_equal(const SquareMatrix<N>& a, const SquareMatrix<N>& b, double tol) {
    return max_abs_entry(a - b) <= tol;
}

template <std::size_t N>
bool is_hermitian(const SquareMatrix<N>& m, double tol = 1e-12) {
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = r; c < N; ++c)
            if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
    return true;
}

// Eigenvalues of a 2x2 Hermitian matrix: mean +/- radius of the deviator.
struct Eig2 {
    double lo = 0.0;
    double hi = 0.0;
};

inline Eig2 hermitian_eigenvalues(const Mat2& m) {
    const double mean = 0.5 * std::real(m(0, 0) + m(1, 1));
    const double dz = 0.5 * std::real(m(0, 0) - m(1, 1));
    const double r = std::sqrt(dz * dz + std::norm(m(0, 1)));
    return {mean - r, mean + r};
}

inline Mat2 pauli_x() { return Mat2{0.0, 1.0, 1.0, 0.0}; }
inline Mat2 pauli_y() { return Mat2{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
inline Mat2 pauli_z() { return Mat2{1.0, 0.0, 0.0, -1.0}; }

}  // namespace qmlab
