// hilbert.hpp
// Standard quantum-mechanics calculator for one and two qubits: spectral
// projectors, trace-rule probabilities, tensor products, partial traces, the
// singlet state, Schmidt rank, and closed-form 2x2 matrix exponentials. This
// is the independent reference the mechanistic ball model is checked against.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "qmlab/bloch.hpp"
#include "qmlab/distribution.hpp"
#include "qmlab/matrix.hpp"

namespace qmlab {

// Two-qubit pure state in the product basis ordered (1,1), (1,2), (2,1), (2,2).
struct StateVector4 {
    std::array<cplx, 4> amp{};

    static StateVector4 normalized(const std::array<cplx, 4>& a) {
        double n2 = 0.0;
        for (const cplx& v : a) n2 += std::norm(v);
        const double n = std::sqrt(n2);
        if (n < 1e-12) throw std::invalid_argument("StateVector4: zero vector");
        StateVector4 z;
        for (std::size_t i = 0; i < 4; ++i) z.amp[i] = a[i] / n;
        return z;
    }

    double norm() const {
        double n2 = 0.0;
        for (const cplx& v : amp) n2 += std::norm(v);
        return std::sqrt(n2);
    }
};

// Rank-1 projector onto the spin-up spinor along u. Built from the closed-form
// spinor (cos(t/2), e^{i p} sin(t/2)) to keep one phase convention everywhere.
inline Mat2 projector(const Direction& u) {
    const auto chi = u.spinor();
    Mat2 p;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) p(r, c) = chi[r] * std::conj(chi[c]);
    return p;
}

// Born / trace rule: tr(W E).
template <std::size_t N>
double trace_probability(const SquareMatrix<N>& w, const SquareMatrix<N>& e) {
    return std::real((w * e).trace());
}

// Kronecker product in the (1,1),(1,2),(2,1),(2,2) basis order.
inline Mat4 tensor(const Mat2& a, const Mat2& b) {
    Mat4 m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return m;
}

// Reduced density matrix of the kept subsystem (1 or 2).
inline Mat2 partial_trace(const Mat4& r, int subsystem) {
    Mat2 m;
    if (subsystem == 1) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                m(i, j) = r(2 * i + 0, 2 * j + 0) + r(2 * i + 1, 2 * j + 1);
    } else if (subsystem == 2) {
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t l = 0; l < 2; ++l) m(k, l) = r(0 + k, 0 + l) + r(2 + k, 2 + l);
    } else {
        throw std::invalid_argument("partial_trace: subsystem must be 1 or 2");
    }
    return m;
}

inline Mat4 projector_onto(const StateVector4& z) {
    Mat4 p;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) p(r, c) = z.amp[r] * std::conj(z.amp[c]);
    return p;
}

// The antisymmetric two-qubit state (|ud> - |du>) / sqrt(2).
inline StateVector4 singlet() {
    const double s = 1.0 / std::sqrt(2.0);
    StateVector4 z;
    z.amp = {cplx(0.0), cplx(s), cplx(-s), cplx(0.0)};
    return z;
}

// Schmidt rank of a unit two-qubit vector: 1 for product vectors, 2 otherwise.
// The amplitudes reshape to a 2x2 matrix M with singular values s1 >= s2,
// s1^2 + s2^2 = |z|^2 and s1 s2 = |det M|; values above 1e-10 count.
inline int schmidt_rank(const StateVector4& z) {
    constexpr double kThreshold = 1e-10;
    double t = 0.0;
    for (const cplx& v : z.amp) t += std::norm(v);
    const double d = std::abs(z.amp[0] * z.amp[3] - z.amp[1] * z.amp[2]);
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d * d));
    const double s1 = std::sqrt(0.5 * (t + disc));
    const double s2 = (s1 > 0.0) ? d / s1 : 0.0;  // stable route for the small value
    return (s1 > kThreshold ? 1 : 0) + (s2 > kThreshold ? 1 : 0);
}

inline double expectation(const StateVector4& z, const Mat4& m) {
    const std::array<cplx, 4> w = m * z.amp;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) acc += std::conj(z.amp[i]) * w[i];
    return std::real(acc);
}

// The four probabilities <z| P_{+-u1} (x) P_{+-u2} |z>.
inline JointDistribution joint_quantum_probability(const StateVector4& z, const Direction& u1,
                                                   const Direction& u2) {
    const Mat2 p1u = projector(u1);
    const Mat2 p1d = projector(u1.antipode());
    const Mat2 p2u = projector(u2);
    const Mat2 p2d = projector(u2.antipode());
    return {expectation(z, tensor(p1u, p2u)), expectation(z, tensor(p1u, p2d)),
            expectation(z, tensor(p1d, p2u)), expectation(z, tensor(p1d, p2d))};
}

namespace detail {

// H = c0 I + h . sigma with real c0 and real 3-vector h; unique for Hermitian H.
struct PauliSplit {
    double c0;
    double hx;
    double hy;
    double hz;
    double r;  // |h|
};

inline PauliSplit pauli_split(const Mat2& h, double tol = 1e-12) {
    if (std::abs(h(0, 1) - std::conj(h(1, 0))) > tol || std::abs(std::imag(h(0, 0))) > tol ||
        std::abs(std::imag(h(1, 1))) > tol)
        throw NonHermitian();
    PauliSplit s;
    s.c0 = 0.5 * std::real(h(0, 0) + h(1, 1));
    s.hz = 0.5 * std::real(h(0, 0) - h(1, 1));
    s.hx = std::real(h(0, 1));
    s.hy = -std::imag(h(0, 1));
    s.r = std::sqrt(s.hx * s.hx + s.hy * s.hy + s.hz * s.hz);
    return s;
}

}  // namespace detail

// exp(H t) for Hermitian H via the 2x2 spectral closed form
//   e^{c0 t} [ cosh(r t) I + sinh(r t)/r (h . sigma) ].
// Result is Hermitian positive-definite. Throws NonHermitian.
inline Mat2 herm_exp(const Mat2& h, double t) {
    const auto s = detail::pauli_split(h);
    const double x = s.r * t;
    // sinh(rt)/r, with the series limit t (1 + x^2/6) as r -> 0
    const double f = (std::abs(x) < 1e-8) ? t * (1.0 + x * x / 6.0) : std::sinh(x) / s.r;
    const double e0 = std::exp(s.c0 * t);
    Mat2 m;
    m(0, 0) = e0 * (std::cosh(x) + f * s.hz);
    m(1, 1) = e0 * (std::cosh(x) - f * s.hz);
    m(0, 1) = e0 * f * cplx(s.hx, -s.hy);
    m(1, 0) = e0 * f * cplx(s.hx, s.hy);
    return m;
}

// exp(-i H t) for Hermitian H: e^{-i c0 t} [ cos(r t) I - i sin(r t)/r (h . sigma) ].
inline Mat2 unitary_exp(const Mat2& h, double t) {
    const auto s = detail::pauli_split(h);
    const double x = s.r * t;
    const double f = (std::abs(x) < 1e-8) ? t * (1.0 - x * x / 6.0) : std::sin(x) / s.r;
    const cplx phase = std::polar(1.0, -s.c0 * t);
    const cplx mi(0.0, -1.0);
    Mat2 m;
    m(0, 0) = phase * (std::cos(x) + mi * (f * s.hz));
    m(1, 1) = phase * (std::cos(x) - mi * (f * s.hz));
    m(0, 1) = phase * mi * (f * cplx(s.hx, -s.hy));
    m(1, 0) = phase * mi * (f * cplx(s.hx, s.hy));
    return m;
}

}  // namespace qmlab
