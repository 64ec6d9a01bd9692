// bloch.hpp
// Geometry of the closed unit ball of spin states: directions on the surface,
// ball points, antipodal convex decompositions, and the bijection between ball
// points and 2x2 density matrices
//
//   W(w) = [ a cos^2(t/2) + b sin^2(t/2)        (a-b) sin(t/2) cos(t/2) e^{-i p} ]
//          [ (a-b) sin(t/2) cos(t/2) e^{+i p}   a sin^2(t/2) + b cos^2(t/2)     ]
//
// for w = (a - b) v with v the unit vector at polar angle t, azimuth p.
// Surface points (|w| = 1) map to rank-1 projectors (ray states); interior
// points to mixed density matrices. Equivalently W = (I + w . sigma) / 2.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "qmlab/errors.hpp"
#include "qmlab/matrix.hpp"

namespace qmlab {

inline constexpr double kPi = 3.14159265358979323846;

// Exact-algebra tolerance, post-eigensolve tolerance, clamp-to-ball threshold.
inline constexpr double kTolAlgebra = 1e-12;
inline constexpr double kTolEigen = 1e-10;
inline constexpr double kTolClamp = 1e-9;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

// A point on the surface of the ball, stored as polar angle theta in [0, pi]
// (measured from +z) and azimuth phi in [0, 2pi).
class Direction {
  public:
    Direction(double theta, double phi = 0.0) : theta_(theta), phi_(wrap_azimuth(phi)) {
        if (theta < -kTolClamp || theta > kPi + kTolClamp)
            throw std::invalid_argument("Direction: theta must lie in [0, pi]");
        theta_ = std::clamp(theta_, 0.0, kPi);
    }

    static Direction from_vector(const Vec3& v) {
        const double n = norm(v);
        if (n < 1e-12) throw std::invalid_argument("Direction: zero vector");
        const double ct = std::clamp(v.z / n, -1.0, 1.0);
        double phi = std::atan2(v.y, v.x);
        if (phi < 0.0) phi += 2.0 * kPi;
        return Direction(std::acos(ct), phi);
    }

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    Vec3 vector() const {
        const double st = std::sin(theta_);
        return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
    }

    // Spin-up spinor along this direction: (cos(t/2), e^{i p} sin(t/2)).
    std::array<cplx, 2> spinor() const {
        const double c = std::cos(0.5 * theta_);
        const double s = std::sin(0.5 * theta_);
        return {cplx(c, 0.0), std::polar(s, phi_)};
    }

    Direction antipode() const { return Direction(kPi - theta_, phi_ + kPi); }

  private:
    static double wrap_azimuth(double phi) {
        phi = std::fmod(phi, 2.0 * kPi);
        if (phi < 0.0) phi += 2.0 * kPi;
        return phi;
    }

    double theta_;
    double phi_;
};

inline double angle_between(const Direction& u1, const Direction& u2) {
    return std::acos(std::clamp(dot(u1.vector(), u2.vector()), -1.0, 1.0));
}

// A point of the closed unit ball. Surface points are ray states, interior
// points density states. Construct through make_ball_state (clamps sub-1e-9
// norm overshoot, rejects anything larger).
class BallState {
  public:
    static BallState center() { return BallState(Vec3{0.0, 0.0, 0.0}); }
    static BallState surface(const Direction& u) { return BallState(u.vector()); }

    const Vec3& vec() const { return w_; }
    double x() const { return w_.x; }
    double y() const { return w_.y; }
    double z() const { return w_.z; }
    double radius() const { return norm(w_); }

  private:
    explicit BallState(const Vec3& w) : w_(w) {}

    friend BallState make_ball_state(const Vec3& w);

    Vec3 w_;
};

inline BallState make_ball_state(const Vec3& w) {
    const double n = norm(w);
    if (n > 1.0 + kTolClamp) throw NormExceeded(n);
    if (n > 1.0) return BallState((1.0 / n) * w);
    return BallState(w);
}

inline BallState make_ball_state(double x, double y, double z) {
    return make_ball_state(Vec3{x, y, z});
}

// w written as the convex combination a.v + b.(-v) of two antipodal surface
// points, i.e. w = (a - b) v with a + b = 1.
struct Decomposition {
    Direction v;
    double a;
    double b;

    Decomposition(const Direction& axis, double weight_a, double weight_b)
        : v(axis), a(weight_a), b(weight_b) {
        if (a < -kTolAlgebra || a > 1.0 + kTolAlgebra || b < -kTolAlgebra || b > 1.0 + kTolAlgebra ||
            std::abs(a + b - 1.0) > kTolAlgebra)
            throw std::invalid_argument("Decomposition: weights must be in [0,1] with a + b = 1");
    }

    Decomposition(const Direction& axis, double weight_a)
        : Decomposition(axis, weight_a, 1.0 - weight_a) {}
};

// Canonical gauge: v = w/|w| with a >= b. The center admits every diameter, so
// callers must say which one they mean; axis is ignored away from the center.
inline Decomposition decompose(const BallState& w, std::optional<Direction> axis = std::nullopt) {
    const double r = w.radius();
    if (r < kTolClamp) {
        if (!axis) throw DegenerateDecomposition();
        return Decomposition(*axis, 0.5, 0.5);
    }
    const double a = 0.5 * (1.0 + r);
    return Decomposition(Direction::from_vector(w.vec()), a, 1.0 - a);
}

inline BallState recompose(const Decomposition& d) {
    return make_ball_state((d.a - d.b) * d.v.vector());
}

// The density matrix of the decomposition, evaluated entrywise at (a, b, theta, phi).
inline Mat2 density_from_ball(const Decomposition& d) {
    const double c = std::cos(0.5 * d.v.theta());
    const double s = std::sin(0.5 * d.v.theta());
    const cplx off = std::polar((d.a - d.b) * s * c, -d.v.phi());
    Mat2 w;
    w(0, 0) = d.a * c * c + d.b * s * s;
    w(0, 1) = off;
    w(1, 0) = std::conj(off);
    w(1, 1) = d.a * s * s + d.b * c * c;
    return w;
}

// Throws InvalidDensity unless W is Hermitian, unit-trace and PSD within tolerance.
inline void validate_density(const Mat2& w) {
    if (!is_hermitian(w, kTolAlgebra)) throw InvalidDensity("not Hermitian");
    if (std::abs(w.trace() - 1.0) > kTolAlgebra) throw InvalidDensity("trace differs from 1");
    if (hermitian_eigenvalues(w).lo < -kTolAlgebra) throw InvalidDensity("negative eigenvalue");
}

// Inverse of density_from_ball up to decomposition gauge: recovers the ball
// point w of W = (I + w . sigma) / 2.
inline BallState ball_from_density(const Mat2& w) {
    validate_density(w);
    return make_ball_state(2.0 * std::real(w(0, 1)), -2.0 * std::imag(w(0, 1)),
                           std::real(w(0, 0) - w(1, 1)));
}

}  // namespace qmlab
