// dynamics.hpp
// Two ways to extend an evolution from surface (ray) states to interior
// (density) states of the ball:
//
//   mixture lift: evolve the two decomposition endpoints +-v and keep the
//     ignorance weights (a, b) fixed -- the state stays the same convex
//     combination of the evolved rays;
//   pure lift: evolve the density matrix itself, W -> M W M / tr(M W M).
//
// Under a unitary evolution the two coincide for every decomposition. Under a
// nonlinear evolution (normalized non-unitary conjugation with M = exp(G t),
// G Hermitian) they generally separate, and the separation depends on which
// diameter the interior point was decomposed along -- which is why decompose()
// refuses to pick an axis for the center on its own.

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "qmlab/bloch.hpp"
#include "qmlab/hilbert.hpp"

namespace qmlab {

enum class EvolutionKind { unitary, nonlinear };

struct EvolutionSpec {
    Mat2 generator;      // Hermitian
    EvolutionKind kind;
    double t = 0.0;

    EvolutionSpec at(double time) const { return {generator, kind, time}; }
};

namespace detail {

inline Vec3 bloch_of_spinor(const std::array<cplx, 2>& chi) {
    const cplx cross = std::conj(chi[0]) * chi[1];
    return {2.0 * std::real(cross), 2.0 * std::imag(cross),
            std::norm(chi[0]) - std::norm(chi[1])};
}

// Apply the evolution's 2x2 operator to a spinor and renormalize.
inline std::array<cplx, 2> evolve_spinor(const std::array<cplx, 2>& chi, const EvolutionSpec& spec) {
    const Mat2 m = spec.kind == EvolutionKind::unitary ? unitary_exp(spec.generator, spec.t)
                                                       : herm_exp(spec.generator, spec.t);
    std::array<cplx, 2> out{m(0, 0) * chi[0] + m(0, 1) * chi[1],
                            m(1, 0) * chi[0] + m(1, 1) * chi[1]};
    const double n = std::sqrt(std::norm(out[0]) + std::norm(out[1]));
    out[0] /= n;
    out[1] /= n;
    return out;
}

}  // namespace detail

// Image of the ray state at v: rotate for unitary kind, apply M = exp(G t) to
// the spinor and renormalize for nonlinear kind.
inline Direction evolve_ray(const Direction& v, const EvolutionSpec& spec) {
    if (spec.t == 0.0) return v;
    return Direction::from_vector(detail::bloch_of_spinor(detail::evolve_spinor(v.spinor(), spec)));
}

// a . evolve(v) + b . evolve(-v): endpoints move, ignorance weights stay.
inline BallState mixture_lift(const Decomposition& d, const EvolutionSpec& spec) {
    if (spec.t == 0.0) return recompose(d);
    const Vec3 plus = evolve_ray(d.v, spec).vector();
    const Vec3 minus = evolve_ray(d.v.antipode(), spec).vector();
    return make_ball_state(d.a * plus + d.b * minus);
}

// Variant in which the weights are reweighted by the evolved branch norms;
// algebraically identical to the pure lift, kept as an explicit cross-check.
inline BallState reweighted_mixture_lift(const Decomposition& d, const EvolutionSpec& spec) {
    if (spec.t == 0.0) return recompose(d);
    if (spec.kind == EvolutionKind::unitary) return mixture_lift(d, spec);

    const Mat2 m = herm_exp(spec.generator, spec.t);
    const auto branch = [&](const Direction& v) {
        const auto chi = v.spinor();
        const std::array<cplx, 2> out{m(0, 0) * chi[0] + m(0, 1) * chi[1],
                                      m(1, 0) * chi[0] + m(1, 1) * chi[1]};
        return std::norm(out[0]) + std::norm(out[1]);
    };
    const double wa = d.a * branch(d.v);
    const double wb = d.b * branch(d.v.antipode());
    const double a = wa / (wa + wb);

    const Vec3 plus = evolve_ray(d.v, spec).vector();
    const Vec3 minus = evolve_ray(d.v.antipode(), spec).vector();
    return make_ball_state(a * plus + (1.0 - a) * minus);
}

// Evolved density matrix: U W U^dag (unitary) or M W M / tr(M W M) (nonlinear).
inline Mat2 evolve_density(const Mat2& w, const EvolutionSpec& spec) {
    const Mat2 m = spec.kind == EvolutionKind::unitary ? unitary_exp(spec.generator, spec.t)
                                                       : herm_exp(spec.generator, spec.t);
    Mat2 out = m * w * m.adjoint();
    return (1.0 / std::real(out.trace())) * out;
}

// Ball image of the evolved density matrix.
inline BallState pure_lift(const Mat2& w, const EvolutionSpec& spec) {
    if (spec.t == 0.0) return ball_from_density(w);
    return ball_from_density(evolve_density(w, spec));
}

struct LiftTrajectory {
    std::vector<double> times;
    std::vector<BallState> mixture_points;
    std::vector<BallState> pure_points;
    std::vector<double> divergence;  // Euclidean distance per time point

    double max_divergence() const {
        double mx = 0.0;
        for (double d : divergence) mx = std::max(mx, d);
        return mx;
    }

    double argmax_t() const {
        std::size_t k = 0;
        for (std::size_t i = 1; i < divergence.size(); ++i)
            if (divergence[i] > divergence[k]) k = i;
        return times.empty() ? 0.0 : times[k];
    }
};

// Both lifts evaluated from the same initial decomposition over a time grid
// starting at 0 (where both are the identity, so divergence[0] is exactly 0).
inline LiftTrajectory divergence_trajectory(const Decomposition& d, const EvolutionSpec& spec,
                                            std::span<const double> t_grid,
                                            bool reweighted = false) {
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw std::invalid_argument("divergence_trajectory: grid must start at t = 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1])
            throw std::invalid_argument("divergence_trajectory: grid must be strictly increasing");

    const Mat2 w0 = density_from_ball(d);
    LiftTrajectory traj;
    for (const double t : t_grid) {
        const EvolutionSpec at_t = spec.at(t);
        const BallState mix = t == 0.0 ? recompose(d)
                              : reweighted ? reweighted_mixture_lift(d, at_t)
                                           : mixture_lift(d, at_t);
        const BallState pure = t == 0.0 ? mix : pure_lift(w0, at_t);
        traj.times.push_back(t);
        traj.mixture_points.push_back(mix);
        traj.pure_points.push_back(pure);
        traj.divergence.push_back(distance(mix.vec(), pure.vec()));
    }
    return traj;
}

}  // namespace qmlab
