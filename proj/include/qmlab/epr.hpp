// epr.hpp
// The coupled two-sphere model: two quantum machines whose particles start at
// the centers of their balls, joined by a rigid rod. Measuring u1 on sphere 1
// and u2 on sphere 2 runs a five-step protocol:
//
//   (i)   one of the two elastics breaks first, each with probability 1/2;
//   (ii)  that machine fires from the center, giving up/down with probability
//         1/2 each and leaving its particle at +-u_i;
//   (iii) the rod drags the partner particle to the antipode of the first
//         particle's landing point;
//   (iv)  the rod disconnects;
//   (v)   the remaining machine fires from that surface state.
//
// The resulting joint distribution is
//   p_uu = p_dd = sin^2(alpha/2) / 2,  p_ud = p_du = cos^2(alpha/2) / 2
// with alpha the angle between u1 and u2 -- the singlet-state statistics.

#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <utility>
#include <vector>

#include "qmlab/bloch.hpp"
#include "qmlab/distribution.hpp"
#include "qmlab/machine.hpp"
#include "qmlab/rng.hpp"

namespace qmlab {

// Both particles at their centers, rod attached: the singlet preparation.
struct RodState {
    BallState w1;
    BallState w2;
    bool connected;

    static RodState singlet_preparation() {
        return {BallState::center(), BallState::center(), true};
    }
};

struct ChshSetting {
    Direction a;
    Direction a_prime;
    Direction b;
    Direction b_prime;

    // Directions in the xz-plane at the given polar angles.
    static ChshSetting coplanar(double a, double a_prime, double b, double b_prime) {
        const auto dir = [](double chi) {
            return Direction::from_vector({std::sin(chi), 0.0, std::cos(chi)});
        };
        return {dir(a), dir(a_prime), dir(b), dir(b_prime)};
    }

    // The Tsirelson-saturating setting (0, pi/2, pi/4, 3pi/4).
    static ChshSetting optimal() { return coplanar(0.0, 0.5 * kPi, 0.25 * kPi, 0.75 * kPi); }
};

// Singlet joint probabilities. The complementary cells are computed as
// 1/2 - p so that each marginal is exactly 1/2 and the four cells sum to 1.
inline JointDistribution singlet_joint_probability(const Direction& u1, const Direction& u2) {
    const double half_alpha = 0.5 * angle_between(u1, u2);
    const double s = std::sin(half_alpha);
    const double p_same = 0.5 * s * s;
    return {p_same, 0.5 - p_same, 0.5 - p_same, p_same};
}

// Rigid-rod displacement rule: the partner ends at the antipode of the first
// particle's landing point.
inline BallState rod_drag(const Direction& landing) {
    return BallState::surface(landing.antipode());
}

// One run of the five-step protocol. Consumes exactly three draws
// (coin, first elastic, second elastic); outcomes are returned in
// (side 1, side 2) order regardless of which elastic broke first.
inline std::pair<Outcome, Outcome> sample_singlet(const Direction& u1, const Direction& u2,
                                                  CounterRng& rng) {
    RodState rod = RodState::singlet_preparation();

    const bool sphere1_first = rng.next_unit() < 0.5;                       // (i)
    const Direction& u_first = sphere1_first ? u1 : u2;
    const MeasurementRecord first =
        sample_outcome(sphere1_first ? rod.w1 : rod.w2, u_first, rng);      // (ii)

    const Direction landing = first.outcome == Outcome::up ? u_first : u_first.antipode();
    const BallState partner = rod_drag(landing);                            // (iii)
    rod.connected = false;                                                  // (iv)

    const MeasurementRecord second =
        sample_outcome(partner, sphere1_first ? u2 : u1, rng);              // (v)

    return sphere1_first ? std::make_pair(first.outcome, second.outcome)
                         : std::make_pair(second.outcome, first.outcome);
}

// Factorized joint of two disconnected machines.
inline JointDistribution product_joint_probability(const BallState& w1, const BallState& w2,
                                                   const Direction& u1, const Direction& u2) {
    const auto p1 = analytic_probability(w1, u1);
    const auto p2 = analytic_probability(w2, u2);
    return {p1.p_up * p2.p_up, p1.p_up * p2.p_down, p1.p_down * p2.p_up, p1.p_down * p2.p_down};
}

// Singlet correlation E(u1, u2) = -cos(alpha), via the outcome-product combination.
inline double correlation(const Direction& u1, const Direction& u2) {
    return correlation_of(singlet_joint_probability(u1, u2));
}

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'); |S| <= 2 sqrt(2) for this model.
inline double chsh(const ChshSetting& s) {
    return correlation(s.a, s.b) - correlation(s.a, s.b_prime) + correlation(s.a_prime, s.b) +
           correlation(s.a_prime, s.b_prime);
}

struct EmpiricalJoint {
    std::uint64_t n_uu = 0;
    std::uint64_t n_ud = 0;
    std::uint64_t n_du = 0;
    std::uint64_t n_dd = 0;
    std::uint64_t n_total = 0;

    JointDistribution freq() const {
        const double n = static_cast<double>(n_total);
        return {static_cast<double>(n_uu) / n, static_cast<double>(n_ud) / n,
                static_cast<double>(n_du) / n, static_cast<double>(n_dd) / n};
    }

    double correlation() const {
        return (static_cast<double>(n_uu) - static_cast<double>(n_ud) -
                static_cast<double>(n_du) + static_cast<double>(n_dd)) /
               static_cast<double>(n_total);
    }
};

// n protocol runs from a deterministic counter-indexed stream (three draws per
// trial), shardable with bit-identical merge. `stream` selects an independent
// substream of the same seed, e.g. one per CHSH setting.
inline EmpiricalJoint run_epr_trials(const Direction& u1, const Direction& u2, std::uint64_t n,
                                     std::uint64_t seed, std::uint64_t stream = 0,
                                     unsigned shards = 1) {
    if (n == 0) throw std::invalid_argument("run_epr_trials: need at least one trial");
    if (shards == 0) shards = 1;
    constexpr std::uint64_t kDrawsPerTrial = 3;

    struct Cells {
        std::uint64_t uu = 0, ud = 0, du = 0, dd = 0;
    };
    const auto count_range = [&](std::uint64_t lo, std::uint64_t hi) {
        CounterRng rng(seed, stream);
        Cells c;
        for (std::uint64_t i = lo; i < hi; ++i) {
            rng.seek(i * kDrawsPerTrial);
            const auto [o1, o2] = sample_singlet(u1, u2, rng);
            if (o1 == Outcome::up)
                (o2 == Outcome::up ? c.uu : c.ud) += 1;
            else
                (o2 == Outcome::up ? c.du : c.dd) += 1;
        }
        return c;
    };

    Cells total;
    if (shards == 1) {
        total = count_range(0, n);
    } else {
        std::vector<std::future<Cells>> parts;
        for (unsigned s = 0; s < shards; ++s) {
            const std::uint64_t lo = n * s / shards;
            const std::uint64_t hi = n * (s + 1) / shards;
            parts.push_back(std::async(std::launch::async, count_range, lo, hi));
        }
        for (auto& p : parts) {
            const Cells c = p.get();
            total.uu += c.uu;
            total.ud += c.ud;
            total.du += c.du;
            total.dd += c.dd;
        }
    }
    return {total.uu, total.ud, total.du, total.dd, n};
}

}  // namespace qmlab
