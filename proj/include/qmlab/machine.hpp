// machine.hpp
// The single quantum machine. A measurement along u stretches an elastic
// between the surface points +u and -u; the particle at w drops orthogonally
// onto it (landing at signed coordinate d = w . u along the diameter), the
// elastic breaks at a uniform point, and the particle is pulled to whichever
// end its piece is still attached to. Breaking strictly below the particle's
// foot pulls it to +u ("up"); ties resolve to "down".
//
// Outcome probabilities are the two segment lengths over the total length:
// p_up = (1 + w . u) / 2, which is exactly the trace rule tr(W(w) P_u).

#pragma once

#include <cstdint>
#include <future>
#include <stdexcept>
#include <vector>

#include "qmlab/bloch.hpp"
#include "qmlab/rng.hpp"

namespace qmlab {

enum class Outcome { up, down };

struct MeasurementRecord {
    Outcome outcome;
    BallState post_state;  // surface point +u (up) or -u (down)
    double break_point;    // uniform draw on [-1, 1)
};

struct OutcomeProbabilities {
    double p_up;
    double p_down;
};

struct EmpiricalDistribution {
    std::uint64_t n_up = 0;
    std::uint64_t n_down = 0;
    std::uint64_t n_total = 0;
    double freq_up = 0.0;
    double freq_down = 0.0;

    static EmpiricalDistribution from_counts(std::uint64_t up, std::uint64_t total) {
        EmpiricalDistribution e;
        e.n_up = up;
        e.n_down = total - up;
        e.n_total = total;
        e.freq_up = static_cast<double>(up) / static_cast<double>(total);
        e.freq_down = 1.0 - e.freq_up;
        return e;
    }
};

// Elastic-length probabilities; p_up + p_down = 1 exactly.
inline OutcomeProbabilities analytic_probability(const BallState& w, const Direction& u) {
    const double p_up = 0.5 * (1.0 + dot(w.vec(), u.vector()));
    return {p_up, 1.0 - p_up};
}

// One run of the break-point mechanism. Consumes exactly one draw.
inline MeasurementRecord sample_outcome(const BallState& w, const Direction& u, CounterRng& rng) {
    const double foot = dot(w.vec(), u.vector());
    const double beta = rng.next_symmetric();
    if (beta < foot) return {Outcome::up, BallState::surface(u), beta};
    return {Outcome::down, BallState::surface(u.antipode()), beta};
}

// n independent trials from a deterministic counter-indexed stream: trial i
// always uses draw i, so the counts are identical for every shard split.
inline EmpiricalDistribution run_trials(const BallState& w, const Direction& u, std::uint64_t n,
                                        std::uint64_t seed, unsigned shards = 1) {
    if (n == 0) throw std::invalid_argument("run_trials: need at least one trial");
    if (shards == 0) shards = 1;

    const auto count_range = [&](std::uint64_t lo, std::uint64_t hi) {
        CounterRng rng(seed);
        std::uint64_t up = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            rng.seek(i);
            if (sample_outcome(w, u, rng).outcome == Outcome::up) ++up;
        }
        return up;
    };

    std::uint64_t up = 0;
    if (shards == 1) {
        up = count_range(0, n);
    } else {
        std::vector<std::future<std::uint64_t>> parts;
        for (unsigned s = 0; s < shards; ++s) {
            const std::uint64_t lo = n * s / shards;
            const std::uint64_t hi = n * (s + 1) / shards;
            parts.push_back(std::async(std::launch::async, count_range, lo, hi));
        }
        for (auto& p : parts) up += p.get();
    }
    return EmpiricalDistribution::from_counts(up, n);
}

}  // namespace qmlab
