// distribution.hpp
// Probability distributions over the four joint outcomes of a two-sided spin
// experiment, with marginals, the CHSH-style correlation combination, and
// total variation distance.

#pragma once

#include <cmath>
#include <utility>

namespace qmlab {

// Probabilities of (up,up), (up,down), (down,up), (down,down).
struct JointDistribution {
    double p_uu = 0.0;
    double p_ud = 0.0;
    double p_du = 0.0;
    double p_dd = 0.0;

    double sum() const { return p_uu + p_ud + p_du + p_dd; }
};

// (P(up) on side 1, P(up) on side 2).
inline std::pair<double, double> marginals(const JointDistribution& j) {
    return {j.p_uu + j.p_ud, j.p_uu + j.p_du};
}

// Expectation of the +/-1 outcome product.
inline double correlation_of(const JointDistribution& j) {
    return j.p_uu - j.p_ud - j.p_du + j.p_dd;
}

// Half the L1 distance; 0 for identical distributions, 1 for disjoint support.
inline double tv_distance(const JointDistribution& a, const JointDistribution& b) {
    return 0.5 * (std::abs(a.p_uu - b.p_uu) + std::abs(a.p_ud - b.p_ud) +
                  std::abs(a.p_du - b.p_du) + std::abs(a.p_dd - b.p_dd));
}

}  // namespace qmlab
