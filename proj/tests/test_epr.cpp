#include <doctest.h>

#include <cmath>

#include "qmlab/epr.hpp"
#include "qmlab/hilbert.hpp"
#include "test_support.hpp"

using namespace qmlab;

namespace {

// Test-side sampler with the rod rule replaced by parallel drag (the partner
// is moved to the same point instead of the antipode). Used to show that the
// alternative reading of the rod fails anticorrelation.
std::pair<Outcome, Outcome> sample_parallel_drag(const Direction& u1, const Direction& u2,
                                                 CounterRng& rng) {
    const bool sphere1_first = rng.next_unit() < 0.5;
    const Direction& u_first = sphere1_first ? u1 : u2;
    const MeasurementRecord first = sample_outcome(BallState::center(), u_first, rng);
    const Direction landing = first.outcome == Outcome::up ? u_first : u_first.antipode();
    const BallState partner = BallState::surface(landing);  // parallel instead of antipodal
    const MeasurementRecord second = sample_outcome(partner, sphere1_first ? u2 : u1, rng);
    return sphere1_first ? std::make_pair(first.outcome, second.outcome)
                         : std::make_pair(second.outcome, first.outcome);
}

double max_cell_gap(const JointDistribution& a, const JointDistribution& b) {
    return std::max(std::max(std::abs(a.p_uu - b.p_uu), std::abs(a.p_ud - b.p_ud)),
                    std::max(std::abs(a.p_du - b.p_du), std::abs(a.p_dd - b.p_dd)));
}

}  // namespace

TEST_SUITE("epr") {

TEST_CASE("singlet joint probabilities at reference angles") {
    const Direction z(0.0);

    const JointDistribution parallel = singlet_joint_probability(z, z);
    CHECK(parallel.p_uu == 0.0);
    CHECK(parallel.p_ud == 0.5);
    CHECK(parallel.p_du == 0.5);
    CHECK(parallel.p_dd == 0.0);

    const JointDistribution opposite = singlet_joint_probability(z, Direction(kPi));
    CHECK(opposite.p_uu == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(opposite.p_ud == doctest::Approx(0.0).epsilon(1e-15));

    const JointDistribution perp = singlet_joint_probability(z, Direction(0.5 * kPi));
    CHECK(max_cell_gap(perp, {0.25, 0.25, 0.25, 0.25}) < 1e-15);
}

TEST_CASE("the mechanism represents the singlet state") {
    const StateVector4 s = singlet();
    const Direction z(0.0);
    for (int i = 0; i <= 36; ++i) {
        const double alpha = kPi * i / 36.0;
        const Direction u2(alpha);
        CHECK(max_cell_gap(singlet_joint_probability(z, u2),
                           joint_quantum_probability(s, z, u2)) < 1e-12);
    }
    std::mt19937_64 gen(808);
    for (int i = 0; i < 300; ++i) {
        const Direction u1 = testsupport::random_direction(gen);
        const Direction u2 = testsupport::random_direction(gen);
        CHECK(max_cell_gap(singlet_joint_probability(u1, u2),
                           joint_quantum_probability(s, u1, u2)) < 1e-12);
    }
}

TEST_CASE("singlet marginals are one half exactly") {
    std::mt19937_64 gen(909);
    for (int i = 0; i < 300; ++i) {
        const auto m = marginals(singlet_joint_probability(testsupport::random_direction(gen),
                                                           testsupport::random_direction(gen)));
        CHECK(m.first == 0.5);
        CHECK(m.second == 0.5);
    }
}

TEST_CASE("parallel directions always give opposite outcomes") {
    const Direction u(1.2, 0.4);
    CounterRng rng(21);
    for (int i = 0; i < 10'000; ++i) {
        const auto [o1, o2] = sample_singlet(u, u, rng);
        CHECK(o1 != o2);
    }
}

TEST_CASE("antipodal drag is the rod rule; parallel drag fails anticorrelation") {
    const Direction u(0.9, 2.7);
    CHECK(distance(rod_drag(u).vec(), -u.vector()) < 1e-12);

    CounterRng rng(77);
    int parallel_same = 0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        const auto [o1, o2] = sample_parallel_drag(u, u, rng);
        if (o1 == o2) ++parallel_same;
    }
    // parallel drag makes the outcomes agree every time the rod fires;
    // anticorrelation (0 agreement) is unreachable with that rule
    CHECK(double(parallel_same) / n > 0.9);
}

TEST_CASE("sampled joints converge to the closed form") {
    const std::uint64_t n = 1'000'000;
    const Direction z(0.0);

    const JointDistribution expect_third = singlet_joint_probability(z, Direction(kPi / 3.0));
    const auto emp_third = run_epr_trials(z, Direction(kPi / 3.0), n, 1001);
    const JointDistribution f = emp_third.freq();
    CHECK(std::abs(f.p_uu - expect_third.p_uu) <
          testsupport::binomial_4sigma(expect_third.p_uu, double(n)));
    CHECK(std::abs(f.p_ud - expect_third.p_ud) <
          testsupport::binomial_4sigma(expect_third.p_ud, double(n)));

    const auto emp_perp = run_epr_trials(z, Direction(0.5 * kPi), n, 1002);
    const JointDistribution g = emp_perp.freq();
    const double bound = testsupport::binomial_4sigma(0.25, double(n));
    CHECK(std::abs(g.p_uu - 0.25) < bound);
    CHECK(std::abs(g.p_ud - 0.25) < bound);
    CHECK(std::abs(g.p_du - 0.25) < bound);
    CHECK(std::abs(g.p_dd - 0.25) < bound);
}

TEST_CASE("product joint factorizes") {
    const Direction u1(0.3, 0.1), u2(1.9, 4.4);
    const BallState c = BallState::center();

    CHECK(max_cell_gap(product_joint_probability(c, c, u1, u2), {0.25, 0.25, 0.25, 0.25}) == 0.0);

    const JointDistribution aligned =
        product_joint_probability(BallState::surface(u1), BallState::surface(u2), u1, u2);
    CHECK(aligned.p_uu == doctest::Approx(1.0).epsilon(1e-14));

    const JointDistribution half =
        product_joint_probability(c, BallState::surface(u2), u1, u2);
    CHECK(half.p_uu == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(half.p_ud == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(half.p_du == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("correlation is minus the cosine of the angle") {
    const Direction z(0.0);
    CHECK(correlation(z, z) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(correlation(z, Direction(0.5 * kPi)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(correlation(z, Direction(kPi)) == doctest::Approx(1.0).epsilon(1e-15));
    for (int i = 0; i <= 100; ++i) {
        const double alpha = kPi * i / 100.0;
        CHECK(std::abs(correlation(z, Direction(alpha)) + std::cos(alpha)) < 1e-12);
    }
}

TEST_CASE("chsh at reference settings") {
    const double s_opt = chsh(ChshSetting::optimal());
    CHECK(std::abs(s_opt + 2.0 * std::sqrt(2.0)) < 1e-12);

    // a = b, a' = b', a perpendicular to a'
    const double s_perp = chsh(ChshSetting::coplanar(0.0, 0.5 * kPi, 0.0, 0.5 * kPi));
    CHECK(s_perp == doctest::Approx(-2.0).epsilon(1e-14));

    const double s_equal = chsh(ChshSetting::coplanar(0.0, 0.0, 0.0, 0.0));
    CHECK(s_equal == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("grid search saturates the Tsirelson bound") {
    // precompute E on a 24x24 coplanar angle grid (multiples of pi/12)
    constexpr int kSteps = 24;
    double e[kSteps][kSteps];
    for (int i = 0; i < kSteps; ++i)
        for (int j = 0; j < kSteps; ++j) {
            const double ci = 2.0 * kPi * i / kSteps;
            const double cj = 2.0 * kPi * j / kSteps;
            e[i][j] = correlation(Direction::from_vector({std::sin(ci), 0.0, std::cos(ci)}),
                                  Direction::from_vector({std::sin(cj), 0.0, std::cos(cj)}));
        }
    double best = 0.0;
    for (int a = 0; a < kSteps; ++a)
        for (int ap = 0; ap < kSteps; ++ap)
            for (int b = 0; b < kSteps; ++b)
                for (int bp = 0; bp < kSteps; ++bp)
                    best = std::max(best, std::abs(e[a][b] - e[a][bp] + e[ap][b] + e[ap][bp]));
    CHECK(std::abs(best - 2.0 * std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("total variation distance") {
    const JointDistribution quarter{0.25, 0.25, 0.25, 0.25};
    CHECK(tv_distance(quarter, quarter) == 0.0);

    const Direction z(0.0);
    const JointDistribution anti = singlet_joint_probability(z, z);
    CHECK(tv_distance(anti, quarter) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(tv_distance({1, 0, 0, 0}, {0, 1, 0, 0}) == 1.0);
}

TEST_CASE("same marginals, different joints") {
    const Direction z(0.0);
    const BallState c = BallState::center();
    double tv_max = 0.0;
    for (int i = 0; i <= 72; ++i) {
        const double alpha = kPi * i / 72.0;
        const Direction u2(alpha);
        const JointDistribution sj = singlet_joint_probability(z, u2);
        const JointDistribution pj = product_joint_probability(c, c, z, u2);
        const auto ms = marginals(sj);
        const auto mp = marginals(pj);
        CHECK(ms.first == mp.first);
        CHECK(ms.second == mp.second);
        tv_max = std::max(tv_max, tv_distance(sj, pj));
    }
    CHECK(tv_max == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(tv_distance(singlet_joint_probability(z, z),
                      product_joint_probability(c, c, z, z)) ==
          doctest::Approx(tv_max).epsilon(1e-14));
    CHECK(tv_distance(singlet_joint_probability(z, Direction(kPi)),
                      product_joint_probability(c, c, z, Direction(kPi))) ==
          doctest::Approx(tv_max).epsilon(1e-14));
}

TEST_CASE("run_epr_trials determinism") {
    const Direction z(0.0);

    const auto one = run_epr_trials(z, z, 1, 9);
    CHECK(one.n_uu == 0);
    CHECK(one.n_dd == 0);
    CHECK(one.n_ud + one.n_du == 1);

    const auto a = run_epr_trials(z, Direction(1.1), 50'000, 33);
    const auto b = run_epr_trials(z, Direction(1.1), 50'000, 33);
    CHECK(a.n_uu == b.n_uu);
    CHECK(a.n_ud == b.n_ud);
    CHECK(a.n_du == b.n_du);
    CHECK(a.n_dd == b.n_dd);

    for (unsigned shards : {2u, 5u}) {
        const auto sharded = run_epr_trials(z, Direction(1.1), 50'000, 33, 0, shards);
        CHECK(sharded.n_uu == a.n_uu);
        CHECK(sharded.n_ud == a.n_ud);
        CHECK(sharded.n_du == a.n_du);
        CHECK(sharded.n_dd == a.n_dd);
    }

    const auto other_stream = run_epr_trials(z, Direction(1.1), 50'000, 33, 1);
    CHECK(other_stream.n_uu != a.n_uu);

    CHECK_THROWS_AS(run_epr_trials(z, z, 0, 1), std::invalid_argument);
}

TEST_CASE("the singlet preparation starts both particles at the centers") {
    const RodState rod = RodState::singlet_preparation();
    CHECK(rod.w1.radius() == 0.0);
    CHECK(rod.w2.radius() == 0.0);
    CHECK(rod.connected);
}

}  // TEST_SUITE
