#include <doctest.h>

#include <cmath>

#include "qmlab/bloch.hpp"
#include "test_support.hpp"

using namespace qmlab;

TEST_SUITE("bloch") {

TEST_CASE("make_ball_state accepts ball points and rejects outside points") {
    const BallState north = make_ball_state(0.0, 0.0, 1.0);
    CHECK(north.radius() == doctest::Approx(1.0).epsilon(1e-15));

    const BallState center = make_ball_state(0.0, 0.0, 0.0);
    CHECK(center.radius() == 0.0);

    CHECK_THROWS_AS(make_ball_state(1.0, 1.0, 1.0), NormExceeded);

    // overshoot below the 1e-9 threshold clamps to the surface
    const BallState clamped = make_ball_state(0.0, 0.0, 1.0 + 5e-10);
    CHECK(clamped.radius() == 1.0);
    CHECK_THROWS_AS(make_ball_state(0.0, 0.0, 1.0 + 2e-9), NormExceeded);
}

TEST_CASE("decompose splits along the state's own diameter") {
    const Decomposition d = decompose(make_ball_state(0.0, 0.0, 0.5));
    CHECK(d.v.theta() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d.a == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(d.b == doctest::Approx(0.25).epsilon(1e-15));

    const Decomposition dc =
        decompose(BallState::center(), Direction::from_vector({1.0, 0.0, 0.0}));
    CHECK(dc.a == 0.5);
    CHECK(dc.b == 0.5);
    CHECK(dc.v.vector().x == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(decompose(BallState::center()), DegenerateDecomposition);
}

TEST_CASE("decompose uses the canonical gauge a >= b") {
    std::mt19937_64 gen(101);
    for (int i = 0; i < 200; ++i) {
        const BallState w = testsupport::random_ball_state(gen);
        if (w.radius() < 1e-9) continue;
        const Decomposition d = decompose(w);
        CHECK(d.a >= d.b);
        CHECK(std::abs(d.a + d.b - 1.0) <= 1e-12);
        CHECK(std::abs((d.a - d.b) - w.radius()) <= 1e-12);
    }
}

TEST_CASE("recompose evaluates (a - b) v") {
    const Direction z(0.0), x = Direction::from_vector({1.0, 0.0, 0.0});
    CHECK(recompose(Decomposition(z, 1.0)).z() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(recompose(Decomposition(x, 0.5)).radius() == 0.0);
    const BallState half = recompose(Decomposition(z, 0.75));
    CHECK(half.z() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(half.x() == 0.0);
}

TEST_CASE("density_from_ball evaluates the entrywise formula") {
    const Mat2 north = density_from_ball(Decomposition(Direction(0.0), 1.0));
    CHECK(approx_equal(north, Mat2{1.0, 0.0, 0.0, 0.0}, 1e-15));

    // equal weights give I/2 no matter the axis
    std::mt19937_64 gen(7);
    for (int i = 0; i < 20; ++i) {
        const Mat2 m = density_from_ball(Decomposition(testsupport::random_direction(gen), 0.5));
        CHECK(approx_equal(m, 0.5 * Mat2::identity(), 1e-15));
    }

    const Mat2 tilted = density_from_ball(Decomposition(Direction(0.5 * kPi, 0.0), 0.75));
    CHECK(approx_equal(tilted, Mat2{0.5, 0.25, 0.25, 0.5}, 1e-15));
}

TEST_CASE("ball_from_density inverts the correspondence") {
    const BallState north = ball_from_density(Mat2{1.0, 0.0, 0.0, 0.0});
    CHECK(north.z() == doctest::Approx(1.0).epsilon(1e-15));

    const BallState center = ball_from_density(0.5 * Mat2::identity());
    CHECK(center.radius() == 0.0);
}

TEST_CASE("ball_from_density rejects invalid matrices") {
    const cplx i(0.0, 1.0);
    CHECK_THROWS_AS(ball_from_density(Mat2{0.5, i, i, 0.5}), InvalidDensity);
    CHECK_THROWS_AS(ball_from_density(Mat2{0.6, 0.0, 0.0, 0.6}), InvalidDensity);
    CHECK_THROWS_AS(ball_from_density(Mat2{1.25, 0.0, 0.0, -0.25}), InvalidDensity);
}

TEST_CASE("density eigenvalues are (1 +- |w|)/2") {
    std::mt19937_64 gen(2025);
    for (int i = 0; i < 500; ++i) {
        const Decomposition d = testsupport::random_decomposition(gen);
        const Mat2 w = density_from_ball(d);
        const BallState ball = ball_from_density(w);
        const auto [lo, hi] = testsupport::jacobi_eigenvalues(w);
        CHECK(std::abs(lo - 0.5 * (1.0 - ball.radius())) < 1e-10);
        CHECK(std::abs(hi - 0.5 * (1.0 + ball.radius())) < 1e-10);
    }
}

TEST_CASE("round trip over random decompositions") {
    std::mt19937_64 gen(99);
    for (int i = 0; i < 1000; ++i) {
        const Decomposition d = testsupport::random_decomposition(gen);
        const BallState back = ball_from_density(density_from_ball(d));
        CHECK(distance(back.vec(), recompose(d).vec()) < 1e-10);
    }
}

TEST_CASE("spectrum of the density is exactly the weight pair") {
    std::mt19937_64 gen(1234);
    for (int i = 0; i < 1000; ++i) {
        const Decomposition d = testsupport::random_decomposition(gen);
        const auto [lo, hi] = testsupport::jacobi_eigenvalues(density_from_ball(d));
        CHECK(std::abs(lo - std::min(d.a, d.b)) < 1e-10);
        CHECK(std::abs(hi - std::max(d.a, d.b)) < 1e-10);
    }
}

TEST_CASE("surface states are exactly the rank-1 projectors") {
    std::mt19937_64 gen(31);
    for (int i = 0; i < 100; ++i) {
        const Direction v = testsupport::random_direction(gen);
        const Mat2 p = density_from_ball(Decomposition(v, 1.0));
        CHECK(testsupport::jacobi_eigenvalues(p).first < 1e-10);
        CHECK(approx_equal(p * p, p, 1e-12));  // projector
    }
    // interior points have strictly positive spectrum
    const Mat2 inner = density_from_ball(decompose(make_ball_state(0.2, 0.1, -0.3)));
    CHECK(testsupport::jacobi_eigenvalues(inner).first > 1e-3);
}

TEST_CASE("density map is affine in the weights at fixed axis") {
    std::mt19937_64 gen(55);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Direction v = testsupport::random_direction(gen);
        const double a1 = u(gen), a2 = u(gen), lambda = u(gen);
        const Mat2 w1 = density_from_ball(Decomposition(v, a1));
        const Mat2 w2 = density_from_ball(Decomposition(v, a2));
        const Mat2 mixed =
            density_from_ball(Decomposition(v, lambda * a1 + (1.0 - lambda) * a2));
        CHECK(approx_equal(mixed, lambda * w1 + (1.0 - lambda) * w2, 1e-12));
    }
}

TEST_CASE("directions wrap azimuth and reject bad polar angles") {
    const Direction d(0.5, -1.0);
    CHECK(d.phi() == doctest::Approx(2.0 * kPi - 1.0).epsilon(1e-15));
    CHECK_THROWS_AS(Direction(4.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Direction::from_vector({0.0, 0.0, 0.0}), std::invalid_argument);

    const Direction x = Direction::from_vector({1.0, 0.0, 0.0});
    const Direction mx = x.antipode();
    CHECK(distance(mx.vector(), {-1.0, 0.0, 0.0}) < 1e-15);
    CHECK(angle_between(x, mx) == doctest::Approx(kPi).epsilon(1e-15));
}

}  // TEST_SUITE
