#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "roadfield/errors.hpp"
#include "roadfield/stationary.hpp"

using namespace roadfield;

namespace {
const FieldReaction kLogistic = FieldReaction::logistic(1.0);

// hand-rolled bisection on theta, independent of the library root finder
double theta_root(const ModelParams& p, const FieldReaction& f, double rho, double lo,
                  double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (theta_mortality(p, f, rho, mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("theta in the mortality case") {
    const ModelParams p(1, 1, 1, 1, 0);
    CHECK(theta_mortality(p, kLogistic, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(theta_mortality(p, kLogistic, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(theta_mortality(p, kLogistic, 1.0, 1.1), std::invalid_argument);

    // closed form for the unit logistic: sigma^2/8 - (1/6 - sigma^2/2 + sigma^3/3)
    for (double s : {0.0, 0.25, 0.5, 0.635, 0.9, 1.0}) {
        const double closed = s * s / 8.0 - (1.0 / 6.0 - s * s / 2.0 + s * s * s / 3.0);
        CHECK(theta_mortality(p, kLogistic, 1.0, s) == doctest::Approx(closed).epsilon(1e-14));
    }

    // theta(0) < 0 <= theta(1) for any admissible rho and f
    oracles::Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        const ModelParams pr(rng.uniform(0.3, 3), 1, rng.uniform(0.3, 3), rng.uniform(0.3, 3), 0);
        const FieldReaction fr = FieldReaction::logistic(rng.uniform(0.3, 3));
        const double rho = rng.uniform(0.0, 4.0);
        CHECK(theta_mortality(pr, fr, rho, 0.0) < 0.0);
        CHECK(theta_mortality(pr, fr, rho, 1.0) >= 0.0);
    }
}

TEST_CASE("mortality stationary profile via the theta root") {
    const ModelParams p(1, 1, 1, 1, 0);

    // rho = 0: exactly (nu/mu, 1)
    const auto flat = stationary_mortality(p, kLogistic, 0.0);
    CHECK(flat.U == 1.0);
    CHECK(flat.V0 == 1.0);
    CHECK(flat.V_prime_0 == 0.0);
    CHECK(flat.converged);
    CHECK(*std::max_element(flat.V.begin(), flat.V.end()) == 1.0);
    CHECK(*std::min_element(flat.V.begin(), flat.V.end()) == 1.0);

    // rho = 1: root of 8 s^3 - 15 s^2 + 4 (the closed form above, cleared)
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        ((8.0 * m * m * m - 15.0 * m * m + 4.0) > 0.0 ? lo : hi) = m;
    }
    const double sigma_cubic = 0.5 * (lo + hi);
    CHECK(sigma_cubic == doctest::Approx(0.6350008536).epsilon(1e-8));  // frozen
    const auto prof = stationary_mortality(p, kLogistic, 1.0);
    CHECK(prof.V0 == doctest::Approx(sigma_cubic).epsilon(1e-12));
    CHECK(prof.U == doctest::Approx(sigma_cubic / 2.0).epsilon(1e-12));
    CHECK(prof.V_prime_0 == doctest::Approx(sigma_cubic / 2.0).epsilon(1e-12));
    CHECK(prof.converged);
    CHECK(prof.residual < 1e-8);

    // two distinct starting brackets land on the same root
    CHECK(theta_root(p, kLogistic, 1.0, 0.0, 1.0) ==
          doctest::Approx(theta_root(p, kLogistic, 1.0, 0.5, 1.0)).epsilon(1e-12));

    // energy identity at the boundary: d V'(0)^2 / 2 = int_{V0}^1 f
    CHECK(p.d * prof.V_prime_0 * prof.V_prime_0 / 2.0 ==
          doctest::Approx(kLogistic.integral(prof.V0, 1.0)).epsilon(1e-12));

    // increasing mortality depresses the road density
    const double U1 = stationary_mortality(p, kLogistic, 1.0).U;
    const double U10 = stationary_mortality(p, kLogistic, 10.0).U;
    const double U100 = stationary_mortality(p, kLogistic, 100.0).U;
    CHECK(U1 > U10);
    CHECK(U10 > U100);
    CHECK(U100 < 0.05);
}

TEST_CASE("shooting classification") {
    const ModelParams p(1, 1, 1, 1, 0);
    const RoadReaction mort = RoadReaction::mortality(1.0);

    // U at or above max(nu/mu, S): the trajectory never touches zero
    for (double U : {1.0, 1.5, 3.0}) {
        const auto shot = shoot(p, mort, kLogistic, U);
        CHECK(in_shooting_set(shot.outcome));
        CHECK(*std::min_element(shot.V.begin(), shot.V.end()) >= 1.0);
    }

    // no road reaction at U = nu/mu: the flat trajectory
    const auto flat = shoot(p, RoadReaction::zero(), kLogistic, 1.0);
    CHECK(flat.outcome == ShotOutcome::PositiveBounded);
    CHECK(*std::max_element(flat.V.begin(), flat.V.end()) == 1.0);
    CHECK(*std::min_element(flat.V.begin(), flat.V.end()) == 1.0);

    // small U with mortality: dies at a finite height
    const auto small = shoot(p, mort, kLogistic, 1e-3);
    CHECK(small.outcome == ShotOutcome::HitsZero);
    CHECK(small.event_y > 0.0);
    CHECK(small.event_y < 50.0);

    // Hamiltonian is conserved along the discrete trajectory
    CHECK(small.energy_drift < 1e-10);
    const auto mid = shoot(p, mort, kLogistic, 0.25);
    CHECK(mid.energy_drift < 1e-10);

    // a coarse step trips the drift detector
    CHECK_THROWS_AS(shoot(p, mort, kLogistic, 0.317, 50.0, 2.0), NumericalError);
    CHECK_THROWS_AS(shoot(p, mort, kLogistic, 0.0), std::invalid_argument);
}

TEST_CASE("shooting bisection agrees with the theta root") {
    const ModelParams p(1, 1, 1, 1, 0);
    for (double rho : {0.5, 1.0, 2.0}) {
        const auto via_theta = stationary_mortality(p, kLogistic, rho);
        const auto via_shoot = find_Ustar(p, RoadReaction::mortality(rho), kLogistic, 1e-13);
        CHECK(std::abs(via_theta.U - via_shoot.U) < 1e-8);
        CHECK(std::abs(via_theta.V0 - via_shoot.V0) < 1e-8);
        CHECK(via_shoot.converged);
        CHECK_FALSE(via_shoot.minimal_candidate);
    }
    const auto zero = find_Ustar(p, RoadReaction::zero(), kLogistic, 1e-13);
    CHECK(zero.U == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniqueness: the located boundary is probe independent") {
    const ModelParams p(1, 1, 2, 1, 0);
    const RoadReaction g = RoadReaction::logistic(1.0, 1.0);
    const auto base = find_Ustar(p, g, kLogistic, 1e-12);
    oracles::Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        const double probe = rng.uniform(1e-4, 4.0);
        const auto alt = find_Ustar(p, g, kLogistic, 1e-12, 0.0, 1e-3, probe);
        CHECK(std::abs(alt.U - base.U) < 1e-8);
    }
}

TEST_CASE("general theta") {
    const ModelParams p(1, 1, 1, 1, 0);
    CHECK(theta_general(p, RoadReaction::zero(), kLogistic, 1.0) == 0.0);  // G = 1, g = 0
    CHECK_THROWS_AS(theta_general(p, RoadReaction::zero(), kLogistic, 0.0),
                    std::invalid_argument);

    // mortality: theta_general(sigma) = 2 d theta(G(sigma)) with G = (mu+rho) sigma / nu
    const RoadReaction mort = RoadReaction::mortality(1.0);
    for (double s : {0.05, 0.1, 0.2, 0.35, 0.5}) {
        const double G = (p.mu * s - mort(s)) / p.nu;
        REQUIRE(G <= 1.0);
        CHECK(theta_general(p, mort, kLogistic, s) ==
              doctest::Approx(2.0 * p.d * theta_mortality(p, kLogistic, 1.0, G))
                  .epsilon(1e-12));
    }

    // vanishes at the shooting root whenever the monotone window applies
    const ModelParams p2(1, 1, 2, 1, 0);
    const RoadReaction g = RoadReaction::logistic(1.0, 1.0);
    REQUIRE(g.S_M() <= (p2.nu + g(g.S_M())) / p2.mu);
    const auto prof = find_Ustar(p2, g, kLogistic, 1e-13);
    CHECK(std::abs(theta_general(p2, g, kLogistic, prof.U)) < 1e-6);
}

TEST_CASE("structural bounds and sign chains") {
    const FieldReaction f = kLogistic;

    // mortality: S* = 0 <= nu/mu, so U <= nu/mu and V <= 1
    const ModelParams p(1, 1, 1, 1, 0);
    const RoadReaction mort = RoadReaction::mortality(1.0);
    const auto prof = stationary_mortality(p, f, 1.0);
    CHECK(check_bounds(prof, p, mort));
    CHECK(mort(prof.U) < 0.0);
    CHECK(prof.V0 < 1.0);
    CHECK(prof.V_prime_0 > 0.0);

    // road logistic with S* = 1 > nu/mu = 0.5: U in [0.5, 1], V >= 1
    const ModelParams p2(1, 1, 2, 1, 0);
    const RoadReaction g = RoadReaction::logistic(1.0, 1.0);
    const auto prof2 = find_Ustar(p2, g, f, 1e-13);
    CHECK(check_bounds(prof2, p2, g));
    CHECK(prof2.U >= 0.5 - 1e-9);
    CHECK(prof2.U <= 1.0 + 1e-9);
    CHECK(g(prof2.U) > 0.0);
    CHECK(prof2.V0 > 1.0);
    CHECK(prof2.V_prime_0 < 0.0);

    // no road reaction: both branches collapse to (nu/mu, 1)
    const auto prof3 = stationary_mortality(p, f, 0.0);
    CHECK(check_bounds(prof3, p, RoadReaction::zero()));
    CHECK(prof3.V_prime_0 == 0.0);
}

TEST_CASE("hamiltonian conservation across parameter draws") {
    oracles::Rng rng(17);
    for (int i = 0; i < 12; ++i) {
        const ModelParams p(rng.uniform(0.4, 2.5), 1, rng.uniform(0.4, 2.5),
                            rng.uniform(0.4, 2.5), 0);
        const FieldReaction f = FieldReaction::logistic(rng.uniform(0.4, 2.0));
        const RoadReaction g = RoadReaction::mortality(rng.uniform(0.0, 2.0));
        const auto shot = shoot(p, g, f, rng.uniform(0.05, 2.0), 30.0, 1e-3);
        CHECK(shot.energy_drift < 1e-9);
    }
}

TEST_CASE("theta root bracketing rejects a degenerate field reaction") {
    const ModelParams p(1, 1, 1, 1, 0);
    // with f identically zero theta(0) = 0: no sign change to bracket
    const auto f0 = FieldReaction::custom([](double) { return 0.0; }, 1.0, false);
    CHECK_THROWS_AS(stationary_mortality(p, f0, 1.0), NumericalError);
}
