#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "roadfield/errors.hpp"
#include "roadfield/simulate.hpp"

using namespace roadfield;

namespace {
const FieldReaction kLogistic = FieldReaction::logistic(1.0);
const RoadReaction kNoRoad = RoadReaction::zero();

GridSpec small_grid() {
    GridSpec g;
    g.Lx = 20.0;
    g.Ly = 8.0;
    g.dx = 0.25;
    g.dy = 0.25;
    g.T = 5.0;
    return g;
}

bool leq_all(const SimState& a, const SimState& b, double slack = 0.0) {
    for (size_t i = 0; i < a.u.size(); ++i)
        if (a.u[i] > b.u[i] + slack) return false;
    for (size_t i = 0; i < a.v.size(); ++i)
        if (a.v[i] > b.v[i] + slack) return false;
    return true;
}
}  // namespace

TEST_CASE("zero state is a fixed point") {
    const GridSpec grid = small_grid();
    const ModelParams p(1, 2, 1, 1, 0.5);
    SimState s = make_initial(grid, 1.0, 1.0);
    std::fill(s.u.begin(), s.u.end(), 0.0);
    for (int k = 0; k < 5; ++k) s = step(s, p, kLogistic, kNoRoad, grid);
    CHECK(*std::max_element(s.u.begin(), s.u.end()) == 0.0);
    CHECK(*std::max_element(s.v.begin(), s.v.end()) == 0.0);
}

TEST_CASE("positivity is preserved") {
    const GridSpec grid = small_grid();
    const ModelParams p(1, 2, 1.5, 0.7, 1.2);
    SimState s = make_initial(grid, 1.0, 1.0);
    const RoadReaction g = RoadReaction::mortality(1.0);
    for (int k = 0; k < 200; ++k) {
        s = step(s, p, kLogistic, g, grid);
        CHECK(*std::min_element(s.u.begin(), s.u.end()) >= 0.0);
        CHECK(*std::min_element(s.v.begin(), s.v.end()) >= 0.0);
    }
}

TEST_CASE("ordered initial data stay ordered") {
    const GridSpec grid = small_grid();
    const ModelParams p(1, 2, 1, 1, 0.8);
    const RoadReaction g = RoadReaction::mortality(0.5);  // monotone reaction
    SimState lo = make_initial(grid, 0.5, 1.0);
    SimState hi = make_initial(grid, 1.0, 2.0);
    std::fill(hi.v.begin(), hi.v.end(), 0.3);
    REQUIRE(leq_all(lo, hi));
    for (int k = 0; k < 300; ++k) {
        lo = step(lo, p, kLogistic, g, grid);
        hi = step(hi, p, kLogistic, g, grid);
        REQUIRE(leq_all(lo, hi));  // no tolerance: monotone update
    }
}

TEST_CASE("constant supersolution decays monotonically") {
    const GridSpec grid = small_grid();
    const ModelParams p(1, 2, 1, 1, 0.5);
    const RoadReaction g = RoadReaction::mortality(1.0);
    const double M = 1.25 * std::max(g.S() / p.nu, 1.0 / p.mu);
    SimState s = make_initial(grid, 1.0, 1.0);
    std::fill(s.u.begin(), s.u.end(), M * p.nu);
    std::fill(s.v.begin(), s.v.end(), M * p.mu);
    SimState prev = s;
    for (int k = 0; k < 200; ++k) {
        s = step(s, p, kLogistic, g, grid);
        REQUIRE(leq_all(s, prev));  // nonincreasing in t, exact
        prev = s;
    }
    CHECK(*std::max_element(s.v.begin(), s.v.end()) < M * p.mu);
}

TEST_CASE("no transport keeps mirror symmetry") {
    const GridSpec grid = small_grid();
    const ModelParams p(1, 3, 1, 1, 0);
    SimState s = make_initial(grid, 1.0, 1.0);
    for (int k = 0; k < 200; ++k) s = step(s, p, kLogistic, kNoRoad, grid);
    const int nx = s.nx;
    double asym = 0.0;
    for (int i = 0; i < nx; ++i) asym = std::max(asym, std::abs(s.u[i] - s.u[nx - 1 - i]));
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < nx; ++i)
            asym = std::max(asym, std::abs(s.at(i, j) - s.at(nx - 1 - i, j)));
    CHECK(asym <= 1e-12);
}

TEST_CASE("translation by whole cells is exact away from the boundary") {
    GridSpec grid = small_grid();
    grid.Lx = 30.0;
    const ModelParams p(1, 2, 1, 1, 1.0);
    const int shift = 8;
    SimState a = make_initial(grid, 1.0, 1.0);
    SimState b = a;
    // shift the datum by `shift` cells to the right
    std::fill(b.u.begin(), b.u.end(), 0.0);
    for (int i = 0; i + shift < b.nx; ++i) b.u[i + shift] = a.u[i];
    const int steps = 60;
    for (int k = 0; k < steps; ++k) {
        a = step(a, p, kLogistic, kNoRoad, grid);
        b = step(b, p, kLogistic, kNoRoad, grid);
    }
    const int margin = steps + shift + 2;
    double diff = 0.0;
    for (int i = margin; i < a.nx - margin; ++i)
        diff = std::max(diff, std::abs(a.u[i] - b.u[i + shift]));
    for (int j = 0; j < a.ny; ++j)
        for (int i = margin; i < a.nx - margin; ++i)
            diff = std::max(diff, std::abs(a.at(i, j) - b.at(i + shift, j)));
    CHECK(diff == 0.0);  // identical arithmetic on both dependency cones
}

TEST_CASE("instability detector aborts on an oversized step") {
    GridSpec grid = small_grid();
    const ModelParams p(1, 2, 1, 1, 0);

    // run() refuses a dt beyond the stability bound outright
    GridSpec bad = grid;
    bad.dt = 1.0;
    SimSetup setup{p, kLogistic, kNoRoad, bad};
    CHECK_THROWS_AS(run(setup), NumericalError);

    // raw stepping with the same dt blows up and trips the detector
    auto blow = [&] {
        SimState cur = make_initial(bad, 1.0, 1.0);
        for (int k = 0; k < 400; ++k) cur = step(cur, p, kLogistic, kNoRoad, bad);
    };
    CHECK_THROWS_AS(blow(), NumericalError);
}

TEST_CASE("front positions") {
    const GridSpec grid = small_grid();
    SimState s = make_initial(grid, 1.0, 1.0);
    const double U = 1.0;

    // saturated road: fronts at the domain ends
    std::fill(s.u.begin(), s.u.end(), U);
    auto fp = front_position(s, grid, 0.5, U);
    CHECK(fp.found_plus);
    CHECK(fp.plus == grid.Lx);
    CHECK(fp.minus == -grid.Lx);

    // step profile u = U for x <= 3.5: crossing midway into the next cell
    for (int i = 0; i < s.nx; ++i) s.u[i] = grid.x_at(i) <= 3.5 ? U : 0.0;
    fp = front_position(s, grid, 0.5, U);
    CHECK(fp.found_plus);
    CHECK(std::abs(fp.plus - 3.5) <= grid.dx);

    // everything below the level: no front
    std::fill(s.u.begin(), s.u.end(), 0.01);
    fp = front_position(s, grid, 0.5, U);
    CHECK_FALSE(fp.found_plus);
    CHECK_FALSE(fp.found_minus);

    CHECK_THROWS_AS(front_position(s, grid, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("speed fit on synthetic data") {
    std::vector<double> t, x;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(i * 0.5);
        x.push_back(3.0 * i * 0.5 + 0.01 * std::sin(7.0 * i));
    }
    const SpeedFit fit = estimate_speed(t, x, 0.5);
    CHECK(fit.speed == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(fit.stderr_ < 0.01);
    CHECK(fit.n >= 10);
    CHECK_THROWS_AS(estimate_speed({0, 1, 2}, {0, 1, 2}, 0.5), NumericalError);
}

TEST_CASE("symmetric spread and transport bias") {
    GridSpec grid;
    grid.Lx = 60.0;
    grid.Ly = 12.0;
    grid.T = 25.0;
    SimSetup setup{ModelParams(1, 1, 1, 1, 0), kLogistic, kNoRoad, grid};
    setup.threads = 2;
    const RunResult res = run(setup);
    const auto& se = res.series;
    REQUIRE(se.times.size() > 20);
    // symmetric data, q = 0: identical fronts
    for (size_t i = 0; i < se.times.size(); ++i) {
        if (std::isfinite(se.front_plus[i]))
            CHECK(se.front_plus[i] == doctest::Approx(-se.front_minus[i]).epsilon(1e-12));
    }
    const SpeedFit fit = estimate_speed(se.times, se.front_plus, 0.5);
    CHECK(std::abs(fit.speed - 2.0) / 2.0 < 0.1);  // coarse short-run agreement

    // strong rightward transport above the threshold: right front runs faster
    SimSetup drift = setup;
    drift.params = ModelParams(1, 1, 1, 1, 2.0);
    const RunResult res2 = run(drift);
    const SpeedFit plus = estimate_speed(res2.series.times, res2.series.front_plus, 0.5);
    const SpeedFit minus = estimate_speed(res2.series.times, res2.series.front_minus, 0.5);
    CHECK(plus.speed > -minus.speed + 0.15);
}

TEST_CASE("stationary datum stays put") {
    GridSpec grid;
    grid.Lx = 20.0;
    grid.Ly = 12.0;
    grid.T = 20.0;
    const ModelParams p(1, 1, 1, 1, 0);
    const RoadReaction g = RoadReaction::mortality(1.0);
    const StationaryProfile prof = stationary_mortality(p, kLogistic, 1.0);

    SimState s = make_initial(grid, 1.0, 1.0);
    std::fill(s.u.begin(), s.u.end(), prof.U);
    for (int j = 0; j < s.ny; ++j) {
        const double v = prof.value_at(grid.y_at(j));
        for (int i = 0; i < s.nx; ++i) s.at(i, j) = v;
    }
    GridSpec g2 = grid;
    g2.dt = 0.0;
    double err = 0.0;
    SimState cur = s;
    for (int k = 0; k < 1500; ++k) cur = step(cur, p, kLogistic, g, g2);
    err = profile_error(cur, grid, prof, grid.Lx);
    CHECK(err < 1e-3);  // pinned by the spatial truncation error
}

TEST_CASE("boundary guard warns when a front nears the domain edge") {
    GridSpec grid;
    grid.Lx = 12.0;  // deliberately undersized for T = 15 at speed ~2
    grid.Ly = 8.0;
    grid.T = 15.0;
    SimSetup setup{ModelParams(1, 1, 1, 1, 0), kLogistic, kNoRoad, grid};
    const RunResult res = run(setup);
    REQUIRE_FALSE(res.warnings.empty());
    CHECK(res.warnings.front().find("boundary") != std::string::npos);
}
