#include <doctest.h>

#include <functional>
#include <random>

#include "adreg/nonlin.hpp"

using namespace adreg;

TEST_CASE("smooth saturation values") {
    const SatParams l3{3.0};
    CHECK(sat(1.0, l3) == 1.0);
    CHECK(sat(3.5, l3) == doctest::Approx(3.375));  // 3.5 - 0.5^2/2
    CHECK(sat(10.0, l3) == doctest::Approx(3.5));   // l + 1/2
    CHECK(sat(-10.0, l3) == doctest::Approx(-3.5));

    CHECK(sat_deriv(0.0, l3) == 1.0);
    CHECK(sat_deriv(3.5, l3) == doctest::Approx(0.5));
    CHECK(sat_deriv(5.0, l3) == 0.0);
}

TEST_CASE("dead zone values") {
    const DeadZoneParams p{1.2, 4.0, 2.0};
    CHECK(dz(2.0, p) == 0.0);
    CHECK(dz(5.0, p) == doctest::Approx(0.3));  // 1.2 * 1 / 4
    CHECK(dz(8.0, p) == doctest::Approx(3.6));  // 1.2*8 - 1.2*5
    CHECK(dz(-5.0, p) == doctest::Approx(-0.3));
}

TEST_CASE("vector forms") {
    const std::vector<SatParams> levels{{3.0}, {3.0}};
    Vec s{1.0, 10.0};
    auto out = satv(s, levels);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(3.5));

    Vec zero{0.0, 0.0};
    auto z = satv(zero, levels);
    CHECK(z == Vec{0.0, 0.0});

    const std::vector<SatParams> one{{3.0}};
    CHECK(satv(Vec{-10.0}, one)[0] == doctest::Approx(-3.5));
    CHECK_THROWS_AS(satv(Vec{1.0}, levels), std::invalid_argument);

    const std::vector<DeadZoneParams> dzp{{1.2, 4.0, 2.0}, {1.2, 4.0, 2.0}};
    auto dv = dzv(Vec{5.0, 2.0}, dzp);
    CHECK(dv[0] == doctest::Approx(0.3));
    CHECK(dv[1] == 0.0);
    CHECK(dzv(Vec{0.0, 0.0}, dzp) == Vec{0.0, 0.0});
    CHECK_THROWS_AS(dzv(Vec{1.0}, dzp), std::invalid_argument);
}

TEST_CASE("dead-zone slope lower bounds") {
    CHECK(min_deadzone_slope({1.0, {1.0}, 0.0}, Vec{2.0})[0] == doctest::Approx(2.0));
    CHECK(min_deadzone_slope({1.0, {0.0}, 5.0}, Vec{2.0})[0] == doctest::Approx(0.0));
    auto v = min_deadzone_slope({2.0, {1.0, 3.0}, 1.0}, Vec{1.0, 2.0});
    CHECK(v[0] == doctest::Approx(10.0));
    CHECK(v[1] == doctest::Approx(15.0));
    CHECK_THROWS_AS(min_deadzone_slope({1.0, {1.0}, 0.0}, Vec{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(min_deadzone_slope({1.0, {1.0}, 0.0}, Vec{-1.0}), std::invalid_argument);

    SUBCASE("scales linearly in a2 and inversely in eps0") {
        const double base = min_deadzone_slope({1.5, {2.0}, 0.5}, Vec{1.0})[0];
        CHECK(min_deadzone_slope({1.5, {4.0}, 0.5}, Vec{1.0})[0] == doctest::Approx(2.0 * base));
        CHECK(min_deadzone_slope({1.5, {2.0}, 0.5}, Vec{2.0})[0] == doctest::Approx(base / 2.0));
    }
}

TEST_CASE("oddness over random samples") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    const SatParams l{2.5};
    const DeadZoneParams p{1.2, 4.0, 2.0};
    for (int i = 0; i < 1000; ++i) {
        const double s = dist(rng);
        CHECK(sat(-s, l) == doctest::Approx(-sat(s, l)));
        CHECK(dz(-s, p) == doctest::Approx(-dz(s, p)));
    }
}

TEST_CASE("dead-zone sign properties") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    const DeadZoneParams p{1.2, 4.0, 2.0};
    std::uniform_real_distribution<double> theta_dist(-p.a0, p.a0);
    for (int i = 0; i < 1000; ++i) {
        const double s = dist(rng);
        CHECK(s * dz(s, p) >= 0.0);
        // (s - theta) dz(s) >= 0 whenever |theta| <= a0
        const double theta = theta_dist(rng);
        CHECK((s - theta) * dz(s, p) >= 0.0);
    }
}

TEST_CASE("range bounds") {
    std::mt19937 rng(44);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    const SatParams l{2.0};
    const DeadZoneParams p{1.2, 4.0, 2.0};
    for (int i = 0; i < 1000; ++i) {
        const double s = dist(rng);
        CHECK(std::abs(sat(s, l)) <= l.level + 0.5);
        if (std::abs(s) <= p.a0) CHECK(dz(s, p) == 0.0);
        if (std::abs(s) > p.a0 && s != 0.0) CHECK(std::abs(dz(s, p)) > 0.0);
    }
}

// C^1 continuity at the breakpoints: the central difference must match
// the derivative to second order, and one-sided derivatives must agree
// to first order.
static void check_c1(double breakpoint, double h, double K,
                     const std::function<double(double)>& f,
                     const std::function<double(double)>& df) {
    for (double b : {breakpoint, -breakpoint}) {
        const double central = f(b + h) - f(b - h);
        CHECK(std::abs(central - 2.0 * h * df(b)) <= K * h * h);
        CHECK(std::abs(df(b - h) - df(b + h)) <= K * h);
    }
}

TEST_CASE("C1 continuity at breakpoints") {
    const double h = 1e-4;
    const SatParams l{3.0};
    auto fsat = [&](double s) { return sat(s, l); };
    auto dsat = [&](double s) { return sat_deriv(s, l); };
    check_c1(l.level, h, 3.0, fsat, dsat);
    check_c1(l.level + 1.0, h, 3.0, fsat, dsat);

    const DeadZoneParams p{1.2, 4.0, 2.0};
    auto fdz = [&](double s) { return dz(s, p); };
    auto ddz = [&](double s) { return dz_deriv(s, p); };
    const double K = 3.0 * std::max(1.0, p.c / p.eps0);
    check_c1(p.a0, h, K, fdz, ddz);
    check_c1(p.a0 + p.eps0, h, K, fdz, ddz);
}
