#include <doctest.h>

#include <random>

#include "adreg/prime.hpp"
#include "poly_oracle.hpp"

using namespace adreg;

TEST_CASE("prime triplet structure") {
    SUBCASE("d = 2") {
        auto t = prime_triplet(2);
        CHECK(t.A(0, 0) == 0.0);
        CHECK(t.A(0, 1) == 1.0);
        CHECK(t.A(1, 0) == 0.0);
        CHECK(t.A(1, 1) == 0.0);
        CHECK(t.B == Vec{0.0, 1.0});
        CHECK(t.C == Vec{1.0, 0.0});
    }
    SUBCASE("d = 1 degenerates to scalars") {
        auto t = prime_triplet(1);
        CHECK(t.A(0, 0) == 0.0);
        CHECK(t.B == Vec{1.0});
        CHECK(t.C == Vec{1.0});
    }
    SUBCASE("d = 3 superdiagonal only") {
        auto t = prime_triplet(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(t.A(i, j) == (j == i + 1 ? 1.0 : 0.0));
    }
    SUBCASE("invalid dimension rejected") {
        CHECK_THROWS_AS(prime_triplet(0), std::invalid_argument);
    }
    SUBCASE("A_d is nilpotent with index d") {
        for (int d = 1; d <= 6; ++d) {
            Mat p = Mat::identity(d);
            for (int k = 0; k < d; ++k) p = matmul(prime_triplet(d).A, p);
            for (double v : p.a) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("gain scaling diagonal") {
    auto m = gain_scaling(10.0, 2);
    CHECK(m(0, 0) == 10.0);
    CHECK(m(1, 1) == 100.0);
    CHECK(m(0, 1) == 0.0);

    auto id = gain_scaling(1.0, 3);
    for (int i = 0; i < 3; ++i) CHECK(id(i, i) == 1.0);

    CHECK(gain_scaling(2.0, 1)(0, 0) == 2.0);
    CHECK_THROWS_AS(gain_scaling(0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(gain_scaling(-1.0, 2), std::invalid_argument);
}

TEST_CASE("observer error matrix") {
    SUBCASE("d = 2 block structure and characteristic polynomial") {
        auto m = build_Fe({3.0, 3.0}, 1.0);
        const double expect[3][3] = {{-3, 1, 0}, {-3, 0, 1}, {-1, 0, 0}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(m.Fe(i, j) == expect[i][j]);
        // (s+1)^3 = s^3 + 3 s^2 + 3 s + 1, by hand cofactor expansion
        auto cp = characteristic_polynomial(m.Fe);
        CHECK(cp[0] == doctest::Approx(1.0));
        CHECK(cp[1] == doctest::Approx(3.0));
        CHECK(cp[2] == doctest::Approx(3.0));
        CHECK(cp[3] == doctest::Approx(1.0));
    }
    SUBCASE("d = 1") {
        auto m = build_Fe({2.0}, 1.0);
        CHECK(m.Fe(0, 0) == -2.0);
        CHECK(m.Fe(0, 1) == 1.0);
        CHECK(m.Fe(1, 0) == -1.0);
        CHECK(m.Fe(1, 1) == 0.0);
        auto cp = characteristic_polynomial(m.Fe);  // s^2 + 2s + 1
        CHECK(cp[1] == doctest::Approx(2.0));
        CHECK(cp[2] == doctest::Approx(1.0));
    }
    SUBCASE("zero gains give s^{d+1}") {
        auto cp = characteristic_polynomial(build_Fe({0.0}, 0.0).Fe);
        CHECK(cp == Vec{1.0, 0.0, 0.0});
    }
    SUBCASE("empty G rejected") { CHECK_THROWS_AS(build_Fe({}, 1.0), std::invalid_argument); }
    SUBCASE("char poly coefficients are exactly (1, g_1..g_{d+1})") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> dist(-4.0, 4.0);
        for (int d = 1; d <= 4; ++d) {
            Vec g(d);
            for (double& x : g) x = dist(rng);
            const double glast = dist(rng);
            auto cp = characteristic_polynomial(build_Fe(g, glast).Fe);
            CHECK(cp[0] == doctest::Approx(1.0));
            for (int i = 0; i < d; ++i) CHECK(cp[i + 1] == doctest::Approx(g[i]));
            CHECK(cp[d + 1] == doctest::Approx(glast));
        }
    }
}

TEST_CASE("routh-hurwitz test") {
    CHECK(routh_hurwitz({1, 3, 3, 1}).hurwitz);    // (s+1)^3
    CHECK(!routh_hurwitz({1, 0, -1}).hurwitz);     // s^2 - 1, root at +1
    CHECK(!routh_hurwitz({1, 0, 1}).hurwitz);      // s^2 + 1, marginal
    CHECK(routh_hurwitz({1, 0, 1}).degenerate);
    CHECK(routh_hurwitz({0, 1, 1}).degenerate);    // zero leading coefficient
    CHECK(!routh_hurwitz({0, 1, 1}).hurwitz);
    CHECK(routh_hurwitz({1, 1}).hurwitz);          // s + 1
    CHECK(!routh_hurwitz({1, -1}).hurwitz);        // s - 1
    // degree 4 with a sign change deep in the table: s^4+s^3+s^2+11s+10
    // has roots at 1 +- 2i
    CHECK(!routh_hurwitz({1, 1, 1, 11, 10}).hurwitz);

    SUBCASE("is_hurwitz on F_e") {
        CHECK(is_hurwitz(build_Fe({3.0, 3.0}, 1.0)));
        CHECK(!is_hurwitz(build_Fe({-1.0, -1.0}, 1.0)));
    }
}

TEST_CASE("routh test agrees with eigenvalue oracle on random gains") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    int disagreements = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 4;
        Vec g(d);
        for (double& x : g) x = dist(rng);
        const double glast = dist(rng);
        auto m = build_Fe(g, glast);
        Vec cp{1.0};
        cp.insert(cp.end(), g.begin(), g.end());
        cp.push_back(glast);
        if (is_hurwitz(m) != oracle::all_roots_in_open_left_half_plane(cp)) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("default observer gains place all roots at -1") {
    for (int d = 1; d <= 5; ++d) {
        auto [g, glast] = default_observer_gains(d);
        auto m = build_Fe(g, glast);
        CHECK(is_hurwitz(m));
        // coefficients of (s+1)^{d+1}
        auto cp = characteristic_polynomial(m.Fe);
        double binom = 1.0;
        for (int i = 0; i <= d + 1; ++i) {
            CHECK(cp[i] == doctest::Approx(binom));
            binom = binom * (d + 1 - i) / (i + 1);
        }
    }
}
