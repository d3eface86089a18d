#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "foulwall/wall_laws.hpp"

using namespace foulwall;

TEST_CASE("no-slip and frozen inner-layer values") {
    CHECK(u_plus(0.0) == 0.0);
    // 11.4*atan(1) = 11.4*pi/4, evaluated externally
    CHECK(u_plus(11.4) == doctest::Approx(8.95353906273091).epsilon(1e-14));
}

TEST_CASE("u_plus is continuous at the blending point to 1e-12") {
    const WallLawParams p;
    const double inner = u_plus(p.y_star_plus, p);
    const double outer = u_plus(std::nextafter(p.y_star_plus, 1e9), p);
    CHECK(std::abs(inner - outer) < 1e-12);
    CHECK(inner == doctest::Approx(15.4458528931598312).epsilon(1e-14));
}

TEST_CASE("u_plus is strictly increasing") {
    double prev = u_plus(0.0);
    for (double y = 0.25; y <= 400.0; y += 0.25) {
        const double v = u_plus(y);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("nu_t_plus branch values, including the deliberate jump") {
    CHECK(nu_t_plus(0.0) == 0.0);
    CHECK(nu_t_plus(11.4) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(nu_t_plus(100.0) == doctest::Approx(42.0).epsilon(1e-14));

    const WallLawParams p;
    const double left = nu_t_plus(p.y_star_plus, p);
    const double right = nu_t_plus(std::nextafter(p.y_star_plus, 1e9), p);
    // (51.98/11.4)^2 vs 0.42*51.98: the law is NOT continuous here
    CHECK(left == doctest::Approx(20.7904001231148).epsilon(1e-12));
    CHECK(right == doctest::Approx(21.8316).epsilon(1e-12));
    CHECK(std::abs(left - right) > 1.0);
}

TEST_CASE("negative wall distance is rejected") {
    CHECK_THROWS_AS(u_plus(-1e-9), NegativeInputError);
    CHECK_THROWS_AS(nu_t_plus(-1e-9), NegativeInputError);
}

TEST_CASE("du+/dy+ equals 1/(1 + nu_t+) on both branches") {
    // consistency between the closed form and the simplified momentum
    // equation with mu+ = 1
    for (double y : {1.0, 5.0, 11.4, 30.0, 80.0, 200.0}) {
        const double h = 1e-4 * std::max(1.0, y);
        const double slope = (u_plus(y + h) - u_plus(y - h)) / (2.0 * h);
        CHECK(std::abs(slope - 1.0 / (1.0 + nu_t_plus(y))) < 1e-6);
    }
}

TEST_CASE("friction velocity inversion round trip") {
    const double nu = 8e-7;
    SUBCASE("single frozen case") {
        const double u_tau0 = 0.0123;
        const double y_plus0 = 30.0;
        const double y = y_plus0 * nu / u_tau0;
        const double u_known = u_tau0 * u_plus(y_plus0);
        const double u_tau = invert_friction_velocity(u_known, y, nu);
        CHECK(u_tau == doctest::Approx(u_tau0).epsilon(1e-8));
    }
    SUBCASE("identity over a friction-velocity sweep") {
        for (double u_tau0 = 1e-4; u_tau0 <= 1.0; u_tau0 *= 3.0) {
            for (double y : {5e-4, 2.34e-3, 1e-2}) {
                const double u_known = u_tau0 * u_plus(u_tau0 * y / nu);
                const double u_tau = invert_friction_velocity(u_known, y, nu);
                CHECK(u_tau == doctest::Approx(u_tau0).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("inversion satisfies the residual contract when nu changes") {
    const double u_known = 0.09, y = 2.34e-3;
    for (double nu : {8e-7, 1.6e-6}) {
        const double u_tau = invert_friction_velocity(u_known, y, nu);
        const double resid = std::abs(u_tau * u_plus(u_tau * y / nu) - u_known) / u_known;
        CHECK(resid < 1e-10);
    }
    const double ut1 = invert_friction_velocity(u_known, y, 8e-7);
    const double ut2 = invert_friction_velocity(u_known, y, 1.6e-6);
    CHECK(ut1 != ut2);
}

TEST_CASE("u_tau decreases monotonically toward zero with the known velocity") {
    const double y = 2.34e-3, nu = 8e-7;
    double prev = invert_friction_velocity(1e-1, y, nu);
    for (double u : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double ut = invert_friction_velocity(u, y, nu);
        CHECK(ut < prev);
        prev = ut;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("no root in the bracket is reported") {
    // u_known far beyond what u_tau = 10 m/s can produce
    CHECK_THROWS_AS(invert_friction_velocity(1e9, 2.34e-3, 8e-7), NoBracketError);
    CHECK_THROWS_AS(invert_friction_velocity(-0.1, 2.34e-3, 8e-7), NegativeInputError);
}
