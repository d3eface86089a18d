#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "foulwall/fluid_properties.hpp"
#include "testutil.hpp"

using namespace foulwall;

TEST_CASE("polynomial evaluation matches an independent Horner check") {
    const PropertyModel props = testutil::default_properties();
    // 809.3 + 1.542*303 - 0.0030625*303^2, evaluated externally
    CHECK(props.rho(303.0) == doctest::Approx(995.3609375).epsilon(1e-13));
    CHECK(props.at(303.0).nu == doctest::Approx(props.mu(303.0) / props.rho(303.0)));
}

TEST_CASE("constant-property config gives nu = mu/rho exactly") {
    const PropertyModel props = testutil::constant_properties(1000.0, 8e-4);
    const FluidProperties p = props.at(300.0);
    CHECK(p.nu == doctest::Approx(8e-7).epsilon(1e-15));
    CHECK(p.rho == 1000.0);
    CHECK(p.mu == 8e-4);
}

TEST_CASE("evaluation outside the validity interval is an error") {
    const PropertyModel props = testutil::default_properties();
    CHECK_THROWS_AS(props.at(props.t_max() + 1.0), OutOfRangeError);
    CHECK_THROWS_AS(props.at(props.t_min() - 1.0), OutOfRangeError);
    CHECK_NOTHROW(props.at(props.t_min()));
    CHECK_NOTHROW(props.at(props.t_max()));
}

TEST_CASE("x_sat is evaluable over the working temperature range") {
    const PropertyModel props = testutil::default_properties();
    for (double T = 303.0; T <= 373.0; T += 0.5) {
        CHECK(props.x_sat(T) >= 0.0);
    }
}

TEST_CASE("nonpositive correlations are rejected at construction") {
    CHECK_THROWS_AS(PropertyModel(PolynomialCorrelation{{-1.0}},
                                  PolynomialCorrelation{{8e-4}},
                                  PolynomialCorrelation{{1e-5}}, 1e-9, 0.6, 4182.0, 1.0,
                                  280.0, 380.0),
                    ConfigError);
    // mu crosses zero inside the interval
    CHECK_THROWS_AS(PropertyModel(PolynomialCorrelation{{1000.0}},
                                  PolynomialCorrelation{{1e-3, -3e-6}},
                                  PolynomialCorrelation{{1e-5}}, 1e-9, 0.6, 4182.0, 1.0,
                                  280.0, 380.0),
                    ConfigError);
}

TEST_CASE("evaluation is deterministic") {
    const PropertyModel props = testutil::default_properties();
    const FluidProperties a = props.at(333.33);
    const FluidProperties b = props.at(333.33);
    CHECK(a.rho == b.rho);
    CHECK(a.mu == b.mu);
    CHECK(a.nu == b.nu);
    CHECK(a.x_sat == b.x_sat);
}

TEST_CASE("mass to mole fractions: trivial cases") {
    CHECK(mass_to_mole_fractions({1.0}, {0.1})[0] == doctest::Approx(1.0).epsilon(1e-14));
    const auto z = mass_to_mole_fractions({0.5, 0.5}, {1.0, 1.0});
    CHECK(z[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(z[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("mass to mole fractions: dilute mixture spreadsheet check") {
    const auto z =
        mass_to_mole_fractions({4.197e-4, 1.0 - 4.197e-4}, {100.09e-3, 18.015e-3});
    // (X1/M1)/(X1/M1 + X2/M2) evaluated independently at high precision
    CHECK(z[0] == doctest::Approx(7.55669751857055e-5).epsilon(1e-12));
    CHECK(z[1] == doctest::Approx(0.999924433024814294).epsilon(1e-12));
    CHECK(z[0] + z[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("mass/mole round trip recovers the input") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const std::vector<double> M = {100.09e-3, 18.015e-3, 44.01e-3};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> X = {uni(rng), uni(rng), uni(rng)};
        const double sum = X[0] + X[1] + X[2];
        for (double& x : X) x /= sum;
        const auto z = mass_to_mole_fractions(X, M);
        double zsum = 0.0;
        for (double zi : z) zsum += zi;
        CHECK(std::abs(zsum - 1.0) < 1e-12);
        const auto back = mole_to_mass_fractions(z, M);
        for (std::size_t i = 0; i < X.size(); ++i)
            CHECK(back[i] == doctest::Approx(X[i]).epsilon(1e-12));
    }
}

TEST_CASE("non-normalized mass fractions are rejected") {
    CHECK_THROWS_AS(mass_to_mole_fractions({0.5, 0.4}, {1.0, 1.0}), NonNormalizedError);
    CHECK_THROWS_AS(make_fluid_state(300.0, {0.5, 0.5 + 1e-10}, {1.0, 1.0}),
                    NonNormalizedError);
    CHECK_THROWS_AS(mass_to_mole_fractions({0.5, 0.5}, {1.0, -1.0}), ConfigError);
}

TEST_CASE("fluid state derives mole fractions") {
    const FluidState st =
        make_fluid_state(303.0, {4.197e-4, 1.0 - 4.197e-4}, {100.09e-3, 18.015e-3});
    CHECK(st.temperature == 303.0);
    CHECK(st.mole_fractions[0] == doctest::Approx(7.55669751857055e-5).epsilon(1e-12));
    CHECK_THROWS_AS(make_fluid_state(-1.0, {1.0}, {0.1}), ConfigError);
}
