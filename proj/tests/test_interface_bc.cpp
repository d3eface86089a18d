#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "foulwall/interface_bc.hpp"
#include "testutil.hpp"

using namespace foulwall;

TEST_CASE("logistic midpoint and plateau") {
    const LogisticParams p{4e-4, 340.0, 60.0};
    CHECK(logistic_interface_fraction(340.0, p) == doctest::Approx(2e-4).epsilon(1e-12));
    CHECK(logistic_interface_fraction(1e-6, p) == doctest::Approx(4e-4).epsilon(1e-12));
}

TEST_CASE("logistic value matches an externally evaluated point") {
    const LogisticParams p{4e-4, 340.0, 60.0};
    // a / (1 + (350/340)^60) with (350/340)^60 = 5.693084612421086
    CHECK(logistic_interface_fraction(350.0, p) ==
          doctest::Approx(5.97631769450033e-5).epsilon(1e-12));
}

TEST_CASE("logistic is strictly decreasing in T and increasing in the plateau") {
    const LogisticParams p{4e-4, 340.0, 60.0};
    double prev = logistic_interface_fraction(300.0, p);
    for (double T = 302.0; T <= 380.0; T += 2.0) {
        const double v = logistic_interface_fraction(T, p);
        CHECK(v < prev);
        prev = v;
    }
    const LogisticParams bigger{5e-4, 340.0, 60.0};
    for (double T : {320.0, 340.0, 360.0})
        CHECK(logistic_interface_fraction(T, bigger) >
              logistic_interface_fraction(T, p));
}

TEST_CASE("velocity polynomials: constant coefficients and Horner oracle") {
    VelocityPolynomials vp;
    vp.plateau_coeffs = {4e-4, 0.0, 0.0, 0.0};
    vp.threshold_coeffs = {340.0, 0.0, 0.0};
    vp.steepness_coeffs = {60.0, 0.0, 0.0};
    vp.u_min = 0.1;
    vp.u_max = 0.5;
    const LogisticParams p = params_at_velocity(0.3, vp);
    CHECK(p.plateau == 4e-4);
    CHECK(p.threshold_temperature == 340.0);
    CHECK(p.steepness == 60.0);

    vp.plateau_coeffs = {1e-4, 2e-4, -3e-4, 4e-4};
    const double u = 0.3;
    const double expect = 1e-4 + u * (2e-4 + u * (-3e-4 + u * 4e-4));
    CHECK(params_at_velocity(u, vp).plateau == doctest::Approx(expect).epsilon(1e-14));

    CHECK_THROWS_AS(params_at_velocity(0.6, vp), OutOfRangeError);
    CHECK_THROWS_AS(params_at_velocity(0.05, vp), OutOfRangeError);
}

TEST_CASE("interface mass fraction clamps at saturation") {
    const VelocityPolynomials vp = testutil::default_interface_polys();
    // hot wall: the logistic has collapsed, saturation wins
    const double x_sat = 1.8e-5;
    CHECK(interface_mass_fraction(380.0, 0.2, vp, x_sat) == x_sat);
    // cold wall: plateau dominates
    const double cold = interface_mass_fraction(300.0, 0.2, vp, x_sat);
    CHECK(cold > 4.0e-4);
    CHECK(cold == doctest::Approx(params_at_velocity(0.2, vp).plateau).epsilon(1e-3));
}

TEST_CASE("wall-temperature offset raises the interface fraction near the threshold") {
    const VelocityPolynomials vp = testutil::default_interface_polys();
    const LogisticParams p = params_at_velocity(0.3, vp);
    const double T_near = p.threshold_temperature;
    const double with_offset = interface_mass_fraction(T_near, 0.3, vp, 0.0, 6.5);
    const double without = interface_mass_fraction(T_near, 0.3, vp, 0.0, 0.0);
    CHECK(with_offset >= without);
}

TEST_CASE("interface fraction never drops below saturation (randomized)") {
    const VelocityPolynomials vp = testutil::default_interface_polys();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> T(300.0, 380.0), u(0.15, 0.45),
        xs(0.0, 5e-4);
    for (int i = 0; i < 10000; ++i) {
        const double x_sat = xs(rng);
        CHECK(interface_mass_fraction(T(rng), u(rng), vp, x_sat) >= x_sat);
    }
}

TEST_CASE("logistic fit recovers planted parameters from noiseless data") {
    const LogisticParams truth{4.1e-4, 338.0, 55.0};
    std::vector<double> T, X;
    for (double t = 300.0; t <= 378.0; t += 2.0) {
        T.push_back(t);
        X.push_back(logistic_interface_fraction(t, truth));
    }
    const LogisticFit fit = fit_logistic(T, X);
    CHECK(fit.params.plateau == doctest::Approx(truth.plateau).epsilon(1e-3));
    CHECK(fit.params.threshold_temperature ==
          doctest::Approx(truth.threshold_temperature).epsilon(1e-3));
    CHECK(fit.params.steepness == doctest::Approx(truth.steepness).epsilon(1e-3));
    CHECK(fit.diagnostics.rmse < 1e-10);
}

TEST_CASE("logistic fit beats or matches the generating parameters on noisy data") {
    const LogisticParams truth{4.1e-4, 338.0, 55.0};
    std::mt19937 rng(3);
    std::normal_distribution<double> noise(0.0, 5e-6);
    std::vector<double> T, X;
    for (double t = 300.0; t <= 378.0; t += 2.0) {
        T.push_back(t);
        X.push_back(std::max(0.0, logistic_interface_fraction(t, truth) + noise(rng)));
    }
    const LogisticFit fit = fit_logistic(T, X);
    double sse_fit = 0.0, sse_truth = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) {
        const double rf = logistic_interface_fraction(T[i], fit.params) - X[i];
        const double rt = logistic_interface_fraction(T[i], truth) - X[i];
        sse_fit += rf * rf;
        sse_truth += rt * rt;
    }
    CHECK(sse_fit <= sse_truth * (1.0 + 1e-9));
}

TEST_CASE("flat samples cannot identify logistic parameters") {
    const std::vector<double> T = {300.0, 320.0, 340.0, 360.0};
    const std::vector<double> X(4, 2.5e-4);
    CHECK_THROWS_AS(fit_logistic(T, X), FitDivergedError);
}

TEST_CASE("logistic fit needs at least four samples") {
    CHECK_THROWS_AS(fit_logistic({300.0, 320.0, 340.0}, {4e-4, 2e-4, 1e-5}),
                    InsufficientDataError);
}

TEST_CASE("velocity polynomial fit: exact interpolation of a planted cubic") {
    const std::vector<double> a_true = {3.9e-4, 1.2e-4, -2.5e-4, 1.1e-4};
    const std::vector<double> b_true = {332.0, 21.0, -13.0};
    const std::vector<double> c_true = {50.0, 30.0, -20.0};
    const auto horner = [](const std::vector<double>& c, double x) {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    };
    std::vector<double> u = {0.2, 0.27, 0.33, 0.4};
    std::vector<LogisticParams> params;
    for (double ui : u)
        params.push_back({horner(a_true, ui), horner(b_true, ui), horner(c_true, ui)});

    const VelocityPolynomialFit fit = fit_velocity_polynomials(u, params);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(fit.polynomials.plateau_coeffs[i] ==
              doctest::Approx(a_true[i]).epsilon(1e-10));
    CHECK(fit.polynomials.u_min == 0.2);
    CHECK(fit.polynomials.u_max == 0.4);
    CHECK(fit.plateau_residual < 1e-12);
}

TEST_CASE("velocity polynomial fit: planted quadratic at five velocities") {
    const std::vector<double> b_true = {332.0, 21.0, -13.0};
    std::vector<double> u = {0.2, 0.25, 0.3, 0.35, 0.4};
    std::vector<LogisticParams> params;
    for (double ui : u)
        params.push_back({4e-4, b_true[0] + b_true[1] * ui + b_true[2] * ui * ui, 60.0});
    const VelocityPolynomialFit fit = fit_velocity_polynomials(u, params);
    CHECK(fit.threshold_residual < 1e-12);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(fit.polynomials.threshold_coeffs[i] ==
              doctest::Approx(b_true[i]).epsilon(1e-8));
}

TEST_CASE("velocity polynomial fit needs at least four velocities") {
    std::vector<LogisticParams> params = {{4e-4, 340.0, 60.0}, {4e-4, 341.0, 61.0}};
    CHECK_THROWS_AS(fit_velocity_polynomials({0.2, 0.4}, params), InsufficientDataError);
}

TEST_CASE("interface profile CSV ingestion") {
    const auto dir = testutil::scratch_dir("interface_csv");
    const auto path = dir / "profile.csv";
    testutil::write_file(path,
                         "# u_in_m_s = 0.25\n"
                         "x_m,T_w_K,X_I\n"
                         "0.0025,315.2,0.00041\n"
                         "0.0075,330.8,0.00035\n"
                         "0.0125,345.1,0.00008\n");
    const InterfaceProfileData data = read_interface_profile_csv(path);
    CHECK(data.u_in == doctest::Approx(0.25));
    CHECK(data.T_wall.size() == 3);
    CHECK(data.x_interface[2] == doctest::Approx(8e-5));

    testutil::write_file(dir / "empty.csv", "");
    CHECK_THROWS_AS(read_interface_profile_csv(dir / "empty.csv"), ConfigError);
    testutil::write_file(dir / "noheader.csv", "# u_in_m_s = 0.2\n1,2,3\n");
    CHECK_THROWS_AS(read_interface_profile_csv(dir / "noheader.csv"), ConfigError);
}
