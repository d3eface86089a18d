#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "foulwall/errors.hpp"

namespace foulwall {

/// Parameters of the sigmoid X(T_w) = plateau / (1 + (T_w/threshold)^steepness).
struct LogisticParams {
    double plateau = 0.0;               // a [kg/kg]
    double threshold_temperature = 0.0; // b [K]
    double steepness = 0.0;             // c [-]
};

void validate(const LogisticParams& params);

/// Interface mass fraction from the logistic model; strictly decreasing in
/// T_wall for positive steepness.
double logistic_interface_fraction(double T_wall, const LogisticParams& params);

/// Inlet-velocity dependence of the logistic parameters: cubic for the
/// plateau, quadratics for threshold and steepness.
struct VelocityPolynomials {
    std::vector<double> plateau_coeffs;   // ascending, 4 entries
    std::vector<double> threshold_coeffs; // ascending, 3 entries
    std::vector<double> steepness_coeffs; // ascending, 3 entries
    double u_min = 0.0;                   // validity interval [m/s]
    double u_max = 0.0;
};

void validate(const VelocityPolynomials& polys);

LogisticParams params_at_velocity(double u_in, const VelocityPolynomials& polys);

/// Dirichlet interface mass fraction for the depositing species:
/// max(logistic at (T_wall - offset), x_sat at the uncorrected T_wall).
/// The offset compensates coarse-host wall-temperature overprediction.
double interface_mass_fraction(double T_wall, double u_in, const VelocityPolynomials& polys,
                               double x_sat_at_wall, double wall_temperature_offset = 6.5);

struct FitDiagnostics {
    double rmse = 0.0;
    int iterations = 0;
    std::array<double, 9> covariance{}; // row-major 3x3, parameter order a, b, c
    bool degenerate = false;
};

struct LogisticFit {
    LogisticParams params;
    FitDiagnostics diagnostics;
};

/// Damped Gauss-Newton least-squares fit of the logistic model with analytic
/// Jacobian. Needs at least 4 samples; throws FitDivergedError when the
/// damping cannot rescue the iteration (e.g. flat data).
LogisticFit fit_logistic(const std::vector<double>& T_wall,
                         const std::vector<double>& x_interface);

struct VelocityPolynomialFit {
    VelocityPolynomials polynomials;
    double plateau_residual = 0.0; // RMS over the samples
    double threshold_residual = 0.0;
    double steepness_residual = 0.0;
};

/// Fits the three velocity polynomials; exact interpolation when the sample
/// count equals the coefficient count, least squares otherwise.
VelocityPolynomialFit fit_velocity_polynomials(const std::vector<double>& u_in,
                                               const std::vector<LogisticParams>& params);

/// One ingested fine-mesh interface profile; velocity comes from a
/// "# u_in_m_s = <value>" comment line, data rows are x_m,T_w_K,X_I.
struct InterfaceProfileData {
    double u_in = 0.0;
    std::vector<double> x;
    std::vector<double> T_wall;
    std::vector<double> x_interface;
};

InterfaceProfileData read_interface_profile_csv(const std::filesystem::path& path);

} // namespace foulwall
