#pragma once

#include "foulwall/errors.hpp"

namespace foulwall {

/// Constants of the blended two-layer velocity wall law. The inner layer is
/// an arctangent profile up to y+ = y_star_plus, the outer layer logarithmic.
struct WallLawParams {
    double kappa = 0.42;        // von Karman constant
    double y_star_plus = 51.98; // inner/outer blending point
    double inner_constant = 11.4;
};

void validate(const WallLawParams& params);

/// Dimensionless velocity u+ at wall distance y+. Continuous at the blending
/// point by construction; strictly increasing.
double u_plus(double y_plus, const WallLawParams& params = {});

/// Dimensionless turbulent kinematic viscosity: (y+/A)^2 inside the blending
/// point, kappa*y+ outside. Deliberately discontinuous at the blending point.
double nu_t_plus(double y_plus, const WallLawParams& params = {});

/// Finds u_tau such that u_known/u_tau = u_plus(u_tau*y_known/nu).
/// Bracketing bisection on [1e-8, 10] m/s refined by guarded secant steps;
/// converged when the relative residual drops below 1e-10.
double invert_friction_velocity(double u_known, double y_known, double nu,
                                const WallLawParams& params = {});

} // namespace foulwall
