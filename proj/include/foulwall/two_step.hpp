#pragma once

#include "foulwall/errors.hpp"

namespace foulwall {

/// Constants of the transport + surface-integration deposition model.
struct TwoStepParams {
    double pre_exponential = 1.62e22;   // k0 [m^4/(kg s^2)]
    double activation_energy = 1.48e5;  // Ea [J/mol]
    double mass_transfer_coeff = 0.0;   // beta [m/s], required by the full form
    double gas_constant = 8.314462618;  // [J/(mol K)]
};

/// Arrhenius surface-integration rate constant k'_r = k0 exp(-Ea/(R T)).
double rate_constant(double T, const TwoStepParams& params);

struct TwoStepFlux {
    double j_dep = 0.0;         // [kg/(m^2 s)]
    bool undersaturated = false; // C_bulk < C_sat; flux forced to zero
};

/// Full two-step flux. With the transport/reaction group
/// D = beta*rho*u_tau^2/(k'_r*mu) the bracket form is
///   j = beta [ D/2 + dC - sqrt(D^2/4 + D dC) ],
/// evaluated here in the rationalized form beta*dC^2/(D/2 + dC + sqrt(...))
/// which is algebraically identical and immune to cancellation at large D.
TwoStepFlux deposition_full(double C_bulk, double C_sat, double u_tau, double mu,
                            double rho, double T, const TwoStepParams& params);

/// Surface-integration-controlled reduction: j = k'_r dC^2 mu / (rho u_tau^2).
TwoStepFlux deposition_reduced(double C_bulk, double C_sat, double u_tau, double mu,
                               double rho, double T, const TwoStepParams& params);

/// The single place where mass fractions become volumetric concentrations.
double concentration_from_mass_fraction(double rho, double mass_fraction);

} // namespace foulwall
