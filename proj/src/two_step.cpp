#include "foulwall/two_step.hpp"

#include <cmath>

namespace foulwall {

namespace {

void check_state(double u_tau, double mu, double rho) {
    if (!(u_tau > 0.0) || !(mu > 0.0) || !(rho > 0.0))
        throw NegativeInputError("two-step flux requires positive u_tau, mu, rho");
}

} // namespace

double rate_constant(double T, const TwoStepParams& p) {
    if (!(T > 0.0))
        throw NegativeInputError("temperature must be positive");
    if (!(p.pre_exponential > 0.0) || !(p.activation_energy >= 0.0) ||
        !(p.gas_constant > 0.0))
        throw ConfigError("invalid Arrhenius constants");
    return p.pre_exponential * std::exp(-p.activation_energy / (p.gas_constant * T));
}

TwoStepFlux deposition_full(double C_bulk, double C_sat, double u_tau, double mu,
                            double rho, double T, const TwoStepParams& p) {
    check_state(u_tau, mu, rho);
    if (!(p.mass_transfer_coeff > 0.0))
        throw ConfigError("full two-step flux needs a positive mass transfer coefficient");
    const double dC = C_bulk - C_sat;
    if (dC < 0.0) return {0.0, true};
    if (dC == 0.0) return {0.0, false};

    const double beta = p.mass_transfer_coeff;
    const double group = beta * rho * u_tau * u_tau / (rate_constant(T, p) * mu);
    const double j =
        beta * dC * dC /
        (0.5 * group + dC + std::sqrt(0.25 * group * group + group * dC));
    return {j, false};
}

TwoStepFlux deposition_reduced(double C_bulk, double C_sat, double u_tau, double mu,
                               double rho, double T, const TwoStepParams& p) {
    check_state(u_tau, mu, rho);
    const double dC = C_bulk - C_sat;
    if (dC < 0.0) return {0.0, true};
    return {rate_constant(T, p) * dC * dC * mu / (rho * u_tau * u_tau), false};
}

double concentration_from_mass_fraction(double rho, double mass_fraction) {
    if (!(rho > 0.0))
        throw NegativeInputError("density must be positive");
    return rho * mass_fraction;
}

} // namespace foulwall
