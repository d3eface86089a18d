#pragma once

#include <vector>

#include "foulwall/errors.hpp"

namespace foulwall {

/// Polynomial in T with ascending coefficients: c[0] + c[1]*T + c[2]*T^2 + ...
struct PolynomialCorrelation {
    std::vector<double> coeffs;

    double operator()(double T) const {
        double v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * T + coeffs[i];
        return v;
    }
};

struct FluidProperties {
    double rho;         // [kg/m^3]
    double mu;          // [Pa s]
    double nu;          // [m^2/s], mu/rho
    double diffusivity; // [m^2/s]
    double x_sat;       // [kg/kg]
};

/// Temperature-dependent correlations for the dilute pseudo-binary mixture.
/// Evaluation outside [t_min, t_max] throws OutOfRangeError; there is no
/// silent extrapolation.
class PropertyModel {
public:
    PropertyModel(PolynomialCorrelation rho, PolynomialCorrelation mu,
                  PolynomialCorrelation x_sat, double diffusivity,
                  double thermal_conductivity, double heat_capacity,
                  double turbulent_schmidt, double t_min, double t_max);

    FluidProperties at(double T) const;

    double rho(double T) const;
    double mu(double T) const;
    double x_sat(double T) const;

    double diffusivity() const { return diffusivity_; }
    double thermal_conductivity() const { return thermal_conductivity_; }
    double heat_capacity() const { return heat_capacity_; }
    double turbulent_schmidt() const { return turbulent_schmidt_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }

    /// Copy with a different Fickian diffusivity (calibration knob).
    PropertyModel with_diffusivity(double d) const;

private:
    void check_range(double T) const;

    PolynomialCorrelation rho_poly_;
    PolynomialCorrelation mu_poly_;
    PolynomialCorrelation x_sat_poly_;
    double diffusivity_;
    double thermal_conductivity_;
    double heat_capacity_;
    double turbulent_schmidt_;
    double t_min_;
    double t_max_;
};

/// Thermodynamic state at a point: temperature plus species fractions.
struct FluidState {
    double temperature = 0.0;
    std::vector<double> mass_fractions;
    std::vector<double> mole_fractions; // derived
};

/// Validates T > 0, X_i in [0,1], sum X = 1 within 1e-12; derives mole fractions.
FluidState make_fluid_state(double temperature, std::vector<double> mass_fractions,
                            const std::vector<double>& molar_masses);

/// z_i = (X_i/M_i) / sum_j (X_j/M_j). Throws NonNormalizedError when
/// |sum X - 1| > 1e-9 and ConfigError for nonpositive molar masses.
std::vector<double> mass_to_mole_fractions(const std::vector<double>& mass_fractions,
                                           const std::vector<double>& molar_masses);

/// Inverse conversion: X_i = z_i M_i / sum_j z_j M_j.
std::vector<double> mole_to_mass_fractions(const std::vector<double>& mole_fractions,
                                           const std::vector<double>& molar_masses);

} // namespace foulwall
