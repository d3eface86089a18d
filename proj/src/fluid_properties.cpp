#include "foulwall/fluid_properties.hpp"

#include <cmath>
#include <string>

namespace foulwall {

namespace {

std::string fmt(double v) { return std::to_string(v); }

} // namespace

PropertyModel::PropertyModel(PolynomialCorrelation rho, PolynomialCorrelation mu,
                             PolynomialCorrelation x_sat, double diffusivity,
                             double thermal_conductivity, double heat_capacity,
                             double turbulent_schmidt, double t_min, double t_max)
    : rho_poly_(std::move(rho)),
      mu_poly_(std::move(mu)),
      x_sat_poly_(std::move(x_sat)),
      diffusivity_(diffusivity),
      thermal_conductivity_(thermal_conductivity),
      heat_capacity_(heat_capacity),
      turbulent_schmidt_(turbulent_schmidt),
      t_min_(t_min),
      t_max_(t_max) {
    if (!(t_min_ > 0.0) || !(t_max_ > t_min_))
        throw ConfigError("property validity interval must satisfy 0 < T_min < T_max");
    if (!(diffusivity_ > 0.0))
        throw ConfigError("diffusivity must be positive");
    if (!(thermal_conductivity_ > 0.0) || !(heat_capacity_ > 0.0))
        throw ConfigError("thermal conductivity and heat capacity must be positive");
    if (!(turbulent_schmidt_ > 0.0))
        throw ConfigError("turbulent Schmidt number must be positive");
    if (rho_poly_.coeffs.empty() || mu_poly_.coeffs.empty() || x_sat_poly_.coeffs.empty())
        throw ConfigError("property correlations need at least one coefficient");

    // Positivity over the validity interval is checked by scanning; the
    // correlations are low-order polynomials supplied by the user.
    constexpr int n_scan = 512;
    for (int i = 0; i <= n_scan; ++i) {
        const double T = t_min_ + (t_max_ - t_min_) * i / n_scan;
        if (!(rho_poly_(T) > 0.0))
            throw ConfigError("rho(T) is nonpositive at T = " + fmt(T));
        if (!(mu_poly_(T) > 0.0))
            throw ConfigError("mu(T) is nonpositive at T = " + fmt(T));
        if (x_sat_poly_(T) < 0.0)
            throw ConfigError("x_sat(T) is negative at T = " + fmt(T));
    }
}

void PropertyModel::check_range(double T) const {
    if (!(T >= t_min_) || !(T <= t_max_))
        throw OutOfRangeError("temperature " + fmt(T) + " K outside property validity [" +
                              fmt(t_min_) + ", " + fmt(t_max_) + "] K");
}

FluidProperties PropertyModel::at(double T) const {
    check_range(T);
    const double rho = rho_poly_(T);
    const double mu = mu_poly_(T);
    return FluidProperties{rho, mu, mu / rho, diffusivity_, x_sat_poly_(T)};
}

double PropertyModel::rho(double T) const {
    check_range(T);
    return rho_poly_(T);
}

double PropertyModel::mu(double T) const {
    check_range(T);
    return mu_poly_(T);
}

double PropertyModel::x_sat(double T) const {
    check_range(T);
    return x_sat_poly_(T);
}

PropertyModel PropertyModel::with_diffusivity(double d) const {
    PropertyModel copy = *this;
    if (!(d > 0.0)) throw ConfigError("diffusivity must be positive");
    copy.diffusivity_ = d;
    return copy;
}

std::vector<double> mass_to_mole_fractions(const std::vector<double>& mass_fractions,
                                           const std::vector<double>& molar_masses) {
    if (mass_fractions.size() != molar_masses.size() || mass_fractions.empty())
        throw ConfigError("mass fractions and molar masses must have equal nonzero size");
    double sum = 0.0;
    for (double x : mass_fractions) sum += x;
    if (std::abs(sum - 1.0) > 1e-9)
        throw NonNormalizedError("mass fractions sum to " + fmt(sum) + ", expected 1");

    std::vector<double> moles(mass_fractions.size());
    double total = 0.0;
    for (std::size_t i = 0; i < mass_fractions.size(); ++i) {
        if (!(molar_masses[i] > 0.0))
            throw ConfigError("molar masses must be positive");
        moles[i] = mass_fractions[i] / molar_masses[i];
        total += moles[i];
    }
    for (double& z : moles) z /= total;
    return moles;
}

std::vector<double> mole_to_mass_fractions(const std::vector<double>& mole_fractions,
                                           const std::vector<double>& molar_masses) {
    if (mole_fractions.size() != molar_masses.size() || mole_fractions.empty())
        throw ConfigError("mole fractions and molar masses must have equal nonzero size");
    double sum = 0.0;
    for (double z : mole_fractions) sum += z;
    if (std::abs(sum - 1.0) > 1e-9)
        throw NonNormalizedError("mole fractions sum to " + fmt(sum) + ", expected 1");

    std::vector<double> mass(mole_fractions.size());
    double total = 0.0;
    for (std::size_t i = 0; i < mole_fractions.size(); ++i) {
        if (!(molar_masses[i] > 0.0))
            throw ConfigError("molar masses must be positive");
        mass[i] = mole_fractions[i] * molar_masses[i];
        total += mass[i];
    }
    for (double& x : mass) x /= total;
    return mass;
}

FluidState make_fluid_state(double temperature, std::vector<double> mass_fractions,
                            const std::vector<double>& molar_masses) {
    if (!(temperature > 0.0))
        throw ConfigError("temperature must be positive");
    double sum = 0.0;
    for (double x : mass_fractions) {
        if (x < 0.0 || x > 1.0)
            throw NonNormalizedError("mass fraction outside [0, 1]");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw NonNormalizedError("mass fractions sum to " + fmt(sum) + ", expected 1");

    FluidState state;
    state.temperature = temperature;
    state.mole_fractions = mass_to_mole_fractions(mass_fractions, molar_masses);
    state.mass_fractions = std::move(mass_fractions);
    return state;
}

} // namespace foulwall
