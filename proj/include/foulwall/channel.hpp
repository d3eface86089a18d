#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "foulwall/errors.hpp"
#include "foulwall/fluid_properties.hpp"
#include "foulwall/interface_bc.hpp"
#include "foulwall/subgrid.hpp"
#include "foulwall/wall_laws.hpp"

namespace foulwall {

/// Near-wall cell-center velocity model of the coarse host. The parabolic
/// factor 6*(y/H)*(1-y/H) matches the near-laminar profiles a coarse solver
/// produces at the transitional Reynolds numbers this geometry runs at; plug
/// uses the mean velocity directly.
enum class CellVelocityProfile { parabolic, plug };

struct ChannelConfig {
    double gap = 0.0281;           // H [m], inferred default
    double heated_length = 0.2;    // L [m]
    int n_axial = 40;
    int n_cross = 6;
    double inlet_velocity = 0.0;   // [m/s]
    double inlet_temperature = 303.0;
    double wall_heat_flux = 52500.0; // [W/m^2]
    std::vector<double> inlet_mass_fractions;
    int heated_walls = 1;
    CellVelocityProfile cell_velocity_profile = CellVelocityProfile::parabolic;
};

void validate(const ChannelConfig& cfg);

struct ChannelStation {
    double x = 0.0;      // [m] cell-center position along the heated wall
    double u_bulk = 0.0; // wall-cell center velocity handed to the subgrid
    double T_bulk = 0.0;
    double T_wall = 0.0;
    double u_tau = 0.0;
    double y_bulk = 0.0;
    // property snapshot
    double rho_bulk = 0.0;
    double mu_bulk = 0.0;
    double rho_wall = 0.0;
    double mu_wall = 0.0;
};

/// Immutable once marched; persisted as a versioned, checksummed text file.
struct FrozenFlowField {
    double heated_length = 0.0;
    double gap = 0.0;
    int n_axial = 0;
    int n_cross = 0;
    int heated_walls = 0;
    double wall_heat_flux = 0.0;
    double inlet_velocity = 0.0;
    double inlet_temperature = 0.0;
    std::vector<std::string> species;
    std::vector<double> inlet_mass_fractions;
    std::vector<ChannelStation> stations;
};

/// Marches the bulk energy balance along the heated wall and closes each
/// station with the velocity wall law (friction velocity by inversion) and a
/// thermal wall law: dT+/dy+ = Pr/(1 + (Pr/Pr_t) nu_t+), integrated to the
/// first-cell-center y+ with Pr at the film temperature.
FrozenFlowField march_channel(const ChannelConfig& cfg, const PropertyModel& props,
                              const WallLawParams& law, double turbulent_prandtl,
                              const std::vector<std::string>& species_names);

void save_frozen(const FrozenFlowField& field, const std::filesystem::path& path);
FrozenFlowField load_frozen(const std::filesystem::path& path);

struct WallCellSet {
    std::vector<WallCellBC> cells; // one per axial station
    std::vector<double> areas;     // [m^2] heated area per station (unit depth)
    std::vector<double> x;         // station positions
};

/// Builds per-station subgrid boundary conditions; interface mass fractions
/// of depositing species come from the logistic model clamped at saturation.
WallCellSet assemble_wall_cells(const FrozenFlowField& field,
                                const std::vector<bool>& depositing,
                                const VelocityPolynomials& interface_polys,
                                double wall_temperature_offset,
                                const PropertyModel& props);

} // namespace foulwall
