#pragma once

#include <cstddef>
#include <vector>

#include "foulwall/errors.hpp"
#include "foulwall/fluid_properties.hpp"
#include "foulwall/wall_laws.hpp"

namespace foulwall {

// Wall scaling convention used throughout this module:
//   y+      = u_tau * y / nu_w            nu_w = mu(T_wall)/rho(T_wall)
//   rho+    = rho / rho_w,  mu+ = mu / mu_w,  cP+ = cP / cP_w (constant -> 1)
//   k+      = k / k_w        per-mode conductivities: molecular k_f+,
//                            turbulent k_ft+ = rho+ cP+ nu_t+ * Pr_w/Pr_t,
//                            concentration-driven k_fc+ (hook, default 0)
//   D+      = D / nu_w
//   j+      = j / (rho_w u_tau)           wall-normal species flux component
//   Pr_w    = mu_w cP / k_f
// Species transport coefficient: rho+ (nu_t+/Sc_t + D+).
// Energy flux: K0+ T + K1+ dT/dy+ with
//   K0+ = (k_fc+ + k_ft+) d(ln cP+)/dy+ - Pr_w sum_i j_i+ cP_i+
//   K1+ = k_f+ + k_ft+ + k_fc+
// With the constant mixture heat capacity used here the log-derivative term
// vanishes and cP_i+ = 1.

/// Logarithmically stretched wall-normal node set. y[0] is the first node off
/// the wall; the wall itself (y = 0) is not a node.
struct SubgridMesh {
    std::vector<double> y;      // [m], strictly increasing, geometric spacing
    std::vector<double> y_plus; // filled by set_wall_units
};

/// Geometric mesh from y_first = first_node_ratio*y_bulk up to y_bulk.
SubgridMesh build_mesh(double y_bulk, int n_nodes, double first_node_ratio);

void set_wall_units(SubgridMesh& mesh, double u_tau, double nu_wall);

enum class WallBcKind { dirichlet, zero_gradient };

struct SpeciesWallBc {
    WallBcKind kind = WallBcKind::zero_gradient;
    double value = 0.0; // interface mass fraction for dirichlet
};

/// Per-wall-cell boundary data handed to the subgrid solver.
struct WallCellBC {
    double T_wall = 0.0;   // [K]
    double T_bulk = 0.0;   // [K]
    double u_bulk = 0.0;   // [m/s] wall-parallel velocity at the bulk node
    double q_wall = 0.0;   // [W/m^2]
    double u_tau = 0.0;    // [m/s]
    double y_bulk = 0.0;   // [m] distance from wall to the bulk node
    std::vector<double> X_bulk;
    std::vector<SpeciesWallBc> wall_bc; // one entry per species
};

void validate(const WallCellBC& bc);

struct SubgridSettings {
    int n_nodes = 300;
    double first_node_ratio = 1e-4;
    double tolerance = 1e-8;     // max relative profile change between solves
    int max_iterations = 200;    // outer Picard iterations
    double relaxation = 0.7;     // under-relaxation on T and X property feedback
    double turbulent_prandtl = 0.85;
    double conc_conductivity_plus = 0.0; // k_fc+ hook, constant profile
};

/// Dimensionless groups of the energy equation, exposed for inspection.
struct DimensionlessGroups {
    double prandtl_wall = 0.0;
    std::vector<double> k0_plus;   // per face
    std::vector<double> k1_plus;   // per node
    std::vector<double> k_fc_plus; // per node
    std::vector<double> c_p_plus;  // per node
    std::vector<double> j_plus;    // per face, summed over species
};

/// Node-wise profiles in wall units shared by the three solves.
struct WallUnitProfiles {
    double rho_wall = 0.0; // [kg/m^3]
    double mu_wall = 0.0;  // [Pa s]
    double nu_wall = 0.0;  // [m^2/s]
    std::vector<double> rho_plus;
    std::vector<double> mu_plus;
    std::vector<double> nu_t_plus;
};

/// Evaluates rho+, mu+ and the wall-law nu_t+ on the mesh for a given
/// temperature profile (node count must match the mesh).
WallUnitProfiles make_wall_unit_profiles(const SubgridMesh& mesh, const WallCellBC& bc,
                                         const PropertyModel& props,
                                         const WallLawParams& law,
                                         const std::vector<double>& T_nodes);

/// Solution of one conservative two-point boundary-value problem.
struct BvpSolution {
    std::vector<double> values;
    std::vector<double> face_flux;  // K0*avg + K1*d/dt at each of n-1 faces
    double flux_deviation = 0.0;    // (max-min)/scale over interior faces
};

/// Solves d/dt [ k0(t) v + k1(t) dv/dt ] = 0 on the node set t with a
/// conservative second-order scheme. The diffusive k1 is given per node and
/// harmonically averaged to faces; the signed advective k0 is given per face
/// (size n-1; pass an empty vector for pure diffusion). Dirichlet at the
/// right end; left end Dirichlet or zero-gradient.
/// Throws SingularSystemError if k1 <= 0 anywhere.
BvpSolution solve_conservative_bvp(const std::vector<double>& t,
                                   const std::vector<double>& k1_nodes,
                                   const std::vector<double>& k0_faces,
                                   double left_value, double right_value,
                                   bool zero_gradient_left);

/// Dimensionless velocity profile by cumulative quadrature of
/// du+/dy+ = 1/(mu+ + mu_t+) from the wall (u+ = 0 at y = 0).
std::vector<double> integrate_momentum(const std::vector<double>& y_plus,
                                       const std::vector<double>& mu_plus,
                                       const std::vector<double>& mu_t_plus);

/// Momentum solve with properties evaluated on T_nodes (defaults to a linear
/// wall-to-bulk profile when T_nodes is empty).
std::vector<double> solve_momentum(const SubgridMesh& mesh, const WallCellBC& bc,
                                   const PropertyModel& props, const WallLawParams& law,
                                   const std::vector<double>& T_nodes = {});

struct SpeciesSolution {
    std::vector<std::vector<double>> mass_fractions; // [species][node]
    std::vector<double> j_dep;            // [kg/(m^2 s)], positive toward wall
    std::vector<double> flux_to_wall;     // dimensionless, per species
    std::vector<std::vector<double>> face_flux_plus; // y-direction j+, per species
    std::vector<double> flux_deviation;   // per species
};

SpeciesSolution solve_species(const SubgridMesh& mesh, const WallCellBC& bc,
                              const PropertyModel& props, const WallLawParams& law,
                              const std::vector<double>& T_nodes = {});

DimensionlessGroups make_dimensionless_groups(
    const SubgridMesh& mesh, const WallCellBC& bc, const PropertyModel& props,
    const WallLawParams& law, const SubgridSettings& settings,
    const std::vector<std::vector<double>>& species_face_flux_plus,
    const std::vector<double>& T_nodes = {});

/// Energy solve in conservative form with the groups above; Dirichlet
/// temperatures at the wall and bulk nodes.
BvpSolution solve_energy(const SubgridMesh& mesh, const WallCellBC& bc,
                         const PropertyModel& props, const WallLawParams& law,
                         const SubgridSettings& settings,
                         const std::vector<std::vector<double>>& species_face_flux_plus,
                         const std::vector<double>& T_nodes = {});

struct SolveDiagnostics {
    double final_change = 0.0;          // last max relative profile change
    double energy_flux_deviation = 0.0; // face-flux constancy of the T solve
    std::vector<double> species_flux_deviation;
    std::vector<double> change_history; // per outer iteration
};

struct DepositionResult {
    SubgridMesh mesh;
    std::vector<double> j_dep; // per species [kg/(m^2 s)], positive toward wall
    std::vector<double> u_plus;
    std::vector<double> temperature;                 // [K]
    std::vector<std::vector<double>> mass_fractions; // [species][node]
    int iterations = 0;
    SolveDiagnostics residuals;
};

/// Couples property updates with the momentum/species/energy solves by outer
/// Picard iteration until the max relative change between successive solver
/// outputs drops below settings.tolerance. Under-relaxation acts only on the
/// property-feedback profiles; the returned profiles are unrelaxed solver
/// output. Throws NotConvergedError with the residual history on failure.
DepositionResult solve_wall_cell(const WallCellBC& bc, const PropertyModel& props,
                                 const WallLawParams& law, const SubgridSettings& settings);

} // namespace foulwall
