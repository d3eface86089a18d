#include "foulwall/subgrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "foulwall/detail/tridiag.hpp"

namespace foulwall {

namespace {

std::vector<double> linear_profile(double left, double right, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = left + (right - left) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

double max_relative_change(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

} // namespace

SubgridMesh build_mesh(double y_bulk, int n_nodes, double first_node_ratio) {
    if (!(y_bulk > 0.0))
        throw BadMeshSpecError("y_bulk must be positive");
    if (n_nodes < 3)
        throw BadMeshSpecError("need at least 3 subgrid nodes");
    if (!(first_node_ratio > 0.0) || !(first_node_ratio < 1.0))
        throw BadMeshSpecError("first_node_ratio must lie in (0, 1)");

    SubgridMesh mesh;
    mesh.y.resize(static_cast<std::size_t>(n_nodes));
    const double y_first = first_node_ratio * y_bulk;
    const double log_span = std::log(1.0 / first_node_ratio);
    for (int i = 0; i < n_nodes; ++i)
        mesh.y[static_cast<std::size_t>(i)] =
            y_first * std::exp(log_span * i / (n_nodes - 1));
    mesh.y.front() = y_first;
    mesh.y.back() = y_bulk; // endpoints exact
    return mesh;
}

void set_wall_units(SubgridMesh& mesh, double u_tau, double nu_wall) {
    if (!(u_tau > 0.0) || !(nu_wall > 0.0))
        throw NegativeInputError("wall units require positive u_tau and nu");
    mesh.y_plus.resize(mesh.y.size());
    for (std::size_t i = 0; i < mesh.y.size(); ++i)
        mesh.y_plus[i] = u_tau * mesh.y[i] / nu_wall;
}

void validate(const WallCellBC& bc) {
    if (!(bc.T_wall > 0.0) || !(bc.T_bulk > 0.0))
        throw ConfigError("wall and bulk temperatures must be positive");
    if (!(bc.u_bulk > 0.0) || !(bc.u_tau > 0.0) || !(bc.y_bulk > 0.0))
        throw ConfigError("u_bulk, u_tau and y_bulk must be positive");
    if (bc.X_bulk.empty() || bc.X_bulk.size() != bc.wall_bc.size())
        throw ConfigError("per-species bulk fractions and wall BCs must match");
    for (double x : bc.X_bulk)
        if (x < 0.0 || x > 1.0)
            throw ConfigError("bulk mass fractions must lie in [0, 1]");
    for (const auto& wbc : bc.wall_bc)
        if (wbc.kind == WallBcKind::dirichlet && (wbc.value < 0.0 || wbc.value > 1.0))
            throw ConfigError("interface mass fractions must lie in [0, 1]");
}

WallUnitProfiles make_wall_unit_profiles(const SubgridMesh& mesh, const WallCellBC& bc,
                                         const PropertyModel& props,
                                         const WallLawParams& law,
                                         const std::vector<double>& T_nodes) {
    if (mesh.y_plus.size() != mesh.y.size() || mesh.y.empty())
        throw BadMeshSpecError("mesh wall units not set");
    const std::size_t n = mesh.y.size();
    const std::vector<double>& T =
        T_nodes.empty() ? linear_profile(bc.T_wall, bc.T_bulk, n) : T_nodes;
    if (T.size() != n)
        throw ConfigError("temperature profile size does not match mesh");

    WallUnitProfiles prof;
    const FluidProperties wall = props.at(bc.T_wall);
    prof.rho_wall = wall.rho;
    prof.mu_wall = wall.mu;
    prof.nu_wall = wall.nu;
    prof.rho_plus.resize(n);
    prof.mu_plus.resize(n);
    prof.nu_t_plus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FluidProperties p = props.at(T[i]);
        prof.rho_plus[i] = p.rho / wall.rho;
        prof.mu_plus[i] = p.mu / wall.mu;
        prof.nu_t_plus[i] = nu_t_plus(mesh.y_plus[i], law);
    }
    return prof;
}

BvpSolution solve_conservative_bvp(const std::vector<double>& t,
                                   const std::vector<double>& k1_nodes,
                                   const std::vector<double>& k0_faces,
                                   double left_value, double right_value,
                                   bool zero_gradient_left) {
    const std::size_t n = t.size();
    if (n < 3 || k1_nodes.size() != n)
        throw BadMeshSpecError("bvp inputs must share the mesh size (>= 3)");
    if (!k0_faces.empty() && k0_faces.size() != n - 1)
        throw BadMeshSpecError("advective face coefficients must have size n-1");
    for (double k : k1_nodes)
        if (!(k > 0.0))
            throw SingularSystemError("diffusive coefficient must be positive everywhere");

    // harmonic face mean of the diffusive coefficient preserves flux
    // continuity across strong coefficient jumps near the wall
    std::vector<double> k1f(n - 1), k0f(n - 1), h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        k1f[i] = 2.0 * k1_nodes[i] * k1_nodes[i + 1] / (k1_nodes[i] + k1_nodes[i + 1]);
        k0f[i] = k0_faces.empty() ? 0.0 : k0_faces[i];
        h[i] = t[i + 1] - t[i];
        if (!(h[i] > 0.0))
            throw BadMeshSpecError("node coordinates must be strictly increasing");
    }

    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    if (zero_gradient_left) {
        b[0] = 1.0;
        c[0] = -1.0;
        d[0] = 0.0;
    } else {
        b[0] = 1.0;
        d[0] = left_value;
    }
    b[n - 1] = 1.0;
    d[n - 1] = right_value;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        // F_{i+1/2} - F_{i-1/2} = 0 with F = k0*avg(v) + k1*dv/dt
        const double wp = k1f[i] / h[i];
        const double wm = k1f[i - 1] / h[i - 1];
        a[i] = wm - 0.5 * k0f[i - 1];
        b[i] = -(wp + wm) + 0.5 * (k0f[i] - k0f[i - 1]);
        c[i] = wp + 0.5 * k0f[i];
    }

    BvpSolution sol;
    sol.values = detail::solve_tridiagonal(a, b, c, d);
    sol.face_flux.resize(n - 1);
    double fmin = 0.0, fmax = 0.0, fabsmax = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double flux = k0f[i] * 0.5 * (sol.values[i] + sol.values[i + 1]) +
                            k1f[i] * (sol.values[i + 1] - sol.values[i]) / h[i];
        sol.face_flux[i] = flux;
        if (i == 0) {
            fmin = fmax = flux;
        } else {
            fmin = std::min(fmin, flux);
            fmax = std::max(fmax, flux);
        }
        fabsmax = std::max(fabsmax, std::abs(flux));
    }
    // zero-flux solves carry only roundoff noise (~eps * conductance * value),
    // so the relative measure needs a noise floor well above that level
    double conductance = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) conductance = std::max(conductance, k1f[i] / h[i]);
    const double span = std::max(std::abs(left_value), std::abs(right_value));
    const double floor_scale = std::max(1e-300, conductance * span * 1e-12);
    sol.flux_deviation = (fmax - fmin) / std::max(fabsmax, floor_scale);
    return sol;
}

std::vector<double> integrate_momentum(const std::vector<double>& y_plus,
                                       const std::vector<double>& mu_plus,
                                       const std::vector<double>& mu_t_plus) {
    const std::size_t n = y_plus.size();
    if (n == 0 || mu_plus.size() != n || mu_t_plus.size() != n)
        throw BadMeshSpecError("momentum inputs must share the mesh size");
    std::vector<double> u(n);
    // wall segment [0, y+_0]: mu_t+ -> 0 at y = 0; the molecular viscosity at
    // the wall equals the first-node value (node 0 carries the wall state)
    const double f_wall = 1.0 / mu_plus[0];
    double f_prev = 1.0 / (mu_plus[0] + mu_t_plus[0]);
    u[0] = 0.5 * (f_wall + f_prev) * y_plus[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double f = 1.0 / (mu_plus[i] + mu_t_plus[i]);
        u[i] = u[i - 1] + 0.5 * (f_prev + f) * (y_plus[i] - y_plus[i - 1]);
        f_prev = f;
    }
    return u;
}

std::vector<double> solve_momentum(const SubgridMesh& mesh, const WallCellBC& bc,
                                   const PropertyModel& props, const WallLawParams& law,
                                   const std::vector<double>& T_nodes) {
    validate(bc);
    const WallUnitProfiles prof = make_wall_unit_profiles(mesh, bc, props, law, T_nodes);
    std::vector<double> mu_t(prof.nu_t_plus.size());
    for (std::size_t i = 0; i < mu_t.size(); ++i)
        mu_t[i] = prof.rho_plus[i] * prof.nu_t_plus[i];
    return integrate_momentum(mesh.y_plus, prof.mu_plus, mu_t);
}

SpeciesSolution solve_species(const SubgridMesh& mesh, const WallCellBC& bc,
                              const PropertyModel& props, const WallLawParams& law,
                              const std::vector<double>& T_nodes) {
    validate(bc);
    const WallUnitProfiles prof = make_wall_unit_profiles(mesh, bc, props, law, T_nodes);
    const std::size_t n = mesh.y.size();
    const std::size_t n_species = bc.X_bulk.size();
    const double d_plus = props.diffusivity() / prof.nu_wall;
    const double sc_t = props.turbulent_schmidt();

    std::vector<double> coeff(n);
    for (std::size_t i = 0; i < n; ++i)
        coeff[i] = prof.rho_plus[i] * (prof.nu_t_plus[i] / sc_t + d_plus);

    SpeciesSolution out;
    out.mass_fractions.resize(n_species);
    out.j_dep.resize(n_species);
    out.flux_to_wall.resize(n_species);
    out.face_flux_plus.resize(n_species);
    out.flux_deviation.resize(n_species);
    for (std::size_t s = 0; s < n_species; ++s) {
        const auto& wbc = bc.wall_bc[s];
        if (wbc.kind == WallBcKind::zero_gradient) {
            // the discrete system's exact solution: a zero wall gradient with
            // no interior sources forces a uniform profile and zero flux
            out.mass_fractions[s].assign(n, bc.X_bulk[s]);
            out.j_dep[s] = 0.0;
            out.flux_to_wall[s] = 0.0;
            out.face_flux_plus[s].assign(n - 1, 0.0);
            out.flux_deviation[s] = 0.0;
            continue;
        }
        BvpSolution sol =
            solve_conservative_bvp(mesh.y_plus, coeff, {}, wbc.value, bc.X_bulk[s], false);
        // constant discrete flux; the first face carries the wall value
        out.flux_to_wall[s] = sol.face_flux.front();
        out.j_dep[s] = prof.rho_wall * bc.u_tau * out.flux_to_wall[s];
        out.flux_deviation[s] = sol.flux_deviation;
        out.face_flux_plus[s].resize(sol.face_flux.size());
        for (std::size_t i = 0; i < sol.face_flux.size(); ++i)
            out.face_flux_plus[s][i] = -sol.face_flux[i]; // y-direction component
        out.mass_fractions[s] = std::move(sol.values);
    }
    return out;
}

DimensionlessGroups make_dimensionless_groups(
    const SubgridMesh& mesh, const WallCellBC& bc, const PropertyModel& props,
    const WallLawParams& law, const SubgridSettings& settings,
    const std::vector<std::vector<double>>& species_face_flux_plus,
    const std::vector<double>& T_nodes) {
    const WallUnitProfiles prof = make_wall_unit_profiles(mesh, bc, props, law, T_nodes);
    const std::size_t n = mesh.y.size();

    DimensionlessGroups g;
    g.prandtl_wall = prof.mu_wall * props.heat_capacity() / props.thermal_conductivity();
    g.c_p_plus.assign(n, 1.0); // constant mixture heat capacity
    g.k_fc_plus.assign(n, settings.conc_conductivity_plus);
    g.k1_plus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k_f_plus = 1.0; // constant molecular conductivity
        const double k_ft_plus = prof.rho_plus[i] * g.c_p_plus[i] * prof.nu_t_plus[i] *
                                 g.prandtl_wall / settings.turbulent_prandtl;
        g.k1_plus[i] = k_f_plus + k_ft_plus + g.k_fc_plus[i];
    }
    // constant cP+ kills the log-derivative part of K0
    g.j_plus.assign(n - 1, 0.0);
    for (const auto& flux : species_face_flux_plus) {
        if (flux.size() != n - 1)
            throw ConfigError("species face fluxes do not match the mesh");
        for (std::size_t i = 0; i + 1 < n; ++i) g.j_plus[i] += flux[i];
    }
    g.k0_plus.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        g.k0_plus[i] = -g.prandtl_wall * g.j_plus[i]; // cP_i+ = 1
    return g;
}

BvpSolution solve_energy(const SubgridMesh& mesh, const WallCellBC& bc,
                         const PropertyModel& props, const WallLawParams& law,
                         const SubgridSettings& settings,
                         const std::vector<std::vector<double>>& species_face_flux_plus,
                         const std::vector<double>& T_nodes) {
    validate(bc);
    const DimensionlessGroups g = make_dimensionless_groups(
        mesh, bc, props, law, settings, species_face_flux_plus, T_nodes);
    return solve_conservative_bvp(mesh.y_plus, g.k1_plus, g.k0_plus, bc.T_wall, bc.T_bulk,
                                  false);
}

DepositionResult solve_wall_cell(const WallCellBC& bc, const PropertyModel& props,
                                 const WallLawParams& law,
                                 const SubgridSettings& settings) {
    validate(bc);
    if (!(settings.relaxation > 0.0) || settings.relaxation > 1.0)
        throw ConfigError("relaxation must lie in (0, 1]");

    SubgridMesh mesh = build_mesh(bc.y_bulk, settings.n_nodes, settings.first_node_ratio);
    set_wall_units(mesh, bc.u_tau, props.at(bc.T_wall).nu);
    const std::size_t n = mesh.y.size();
    const std::size_t n_species = bc.X_bulk.size();

    // property-feedback profiles (under-relaxed)
    std::vector<double> T_feedback = linear_profile(bc.T_wall, bc.T_bulk, n);
    // previous unrelaxed solver output, for the convergence measure
    std::vector<double> T_prev;
    std::vector<std::vector<double>> X_prev;

    DepositionResult result;
    result.residuals.species_flux_deviation.assign(n_species, 0.0);

    SpeciesSolution species;
    BvpSolution energy;
    bool converged = false;
    int it = 0;
    while (it < settings.max_iterations) {
        ++it;
        species = solve_species(mesh, bc, props, law, T_feedback);
        energy = solve_energy(mesh, bc, props, law, settings, species.face_flux_plus,
                              T_feedback);

        double change = 0.0;
        if (!T_prev.empty()) {
            change = max_relative_change(energy.values, T_prev);
            for (std::size_t s = 0; s < n_species; ++s)
                change = std::max(change,
                                  max_relative_change(species.mass_fractions[s], X_prev[s]));
        } else {
            change = 1.0;
        }
        result.residuals.change_history.push_back(change);
        T_prev = energy.values;
        X_prev = species.mass_fractions;

        if (change < settings.tolerance) {
            converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i)
            T_feedback[i] += settings.relaxation * (energy.values[i] - T_feedback[i]);
    }
    if (!converged)
        throw NotConvergedError(
            "wall-cell solve did not converge in " + std::to_string(it) + " iterations",
            result.residuals.change_history);

    result.mesh = mesh;
    result.u_plus = solve_momentum(mesh, bc, props, law, energy.values);
    result.temperature = energy.values;
    result.mass_fractions = species.mass_fractions;
    result.j_dep = species.j_dep;
    result.iterations = it;
    result.residuals.final_change = result.residuals.change_history.back();
    result.residuals.energy_flux_deviation = energy.flux_deviation;
    result.residuals.species_flux_deviation = species.flux_deviation;
    return result;
}

} // namespace foulwall
