#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "foulwall/calibration.hpp"
#include "foulwall/channel.hpp"
#include "foulwall/fluid_properties.hpp"
#include "foulwall/interface_bc.hpp"
#include "foulwall/scenario.hpp"
#include "foulwall/subgrid.hpp"
#include "foulwall/two_step.hpp"
#include "foulwall/version.hpp"
#include "foulwall/wall_laws.hpp"

namespace py = pybind11;
using namespace foulwall;

PYBIND11_MODULE(_core, m) {
    m.doc() = "crystallization-fouling wall-function engine";
    m.attr("__version__") = version;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<OutOfRangeError>(m, "OutOfRangeError", PyExc_ValueError);

    // fluid properties
    py::class_<FluidProperties>(m, "FluidProperties")
        .def_readonly("rho", &FluidProperties::rho)
        .def_readonly("mu", &FluidProperties::mu)
        .def_readonly("nu", &FluidProperties::nu)
        .def_readonly("diffusivity", &FluidProperties::diffusivity)
        .def_readonly("x_sat", &FluidProperties::x_sat);

    py::class_<PropertyModel>(m, "PropertyModel")
        .def(py::init([](std::vector<double> rho_poly, std::vector<double> mu_poly,
                         std::vector<double> x_sat_poly, double diffusivity,
                         double thermal_conductivity, double heat_capacity,
                         double turbulent_schmidt, double t_min, double t_max) {
                 return PropertyModel(PolynomialCorrelation{std::move(rho_poly)},
                                      PolynomialCorrelation{std::move(mu_poly)},
                                      PolynomialCorrelation{std::move(x_sat_poly)},
                                      diffusivity, thermal_conductivity, heat_capacity,
                                      turbulent_schmidt, t_min, t_max);
             }),
             py::arg("rho_poly"), py::arg("mu_poly"), py::arg("x_sat_poly"),
             py::arg("diffusivity"), py::arg("thermal_conductivity") = 0.6637,
             py::arg("heat_capacity") = 4182.0, py::arg("turbulent_schmidt") = 1.0,
             py::arg("t_min") = 273.15, py::arg("t_max") = 383.15)
        .def("at", &PropertyModel::at, py::arg("T"))
        .def("with_diffusivity", &PropertyModel::with_diffusivity, py::arg("diffusivity"))
        .def_property_readonly("diffusivity", &PropertyModel::diffusivity);

    m.def("mass_to_mole_fractions", &mass_to_mole_fractions, py::arg("mass_fractions"),
          py::arg("molar_masses"));
    m.def("mole_to_mass_fractions", &mole_to_mass_fractions, py::arg("mole_fractions"),
          py::arg("molar_masses"));

    // wall laws
    py::class_<WallLawParams>(m, "WallLawParams")
        .def(py::init<>())
        .def(py::init([](double kappa, double y_star_plus, double inner_constant) {
                 return WallLawParams{kappa, y_star_plus, inner_constant};
             }),
             py::arg("kappa") = 0.42, py::arg("y_star_plus") = 51.98,
             py::arg("inner_constant") = 11.4)
        .def_readwrite("kappa", &WallLawParams::kappa)
        .def_readwrite("y_star_plus", &WallLawParams::y_star_plus)
        .def_readwrite("inner_constant", &WallLawParams::inner_constant);

    m.def("u_plus", &u_plus, py::arg("y_plus"), py::arg("params") = WallLawParams{});
    m.def("nu_t_plus", &nu_t_plus, py::arg("y_plus"), py::arg("params") = WallLawParams{});
    m.def("invert_friction_velocity", &invert_friction_velocity, py::arg("u_known"),
          py::arg("y_known"), py::arg("nu"), py::arg("params") = WallLawParams{});

    // subgrid
    py::class_<SubgridMesh>(m, "SubgridMesh")
        .def_readonly("y", &SubgridMesh::y)
        .def_readonly("y_plus", &SubgridMesh::y_plus);
    m.def("build_mesh", &build_mesh, py::arg("y_bulk"), py::arg("n_nodes") = 300,
          py::arg("first_node_ratio") = 1e-4);
    m.def("set_wall_units", &set_wall_units, py::arg("mesh"), py::arg("u_tau"),
          py::arg("nu_wall"));

    py::enum_<WallBcKind>(m, "WallBcKind")
        .value("dirichlet", WallBcKind::dirichlet)
        .value("zero_gradient", WallBcKind::zero_gradient);

    py::class_<SpeciesWallBc>(m, "SpeciesWallBc")
        .def(py::init([](WallBcKind kind, double value) {
                 return SpeciesWallBc{kind, value};
             }),
             py::arg("kind") = WallBcKind::zero_gradient, py::arg("value") = 0.0)
        .def_readwrite("kind", &SpeciesWallBc::kind)
        .def_readwrite("value", &SpeciesWallBc::value);

    py::class_<WallCellBC>(m, "WallCellBC")
        .def(py::init<>())
        .def_readwrite("T_wall", &WallCellBC::T_wall)
        .def_readwrite("T_bulk", &WallCellBC::T_bulk)
        .def_readwrite("u_bulk", &WallCellBC::u_bulk)
        .def_readwrite("q_wall", &WallCellBC::q_wall)
        .def_readwrite("u_tau", &WallCellBC::u_tau)
        .def_readwrite("y_bulk", &WallCellBC::y_bulk)
        .def_readwrite("X_bulk", &WallCellBC::X_bulk)
        .def_readwrite("wall_bc", &WallCellBC::wall_bc);

    py::class_<SubgridSettings>(m, "SubgridSettings")
        .def(py::init<>())
        .def_readwrite("n_nodes", &SubgridSettings::n_nodes)
        .def_readwrite("first_node_ratio", &SubgridSettings::first_node_ratio)
        .def_readwrite("tolerance", &SubgridSettings::tolerance)
        .def_readwrite("max_iterations", &SubgridSettings::max_iterations)
        .def_readwrite("relaxation", &SubgridSettings::relaxation)
        .def_readwrite("turbulent_prandtl", &SubgridSettings::turbulent_prandtl)
        .def_readwrite("conc_conductivity_plus", &SubgridSettings::conc_conductivity_plus);

    py::class_<SolveDiagnostics>(m, "SolveDiagnostics")
        .def_readonly("final_change", &SolveDiagnostics::final_change)
        .def_readonly("energy_flux_deviation", &SolveDiagnostics::energy_flux_deviation)
        .def_readonly("species_flux_deviation", &SolveDiagnostics::species_flux_deviation)
        .def_readonly("change_history", &SolveDiagnostics::change_history);

    py::class_<DepositionResult>(m, "DepositionResult")
        .def_readonly("mesh", &DepositionResult::mesh)
        .def_readonly("j_dep", &DepositionResult::j_dep)
        .def_readonly("u_plus", &DepositionResult::u_plus)
        .def_readonly("temperature", &DepositionResult::temperature)
        .def_readonly("mass_fractions", &DepositionResult::mass_fractions)
        .def_readonly("iterations", &DepositionResult::iterations)
        .def_readonly("residuals", &DepositionResult::residuals);

    m.def("solve_wall_cell", &solve_wall_cell, py::arg("bc"), py::arg("props"),
          py::arg("law") = WallLawParams{}, py::arg("settings") = SubgridSettings{},
          py::call_guard<py::gil_scoped_release>());

    // interface BC
    py::class_<LogisticParams>(m, "LogisticParams")
        .def(py::init([](double plateau, double threshold, double steepness) {
                 return LogisticParams{plateau, threshold, steepness};
             }),
             py::arg("plateau"), py::arg("threshold_temperature"), py::arg("steepness"))
        .def_readwrite("plateau", &LogisticParams::plateau)
        .def_readwrite("threshold_temperature", &LogisticParams::threshold_temperature)
        .def_readwrite("steepness", &LogisticParams::steepness);

    py::class_<VelocityPolynomials>(m, "VelocityPolynomials")
        .def(py::init([](std::vector<double> a, std::vector<double> b,
                         std::vector<double> c, double u_min, double u_max) {
                 return VelocityPolynomials{std::move(a), std::move(b), std::move(c),
                                            u_min, u_max};
             }),
             py::arg("plateau_coeffs"), py::arg("threshold_coeffs"),
             py::arg("steepness_coeffs"), py::arg("u_min"), py::arg("u_max"))
        .def_readwrite("plateau_coeffs", &VelocityPolynomials::plateau_coeffs)
        .def_readwrite("threshold_coeffs", &VelocityPolynomials::threshold_coeffs)
        .def_readwrite("steepness_coeffs", &VelocityPolynomials::steepness_coeffs)
        .def_readwrite("u_min", &VelocityPolynomials::u_min)
        .def_readwrite("u_max", &VelocityPolynomials::u_max);

    m.def("logistic_interface_fraction", &logistic_interface_fraction, py::arg("T_wall"),
          py::arg("params"));
    m.def("params_at_velocity", &params_at_velocity, py::arg("u_in"), py::arg("polys"));
    m.def("interface_mass_fraction", &interface_mass_fraction, py::arg("T_wall"),
          py::arg("u_in"), py::arg("polys"), py::arg("x_sat_at_wall"),
          py::arg("wall_temperature_offset") = 6.5);

    py::class_<FitDiagnostics>(m, "FitDiagnostics")
        .def_readonly("rmse", &FitDiagnostics::rmse)
        .def_readonly("iterations", &FitDiagnostics::iterations)
        .def_readonly("covariance", &FitDiagnostics::covariance)
        .def_readonly("degenerate", &FitDiagnostics::degenerate);
    py::class_<LogisticFit>(m, "LogisticFit")
        .def_readonly("params", &LogisticFit::params)
        .def_readonly("diagnostics", &LogisticFit::diagnostics);
    m.def("fit_logistic", &fit_logistic, py::arg("T_wall"), py::arg("x_interface"));

    py::class_<VelocityPolynomialFit>(m, "VelocityPolynomialFit")
        .def_readonly("polynomials", &VelocityPolynomialFit::polynomials)
        .def_readonly("plateau_residual", &VelocityPolynomialFit::plateau_residual)
        .def_readonly("threshold_residual", &VelocityPolynomialFit::threshold_residual)
        .def_readonly("steepness_residual", &VelocityPolynomialFit::steepness_residual);
    m.def("fit_velocity_polynomials", &fit_velocity_polynomials, py::arg("u_in"),
          py::arg("params"));

    // two-step reference model
    py::class_<TwoStepParams>(m, "TwoStepParams")
        .def(py::init([](double k0, double ea, double beta, double r) {
                 return TwoStepParams{k0, ea, beta, r};
             }),
             py::arg("pre_exponential") = 1.62e22,
             py::arg("activation_energy") = 1.48e5,
             py::arg("mass_transfer_coeff") = 0.0,
             py::arg("gas_constant") = 8.314462618)
        .def_readwrite("pre_exponential", &TwoStepParams::pre_exponential)
        .def_readwrite("activation_energy", &TwoStepParams::activation_energy)
        .def_readwrite("mass_transfer_coeff", &TwoStepParams::mass_transfer_coeff)
        .def_readwrite("gas_constant", &TwoStepParams::gas_constant);

    py::class_<TwoStepFlux>(m, "TwoStepFlux")
        .def_readonly("j_dep", &TwoStepFlux::j_dep)
        .def_readonly("undersaturated", &TwoStepFlux::undersaturated);

    m.def("rate_constant", &rate_constant, py::arg("T"), py::arg("params"));
    m.def("deposition_full", &deposition_full, py::arg("C_bulk"), py::arg("C_sat"),
          py::arg("u_tau"), py::arg("mu"), py::arg("rho"), py::arg("T"),
          py::arg("params"));
    m.def("deposition_reduced", &deposition_reduced, py::arg("C_bulk"), py::arg("C_sat"),
          py::arg("u_tau"), py::arg("mu"), py::arg("rho"), py::arg("T"),
          py::arg("params"));
    m.def("concentration_from_mass_fraction", &concentration_from_mass_fraction,
          py::arg("rho"), py::arg("mass_fraction"));

    // channel surrogate
    py::enum_<CellVelocityProfile>(m, "CellVelocityProfile")
        .value("parabolic", CellVelocityProfile::parabolic)
        .value("plug", CellVelocityProfile::plug);

    py::class_<ChannelConfig>(m, "ChannelConfig")
        .def(py::init<>())
        .def_readwrite("gap", &ChannelConfig::gap)
        .def_readwrite("heated_length", &ChannelConfig::heated_length)
        .def_readwrite("n_axial", &ChannelConfig::n_axial)
        .def_readwrite("n_cross", &ChannelConfig::n_cross)
        .def_readwrite("inlet_velocity", &ChannelConfig::inlet_velocity)
        .def_readwrite("inlet_temperature", &ChannelConfig::inlet_temperature)
        .def_readwrite("wall_heat_flux", &ChannelConfig::wall_heat_flux)
        .def_readwrite("inlet_mass_fractions", &ChannelConfig::inlet_mass_fractions)
        .def_readwrite("heated_walls", &ChannelConfig::heated_walls)
        .def_readwrite("cell_velocity_profile", &ChannelConfig::cell_velocity_profile);

    py::class_<ChannelStation>(m, "ChannelStation")
        .def_readonly("x", &ChannelStation::x)
        .def_readonly("u_bulk", &ChannelStation::u_bulk)
        .def_readonly("T_bulk", &ChannelStation::T_bulk)
        .def_readonly("T_wall", &ChannelStation::T_wall)
        .def_readonly("u_tau", &ChannelStation::u_tau)
        .def_readonly("y_bulk", &ChannelStation::y_bulk);

    py::class_<FrozenFlowField>(m, "FrozenFlowField")
        .def_readonly("heated_length", &FrozenFlowField::heated_length)
        .def_readonly("gap", &FrozenFlowField::gap)
        .def_readonly("n_axial", &FrozenFlowField::n_axial)
        .def_readonly("species", &FrozenFlowField::species)
        .def_readonly("inlet_mass_fractions", &FrozenFlowField::inlet_mass_fractions)
        .def_readonly("stations", &FrozenFlowField::stations);

    m.def("march_channel", &march_channel, py::arg("config"), py::arg("props"),
          py::arg("law") = WallLawParams{}, py::arg("turbulent_prandtl") = 0.85,
          py::arg("species_names") = std::vector<std::string>{"CaCO3", "H2O"});
    m.def("save_frozen", &save_frozen, py::arg("field"), py::arg("path"));
    m.def("load_frozen", &load_frozen, py::arg("path"));

    py::class_<WallCellSet>(m, "WallCellSet")
        .def_readonly("cells", &WallCellSet::cells)
        .def_readonly("areas", &WallCellSet::areas)
        .def_readonly("x", &WallCellSet::x);
    m.def("assemble_wall_cells", &assemble_wall_cells, py::arg("field"),
          py::arg("depositing"), py::arg("interface_polys"),
          py::arg("wall_temperature_offset"), py::arg("props"));

    // calibration + scenario runs
    m.def("area_averaged_rate",
          py::overload_cast<const std::vector<double>&, const std::vector<double>&>(
              &area_averaged_rate),
          py::arg("j_dep"), py::arg("areas"));

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("output_dir", &RunSummary::output_dir)
        .def_readonly("area_averaged", &RunSummary::area_averaged)
        .def_readonly("n_cells", &RunSummary::n_cells)
        .def_readonly("elapsed_seconds", &RunSummary::elapsed_seconds);

    m.def(
        "run_scenario",
        [](const std::filesystem::path& config, std::optional<std::filesystem::path> out,
           std::optional<std::filesystem::path> frozen, bool profiles, int jobs) {
            RunOptions opts;
            opts.output_dir = std::move(out);
            opts.frozen_flow_path = std::move(frozen);
            opts.dump_profiles = profiles;
            opts.jobs = jobs;
            return run_scenario(config, opts);
        },
        py::arg("config"), py::arg("out") = std::nullopt, py::arg("frozen") = std::nullopt,
        py::arg("profiles") = false, py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
}
