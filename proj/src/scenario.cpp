#include "foulwall/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "foulwall/detail/text_io.hpp"
#include "foulwall/version.hpp"

namespace foulwall {

using nlohmann::json;
using detail::format_double;

namespace {

// ---- strict JSON helpers ----------------------------------------------------

json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        // comments allowed so shipped scenarios can be annotated
        return json::parse(buf.str(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError(where + " must be a JSON object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("missing key '" + key + "' in " + where);
    return obj.at(key);
}

double get_double(const json& obj, const std::string& where, const std::string& key) {
    const json& v = require(obj, where, key);
    if (!v.is_number())
        throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

double get_double_or(const json& obj, const std::string& where, const std::string& key,
                     double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

int get_int_or(const json& obj, const std::string& where, const std::string& key,
               int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(where + "." + key + " must be an integer");
    return v.get<int>();
}

std::vector<double> get_double_array(const json& obj, const std::string& where,
                                     const std::string& key) {
    const json& v = require(obj, where, key);
    if (!v.is_array())
        throw ConfigError(where + "." + key + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            throw ConfigError(where + "." + key + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string get_string(const json& obj, const std::string& where, const std::string& key) {
    const json& v = require(obj, where, key);
    if (!v.is_string())
        throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

// ---- scenario blocks --------------------------------------------------------

PropertyModel parse_properties(const json& j) {
    const std::string where = "properties";
    check_keys(j, where,
               {"rho_poly_kg_m3", "mu_poly_Pa_s", "x_sat_poly_kg_kg", "diffusivity_m2_s",
                "thermal_conductivity_W_m_K", "heat_capacity_J_kg_K", "turbulent_schmidt",
                "validity_K"});
    const auto validity = get_double_array(j, where, "validity_K");
    if (validity.size() != 2)
        throw ConfigError("properties.validity_K must be [T_min, T_max]");
    return PropertyModel(
        PolynomialCorrelation{get_double_array(j, where, "rho_poly_kg_m3")},
        PolynomialCorrelation{get_double_array(j, where, "mu_poly_Pa_s")},
        PolynomialCorrelation{get_double_array(j, where, "x_sat_poly_kg_kg")},
        get_double(j, where, "diffusivity_m2_s"),
        get_double_or(j, where, "thermal_conductivity_W_m_K", 0.6637),
        get_double_or(j, where, "heat_capacity_J_kg_K", 4182.0),
        get_double_or(j, where, "turbulent_schmidt", 1.0), validity[0], validity[1]);
}

VelocityPolynomials parse_interface_polynomials(const json& j, const std::string& where) {
    VelocityPolynomials vp;
    vp.plateau_coeffs = get_double_array(j, where, "plateau_poly");
    vp.threshold_coeffs = get_double_array(j, where, "threshold_poly_K");
    vp.steepness_coeffs = get_double_array(j, where, "steepness_poly");
    const auto validity = get_double_array(j, where, "velocity_validity_m_s");
    if (validity.size() != 2)
        throw ConfigError(where + ".velocity_validity_m_s must be [u_min, u_max]");
    vp.u_min = validity[0];
    vp.u_max = validity[1];
    validate(vp);
    return vp;
}

} // namespace

std::size_t Scenario::depositing_index() const {
    for (std::size_t i = 0; i < species.size(); ++i)
        if (species[i].depositing) return i;
    throw ConfigError("no depositing species configured");
}

std::vector<std::string> Scenario::species_names() const {
    std::vector<std::string> names;
    for (const auto& s : species) names.push_back(s.name);
    return names;
}

std::vector<bool> Scenario::depositing_flags() const {
    std::vector<bool> flags;
    for (const auto& s : species) flags.push_back(s.depositing);
    return flags;
}

Scenario load_scenario(const std::filesystem::path& config_path) {
    const json root = parse_json_file(config_path);
    check_keys(root, "scenario",
               {"name", "species", "properties", "wall_law", "channel", "interface_bc",
                "subgrid", "fouling_model", "two_step", "calibration", "output_dir"});

    Scenario sc{
        /*name=*/"",
        /*species=*/{},
        /*properties=*/parse_properties(require(root, "scenario", "properties")),
        /*wall_law=*/{},
        /*turbulent_prandtl=*/0.85,
        /*channel=*/{},
        /*interface_polynomials=*/{},
        /*wall_temperature_offset=*/6.5,
        /*subgrid=*/{},
        /*model=*/FoulingModel::wall_function,
        /*two_step=*/{},
        /*calibration=*/std::nullopt,
        /*output_dir=*/"out"};

    sc.name = root.contains("name") ? get_string(root, "scenario", "name")
                                    : config_path.stem().string();

    // species
    const json& species = require(root, "scenario", "species");
    if (!species.is_array() || species.empty())
        throw ConfigError("species must be a nonempty array");
    int depositing_count = 0;
    for (std::size_t i = 0; i < species.size(); ++i) {
        const std::string where = "species[" + std::to_string(i) + "]";
        check_keys(species[i], where, {"name", "molar_mass_kg_mol", "depositing"});
        SpeciesSpec spec;
        spec.name = get_string(species[i], where, "name");
        spec.molar_mass = get_double(species[i], where, "molar_mass_kg_mol");
        if (!(spec.molar_mass > 0.0))
            throw ConfigError(where + ": molar mass must be positive");
        const json& dep = require(species[i], where, "depositing");
        if (!dep.is_boolean())
            throw ConfigError(where + ".depositing must be a boolean");
        spec.depositing = dep.get<bool>();
        depositing_count += spec.depositing ? 1 : 0;
        sc.species.push_back(std::move(spec));
    }
    if (depositing_count != 1)
        throw ConfigError("exactly one depositing species is supported, got " +
                          std::to_string(depositing_count));

    // wall law
    if (root.contains("wall_law")) {
        const json& j = root.at("wall_law");
        check_keys(j, "wall_law",
                   {"kappa", "y_star_plus", "inner_constant", "turbulent_prandtl"});
        sc.wall_law.kappa = get_double_or(j, "wall_law", "kappa", 0.42);
        sc.wall_law.y_star_plus = get_double_or(j, "wall_law", "y_star_plus", 51.98);
        sc.wall_law.inner_constant = get_double_or(j, "wall_law", "inner_constant", 11.4);
        sc.turbulent_prandtl = get_double_or(j, "wall_law", "turbulent_prandtl", 0.85);
    }
    validate(sc.wall_law);
    if (!(sc.turbulent_prandtl > 0.0))
        throw ConfigError("wall_law.turbulent_prandtl must be positive");

    // channel
    {
        const json& j = require(root, "scenario", "channel");
        check_keys(j, "channel",
                   {"gap_m", "heated_length_m", "n_axial", "n_cross", "inlet_velocity_m_s",
                    "inlet_temperature_K", "wall_heat_flux_W_m2", "inlet_mass_fractions",
                    "heated_walls", "cell_velocity_profile"});
        sc.channel.gap = get_double_or(j, "channel", "gap_m", 0.0281);
        sc.channel.heated_length = get_double_or(j, "channel", "heated_length_m", 0.2);
        sc.channel.n_axial = get_int_or(j, "channel", "n_axial", 40);
        sc.channel.n_cross = get_int_or(j, "channel", "n_cross", 6);
        sc.channel.inlet_velocity = get_double(j, "channel", "inlet_velocity_m_s");
        sc.channel.inlet_temperature =
            get_double_or(j, "channel", "inlet_temperature_K", 303.0);
        sc.channel.wall_heat_flux =
            get_double_or(j, "channel", "wall_heat_flux_W_m2", 52500.0);
        sc.channel.inlet_mass_fractions =
            get_double_array(j, "channel", "inlet_mass_fractions");
        sc.channel.heated_walls = get_int_or(j, "channel", "heated_walls", 1);
        if (j.contains("cell_velocity_profile")) {
            const std::string p = get_string(j, "channel", "cell_velocity_profile");
            if (p == "parabolic")
                sc.channel.cell_velocity_profile = CellVelocityProfile::parabolic;
            else if (p == "plug")
                sc.channel.cell_velocity_profile = CellVelocityProfile::plug;
            else
                throw ConfigError("channel.cell_velocity_profile must be 'parabolic' or 'plug'");
        }
        validate(sc.channel);
        if (sc.channel.inlet_mass_fractions.size() != sc.species.size())
            throw ConfigError("channel.inlet_mass_fractions must match the species list");
        double sum = 0.0;
        for (double x : sc.channel.inlet_mass_fractions) sum += x;
        if (std::abs(sum - 1.0) > 1e-9)
            throw ConfigError("channel.inlet_mass_fractions must sum to 1");
    }

    // interface BC: polynomials directly, or profile files to fit
    {
        const json& j = require(root, "scenario", "interface_bc");
        check_keys(j, "interface_bc",
                   {"plateau_poly", "threshold_poly_K", "steepness_poly",
                    "velocity_validity_m_s", "wall_temperature_offset_K",
                    "fit_data_files"});
        sc.wall_temperature_offset =
            get_double_or(j, "interface_bc", "wall_temperature_offset_K", 6.5);
        const bool has_polys = j.contains("plateau_poly");
        const bool has_files = j.contains("fit_data_files");
        if (has_polys == has_files)
            throw ConfigError(
                "interface_bc needs either polynomial coefficients or fit_data_files");
        if (has_polys) {
            sc.interface_polynomials = parse_interface_polynomials(j, "interface_bc");
        } else {
            const json& files = j.at("fit_data_files");
            if (!files.is_array() || files.empty())
                throw ConfigError("interface_bc.fit_data_files must be a nonempty array");
            std::vector<double> velocities;
            std::vector<LogisticParams> params;
            for (const auto& f : files) {
                if (!f.is_string())
                    throw ConfigError("interface_bc.fit_data_files must contain paths");
                std::filesystem::path p = f.get<std::string>();
                if (p.is_relative()) p = config_path.parent_path() / p;
                if (!std::filesystem::exists(p))
                    throw ConfigError("interface data file does not exist: " + p.string());
                const InterfaceProfileData data = read_interface_profile_csv(p);
                const LogisticFit fit = fit_logistic(data.T_wall, data.x_interface);
                velocities.push_back(data.u_in);
                params.push_back(fit.params);
            }
            if (velocities.size() < 4)
                throw ConfigError("interface_bc.fit_data_files needs at least 4 "
                                  "velocities to build the polynomials; run the 'fit' "
                                  "subcommand for per-velocity parameters");
            sc.interface_polynomials =
                fit_velocity_polynomials(velocities, params).polynomials;
        }
    }

    // subgrid
    if (root.contains("subgrid")) {
        const json& j = root.at("subgrid");
        check_keys(j, "subgrid",
                   {"n_nodes", "first_node_ratio", "tolerance", "max_iterations",
                    "relaxation", "conc_conductivity_plus"});
        sc.subgrid.n_nodes = get_int_or(j, "subgrid", "n_nodes", 300);
        sc.subgrid.first_node_ratio =
            get_double_or(j, "subgrid", "first_node_ratio", 1e-4);
        sc.subgrid.tolerance = get_double_or(j, "subgrid", "tolerance", 1e-8);
        sc.subgrid.max_iterations = get_int_or(j, "subgrid", "max_iterations", 200);
        sc.subgrid.relaxation = get_double_or(j, "subgrid", "relaxation", 0.7);
        sc.subgrid.conc_conductivity_plus =
            get_double_or(j, "subgrid", "conc_conductivity_plus", 0.0);
    }
    sc.subgrid.turbulent_prandtl = sc.turbulent_prandtl;

    // fouling model selector
    {
        const std::string m = get_string(root, "scenario", "fouling_model");
        if (m == "wall_function")
            sc.model = FoulingModel::wall_function;
        else if (m == "two_step")
            sc.model = FoulingModel::two_step;
        else if (m == "both")
            sc.model = FoulingModel::both;
        else
            throw ConfigError(
                "fouling_model must be 'wall_function', 'two_step' or 'both'");
    }

    // two-step constants
    if (root.contains("two_step")) {
        const json& j = root.at("two_step");
        check_keys(j, "two_step",
                   {"pre_exponential", "activation_energy_J_mol", "mass_transfer_coeff_m_s",
                    "gas_constant_J_mol_K", "variant"});
        sc.two_step.params.pre_exponential =
            get_double_or(j, "two_step", "pre_exponential", 1.62e22);
        sc.two_step.params.activation_energy =
            get_double_or(j, "two_step", "activation_energy_J_mol", 1.48e5);
        sc.two_step.params.mass_transfer_coeff =
            get_double_or(j, "two_step", "mass_transfer_coeff_m_s", 0.0);
        sc.two_step.params.gas_constant =
            get_double_or(j, "two_step", "gas_constant_J_mol_K", 8.314462618);
        if (j.contains("variant")) {
            const std::string v = get_string(j, "two_step", "variant");
            if (v == "full")
                sc.two_step.use_full = true;
            else if (v != "reduced")
                throw ConfigError("two_step.variant must be 'reduced' or 'full'");
        }
        if (sc.two_step.use_full && !(sc.two_step.params.mass_transfer_coeff > 0.0))
            throw ConfigError("two_step.variant 'full' needs mass_transfer_coeff_m_s > 0");
    }

    // calibration
    if (root.contains("calibration")) {
        const json& j = root.at("calibration");
        check_keys(j, "calibration",
                   {"target_rate_kg_m2_s", "diffusivity_bracket_m2_s", "rel_tol",
                    "max_iterations"});
        CalibrationSpec cal;
        cal.target_rate = get_double(j, "calibration", "target_rate_kg_m2_s");
        const auto bracket = get_double_array(j, "calibration", "diffusivity_bracket_m2_s");
        if (bracket.size() != 2)
            throw ConfigError("calibration.diffusivity_bracket_m2_s must be [D_lo, D_hi]");
        cal.d_lo = bracket[0];
        cal.d_hi = bracket[1];
        cal.rel_tol = get_double_or(j, "calibration", "rel_tol", 1e-4);
        cal.max_iterations = get_int_or(j, "calibration", "max_iterations", 60);
        if (!(cal.d_lo > 0.0) || !(cal.d_hi > cal.d_lo))
            throw ConfigError("calibration bracket must satisfy 0 < D_lo < D_hi");
        if (!(cal.target_rate > 0.0))
            throw ConfigError("calibration target rate must be positive");
        sc.calibration = cal;
    }

    if (root.contains("output_dir"))
        sc.output_dir = get_string(root, "scenario", "output_dir");

    return sc;
}

// ---- pipeline ----------------------------------------------------------------

namespace {

int resolve_jobs(int jobs, std::size_t n_cells) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                                  std::max<std::size_t>(n_cells, 1)));
}

// Deterministic concurrent map: results land by index, the lowest-index
// failure is rethrown, so concurrency never changes observable output.
std::vector<DepositionResult> solve_all_cells(const std::vector<WallCellBC>& cells,
                                              const PropertyModel& props,
                                              const WallLawParams& law,
                                              const SubgridSettings& settings, int jobs) {
    std::vector<DepositionResult> results(cells.size());
    std::vector<std::exception_ptr> failures(cells.size());
    const int workers = resolve_jobs(jobs, cells.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                results[i] = solve_wall_cell(cells[i], props, law, settings);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (failures[i]) std::rethrow_exception(failures[i]);
    return results;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write file: " + path.string());
    out << content;
    if (!out)
        throw IoError("write failed: " + path.string());
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedScenario {
    Scenario scenario;
    std::string config_hash;
    std::filesystem::path config_path;
};

LoadedScenario load_with_hash(const std::filesystem::path& config_path) {
    LoadedScenario ls{load_scenario(config_path),
                      detail::fnv1a64_hex(read_file_bytes(config_path)), config_path};
    return ls;
}

std::filesystem::path prepare_output_dir(const Scenario& sc, const RunOptions& options) {
    const std::filesystem::path dir = options.output_dir.value_or(sc.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " +
                      ec.message());
    return dir;
}

FrozenFlowField obtain_field(const Scenario& sc, const RunOptions& options) {
    if (options.frozen_flow_path) {
        FrozenFlowField field = load_frozen(*options.frozen_flow_path);
        if (field.species != sc.species_names())
            throw ConfigError("frozen flow field species do not match the scenario");
        return field;
    }
    return march_channel(sc.channel, sc.properties, sc.wall_law, sc.turbulent_prandtl,
                         sc.species_names());
}

std::string wall_function_csv(const Scenario& sc, const WallCellSet& cells,
                              const std::vector<DepositionResult>& results) {
    const std::size_t dep = sc.depositing_index();
    const std::string& name = sc.species[dep].name;
    std::ostringstream out;
    out << "cell_index,x_m,T_wall_K,T_bulk_K,u_bulk_m_s,u_tau_m_s,X_wall_" << name
        << ",j_dep_" << name << "_kg_m2_s,iterations,residual\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const WallCellBC& bc = cells.cells[i];
        out << i << ',' << format_double(cells.x[i]) << ',' << format_double(bc.T_wall)
            << ',' << format_double(bc.T_bulk) << ',' << format_double(bc.u_bulk) << ','
            << format_double(bc.u_tau) << ',' << format_double(bc.wall_bc[dep].value)
            << ',' << format_double(results[i].j_dep[dep]) << ','
            << results[i].iterations << ','
            << format_double(results[i].residuals.final_change) << '\n';
    }
    return out.str();
}

struct TwoStepRow {
    double delta_c = 0.0;
    double j_dep = 0.0;
    bool undersaturated = false;
};

std::vector<TwoStepRow> run_two_step(const Scenario& sc, const FrozenFlowField& field) {
    const std::size_t dep = sc.depositing_index();
    std::vector<TwoStepRow> rows;
    rows.reserve(field.stations.size());
    for (const auto& st : field.stations) {
        // concentrations: bulk at the cell-center state, saturation at the wall
        const double c_bulk = concentration_from_mass_fraction(
            st.rho_bulk, field.inlet_mass_fractions[dep]);
        const double c_sat = concentration_from_mass_fraction(
            st.rho_wall, sc.properties.x_sat(st.T_wall));
        const TwoStepFlux flux =
            sc.two_step.use_full
                ? deposition_full(c_bulk, c_sat, st.u_tau, st.mu_wall, st.rho_wall,
                                  st.T_wall, sc.two_step.params)
                : deposition_reduced(c_bulk, c_sat, st.u_tau, st.mu_wall, st.rho_wall,
                                     st.T_wall, sc.two_step.params);
        rows.push_back({c_bulk - c_sat, flux.j_dep, flux.undersaturated});
    }
    return rows;
}

std::string two_step_csv(const Scenario& sc, const FrozenFlowField& field,
                         const std::vector<TwoStepRow>& rows) {
    const std::string& name = sc.species[sc.depositing_index()].name;
    std::ostringstream out;
    out << "cell_index,x_m,T_wall_K,T_bulk_K,u_bulk_m_s,u_tau_m_s,delta_C_kg_m3,j_dep_"
        << name << "_kg_m2_s,undersaturated\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& st = field.stations[i];
        out << i << ',' << format_double(st.x) << ',' << format_double(st.T_wall) << ','
            << format_double(st.T_bulk) << ',' << format_double(st.u_bulk) << ','
            << format_double(st.u_tau) << ',' << format_double(rows[i].delta_c) << ','
            << format_double(rows[i].j_dep) << ',' << (rows[i].undersaturated ? 1 : 0)
            << '\n';
    }
    return out.str();
}

std::string profile_csv(const Scenario& sc, const DepositionResult& r) {
    std::ostringstream out;
    out << "y_m,y_plus,u_plus,T_K";
    for (const auto& s : sc.species) out << ",X_" << s.name;
    out << '\n';
    for (std::size_t i = 0; i < r.mesh.y.size(); ++i) {
        out << format_double(r.mesh.y[i]) << ',' << format_double(r.mesh.y_plus[i]) << ','
            << format_double(r.u_plus[i]) << ',' << format_double(r.temperature[i]);
        for (const auto& x : r.mass_fractions) out << ',' << format_double(x[i]);
        out << '\n';
    }
    return out.str();
}

} // namespace

RunSummary run_scenario(const std::filesystem::path& config_path,
                        const RunOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const LoadedScenario ls = load_with_hash(config_path);
    const Scenario& sc = ls.scenario;
    const std::filesystem::path out_dir = prepare_output_dir(sc, options);

    const FrozenFlowField field = obtain_field(sc, options);
    const WallCellSet cells =
        assemble_wall_cells(field, sc.depositing_flags(), sc.interface_polynomials,
                            sc.wall_temperature_offset, sc.properties);
    const std::size_t dep = sc.depositing_index();

    RunSummary summary;
    summary.n_cells = static_cast<int>(cells.cells.size());

    // compute everything first, write files afterwards
    std::vector<std::pair<std::filesystem::path, std::string>> artifacts;

    std::vector<DepositionResult> wf_results;
    if (sc.model == FoulingModel::wall_function || sc.model == FoulingModel::both) {
        wf_results = solve_all_cells(cells.cells, sc.properties, sc.wall_law, sc.subgrid,
                                     options.jobs);
        summary.area_averaged["wall_function"] =
            area_averaged_rate(wf_results, cells.areas, dep);
        artifacts.emplace_back(out_dir / "per_cell_wall_function.csv",
                               wall_function_csv(sc, cells, wf_results));
        if (options.dump_profiles) {
            for (std::size_t i = 0; i < wf_results.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof(name), "cell_%04zu.csv", i);
                artifacts.emplace_back(out_dir / "profiles" / name,
                                       profile_csv(sc, wf_results[i]));
            }
        }
    }

    if (sc.model == FoulingModel::two_step || sc.model == FoulingModel::both) {
        const std::vector<TwoStepRow> rows = run_two_step(sc, field);
        std::vector<double> j(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) j[i] = rows[i].j_dep;
        summary.area_averaged["two_step"] = area_averaged_rate(j, cells.areas);
        artifacts.emplace_back(out_dir / "per_cell_two_step.csv",
                               two_step_csv(sc, field, rows));
    }

    {
        std::ostringstream out;
        out << "model,area_averaged_rate_kg_m2_s,n_cells,heated_area_m2\n";
        const double total_area =
            std::accumulate(cells.areas.begin(), cells.areas.end(), 0.0);
        for (const auto& [model, rate] : summary.area_averaged)
            out << model << ',' << format_double(rate) << ',' << cells.cells.size() << ','
                << format_double(total_area) << '\n';
        artifacts.emplace_back(out_dir / "summary.csv", out.str());
    }

    summary.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json manifest;
    manifest["scenario_name"] = sc.name;
    manifest["config_path"] = config_path.string();
    manifest["config_fnv1a64"] = ls.config_hash;
    manifest["engine_version"] = version;
    manifest["fouling_model"] = sc.model == FoulingModel::wall_function ? "wall_function"
                                : sc.model == FoulingModel::two_step    ? "two_step"
                                                                        : "both";
    manifest["n_cells"] = summary.n_cells;
    manifest["subgrid_nodes"] = sc.subgrid.n_nodes;
    manifest["diffusivity_m2_s"] = sc.properties.diffusivity();
    manifest["jobs"] = options.jobs;
    manifest["frozen_flow_reused"] = options.frozen_flow_path.has_value();
    manifest["elapsed_seconds"] = summary.elapsed_seconds;
    json outputs = json::array();
    for (const auto& [path, _] : artifacts) outputs.push_back(path.filename().string());
    manifest["outputs"] = outputs;

    if (options.dump_profiles) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir / "profiles", ec);
        if (ec)
            throw IoError("cannot create profiles directory: " + ec.message());
    }
    for (const auto& [path, content] : artifacts) write_text_file(path, content);
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

    summary.output_dir = out_dir;
    return summary;
}

std::filesystem::path write_frozen_field(const std::filesystem::path& config_path,
                                         const RunOptions& options) {
    const LoadedScenario ls = load_with_hash(config_path);
    const std::filesystem::path out_dir = prepare_output_dir(ls.scenario, options);
    const FrozenFlowField field =
        march_channel(ls.scenario.channel, ls.scenario.properties, ls.scenario.wall_law,
                      ls.scenario.turbulent_prandtl, ls.scenario.species_names());
    const std::filesystem::path path = out_dir / "frozen_flow.txt";
    save_frozen(field, path);
    return path;
}

CalibrationResult calibrate_scenario(const std::filesystem::path& config_path,
                                     const RunOptions& options) {
    const LoadedScenario ls = load_with_hash(config_path);
    const Scenario& sc = ls.scenario;
    if (!sc.calibration)
        throw ConfigError("scenario has no calibration block");
    const std::filesystem::path out_dir = prepare_output_dir(sc, options);

    // the flow field and interface BCs do not depend on the diffusivity, so
    // one frozen field serves every bracket evaluation
    const FrozenFlowField field = obtain_field(sc, options);
    const WallCellSet cells =
        assemble_wall_cells(field, sc.depositing_flags(), sc.interface_polynomials,
                            sc.wall_temperature_offset, sc.properties);
    const std::size_t dep = sc.depositing_index();

    const auto rate_of = [&](double diffusivity) {
        const PropertyModel props = sc.properties.with_diffusivity(diffusivity);
        const std::vector<DepositionResult> results =
            solve_all_cells(cells.cells, props, sc.wall_law, sc.subgrid, options.jobs);
        return area_averaged_rate(results, cells.areas, dep);
    };

    const CalibrationSpec& cal = *sc.calibration;
    const CalibrationResult result = calibrate_diffusivity(
        cal.target_rate, cal.d_lo, cal.d_hi, cal.rel_tol, cal.max_iterations, rate_of);

    std::ostringstream trace;
    trace << "iteration,diffusivity_m2_s,rate_kg_m2_s,bracket_width_m2_s\n";
    for (const auto& tp : result.trace)
        trace << tp.iteration << ',' << format_double(tp.diffusivity) << ','
              << format_double(tp.rate) << ',' << format_double(tp.bracket_width) << '\n';
    write_text_file(out_dir / "calibration_trace.csv", trace.str());

    json out;
    out["diffusivity_m2_s"] = result.diffusivity;
    out["rate_kg_m2_s"] = result.rate;
    out["target_rate_kg_m2_s"] = cal.target_rate;
    out["iterations"] = result.iterations;
    write_text_file(out_dir / "calibration_result.json", out.dump(2) + "\n");
    return result;
}

// ---- compare ------------------------------------------------------------------

namespace {

struct PerCellColumns {
    std::vector<double> x;
    std::vector<double> j;
};

PerCellColumns read_per_cell_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open per-cell CSV: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw CorruptFileError(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split(line, ',');
    std::size_t x_col = header.size(), j_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "x_m") x_col = i;
        if (j_col == header.size() && header[i].substr(0, 6) == "j_dep_") j_col = i;
    }
    if (x_col == header.size() || j_col == header.size())
        throw CorruptFileError(path.string() + ": missing x_m or j_dep_* column");

    PerCellColumns cols;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != header.size())
            throw CorruptFileError(path.string() + ": ragged CSV row");
        cols.x.push_back(detail::parse_double(fields[x_col]));
        cols.j.push_back(detail::parse_double(fields[j_col]));
    }
    if (cols.x.empty())
        throw CorruptFileError(path.string() + ": no data rows");
    return cols;
}

} // namespace

ComparisonSummary compare_runs(const std::filesystem::path& per_cell_a,
                               const std::filesystem::path& per_cell_b,
                               const std::filesystem::path& out_dir) {
    const PerCellColumns a = read_per_cell_csv(per_cell_a);
    const PerCellColumns b = read_per_cell_csv(per_cell_b);
    if (a.x.size() != b.x.size())
        throw GridMismatchError("runs have different station counts: " +
                                std::to_string(a.x.size()) + " vs " +
                                std::to_string(b.x.size()));
    for (std::size_t i = 0; i < a.x.size(); ++i)
        if (a.x[i] != b.x[i])
            throw GridMismatchError("station " + std::to_string(i) +
                                    " positions differ between runs");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory: " + ec.message());

    ComparisonSummary summary;
    summary.n_stations = static_cast<int>(a.x.size());
    double sum_a = 0.0, sum_b = 0.0, sum_abs = 0.0;
    std::ostringstream csv;
    csv << "station,x_m,j_a_kg_m2_s,j_b_kg_m2_s,ratio_a_over_b,diff_a_minus_b\n";
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        const double diff = a.j[i] - b.j[i];
        const double ratio = a.j[i] / b.j[i];
        csv << i << ',' << format_double(a.x[i]) << ',' << format_double(a.j[i]) << ','
            << format_double(b.j[i]) << ',' << format_double(ratio) << ','
            << format_double(diff) << '\n';
        sum_a += a.j[i];
        sum_b += b.j[i];
        sum_abs += std::abs(diff);
        summary.max_abs_diff = std::max(summary.max_abs_diff, std::abs(diff));
    }
    summary.mean_abs_diff = sum_abs / static_cast<double>(a.x.size());
    summary.area_ratio = sum_a / sum_b;

    summary.csv_path = out_dir / "comparison.csv";
    summary.report_path = out_dir / "comparison_summary.txt";
    write_text_file(summary.csv_path, csv.str());

    std::ostringstream rep;
    rep << "comparison of " << per_cell_a.string() << " (a) vs " << per_cell_b.string()
        << " (b)\n"
        << "stations:            " << summary.n_stations << "\n"
        << "mean(j_a)/mean(j_b): " << format_double(summary.area_ratio) << "\n"
        << "max |j_a - j_b|:     " << format_double(summary.max_abs_diff) << "\n"
        << "mean |j_a - j_b|:    " << format_double(summary.mean_abs_diff) << "\n";
    write_text_file(summary.report_path, rep.str());
    return summary;
}

// ---- fit command ----------------------------------------------------------------

FitCommandResult fit_command(const std::vector<std::filesystem::path>& data_files,
                             const std::filesystem::path& out_dir) {
    if (data_files.empty())
        throw ConfigError("fit needs at least one data file");

    std::vector<double> velocities;
    std::vector<LogisticFit> fits;
    for (const auto& file : data_files) {
        const InterfaceProfileData data = read_interface_profile_csv(file);
        fits.push_back(fit_logistic(data.T_wall, data.x_interface));
        velocities.push_back(data.u_in);
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory: " + ec.message());

    FitCommandResult result;
    json fragment;
    json per_velocity = json::array();
    std::ostringstream report;
    report << "interface mass-fraction fit report\n";
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& f = fits[i];
        json entry;
        entry["u_in_m_s"] = velocities[i];
        entry["plateau"] = f.params.plateau;
        entry["threshold_K"] = f.params.threshold_temperature;
        entry["steepness"] = f.params.steepness;
        entry["rmse"] = f.diagnostics.rmse;
        per_velocity.push_back(entry);
        report << "\nfile " << data_files[i].string() << " (u_in = "
               << format_double(velocities[i]) << " m/s)\n"
               << "  plateau     = " << format_double(f.params.plateau) << "\n"
               << "  threshold_K = " << format_double(f.params.threshold_temperature)
               << "\n"
               << "  steepness   = " << format_double(f.params.steepness) << "\n"
               << "  rmse        = " << format_double(f.diagnostics.rmse) << "\n"
               << "  iterations  = " << f.diagnostics.iterations << "\n"
               << "  var(a,b,c)  = " << format_double(f.diagnostics.covariance[0]) << ", "
               << format_double(f.diagnostics.covariance[4]) << ", "
               << format_double(f.diagnostics.covariance[8]) << "\n";
        if (f.diagnostics.degenerate)
            report << "  warning: degenerate fit, parameters weakly constrained\n";
    }
    fragment["per_velocity_fits"] = per_velocity;

    std::set<double> distinct(velocities.begin(), velocities.end());
    if (distinct.size() >= 4) {
        std::vector<LogisticParams> params;
        for (const auto& f : fits) params.push_back(f.params);
        const VelocityPolynomialFit poly = fit_velocity_polynomials(velocities, params);
        json bc;
        bc["plateau_poly"] = poly.polynomials.plateau_coeffs;
        bc["threshold_poly_K"] = poly.polynomials.threshold_coeffs;
        bc["steepness_poly"] = poly.polynomials.steepness_coeffs;
        bc["velocity_validity_m_s"] = {poly.polynomials.u_min, poly.polynomials.u_max};
        bc["wall_temperature_offset_K"] = 6.5;
        fragment["interface_bc"] = bc;
        report << "\nvelocity polynomials fitted over [" << format_double(poly.polynomials.u_min)
               << ", " << format_double(poly.polynomials.u_max) << "] m/s\n"
               << "  rms residuals: plateau " << format_double(poly.plateau_residual)
               << ", threshold " << format_double(poly.threshold_residual)
               << ", steepness " << format_double(poly.steepness_residual) << "\n";
        result.polynomials_fitted = true;
    } else {
        report << "\nvelocity polynomial step skipped: needs at least 4 distinct "
                  "velocities, got "
               << distinct.size() << " (InsufficientData)\n";
    }

    result.fragment_path = out_dir / "interface_fit_fragment.json";
    result.report_path = out_dir / "interface_fit_report.txt";
    write_text_file(result.fragment_path, fragment.dump(2) + "\n");
    write_text_file(result.report_path, report.str());
    return result;
}

} // namespace foulwall
