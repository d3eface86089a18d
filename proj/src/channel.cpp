#include "foulwall/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "foulwall/detail/text_io.hpp"
#include "foulwall/version.hpp"

namespace foulwall {

void validate(const ChannelConfig& cfg) {
    if (!(cfg.gap > 0.0) || !(cfg.heated_length > 0.0))
        throw ConfigError("channel gap and heated length must be positive");
    if (cfg.n_axial < 1 || cfg.n_cross < 1)
        throw ConfigError("channel cell counts must be at least 1");
    if (!(cfg.inlet_velocity > 0.0))
        throw ConfigError("inlet velocity must be positive");
    if (!(cfg.inlet_temperature > 0.0))
        throw ConfigError("inlet temperature must be positive");
    if (cfg.wall_heat_flux < 0.0)
        throw ConfigError("wall heat flux must be nonnegative");
    if (cfg.heated_walls != 1 && cfg.heated_walls != 2)
        throw ConfigError("heated_walls must be 1 or 2");
    if (cfg.inlet_mass_fractions.empty())
        throw ConfigError("inlet mass fractions are required");
}

namespace {

// dT+/dy+ integrand of the thermal wall law
double thermal_resistance(double y_plus_end, double prandtl, double turbulent_prandtl,
                          const WallLawParams& law) {
    // composite Simpson per wall-law branch; the integrand kinks at y*+
    const auto integrand = [&](double s) {
        return prandtl / (1.0 + (prandtl / turbulent_prandtl) * nu_t_plus(s, law));
    };
    const auto simpson = [&](double a, double b) {
        const int panels = 200; // even
        const double h = (b - a) / panels;
        double acc = integrand(a) + integrand(b);
        for (int i = 1; i < panels; ++i)
            acc += integrand(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    if (y_plus_end <= law.y_star_plus) return simpson(0.0, y_plus_end);
    return simpson(0.0, law.y_star_plus) + simpson(law.y_star_plus, y_plus_end);
}

} // namespace

FrozenFlowField march_channel(const ChannelConfig& cfg, const PropertyModel& props,
                              const WallLawParams& law, double turbulent_prandtl,
                              const std::vector<std::string>& species_names) {
    validate(cfg);
    validate(law);
    if (!(turbulent_prandtl > 0.0))
        throw ConfigError("turbulent Prandtl number must be positive");
    if (species_names.size() != cfg.inlet_mass_fractions.size())
        throw ConfigError("species names and inlet mass fractions must match");

    FrozenFlowField field;
    field.heated_length = cfg.heated_length;
    field.gap = cfg.gap;
    field.n_axial = cfg.n_axial;
    field.n_cross = cfg.n_cross;
    field.heated_walls = cfg.heated_walls;
    field.wall_heat_flux = cfg.wall_heat_flux;
    field.inlet_velocity = cfg.inlet_velocity;
    field.inlet_temperature = cfg.inlet_temperature;
    field.species = species_names;
    field.inlet_mass_fractions = cfg.inlet_mass_fractions;
    field.stations.reserve(static_cast<std::size_t>(cfg.n_axial));

    const double y_bulk = cfg.gap / (2.0 * cfg.n_cross);
    const double dx = cfg.heated_length / cfg.n_axial;
    const double rho_in = props.rho(cfg.inlet_temperature);
    const double c_p = props.heat_capacity();
    // mass flow per unit depth is conserved along the channel
    const double mass_flux = rho_in * cfg.inlet_velocity * cfg.gap;

    const double profile_factor =
        cfg.cell_velocity_profile == CellVelocityProfile::parabolic
            ? 6.0 * (y_bulk / cfg.gap) * (1.0 - y_bulk / cfg.gap)
            : 1.0;

    for (int i = 0; i < cfg.n_axial; ++i) {
        ChannelStation st;
        st.x = (i + 0.5) * dx;
        st.y_bulk = y_bulk;
        st.T_bulk = cfg.inlet_temperature +
                    cfg.wall_heat_flux * cfg.heated_walls * st.x / (mass_flux * c_p);
        const FluidProperties bulk = props.at(st.T_bulk);
        st.rho_bulk = bulk.rho;
        st.mu_bulk = bulk.mu;
        st.u_bulk = profile_factor * cfg.inlet_velocity;
        st.u_tau = invert_friction_velocity(st.u_bulk, y_bulk, bulk.nu, law);
        const double y_plus_bulk = st.u_tau * y_bulk / bulk.nu;

        // film-temperature Prandtl fixed point for the wall temperature
        double T_wall = st.T_bulk;
        for (int pass = 0; pass < 64; ++pass) {
            const double T_film = 0.5 * (st.T_bulk + T_wall);
            const double prandtl =
                props.mu(T_film) * c_p / props.thermal_conductivity();
            const double theta =
                thermal_resistance(y_plus_bulk, prandtl, turbulent_prandtl, law);
            const double next =
                st.T_bulk + cfg.wall_heat_flux * theta / (st.rho_bulk * c_p * st.u_tau);
            const double delta = std::abs(next - T_wall);
            T_wall = next;
            if (delta < 1e-10) break;
        }
        st.T_wall = T_wall;
        const FluidProperties wall = props.at(st.T_wall);
        st.rho_wall = wall.rho;
        st.mu_wall = wall.mu;
        field.stations.push_back(st);
    }
    return field;
}

namespace {

constexpr const char* frozen_magic = "foulwall-frozen";

std::string frozen_payload(const FrozenFlowField& f) {
    using detail::format_double;
    std::ostringstream out;
    out << "heated_length " << format_double(f.heated_length) << "\n";
    out << "gap " << format_double(f.gap) << "\n";
    out << "n_axial " << f.n_axial << "\n";
    out << "n_cross " << f.n_cross << "\n";
    out << "heated_walls " << f.heated_walls << "\n";
    out << "wall_heat_flux " << format_double(f.wall_heat_flux) << "\n";
    out << "inlet_velocity " << format_double(f.inlet_velocity) << "\n";
    out << "inlet_temperature " << format_double(f.inlet_temperature) << "\n";
    out << "species";
    for (const auto& s : f.species) out << " " << s;
    out << "\n";
    out << "inlet_mass_fractions";
    for (double x : f.inlet_mass_fractions) out << " " << format_double(x);
    out << "\n";
    out << "columns x u_bulk T_bulk T_wall u_tau y_bulk rho_bulk mu_bulk rho_wall "
           "mu_wall\n";
    for (const auto& st : f.stations) {
        out << format_double(st.x) << " " << format_double(st.u_bulk) << " "
            << format_double(st.T_bulk) << " " << format_double(st.T_wall) << " "
            << format_double(st.u_tau) << " " << format_double(st.y_bulk) << " "
            << format_double(st.rho_bulk) << " " << format_double(st.mu_bulk) << " "
            << format_double(st.rho_wall) << " " << format_double(st.mu_wall) << "\n";
    }
    return out.str();
}

std::vector<std::string_view> expect_fields(std::string_view line, std::string_view key,
                                            const std::filesystem::path& path) {
    auto fields = detail::split(line, ' ');
    if (fields.empty() || fields[0] != key)
        throw CorruptFileError(path.string() + ": expected '" + std::string(key) +
                               "' record");
    fields.erase(fields.begin());
    return fields;
}

} // namespace

void save_frozen(const FrozenFlowField& field, const std::filesystem::path& path) {
    if (field.stations.empty())
        throw ConfigError("refusing to save an empty flow field");
    const std::string payload = frozen_payload(field);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write frozen flow field: " + path.string());
    out << frozen_magic << " v" << frozen_format_version << "\n";
    out << "checksum " << detail::fnv1a64_hex(payload) << "\n";
    out << payload;
    if (!out)
        throw IoError("write failed: " + path.string());
}

FrozenFlowField load_frozen(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read frozen flow field: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();

    const auto first_nl = content.find('\n');
    if (first_nl == std::string::npos)
        throw CorruptFileError(path.string() + ": truncated header");
    const std::string_view header(content.data(), first_nl);
    const std::string expected =
        std::string(frozen_magic) + " v" + std::to_string(frozen_format_version);
    if (header != expected) {
        if (header.substr(0, std::string_view(frozen_magic).size()) == frozen_magic)
            throw VersionMismatchError(path.string() + ": unsupported version '" +
                                       std::string(header) + "'");
        throw CorruptFileError(path.string() + ": not a frozen flow-field file");
    }

    const auto second_nl = content.find('\n', first_nl + 1);
    if (second_nl == std::string::npos)
        throw CorruptFileError(path.string() + ": truncated checksum line");
    const std::string_view checksum_line(content.data() + first_nl + 1,
                                         second_nl - first_nl - 1);
    const auto checksum_fields = detail::split(checksum_line, ' ');
    if (checksum_fields.size() != 2 || checksum_fields[0] != "checksum")
        throw CorruptFileError(path.string() + ": malformed checksum line");
    const std::string_view payload(content.data() + second_nl + 1,
                                   content.size() - second_nl - 1);
    if (detail::fnv1a64_hex(payload) != checksum_fields[1])
        throw CorruptFileError(path.string() + ": checksum mismatch");

    std::istringstream rest{std::string(payload)};
    std::string line;
    const auto next_line = [&]() -> std::string& {
        if (!std::getline(rest, line))
            throw CorruptFileError(path.string() + ": unexpected end of file");
        return line;
    };

    FrozenFlowField f;
    f.heated_length = detail::parse_double(expect_fields(next_line(), "heated_length", path).at(0));
    f.gap = detail::parse_double(expect_fields(next_line(), "gap", path).at(0));
    f.n_axial = static_cast<int>(detail::parse_double(expect_fields(next_line(), "n_axial", path).at(0)));
    f.n_cross = static_cast<int>(detail::parse_double(expect_fields(next_line(), "n_cross", path).at(0)));
    f.heated_walls = static_cast<int>(detail::parse_double(expect_fields(next_line(), "heated_walls", path).at(0)));
    f.wall_heat_flux = detail::parse_double(expect_fields(next_line(), "wall_heat_flux", path).at(0));
    f.inlet_velocity = detail::parse_double(expect_fields(next_line(), "inlet_velocity", path).at(0));
    f.inlet_temperature = detail::parse_double(expect_fields(next_line(), "inlet_temperature", path).at(0));
    for (auto name : expect_fields(next_line(), "species", path))
        f.species.emplace_back(name);
    for (auto x : expect_fields(next_line(), "inlet_mass_fractions", path))
        f.inlet_mass_fractions.push_back(detail::parse_double(x));
    next_line(); // columns record, fixed layout
    for (int i = 0; i < f.n_axial; ++i) {
        const auto fields = detail::split(next_line(), ' ');
        if (fields.size() != 10)
            throw CorruptFileError(path.string() + ": malformed station row");
        ChannelStation st;
        st.x = detail::parse_double(fields[0]);
        st.u_bulk = detail::parse_double(fields[1]);
        st.T_bulk = detail::parse_double(fields[2]);
        st.T_wall = detail::parse_double(fields[3]);
        st.u_tau = detail::parse_double(fields[4]);
        st.y_bulk = detail::parse_double(fields[5]);
        st.rho_bulk = detail::parse_double(fields[6]);
        st.mu_bulk = detail::parse_double(fields[7]);
        st.rho_wall = detail::parse_double(fields[8]);
        st.mu_wall = detail::parse_double(fields[9]);
        f.stations.push_back(st);
    }
    if (f.species.size() != f.inlet_mass_fractions.size())
        throw CorruptFileError(path.string() + ": species/mass-fraction mismatch");
    for (std::size_t i = 1; i < f.stations.size(); ++i)
        if (!(f.stations[i].x > f.stations[i - 1].x))
            throw CorruptFileError(path.string() + ": station positions not increasing");
    return f;
}

WallCellSet assemble_wall_cells(const FrozenFlowField& field,
                                const std::vector<bool>& depositing,
                                const VelocityPolynomials& interface_polys,
                                double wall_temperature_offset,
                                const PropertyModel& props) {
    if (field.stations.empty())
        throw EmptyInputError("flow field has no stations");
    if (depositing.size() != field.species.size())
        throw ConfigError("depositing flags must match the species list");

    WallCellSet set;
    const double dx = field.heated_length / field.n_axial;
    set.cells.reserve(field.stations.size());
    for (const auto& st : field.stations) {
        WallCellBC bc;
        bc.T_wall = st.T_wall;
        bc.T_bulk = st.T_bulk;
        bc.u_bulk = st.u_bulk;
        bc.q_wall = field.wall_heat_flux;
        bc.u_tau = st.u_tau;
        bc.y_bulk = st.y_bulk;
        bc.X_bulk = field.inlet_mass_fractions;
        bc.wall_bc.resize(field.species.size());
        for (std::size_t s = 0; s < field.species.size(); ++s) {
            if (depositing[s]) {
                bc.wall_bc[s].kind = WallBcKind::dirichlet;
                bc.wall_bc[s].value = interface_mass_fraction(
                    st.T_wall, field.inlet_velocity, interface_polys,
                    props.x_sat(st.T_wall), wall_temperature_offset);
            } else {
                bc.wall_bc[s].kind = WallBcKind::zero_gradient;
            }
        }
        set.cells.push_back(std::move(bc));
        set.areas.push_back(dx * field.heated_walls);
        set.x.push_back(st.x);
    }
    return set;
}

} // namespace foulwall
