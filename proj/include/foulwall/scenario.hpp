#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foulwall/calibration.hpp"
#include "foulwall/channel.hpp"
#include "foulwall/errors.hpp"
#include "foulwall/fluid_properties.hpp"
#include "foulwall/interface_bc.hpp"
#include "foulwall/subgrid.hpp"
#include "foulwall/two_step.hpp"
#include "foulwall/wall_laws.hpp"

namespace foulwall {

struct SpeciesSpec {
    std::string name;
    double molar_mass = 0.0; // [kg/mol]
    bool depositing = false;
};

enum class FoulingModel { wall_function, two_step, both };

struct CalibrationSpec {
    double target_rate = 0.0; // [kg/(m^2 s)]
    double d_lo = 0.0;        // diffusivity bracket [m^2/s]
    double d_hi = 0.0;
    double rel_tol = 1e-4;
    int max_iterations = 60;
};

struct TwoStepConfig {
    TwoStepParams params;
    bool use_full = false; // reduced (surface-integration controlled) by default
};

/// Fully validated scenario; the JSON loader rejects unknown keys.
struct Scenario {
    std::string name;
    std::vector<SpeciesSpec> species;
    PropertyModel properties;
    WallLawParams wall_law;
    double turbulent_prandtl = 0.85;
    ChannelConfig channel;
    VelocityPolynomials interface_polynomials;
    double wall_temperature_offset = 6.5;
    SubgridSettings subgrid;
    FoulingModel model = FoulingModel::wall_function;
    TwoStepConfig two_step;
    std::optional<CalibrationSpec> calibration;
    std::filesystem::path output_dir = "out";

    std::size_t depositing_index() const;
    std::vector<std::string> species_names() const;
    std::vector<bool> depositing_flags() const;
};

Scenario load_scenario(const std::filesystem::path& config_path);

struct RunOptions {
    std::optional<std::filesystem::path> frozen_flow_path;
    std::optional<std::filesystem::path> output_dir; // overrides the scenario
    bool dump_profiles = false;
    int jobs = 1; // wall-cell solve concurrency; 0 = hardware concurrency
};

struct RunSummary {
    std::filesystem::path output_dir;
    std::map<std::string, double> area_averaged; // model name -> rate
    int n_cells = 0;
    double elapsed_seconds = 0.0;
};

/// Full pipeline: channel (or frozen-field reuse) -> interface BCs -> wall-cell
/// solves -> CSV artifacts + manifest. All file writes happen after compute.
RunSummary run_scenario(const std::filesystem::path& config_path,
                        const RunOptions& options = {});

/// Marches the channel and persists the frozen flow field only.
std::filesystem::path write_frozen_field(const std::filesystem::path& config_path,
                                         const RunOptions& options = {});

/// Calibrates the Fickian diffusivity against the scenario's calibration
/// block; reuses one frozen flow field across all evaluations.
CalibrationResult calibrate_scenario(const std::filesystem::path& config_path,
                                     const RunOptions& options = {});

struct ComparisonSummary {
    std::filesystem::path csv_path;
    std::filesystem::path report_path;
    double area_ratio = 0.0;    // mean(j_a)/mean(j_b) over shared stations
    double max_abs_diff = 0.0;
    double mean_abs_diff = 0.0;
    int n_stations = 0;
};

/// Joins two per-cell CSVs on their x grid and reports per-station ratios and
/// differences. Throws GridMismatchError when the grids differ.
ComparisonSummary compare_runs(const std::filesystem::path& per_cell_a,
                               const std::filesystem::path& per_cell_b,
                               const std::filesystem::path& out_dir);

struct FitCommandResult {
    std::filesystem::path fragment_path;
    std::filesystem::path report_path;
    bool polynomials_fitted = false;
};

/// Fits the logistic interface model per ingested profile file, then the
/// velocity polynomials across files (skipped with a report note when fewer
/// than 4 velocities are available). Emits a config fragment.
FitCommandResult fit_command(const std::vector<std::filesystem::path>& data_files,
                             const std::filesystem::path& out_dir);

} // namespace foulwall
