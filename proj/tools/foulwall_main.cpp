#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "foulwall/detail/text_io.hpp"
#include "foulwall/scenario.hpp"
#include "foulwall/version.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

struct CommonOpts {
    std::string config;
    std::string frozen;
    std::string out;
    bool profiles = false;
    int jobs = 0; // 0 = all hardware threads
};

foulwall::RunOptions to_run_options(const CommonOpts& o) {
    foulwall::RunOptions opts;
    if (!o.frozen.empty()) opts.frozen_flow_path = o.frozen;
    if (!o.out.empty()) opts.output_dir = o.out;
    opts.dump_profiles = o.profiles;
    opts.jobs = o.jobs;
    return opts;
}

void write_diagnostic(const CommonOpts& opts, const foulwall::Error& e) {
    std::filesystem::path dir = opts.out.empty() ? "." : std::filesystem::path(opts.out);
    if (opts.out.empty() && !opts.config.empty()) {
        try {
            dir = foulwall::load_scenario(opts.config).output_dir;
        } catch (const std::exception&) {
            // fall back to the working directory
        }
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream f(dir / "diagnostics.txt");
    if (!f) return;
    f << "numerical failure: " << e.what() << "\n";
    if (const auto* nc = dynamic_cast<const foulwall::NotConvergedError*>(&e)) {
        f << "residual history:\n";
        for (double r : nc->residual_history)
            f << "  " << foulwall::detail::format_double(r) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crystallization-fouling wall-function engine"};
    app.set_version_flag("--version", std::string(foulwall::version));
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<std::string> fit_files;
    std::string compare_a, compare_b;

    auto add_common = [&](CLI::App* cmd, bool with_frozen) {
        cmd->add_option("config", opts.config, "scenario config file")->required();
        if (with_frozen)
            cmd->add_option("--frozen-flow", opts.frozen,
                            "reuse a saved flow-field snapshot");
        cmd->add_option("--out", opts.out, "output directory (overrides the scenario)");
        cmd->add_option("--jobs", opts.jobs,
                        "concurrent wall-cell solves (0 = all hardware threads)");
    };

    CLI::App* run = app.add_subcommand("run", "run a fouling scenario");
    add_common(run, true);
    run->add_flag("--profiles", opts.profiles, "dump per-cell subgrid profiles");

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "tune the diffusivity to a target rate");
    add_common(calibrate, true);

    CLI::App* frozen =
        app.add_subcommand("frozen", "compute and save the flow field only");
    add_common(frozen, false);

    CLI::App* fit = app.add_subcommand("fit", "fit interface mass-fraction data");
    fit->add_option("files", fit_files, "interface profile CSV files")->required();
    fit->add_option("--out", opts.out, "output directory");

    CLI::App* compare = app.add_subcommand("compare", "compare two per-cell CSVs");
    compare->add_option("csv_a", compare_a, "first per-cell CSV")->required();
    compare->add_option("csv_b", compare_b, "second per-cell CSV")->required();
    compare->add_option("--out", opts.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config; // bad arguments are config errors
    }

    try {
        if (run->parsed()) {
            const foulwall::RunSummary s =
                foulwall::run_scenario(opts.config, to_run_options(opts));
            for (const auto& [model, rate] : s.area_averaged)
                std::cout << model << " area-averaged rate: "
                          << foulwall::detail::format_double(rate) << " kg/(m^2 s)\n";
            std::cout << "artifacts in " << s.output_dir.string() << "\n";
        } else if (calibrate->parsed()) {
            const foulwall::CalibrationResult r =
                foulwall::calibrate_scenario(opts.config, to_run_options(opts));
            std::cout << "calibrated diffusivity: "
                      << foulwall::detail::format_double(r.diffusivity)
                      << " m^2/s (rate " << foulwall::detail::format_double(r.rate)
                      << " kg/(m^2 s), " << r.iterations << " iterations)\n";
        } else if (frozen->parsed()) {
            const std::filesystem::path p =
                foulwall::write_frozen_field(opts.config, to_run_options(opts));
            std::cout << "frozen flow field written to " << p.string() << "\n";
        } else if (fit->parsed()) {
            std::vector<std::filesystem::path> files(fit_files.begin(), fit_files.end());
            const foulwall::FitCommandResult r =
                foulwall::fit_command(files, opts.out.empty() ? "." : opts.out);
            std::cout << "fragment: " << r.fragment_path.string() << "\n"
                      << "report:   " << r.report_path.string() << "\n";
            if (!r.polynomials_fitted)
                std::cout << "velocity polynomials skipped (InsufficientData)\n";
        } else if (compare->parsed()) {
            const foulwall::ComparisonSummary s = foulwall::compare_runs(
                compare_a, compare_b, opts.out.empty() ? "." : opts.out);
            std::cout << "stations: " << s.n_stations
                      << ", mean ratio a/b: " << foulwall::detail::format_double(s.area_ratio)
                      << ", max |diff|: " << foulwall::detail::format_double(s.max_abs_diff)
                      << "\n";
        }
    } catch (const foulwall::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const foulwall::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const foulwall::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        write_diagnostic(opts, e);
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
