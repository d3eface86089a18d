#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

#include "foulwall/detail/text_io.hpp"
#include "foulwall/scenario.hpp"
#include "testutil.hpp"

using namespace foulwall;

namespace {

std::filesystem::path write_scenario(const std::filesystem::path& dir,
                                     const testutil::ScenarioJsonOpts& opts,
                                     const std::string& filename = "scenario.json") {
    const auto path = dir / filename;
    testutil::write_file(path, testutil::scenario_json(opts));
    return path;
}

std::vector<std::string> csv_lines(const std::filesystem::path& path) {
    std::vector<std::string> lines;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("scenario loader: defaults, strictness and diagnostics") {
    const auto dir = testutil::scratch_dir("scenario_load");
    SUBCASE("valid scenario parses with defaults applied") {
        const Scenario sc = load_scenario(write_scenario(dir, {}));
        CHECK(sc.species.size() == 2);
        CHECK(sc.depositing_index() == 0);
        CHECK(sc.subgrid.n_nodes == 300);
        CHECK(sc.wall_temperature_offset == 6.5);
        CHECK(sc.model == FoulingModel::both);
        CHECK(sc.channel.inlet_velocity == doctest::Approx(0.2));
    }
    SUBCASE("unknown keys are rejected with their path") {
        std::string text = testutil::scenario_json({});
        text.replace(text.find("\"gap_m\""), 7, "\"gap_mm\"");
        testutil::write_file(dir / "bad_key.json", text);
        try {
            load_scenario(dir / "bad_key.json");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("gap_mm") != std::string::npos);
            CHECK(std::string(e.what()).find("channel") != std::string::npos);
        }
    }
    SUBCASE("malformed JSON reports line and column") {
        testutil::write_file(dir / "broken.json", "{\n  \"species\": [,]\n}\n");
        try {
            load_scenario(dir / "broken.json");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("line") != std::string::npos);
            CHECK(std::string(e.what()).find("column") != std::string::npos);
        }
    }
    SUBCASE("missing referenced data files fail at parse time") {
        std::string text = testutil::scenario_json({});
        const std::string needle = "\"plateau_poly\": [4.3e-4, -6.0e-5, 1.0e-5, 0.0],\n"
                                   "    \"threshold_poly_K\": [334.0, 16.0, -8.0],\n"
                                   "    \"steepness_poly\": [55.0, 20.0, -10.0],";
        text.replace(text.find(needle), needle.size(),
                     "\"fit_data_files\": [\"does_not_exist.csv\"],");
        testutil::write_file(dir / "missing_data.json", text);
        CHECK_THROWS_AS(load_scenario(dir / "missing_data.json"), ConfigError);
    }
    SUBCASE("two depositing species are rejected") {
        std::string text = testutil::scenario_json({});
        const std::string needle = "\"depositing\": false";
        text.replace(text.find(needle), needle.size(), "\"depositing\": true");
        testutil::write_file(dir / "two_dep.json", text);
        CHECK_THROWS_AS(load_scenario(dir / "two_dep.json"), ConfigError);
    }
}

TEST_CASE("adiabatic equal-composition run deposits nothing") {
    const auto dir = testutil::scratch_dir("scenario_adiabatic");
    testutil::ScenarioJsonOpts opts;
    opts.q_w = 0.0;
    opts.model = "wall_function";
    // plateau pinned at the bulk fraction, threshold far above any wall
    // temperature: the interface BC equals the bulk composition exactly
    opts.plateau_poly = "[4.197e-4, 0.0, 0.0, 0.0]";
    opts.threshold_poly = "[450.0, 0.0, 0.0]";
    opts.steepness_poly = "[300.0, 0.0, 0.0]";
    opts.n_axial = 8;
    opts.output_dir = (dir / "out").string();
    const RunSummary s = run_scenario(write_scenario(dir, opts));
    CHECK(std::abs(s.area_averaged.at("wall_function")) < 1e-12);
    const auto lines = csv_lines(s.output_dir / "per_cell_wall_function.csv");
    CHECK(lines.size() == 9); // header + 8 cells
}

TEST_CASE("both models share the x grid and compare cleanly") {
    const auto dir = testutil::scratch_dir("scenario_both");
    testutil::ScenarioJsonOpts opts;
    opts.n_axial = 10;
    opts.n_nodes = 150;
    opts.output_dir = (dir / "out").string();
    const RunSummary s = run_scenario(write_scenario(dir, opts));
    CHECK(s.area_averaged.count("wall_function") == 1);
    CHECK(s.area_averaged.count("two_step") == 1);
    CHECK(s.area_averaged.at("wall_function") > 0.0);

    const auto wf = s.output_dir / "per_cell_wall_function.csv";
    const auto ts = s.output_dir / "per_cell_two_step.csv";
    const ComparisonSummary cross = compare_runs(wf, ts, dir / "cmp_cross");
    CHECK(cross.n_stations == 10);

    const ComparisonSummary self = compare_runs(wf, wf, dir / "cmp_self");
    CHECK(self.area_ratio == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(self.max_abs_diff == 0.0);
    const auto lines = csv_lines(self.csv_path);
    REQUIRE(lines.size() == 11);
    CHECK(lines[1].find(",1,") != std::string::npos); // ratio column exactly 1

    // a run on a different axial grid cannot be compared
    testutil::ScenarioJsonOpts other = opts;
    other.n_axial = 7;
    other.output_dir = (dir / "out7").string();
    const RunSummary s7 = run_scenario(write_scenario(dir, other, "seven.json"));
    CHECK_THROWS_AS(
        compare_runs(wf, s7.output_dir / "per_cell_wall_function.csv", dir / "cmp_bad"),
        GridMismatchError);
}

TEST_CASE("concurrent runs are bit-identical") {
    const auto dir = testutil::scratch_dir("scenario_repro");
    testutil::ScenarioJsonOpts opts;
    opts.n_axial = 12;
    opts.n_nodes = 150;
    const auto config = write_scenario(dir, opts);

    RunOptions a;
    a.output_dir = dir / "run_a";
    a.jobs = 4;
    RunOptions b;
    b.output_dir = dir / "run_b";
    b.jobs = 1;
    run_scenario(config, a);
    run_scenario(config, b);
    for (const char* name :
         {"per_cell_wall_function.csv", "per_cell_two_step.csv", "summary.csv"}) {
        const std::string file_a = testutil::read_file(dir / "run_a" / name);
        const std::string file_b = testutil::read_file(dir / "run_b" / name);
        CHECK(!file_a.empty());
        CHECK(file_a == file_b);
    }
}

TEST_CASE("frozen-field reuse reproduces the direct run exactly") {
    const auto dir = testutil::scratch_dir("scenario_frozen");
    testutil::ScenarioJsonOpts opts;
    opts.n_axial = 9;
    opts.n_nodes = 120;
    const auto config = write_scenario(dir, opts);

    RunOptions direct;
    direct.output_dir = dir / "direct";
    run_scenario(config, direct);

    RunOptions freeze;
    freeze.output_dir = dir / "frozen";
    const std::filesystem::path snapshot = write_frozen_field(config, freeze);
    RunOptions reuse;
    reuse.output_dir = dir / "reuse";
    reuse.frozen_flow_path = snapshot;
    run_scenario(config, reuse);

    CHECK(testutil::read_file(dir / "direct" / "per_cell_wall_function.csv") ==
          testutil::read_file(dir / "reuse" / "per_cell_wall_function.csv"));

    // a snapshot taken for different species cannot be reused
    std::string mismatched = testutil::scenario_json(opts);
    const std::string needle = "\"name\": \"CaCO3\"";
    mismatched.replace(mismatched.find(needle), needle.size(), "\"name\": \"CaSO4\"");
    testutil::write_file(dir / "other_species.json", mismatched);
    RunOptions bad;
    bad.output_dir = dir / "bad";
    bad.frozen_flow_path = snapshot;
    CHECK_THROWS_AS(run_scenario(dir / "other_species.json", bad), ConfigError);
}

TEST_CASE("profile dumps are written when requested") {
    const auto dir = testutil::scratch_dir("scenario_profiles");
    testutil::ScenarioJsonOpts opts;
    opts.n_axial = 3;
    opts.n_nodes = 80;
    opts.model = "wall_function";
    const auto config = write_scenario(dir, opts);
    RunOptions run;
    run.output_dir = dir / "out";
    run.dump_profiles = true;
    run_scenario(config, run);
    const auto lines = csv_lines(dir / "out" / "profiles" / "cell_0000.csv");
    REQUIRE(lines.size() == 81);
    CHECK(lines[0] == "y_m,y_plus,u_plus,T_K,X_CaCO3,X_H2O");
}

TEST_CASE("manifest records the config hash and artifacts") {
    const auto dir = testutil::scratch_dir("scenario_manifest");
    testutil::ScenarioJsonOpts opts;
    opts.n_axial = 3;
    opts.n_nodes = 80;
    opts.model = "two_step";
    const auto config = write_scenario(dir, opts);
    RunOptions run;
    run.output_dir = dir / "out";
    run_scenario(config, run);
    const std::string manifest = testutil::read_file(dir / "out" / "manifest.json");
    CHECK(manifest.find("config_fnv1a64") != std::string::npos);
    CHECK(manifest.find("per_cell_two_step.csv") != std::string::npos);
    CHECK(manifest.find("engine_version") != std::string::npos);
}

TEST_CASE("calibration round trip through the scenario pipeline") {
    const auto dir = testutil::scratch_dir("scenario_calibrate");
    testutil::ScenarioJsonOpts base;
    base.model = "wall_function";
    base.n_axial = 6;
    base.n_nodes = 120;
    base.diffusivity = 3.64e-5;
    base.output_dir = (dir / "out0").string();
    const RunSummary planted = run_scenario(write_scenario(dir, base, "base.json"));
    const double target = planted.area_averaged.at("wall_function");
    REQUIRE(target > 0.0);

    testutil::ScenarioJsonOpts cal = base;
    cal.output_dir = (dir / "out_cal").string();
    cal.calibration = "{\"target_rate_kg_m2_s\": " +
                      foulwall::detail::format_double(target) +
                      ", \"diffusivity_bracket_m2_s\": [3.64e-6, 3.64e-4], "
                      "\"rel_tol\": 1e-5, \"max_iterations\": 60}";
    const CalibrationResult r =
        calibrate_scenario(write_scenario(dir, cal, "cal.json"), {});
    CHECK(std::abs(r.diffusivity - 3.64e-5) / 3.64e-5 < 1e-3);
    CHECK(r.iterations <= 60);
    const auto trace = csv_lines(dir / "out_cal" / "calibration_trace.csv");
    CHECK(trace.size() >= 3);
    CHECK(trace[0] == "iteration,diffusivity_m2_s,rate_kg_m2_s,bracket_width_m2_s");

    // doubling the diffusivity must increase the deposition rate
    testutil::ScenarioJsonOpts doubled = base;
    doubled.diffusivity = 2.0 * 3.64e-5;
    doubled.output_dir = (dir / "out2").string();
    const RunSummary more = run_scenario(write_scenario(dir, doubled, "double.json"));
    CHECK(more.area_averaged.at("wall_function") > target);

    // a calibration block is required for the calibrate entry point
    CHECK_THROWS_AS(calibrate_scenario(write_scenario(dir, base, "nocal.json"), {}),
                    ConfigError);
}

TEST_CASE("fit command: generate-then-fit round trip through files") {
    const auto dir = testutil::scratch_dir("scenario_fit");
    const auto horner3 = [](double c0, double c1, double c2, double u) {
        return c0 + u * (c1 + u * c2);
    };
    // planted velocity dependence, sampled as synthetic fine-mesh profiles
    const double a0 = 4.2e-4, a1 = -5e-5, a2 = 8e-6, a3 = 0.0;
    std::vector<std::filesystem::path> files;
    for (double u : {0.2, 0.27, 0.33, 0.4}) {
        const double plateau = a0 + u * (a1 + u * (a2 + u * a3));
        const LogisticParams p{plateau, horner3(334.0, 16.0, -8.0, u),
                               horner3(55.0, 20.0, -10.0, u)};
        std::string csv = "# u_in_m_s = " + foulwall::detail::format_double(u) +
                          "\nx_m,T_w_K,X_I\n";
        int row = 0;
        for (double T = 300.0; T <= 380.0; T += 2.0, ++row)
            csv += foulwall::detail::format_double(0.0025 * row) + "," +
                   foulwall::detail::format_double(T) + "," +
                   foulwall::detail::format_double(logistic_interface_fraction(T, p)) +
                   "\n";
        const auto path = dir / ("u" + std::to_string(files.size()) + ".csv");
        testutil::write_file(path, csv);
        files.push_back(path);
    }
    const FitCommandResult r = fit_command(files, dir / "fit_out");
    CHECK(r.polynomials_fitted);

    // the emitted fragment reproduces the planted polynomials
    const nlohmann::json fragment =
        nlohmann::json::parse(testutil::read_file(r.fragment_path));
    REQUIRE(fragment.contains("interface_bc"));
    const auto threshold =
        fragment["interface_bc"]["threshold_poly_K"].get<std::vector<double>>();
    const std::vector<double> planted_threshold = {334.0, 16.0, -8.0};
    REQUIRE(threshold.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(threshold[i] - planted_threshold[i]) <
              1e-3 * std::abs(planted_threshold[i]));
    const auto plateau =
        fragment["interface_bc"]["plateau_poly"].get<std::vector<double>>();
    CHECK(std::abs(plateau[0] - a0) < 1e-3 * a0);

    SUBCASE("single velocity: logistic emitted, polynomial step skipped") {
        const FitCommandResult single = fit_command({files[0]}, dir / "fit_single");
        CHECK(!single.polynomials_fitted);
        const std::string rep = testutil::read_file(single.report_path);
        CHECK(rep.find("InsufficientData") != std::string::npos);
        const std::string frag = testutil::read_file(single.fragment_path);
        CHECK(frag.find("per_velocity_fits") != std::string::npos);
    }
    SUBCASE("empty file is an ingestion error") {
        testutil::write_file(dir / "empty.csv", "");
        CHECK_THROWS_AS(fit_command({dir / "empty.csv"}, dir / "fit_bad"), ConfigError);
    }
}

#ifdef FOULWALL_CLI_PATH
TEST_CASE("command-line interface exit codes") {
    const auto dir = testutil::scratch_dir("cli");
    const std::string cli = FOULWALL_CLI_PATH;
    const auto exit_code = [](int status) {
#ifdef _WIN32
        return status;
#else
        return WEXITSTATUS(status);
#endif
    };

    SUBCASE("malformed config exits 2") {
        testutil::write_file(dir / "broken.json", "{ not json ]");
        const std::string cmd = cli + " run " + (dir / "broken.json").string() +
                                " --out " + (dir / "out").string() + " 2>" +
                                (dir / "err.txt").string();
        CHECK(exit_code(std::system(cmd.c_str())) == 2);
        const std::string err = testutil::read_file(dir / "err.txt");
        CHECK(err.find("line") != std::string::npos);
        CHECK(err.find("column") != std::string::npos);
    }
    SUBCASE("missing config exits 2") {
        const std::string cmd = cli + " run " + (dir / "nope.json").string() +
                                " 2>/dev/null";
        CHECK(exit_code(std::system(cmd.c_str())) == 2);
    }
    SUBCASE("successful tiny run exits 0") {
        testutil::ScenarioJsonOpts opts;
        opts.n_axial = 3;
        opts.n_nodes = 80;
        opts.model = "wall_function";
        const auto config = dir / "ok.json";
        testutil::write_file(config, testutil::scenario_json(opts));
        const std::string cmd = cli + " run " + config.string() + " --out " +
                                (dir / "out_ok").string() + " >/dev/null";
        CHECK(exit_code(std::system(cmd.c_str())) == 0);
        CHECK(std::filesystem::exists(dir / "out_ok" / "per_cell_wall_function.csv"));
    }
    SUBCASE("unwritable output directory exits 4") {
        testutil::write_file(dir / "blocker", "plain file\n");
        testutil::ScenarioJsonOpts opts;
        opts.n_axial = 3;
        opts.n_nodes = 80;
        opts.model = "wall_function";
        const auto config = dir / "io.json";
        testutil::write_file(config, testutil::scenario_json(opts));
        const std::string cmd = cli + " run " + config.string() + " --out " +
                                (dir / "blocker" / "out").string() + " 2>/dev/null";
        CHECK(exit_code(std::system(cmd.c_str())) == 4);
    }
    SUBCASE("numerical failure exits 3 with a diagnostic file") {
        testutil::ScenarioJsonOpts opts;
        opts.n_axial = 3;
        opts.n_nodes = 80;
        opts.model = "wall_function";
        opts.calibration = "{\"target_rate_kg_m2_s\": 1e6, "
                           "\"diffusivity_bracket_m2_s\": [1e-6, 2e-6]}";
        const auto config = dir / "cal_bad.json";
        testutil::write_file(config, testutil::scenario_json(opts));
        const std::string cmd = cli + " calibrate " + config.string() + " --out " +
                                (dir / "out_cal").string() + " 2>/dev/null";
        CHECK(exit_code(std::system(cmd.c_str())) == 3);
        CHECK(std::filesystem::exists(dir / "out_cal" / "diagnostics.txt"));
    }
}
#endif
