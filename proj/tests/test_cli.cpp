#include "wptlab/cli.hpp"

#include "wptlab/experiment.hpp"
#include "wptlab/network.hpp"
#include "wptlab/touchstone.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace wptlab;
using Json = nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / name;
}

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args)
{
    const Command cmd = parse_args(args);
    std::ostringstream out;
    std::ostringstream err;
    RunResult result;
    result.exit_code = execute(cmd, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::string first_line(const std::string& text)
{
    return text.substr(0, text.find('\n'));
}

} // namespace

TEST_CASE("analyze arguments populate the channel spec")
{
    const Command cmd =
        parse_args({"analyze", "board.s12p", "--rx", "1,2", "--tx", "7,8"});
    CHECK(cmd.kind == Subcommand::analyze);
    CHECK(cmd.channel.touchstone_path == "board.s12p");
    CHECK(cmd.channel.rx_ports == std::vector<int>{1, 2});
    CHECK(cmd.channel.tx_ports == std::vector<int>{7, 8});
    CHECK(cmd.channel.sigmas.empty());
}

TEST_CASE("sweep arguments expand the gain grid and apply sweep defaults")
{
    const Command cmd = parse_args({"sweep", "--sigmas", "0.6,0.8", "--gains", "8:0:0.25"});
    CHECK(cmd.kind == Subcommand::sweep);
    REQUIRE(cmd.gains_db.size() == 33);
    CHECK(cmd.gains_db.front() == doctest::Approx(8.0));
    CHECK(cmd.gains_db.back() == doctest::Approx(0.0));
    CHECK(cmd.gains_db[1] == doctest::Approx(7.75));
    CHECK(cmd.steps == 3000);
    CHECK(cmd.discard == 1000);
    CHECK(cmd.noise_power == doctest::Approx(1e-6));
    CHECK(cmd.saturation == doctest::Approx(1.0));
}

TEST_CASE("unknown subcommands and missing subcommands are usage errors")
{
    CHECK_THROWS_AS(static_cast<void>(parse_args({"frobnicate"})), UsageError);
    CHECK_THROWS_AS(static_cast<void>(parse_args({})), UsageError);
}

TEST_CASE("help requests return the help text instead of running")
{
    const Command top = parse_args({"--help"});
    CHECK(top.kind == Subcommand::help);
    CHECK(top.help_text.find("analyze") != std::string::npos);
    CHECK(top.help_text.find("sweep") != std::string::npos);

    const Command sub = parse_args({"simulate", "--help"});
    CHECK(sub.kind == Subcommand::help);
    CHECK(sub.help_text.find("--gain-db") != std::string::npos);

    std::ostringstream out;
    std::ostringstream err;
    CHECK(execute(top, out, err) == 0);
    CHECK(out.str() == top.help_text);
}

TEST_CASE("every subcommand demands exactly one channel source")
{
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_args({"analyze"})),
                         doctest::Contains("exactly one channel source"), UsageError);
    CHECK_THROWS_AS(static_cast<void>(parse_args(
                        {"analyze", "x.s4p", "--rx", "1", "--tx", "3", "--sigmas", "0.5"})),
                    UsageError);
    // A file channel needs an explicit port split.
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_args({"modes", "x.s4p"})),
                         doctest::Contains("--rx and --tx"), UsageError);
    // A synthesized channel fixes its own split.
    CHECK_THROWS_AS(
        static_cast<void>(parse_args({"modes", "--sigmas", "0.5", "--rx", "1", "--tx", "2"})),
        UsageError);
}

TEST_CASE("simulate needs exactly one gain specification")
{
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_args({"simulate", "--sigmas", "0.6"})),
                         doctest::Contains("--gain-db or --marginal"), UsageError);
    CHECK_THROWS_AS(static_cast<void>(parse_args({"simulate", "--sigmas", "0.6", "--gain-db",
                                                  "3", "--marginal"})),
                    UsageError);
}

TEST_CASE("malformed gain grids are rejected with usage errors")
{
    for (const char* grid : {"0:8:0.25", "8:0:0", "8:0", "a:b:c", "8:0:0.25:1", ""}) {
        CHECK_THROWS_AS(
            static_cast<void>(parse_args({"sweep", "--sigmas", "0.6", "--gains", grid})),
            UsageError);
    }
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_args({"sweep", "--sigmas", "0.6", "--steps",
                                                       "100", "--discard", "100"})),
                         doctest::Contains("--steps"), UsageError);
}

TEST_CASE("synth needs exactly one generator recipe and a consistent file name")
{
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_args({"synth"})),
                         doctest::Contains("--ports or --sigmas"), UsageError);
    CHECK_THROWS_AS(
        static_cast<void>(parse_args({"synth", "--ports", "4", "--sigmas", "0.5"})),
        UsageError);
    // Two singular values embed into a 4-port network, not a 3-port one.
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_args({"synth", "--sigmas", "0.6,0.8", "-o",
                                                       "out.s3p"})),
                         doctest::Contains("declares 3 ports"), UsageError);
    CHECK_NOTHROW(
        static_cast<void>(parse_args({"synth", "--sigmas", "0.6,0.8", "-o", "out.s4p"})));
}

TEST_CASE("regress needs exactly one table source")
{
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_args({"regress"})),
                         doctest::Contains("--table2 or --fixture"), UsageError);
    CHECK_THROWS_AS(
        static_cast<void>(parse_args({"regress", "--table2", "--fixture", "x.csv"})),
        UsageError);
}

TEST_CASE("analyze reports the mode spectrum of a synthesized channel as JSON")
{
    const RunResult result = run({"analyze", "--sigmas", "0.6,0.8"});
    CHECK(result.exit_code == 0);
    const Json report = Json::parse(result.out);
    CHECK(report.at("ports") == 4);
    CHECK(report.at("rx_active") == Json::array({1, 2}));
    CHECK(report.at("tx_active") == Json::array({3, 4}));
    CHECK(report.at("reciprocal") == true);
    CHECK(report.at("lossless") == true);
    CHECK(report.at("xi_max").get<double>() == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(report.at("eta_max_pct").get<double>() == doctest::Approx(64.0).epsilon(1e-12));
    CHECK(report.at("marginal_gain_db").get<double>() ==
          doctest::Approx(3.876400520322255).epsilon(1e-9));
    REQUIRE(report.at("xi_list").size() == 2);
    CHECK(report.at("a_max").size() == 2);
    CHECK(report.at("loss_db") == 0.0);
}

TEST_CASE("modes tabulates eigenvalues with per-port vectors")
{
    const RunResult result = run({"modes", "--sigmas", "0.6,0.8"});
    CHECK(result.exit_code == 0);
    CHECK(first_line(result.out) ==
          "mode,xi,tx_1_re,tx_1_im,tx_2_re,tx_2_im,rx_1_re,rx_1_im,rx_2_re,rx_2_im");
    CHECK(result.out.find("\n1,0.64,") != std::string::npos);
    CHECK(result.out.find("\n2,0.36,") != std::string::npos);
}

TEST_CASE("simulate from the best beam at the marginal gain holds the optimum")
{
    const RunResult result = run({"simulate", "--sigmas", "0.6,0.8", "--channel-seed", "3",
                                  "--marginal", "--init", "best", "--steps", "5"});
    CHECK(result.exit_code == 0);
    REQUIRE(first_line(result.out) == "k,v1f_norm,v2f_norm,efficiency,mode_purity");

    // Every sample row reports the dominant transfer ratio and unit purity.
    std::istringstream lines(result.out);
    std::string line;
    std::getline(lines, line);  // header
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string field;
        for (int i = 0; i < 4; ++i)
            std::getline(fields, field, ',');
        CHECK(std::abs(std::stod(field) - 0.64) <= 1e-9);
    }
    CHECK(rows == 6);
}

TEST_CASE("sweep emits a CSV grid plus a JSON summary on the side channel")
{
    const RunResult result = run({"sweep", "--sigmas", "0.6,0.8", "--gains", "5:3:1",
                                  "--steps", "60", "--discard", "20"});
    CHECK(result.exit_code == 0);
    CHECK(first_line(result.out) == "gain_db,eff_mean,eff_std,label");
    CHECK(result.out.find("unstable") != std::string::npos);

    const Json summary = Json::parse(result.err);
    CHECK(summary.at("points") == 3);
    CHECK(summary.at("marginal_gain_db").get<double>() ==
          doctest::Approx(3.876400520322255).epsilon(1e-9));
    // The margin (3.88 dB) falls between the 4 and 3 dB grid points, so the
    // efficiency drop pins the transition to the 4 dB endpoint.
    CHECK(summary.at("transition_gain_db").get<double>() == 4.0);
    CHECK(summary.at("transition_gain_quantized_db").get<double>() == 4.0);
    CHECK(summary.at("transition_gain_corrected_db").get<double>() ==
          doctest::Approx(corrected_gain(4.0)).epsilon(1e-12));
}

TEST_CASE("sweep with -o moves the CSV to the file and the summary to stdout")
{
    const std::filesystem::path path = temp_path("wptlab_sweep_grid.csv");
    const RunResult result = run({"sweep", "--sigmas", "0.6,0.8", "--gains", "5:3:1",
                                  "--steps", "60", "--discard", "20", "-o", path.string()});
    CHECK(result.exit_code == 0);
    CHECK(result.err.empty());
    const Json summary = Json::parse(result.out);
    CHECK(summary.at("points") == 3);
    CHECK(first_line(slurp(path)) == "gain_db,eff_mean,eff_std,label");
    std::filesystem::remove(path);
}

TEST_CASE("sweeps with the same seed are byte-identical")
{
    const std::vector<std::string> args{"sweep", "--sigmas",  "0.6,0.8", "--gains", "5:3:1",
                                        "--steps", "60", "--discard", "20", "--seed", "11"};
    const RunResult a = run(args);
    const RunResult b = run(args);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
}

TEST_CASE("a sweep across the margin reports the transition and its dial equivalents")
{
    const RunResult result = run({"sweep", "--sigmas", "0.6,0.8", "--gains", "5:2:0.25",
                                  "--steps", "400", "--discard", "200"});
    CHECK(result.exit_code == 0);
    const Json summary = Json::parse(result.err);
    REQUIRE_FALSE(summary.at("transition_gain_db").is_null());
    const double transition = summary.at("transition_gain_db").get<double>();
    CHECK(std::abs(transition - 3.876400520322255) <= 0.25);
    CHECK(summary.at("transition_gain_quantized_db").get<double>() ==
          std::floor(transition));
    CHECK(summary.at("transition_gain_corrected_db").get<double>() ==
          doctest::Approx(corrected_gain(std::floor(transition))).epsilon(1e-12));
}

TEST_CASE("synth writes a Touchstone file that parses back losslessly")
{
    const std::filesystem::path path = temp_path("wptlab_synth_test.s3p");
    const RunResult result =
        run({"synth", "--ports", "3", "--seed", "9", "-o", path.string()});
    CHECK(result.exit_code == 0);

    const std::string text = slurp(path);
    CHECK(text.find("seed=9") != std::string::npos);
    const TouchstoneDocument doc = parse_touchstone(text, 3);
    REQUIRE(doc.points.size() == 1);
    const ScatteringMatrix network = to_scattering_matrix(doc, 2.4e9, 1e6);
    CHECK(is_reciprocal(network, 1e-10));
    CHECK(is_lossless(network, 1e-10));
    std::filesystem::remove(path);
}

TEST_CASE("file channels honor the declared port split and single-point fallback")
{
    const std::filesystem::path path = temp_path("wptlab_channel_test.s6p");
    REQUIRE(run({"synth", "--ports", "6", "--seed", "3", "--freq-ghz", "5.8", "-o",
                 path.string()})
                .exit_code == 0);

    // No --freq-ghz: the file's only point is taken regardless of frequency.
    const RunResult analyzed =
        run({"analyze", path.string(), "--rx", "1,2", "--tx", "5,6"});
    CHECK(analyzed.exit_code == 0);
    const Json report = Json::parse(analyzed.out);
    CHECK(report.at("ports") == 6);
    CHECK(report.at("frequency_hz").get<double>() == doctest::Approx(5.8e9));
    CHECK(report.at("reciprocal") == true);

    // An explicit frequency must actually match a stored point.
    const Command off_grid = parse_args({"analyze", path.string(), "--rx", "1,2", "--tx",
                                         "5,6", "--freq-ghz", "2.4", "--freq-tol-mhz", "1"});
    std::ostringstream out;
    std::ostringstream err;
    CHECK_THROWS_AS(static_cast<void>(execute(off_grid, out, err)), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("regress against the bundled table reproduces the published fits")
{
    const RunResult result = run({"regress", "--table2"});
    CHECK(result.exit_code == 0);
    const Json report = Json::parse(result.out);
    CHECK(std::abs(report.at("free_fit").at("slope").get<double>() - (-0.9266)) <= 0.01);
    CHECK(std::abs(report.at("free_fit").at("intercept_db").get<double>() - 6.46) <= 0.15);
    CHECK(std::abs(report.at("free_fit").at("r_squared").get<double>() - 0.8236) <= 0.01);
    CHECK(report.at("free_fit").at("n_points") == 30);
    CHECK(std::abs(report.at("fixed_slope_fit").at("intercept_db").get<double>() - 7.32) <=
          0.05);
    CHECK(std::abs(report.at("fixed_slope_fit").at("r_squared").get<double>() - 0.8176) <=
          0.01);
}

TEST_CASE("regress can also write per-case plot data")
{
    const std::filesystem::path path = temp_path("wptlab_regress_plot.csv");
    const RunResult result = run({"regress", "--table2", "-o", path.string()});
    CHECK(result.exit_code == 0);
    const std::string text = slurp(path);
    CHECK(first_line(text) == "g_db,y_db,y_fit_free,y_fit_fixed");
    CHECK(std::count(text.begin(), text.end(), '\n') == 31);
    std::filesystem::remove(path);
}

TEST_CASE("the bench-table echo recomputes every row consistently")
{
    const RunResult result = run({"table2"});
    CHECK(result.exit_code == 0);
    CHECK(first_line(result.out) ==
          "case,rx_ports,tx_ports,eta_theo_pct,eta_meas_pct,error_pct,gain_setting_db,"
          "gain_corr_db,est_loss_db,error_recomputed_pct,gain_corr_recomputed_db,"
          "est_loss_recomputed_db,consistent");
    CHECK(result.out.find("# mismatches=0 of 30") != std::string::npos);
    CHECK(result.out.find(",no\n") == std::string::npos);
}

TEST_CASE("the process entry point maps usage errors to exit code 2")
{
    const char* bad[] = {"wptlab", "frobnicate"};
    CHECK(run_cli(2, bad) == 2);
    const char* missing[] = {"wptlab", "analyze", "/nonexistent/channel.s4p", "--rx", "1",
                             "--tx", "3"};
    CHECK(run_cli(7, missing) == 1);
}
