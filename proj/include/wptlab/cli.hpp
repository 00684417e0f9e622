#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace wptlab {

/// Rejected command line (unknown flag, missing option, malformed value).
/// run_cli prints the message to stderr and exits with status 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& message) : std::runtime_error(message) {}
};

enum class Subcommand { help, analyze, modes, simulate, sweep, synth, regress, table2 };

/// Where the channel under study comes from: a Touchstone file with an
/// explicit active-port selection, or a synthetic lossless embedding with
/// prescribed transmission singular values (ports 1..m receive, m+1..2m
/// transmit). Exactly one source may be set.
struct ChannelSpec {
    std::string touchstone_path;
    std::vector<double> sigmas;
    std::uint64_t channel_seed = 0;  // side-scrambling seed; 0 keeps the diagonal form

    // Touchstone channels only: active ports, with every unlisted port
    // terminated on the side it belongs to.
    std::vector<int> rx_ports;
    std::vector<int> tx_ports;

    double frequency_ghz = 2.4;
    bool frequency_given = false;  // when false, a single-point file wins
    double tolerance_mhz = 1.0;
};

/// One parsed invocation. Fields beyond `kind` are meaningful only for the
/// subcommands that set them; parse_args fills every default.
struct Command {
    Subcommand kind = Subcommand::help;
    std::string help_text;  // kind == help

    ChannelSpec channel;      // analyze, modes, simulate, sweep
    std::string output_path;  // empty = stdout

    double loss_db = 0.0;  // analyze, simulate, sweep

    // simulate / sweep
    double gain_db = 0.0;  // simulate, valid when use_marginal_gain is false
    bool use_marginal_gain = false;
    double noise_power = 0.0;
    double saturation = 0.0;  // 0 disables clipping
    std::size_t steps = 200;
    std::size_t discard = 1000;  // sweep: transient samples dropped per grid point
    std::uint64_t seed = 1;
    std::string init = "random";      // or "best": start in the dominant beam
    std::string tx_phase = "same";    // or "conj"
    std::vector<double> gains_db;     // sweep grid, high to low

    // synth
    std::size_t synth_ports = 0;  // 0 = use channel.sigmas instead
    std::uint64_t synth_seed = 0;
    double synth_frequency_ghz = 2.4;

    // regress / table2
    bool use_bundled_table = false;
    std::string fixture_path;  // alternative fixture CSV (checksum-verified)
};

/// Parses an argument list (program name excluded) into a validated
/// Command. `--help` anywhere yields a help Command carrying the usage
/// text. Throws UsageError on anything malformed.
Command parse_args(const std::vector<std::string>& args);

/// Runs a parsed Command, writing primary output to `out` (or the file
/// named by output_path) and secondary summaries to `err`. Returns the
/// process exit status; failures surface as exceptions.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

/// main() adapter: parse argv, execute, map UsageError to status 2 and any
/// other failure to status 1 with an "error: ..." line on stderr.
int run_cli(int argc, const char* const* argv);

} // namespace wptlab
