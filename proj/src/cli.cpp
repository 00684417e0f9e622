#include "wptlab/cli.hpp"

#include "wptlab/channel_synth.hpp"
#include "wptlab/eigenbeam.hpp"
#include "wptlab/experiment.hpp"
#include "wptlab/loop_dynamics.hpp"
#include "wptlab/network.hpp"
#include "wptlab/rng.hpp"
#include "wptlab/touchstone.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wptlab {

namespace {

using Json = nlohmann::ordered_json;

std::string format_field(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double db_to_magnitude(double db) { return std::pow(10.0, db / 20.0); }

double magnitude_to_db(double magnitude) { return 20.0 * std::log10(magnitude); }

/// "start:stop:step" in dB, start >= stop, step > 0; expands to the grid
/// start, start-step, ..., down to stop (inclusive when it lands on it).
std::vector<double> parse_gain_grid(const std::string& text)
{
    double parts[3];
    std::size_t n_parts = 0;
    std::size_t begin = 0;
    while (true) {
        const std::size_t colon = text.find(':', begin);
        const std::string piece = text.substr(begin, colon - begin);
        std::size_t used = 0;
        try {
            parts[n_parts >= 3 ? 0 : n_parts] = std::stod(piece, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != piece.size() || piece.empty())
            throw UsageError("bad gain grid '" + text + "': expected start:stop:step in dB");
        ++n_parts;
        if (colon == std::string::npos)
            break;
        begin = colon + 1;
    }
    if (n_parts != 3)
        throw UsageError("bad gain grid '" + text + "': expected start:stop:step in dB");

    const double high = parts[0];
    const double low = parts[1];
    const double step = parts[2];
    if (!std::isfinite(high) || !std::isfinite(low) || !std::isfinite(step))
        throw UsageError("gain grid endpoints and step must be finite");
    if (!(step > 0.0))
        throw UsageError("gain grid step must be positive");
    if (high < low)
        throw UsageError("gain grids run high to low: start must not be below stop");

    const std::size_t count = static_cast<std::size_t>(std::floor((high - low) / step + 1e-9)) + 1;
    std::vector<double> gains(count);
    for (std::size_t i = 0; i < count; ++i)
        gains[i] = high - static_cast<double>(i) * step;
    return gains;
}

/// Port count encoded in a Touchstone file name (".s<N>p", case-insensitive).
std::size_t port_count_from_extension(const std::string& path, bool* found = nullptr)
{
    if (found != nullptr)
        *found = false;
    const std::size_t dot = path.rfind('.');
    if (dot == std::string::npos || path.size() - dot < 4)
        return 0;
    const char s = path[dot + 1];
    const char p = path.back();
    if ((s != 's' && s != 'S') || (p != 'p' && p != 'P'))
        return 0;
    std::size_t ports = 0;
    for (std::size_t i = dot + 2; i + 1 < path.size(); ++i) {
        if (path[i] < '0' || path[i] > '9')
            return 0;
        ports = ports * 10 + static_cast<std::size_t>(path[i] - '0');
    }
    if (ports == 0)
        return 0;
    if (found != nullptr)
        *found = true;
    return ports;
}

std::size_t require_port_count(const std::string& path)
{
    bool found = false;
    const std::size_t ports = port_count_from_extension(path, &found);
    if (!found)
        throw std::runtime_error("cannot infer the port count of '" + path +
                                 "': expected a .s<N>p extension");
    return ports;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Primary output destination: the -o file when given, a fallback stream
/// otherwise. finish() surfaces deferred write failures.
class OutputTarget {
  public:
    OutputTarget(const std::string& path, std::ostream& fallback) : path_(path)
    {
        if (path_.empty()) {
            stream_ = &fallback;
            return;
        }
        file_.open(path_, std::ios::binary);
        if (!file_)
            throw std::runtime_error("cannot open '" + path_ + "' for writing");
        stream_ = &file_;
    }

    std::ostream& stream() { return *stream_; }

    void finish()
    {
        stream_->flush();
        if (!*stream_)
            throw std::runtime_error("failed while writing '" +
                                     (path_.empty() ? std::string("<stdout>") : path_) + "'");
    }

  private:
    std::string path_;
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

struct ResolvedChannel {
    ScatteringMatrix network;
    PortPartition partition;
    CMatrix s21;
};

/// Every port not named active goes absorbing on its own side: below the
/// lowest generator port counts as receiver side, the rest as generator
/// side (matched-load terminations never break the port cover).
PortPartition partition_for(std::size_t port_count, std::vector<int> rx_active,
                            std::vector<int> tx_active)
{
    PortPartition part;
    part.rx_active = std::move(rx_active);
    part.tx_active = std::move(tx_active);
    if (part.tx_active.empty())
        throw std::invalid_argument("at least one generator port is required");
    const int tx_side_start = *std::min_element(part.tx_active.begin(), part.tx_active.end());

    const auto is_active = [&part](int port) {
        return std::find(part.rx_active.begin(), part.rx_active.end(), port) !=
                   part.rx_active.end() ||
               std::find(part.tx_active.begin(), part.tx_active.end(), port) !=
                   part.tx_active.end();
    };
    for (int port = 1; port <= static_cast<int>(port_count); ++port) {
        if (is_active(port))
            continue;
        (port < tx_side_start ? part.rx_absorbing : part.tx_absorbing).push_back(port);
    }
    part.validate(port_count);
    return part;
}

ResolvedChannel resolve_channel(const ChannelSpec& spec)
{
    ResolvedChannel ch;
    if (!spec.sigmas.empty()) {
        auto made =
            embed_singular_values(spec.sigmas, spec.channel_seed, spec.frequency_ghz * 1e9);
        ch.network = std::move(made.first);
        ch.partition = std::move(made.second);
    } else {
        const std::size_t ports = require_port_count(spec.touchstone_path);
        const TouchstoneDocument doc = parse_touchstone(read_file(spec.touchstone_path), ports);
        double frequency_hz = spec.frequency_ghz * 1e9;
        if (!spec.frequency_given && doc.points.size() == 1)
            frequency_hz = doc.points.front().frequency * frequency_unit_scale(doc.unit);
        ch.network = to_scattering_matrix(doc, frequency_hz, spec.tolerance_mhz * 1e6);
        ch.partition = partition_for(ch.network.ports(), spec.rx_ports, spec.tx_ports);
    }
    ch.s21 = transmission_block(ch.network, ch.partition);
    return ch;
}

Json complex_pairs(const CVector& v)
{
    Json arr = Json::array();
    for (const Complex& z : v)
        arr.push_back(Json::array({z.real(), z.imag()}));
    return arr;
}

CVector random_unit_vector(RandomSource& rng, std::size_t n)
{
    CVector v = rng.complex_gaussian_vector(n);
    const double len = norm(v);
    for (Complex& z : v)
        z /= len;
    return v;
}

std::string join_ports(const std::vector<int>& ports)
{
    std::string text;
    for (std::size_t i = 0; i < ports.size(); ++i) {
        if (i > 0)
            text += ';';
        text += std::to_string(ports[i]);
    }
    return text;
}

int run_analyze(const Command& cmd, std::ostream& out)
{
    const ResolvedChannel ch = resolve_channel(cmd.channel);
    const BeamModeSet modes = beam_modes(ch.s21);
    const double xi_max = modes.eigenvalues.front();

    Json report;
    report["ports"] = ch.network.ports();
    report["frequency_hz"] = ch.network.frequency_hz;
    report["rx_active"] = ch.partition.rx_active;
    report["tx_active"] = ch.partition.tx_active;
    report["reciprocal"] = is_reciprocal(ch.network, 1e-10);
    report["lossless"] = is_lossless(ch.network, 1e-10);
    report["xi_list"] = modes.eigenvalues;
    report["xi_max"] = xi_max;
    report["eta_max_pct"] = std::round(xi_max * 1e4) / 100.0;
    report["a_max"] = complex_pairs(modes.tx_modes.front());
    report["loss_db"] = cmd.loss_db;
    if (xi_max > 0.0)
        report["marginal_gain_db"] =
            magnitude_to_db(marginal_gain(ch.s21, db_to_magnitude(-cmd.loss_db)));
    else
        report["marginal_gain_db"] = nullptr;

    OutputTarget target(cmd.output_path, out);
    target.stream() << report.dump(2) << '\n';
    target.finish();
    return 0;
}

int run_modes(const Command& cmd, std::ostream& out)
{
    const ResolvedChannel ch = resolve_channel(cmd.channel);
    const BeamModeSet modes = beam_modes(ch.s21);
    const std::size_t n_tx = ch.s21.cols();
    const std::size_t m_rx = ch.s21.rows();

    OutputTarget target(cmd.output_path, out);
    std::ostream& os = target.stream();
    os << "mode,xi";
    for (std::size_t j = 1; j <= n_tx; ++j)
        os << ",tx_" << j << "_re,tx_" << j << "_im";
    for (std::size_t j = 1; j <= m_rx; ++j)
        os << ",rx_" << j << "_re,rx_" << j << "_im";
    os << '\n';

    const auto write_side = [&os](const std::vector<CVector>& side, std::size_t mode,
                                  std::size_t width) {
        if (mode < side.size()) {
            for (const Complex& z : side[mode])
                os << ',' << format_field(z.real()) << ',' << format_field(z.imag());
        } else {
            for (std::size_t j = 0; j < 2 * width; ++j)
                os << ',';
        }
    };
    for (std::size_t i = 0; i < modes.eigenvalues.size(); ++i) {
        os << (i + 1) << ',' << format_field(modes.eigenvalues[i]);
        write_side(modes.tx_modes, i, n_tx);
        write_side(modes.rx_modes, i, m_rx);
        os << '\n';
    }
    target.finish();
    return 0;
}

int run_simulate(const Command& cmd, std::ostream& out)
{
    const ResolvedChannel ch = resolve_channel(cmd.channel);

    LoopConfig config;
    config.s21 = ch.s21;
    config.loss = Complex{db_to_magnitude(-cmd.loss_db), 0.0};
    config.gain = Complex{cmd.use_marginal_gain ? marginal_gain(ch.s21, std::abs(config.loss))
                                                : db_to_magnitude(cmd.gain_db),
                          0.0};
    config.noise_power = cmd.noise_power;
    if (cmd.saturation > 0.0)
        config.saturation = Saturation{cmd.saturation};
    config.tx_phase =
        cmd.tx_phase == "conj" ? TxPhaseConvention::conjugated : TxPhaseConvention::same_as_rx;

    RandomSource rng(cmd.seed);
    LoopState init;
    if (cmd.init == "best") {
        const MaxEfficiency best = max_efficiency(ch.s21);
        init.tx_wave = best.a_max;
        init.rx_wave = ch.s21.apply(best.a_max);
    } else {
        init.rx_wave = random_unit_vector(rng, ch.s21.rows());
        init.tx_wave = random_unit_vector(rng, ch.s21.cols());
    }

    const SimulationResult sim = simulate(config, init, cmd.steps, rng.raw());

    OutputTarget target(cmd.output_path, out);
    write_series_csv(target.stream(), sim);
    target.finish();
    return 0;
}

int run_sweep(const Command& cmd, std::ostream& out, std::ostream& err)
{
    const ResolvedChannel ch = resolve_channel(cmd.channel);
    const double loss_magnitude = db_to_magnitude(-cmd.loss_db);
    std::optional<Saturation> saturation;
    if (cmd.saturation > 0.0)
        saturation = Saturation{cmd.saturation};

    const SweepResult sweep =
        gain_sweep(ch.s21, Complex{loss_magnitude, 0.0}, cmd.gains_db, cmd.noise_power,
                   saturation, cmd.seed, cmd.steps, cmd.discard);

    Json summary;
    if (sweep.transition_gain_db) {
        const double transition = *sweep.transition_gain_db;
        const double quantized = quantized_gain_setting(transition);
        summary["transition_gain_db"] = transition;
        summary["transition_gain_quantized_db"] = quantized;
        summary["transition_gain_corrected_db"] = corrected_gain(quantized);
    } else {
        summary["transition_gain_db"] = nullptr;
        summary["transition_gain_quantized_db"] = nullptr;
        summary["transition_gain_corrected_db"] = nullptr;
    }
    const double xi_max = beam_modes(ch.s21).eigenvalues.front();
    if (xi_max > 0.0)
        summary["marginal_gain_db"] = magnitude_to_db(marginal_gain(ch.s21, loss_magnitude));
    else
        summary["marginal_gain_db"] = nullptr;
    summary["points"] = sweep.points.size();

    if (!cmd.output_path.empty()) {
        OutputTarget target(cmd.output_path, out);
        write_sweep_csv(target.stream(), sweep);
        target.finish();
        out << summary.dump(2) << '\n';
    } else {
        write_sweep_csv(out, sweep);
        err << summary.dump(2) << '\n';
    }
    return 0;
}

int run_synth(const Command& cmd, std::ostream& out)
{
    ScatteringMatrix network;
    std::string comment;
    if (cmd.synth_ports > 0) {
        network = random_lossless_reciprocal(cmd.synth_ports, cmd.synth_seed,
                                             cmd.synth_frequency_ghz * 1e9);
        comment = " random lossless reciprocal channel: ports=" +
                  std::to_string(cmd.synth_ports) + " seed=" + std::to_string(cmd.synth_seed);
    } else {
        network = embed_singular_values(cmd.channel.sigmas, cmd.synth_seed,
                                        cmd.synth_frequency_ghz * 1e9)
                      .first;
        comment = " singular-value embedding: sigmas=";
        for (std::size_t i = 0; i < cmd.channel.sigmas.size(); ++i) {
            if (i > 0)
                comment += ',';
            comment += format_field(cmd.channel.sigmas[i]);
        }
        comment += " seed=" + std::to_string(cmd.synth_seed);
    }

    TouchstoneDocument doc;
    doc.unit = FrequencyUnit::ghz;
    doc.format = ValueFormat::real_imag;
    doc.reference_ohms = network.reference_impedance;
    doc.port_count = network.ports();
    doc.comments = {comment};
    doc.points.push_back(TouchstonePoint{network.frequency_hz / 1e9, network.s});

    OutputTarget target(cmd.output_path, out);
    target.stream() << write_touchstone(doc);
    target.finish();
    return 0;
}

Json fit_json(const RegressionResult& fit)
{
    Json node;
    node["slope"] = fit.slope;
    node["intercept_db"] = fit.intercept_db;
    node["r_squared"] = fit.r_squared;
    node["n_points"] = fit.n_points;
    node["zero_variance"] = fit.zero_variance;
    return node;
}

int run_regress(const Command& cmd, std::ostream& out)
{
    const std::vector<ExperimentCase> cases =
        cmd.fixture_path.empty() ? load_table2() : load_table2(cmd.fixture_path);
    const std::vector<RegressionPoint> points = regression_points(cases);
    const RegressionResult free_fit = fit_regression(points);
    const RegressionResult fixed_fit = fixed_slope_fit(points);

    if (!cmd.output_path.empty()) {
        OutputTarget target(cmd.output_path, out);
        std::ostream& os = target.stream();
        os << "g_db,y_db,y_fit_free,y_fit_fixed\n";
        for (const RegressionPoint& p : points) {
            os << format_field(p.gain_db) << ',' << format_field(p.y_db) << ','
               << format_field(free_fit.slope * p.gain_db + free_fit.intercept_db) << ','
               << format_field(fixed_fit.slope * p.gain_db + fixed_fit.intercept_db) << '\n';
        }
        target.finish();
    }

    Json report;
    report["free_fit"] = fit_json(free_fit);
    report["fixed_slope_fit"] = fit_json(fixed_fit);
    out << report.dump(2) << '\n';
    return 0;
}

int run_table2(const Command& cmd, std::ostream& out)
{
    const std::vector<ExperimentCase> cases =
        cmd.fixture_path.empty() ? load_table2() : load_table2(cmd.fixture_path);

    OutputTarget target(cmd.output_path, out);
    std::ostream& os = target.stream();
    os << "case,rx_ports,tx_ports,eta_theo_pct,eta_meas_pct,error_pct,gain_setting_db,"
          "gain_corr_db,est_loss_db,error_recomputed_pct,gain_corr_recomputed_db,"
          "est_loss_recomputed_db,consistent\n";

    std::size_t mismatches = 0;
    for (const ExperimentCase& c : cases) {
        const double error_recomputed = percent_error(c.eta_theoretical, c.eta_measured);
        const double corr_recomputed = corrected_gain(c.gain_setting_db);
        const double loss_recomputed = estimate_case_loss(c.eta_measured, corr_recomputed);
        const bool consistent = std::abs(error_recomputed - c.error_pct) <= 0.02 &&
                                std::abs(corr_recomputed - c.gain_corrected_db) <= 0.01 &&
                                std::abs(loss_recomputed - c.est_loss_db) <= 0.02;
        if (!consistent)
            ++mismatches;
        os << c.case_id << ',' << join_ports(c.rx_ports) << ',' << join_ports(c.tx_ports) << ','
           << format_field(100.0 * c.eta_theoretical) << ','
           << format_field(100.0 * c.eta_measured) << ',' << format_field(c.error_pct) << ','
           << format_field(c.gain_setting_db) << ',' << format_field(c.gain_corrected_db) << ','
           << format_field(c.est_loss_db) << ',' << format_field(error_recomputed) << ','
           << format_field(corr_recomputed) << ',' << format_field(loss_recomputed) << ','
           << (consistent ? "yes" : "no") << '\n';
    }
    os << "# mismatches=" << mismatches << " of " << cases.size()
       << " (tolerances: error 0.02, corrected gain 0.01 dB, loss 0.02 dB)\n";
    target.finish();
    return mismatches == 0 ? 0 : 1;
}

/// Channel flags shared by every subcommand that reads a channel.
struct ChannelOptions {
    CLI::Option* file = nullptr;
    CLI::Option* sigmas = nullptr;
};

ChannelOptions add_channel_options(CLI::App* sub, Command& cmd)
{
    ChannelOptions opts;
    opts.file = sub->add_option("file", cmd.channel.touchstone_path,
                                "Touchstone .sNp file naming the channel");
    opts.sigmas = sub->add_option("--sigmas", cmd.channel.sigmas,
                                  "Synthesize a lossless channel with these transmission "
                                  "singular values (in [0,1])")
                      ->delimiter(',')
                      ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--channel-seed", cmd.channel.channel_seed,
                    "Side-scrambling seed for --sigmas channels (0 keeps the diagonal form)")
        ->capture_default_str();
    sub->add_option("--rx", cmd.channel.rx_ports, "Powered receiver ports, e.g. 1,2")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    sub->add_option("--tx", cmd.channel.tx_ports, "Powered generator ports, e.g. 7,8")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    sub->add_option("--freq-ghz", cmd.channel.frequency_ghz,
                    "Analysis frequency in GHz (defaults to the file's only point, else 2.4)")
        ->check(CLI::PositiveNumber)
        ->each([&cmd](const std::string&) { cmd.channel.frequency_given = true; });
    sub->add_option("--freq-tol-mhz", cmd.channel.tolerance_mhz,
                    "Tolerance in MHz when matching the frequency point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    return opts;
}

void validate_channel(const ChannelSpec& channel)
{
    const bool has_file = !channel.touchstone_path.empty();
    const bool has_sigmas = !channel.sigmas.empty();
    if (has_file == has_sigmas)
        throw UsageError("exactly one channel source is required: a Touchstone file or --sigmas");
    if (has_file && (channel.rx_ports.empty() || channel.tx_ports.empty()))
        throw UsageError("--rx and --tx are required with a Touchstone channel");
    if (has_sigmas && (!channel.rx_ports.empty() || !channel.tx_ports.empty()))
        throw UsageError(
            "--rx/--tx apply only to Touchstone channels; --sigmas fixes the port split");
}

void check_synth_extension(const std::string& path, std::size_t ports)
{
    bool found = false;
    const std::size_t from_name = port_count_from_extension(path, &found);
    if (found && from_name != ports)
        throw UsageError("output name '" + path + "' declares " + std::to_string(from_name) +
                         " ports but the channel has " + std::to_string(ports));
}

} // namespace

Command parse_args(const std::vector<std::string>& args)
{
    Command cmd;
    std::string gains_text = "12:0:0.25";

    CLI::App app{"Beam-mode analysis and self-steering power-loop simulation", "wptlab"};
    app.require_subcommand(1);

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Report a channel's mode spectrum, best drive and marginal gain as JSON");
    add_channel_options(analyze, cmd);
    analyze->add_option("--loss-db", cmd.loss_db, "Receiver-side return loss in dB")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    analyze->add_option("-o,--output", cmd.output_path, "Write the report here instead of stdout");

    CLI::App* modes_cmd = app.add_subcommand(
        "modes", "Tabulate every beam mode (eigenvalue and port vectors) as CSV");
    add_channel_options(modes_cmd, cmd);
    modes_cmd->add_option("-o,--output", cmd.output_path, "Write the CSV here instead of stdout");

    CLI::App* simulate_cmd = app.add_subcommand(
        "simulate", "Iterate the conjugating feedback loop and emit its time series as CSV");
    add_channel_options(simulate_cmd, cmd);
    CLI::Option* gain_opt =
        simulate_cmd->add_option("--gain-db", cmd.gain_db, "Generator gain in dB");
    simulate_cmd->add_flag("--marginal", cmd.use_marginal_gain,
                           "Run exactly at the marginal-stability gain for the given loss");
    simulate_cmd->add_option("--loss-db", cmd.loss_db, "Receiver-side return loss in dB")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate_cmd->add_option("--noise-power", cmd.noise_power, "Per-step injected noise power")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate_cmd->add_option("--sat", cmd.saturation, "Soft clipping amplitude (0 disables)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate_cmd->add_option("--steps", cmd.steps, "Loop iterations")->capture_default_str();
    simulate_cmd->add_option("--seed", cmd.seed, "Seed for the initial state and the noise")
        ->capture_default_str();
    simulate_cmd
        ->add_option("--init", cmd.init, "Initial state: random, or best (the dominant beam)")
        ->check(CLI::IsMember({"random", "best"}))
        ->capture_default_str();
    simulate_cmd
        ->add_option("--tx-phase", cmd.tx_phase,
                     "Generator-side phase bookkeeping: same or conj")
        ->check(CLI::IsMember({"same", "conj"}))
        ->capture_default_str();
    simulate_cmd->add_option("-o,--output", cmd.output_path,
                             "Write the CSV here instead of stdout");

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Sweep generator gain high to low and report steady-state efficiency");
    add_channel_options(sweep_cmd, cmd);
    sweep_cmd->add_option("--gains", gains_text, "Gain grid start:stop:step in dB")
        ->capture_default_str();
    sweep_cmd->add_option("--loss-db", cmd.loss_db, "Receiver-side return loss in dB")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    CLI::Option* sweep_noise =
        sweep_cmd
            ->add_option("--noise-power", cmd.noise_power,
                         "Per-step injected noise power (default 1e-06)")
            ->check(CLI::NonNegativeNumber);
    CLI::Option* sweep_sat =
        sweep_cmd
            ->add_option("--sat", cmd.saturation,
                         "Soft clipping amplitude, 0 disables (default 1)")
            ->check(CLI::NonNegativeNumber);
    CLI::Option* sweep_steps =
        sweep_cmd->add_option("--steps", cmd.steps, "Loop iterations per point (default 3000)");
    sweep_cmd->add_option("--discard", cmd.discard, "Leading iterations dropped as transient")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", cmd.seed, "Base seed; each grid point derives its own")
        ->capture_default_str();
    sweep_cmd->add_option("-o,--output", cmd.output_path,
                          "Write the CSV here (summary JSON then goes to stdout)");

    CLI::App* synth_cmd = app.add_subcommand(
        "synth", "Generate a lossless reciprocal channel as a Touchstone file");
    synth_cmd->add_option("--ports", cmd.synth_ports, "Draw a random channel of this size")
        ->check(CLI::PositiveNumber);
    synth_cmd
        ->add_option("--sigmas", cmd.channel.sigmas,
                     "Embed these transmission singular values (makes 2x ports)")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--seed", cmd.synth_seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--freq-ghz", cmd.synth_frequency_ghz, "Stamped frequency in GHz")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("-o,--output", cmd.output_path,
                          "Output .sNp path (stdout when absent)");

    CLI::App* regress_cmd = app.add_subcommand(
        "regress", "Fit the loss model to the bench table, free and fixed slope, as JSON");
    regress_cmd->add_flag("--table2", cmd.use_bundled_table,
                          "Use the bundled 30-case bench table");
    regress_cmd->add_option("--fixture", cmd.fixture_path,
                            "Use this bench-table CSV (checksum-verified)");
    regress_cmd->add_option("-o,--output", cmd.output_path,
                            "Also write a per-case plot CSV here");

    CLI::App* table2_cmd = app.add_subcommand(
        "table2", "Echo the bench table with recomputed columns and a consistency footer");
    table2_cmd->add_option("--fixture", cmd.fixture_path,
                           "Use this bench-table CSV instead of the bundled one");
    table2_cmd->add_option("-o,--output", cmd.output_path,
                           "Write the CSV here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        Command help;
        help.kind = Subcommand::help;
        const auto parsed = app.get_subcommands();
        help.help_text = parsed.empty() ? app.help() : parsed.front()->help();
        return help;
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\nRun 'wptlab --help' for usage.");
    }

    if (analyze->parsed()) {
        cmd.kind = Subcommand::analyze;
        validate_channel(cmd.channel);
    } else if (modes_cmd->parsed()) {
        cmd.kind = Subcommand::modes;
        validate_channel(cmd.channel);
    } else if (simulate_cmd->parsed()) {
        cmd.kind = Subcommand::simulate;
        validate_channel(cmd.channel);
        if (cmd.use_marginal_gain == (gain_opt->count() > 0))
            throw UsageError("exactly one of --gain-db or --marginal is required");
    } else if (sweep_cmd->parsed()) {
        cmd.kind = Subcommand::sweep;
        validate_channel(cmd.channel);
        if (sweep_steps->count() == 0)
            cmd.steps = 3000;
        if (sweep_noise->count() == 0)
            cmd.noise_power = 1e-6;
        if (sweep_sat->count() == 0)
            cmd.saturation = 1.0;
        cmd.gains_db = parse_gain_grid(gains_text);
        if (cmd.steps <= cmd.discard)
            throw UsageError("--steps must exceed --discard");
    } else if (synth_cmd->parsed()) {
        cmd.kind = Subcommand::synth;
        const bool has_ports = cmd.synth_ports > 0;
        const bool has_sigmas = !cmd.channel.sigmas.empty();
        if (has_ports == has_sigmas)
            throw UsageError("exactly one of --ports or --sigmas is required");
        check_synth_extension(cmd.output_path,
                              has_ports ? cmd.synth_ports : 2 * cmd.channel.sigmas.size());
    } else if (regress_cmd->parsed()) {
        cmd.kind = Subcommand::regress;
        if (cmd.use_bundled_table == !cmd.fixture_path.empty())
            throw UsageError("exactly one of --table2 or --fixture is required");
    } else if (table2_cmd->parsed()) {
        cmd.kind = Subcommand::table2;
    } else {
        throw UsageError("a subcommand is required\nRun 'wptlab --help' for usage.");
    }
    return cmd;
}

int execute(const Command& cmd, std::ostream& out, std::ostream& err)
{
    switch (cmd.kind) {
    case Subcommand::help:
        out << cmd.help_text;
        return 0;
    case Subcommand::analyze:
        return run_analyze(cmd, out);
    case Subcommand::modes:
        return run_modes(cmd, out);
    case Subcommand::simulate:
        return run_simulate(cmd, out);
    case Subcommand::sweep:
        return run_sweep(cmd, out, err);
    case Subcommand::synth:
        return run_synth(cmd, out);
    case Subcommand::regress:
        return run_regress(cmd, out);
    case Subcommand::table2:
        return run_table2(cmd, out);
    }
    throw std::logic_error("unhandled subcommand");
}

int run_cli(int argc, const char* const* argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    try {
        const Command cmd = parse_args(args);
        return execute(cmd, std::cout, std::cerr);
    } catch (const UsageError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace wptlab
