#include "wptlab/experiment.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace wptlab {

namespace detail {
const char* table2_csv();
}

namespace {

// Pinned FNV-1a-64 checksum of the bundled bench table. Any edit to the
// fixture must update this value deliberately.
constexpr std::uint64_t k_table2_checksum = 0xb856b335359d7c07ull;

constexpr std::string_view k_table2_header =
    "case,rx_ports,tx_ports,eta_theo_pct,eta_meas_pct,error_pct,"
    "gain_setting_db,gain_corr_db,est_loss_db";

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string hex64(std::uint64_t value)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, end - start));
        start = end + 1;
    }
}

[[noreturn]] void table_error(int row_id, const std::string& what)
{
    throw std::runtime_error("bench table case " + std::to_string(row_id) + ": " + what);
}

double parse_table_double(const std::string& field, int row_id, const char* what)
{
    try {
        std::size_t used = 0;
        const double value = std::stod(field, &used);
        if (used != field.size() || !std::isfinite(value))
            throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        table_error(row_id, std::string("bad ") + what + " value '" + field + "'");
    }
}

std::vector<int> parse_ports(const std::string& field, int lo, int hi, const char* what,
                             int row_id)
{
    std::vector<int> ports;
    std::set<int> seen;
    for (const std::string& tok : split(field, ';')) {
        int p = 0;
        try {
            std::size_t used = 0;
            p = std::stoi(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            table_error(row_id, std::string("bad ") + what + " port '" + tok + "'");
        }
        if (p < lo || p > hi)
            table_error(row_id, std::string(what) + " port " + std::to_string(p) +
                                    " outside " + std::to_string(lo) + ".." + std::to_string(hi));
        if (!seen.insert(p).second)
            table_error(row_id, std::string("duplicate ") + what + " port " + std::to_string(p));
        ports.push_back(p);
    }
    if (ports.empty())
        table_error(row_id, std::string("empty ") + what + " port list");
    return ports;
}

std::vector<ExperimentCase> parse_table2(std::string_view text)
{
    std::vector<std::string> lines;
    for (const std::string& line : split(text, '\n'))
        if (!line.empty())
            lines.push_back(line);
    if (lines.empty() || lines.front() != k_table2_header)
        throw std::runtime_error("bench table header does not match the expected columns");
    if (lines.size() != 31)
        throw std::runtime_error("bench table must hold exactly 30 cases (got " +
                                 std::to_string(lines.size() - 1) + ")");

    std::vector<ExperimentCase> cases;
    cases.reserve(30);
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const std::vector<std::string> fields = split(lines[row], ',');
        const int expected_id = static_cast<int>(row);
        if (fields.size() != 9)
            table_error(expected_id, "expected 9 columns, got " + std::to_string(fields.size()));

        ExperimentCase c;
        c.case_id = static_cast<int>(parse_table_double(fields[0], expected_id, "case id"));
        if (c.case_id != expected_id)
            table_error(expected_id, "case ids must run 1..30 in order (got " +
                                         std::to_string(c.case_id) + ")");
        c.rx_ports = parse_ports(fields[1], 1, 6, "receiver", c.case_id);
        c.tx_ports = parse_ports(fields[2], 7, 12, "generator", c.case_id);
        c.eta_theoretical = parse_table_double(fields[3], c.case_id, "theoretical efficiency") / 100.0;
        c.eta_measured = parse_table_double(fields[4], c.case_id, "measured efficiency") / 100.0;
        c.error_pct = parse_table_double(fields[5], c.case_id, "percent error");
        c.gain_setting_db = parse_table_double(fields[6], c.case_id, "gain setting");
        c.gain_corrected_db = parse_table_double(fields[7], c.case_id, "corrected gain");
        c.est_loss_db = parse_table_double(fields[8], c.case_id, "loss estimate");

        if (!(c.eta_theoretical > 0.0) || c.eta_theoretical > 1.0)
            table_error(c.case_id, "theoretical efficiency outside (0, 1]");
        if (!(c.eta_measured > 0.0) || c.eta_measured > 1.0)
            table_error(c.case_id, "measured efficiency outside (0, 1]");
        if (c.error_pct < 0.0)
            table_error(c.case_id, "percent error must be non-negative");
        if (c.gain_corrected_db > c.gain_setting_db)
            table_error(c.case_id, "corrected gain exceeds the dial setting");
        cases.push_back(std::move(c));
    }
    return cases;
}

} // namespace

const std::vector<ExperimentCase>& load_table2()
{
    static const std::vector<ExperimentCase> cases = [] {
        const std::string_view text = detail::table2_csv();
        if (fnv1a64(text) != k_table2_checksum)
            throw std::logic_error("bundled bench table does not match its pinned checksum");
        return parse_table2(text);
    }();
    return cases;
}

std::vector<ExperimentCase> load_table2(const std::string& csv_path)
{
    std::ifstream in(csv_path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open bench table '" + csv_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const std::uint64_t got = fnv1a64(text);
    if (got != k_table2_checksum)
        throw std::runtime_error("bench table checksum mismatch for '" + csv_path +
                                 "': expected " + hex64(k_table2_checksum) + ", got " +
                                 hex64(got) + " (file is corrupt or not the bundled fixture)");
    return parse_table2(text);
}

double corrected_gain(double setting_db, double slope)
{
    if (!(slope > 0.0))
        throw std::invalid_argument("gain correction slope must be positive");
    return std::round(setting_db * slope * 100.0) / 100.0;
}

double percent_error(double eta_theoretical, double eta_measured)
{
    if (!(eta_theoretical > 0.0))
        throw std::domain_error("theoretical efficiency must be positive");
    if (eta_measured < 0.0)
        throw std::domain_error("measured efficiency must be non-negative");
    return 100.0 * std::abs(eta_theoretical - eta_measured) / eta_theoretical;
}

double estimate_case_loss(double eta_measured, double gain_corrected_db)
{
    if (!(eta_measured > 0.0))
        throw std::domain_error("measured efficiency must be positive");
    return 20.0 * std::log10(eta_measured) + gain_corrected_db;
}

double alpha_factor(const CVector& drive, const CMatrix& to_active_rx,
                    const CMatrix& to_absorbing_rx)
{
    if (to_active_rx.cols() != drive.size() || to_absorbing_rx.cols() != drive.size())
        throw std::invalid_argument("block column counts must match the drive length");
    const double denom = squared_norm(drive);
    if (denom == 0.0)
        throw std::domain_error("capture factor undefined for a zero drive");
    const CMatrix quadratic_form = to_active_rx.adjoint() * to_active_rx +
                                   to_absorbing_rx.adjoint() * to_absorbing_rx;
    return inner(drive, quadratic_form.apply(drive)).real() / denom;
}

double quantized_gain_setting(double gain_db)
{
    if (!std::isfinite(gain_db))
        throw std::domain_error("gain setting must be finite");
    return std::floor(gain_db);
}

double compensated_efficiency(const std::vector<double>& port_powers,
                              const std::vector<int>& active_ports, double alpha,
                              double conjugator_loss_db)
{
    if (port_powers.empty())
        throw std::invalid_argument("at least one port power is required");
    if (active_ports.empty())
        throw std::invalid_argument("at least one active port is required");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::domain_error("capture factor must be non-negative and finite");

    double total = 0.0;
    for (double p : port_powers) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::domain_error("port powers must be non-negative and finite");
        total += p;
    }
    if (!(total > 0.0))
        throw std::domain_error("total port power must be positive");

    std::set<int> seen;
    double active = 0.0;
    for (int port : active_ports) {
        if (port < 1 || static_cast<std::size_t>(port) > port_powers.size())
            throw std::out_of_range("active port " + std::to_string(port) +
                                    " outside 1.." + std::to_string(port_powers.size()));
        if (!seen.insert(port).second)
            throw std::invalid_argument("duplicate active port " + std::to_string(port));
        active += port_powers[static_cast<std::size_t>(port - 1)];
    }
    return std::pow(10.0, conjugator_loss_db / 10.0) * alpha * active / total;
}

std::vector<RegressionPoint> regression_points(const std::vector<ExperimentCase>& cases)
{
    std::vector<RegressionPoint> points;
    points.reserve(cases.size());
    for (const ExperimentCase& c : cases) {
        if (!(c.eta_measured > 0.0))
            throw std::domain_error("measured efficiency must be positive");
        points.push_back(RegressionPoint{c.gain_corrected_db, 20.0 * std::log10(c.eta_measured)});
    }
    return points;
}

RegressionResult fit_regression(const std::vector<RegressionPoint>& points)
{
    if (points.size() < 2)
        throw std::invalid_argument("regression requires at least two points");

    double g_mean = 0.0;
    double y_mean = 0.0;
    for (const RegressionPoint& p : points) {
        g_mean += p.gain_db;
        y_mean += p.y_db;
    }
    g_mean /= static_cast<double>(points.size());
    y_mean /= static_cast<double>(points.size());

    double sgg = 0.0;
    double sgy = 0.0;
    for (const RegressionPoint& p : points) {
        sgg += (p.gain_db - g_mean) * (p.gain_db - g_mean);
        sgy += (p.gain_db - g_mean) * (p.y_db - y_mean);
    }
    if (sgg == 0.0)
        throw std::invalid_argument("regression requires at least two distinct gains");

    RegressionResult result;
    result.slope = sgy / sgg;
    result.intercept_db = y_mean - result.slope * g_mean;
    result.n_points = points.size();
    const GoodnessOfFit fit =
        coefficient_of_determination(points, result.slope, result.intercept_db);
    result.r_squared = fit.r_squared;
    result.zero_variance = fit.zero_variance;
    return result;
}

RegressionResult fixed_slope_fit(const std::vector<RegressionPoint>& points)
{
    if (points.empty())
        throw std::invalid_argument("fit requires at least one point");

    double acc = 0.0;
    for (const RegressionPoint& p : points)
        acc += p.y_db + p.gain_db;

    RegressionResult result;
    result.slope = -1.0;
    result.intercept_db = acc / static_cast<double>(points.size());
    result.n_points = points.size();
    const GoodnessOfFit fit =
        coefficient_of_determination(points, result.slope, result.intercept_db);
    result.r_squared = fit.r_squared;
    result.zero_variance = fit.zero_variance;
    return result;
}

GoodnessOfFit coefficient_of_determination(const std::vector<RegressionPoint>& points,
                                           double slope, double intercept_db)
{
    if (points.empty())
        throw std::invalid_argument("goodness of fit requires at least one point");

    double y_mean = 0.0;
    for (const RegressionPoint& p : points)
        y_mean += p.y_db;
    y_mean /= static_cast<double>(points.size());

    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (const RegressionPoint& p : points) {
        ss_tot += (p.y_db - y_mean) * (p.y_db - y_mean);
        const double r = p.y_db - (slope * p.gain_db + intercept_db);
        ss_res += r * r;
    }

    GoodnessOfFit fit;
    if (ss_tot == 0.0) {
        fit.zero_variance = true;
        fit.r_squared = (ss_res <= 1e-18) ? 1.0 : 0.0;
    } else {
        fit.r_squared = 1.0 - ss_res / ss_tot;
    }
    return fit;
}

} // namespace wptlab
