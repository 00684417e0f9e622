#include "wptlab/touchstone.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wptlab {

double frequency_unit_scale(FrequencyUnit unit)
{
    switch (unit) {
    case FrequencyUnit::hz: return 1.0;
    case FrequencyUnit::khz: return 1e3;
    case FrequencyUnit::mhz: return 1e6;
    case FrequencyUnit::ghz: return 1e9;
    }
    throw std::logic_error("unknown frequency unit");
}

namespace {

constexpr double k_pi = 3.14159265358979323846;

struct NumberToken {
    double value;
    std::size_t line;
};

[[noreturn]] void parse_error(std::size_t line, const std::string& what)
{
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view token, std::size_t line)
{
    double value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        parse_error(line, "expected a number, got '" + std::string(token) + "'");
    return value;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        if (i > start)
            out.push_back(s.substr(start, i - start));
    }
    return out;
}

// Matrix slot filled by the k-th value pair of a frequency point. Two-port
// files traditionally interleave as s11 s21 s12 s22; everything else is
// row-major.
std::pair<std::size_t, std::size_t> entry_position(std::size_t k, std::size_t n)
{
    if (n == 2) {
        static constexpr std::array<std::pair<std::size_t, std::size_t>, 4> order{
            {{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
        return order[k];
    }
    return {k / n, k % n};
}

void parse_option_line(std::string_view rest, std::size_t line, TouchstoneDocument& doc)
{
    bool unit_seen = false;
    bool param_seen = false;
    bool format_seen = false;
    bool reference_seen = false;

    const std::vector<std::string_view> tokens = split_whitespace(rest);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string t = lower(tokens[i]);
        if (t == "hz" || t == "khz" || t == "mhz" || t == "ghz") {
            if (unit_seen)
                parse_error(line, "duplicate frequency unit in option line");
            unit_seen = true;
            doc.unit = (t == "hz")    ? FrequencyUnit::hz
                       : (t == "khz") ? FrequencyUnit::khz
                       : (t == "mhz") ? FrequencyUnit::mhz
                                      : FrequencyUnit::ghz;
        } else if (t == "s") {
            if (param_seen)
                parse_error(line, "duplicate parameter kind in option line");
            param_seen = true;
        } else if (t == "y" || t == "z" || t == "g" || t == "h") {
            parse_error(line, "only S-parameters are supported (got '" +
                                  std::string(tokens[i]) + "')");
        } else if (t == "ri" || t == "ma" || t == "db") {
            if (format_seen)
                parse_error(line, "duplicate value format in option line");
            format_seen = true;
            doc.format = (t == "ri")   ? ValueFormat::real_imag
                         : (t == "ma") ? ValueFormat::magnitude_angle
                                       : ValueFormat::db_angle;
        } else if (t == "r") {
            if (reference_seen)
                parse_error(line, "duplicate reference resistance in option line");
            reference_seen = true;
            if (i + 1 >= tokens.size())
                parse_error(line, "option 'R' requires a resistance value");
            doc.reference_ohms = parse_number(tokens[++i], line);
            if (!(doc.reference_ohms > 0.0))
                parse_error(line, "reference resistance must be positive");
        } else {
            parse_error(line, "unrecognized option token '" + std::string(tokens[i]) + "'");
        }
    }
}

Complex decode_pair(double a, double b, ValueFormat format, std::size_t line)
{
    switch (format) {
    case ValueFormat::real_imag:
        return Complex{a, b};
    case ValueFormat::magnitude_angle: {
        if (a < 0.0)
            parse_error(line, "magnitude must be non-negative");
        const double rad = b * k_pi / 180.0;
        return Complex{a * std::cos(rad), a * std::sin(rad)};
    }
    case ValueFormat::db_angle: {
        const double mag = std::pow(10.0, a / 20.0);
        const double rad = b * k_pi / 180.0;
        return Complex{mag * std::cos(rad), mag * std::sin(rad)};
    }
    }
    throw std::logic_error("unknown value format");
}

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* unit_name(FrequencyUnit unit)
{
    switch (unit) {
    case FrequencyUnit::hz: return "Hz";
    case FrequencyUnit::khz: return "kHz";
    case FrequencyUnit::mhz: return "MHz";
    case FrequencyUnit::ghz: return "GHz";
    }
    throw std::logic_error("unknown frequency unit");
}

const char* format_name(ValueFormat format)
{
    switch (format) {
    case ValueFormat::real_imag: return "RI";
    case ValueFormat::magnitude_angle: return "MA";
    case ValueFormat::db_angle: return "DB";
    }
    throw std::logic_error("unknown value format");
}

void append_pair(std::string& out, Complex z, ValueFormat format)
{
    double a = 0.0;
    double b = 0.0;
    switch (format) {
    case ValueFormat::real_imag:
        a = z.real();
        b = z.imag();
        break;
    case ValueFormat::magnitude_angle:
        a = std::abs(z);
        b = (a > 0.0) ? std::arg(z) * 180.0 / k_pi : 0.0;
        break;
    case ValueFormat::db_angle: {
        const double mag = std::abs(z);
        // -10000 dB underflows to an exact zero magnitude when read back.
        a = (mag > 0.0) ? 20.0 * std::log10(mag) : -10000.0;
        b = (mag > 0.0) ? std::arg(z) * 180.0 / k_pi : 0.0;
        break;
    }
    }
    out += ' ';
    out += format_number(a);
    out += ' ';
    out += format_number(b);
}

} // namespace

TouchstoneDocument parse_touchstone(std::string_view text, std::size_t port_count)
{
    if (port_count == 0)
        throw std::invalid_argument("port count must be at least 1");

    TouchstoneDocument doc;
    doc.port_count = port_count;

    std::vector<NumberToken> numbers;
    bool option_seen = false;
    bool data_seen = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw.remove_suffix(1);

        std::string_view body = raw;
        const std::size_t bang = raw.find('!');
        if (bang != std::string_view::npos) {
            doc.comments.emplace_back(raw.substr(bang + 1));
            body = raw.substr(0, bang);
        }

        const std::vector<std::string_view> tokens = split_whitespace(body);
        if (tokens.empty())
            continue;

        if (tokens.front().front() == '#') {
            if (data_seen)
                parse_error(line_no, "option line after data");
            if (option_seen)
                parse_error(line_no, "duplicate option line");
            option_seen = true;
            std::string_view rest = body.substr(body.find('#') + 1);
            parse_option_line(rest, line_no, doc);
            continue;
        }

        data_seen = true;
        for (std::string_view t : tokens)
            numbers.push_back(NumberToken{parse_number(t, line_no), line_no});
    }

    const std::size_t per_point = 1 + 2 * port_count * port_count;
    const std::size_t complete = numbers.size() / per_point;
    if (numbers.size() % per_point != 0) {
        const std::size_t base = complete * per_point;
        parse_error(numbers[base].line, "incomplete frequency point: got " +
                                            std::to_string(numbers.size() - base) + " of " +
                                            std::to_string(per_point) + " values");
    }

    for (std::size_t g = 0; g < complete; ++g) {
        const std::size_t base = g * per_point;
        const double freq = numbers[base].value;
        const std::size_t freq_line = numbers[base].line;
        if (!std::isfinite(freq))
            parse_error(freq_line, "non-finite frequency");

        if (!doc.points.empty()) {
            const double prev = doc.points.back().frequency;
            if (freq < prev && port_count == 2)
                parse_error(freq_line,
                            "frequency decreases from " + format_number(prev) + " to " +
                                format_number(freq) +
                                "; two-port noise-parameter sections are not supported");
            if (freq <= prev)
                parse_error(freq_line, "frequencies must be strictly ascending (" +
                                           format_number(freq) + " after " + format_number(prev) +
                                           ")");
        }

        CMatrix matrix(port_count, port_count);
        for (std::size_t k = 0; k < port_count * port_count; ++k) {
            const NumberToken& ta = numbers[base + 1 + 2 * k];
            const NumberToken& tb = numbers[base + 2 + 2 * k];
            const Complex z = decode_pair(ta.value, tb.value, doc.format, ta.line);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                parse_error(ta.line, "non-finite matrix entry");
            const auto [r, c] = entry_position(k, port_count);
            matrix(r, c) = z;
        }
        doc.points.push_back(TouchstonePoint{freq, std::move(matrix)});
    }

    return doc;
}

std::string write_touchstone(const TouchstoneDocument& doc)
{
    if (doc.port_count == 0)
        throw std::invalid_argument("port count must be at least 1");
    if (!(doc.reference_ohms > 0.0))
        throw std::invalid_argument("reference resistance must be positive");

    std::string out;
    for (const std::string& c : doc.comments) {
        out += '!';
        out += c;
        out += '\n';
    }
    out += "# ";
    out += unit_name(doc.unit);
    out += " S ";
    out += format_name(doc.format);
    out += " R ";
    out += format_number(doc.reference_ohms);
    out += '\n';

    const std::size_t n = doc.port_count;
    double prev_freq = 0.0;
    bool first = true;
    for (const TouchstonePoint& point : doc.points) {
        if (point.matrix.rows() != n || point.matrix.cols() != n)
            throw std::invalid_argument("frequency point matrix size does not match port count");
        if (!point.matrix.all_finite() || !std::isfinite(point.frequency))
            throw std::invalid_argument("frequency point contains non-finite values");
        if (!first && point.frequency <= prev_freq)
            throw std::invalid_argument("frequencies must be strictly ascending");
        prev_freq = point.frequency;
        first = false;

        if (n <= 2) {
            std::string line = format_number(point.frequency);
            for (std::size_t k = 0; k < n * n; ++k) {
                const auto [r, c] = entry_position(k, n);
                append_pair(line, point.matrix(r, c), doc.format);
            }
            out += line;
            out += '\n';
        } else {
            // One matrix row per block, at most four value pairs per line.
            for (std::size_t r = 0; r < n; ++r) {
                std::string line = (r == 0) ? format_number(point.frequency) : std::string();
                std::size_t on_line = 0;
                for (std::size_t c = 0; c < n; ++c) {
                    if (on_line == 4) {
                        out += line;
                        out += '\n';
                        line.clear();
                        on_line = 0;
                    }
                    append_pair(line, point.matrix(r, c), doc.format);
                    ++on_line;
                }
                out += line;
                out += '\n';
            }
        }
    }
    return out;
}

ScatteringMatrix to_scattering_matrix(const TouchstoneDocument& doc, double frequency_hz,
                                      double tolerance_hz)
{
    if (doc.points.empty())
        throw std::runtime_error("document contains no frequency points");
    if (tolerance_hz < 0.0)
        throw std::invalid_argument("frequency tolerance must be non-negative");

    const double scale = frequency_unit_scale(doc.unit);
    std::size_t best = 0;
    double best_gap = std::abs(doc.points[0].frequency * scale - frequency_hz);
    for (std::size_t i = 1; i < doc.points.size(); ++i) {
        const double gap = std::abs(doc.points[i].frequency * scale - frequency_hz);
        if (gap < best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    if (best_gap > tolerance_hz) {
        std::ostringstream msg;
        msg << "no frequency point within " << tolerance_hz << " Hz of " << frequency_hz
            << " Hz; available:";
        const std::size_t shown = std::min<std::size_t>(doc.points.size(), 12);
        for (std::size_t i = 0; i < shown; ++i)
            msg << ' ' << doc.points[i].frequency * scale;
        if (shown < doc.points.size())
            msg << " ... (" << doc.points.size() << " points)";
        throw std::runtime_error(msg.str());
    }

    ScatteringMatrix network;
    network.s = doc.points[best].matrix;
    network.frequency_hz = doc.points[best].frequency * scale;
    network.reference_impedance = doc.reference_ohms;
    network.validate();
    return network;
}

} // namespace wptlab
