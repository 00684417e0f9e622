#pragma once

#include "wptlab/network.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace wptlab {

enum class FrequencyUnit { hz, khz, mhz, ghz };
enum class ValueFormat { real_imag, magnitude_angle, db_angle };

/// Multiplier taking a frequency in `unit` to Hz.
double frequency_unit_scale(FrequencyUnit unit);

struct TouchstonePoint {
    double frequency = 0.0;  // in the document's frequency unit
    CMatrix matrix;
};

/// In-memory form of a version-1 Touchstone file. Only S-parameters are
/// supported; other parameter kinds are rejected at parse time.
struct TouchstoneDocument {
    FrequencyUnit unit = FrequencyUnit::ghz;
    ValueFormat format = ValueFormat::magnitude_angle;
    double reference_ohms = 50.0;
    std::size_t port_count = 0;
    std::vector<TouchstonePoint> points;
    std::vector<std::string> comments;  // '!' comment text, in file order
};

/// Parses Touchstone text for a network with `port_count` ports (the port
/// count is conventionally carried by the .sNp file extension, so the
/// caller supplies it). Accepts any whitespace layout; matrix entries for
/// two ports arrive in the order s11 s21 s12 s22, and for three or more
/// ports row by row. Throws std::runtime_error with a line number for
/// malformed option lines, non-numeric data, incomplete points, or
/// non-ascending frequencies.
TouchstoneDocument parse_touchstone(std::string_view text, std::size_t port_count);

/// Renders a document back to Touchstone text: comments first, then the
/// option line, then one frequency point per block. Values are written with
/// 17 significant digits so a parse round-trip is exact to within one ULP.
std::string write_touchstone(const TouchstoneDocument& doc);

/// Selects the point nearest to `frequency_hz` and returns it as a
/// ScatteringMatrix. Throws std::runtime_error listing the available
/// frequencies when none lies within `tolerance_hz`.
ScatteringMatrix to_scattering_matrix(const TouchstoneDocument& doc, double frequency_hz,
                                      double tolerance_hz);

} // namespace wptlab
