#pragma once

#include "wptlab/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace wptlab {

/// One bench measurement: which board ports carried the powered receivers
/// and generators, the predicted and measured collection efficiency, their
/// disagreement, the amplifier's dial and delivered gain, and the loss
/// estimate 20 log10(eta) + G_dB.
struct ExperimentCase {
    int case_id = 0;
    std::vector<int> rx_ports;
    std::vector<int> tx_ports;
    double eta_theoretical = 0.0;  // fraction in (0, 1]
    double eta_measured = 0.0;     // fraction in (0, 1]
    double error_pct = 0.0;
    double gain_setting_db = 0.0;
    double gain_corrected_db = 0.0;
    double est_loss_db = 0.0;
};

/// The 30 bundled bench cases (parsed once, cached).
const std::vector<ExperimentCase>& load_table2();

/// Loads the bench-case table from a CSV file. The file must be the bundled
/// fixture: its FNV-1a-64 checksum is verified before parsing and a
/// mismatch or unreadable file raises std::runtime_error naming both
/// checksums.
std::vector<ExperimentCase> load_table2(const std::string& csv_path);

/// Dial-to-delivered amplifier gain (the chain compresses by a fixed
/// measured slope), rounded to the 2 decimals used in reporting.
double corrected_gain(double setting_db, double slope = 0.9508);

/// Snaps a requested gain to the radio's 1 dB dial resolution
/// (floor-to-integer), the quantization applied before the slope
/// correction when post-processing sweep output.
double quantized_gain_setting(double gain_db);

/// 100 |theoretical - measured| / theoretical, both efficiencies as
/// fractions. Throws std::domain_error for a non-positive theoretical
/// value.
double percent_error(double eta_theoretical, double eta_measured);

/// Loss estimate for one case: 20 log10(eta_measured) + corrected gain.
/// Throws std::domain_error for a non-positive measured efficiency.
double estimate_case_loss(double eta_measured, double gain_corrected_db);

/// Fraction of the generator-side drive power that lands on receiver-side
/// ports, powered or terminated: drive^H (A^H A + B^H B) drive / |drive|^2,
/// where A maps the drive to the powered-receiver waves and B to the
/// terminated-receiver waves.
double alpha_factor(const CVector& drive, const CMatrix& to_active_rx,
                    const CMatrix& to_absorbing_rx);

/// Bench efficiency reconstructed from per-port power readings: undoes the
/// conjugator's fixed insertion loss, applies the receiver-side capture
/// factor alpha, and keeps the share of receiver-side power read on the
/// powered ports. Powers are linear (e.g. mW); active ports are 1-based
/// indices into `port_powers`.
double compensated_efficiency(const std::vector<double>& port_powers,
                              const std::vector<int>& active_ports, double alpha,
                              double conjugator_loss_db = 16.5);

struct RegressionPoint {
    double gain_db = 0.0;  // corrected gain, the regressor
    double y_db = 0.0;     // 20 log10(eta_measured)
};

struct RegressionResult {
    double slope = 0.0;
    double intercept_db = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    bool zero_variance = false;  // R^2 undefined; reported as 1 for an exact fit
};

struct GoodnessOfFit {
    double r_squared = 0.0;
    bool zero_variance = false;
};

/// Points (corrected gain, measured efficiency in dB) for a case list.
std::vector<RegressionPoint> regression_points(const std::vector<ExperimentCase>& cases);

/// Ordinary least squares y = slope * g + intercept_db. Requires at least
/// two points with distinct gains.
RegressionResult fit_regression(const std::vector<RegressionPoint>& points);

/// Loss fit with the slope pinned to -1 (an ideal loop loses one dB of
/// efficiency per dB of gain), so intercept_db = mean(y + g). Requires at
/// least one point.
RegressionResult fixed_slope_fit(const std::vector<RegressionPoint>& points);

/// R^2 of a given line over the points: 1 - SS_res / SS_tot. Zero variance
/// in y is flagged, with R^2 reported as 1 when the line also has zero
/// residual and 0 otherwise.
GoodnessOfFit coefficient_of_determination(const std::vector<RegressionPoint>& points,
                                           double slope, double intercept_db);

} // namespace wptlab
