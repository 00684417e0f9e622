#pragma once

#include "wptlab/eigenbeam.hpp"
#include "wptlab/linalg.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace wptlab {

/// Phase factor used in the generator-side state update. The loop phase can
/// be bookkept with the same loss/gain factor as the receiver-side update or
/// with its conjugate; the two choices agree in magnitude (so stability and
/// efficiency are unaffected) and differ only in the per-iteration phase
/// spiral of the generator-side wave.
enum class TxPhaseConvention { same_as_rx, conjugated };

/// Soft amplitude limit modelling amplifier compression.
struct Saturation {
    double amplitude = 1.0;
};

/// Fixed parameters of the self-conjugating power loop: the channel's
/// transmission block, the receiver-side round-trip loss factor L
/// (|L| <= 1), the generator gain G, and optional per-step noise injection
/// and saturation.
struct LoopConfig {
    CMatrix s21;
    Complex loss{1.0, 0.0};
    Complex gain{1.0, 0.0};
    double noise_power = 0.0;
    std::optional<Saturation> saturation;
    TxPhaseConvention tx_phase = TxPhaseConvention::same_as_rx;

    void validate() const;
};

/// Loop state after k iterations: forward wave amplitudes at the receiver
/// ports (rx_wave, length M) and at the generator ports (tx_wave, length N).
struct LoopState {
    std::size_t k = 0;
    CVector rx_wave;
    CVector tx_wave;
};

/// One loop iteration: the receiver-side wave is re-emitted, conjugated and
/// amplified at the generator, and returned through the channel, with
/// `injection` (length M) added at the receiver ports. Saturation, when
/// configured, clips both waves after the update.
LoopState step(const LoopConfig& config, const LoopState& state, const CVector& injection);

/// Closed-form state after k iterations of the noiseless linear loop from
/// initial waves v0_rx / v0_tx, evaluated mode by mode. Throws
/// std::logic_error when saturation is configured (the closed form only
/// holds for the linear loop).
LoopState zero_input_response(const LoopConfig& config, const CVector& v0_rx,
                              const CVector& v0_tx, std::size_t k);

enum class StabilityLabel { stable, marginal, unstable };

const char* to_string(StabilityLabel label);

struct StabilityReport {
    StabilityLabel label = StabilityLabel::stable;
    /// Per-iteration growth factor |L G| xi_max of the dominant mode.
    double growth_factor = 0.0;
};

/// Classifies the loop by its dominant growth factor rho = |L G| xi_max:
/// marginal when |rho - 1| <= 1e-9, otherwise stable (rho < 1) or unstable.
StabilityReport classify_stability(const LoopConfig& config);

/// Gain magnitude that makes the loop exactly marginal for a given loss
/// magnitude: 1 / (|L| xi_max). Throws std::domain_error when the channel
/// has no coupled mode (xi_max = 0).
double marginal_gain(const CMatrix& s21, double loss_magnitude);

struct DominantProjection {
    CVector projection;
    bool zero_projection = false;  // no overlap with the dominant eigenspace
};

/// Projection of a generator-side vector onto the eigenspace of the
/// dominant transfer eigenvalue (all modes within 1e-9 of xi_max). The loop
/// converges toward this component, so a zero projection flags an initial
/// state the loop cannot amplify into the best beam.
DominantProjection dominant_projection(const BeamModeSet& modes, const CVector& v0);

struct SimulationSample {
    std::size_t k = 0;
    double rx_norm = 0.0;
    double tx_norm = 0.0;
    double efficiency = 0.0;   // zero for a dead (all-zero) generator wave
    double mode_purity = 0.0;  // |<a_max, tx_wave>|^2 / |tx_wave|^2
};

struct SimulationResult {
    std::vector<SimulationSample> series;  // entry 0 is the initial state
    bool overflowed = false;               // any norm exceeded 1e150; series truncated
};

/// Runs `steps` loop iterations from `initial`, drawing fresh noise each
/// step when the config has noise_power > 0 (seeded, reproducible).
SimulationResult simulate(const LoopConfig& config, const LoopState& initial, std::size_t steps,
                          std::uint64_t seed);

struct GainPoint {
    double gain_db = 0.0;
    double eff_mean = 0.0;
    double eff_std = 0.0;
    StabilityLabel label = StabilityLabel::stable;
    double signal_fraction = 0.0;  // share of kept samples above the signal floor
    bool overflowed = false;
};

struct SweepResult {
    std::vector<GainPoint> points;
    /// Higher-gain endpoint of the largest adjacent drop in mean efficiency;
    /// absent when no drop exists (fewer than two points or flat response).
    std::optional<double> transition_gain_db;
};

/// Steady-state efficiency versus gain. Each grid point runs its own
/// simulation from a seeded random initial state, discarding the first
/// `discard` iterations as transient. Samples whose generator-side power
/// stays below the noise-driven signal floor count as zero efficiency, so
/// sub-marginal points average to zero and the marginal transition shows up
/// as a sharp drop. Grids are conventionally ordered high gain to low.
SweepResult gain_sweep(const CMatrix& s21, Complex loss, const std::vector<double>& gains_db,
                       double noise_power, std::optional<Saturation> saturation,
                       std::uint64_t seed, std::size_t steps_per_point, std::size_t discard);

/// CSV with header k,v1f_norm,v2f_norm,efficiency,mode_purity (the wave at
/// the receiver ports is reported as v1f, the generator side as v2f).
void write_series_csv(std::ostream& out, const SimulationResult& sim);

/// CSV with header gain_db,eff_mean,eff_std,label.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

} // namespace wptlab
