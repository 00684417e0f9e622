#include "wptlab/loop_dynamics.hpp"

#include "wptlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wptlab {

namespace {

// Precomputed update matrices. One loop iteration is
//   rx_wave' = conj(L) G conj(s21) s21^T rx_wave + injection
//   tx_wave' = phi s21^H s21 tx_wave + conj(G) s21^H conj(injection)
// where phi is conj(L) G or its conjugate depending on the phase
// convention. Both updates share the spectrum |L G| xi_i.
struct LoopOperator {
    CMatrix rx_update;
    CMatrix tx_update;
    CMatrix tx_inject;
    Complex inject_scale{};
};

LoopOperator make_operator(const LoopConfig& config)
{
    const Complex phi_rx = std::conj(config.loss) * config.gain;
    const Complex phi_tx = (config.tx_phase == TxPhaseConvention::same_as_rx)
                               ? phi_rx
                               : std::conj(phi_rx);
    const CMatrix adjoint = config.s21.adjoint();
    LoopOperator op;
    op.rx_update = (config.s21.conjugate() * config.s21.transpose()) * phi_rx;
    op.tx_update = (adjoint * config.s21) * phi_tx;
    op.tx_inject = adjoint;
    op.inject_scale = std::conj(config.gain);
    return op;
}

void soft_clip(CVector& wave, double amplitude)
{
    for (Complex& z : wave) {
        const double a = std::abs(z);
        if (a > 0.0)
            z *= std::tanh(a / amplitude) * amplitude / a;
    }
}

LoopState advance(const LoopOperator& op, const LoopConfig& config, const LoopState& state,
                  const CVector& injection)
{
    LoopState next;
    next.k = state.k + 1;
    next.rx_wave = op.rx_update.apply(state.rx_wave);
    for (std::size_t i = 0; i < injection.size(); ++i)
        next.rx_wave[i] += injection[i];
    next.tx_wave = op.tx_update.apply(state.tx_wave) +
                   op.inject_scale * op.tx_inject.apply(conjugate(injection));
    if (config.saturation) {
        soft_clip(next.rx_wave, config.saturation->amplitude);
        soft_clip(next.tx_wave, config.saturation->amplitude);
    }
    return next;
}

void check_state_dims(const LoopConfig& config, const LoopState& state)
{
    if (state.rx_wave.size() != config.s21.rows())
        throw std::invalid_argument("receiver wave length must match receiver port count");
    if (state.tx_wave.size() != config.s21.cols())
        throw std::invalid_argument("generator wave length must match generator port count");
}

Complex integer_power(Complex base, std::size_t exponent)
{
    Complex acc{1.0, 0.0};
    for (std::size_t i = 0; i < exponent; ++i)
        acc *= base;
    return acc;
}

std::string format_field(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace

void LoopConfig::validate() const
{
    if (s21.empty())
        throw std::invalid_argument("transmission block must be non-empty");
    if (!s21.all_finite())
        throw std::invalid_argument("transmission block entries must be finite");
    const double loss_mag = std::abs(loss);
    if (!std::isfinite(loss_mag) || loss_mag > 1.0 + 1e-12)
        throw std::invalid_argument("loss factor magnitude must not exceed 1");
    if (!std::isfinite(std::abs(gain)))
        throw std::invalid_argument("gain must be finite");
    if (!(noise_power >= 0.0))
        throw std::invalid_argument("noise power must be non-negative");
    if (saturation && !(saturation->amplitude > 0.0))
        throw std::invalid_argument("saturation amplitude must be positive");
}

LoopState step(const LoopConfig& config, const LoopState& state, const CVector& injection)
{
    config.validate();
    check_state_dims(config, state);
    if (injection.size() != config.s21.rows())
        throw std::invalid_argument("injection length must match receiver port count");
    return advance(make_operator(config), config, state, injection);
}

LoopState zero_input_response(const LoopConfig& config, const CVector& v0_rx,
                              const CVector& v0_tx, std::size_t k)
{
    config.validate();
    if (config.saturation)
        throw std::logic_error("closed-form response is only defined for the linear loop");
    if (v0_rx.size() != config.s21.rows())
        throw std::invalid_argument("receiver wave length must match receiver port count");
    if (v0_tx.size() != config.s21.cols())
        throw std::invalid_argument("generator wave length must match generator port count");

    const BeamModeSet modes = beam_modes(config.s21);
    const Complex phi_rx = std::conj(config.loss) * config.gain;
    const Complex phi_tx =
        (config.tx_phase == TxPhaseConvention::same_as_rx) ? phi_rx : std::conj(phi_rx);

    LoopState out;
    out.k = k;
    out.rx_wave.assign(v0_rx.size(), Complex{});
    out.tx_wave.assign(v0_tx.size(), Complex{});

    // The receiver-side update matrix is the conjugate of s21 s21^H, so its
    // eigenvectors are the conjugated receive modes and the expansion weight
    // of v0 along mode i is b_i^T v0.
    for (std::size_t i = 0; i < modes.rx_modes.size(); ++i) {
        const CVector& mode = modes.rx_modes[i];
        Complex weight{};
        for (std::size_t j = 0; j < mode.size(); ++j)
            weight += mode[j] * v0_rx[j];
        const Complex factor = integer_power(phi_rx * modes.eigenvalues[i], k) * weight;
        for (std::size_t j = 0; j < mode.size(); ++j)
            out.rx_wave[j] += factor * std::conj(mode[j]);
    }
    for (std::size_t i = 0; i < modes.tx_modes.size(); ++i) {
        const CVector& mode = modes.tx_modes[i];
        const Complex factor = integer_power(phi_tx * modes.eigenvalues[i], k) * inner(mode, v0_tx);
        for (std::size_t j = 0; j < mode.size(); ++j)
            out.tx_wave[j] += factor * mode[j];
    }
    return out;
}

const char* to_string(StabilityLabel label)
{
    switch (label) {
    case StabilityLabel::stable: return "stable";
    case StabilityLabel::marginal: return "marginal";
    case StabilityLabel::unstable: return "unstable";
    }
    throw std::logic_error("unknown stability label");
}

namespace {

StabilityLabel classify_growth(double growth_factor)
{
    if (std::abs(growth_factor - 1.0) <= 1e-9)
        return StabilityLabel::marginal;
    return growth_factor < 1.0 ? StabilityLabel::stable : StabilityLabel::unstable;
}

} // namespace

StabilityReport classify_stability(const LoopConfig& config)
{
    config.validate();
    const double xi_max = beam_modes(config.s21).eigenvalues.at(0);
    const double growth = std::abs(config.loss * config.gain) * xi_max;
    return StabilityReport{classify_growth(growth), growth};
}

double marginal_gain(const CMatrix& s21, double loss_magnitude)
{
    if (!(loss_magnitude > 0.0) || loss_magnitude > 1.0 + 1e-12)
        throw std::invalid_argument("loss magnitude must lie in (0, 1]");
    const double xi_max = beam_modes(s21).eigenvalues.at(0);
    if (xi_max <= 0.0)
        throw std::domain_error("channel has no coupled mode; no finite gain is marginal");
    return 1.0 / (loss_magnitude * xi_max);
}

DominantProjection dominant_projection(const BeamModeSet& modes, const CVector& v0)
{
    if (modes.tx_modes.empty())
        throw std::invalid_argument("mode set is empty");
    if (v0.size() != modes.tx_modes.front().size())
        throw std::invalid_argument("vector length must match generator port count");

    const double xi_max = modes.eigenvalues.at(0);
    DominantProjection out;
    out.projection.assign(v0.size(), Complex{});
    for (std::size_t i = 0; i < modes.tx_modes.size(); ++i) {
        if (modes.eigenvalues[i] < xi_max - 1e-9)
            break;  // eigenvalues are sorted descending
        const CVector& mode = modes.tx_modes[i];
        const Complex weight = inner(mode, v0);
        for (std::size_t j = 0; j < mode.size(); ++j)
            out.projection[j] += weight * mode[j];
    }
    out.zero_projection = norm(out.projection) <= 1e-10 * norm(v0);
    return out;
}

SimulationResult simulate(const LoopConfig& config, const LoopState& initial, std::size_t steps,
                          std::uint64_t seed)
{
    config.validate();
    check_state_dims(config, initial);

    const LoopOperator op = make_operator(config);
    const CVector a_max = max_efficiency(config.s21).a_max;
    RandomSource rng(seed);
    const double noise_scale = std::sqrt(config.noise_power);

    SimulationResult result;
    result.series.reserve(steps + 1);

    const auto record = [&](const LoopState& state) {
        SimulationSample sample;
        sample.k = state.k;
        sample.rx_norm = norm(state.rx_wave);
        sample.tx_norm = norm(state.tx_wave);
        if (sample.tx_norm > 0.0) {
            const double power = sample.tx_norm * sample.tx_norm;
            sample.efficiency = squared_norm(config.s21.apply(state.tx_wave)) / power;
            sample.mode_purity = std::norm(inner(a_max, state.tx_wave)) / power;
        }
        result.series.push_back(sample);
        return sample;
    };

    LoopState state = initial;
    record(state);
    CVector injection(config.s21.rows());
    for (std::size_t i = 0; i < steps; ++i) {
        if (noise_scale > 0.0)
            for (Complex& z : injection)
                z = rng.complex_gaussian() * noise_scale;
        state = advance(op, config, state, injection);
        const SimulationSample sample = record(state);
        if (sample.rx_norm > 1e150 || sample.tx_norm > 1e150) {
            result.overflowed = true;
            break;
        }
    }
    return result;
}

SweepResult gain_sweep(const CMatrix& s21, Complex loss, const std::vector<double>& gains_db,
                       double noise_power, std::optional<Saturation> saturation,
                       std::uint64_t seed, std::size_t steps_per_point, std::size_t discard)
{
    if (gains_db.empty())
        throw std::invalid_argument("gain grid must be non-empty");
    if (steps_per_point <= discard)
        throw std::invalid_argument("steps_per_point must exceed the discarded transient");

    const double xi_max = beam_modes(s21).eigenvalues.at(0);
    const double loss_mag = std::abs(loss);
    double frob2 = 0.0;
    {
        const double f = s21.frobenius_norm();
        frob2 = f * f;
    }

    SweepResult result;
    result.points.reserve(gains_db.size());
    for (std::size_t i = 0; i < gains_db.size(); ++i) {
        const double gain_mag = std::pow(10.0, gains_db[i] / 20.0);

        LoopConfig config;
        config.s21 = s21;
        config.loss = loss;
        config.gain = Complex{gain_mag, 0.0};
        config.noise_power = noise_power;
        config.saturation = saturation;

        // Per-point derived seed: every grid point gets an independent but
        // reproducible stream for its initial state and noise.
        RandomSource rng(seed ^ static_cast<std::uint64_t>(i));
        LoopState init;
        init.rx_wave = rng.complex_gaussian_vector(s21.rows());
        init.tx_wave = rng.complex_gaussian_vector(s21.cols());
        const double rx_len = norm(init.rx_wave);
        const double tx_len = norm(init.tx_wave);
        for (Complex& z : init.rx_wave)
            z /= rx_len;
        for (Complex& z : init.tx_wave)
            z /= tx_len;

        const SimulationResult sim = simulate(config, init, steps_per_point, rng.raw());

        // Steady-state samples: everything after the transient, or the tail
        // half of a truncated (overflowed) series.
        std::size_t first = discard + 1;
        const std::size_t last = sim.series.size();
        if (first >= last) {
            const std::size_t available = last - 1;  // samples with k >= 1
            first = last - (available + 1) / 2;
        }

        // A sample carries a beam only when the generator-side power rises
        // well above what one round of amplified noise injection delivers;
        // below that floor the loop is just recirculating noise and the
        // efficiency sample counts as zero.
        const double floor2 =
            std::max(100.0 * gain_mag * gain_mag * noise_power * frob2, 1e-24);

        double sum = 0.0;
        double sum_sq = 0.0;
        std::size_t above = 0;
        std::size_t count = 0;
        for (std::size_t j = first; j < last; ++j) {
            const SimulationSample& sample = sim.series[j];
            double value = 0.0;
            if (sample.tx_norm * sample.tx_norm >= floor2) {
                value = sample.efficiency;
                ++above;
            }
            sum += value;
            sum_sq += value * value;
            ++count;
        }

        GainPoint point;
        point.gain_db = gains_db[i];
        point.label = classify_growth(loss_mag * gain_mag * xi_max);
        point.overflowed = sim.overflowed;
        if (count > 0) {
            point.eff_mean = sum / static_cast<double>(count);
            point.eff_std =
                std::sqrt(std::max(0.0, sum_sq / static_cast<double>(count) -
                                            point.eff_mean * point.eff_mean));
            point.signal_fraction = static_cast<double>(above) / static_cast<double>(count);
        }
        result.points.push_back(point);
    }

    // Transition: higher-gain endpoint of the largest drop between adjacent
    // grid points.
    double best_drop = 0.0;
    for (std::size_t i = 0; i + 1 < result.points.size(); ++i) {
        const GainPoint& a = result.points[i];
        const GainPoint& b = result.points[i + 1];
        const GainPoint& hi = (a.gain_db >= b.gain_db) ? a : b;
        const GainPoint& lo = (a.gain_db >= b.gain_db) ? b : a;
        const double drop = hi.eff_mean - lo.eff_mean;
        if (drop > best_drop) {
            best_drop = drop;
            result.transition_gain_db = hi.gain_db;
        }
    }
    return result;
}

void write_series_csv(std::ostream& out, const SimulationResult& sim)
{
    out << "k,v1f_norm,v2f_norm,efficiency,mode_purity\n";
    for (const SimulationSample& s : sim.series) {
        out << s.k << ',' << format_field(s.rx_norm) << ',' << format_field(s.tx_norm) << ','
            << format_field(s.efficiency) << ',' << format_field(s.mode_purity) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep)
{
    out << "gain_db,eff_mean,eff_std,label\n";
    for (const GainPoint& p : sweep.points) {
        out << format_field(p.gain_db) << ',' << format_field(p.eff_mean) << ','
            << format_field(p.eff_std) << ',' << to_string(p.label) << '\n';
    }
}

} // namespace wptlab
