#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vibrotag/config.hpp"
#include "vibrotag/signal_io.hpp"

namespace vibrotag::dsp {

/// Record of the steps that produced an EnvelopeSignal.
struct Provenance {
    StepOrder step_order = StepOrder::DifferenceThenEnvelope;
    std::uint32_t n_rms = 0;
    double band_low_hz = 0.0;
    double band_high_hz = 0.0;
    std::uint32_t filter_order = 0;
    bool filtered = false;  ///< once filtered, values may be signed

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// The processed "sound signal" every extraction step works on.
struct EnvelopeSignal {
    std::vector<double> values;
    std::uint32_t sample_rate_hz = kDefaultSampleRateHz;
    Provenance provenance;
};

/// One-sided periodogram.
struct Spectrum {
    std::vector<double> freqs_hz;
    std::vector<double> power;
    double resolution_hz = 0.0;
    std::size_t window_len = 0;

    /// Mean-square power of the (mean-removed) signal represented by the
    /// spectrum: the one-sided bins folded back to two-sided, over len.
    double total_power() const noexcept;
};

// out[i] = x[i+1] - x[i]
std::vector<double> first_difference(std::span<const double> x);

// out[i] = sqrt(mean(x[i .. i+n)^2)), len(out) = len(x) - n + 1
std::vector<double> rms_envelope(std::span<const double> x, std::size_t n);

/// Second-order section in transposed direct form II, a0 normalised to 1.
/// First-order sections carry b2 = a2 = 0.
struct Biquad {
    double b0, b1, b2, a1, a2;
};

/// Butterworth band-pass realised as an `order`-pole high-pass at low_hz
/// cascaded with an `order`-pole low-pass at high_hz (bilinear transform,
/// prewarped edges).
std::vector<Biquad> design_butterworth_bandpass(double sample_rate_hz, double low_hz,
                                                double high_hz, std::uint32_t order);

/// Runs the cascade once over x with zero initial state.
std::vector<double> sosfilt(std::span<const Biquad> sections, std::span<const double> x);

/// Zero-phase band-pass: forward pass, then the same cascade over the
/// reversed output. Edges use even reflection padding (one period of
/// low_hz) and steady-state initial conditions, both linear in x.
std::vector<double> bandpass(std::span<const double> x, double sample_rate_hz, double low_hz,
                             double high_hz, std::uint32_t order);

EnvelopeSignal preprocess(const AudioRecording& rec, const ExtractionConfig& cfg);

/// power[k] = |DFT(x - mean)[k]|^2 / len(x) for k in 0..len/2.
Spectrum periodogram(std::span<const double> x, double sample_rate_hz);

}  // namespace vibrotag::dsp
