#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vibrotag/config.hpp"
#include "vibrotag/dsp.hpp"

namespace vibrotag {

/// One surface observation: the median of many peak-anchored patterns.
struct VibrationSignature {
    std::vector<double> values;
    std::uint32_t sample_rate_hz = kDefaultSampleRateHz;
    double f_hat_hz = 0.0;
    std::uint32_t patterns_used = 0;
    std::uint32_t windows_examined = 0;
    std::string label;

    friend bool operator==(const VibrationSignature&, const VibrationSignature&) = default;
};

struct PeakSet {
    std::vector<std::size_t> indices;  // ascending, relative to the window
    std::vector<double> prominences;
    std::size_t window_offset = 0;

    std::size_t size() const noexcept { return indices.size(); }
};

/// Disjoint tiling of [0, signal_len) into windows of window_len, visited in
/// a seed-determined order without replacement.
class WindowSelector {
public:
    WindowSelector(std::size_t signal_len, std::size_t window_len, std::uint64_t seed);

    /// Start offset of the next window, or nullopt once the supply is spent.
    std::optional<std::size_t> next();
    std::size_t total() const noexcept { return offsets_.size(); }
    std::size_t remaining() const noexcept { return offsets_.size() - cursor_; }

private:
    std::vector<std::size_t> offsets_;
    std::size_t cursor_ = 0;
};

inline WindowSelector select_windows(std::size_t signal_len, std::size_t window_len,
                                     std::uint64_t seed) {
    return WindowSelector(signal_len, window_len, seed);
}

// Throws DegenerateWindow when max == min.
std::vector<double> max_min_normalize(std::span<const double> x);

/// Bin-centre frequency of the largest periodogram bin inside
/// [f_search_low_hz, f_search_high_hz].
double estimate_f_hat(std::span<const double> window, double sample_rate_hz,
                      const ExtractionConfig& cfg);

/// Samples between accepted peaks: floor(F_s / (f_hat + delta_f)).
std::size_t min_peak_distance(double f_hat_hz, double sample_rate_hz, double delta_f_hz);

/// Stage 1: local maxima whose topographic prominence is >= min_prominence.
/// A flat-topped maximum is reported at its (left-)middle sample.
PeakSet find_prominent_peaks(std::span<const double> x, double min_prominence);

/// Stage 2: keep tallest peaks first, dropping any candidate closer than
/// min_distance samples to an already-kept peak. Equal heights resolve to
/// the lower index.
PeakSet enforce_min_distance(std::span<const double> x, const PeakSet& peaks,
                             std::size_t min_distance);

/// Stage 3: drop peaks whose value is below min_strength * median(values).
PeakSet enforce_min_strength(std::span<const double> x, const PeakSet& peaks,
                             double min_strength);

/// All three stages. Throws NoPeaks when nothing survives.
PeakSet detect_peaks(std::span<const double> window, double f_hat_hz, double sample_rate_hz,
                     const ExtractionConfig& cfg);

/// Segments window[p_i, p_{i+1}) whose length lies in the configured band
/// around F_s / f_hat.
std::vector<std::vector<double>> extract_patterns(std::span<const double> window,
                                                  const PeakSet& peaks, double f_hat_hz,
                                                  double sample_rate_hz,
                                                  const ExtractionConfig& cfg);

/// Linear interpolation of x onto `length` points with matching endpoints.
std::vector<double> resample_linear(std::span<const double> x, std::size_t length);

/// Pointwise (lower) median after resampling every pattern to the (lower)
/// median pattern length. Throws Empty.
std::vector<double> combine_median(std::span<const std::vector<double>> patterns);

/// Full randomized extraction. Throws NonConvergenceError when the windows
/// run out, or max_windows is hit, before m_patterns are collected.
VibrationSignature extract_signature(const dsp::EnvelopeSignal& signal,
                                     const ExtractionConfig& cfg);

/// Convenience: preprocess then extract.
VibrationSignature extract_signature(const AudioRecording& rec, const ExtractionConfig& cfg);

enum class NoiseVerdict { Quiet, Moderate, Noisy, NonConvergent };

struct NoiseThresholds {
    double quiet_ratio = 2.0;
    double moderate_ratio = 6.0;
};

/// Expected minimum window count: ceil(M / expected patterns per window),
/// where a window of S samples holds about S * f_hat / F_s - 1 patterns.
std::size_t expected_min_windows(const VibrationSignature& sig, const ExtractionConfig& cfg);

NoiseVerdict noise_verdict(const VibrationSignature& sig, const ExtractionConfig& cfg,
                           const NoiseThresholds& thresholds = {});

std::string_view to_string(NoiseVerdict v) noexcept;

}  // namespace vibrotag
