#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vibrotag/signal_io.hpp"

namespace vibrotag::synth {

/// Ground-truth model of one surface: a fixed cycle shape that repeats at a
/// jittered rate, plus broadband noise and short bursts.
///
/// The shape is designed in the processed domain. The generator emits
/// d[t] = amplitude * shape(t) * (-1)^t, whose 15-sample RMS envelope is the
/// shape itself, and integrates it so that first_difference recovers d.
/// Noise levels are relative to `amplitude`.
struct SurfaceModel {
    std::string label;
    std::vector<double> shape;        ///< one cycle, non-negative, periodic
    double f_nominal_hz = 200.0;
    double jitter_sigma_hz = 0.0;     ///< per-cycle, truncated to +-2 sigma
    double noise_sigma = 0.0;         ///< white noise std, x amplitude
    double transient_rate_hz = 0.0;   ///< Poisson burst rate
    double transient_gain = 2.0;      ///< burst std, x amplitude
    double transient_ms = 5.0;        ///< burst duration
    double amplitude = 0.2;
    std::uint64_t seed = 0;

    void validate() const;  // throws Error(BadModel)
};

struct GroundTruth {
    /// Start of every complete or partial cycle, as indices into the first
    /// difference of the recording.
    std::vector<std::size_t> cycle_starts;
    std::vector<std::size_t> cycle_lengths;
    std::vector<double> cycle_jitter_hz;
    std::vector<double> shape;
    std::size_t transient_count = 0;
    std::size_t clipped_samples = 0;
};

struct Generated {
    AudioRecording recording;
    GroundTruth truth;
};

Generated generate(const SurfaceModel& model, double duration_s,
                   std::uint32_t sample_rate_hz = kDefaultSampleRateHz);

struct LabeledRecording {
    std::string label;
    AudioRecording recording;
    GroundTruth truth;
};

/// per_class recordings for every model; recording r of model m is
/// generated with a seed derived from (seed, m, r). Models must carry
/// distinct labels.
std::vector<LabeledRecording> corpus(std::span<const SurfaceModel> models, std::size_t per_class,
                                     double duration_s, std::uint32_t sample_rate_hz,
                                     std::uint64_t seed);

/// Raised-cosine bump on a periodic axis, centre and width as cycle
/// fractions.
struct Bump {
    double center;
    double width;
    double height;
};

std::vector<double> shape_from_bumps(std::span<const Bump> bumps, std::size_t length,
                                     double floor = 0.0);

/// A small catalogue of distinct, single-dominant-peak shapes used by the
/// CLI defaults and the test corpora.
std::vector<double> preset_shape(std::size_t id);
inline constexpr std::size_t kPresetCount = 6;

/// One cycle of the shape sampled at `length` points on its periodic axis,
/// exactly as the generator lays it down.
std::vector<double> render_cycle(std::span<const double> shape, std::size_t length);

/// The shape circularly rotated so that its maximum sits at index 0; the
/// form a peak-anchored extracted signature takes.
std::vector<double> peak_anchored(std::span<const double> shape);

/// Model keys match SurfaceModel field names; `shape` is a comma list and
/// `shape_preset` picks from the catalogue.
SurfaceModel model_from_key_values(const std::map<std::string, std::string>& kv);
SurfaceModel load_model(const std::string& path);

}  // namespace vibrotag::synth
