#pragma once

// Synthetic corpora shared by the classifier tests and the acceptance suite.

#include <cstdint>
#include <string>
#include <vector>

#include "vibrotag/classifier.hpp"
#include "vibrotag/parallel.hpp"
#include "vibrotag/signature.hpp"
#include "vibrotag/synth.hpp"

namespace fixtures {

inline constexpr double kDurationS = 3.0;

inline vibrotag::synth::SurfaceModel model(std::string label, std::size_t preset, double f_hz,
                                          double jitter = 3.0, double noise = 0.05) {
    vibrotag::synth::SurfaceModel m;
    m.label = std::move(label);
    m.shape = vibrotag::synth::preset_shape(preset);
    m.f_nominal_hz = f_hz;
    m.jitter_sigma_hz = jitter;
    m.noise_sigma = noise;
    return m;
}

/// Five distinct shapes spread over 120-320 Hz.
inline std::vector<vibrotag::synth::SurfaceModel> five_class_models(double jitter = 3.0, double noise = 0.05) {
    const double f[] = {120.0, 170.0, 220.0, 270.0, 320.0};
    std::vector<vibrotag::synth::SurfaceModel> out;
    for (std::size_t k = 0; k < 5; ++k) out.push_back(model("surface" + std::to_string(k), k, f[k], jitter, noise));
    return out;
}

/// One shape at two rates 40 Hz apart.
inline std::vector<vibrotag::synth::SurfaceModel> hard_pair_models() {
    return {model("a", 0, 200.0), model("b", 0, 240.0)};
}

/// Generates per_class recordings per model and extracts a signature from
/// each, seeding window selection with the recording index.
inline std::vector<vibrotag::LabeledSignature> signatures(const std::vector<vibrotag::synth::SurfaceModel>& models,
                                                          std::size_t per_class, std::uint64_t seed) {
    const auto recs = vibrotag::synth::corpus(models, per_class, kDurationS, vibrotag::kDefaultSampleRateHz, seed);
    std::vector<vibrotag::LabeledSignature> out(recs.size());
    vibrotag::parallel_for(recs.size(), [&](std::size_t i) {
        vibrotag::ExtractionConfig cfg;
        cfg.rng_seed = i;
        out[i] = {recs[i].label, vibrotag::extract_signature(recs[i].recording, cfg)};
        out[i].signature.label = recs[i].label;
    });
    return out;
}

}  // namespace fixtures
