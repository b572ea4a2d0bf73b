#include "vibrotag/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "vibrotag/config.hpp"
#include "vibrotag/error.hpp"
#include "vibrotag/parallel.hpp"
#include "vibrotag/rng.hpp"

namespace vibrotag::synth {

namespace {

void bad_model(const std::string& why) { throw Error(ErrorCode::BadModel, why); }

// Periodic linear interpolation of one cycle at fractional position u in [0, 1).
double shape_at(std::span<const double> shape, double u) {
    const auto n = static_cast<double>(shape.size());
    const double pos = u * n;
    const auto i0 = static_cast<std::size_t>(pos) % shape.size();
    const std::size_t i1 = (i0 + 1) % shape.size();
    const double frac = pos - std::floor(pos);
    return shape[i0] + frac * (shape[i1] - shape[i0]);
}

double truncated_normal(Rng& rng, double sigma) {
    if (sigma <= 0.0) return 0.0;
    while (true) {
        const double z = rng.normal();
        if (std::fabs(z) <= 2.0) return z * sigma;
    }
}

// Independent streams so that, e.g., enabling noise leaves the cycle
// sequence of a seed unchanged.
enum Stream : std::uint64_t { kJitter = 1, kNoise = 2, kBursts = 3 };

}  // namespace

void SurfaceModel::validate() const {
    if (shape.size() < 2) bad_model("shape needs >= 2 samples");
    const auto [lo, hi] = std::minmax_element(shape.begin(), shape.end());
    if (!(*hi > *lo)) bad_model("shape is constant");
    if (*lo < 0.0) bad_model("shape must be non-negative (it is an envelope)");
    if (!(f_nominal_hz > 0.0)) bad_model("f_nominal_hz must be > 0");
    if (!(jitter_sigma_hz >= 0.0) || 2.0 * jitter_sigma_hz >= f_nominal_hz)
        bad_model("jitter_sigma_hz must lie in [0, f_nominal_hz / 2)");
    if (!(noise_sigma >= 0.0)) bad_model("noise_sigma must be >= 0");
    if (!(transient_rate_hz >= 0.0)) bad_model("transient_rate_hz must be >= 0");
    if (!(transient_gain >= 0.0)) bad_model("transient_gain must be >= 0");
    if (!(transient_ms > 0.0)) bad_model("transient_ms must be > 0");
    if (!(amplitude > 0.0 && amplitude <= 1.0)) bad_model("amplitude must lie in (0, 1]");
}

Generated generate(const SurfaceModel& model, double duration_s, std::uint32_t sample_rate_hz) {
    model.validate();
    if (!(duration_s > 0.0)) bad_model("duration must be > 0");
    if (sample_rate_hz == 0) bad_model("sample rate must be > 0");
    const double fs = sample_rate_hz;
    const auto n = static_cast<std::size_t>(std::llround(duration_s * fs));
    if (n < 2) bad_model("duration shorter than two samples");

    GroundTruth truth;
    double peak = 0.0;
    for (double v : model.shape) peak = std::max(peak, v);
    truth.shape.reserve(model.shape.size());
    for (double v : model.shape) truth.shape.push_back(v / peak);

    // envelope in the difference domain, one jittered cycle at a time
    const std::size_t diff_len = n - 1;
    std::vector<double> envelope(diff_len);
    Rng jitter_rng(mix_seed(model.seed, kJitter));
    for (std::size_t pos = 0; pos < diff_len;) {
        const double jitter = truncated_normal(jitter_rng, model.jitter_sigma_hz);
        const auto len = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::llround(fs / (model.f_nominal_hz + jitter))));
        const auto cycle = render_cycle(truth.shape, len);
        for (std::size_t k = 0; k < len && pos + k < diff_len; ++k) envelope[pos + k] = cycle[k];
        truth.cycle_starts.push_back(pos);
        truth.cycle_lengths.push_back(len);
        truth.cycle_jitter_hz.push_back(jitter);
        pos += len;
    }

    // Nyquist-rate carrier: every 15-sample RMS of d recovers the envelope
    std::vector<double> raw(n, 0.0);
    for (std::size_t t = 0; t < diff_len; ++t) {
        const double d = model.amplitude * envelope[t] * ((t & 1u) ? -1.0 : 1.0);
        raw[t + 1] = raw[t] + d;
    }

    if (model.noise_sigma > 0.0) {
        Rng rng(mix_seed(model.seed, kNoise));
        const double sigma = model.noise_sigma * model.amplitude;
        for (double& v : raw) v += sigma * rng.normal();
    }

    if (model.transient_rate_hz > 0.0 && model.transient_gain > 0.0) {
        Rng rng(mix_seed(model.seed, kBursts));
        const auto burst_len = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::llround(model.transient_ms * fs / 1000.0)));
        const double sigma = model.transient_gain * model.amplitude;
        for (double t = rng.exponential(model.transient_rate_hz); t < duration_s;
             t += rng.exponential(model.transient_rate_hz)) {
            const auto start = static_cast<std::size_t>(std::llround(t * fs));
            for (std::size_t k = 0; k < burst_len && start + k < n; ++k) {
                const double taper =
                    0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(burst_len - 1));
                raw[start + k] += sigma * taper * rng.normal();
            }
            ++truth.transient_count;
        }
    }

    double mean = 0.0;
    for (double v : raw) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : raw) {
        v -= mean;
        if (v > 1.0 || v < -1.0) {
            v = std::clamp(v, -1.0, 1.0);
            ++truth.clipped_samples;
        }
    }
    return {AudioRecording(std::move(raw), sample_rate_hz, model.label), std::move(truth)};
}

std::vector<LabeledRecording> corpus(std::span<const SurfaceModel> models, std::size_t per_class,
                                     double duration_s, std::uint32_t sample_rate_hz,
                                     std::uint64_t seed) {
    if (models.size() < 2) bad_model("a corpus needs at least two models");
    std::set<std::string> labels;
    for (const auto& m : models) {
        if (m.label.empty()) bad_model("corpus models need labels");
        if (!labels.insert(m.label).second) bad_model("duplicate label '" + m.label + "'");
        m.validate();
    }
    const std::size_t total = models.size() * per_class;
    std::vector<std::optional<LabeledRecording>> slots(total);
    parallel_for(total, [&](std::size_t i) {
        const std::size_t m = i / per_class;
        const std::size_t r = i % per_class;
        SurfaceModel model = models[m];
        model.seed = mix_seed(mix_seed(seed, m, r), models[m].seed);
        Generated g = generate(model, duration_s, sample_rate_hz);
        slots[i] = LabeledRecording{models[m].label, std::move(g.recording), std::move(g.truth)};
    });
    std::vector<LabeledRecording> out;
    out.reserve(total);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<double> shape_from_bumps(std::span<const Bump> bumps, std::size_t length, double floor) {
    std::vector<double> out(length, floor);
    for (std::size_t i = 0; i < length; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(length);
        for (const Bump& b : bumps) {
            double dist = std::fabs(u - b.center);
            dist = std::min(dist, 1.0 - dist);
            if (dist < b.width) out[i] += b.height * 0.5 * (1.0 + std::cos(std::numbers::pi * dist / b.width));
        }
    }
    return out;
}

std::vector<double> preset_shape(std::size_t id) {
    // Secondary bumps sit within a quarter cycle of the main one so the
    // fundamental stays the strongest spectral line.
    static const std::vector<std::vector<Bump>> presets = {
        {{0.25, 0.22, 1.0}, {0.45, 0.12, 0.35}},
        {{0.30, 0.24, 1.0}, {0.12, 0.10, 0.30}},
        {{0.20, 0.18, 1.0}, {0.40, 0.14, 0.45}},
        {{0.50, 0.26, 1.0}, {0.30, 0.12, 0.25}, {0.70, 0.12, 0.25}},
        {{0.35, 0.20, 1.0}, {0.58, 0.10, 0.30}},
        {{0.40, 0.25, 1.0}, {0.20, 0.12, 0.42}},
    };
    if (id >= presets.size()) bad_model("no preset shape " + std::to_string(id));
    return shape_from_bumps(presets[id], 64, 0.05);
}

std::vector<double> render_cycle(std::span<const double> shape, std::size_t length) {
    std::vector<double> out(length);
    for (std::size_t k = 0; k < length; ++k)
        out[k] = shape_at(shape, static_cast<double>(k) / static_cast<double>(length));
    return out;
}

std::vector<double> peak_anchored(std::span<const double> shape) {
    if (shape.empty()) return {};
    const auto peak = static_cast<std::size_t>(std::max_element(shape.begin(), shape.end()) - shape.begin());
    std::vector<double> out(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) out[i] = shape[(peak + i) % shape.size()];
    return out;
}

SurfaceModel model_from_key_values(const std::map<std::string, std::string>& kv) {
    SurfaceModel m;
    bool have_shape = false;
    auto number = [](const std::string& key, const std::string& text) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || text.empty()) bad_model("bad value for '" + key + "': " + text);
        return v;
    };
    for (const auto& [key, value] : kv) {
        if (key == "label") {
            m.label = value;
        } else if (key == "shape" || key == "template") {
            m.shape.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto a = item.find_first_not_of(" \t");
                const auto b = item.find_last_not_of(" \t");
                if (a == std::string::npos) bad_model("empty shape element");
                m.shape.push_back(number(key, item.substr(a, b - a + 1)));
            }
            have_shape = true;
        } else if (key == "shape_preset") {
            if (!have_shape) m.shape = preset_shape(static_cast<std::size_t>(number(key, value)));
        } else if (key == "f_nominal_hz") {
            m.f_nominal_hz = number(key, value);
        } else if (key == "jitter_sigma_hz") {
            m.jitter_sigma_hz = number(key, value);
        } else if (key == "noise_sigma") {
            m.noise_sigma = number(key, value);
        } else if (key == "transient_rate_hz") {
            m.transient_rate_hz = number(key, value);
        } else if (key == "transient_gain") {
            m.transient_gain = number(key, value);
        } else if (key == "transient_ms") {
            m.transient_ms = number(key, value);
        } else if (key == "amplitude") {
            m.amplitude = number(key, value);
        } else if (key == "seed") {
            try {
                std::size_t used = 0;
                m.seed = std::stoull(value, &used);
                if (used != value.size()) bad_model("bad seed: " + value);
            } catch (const std::logic_error&) {
                bad_model("bad seed: " + value);
            }
        } else if (key == "duration_s" || key == "sample_rate_hz") {
            // recording-level keys, read by the caller
        } else {
            bad_model("unknown model key '" + key + "'");
        }
    }
    if (m.shape.empty()) m.shape = preset_shape(0);
    m.validate();
    return m;
}

SurfaceModel load_model(const std::string& path) { return model_from_key_values(read_key_value_file(path)); }

}  // namespace vibrotag::synth
