#include "vibrotag/signature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vibrotag/error.hpp"
#include "vibrotag/kernels.hpp"
#include "vibrotag/rng.hpp"

namespace vibrotag {

namespace {

template <typename T>
T lower_median(std::vector<T> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

double conventional_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

PeakSet subset(const PeakSet& peaks, const std::vector<bool>& keep) {
    PeakSet out;
    out.window_offset = peaks.window_offset;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        if (!keep[i]) continue;
        out.indices.push_back(peaks.indices[i]);
        out.prominences.push_back(peaks.prominences[i]);
    }
    return out;
}

double topographic_prominence(std::span<const double> x, std::size_t peak) {
    const double height = x[peak];
    double left_min = height;
    for (std::size_t i = peak + 1; i-- > 0;) {
        if (x[i] > height) break;
        left_min = std::min(left_min, x[i]);
    }
    double right_min = height;
    for (std::size_t i = peak; i < x.size(); ++i) {
        if (x[i] > height) break;
        right_min = std::min(right_min, x[i]);
    }
    return height - std::max(left_min, right_min);
}

}  // namespace

// ---------------------------------------------------------------------------

WindowSelector::WindowSelector(std::size_t signal_len, std::size_t window_len, std::uint64_t seed) {
    if (window_len == 0) throw Error(ErrorCode::InvalidConfig, "window length must be >= 1");
    if (signal_len < window_len)
        throw Error(ErrorCode::TooShort, "signal of " + std::to_string(signal_len) +
                                             " samples is shorter than one window of " +
                                             std::to_string(window_len));
    const std::size_t count = signal_len / window_len;
    offsets_.resize(count);
    for (std::size_t i = 0; i < count; ++i) offsets_[i] = i * window_len;
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(offsets_));
}

std::optional<std::size_t> WindowSelector::next() {
    if (cursor_ >= offsets_.size()) return std::nullopt;
    return offsets_[cursor_++];
}

std::vector<double> max_min_normalize(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "normalisation needs >= 2 samples");
    const auto& k = kernels::active();
    const auto [lo, hi] = k.min_max(x.data(), x.size());
    if (!(hi > lo)) throw Error(ErrorCode::DegenerateWindow, "constant window");
    std::vector<double> out(x.size());
    k.normalize(x.data(), out.data(), x.size(), lo, hi - lo);
    return out;
}

double estimate_f_hat(std::span<const double> window, double sample_rate_hz,
                      const ExtractionConfig& cfg) {
    const dsp::Spectrum s = dsp::periodogram(window, sample_rate_hz);
    double total = 0.0;
    for (double p : s.power) total += p;

    double in_band = 0.0;
    double best_power = -1.0;
    double best_freq = 0.0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        const double f = s.freqs_hz[k];
        if (f < cfg.f_search_low_hz || f > cfg.f_search_high_hz) continue;
        in_band += s.power[k];
        if (s.power[k] > best_power) {
            best_power = s.power[k];
            best_freq = f;
        }
    }
    if (best_power < 0.0) throw Error(ErrorCode::NoSpectralPeak, "search band holds no bins");
    if (!(total > 0.0) || in_band < 1e-12 * total)
        throw Error(ErrorCode::NoSpectralPeak, "no periodic content in the search band");
    if (best_freq <= 0.0) throw Error(ErrorCode::NoSpectralPeak, "spectral peak at DC");
    return best_freq;
}

std::size_t min_peak_distance(double f_hat_hz, double sample_rate_hz, double delta_f_hz) {
    const double d = std::floor(sample_rate_hz / (f_hat_hz + delta_f_hz));
    return d < 1.0 ? 1 : static_cast<std::size_t>(d);
}

PeakSet find_prominent_peaks(std::span<const double> x, double min_prominence) {
    PeakSet out;
    const std::size_t n = x.size();
    if (n < 3) return out;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (x[i - 1] < x[i]) {
            std::size_t ahead = i + 1;
            while (ahead + 1 < n && x[ahead] == x[i]) ++ahead;
            if (x[ahead] < x[i]) {
                const std::size_t peak = (i + ahead - 1) / 2;
                const double prom = topographic_prominence(x, peak);
                if (prom >= min_prominence) {
                    out.indices.push_back(peak);
                    out.prominences.push_back(prom);
                }
                i = ahead;
                continue;
            }
        }
        ++i;
    }
    return out;
}

PeakSet enforce_min_distance(std::span<const double> x, const PeakSet& peaks,
                             std::size_t min_distance) {
    const std::size_t n = peaks.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[peaks.indices[a]] > x[peaks.indices[b]];
    });
    std::vector<bool> keep(n, true);
    for (std::size_t rank = 0; rank < n; ++rank) {
        const std::size_t p = order[rank];
        if (!keep[p]) continue;
        const std::size_t at = peaks.indices[p];
        for (std::size_t q = p; q-- > 0 && at - peaks.indices[q] < min_distance;) keep[q] = false;
        for (std::size_t q = p + 1; q < n && peaks.indices[q] - at < min_distance; ++q) keep[q] = false;
    }
    return subset(peaks, keep);
}

PeakSet enforce_min_strength(std::span<const double> x, const PeakSet& peaks, double min_strength) {
    if (peaks.size() == 0) return peaks;
    std::vector<double> values;
    values.reserve(peaks.size());
    for (std::size_t idx : peaks.indices) values.push_back(x[idx]);
    const double threshold = min_strength * conventional_median(values);
    std::vector<bool> keep(peaks.size());
    for (std::size_t i = 0; i < peaks.size(); ++i) keep[i] = !(values[i] < threshold);
    return subset(peaks, keep);
}

PeakSet detect_peaks(std::span<const double> window, double f_hat_hz, double sample_rate_hz,
                     const ExtractionConfig& cfg) {
    if (!(f_hat_hz > 0.0)) throw Error(ErrorCode::InvalidConfig, "f_hat must be > 0");
    PeakSet peaks = find_prominent_peaks(window, cfg.minpro);
    peaks = enforce_min_distance(window, peaks,
                                 min_peak_distance(f_hat_hz, sample_rate_hz, cfg.delta_f_hz));
    peaks = enforce_min_strength(window, peaks, cfg.minstr);
    if (peaks.size() == 0) throw Error(ErrorCode::NoPeaks, "no peak passed all three filters");
    return peaks;
}

std::vector<std::vector<double>> extract_patterns(std::span<const double> window,
                                                  const PeakSet& peaks, double f_hat_hz,
                                                  double sample_rate_hz,
                                                  const ExtractionConfig& cfg) {
    std::vector<std::vector<double>> out;
    if (peaks.size() < 2) return out;
    const double nominal = sample_rate_hz / f_hat_hz;
    const double shortest = cfg.pattern_len_tol_low * nominal;
    const double longest = cfg.pattern_len_tol_high * nominal;
    for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
        const std::size_t begin = peaks.indices[i];
        const std::size_t end = peaks.indices[i + 1];
        const auto len = static_cast<double>(end - begin);
        if (len < shortest || len > longest) continue;
        out.emplace_back(window.begin() + static_cast<std::ptrdiff_t>(begin),
                         window.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

std::vector<double> resample_linear(std::span<const double> x, std::size_t length) {
    if (x.empty() || length == 0) return {};
    std::vector<double> out(length);
    if (length == 1 || x.size() == 1) {
        std::fill(out.begin(), out.end(), x[0]);
        return out;
    }
    const auto span_in = static_cast<double>(x.size() - 1);
    const auto span_out = static_cast<double>(length - 1);
    for (std::size_t i = 0; i < length; ++i) {
        const double pos = static_cast<double>(i) * span_in / span_out;
        const auto idx = static_cast<std::size_t>(pos);
        if (idx >= x.size() - 1) {
            out[i] = x.back();
            continue;
        }
        const double frac = pos - static_cast<double>(idx);
        out[i] = frac == 0.0 ? x[idx] : x[idx] + frac * (x[idx + 1] - x[idx]);
    }
    return out;
}

std::vector<double> combine_median(std::span<const std::vector<double>> patterns) {
    if (patterns.empty()) throw Error(ErrorCode::Empty, "no patterns to combine");
    std::vector<std::size_t> lengths;
    lengths.reserve(patterns.size());
    for (const auto& p : patterns) {
        if (p.empty()) throw Error(ErrorCode::Empty, "empty pattern");
        lengths.push_back(p.size());
    }
    const std::size_t target = lower_median(lengths);

    std::vector<std::vector<double>> aligned;
    aligned.reserve(patterns.size());
    for (const auto& p : patterns) aligned.push_back(resample_linear(p, target));

    std::vector<double> out(target);
    std::vector<double> column(patterns.size());
    for (std::size_t i = 0; i < target; ++i) {
        for (std::size_t p = 0; p < aligned.size(); ++p) column[p] = aligned[p][i];
        out[i] = lower_median(column);
    }
    return out;
}

VibrationSignature extract_signature(const dsp::EnvelopeSignal& signal, const ExtractionConfig& cfg) {
    cfg.validate();
    const double fs = signal.sample_rate_hz;
    WindowSelector windows(signal.values.size(), cfg.window_len_s, cfg.rng_seed);

    std::vector<std::vector<double>> patterns;
    std::vector<double> f_hats;
    std::size_t examined = 0;
    while (patterns.size() < cfg.m_patterns) {
        if (cfg.max_windows != 0 && examined >= cfg.max_windows)
            throw NonConvergenceError(patterns.size(), examined);
        const auto offset = windows.next();
        if (!offset) throw NonConvergenceError(patterns.size(), examined);
        ++examined;

        const std::span<const double> raw(signal.values.data() + *offset, cfg.window_len_s);
        try {
            const auto window = max_min_normalize(raw);
            const double f_hat = estimate_f_hat(window, fs, cfg);
            PeakSet peaks = detect_peaks(window, f_hat, fs, cfg);
            peaks.window_offset = *offset;
            auto found = extract_patterns(window, peaks, f_hat, fs, cfg);
            if (found.empty()) continue;
            f_hats.push_back(f_hat);
            for (auto& p : found) patterns.push_back(std::move(p));
        } catch (const Error& e) {
            switch (e.code()) {
                case ErrorCode::DegenerateWindow:
                case ErrorCode::NoSpectralPeak:
                case ErrorCode::NoPeaks: continue;
                default: throw;
            }
        }
    }

    VibrationSignature sig;
    sig.values = combine_median(patterns);
    sig.sample_rate_hz = signal.sample_rate_hz;
    sig.f_hat_hz = lower_median(f_hats);
    sig.patterns_used = static_cast<std::uint32_t>(patterns.size());
    sig.windows_examined = static_cast<std::uint32_t>(examined);
    return sig;
}

VibrationSignature extract_signature(const AudioRecording& rec, const ExtractionConfig& cfg) {
    return extract_signature(dsp::preprocess(rec, cfg), cfg);
}

std::size_t expected_min_windows(const VibrationSignature& sig, const ExtractionConfig& cfg) {
    double per_window = 1.0;
    if (sig.f_hat_hz > 0.0 && sig.sample_rate_hz > 0)
        per_window = std::max(1.0, cfg.window_len_s * sig.f_hat_hz / sig.sample_rate_hz - 1.0);
    return static_cast<std::size_t>(std::ceil(cfg.m_patterns / per_window));
}

NoiseVerdict noise_verdict(const VibrationSignature& sig, const ExtractionConfig& cfg,
                           const NoiseThresholds& thresholds) {
    const double ratio = static_cast<double>(sig.windows_examined) /
                         static_cast<double>(std::max<std::size_t>(1, expected_min_windows(sig, cfg)));
    if (ratio <= thresholds.quiet_ratio) return NoiseVerdict::Quiet;
    if (ratio <= thresholds.moderate_ratio) return NoiseVerdict::Moderate;
    return NoiseVerdict::Noisy;
}

std::string_view to_string(NoiseVerdict v) noexcept {
    switch (v) {
        case NoiseVerdict::Quiet: return "quiet";
        case NoiseVerdict::Moderate: return "moderate";
        case NoiseVerdict::Noisy: return "noisy";
        case NoiseVerdict::NonConvergent: return "non-convergent";
    }
    return "unknown";
}

}  // namespace vibrotag
