#include "vibrotag/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "vibrotag/error.hpp"
#include "vibrotag/kernels.hpp"

namespace vibrotag::dsp {

std::vector<double> first_difference(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "first difference needs >= 2 samples");
    std::vector<double> out(x.size() - 1);
    kernels::active().first_difference(x.data(), out.data(), out.size());
    return out;
}

std::vector<double> rms_envelope(std::span<const double> x, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "RMS window must be >= 1");
    if (x.size() < n)
        throw Error(ErrorCode::TooShort, "RMS envelope needs >= " + std::to_string(n) + " samples");
    std::vector<double> out(x.size() - n + 1);
    kernels::active().rms_envelope(x.data(), out.data(), out.size(), n);
    return out;
}

// ---------------------------------------------------------------------------
// Butterworth design

namespace {

void append_butterworth(std::vector<Biquad>& sections, double sample_rate_hz, double cutoff_hz,
                        std::uint32_t order, bool highpass) {
    const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
    const double k2 = k * k;
    for (std::uint32_t i = 0; i < order / 2; ++i) {
        const double inv_q = 2.0 * std::sin(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * order));
        const double norm = 1.0 / (1.0 + k * inv_q + k2);
        const double a1 = 2.0 * (k2 - 1.0) * norm;
        const double a2 = (1.0 - k * inv_q + k2) * norm;
        if (highpass)
            sections.push_back({norm, -2.0 * norm, norm, a1, a2});
        else
            sections.push_back({k2 * norm, 2.0 * k2 * norm, k2 * norm, a1, a2});
    }
    if (order % 2 == 1) {
        const double norm = 1.0 / (1.0 + k);
        const double a1 = (k - 1.0) * norm;
        if (highpass)
            sections.push_back({norm, -norm, 0.0, a1, 0.0});
        else
            sections.push_back({k * norm, k * norm, 0.0, a1, 0.0});
    }
}

struct SectionState {
    double z1 = 0.0;
    double z2 = 0.0;
};

// States that make every section sit at its steady state for a constant
// unit input.
std::vector<SectionState> steady_state(std::span<const Biquad> sections) {
    std::vector<SectionState> zi(sections.size());
    double u = 1.0;
    for (std::size_t s = 0; s < sections.size(); ++s) {
        const Biquad& q = sections[s];
        const double gain = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
        zi[s].z2 = (q.b2 - q.a2 * gain) * u;
        zi[s].z1 = (q.b1 - q.a1 * gain) * u + zi[s].z2;
        u *= gain;
    }
    return zi;
}

std::vector<double> run_cascade(std::span<const Biquad> sections, std::span<const double> x,
                                std::vector<SectionState> state) {
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t s = 0; s < sections.size(); ++s) {
        const Biquad& q = sections[s];
        double z1 = state[s].z1;
        double z2 = state[s].z2;
        for (double& v : y) {
            const double in = v;
            const double out = q.b0 * in + z1;
            z1 = q.b1 * in - q.a1 * out + z2;
            z2 = q.b2 * in - q.a2 * out;
            v = out;
        }
    }
    return y;
}

std::vector<SectionState> scaled(const std::vector<SectionState>& zi, double by) {
    std::vector<SectionState> out(zi);
    for (auto& s : out) {
        s.z1 *= by;
        s.z2 *= by;
    }
    return out;
}

}  // namespace

std::vector<Biquad> design_butterworth_bandpass(double sample_rate_hz, double low_hz,
                                                double high_hz, std::uint32_t order) {
    if (order < 1) throw Error(ErrorCode::InvalidBand, "filter order must be >= 1");
    if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < sample_rate_hz / 2.0))
        throw Error(ErrorCode::InvalidBand, "band must satisfy 0 < low < high < F_s/2");
    std::vector<Biquad> sections;
    append_butterworth(sections, sample_rate_hz, low_hz, order, true);
    append_butterworth(sections, sample_rate_hz, high_hz, order, false);
    return sections;
}

std::vector<double> sosfilt(std::span<const Biquad> sections, std::span<const double> x) {
    return run_cascade(sections, x, std::vector<SectionState>(sections.size()));
}

std::vector<double> bandpass(std::span<const double> x, double sample_rate_hz, double low_hz,
                             double high_hz, std::uint32_t order) {
    const auto sections = design_butterworth_bandpass(sample_rate_hz, low_hz, high_hz, order);
    if (x.size() < 4 * static_cast<std::size_t>(order))
        throw Error(ErrorCode::TooShort, "band-pass needs >= 4 * order samples");

    const std::size_t n = x.size();
    // one period of the low edge, so the high-pass start-up settles in the pad
    const auto pad = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::ceil(sample_rate_hz / low_hz)));

    // even reflection about both end points
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(x[n - 1 - i]);

    const auto zi = steady_state(sections);
    auto forward = run_cascade(sections, ext, scaled(zi, ext.front()));
    std::reverse(forward.begin(), forward.end());
    auto backward = run_cascade(sections, forward, scaled(zi, forward.front()));
    std::reverse(backward.begin(), backward.end());
    return {backward.begin() + static_cast<std::ptrdiff_t>(pad),
            backward.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

EnvelopeSignal preprocess(const AudioRecording& rec, const ExtractionConfig& cfg) {
    cfg.validate();
    if (rec.size() < static_cast<std::size_t>(cfg.n_rms) + 1)
        throw Error(ErrorCode::TooShort, "recording shorter than n_rms + 1 samples");

    EnvelopeSignal out;
    out.sample_rate_hz = rec.sample_rate_hz();
    out.provenance = {cfg.step_order, cfg.n_rms, cfg.band_low_hz, cfg.band_high_hz,
                      cfg.filter_order, true};

    std::vector<double> shaped;
    if (cfg.step_order == StepOrder::DifferenceThenEnvelope) {
        shaped = rms_envelope(first_difference(rec.samples()), cfg.n_rms);
    } else {
        shaped = first_difference(rms_envelope(rec.samples(), cfg.n_rms));
    }
    out.values = bandpass(shaped, rec.sample_rate_hz(), cfg.band_low_hz, cfg.band_high_hz,
                          cfg.filter_order);
    return out;
}

// ---------------------------------------------------------------------------
// Periodogram

namespace {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

// FFTW's planner is not re-entrant; execution with the new-array interface
// is. Plans are created once per length and kept for the process lifetime.
fftw_plan plan_for(int n) {
    static std::mutex mutex;
    static std::map<int, fftw_plan> plans;
    std::lock_guard lock(mutex);
    if (auto it = plans.find(n); it != plans.end()) return it->second;
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(static_cast<std::size_t>(n)));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)));
    fftw_plan p = fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE);
    plans.emplace(n, p);
    return p;
}

}  // namespace

double Spectrum::total_power() const noexcept {
    if (window_len == 0 || power.empty()) return 0.0;
    double two_sided = power[0];
    const bool has_nyquist = window_len % 2 == 0;
    const std::size_t last = power.size() - 1;
    for (std::size_t k = 1; k < power.size(); ++k)
        two_sided += (has_nyquist && k == last) ? power[k] : 2.0 * power[k];
    return two_sided / static_cast<double>(window_len);
}

Spectrum periodogram(std::span<const double> x, double sample_rate_hz) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "periodogram needs >= 2 samples");
    const auto n = static_cast<int>(x.size());
    const std::size_t bins = x.size() / 2 + 1;

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());

    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(x.size()));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(bins));
    for (std::size_t i = 0; i < x.size(); ++i) in.get()[i] = x[i] - mean;
    fftw_execute_dft_r2c(plan_for(n), in.get(), out.get());

    Spectrum s;
    s.window_len = x.size();
    s.resolution_hz = sample_rate_hz / static_cast<double>(x.size());
    s.freqs_hz.resize(bins);
    s.power.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double re = out.get()[k][0];
        const double im = out.get()[k][1];
        s.freqs_hz[k] = static_cast<double>(k) * sample_rate_hz / static_cast<double>(x.size());
        s.power[k] = (re * re + im * im) / static_cast<double>(x.size());
    }
    return s;
}

}  // namespace vibrotag::dsp
