#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace vibrotag {

enum class StepOrder : std::uint8_t {
    DifferenceThenEnvelope = 0,
    EnvelopeThenDifference = 1,
};

/// Every tunable constant of the extraction pipeline. Defaults are the
/// values the system was originally tuned with on 44.1 kHz recordings.
struct ExtractionConfig {
    std::uint32_t n_rms = 15;           ///< RMS envelope window, samples
    std::uint32_t window_len_s = 4800;  ///< analysis window length, samples
    std::uint32_t m_patterns = 100;     ///< patterns required per signature
    double minpro = 0.65;               ///< min prominence on [0,1] data
    double delta_f_hz = 6.5;            ///< repetition-frequency slack
    double minstr = 0.5;                ///< min peak value / median peak value
    double band_low_hz = 20.0;
    double band_high_hz = 5500.0;
    std::uint32_t filter_order = 4;
    double f_search_low_hz = 60.0;
    double f_search_high_hz = 400.0;
    double pattern_len_tol_low = 0.5;   ///< valid pattern length, x nominal
    double pattern_len_tol_high = 1.5;
    std::uint64_t rng_seed = 0;
    std::uint32_t max_windows = 0;      ///< 0 = no cap
    StepOrder step_order = StepOrder::DifferenceThenEnvelope;

    /// Throws Error(InvalidConfig) naming the first violated constraint.
    void validate() const;

    friend bool operator==(const ExtractionConfig&, const ExtractionConfig&) = default;
};

/// Plain `key = value` lines; `#` starts a comment. Unknown keys are kept
/// in the returned map so callers layering several schemas can share a file.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

/// Applies every recognised ExtractionConfig key from `kv` onto `cfg`;
/// returns the keys that were consumed.
std::map<std::string, std::string> apply_config_keys(ExtractionConfig& cfg,
                                                     const std::map<std::string, std::string>& kv);

std::string to_key_values(const ExtractionConfig& cfg);

}  // namespace vibrotag
