#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vibrotag {

inline constexpr std::uint32_t kDefaultSampleRateHz = 44100;

/// Immutable mono capture. Samples are normalised to [-1, 1].
class AudioRecording {
public:
    /// Throws Error(InvalidConfig) if samples are empty, out of range, or
    /// the rate is zero.
    AudioRecording(std::vector<double> samples, std::uint32_t sample_rate_hz,
                   std::optional<std::string> source_label = std::nullopt);

    std::span<const double> samples() const noexcept { return samples_; }
    std::uint32_t sample_rate_hz() const noexcept { return sample_rate_hz_; }
    const std::optional<std::string>& source_label() const noexcept { return source_label_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double duration_seconds() const noexcept {
        return static_cast<double>(samples_.size()) / sample_rate_hz_;
    }

private:
    std::vector<double> samples_;
    std::uint32_t sample_rate_hz_;
    std::optional<std::string> source_label_;
};

// PCM16 mono RIFF/WAVE only. Samples map to [-1, 1) by dividing by 32768.
AudioRecording load_wav(const std::filesystem::path& path);
AudioRecording decode_wav(std::span<const std::uint8_t> bytes);

void save_wav(const AudioRecording& rec, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_wav(const AudioRecording& rec);

/// Round-to-nearest PCM16 quantisation used by the encoder, clamped to
/// [-32768, 32767].
std::int16_t quantize_pcm16(double sample) noexcept;

}  // namespace vibrotag
