#include "vibrotag/signal_io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include "vibrotag/error.hpp"

namespace vibrotag {

namespace {

constexpr double kPcm16Scale = 32768.0;
constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) |
           (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char (&tag)[5]) {
    for (std::size_t i = 0; i < 4; ++i)
        if (b[at + i] != static_cast<std::uint8_t>(tag[i])) return false;
    return true;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
    out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioRecording::AudioRecording(std::vector<double> samples, std::uint32_t sample_rate_hz,
                               std::optional<std::string> source_label)
    : samples_(std::move(samples)),
      sample_rate_hz_(sample_rate_hz),
      source_label_(std::move(source_label)) {
    if (samples_.empty()) throw Error(ErrorCode::InvalidConfig, "recording has no samples");
    if (sample_rate_hz_ == 0) throw Error(ErrorCode::InvalidConfig, "sample rate must be > 0");
    for (double s : samples_)
        if (!(s >= -1.0 && s <= 1.0))
            throw Error(ErrorCode::InvalidConfig, "sample outside [-1, 1]");
}

std::int16_t quantize_pcm16(double sample) noexcept {
    const double scaled = std::nearbyint(sample * kPcm16Scale);
    if (scaled >= 32767.0) return 32767;
    if (scaled <= -32768.0) return -32768;
    return static_cast<std::int16_t>(scaled);
}

AudioRecording decode_wav(std::span<const std::uint8_t> b) {
    if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE"))
        throw Error(ErrorCode::NotWav, "missing RIFF/WAVE header");

    bool have_fmt = false;
    std::uint32_t sample_rate = 0;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const std::uint32_t chunk_len = read_u32(b, pos + 4);
        const std::size_t body = pos + 8;
        if (tag_is(b, pos, "fmt ")) {
            if (chunk_len < 16 || body + chunk_len > b.size())
                throw Error(ErrorCode::NotWav, "malformed fmt chunk");
            std::uint16_t format = read_u16(b, body);
            if (format == kFormatExtensible && chunk_len >= 40) format = read_u16(b, body + 24);
            const std::uint16_t channels = read_u16(b, body + 2);
            sample_rate = read_u32(b, body + 4);
            const std::uint16_t bits = read_u16(b, body + 14);
            if (format != kFormatPcm)
                throw Error(ErrorCode::UnsupportedEncoding,
                            "format tag " + std::to_string(format) + " is not integer PCM");
            if (channels != 1)
                throw Error(ErrorCode::UnsupportedEncoding,
                            std::to_string(channels) + " channels; only mono is accepted");
            if (bits != 16)
                throw Error(ErrorCode::UnsupportedEncoding,
                            std::to_string(bits) + "-bit samples; only 16-bit is accepted");
            if (sample_rate == 0) throw Error(ErrorCode::NotWav, "zero sample rate");
            have_fmt = true;
        } else if (tag_is(b, pos, "data")) {
            if (!have_fmt) throw Error(ErrorCode::NotWav, "data chunk before fmt chunk");
            if (body + chunk_len > b.size())
                throw Error(ErrorCode::TruncatedData,
                            "data chunk declares " + std::to_string(chunk_len) + " bytes, " +
                                std::to_string(b.size() - body) + " present");
            if (chunk_len % 2 != 0)
                throw Error(ErrorCode::TruncatedData, "data chunk is not a whole number of samples");
            if (chunk_len == 0) throw Error(ErrorCode::TruncatedData, "data chunk is empty");
            std::vector<double> samples(chunk_len / 2);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const auto raw = static_cast<std::int16_t>(read_u16(b, body + 2 * i));
                samples[i] = raw / kPcm16Scale;
            }
            return AudioRecording(std::move(samples), sample_rate);
        }
        pos = body + chunk_len + (chunk_len & 1u);
    }
    if (!have_fmt) throw Error(ErrorCode::NotWav, "no fmt chunk");
    throw Error(ErrorCode::TruncatedData, "no data chunk");
}

AudioRecording load_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    AudioRecording rec = decode_wav(bytes);
    return AudioRecording({rec.samples().begin(), rec.samples().end()}, rec.sample_rate_hz(),
                          path.stem().string());
}

std::vector<std::uint8_t> encode_wav(const AudioRecording& rec) {
    const auto data_len = static_cast<std::uint32_t>(rec.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_len);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_len);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, kFormatPcm);
    put_u16(out, 1);
    put_u32(out, rec.sample_rate_hz());
    put_u32(out, rec.sample_rate_hz() * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    put_tag(out, "data");
    put_u32(out, data_len);
    for (double s : rec.samples()) put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(s)));
    return out;
}

void save_wav(const AudioRecording& rec, const std::filesystem::path& path) {
    const auto bytes = encode_wav(rec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

}  // namespace vibrotag
