#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vibrotag/error.hpp"
#include "vibrotag/rng.hpp"
#include "vibrotag/signal_io.hpp"

using namespace vibrotag;

namespace {

// Hand-assembled RIFF image, independent of encode_wav.
struct WavBuilder {
    std::uint16_t format = 1;
    std::uint16_t channels = 1;
    std::uint32_t rate = 44100;
    std::uint16_t bits = 16;
    std::vector<std::int16_t> samples;
    bool extra_chunk = false;

    static void u16(std::vector<std::uint8_t>& b, std::uint32_t v) {
        b.push_back(static_cast<std::uint8_t>(v & 0xff));
        b.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    }
    static void u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
        u16(b, v & 0xffff);
        u16(b, v >> 16);
    }
    static void tag(std::vector<std::uint8_t>& b, const char* t) { b.insert(b.end(), t, t + 4); }

    std::vector<std::uint8_t> bytes() const {
        std::vector<std::uint8_t> body;
        tag(body, "WAVE");
        tag(body, "fmt ");
        u32(body, 16);
        u16(body, format);
        u16(body, channels);
        u32(body, rate);
        u32(body, rate * channels * bits / 8);
        u16(body, static_cast<std::uint32_t>(channels * bits / 8));
        u16(body, bits);
        if (extra_chunk) {
            tag(body, "LIST");
            u32(body, 3);
            body.insert(body.end(), {'a', 'b', 'c', 0});  // odd length plus pad byte
        }
        tag(body, "data");
        u32(body, static_cast<std::uint32_t>(samples.size() * 2));
        for (auto s : samples) u16(body, static_cast<std::uint16_t>(s));
        std::vector<std::uint8_t> out;
        tag(out, "RIFF");
        u32(out, static_cast<std::uint32_t>(body.size()));
        out.insert(out.end(), body.begin(), body.end());
        return out;
    }
};

ErrorCode code_of(const std::vector<std::uint8_t>& bytes) {
    try {
        decode_wav(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("decode succeeded");
    return ErrorCode::Empty;
}

}  // namespace

TEST_CASE("decode maps PCM16 codes by 1/32768") {
    WavBuilder w;
    w.samples = {0, 1, -1, 16384, -32768, 32767};
    const auto rec = decode_wav(w.bytes());
    REQUIRE(rec.size() == 6);
    CHECK(rec.sample_rate_hz() == 44100);
    const double expect[] = {0.0, 1.0 / 32768, -1.0 / 32768, 0.5, -1.0, 32767.0 / 32768};
    for (std::size_t i = 0; i < 6; ++i) CHECK(rec.samples()[i] == expect[i]);
}

TEST_CASE("decode skips unknown chunks including the pad byte") {
    WavBuilder w;
    w.samples = {100, -200};
    w.extra_chunk = true;
    const auto rec = decode_wav(w.bytes());
    CHECK(rec.samples()[0] == 100.0 / 32768);
    CHECK(rec.samples()[1] == -200.0 / 32768);
}

TEST_CASE("decode rejects what it cannot represent") {
    WavBuilder w;
    w.samples = {1, 2, 3};

    SUBCASE("not RIFF") {
        auto b = w.bytes();
        b[0] = 'X';
        CHECK(code_of(b) == ErrorCode::NotWav);
    }
    SUBCASE("stereo") {
        w.channels = 2;
        w.samples.push_back(4);
        CHECK(code_of(w.bytes()) == ErrorCode::UnsupportedEncoding);
    }
    SUBCASE("8-bit") {
        w.bits = 8;
        CHECK(code_of(w.bytes()) == ErrorCode::UnsupportedEncoding);
    }
    SUBCASE("float") {
        w.format = 3;
        CHECK(code_of(w.bytes()) == ErrorCode::UnsupportedEncoding);
    }
    SUBCASE("truncated data") {
        auto b = w.bytes();
        b.resize(b.size() - 3);
        CHECK(code_of(b) == ErrorCode::TruncatedData);
    }
    SUBCASE("no data chunk") {
        auto b = w.bytes();
        b.resize(36);
        CHECK(code_of(b) == ErrorCode::TruncatedData);
    }
}

TEST_CASE("encode then decode stays within one quantisation step") {
    Rng rng(42);
    std::vector<double> x(5000);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    x[0] = 1.0;
    x[1] = -1.0;
    const AudioRecording rec(x, 48000);
    const auto back = decode_wav(encode_wav(rec));
    CHECK(back.sample_rate_hz() == 48000);
    REQUIRE(back.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back.samples()[i] - x[i]) <= 1.0 / 32768);
    // A decoded recording is a fixed point of the round trip.
    CHECK(encode_wav(back) == encode_wav(decode_wav(encode_wav(back))));
}

TEST_CASE("canonical header is 44 bytes") {
    const AudioRecording rec({0.25, -0.25}, 44100);
    const auto b = encode_wav(rec);
    CHECK(b.size() == 48);
    CHECK(std::string(b.begin(), b.begin() + 4) == "RIFF");
    CHECK(std::string(b.begin() + 36, b.begin() + 40) == "data");
}

TEST_CASE("quantize_pcm16 rounds and clamps") {
    CHECK(quantize_pcm16(0.0) == 0);
    CHECK(quantize_pcm16(1.0) == 32767);
    CHECK(quantize_pcm16(-1.0) == -32768);
    CHECK(quantize_pcm16(0.5 / 32768) == 0);  // ties to even
    CHECK(quantize_pcm16(1.5 / 32768) == 2);
}

TEST_CASE("recording validation") {
    CHECK_THROWS_AS(AudioRecording({}, 44100), Error);
    CHECK_THROWS_AS(AudioRecording({0.0}, 0), Error);
    CHECK_THROWS_AS(AudioRecording({1.5}, 44100), Error);
    const AudioRecording rec(std::vector<double>(44100), 44100);
    CHECK(rec.duration_seconds() == 1.0);
}

TEST_CASE("file round trip keeps the stem as source label") {
    const auto path = std::filesystem::temp_directory_path() / "vibrotag_io_test.wav";
    save_wav(AudioRecording({0.5, -0.5, 0.0}, 22050), path);
    const auto rec = load_wav(path);
    CHECK(rec.source_label() == "vibrotag_io_test");
    CHECK(rec.samples()[0] == 0.5);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_wav(path), Error);
}
