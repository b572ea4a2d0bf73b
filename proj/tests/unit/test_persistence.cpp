#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "vibrotag/classifier.hpp"
#include "vibrotag/error.hpp"
#include "vibrotag/rng.hpp"

using namespace vibrotag;
using Bytes = std::vector<std::uint8_t>;

namespace {

// Independent little-endian encoder for the layout check.
struct Encoder {
    Bytes b;
    void raw(const char* s, std::size_t n) { b.insert(b.end(), s, s + n); }
    void u8(std::uint8_t v) { b.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void f64(double v) {
        std::uint64_t u;
        std::memcpy(&u, &v, 8);
        u64(u);
    }
};

VibrationSignature awkward_signature(Rng& rng, std::string label, std::size_t n) {
    VibrationSignature s;
    s.label = std::move(label);
    s.values.resize(n);
    for (auto& v : s.values) v = rng.uniform(-1.0, 1.0);
    if (n > 3) {
        s.values[0] = -0.0;
        s.values[1] = std::numeric_limits<double>::denorm_min();
        s.values[2] = -std::numeric_limits<double>::min() / 3.0;
        s.values[3] = std::numeric_limits<double>::max();
    }
    s.sample_rate_hz = 44100;
    s.f_hat_hz = 44100.0 / 4800.0 * static_cast<double>(20 + rng.below(60));
    s.patterns_used = 100;
    s.windows_examined = static_cast<std::uint32_t>(5 + rng.below(20));
    return s;
}

SignatureDatabase sample_db(std::size_t entries) {
    Rng rng(61);
    SignatureDatabase db;
    db.config.rng_seed = 0xfeedfacecafebeefULL;
    db.config.max_windows = 40;
    db.config.minpro = 0.6;
    db.config.step_order = StepOrder::EnvelopeThenDifference;
    const char* labels[] = {"bed", "desk", "kitchen table", "caf\xc3\xa9"};
    for (std::size_t i = 0; i < entries; ++i) {
        auto sig = awkward_signature(rng, labels[i % 4], 150 + rng.below(200));
        db.entries.push_back({sig.label, sig});
    }
    return db;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no exception");
    return ErrorCode::Empty;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * 8) == 0;
}

}  // namespace

TEST_CASE("database round trip is bit-exact") {
    const auto db = sample_db(30);
    const auto bytes = serialize_database(db);
    const auto back = deserialize_database(bytes);
    REQUIRE(back.entries.size() == 30);
    CHECK(back.config == db.config);
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(back.entries[i].label == db.entries[i].label);
        CHECK(bits_equal(back.entries[i].signature.values, db.entries[i].signature.values));
        CHECK(back.entries[i].signature.f_hat_hz == db.entries[i].signature.f_hat_hz);
        CHECK(back.entries[i].signature.windows_examined == db.entries[i].signature.windows_examined);
    }
    CHECK(std::signbit(back.entries[0].signature.values[0]));
    CHECK(serialize_database(back) == bytes);

    const auto path = std::filesystem::temp_directory_path() / "vibrotag_test_db.vdb";
    save_db(db, path);
    CHECK(serialize_database(load_db(path)) == bytes);
    std::filesystem::remove(path);
}

TEST_CASE("signature round trip is bit-exact") {
    Rng rng(62);
    const auto sig = awkward_signature(rng, "bed", 211);
    const auto bytes = serialize_signature(sig);
    const auto back = deserialize_signature(bytes);
    CHECK(bits_equal(back.values, sig.values));
    CHECK(back.label == "bed");
    CHECK(serialize_signature(back) == bytes);

    VibrationSignature unlabeled = sig;
    unlabeled.label.clear();
    CHECK(deserialize_signature(serialize_signature(unlabeled)).label.empty());

    const auto path = std::filesystem::temp_directory_path() / "vibrotag_test_sig.vsig";
    save_signature(sig, path);
    CHECK(serialize_signature(load_signature(path)) == bytes);
    std::filesystem::remove(path);
    CHECK(code_of([&] { load_signature(path); }) == ErrorCode::IoFailure);
}

TEST_CASE("empty database round trips") {
    SignatureDatabase db;
    const auto back = deserialize_database(serialize_database(db));
    CHECK(back.entries.empty());
    CHECK(back.config == db.config);
}

TEST_CASE("byte layout matches the documented format") {
    SignatureDatabase db;
    db.config = ExtractionConfig{};
    db.config.rng_seed = 7;
    VibrationSignature s;
    s.values = {0.25, -1.5};
    s.sample_rate_hz = 48000;
    s.f_hat_hz = 200.0;
    s.patterns_used = 100;
    s.windows_examined = 6;
    s.label = "ab";
    db.entries.push_back({"ab", s});

    Encoder e;
    e.raw("VSIG", 4);
    e.u32(1);
    const auto& c = db.config;
    e.u32(c.n_rms);
    e.u32(c.window_len_s);
    e.u32(c.m_patterns);
    e.f64(c.minpro);
    e.f64(c.delta_f_hz);
    e.f64(c.minstr);
    e.f64(c.band_low_hz);
    e.f64(c.band_high_hz);
    e.u32(c.filter_order);
    e.f64(c.f_search_low_hz);
    e.f64(c.f_search_high_hz);
    e.f64(c.pattern_len_tol_low);
    e.f64(c.pattern_len_tol_high);
    e.u64(7);
    e.u32(0);
    e.u8(0);
    e.u32(1);
    e.u32(2);
    e.raw("ab", 2);
    e.u32(48000);
    e.f64(200.0);
    e.u32(100);
    e.u32(6);
    e.u32(2);
    e.f64(0.25);
    e.f64(-1.5);
    CHECK(serialize_database(db) == e.b);

    Encoder g;
    g.raw("VSGN", 4);
    g.u32(1);
    g.u32(2);
    g.raw("ab", 2);
    g.u32(48000);
    g.f64(200.0);
    g.u32(100);
    g.u32(6);
    g.u32(2);
    g.f64(0.25);
    g.f64(-1.5);
    CHECK(serialize_signature(s) == g.b);
}

TEST_CASE("every truncation is rejected") {
    const auto db_bytes = serialize_database(sample_db(3));
    for (std::size_t n = 0; n < db_bytes.size(); ++n)
        CHECK(code_of([&] { deserialize_database(std::span(db_bytes.data(), n)); }) == ErrorCode::BadFormat);

    Rng rng(63);
    const auto sig_bytes = serialize_signature(awkward_signature(rng, "x", 40));
    for (std::size_t n = 0; n < sig_bytes.size(); ++n)
        CHECK(code_of([&] { deserialize_signature(std::span(sig_bytes.data(), n)); }) == ErrorCode::BadFormat);
}

TEST_CASE("corrupt headers and trailers") {
    auto bytes = serialize_database(sample_db(2));

    auto trailing = bytes;
    trailing.push_back(0);
    CHECK(code_of([&] { deserialize_database(trailing); }) == ErrorCode::BadFormat);

    auto version = bytes;
    version[4] = 0xe7;  // 999 little-endian
    version[5] = 0x03;
    CHECK(code_of([&] { deserialize_database(version); }) == ErrorCode::VersionMismatch);

    auto magic = bytes;
    magic[0] = 'X';
    CHECK(code_of([&] { deserialize_database(magic); }) == ErrorCode::BadFormat);

    // A signature file is not a database and vice versa.
    Rng rng(64);
    const auto sig = serialize_signature(awkward_signature(rng, "x", 8));
    CHECK(code_of([&] { deserialize_database(sig); }) == ErrorCode::BadFormat);
    CHECK(code_of([&] { deserialize_signature(bytes); }) == ErrorCode::BadFormat);

    // step_order flag sits just before the entry count
    const std::size_t step_at = 4 + 4 + 3 * 4 + 5 * 8 + 4 + 4 * 8 + 8 + 4;
    auto step = bytes;
    step[step_at] = 2;
    CHECK(code_of([&] { deserialize_database(step); }) == ErrorCode::BadFormat);

    // a count that promises more entries than the file holds
    auto count = bytes;
    count[step_at + 1] = 3;
    CHECK(code_of([&] { deserialize_database(count); }) == ErrorCode::BadFormat);
}

TEST_CASE("database invariants are enforced on load") {
    SignatureDatabase db;
    VibrationSignature a;
    a.values = {1.0};
    db.entries.push_back({"", a});
    CHECK(code_of([&] { deserialize_database(serialize_database(db)); }) == ErrorCode::BadFormat);

    db.entries[0].label = "a";
    VibrationSignature b = a;
    b.sample_rate_hz = 48000;
    db.entries.push_back({"b", b});
    CHECK(code_of([&] { deserialize_database(serialize_database(db)); }) == ErrorCode::MixedSampleRates);
}
