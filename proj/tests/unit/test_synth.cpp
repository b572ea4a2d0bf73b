#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "corpus.hpp"
#include "vibrotag/classifier.hpp"
#include "vibrotag/dsp.hpp"
#include "vibrotag/error.hpp"
#include "vibrotag/synth.hpp"

using namespace vibrotag;

namespace {

synth::SurfaceModel clean(double f, std::uint64_t seed = 1) {
    synth::SurfaceModel m;
    m.label = "m";
    m.shape = synth::preset_shape(2);
    m.f_nominal_hz = f;
    m.seed = seed;
    return m;
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

// Standard deviation of N(0, 1) truncated to [-2, 2].
double truncated_unit_std() {
    const double z = 2.0;
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    const double mass = std::erf(z / std::sqrt(2.0));
    return std::sqrt(1.0 - 2.0 * z * phi / mass);
}

}  // namespace

TEST_CASE("zero jitter and noise give a strictly periodic train") {
    for (double f : {120.0, 200.0, 44100.0 / 220.0, 333.0}) {
        CAPTURE(f);
        const auto g = synth::generate(clean(f), 1.0);
        const auto period = static_cast<std::size_t>(std::lround(44100.0 / f));
        REQUIRE(g.truth.cycle_starts.size() >= 2);
        for (std::size_t i = 0; i < g.truth.cycle_starts.size(); ++i) {
            CHECK(g.truth.cycle_starts[i] == i * period);
            CHECK(g.truth.cycle_jitter_hz[i] == 0.0);
        }

        // the first difference is the modulated template
        const auto d = dsp::first_difference(g.recording.samples());
        const auto cycle = synth::render_cycle(g.truth.shape, period);
        double worst = 0.0;
        for (std::size_t t = 0; t < d.size(); ++t) {
            const double want = 0.2 * cycle[t % period] * ((t & 1u) ? -1.0 : 1.0);
            worst = std::max(worst, std::abs(d[t] - want));
        }
        CHECK(worst < 1e-12);
        CHECK(g.truth.clipped_samples == 0);
        CHECK(g.truth.transient_count == 0);
    }
}

TEST_CASE("jitter matches its truncated-normal definition") {
    auto m = clean(200.0, 5);
    m.jitter_sigma_hz = 3.0;
    const auto g = synth::generate(m, 30.0);
    const auto& len = g.truth.cycle_lengths;
    REQUIRE(len.size() > 500);

    std::vector<double> freq;
    for (std::size_t i = 0; i + 1 < len.size(); ++i) freq.push_back(44100.0 / static_cast<double>(len[i]));
    const double mean = std::accumulate(freq.begin(), freq.end(), 0.0) / static_cast<double>(freq.size());
    double var = 0.0;
    for (double v : freq) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(freq.size() - 1));
    MESSAGE("cycles " << freq.size() << ", instantaneous frequency sd " << sd);
    CHECK(std::abs(sd - 3.0) <= 0.15 * 3.0);
    CHECK(std::abs(sd - 3.0 * truncated_unit_std()) <= 0.05 * 3.0);
    CHECK(std::abs(mean - 200.0) < 0.5);

    for (double j : g.truth.cycle_jitter_hz) CHECK(std::abs(j) <= 6.0);
    for (std::size_t i = 0; i < len.size(); ++i) {
        CHECK(len[i] == static_cast<std::size_t>(std::llround(44100.0 / (200.0 + g.truth.cycle_jitter_hz[i]))));
        if (i) CHECK(g.truth.cycle_starts[i] == g.truth.cycle_starts[i - 1] + len[i - 1]);
    }
}

TEST_CASE("generation is deterministic per seed, with independent streams") {
    auto m = clean(180.0, 9);
    m.jitter_sigma_hz = 3.0;
    m.noise_sigma = 0.1;
    m.transient_rate_hz = 5.0;
    const auto a = synth::generate(m, 1.0);
    const auto b = synth::generate(m, 1.0);
    CHECK(std::ranges::equal(a.recording.samples(), b.recording.samples()));
    CHECK(a.truth.cycle_starts == b.truth.cycle_starts);

    m.seed = 10;
    CHECK_FALSE(std::ranges::equal(a.recording.samples(), synth::generate(m, 1.0).recording.samples()));

    m.seed = 9;
    m.noise_sigma = 0.0;
    m.transient_rate_hz = 0.0;
    CHECK(synth::generate(m, 1.0).truth.cycle_starts == a.truth.cycle_starts);
}

TEST_CASE("transients and clipping") {
    auto m = clean(200.0, 3);
    m.transient_rate_hz = 10.0;
    const auto g = synth::generate(m, 30.0);
    // Poisson(300): four standard deviations is about 70
    CHECK(g.truth.transient_count > 230);
    CHECK(g.truth.transient_count < 370);

    auto loud = clean(200.0, 4);
    loud.amplitude = 1.0;
    loud.noise_sigma = 1.0;
    const auto c = synth::generate(loud, 0.5);
    CHECK(c.truth.clipped_samples > 0);
    for (double v : c.recording.samples()) CHECK((v >= -1.0 && v <= 1.0));
}

TEST_CASE("invalid models") {
    auto expect_bad = [](synth::SurfaceModel m) {
        CHECK(code_of([&] { synth::generate(m, 1.0); }) == ErrorCode::BadModel);
    };
    auto m = clean(200.0);
    m.f_nominal_hz = 0.0;
    expect_bad(m);
    m = clean(200.0);
    m.jitter_sigma_hz = -1.0;
    expect_bad(m);
    m.jitter_sigma_hz = 100.0;
    expect_bad(m);
    m = clean(200.0);
    m.noise_sigma = -0.1;
    expect_bad(m);
    m = clean(200.0);
    m.shape = {0.5, 0.5, 0.5};
    expect_bad(m);
    m.shape = {1.0};
    expect_bad(m);
    m.shape = {0.0, 1.0, -0.2};
    expect_bad(m);
    m = clean(200.0);
    m.amplitude = 0.0;
    expect_bad(m);
    m = clean(200.0);
    m.transient_rate_hz = -1.0;
    expect_bad(m);
    CHECK(code_of([&] { synth::generate(clean(200.0), 0.0); }) == ErrorCode::BadModel);
    CHECK(code_of([&] { synth::generate(clean(200.0), 1.0, 0); }) == ErrorCode::BadModel);
}

TEST_CASE("corpus") {
    const auto models = fixtures::hard_pair_models();
    const auto c = synth::corpus(models, 3, 0.5, 44100, 17);
    REQUIRE(c.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(c[i].label == models[i / 3].label);
        CHECK(c[i].recording.source_label() == models[i / 3].label);
        CHECK(c[i].recording.size() == 22050);
    }
    CHECK_FALSE(std::ranges::equal(c[0].recording.samples(), c[1].recording.samples()));
    const auto again = synth::corpus(models, 3, 0.5, 44100, 17);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::ranges::equal(c[i].recording.samples(), again[i].recording.samples()));
    const auto other = synth::corpus(models, 3, 0.5, 44100, 18);
    CHECK_FALSE(std::ranges::equal(c[0].recording.samples(), other[0].recording.samples()));

    auto dup = models;
    dup[1].label = dup[0].label;
    CHECK(code_of([&] { synth::corpus(dup, 1, 0.5, 44100, 0); }) == ErrorCode::BadModel);
    CHECK(code_of([&] { synth::corpus(std::span(models.data(), 1), 1, 0.5, 44100, 0); }) == ErrorCode::BadModel);
    dup[1].label = "";
    CHECK(code_of([&] { synth::corpus(dup, 1, 0.5, 44100, 0); }) == ErrorCode::BadModel);
}

TEST_CASE("shape helpers") {
    std::set<std::vector<double>> seen;
    for (std::size_t id = 0; id < synth::kPresetCount; ++id) {
        const auto s = synth::preset_shape(id);
        CHECK(s.size() == 64);
        CHECK(seen.insert(s).second);
        CHECK(synth::render_cycle(s, s.size()) == s);
        const auto p = synth::peak_anchored(s);
        CHECK(p.front() == *std::max_element(s.begin(), s.end()));
        CHECK(std::is_permutation(p.begin(), p.end(), s.begin()));
    }
    CHECK(code_of([] { synth::preset_shape(synth::kPresetCount); }) == ErrorCode::BadModel);

    CHECK(synth::peak_anchored(std::vector<double>{1, 3, 2}) == std::vector<double>{3, 2, 1});
    CHECK(synth::render_cycle(std::vector<double>{0, 1}, 4) == std::vector<double>{0, 0.5, 1, 0.5});

    const synth::Bump bump{0.5, 0.25, 1.0};
    const auto b = synth::shape_from_bumps(std::span(&bump, 1), 8, 0.1);
    CHECK(b[4] == doctest::Approx(1.1));
    CHECK(b[0] == doctest::Approx(0.1));
    CHECK(b[3] == doctest::Approx(b[5]));
}

TEST_CASE("model_from_key_values") {
    const auto m = synth::model_from_key_values({{"label", "bed"},
                                                 {"shape_preset", "3"},
                                                 {"f_nominal_hz", "150.5"},
                                                 {"jitter_sigma_hz", "2"},
                                                 {"noise_sigma", "0.1"},
                                                 {"transient_rate_hz", "1"},
                                                 {"transient_gain", "3"},
                                                 {"transient_ms", "4"},
                                                 {"amplitude", "0.3"},
                                                 {"seed", "12345678901234"},
                                                 {"duration_s", "3"}});
    CHECK(m.label == "bed");
    CHECK(m.shape == synth::preset_shape(3));
    CHECK(m.f_nominal_hz == 150.5);
    CHECK(m.jitter_sigma_hz == 2.0);
    CHECK(m.noise_sigma == 0.1);
    CHECK(m.transient_rate_hz == 1.0);
    CHECK(m.transient_gain == 3.0);
    CHECK(m.transient_ms == 4.0);
    CHECK(m.amplitude == 0.3);
    CHECK(m.seed == 12345678901234ULL);

    const auto explicit_shape = synth::model_from_key_values({{"shape", "0, 1,0.5"}, {"shape_preset", "2"}});
    CHECK(explicit_shape.shape == std::vector<double>{0, 1, 0.5});
    CHECK(synth::model_from_key_values({}).shape == synth::preset_shape(0));

    using KV = std::map<std::string, std::string>;
    for (const KV& bad : {KV{{"colour", "red"}}, KV{{"f_nominal_hz", "fast"}}, KV{{"f_nominal_hz", "-5"}},
                          KV{{"shape", "1,,2"}}, KV{{"shape", "2,2"}}, KV{{"seed", "x"}}, KV{{"shape_preset", "99"}}})
        CHECK(code_of([&] { synth::model_from_key_values(bad); }) == ErrorCode::BadModel);
}

TEST_CASE("one template at two rates is separable") {
    const auto sigs = fixtures::signatures({fixtures::model("slow", 2, 150.0), fixtures::model("fast", 2, 250.0)}, 8, 2);
    const auto r = cross_validate(sigs, 4, 3, 0);
    MESSAGE("accuracy " << r.mean_accuracy);
    CHECK(r.mean_accuracy >= 0.9);
}
