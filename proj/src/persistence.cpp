// Binary layout of database (.vdb) and signature (.vsig) files. All integers
// and IEEE-754 doubles are little-endian; see docs/file-formats.md.
#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include "vibrotag/classifier.hpp"
#include "vibrotag/error.hpp"

namespace vibrotag {

namespace {

constexpr char kDatabaseMagic[4] = {'V', 'S', 'I', 'G'};
constexpr char kSignatureMagic[4] = {'V', 'S', 'G', 'N'};

class Writer {
public:
    void magic(const char (&m)[4]) { bytes_.insert(bytes_.end(), m, m + 4); }
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void text(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes_.insert(bytes_.end(), s.begin(), s.end());
    }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    void put(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

    bool magic(const char (&m)[4]) {
        need(4);
        const bool ok = std::equal(m, m + 4, b_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                   [](char c, std::uint8_t u) { return static_cast<std::uint8_t>(c) == u; });
        pos_ += 4;
        return ok;
    }
    std::uint8_t u8() {
        need(1);
        return b_[pos_++];
    }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string text() {
        const std::uint32_t len = u32();
        need(len);
        std::string s(b_.begin() + static_cast<std::ptrdiff_t>(pos_),
                      b_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
        pos_ += len;
        return s;
    }
    void need(std::size_t n) const {
        if (b_.size() - pos_ < n) throw Error(ErrorCode::BadFormat, "unexpected end of file");
    }
    bool at_end() const noexcept { return pos_ == b_.size(); }

private:
    std::uint64_t get(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
        return v;
    }
    std::span<const std::uint8_t> b_;
    std::size_t pos_ = 0;
};

void write_config(Writer& w, const ExtractionConfig& c) {
    w.u32(c.n_rms);
    w.u32(c.window_len_s);
    w.u32(c.m_patterns);
    w.f64(c.minpro);
    w.f64(c.delta_f_hz);
    w.f64(c.minstr);
    w.f64(c.band_low_hz);
    w.f64(c.band_high_hz);
    w.u32(c.filter_order);
    w.f64(c.f_search_low_hz);
    w.f64(c.f_search_high_hz);
    w.f64(c.pattern_len_tol_low);
    w.f64(c.pattern_len_tol_high);
    w.u64(c.rng_seed);
    w.u32(c.max_windows);
    w.u8(static_cast<std::uint8_t>(c.step_order));
}

ExtractionConfig read_config(Reader& r) {
    ExtractionConfig c;
    c.n_rms = r.u32();
    c.window_len_s = r.u32();
    c.m_patterns = r.u32();
    c.minpro = r.f64();
    c.delta_f_hz = r.f64();
    c.minstr = r.f64();
    c.band_low_hz = r.f64();
    c.band_high_hz = r.f64();
    c.filter_order = r.u32();
    c.f_search_low_hz = r.f64();
    c.f_search_high_hz = r.f64();
    c.pattern_len_tol_low = r.f64();
    c.pattern_len_tol_high = r.f64();
    c.rng_seed = r.u64();
    c.max_windows = r.u32();
    const std::uint8_t order = r.u8();
    if (order > 1) throw Error(ErrorCode::BadFormat, "unknown step order flag");
    c.step_order = static_cast<StepOrder>(order);
    return c;
}

void write_entry(Writer& w, const std::string& label, const VibrationSignature& s) {
    w.text(label);
    w.u32(s.sample_rate_hz);
    w.f64(s.f_hat_hz);
    w.u32(s.patterns_used);
    w.u32(s.windows_examined);
    w.u32(static_cast<std::uint32_t>(s.values.size()));
    for (double v : s.values) w.f64(v);
}

VibrationSignature read_entry(Reader& r) {
    VibrationSignature s;
    s.label = r.text();
    s.sample_rate_hz = r.u32();
    s.f_hat_hz = r.f64();
    s.patterns_used = r.u32();
    s.windows_examined = r.u32();
    const std::uint32_t count = r.u32();
    r.need(static_cast<std::size_t>(count) * 8);
    s.values.resize(count);
    for (auto& v : s.values) v = r.f64();
    return s;
}

void check_header(Reader& r, const char (&magic)[4], const char* what) {
    if (!r.magic(magic)) throw Error(ErrorCode::BadFormat, std::string("not a ") + what + " file");
    const std::uint32_t version = r.u32();
    if (version != kDatabaseVersion)
        throw Error(ErrorCode::VersionMismatch, std::string(what) + " version " + std::to_string(version) +
                                                    ", expected " + std::to_string(kDatabaseVersion));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

}  // namespace

std::vector<std::uint8_t> serialize_database(const SignatureDatabase& db) {
    Writer w;
    w.magic(kDatabaseMagic);
    w.u32(db.version);
    write_config(w, db.config);
    w.u32(static_cast<std::uint32_t>(db.entries.size()));
    for (const auto& e : db.entries) write_entry(w, e.label, e.signature);
    return w.take();
}

SignatureDatabase deserialize_database(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    check_header(r, kDatabaseMagic, "database");
    SignatureDatabase db;
    db.config = read_config(r);
    const std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        VibrationSignature sig = read_entry(r);
        if (sig.label.empty()) throw Error(ErrorCode::BadFormat, "entry with empty label");
        std::string label = sig.label;
        db.entries.push_back({std::move(label), std::move(sig)});
    }
    if (!r.at_end()) throw Error(ErrorCode::BadFormat, "trailing bytes after last entry");
    for (const auto& e : db.entries)
        if (e.signature.sample_rate_hz != db.entries.front().signature.sample_rate_hz)
            throw Error(ErrorCode::MixedSampleRates, "database mixes sample rates");
    return db;
}

void save_db(const SignatureDatabase& db, const std::filesystem::path& path) {
    write_file(path, serialize_database(db));
}

SignatureDatabase load_db(const std::filesystem::path& path) { return deserialize_database(read_file(path)); }

std::vector<std::uint8_t> serialize_signature(const VibrationSignature& sig) {
    Writer w;
    w.magic(kSignatureMagic);
    w.u32(kDatabaseVersion);
    write_entry(w, sig.label, sig);
    return w.take();
}

VibrationSignature deserialize_signature(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    check_header(r, kSignatureMagic, "signature");
    VibrationSignature sig = read_entry(r);
    if (!r.at_end()) throw Error(ErrorCode::BadFormat, "trailing bytes after signature");
    return sig;
}

void save_signature(const VibrationSignature& sig, const std::filesystem::path& path) {
    write_file(path, serialize_signature(sig));
}

VibrationSignature load_signature(const std::filesystem::path& path) {
    return deserialize_signature(read_file(path));
}

}  // namespace vibrotag
