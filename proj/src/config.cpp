#include "vibrotag/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vibrotag/error.hpp"

namespace vibrotag {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw Error(ErrorCode::InvalidConfig, "bad value for '" + key + "': " + text);
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw Error(ErrorCode::InvalidConfig, "bad boolean for '" + key + "': " + text);
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void ExtractionConfig::validate() const {
    require(n_rms >= 1, "n_rms must be >= 1");
    require(window_len_s >= 2, "window_len_s must be >= 2");
    require(m_patterns >= 1, "m_patterns must be >= 1");
    require(minpro > 0.0 && minpro <= 1.0, "minpro must lie in (0, 1]");
    require(minstr > 0.0, "minstr must be > 0");
    require(delta_f_hz >= 0.0, "delta_f_hz must be >= 0");
    require(band_low_hz > 0.0 && band_low_hz < band_high_hz, "band edges must satisfy 0 < low < high");
    require(filter_order >= 1, "filter_order must be >= 1");
    require(f_search_low_hz >= 0.0 && f_search_low_hz < f_search_high_hz,
            "search band must satisfy 0 <= low < high");
    require(pattern_len_tol_low > 0.0 && pattern_len_tol_low < 1.0 && pattern_len_tol_high > 1.0,
            "pattern length tolerance must satisfy 0 < low < 1 < high");
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidConfig,
                        "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.empty())
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": empty key");
        out[std::move(key)] = trim(std::string_view(body).substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    return parse_key_values(in);
}

std::map<std::string, std::string> apply_config_keys(ExtractionConfig& cfg,
                                                     const std::map<std::string, std::string>& kv) {
    std::map<std::string, std::string> used;
    for (const auto& [key, value] : kv) {
        bool known = true;
        if (key == "n_rms") cfg.n_rms = parse_number<std::uint32_t>(key, value);
        else if (key == "window_len_s") cfg.window_len_s = parse_number<std::uint32_t>(key, value);
        else if (key == "m_patterns") cfg.m_patterns = parse_number<std::uint32_t>(key, value);
        else if (key == "minpro") cfg.minpro = parse_number<double>(key, value);
        else if (key == "delta_f_hz") cfg.delta_f_hz = parse_number<double>(key, value);
        else if (key == "minstr") cfg.minstr = parse_number<double>(key, value);
        else if (key == "band_low_hz") cfg.band_low_hz = parse_number<double>(key, value);
        else if (key == "band_high_hz") cfg.band_high_hz = parse_number<double>(key, value);
        else if (key == "filter_order") cfg.filter_order = parse_number<std::uint32_t>(key, value);
        else if (key == "f_search_low_hz") cfg.f_search_low_hz = parse_number<double>(key, value);
        else if (key == "f_search_high_hz") cfg.f_search_high_hz = parse_number<double>(key, value);
        else if (key == "pattern_len_tol_low") cfg.pattern_len_tol_low = parse_number<double>(key, value);
        else if (key == "pattern_len_tol_high") cfg.pattern_len_tol_high = parse_number<double>(key, value);
        else if (key == "rng_seed") cfg.rng_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "max_windows") cfg.max_windows = parse_number<std::uint32_t>(key, value);
        else if (key == "envelope_first")
            cfg.step_order = parse_bool(key, value) ? StepOrder::EnvelopeThenDifference
                                                    : StepOrder::DifferenceThenEnvelope;
        else known = false;
        if (known) used[key] = value;
    }
    return used;
}

std::string to_key_values(const ExtractionConfig& cfg) {
    std::ostringstream os;
    os << "n_rms = " << cfg.n_rms << '\n'
       << "window_len_s = " << cfg.window_len_s << '\n'
       << "m_patterns = " << cfg.m_patterns << '\n'
       << "minpro = " << format_double(cfg.minpro) << '\n'
       << "delta_f_hz = " << format_double(cfg.delta_f_hz) << '\n'
       << "minstr = " << format_double(cfg.minstr) << '\n'
       << "band_low_hz = " << format_double(cfg.band_low_hz) << '\n'
       << "band_high_hz = " << format_double(cfg.band_high_hz) << '\n'
       << "filter_order = " << cfg.filter_order << '\n'
       << "f_search_low_hz = " << format_double(cfg.f_search_low_hz) << '\n'
       << "f_search_high_hz = " << format_double(cfg.f_search_high_hz) << '\n'
       << "pattern_len_tol_low = " << format_double(cfg.pattern_len_tol_low) << '\n'
       << "pattern_len_tol_high = " << format_double(cfg.pattern_len_tol_high) << '\n'
       << "rng_seed = " << cfg.rng_seed << '\n'
       << "max_windows = " << cfg.max_windows << '\n'
       << "envelope_first = "
       << (cfg.step_order == StepOrder::EnvelopeThenDifference ? "true" : "false") << '\n';
    return os.str();
}

}  // namespace vibrotag
