#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vibrotag {

enum class ErrorCode {
    NotWav,
    UnsupportedEncoding,
    TruncatedData,
    IoFailure,
    TooShort,
    InvalidBand,
    InvalidConfig,
    DegenerateWindow,
    NoSpectralPeak,
    NoPeaks,
    Empty,
    NonConvergence,
    MixedSampleRates,
    EmptyDatabase,
    TooFewSamples,
    BadFoldCount,
    BadFormat,
    VersionMismatch,
    BadModel,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised when the window supply runs out before enough patterns were found.
// windows_examined is the user-facing "environment too noisy" indicator.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(std::size_t patterns_found, std::size_t windows_examined);

    std::size_t patterns_found() const noexcept { return patterns_found_; }
    std::size_t windows_examined() const noexcept { return windows_examined_; }

private:
    std::size_t patterns_found_;
    std::size_t windows_examined_;
};

}  // namespace vibrotag
