#include "vibrotag/error.hpp"

namespace vibrotag {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotWav: return "NotWav";
        case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
        case ErrorCode::TruncatedData: return "TruncatedData";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::InvalidBand: return "InvalidBand";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::DegenerateWindow: return "DegenerateWindow";
        case ErrorCode::NoSpectralPeak: return "NoSpectralPeak";
        case ErrorCode::NoPeaks: return "NoPeaks";
        case ErrorCode::Empty: return "Empty";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::MixedSampleRates: return "MixedSampleRates";
        case ErrorCode::EmptyDatabase: return "EmptyDatabase";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::BadFoldCount: return "BadFoldCount";
        case ErrorCode::BadFormat: return "BadFormat";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::BadModel: return "BadModel";
    }
    return "Unknown";
}

NonConvergenceError::NonConvergenceError(std::size_t patterns_found, std::size_t windows_examined)
    : Error(ErrorCode::NonConvergence,
            "found " + std::to_string(patterns_found) + " patterns in " +
                std::to_string(windows_examined) + " windows"),
      patterns_found_(patterns_found),
      windows_examined_(windows_examined) {}

}  // namespace vibrotag
