#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

// Data-parallel inner loops behind a runtime-selected table. Every variant
// performs the same IEEE operations per element in the same order as the
// scalar reference, so all backends are bit-identical.

namespace vibrotag::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct Table {
    Backend backend;
    // out[i] = x[i+1] - x[i], i < n_out
    void (*first_difference)(const double* x, double* out, std::size_t n_out);
    // out[i] = sqrt((sum_{j<w} x[i+j]^2) / w), i < n_out
    void (*rms_envelope)(const double* x, double* out, std::size_t n_out, std::size_t w);
    // n >= 1
    std::pair<double, double> (*min_max)(const double* x, std::size_t n);
    // out[i] = (x[i] - lo) / range
    void (*normalize)(const double* x, double* out, std::size_t n, double lo, double range);
    // One DTW row over 1-based buffers of m+1 cells; cur[0] is set by the
    // caller. cur[j] = c(a, b[j-1]) + min(prev[j], cur[j-1], prev[j-1]).
    void (*dtw_row_abs)(double a, const double* b, const double* prev, double* cur,
                        std::size_t m, double* scratch);
    void (*dtw_row_sq)(double a, const double* b, const double* prev, double* cur,
                       std::size_t m, double* scratch);
};

const Table& scalar_table() noexcept;
/// nullptr when the variant was not compiled in.
const Table* avx2_table() noexcept;
const Table* neon_table() noexcept;

bool cpu_supports(Backend b) noexcept;

/// Selected on first use: the VIBROTAG_SIMD environment variable
/// (scalar|avx2|neon) if set and supported, else the widest supported.
const Table& active() noexcept;
Backend active_backend() noexcept;

/// Returns false (and keeps the current table) when b is unavailable.
bool set_backend(Backend b) noexcept;

std::vector<Backend> available_backends();
std::string_view to_string(Backend b) noexcept;
bool parse_backend(std::string_view name, Backend& out) noexcept;

}  // namespace vibrotag::kernels
