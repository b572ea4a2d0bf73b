#pragma once

#include <cstddef>
#include <utility>

// Per-backend entry points; dispatch.cpp assembles them into tables.

namespace vibrotag::kernels {

#define VIBROTAG_KERNEL_DECLS                                                              \
    void first_difference(const double* x, double* out, std::size_t n_out);               \
    void rms_envelope(const double* x, double* out, std::size_t n_out, std::size_t w);    \
    std::pair<double, double> min_max(const double* x, std::size_t n);                     \
    void normalize(const double* x, double* out, std::size_t n, double lo, double range); \
    void dtw_row_abs(double a, const double* b, const double* prev, double* cur,          \
                     std::size_t m, double* scratch);                                     \
    void dtw_row_sq(double a, const double* b, const double* prev, double* cur,           \
                    std::size_t m, double* scratch);

namespace scalar {
VIBROTAG_KERNEL_DECLS
}
namespace avx2 {
VIBROTAG_KERNEL_DECLS
}
namespace neon {
VIBROTAG_KERNEL_DECLS
}

#undef VIBROTAG_KERNEL_DECLS

}  // namespace vibrotag::kernels
