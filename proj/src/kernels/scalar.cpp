#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace vibrotag::kernels::scalar {

void first_difference(const double* x, double* out, std::size_t n_out) {
    for (std::size_t i = 0; i < n_out; ++i) out[i] = x[i + 1] - x[i];
}

void rms_envelope(const double* x, double* out, std::size_t n_out, std::size_t w) {
    const auto width = static_cast<double>(w);
    for (std::size_t i = 0; i < n_out; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w; ++j) acc = acc + x[i + j] * x[i + j];
        out[i] = std::sqrt(acc / width);
    }
}

std::pair<double, double> min_max(const double* x, std::size_t n) {
    double lo = x[0];
    double hi = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
    }
    return {lo, hi};
}

void normalize(const double* x, double* out, std::size_t n, double lo, double range) {
    // + 0.0 folds -0 to +0 so every backend emits the same bits
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - lo) / range + 0.0;
}

void dtw_row_abs(double a, const double* b, const double* prev, double* cur, std::size_t m,
                 double* /*scratch*/) {
    for (std::size_t j = 1; j <= m; ++j) {
        const double c = std::fabs(a - b[j - 1]);
        cur[j] = c + std::min(std::min(prev[j], prev[j - 1]), cur[j - 1]);
    }
}

void dtw_row_sq(double a, const double* b, const double* prev, double* cur, std::size_t m,
                double* /*scratch*/) {
    for (std::size_t j = 1; j <= m; ++j) {
        const double d = a - b[j - 1];
        const double c = d * d;
        cur[j] = c + std::min(std::min(prev[j], prev[j - 1]), cur[j - 1]);
    }
}

}  // namespace vibrotag::kernels::scalar
