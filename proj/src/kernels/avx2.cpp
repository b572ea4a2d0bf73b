// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace vibrotag::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double hmin(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
}

inline double hmax(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

// Second half of a DTW row: fold in the left neighbour, which carries a
// serial dependency. cur[j] already holds c + min(up, diag).
inline void dtw_left_pass(const double* cost, double* cur, std::size_t m) {
    for (std::size_t j = 1; j <= m; ++j) cur[j] = std::min(cur[j], cost[j - 1] + cur[j - 1]);
}

}  // namespace

void first_difference(const double* x, double* out, std::size_t n_out) {
    std::size_t i = 0;
    for (; i + 4 <= n_out; i += 4) {
        const __m256d lo = _mm256_loadu_pd(x + i);
        const __m256d hi = _mm256_loadu_pd(x + i + 1);
        _mm256_storeu_pd(out + i, _mm256_sub_pd(hi, lo));
    }
    for (; i < n_out; ++i) out[i] = x[i + 1] - x[i];
}

void rms_envelope(const double* x, double* out, std::size_t n_out, std::size_t w) {
    const auto width = static_cast<double>(w);
    const __m256d vwidth = _mm256_set1_pd(width);
    std::size_t i = 0;
    for (; i + 4 <= n_out; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < w; ++j) {
            const __m256d v = _mm256_loadu_pd(x + i + j);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
        }
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_div_pd(acc, vwidth)));
    }
    for (; i < n_out; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w; ++j) acc = acc + x[i + j] * x[i + j];
        out[i] = std::sqrt(acc / width);
    }
}

std::pair<double, double> min_max(const double* x, std::size_t n) {
    double lo = x[0];
    double hi = x[0];
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vlo = _mm256_loadu_pd(x);
        __m256d vhi = vlo;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(x + i);
            vlo = _mm256_min_pd(vlo, v);
            vhi = _mm256_max_pd(vhi, v);
        }
        lo = hmin(vlo);
        hi = hmax(vhi);
    }
    for (; i < n; ++i) {
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
    }
    return {lo, hi};
}

void normalize(const double* x, double* out, std::size_t n, double lo, double range) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vrange = _mm256_set1_pd(range);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vlo), vrange);
        _mm256_storeu_pd(out + i, _mm256_add_pd(v, zero));
    }
    for (; i < n; ++i) out[i] = (x[i] - lo) / range + 0.0;
}

void dtw_row_abs(double a, const double* b, const double* prev, double* cur, std::size_t m,
                 double* scratch) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        const __m256d c = abs_pd(_mm256_sub_pd(va, _mm256_loadu_pd(b + j)));
        const __m256d up = _mm256_loadu_pd(prev + j + 1);
        const __m256d diag = _mm256_loadu_pd(prev + j);
        _mm256_storeu_pd(scratch + j, c);
        _mm256_storeu_pd(cur + j + 1, _mm256_add_pd(c, _mm256_min_pd(up, diag)));
    }
    for (; j < m; ++j) {
        const double c = std::fabs(a - b[j]);
        scratch[j] = c;
        cur[j + 1] = c + std::min(prev[j + 1], prev[j]);
    }
    dtw_left_pass(scratch, cur, m);
}

void dtw_row_sq(double a, const double* b, const double* prev, double* cur, std::size_t m,
                double* scratch) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        const __m256d d = _mm256_sub_pd(va, _mm256_loadu_pd(b + j));
        const __m256d c = _mm256_mul_pd(d, d);
        const __m256d up = _mm256_loadu_pd(prev + j + 1);
        const __m256d diag = _mm256_loadu_pd(prev + j);
        _mm256_storeu_pd(scratch + j, c);
        _mm256_storeu_pd(cur + j + 1, _mm256_add_pd(c, _mm256_min_pd(up, diag)));
    }
    for (; j < m; ++j) {
        const double d = a - b[j];
        const double c = d * d;
        scratch[j] = c;
        cur[j + 1] = c + std::min(prev[j + 1], prev[j]);
    }
    dtw_left_pass(scratch, cur, m);
}

}  // namespace vibrotag::kernels::avx2
