// AArch64 Advanced SIMD variants; two doubles per register.
#include "kernels_impl.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace vibrotag::kernels::neon {

void first_difference(const double* x, double* out, std::size_t n_out) {
    std::size_t i = 0;
    for (; i + 2 <= n_out; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(x + i + 1), vld1q_f64(x + i)));
    for (; i < n_out; ++i) out[i] = x[i + 1] - x[i];
}

void rms_envelope(const double* x, double* out, std::size_t n_out, std::size_t w) {
    const auto width = static_cast<double>(w);
    const float64x2_t vwidth = vdupq_n_f64(width);
    std::size_t i = 0;
    for (; i + 2 <= n_out; i += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t j = 0; j < w; ++j) {
            const float64x2_t v = vld1q_f64(x + i + j);
            acc = vaddq_f64(acc, vmulq_f64(v, v));
        }
        vst1q_f64(out + i, vsqrtq_f64(vdivq_f64(acc, vwidth)));
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
    if (n >= 2) {
        float64x2_t vlo = vld1q_f64(x);
        float64x2_t vhi = vlo;
        for (i = 2; i + 2 <= n; i += 2) {
            const float64x2_t v = vld1q_f64(x + i);
            vlo = vminq_f64(vlo, v);
            vhi = vmaxq_f64(vhi, v);
        }
        lo = std::min(vgetq_lane_f64(vlo, 0), vgetq_lane_f64(vlo, 1));
        hi = std::max(vgetq_lane_f64(vhi, 0), vgetq_lane_f64(vhi, 1));
    }
    for (; i < n; ++i) {
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
    }
    return {lo, hi};
}

void normalize(const double* x, double* out, std::size_t n, double lo, double range) {
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t vrange = vdupq_n_f64(range);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vaddq_f64(vdivq_f64(vsubq_f64(vld1q_f64(x + i), vlo), vrange), zero));
    for (; i < n; ++i) out[i] = (x[i] - lo) / range + 0.0;
}

namespace {

template <bool Squared>
void dtw_row(double a, const double* b, const double* prev, double* cur, std::size_t m,
             double* scratch) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t j = 0;
    for (; j + 2 <= m; j += 2) {
        const float64x2_t d = vsubq_f64(va, vld1q_f64(b + j));
        const float64x2_t c = Squared ? vmulq_f64(d, d) : vabsq_f64(d);
        vst1q_f64(scratch + j, c);
        vst1q_f64(cur + j + 1, vaddq_f64(c, vminq_f64(vld1q_f64(prev + j + 1), vld1q_f64(prev + j))));
    }
    for (; j < m; ++j) {
        const double d = a - b[j];
        const double c = Squared ? d * d : std::fabs(d);
        scratch[j] = c;
        cur[j + 1] = c + std::min(prev[j + 1], prev[j]);
    }
    for (std::size_t k = 1; k <= m; ++k) cur[k] = std::min(cur[k], scratch[k - 1] + cur[k - 1]);
}

}  // namespace

void dtw_row_abs(double a, const double* b, const double* prev, double* cur, std::size_t m,
                 double* scratch) {
    dtw_row<false>(a, b, prev, cur, m, scratch);
}

void dtw_row_sq(double a, const double* b, const double* prev, double* cur, std::size_t m,
                double* scratch) {
    dtw_row<true>(a, b, prev, cur, m, scratch);
}

}  // namespace vibrotag::kernels::neon

#endif
