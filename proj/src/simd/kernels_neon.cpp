#include <arm_neon.h>

#include "kernels_impl.hpp"

// Two float64x2 registers hold lanes (l0, l1) and (l2, l3).
namespace tripeval::simd::detail {
namespace {

inline double combine_lanes(float64x2_t lo, float64x2_t hi) {
    return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
           (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

}  // namespace

double squared_l2_neon(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        lo = vaddq_f64(lo, vmulq_f64(d0, d0));
        hi = vaddq_f64(hi, vmulq_f64(d1, d1));
    }
    double total = combine_lanes(lo, hi);
    for (std::size_t i = n4; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double squared_l2_bounded_neon(const double* a, const double* b, std::size_t n, double bound) {
    const std::size_t n4 = n & ~std::size_t{3};
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    std::size_t i = 0;
    while (i < n4) {
        const std::size_t block_end = std::min(n4, i + kAbandonBlock);
        for (; i < block_end; i += 4) {
            const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
            const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
            lo = vaddq_f64(lo, vmulq_f64(d0, d0));
            hi = vaddq_f64(hi, vmulq_f64(d1, d1));
        }
        const double partial = combine_lanes(lo, hi);
        if (partial > bound) return partial;
    }
    double total = combine_lanes(lo, hi);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double total = combine_lanes(lo, hi);
    for (std::size_t i = n4; i < n; ++i) total += a[i] * b[i];
    return total;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const std::size_t n2 = n & ~std::size_t{1};
    const float64x2_t scale = vdupq_n_f64(alpha);
    for (std::size_t i = 0; i < n2; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(scale, vld1q_f64(x + i))));
    }
    for (std::size_t i = n2; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace tripeval::simd::detail
