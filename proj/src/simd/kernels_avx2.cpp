// Compiled with -mavx2. Only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace tripeval::simd::detail {
namespace {

// (l0 + l1) + (l2 + l3), matching the scalar reference.
inline double combine_lanes(__m256d sum) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, sum);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

double squared_l2_avx2(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        sum = _mm256_add_pd(sum, _mm256_mul_pd(diff, diff));
    }
    double total = combine_lanes(sum);
    for (std::size_t i = n4; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double squared_l2_bounded_avx2(const double* a, const double* b, std::size_t n, double bound) {
    const std::size_t n4 = n & ~std::size_t{3};
    __m256d sum = _mm256_setzero_pd();
    std::size_t i = 0;
    while (i < n4) {
        const std::size_t block_end = std::min(n4, i + kAbandonBlock);
        for (; i < block_end; i += 4) {
            const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
            sum = _mm256_add_pd(sum, _mm256_mul_pd(diff, diff));
        }
        const double partial = combine_lanes(sum);
        if (partial > bound) return partial;
    }
    double total = combine_lanes(sum);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        sum = _mm256_add_pd(sum, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double total = combine_lanes(sum);
    for (std::size_t i = n4; i < n; ++i) total += a[i] * b[i];
    return total;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    const __m256d scale = _mm256_set1_pd(alpha);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d prod = _mm256_mul_pd(scale, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (std::size_t i = n4; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace tripeval::simd::detail
