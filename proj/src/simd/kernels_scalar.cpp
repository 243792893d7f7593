#include "kernels_impl.hpp"

namespace tripeval::simd::detail {

double squared_l2_scalar(const double* a, const double* b, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        const double d0 = a[i] - b[i];
        const double d1 = a[i + 1] - b[i + 1];
        const double d2 = a[i + 2] - b[i + 2];
        const double d3 = a[i + 3] - b[i + 3];
        l0 += d0 * d0;
        l1 += d1 * d1;
        l2 += d2 * d2;
        l3 += d3 * d3;
    }
    double total = (l0 + l1) + (l2 + l3);
    for (std::size_t i = n4; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double squared_l2_bounded_scalar(const double* a, const double* b, std::size_t n, double bound) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t n4 = n & ~std::size_t{3};
    std::size_t i = 0;
    while (i < n4) {
        const std::size_t block_end = std::min(n4, i + kAbandonBlock);
        for (; i < block_end; i += 4) {
            const double d0 = a[i] - b[i];
            const double d1 = a[i + 1] - b[i + 1];
            const double d2 = a[i + 2] - b[i + 2];
            const double d3 = a[i + 3] - b[i + 3];
            l0 += d0 * d0;
            l1 += d1 * d1;
            l2 += d2 * d2;
            l3 += d3 * d3;
        }
        const double partial = (l0 + l1) + (l2 + l3);
        if (partial > bound) return partial;
    }
    double total = (l0 + l1) + (l2 + l3);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        l0 += a[i] * b[i];
        l1 += a[i + 1] * b[i + 1];
        l2 += a[i + 2] * b[i + 2];
        l3 += a[i + 3] * b[i + 3];
    }
    double total = (l0 + l1) + (l2 + l3);
    for (std::size_t i = n4; i < n; ++i) total += a[i] * b[i];
    return total;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace tripeval::simd::detail
