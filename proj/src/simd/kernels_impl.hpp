#pragma once

#include <algorithm>
#include <cstddef>

namespace tripeval::simd::detail {

// Elements processed between early-abandon checks. Multiple of 4.
inline constexpr std::size_t kAbandonBlock = 16;

double squared_l2_scalar(const double* a, const double* b, std::size_t n);
double squared_l2_bounded_scalar(const double* a, const double* b, std::size_t n, double bound);
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);

#if defined(TRIPEVAL_HAVE_AVX2)
double squared_l2_avx2(const double* a, const double* b, std::size_t n);
double squared_l2_bounded_avx2(const double* a, const double* b, std::size_t n, double bound);
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
#endif

#if defined(TRIPEVAL_HAVE_NEON)
double squared_l2_neon(const double* a, const double* b, std::size_t n);
double squared_l2_bounded_neon(const double* a, const double* b, std::size_t n, double bound);
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
#endif

}  // namespace tripeval::simd::detail
