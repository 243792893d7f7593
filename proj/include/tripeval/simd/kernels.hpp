#pragma once

#include <cstddef>
#include <string_view>

namespace tripeval::simd {

// Instruction sets with a kernel implementation.
enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

// Parses "scalar", "avx2", "neon"; throws UsageError otherwise.
Isa parse_isa(std::string_view name);

// Reduction order shared by every variant, so that all of them round
// identically:
//   - elements [0, 4*floor(n/4)) accumulate into four lanes, element i
//     into lane i % 4, each step doing lane += a*b (no fused multiply-add);
//   - the lanes combine as (l0 + l1) + (l2 + l3);
//   - the remaining n % 4 elements are added to that total in order.
// A vector variant that keeps this order returns bit-identical results to
// the scalar reference on every input.
struct KernelTable {
    Isa isa;

    // sum_i (a[i] - b[i])^2
    double (*squared_l2)(const double* a, const double* b, std::size_t n);

    // Same as squared_l2 when the result is <= bound. Otherwise returns some
    // value > bound (a partial sum), possibly without reading all of a and b.
    // Partial sums never exceed the final sum, so abandoning is exact.
    double (*squared_l2_bounded)(const double* a, const double* b, std::size_t n, double bound);

    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

// Scalar reference implementation. Always available.
const KernelTable& scalar_kernels();

bool isa_supported(Isa isa);

// Table for a specific instruction set; throws UsageError if this build or
// CPU cannot run it.
const KernelTable& kernels_for(Isa isa);

// Table used by the metrics. Chosen at first use: the TRIPEVAL_SIMD
// environment variable if set, else the widest ISA the CPU supports.
const KernelTable& active_kernels();

// Overrides the runtime choice (tests and the CLI --simd flag).
void set_active_isa(Isa isa);

}  // namespace tripeval::simd
