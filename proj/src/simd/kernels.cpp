#include "tripeval/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "tripeval/error.hpp"

namespace tripeval::simd {
namespace {

constexpr KernelTable kScalar{Isa::Scalar, detail::squared_l2_scalar,
                              detail::squared_l2_bounded_scalar, detail::dot_scalar,
                              detail::axpy_scalar};

#if defined(TRIPEVAL_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, detail::squared_l2_avx2, detail::squared_l2_bounded_avx2,
                            detail::dot_avx2, detail::axpy_avx2};
#endif

#if defined(TRIPEVAL_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon, detail::squared_l2_neon, detail::squared_l2_bounded_neon,
                            detail::dot_neon, detail::axpy_neon};
#endif

Isa best_supported() {
    if (isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (isa_supported(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

Isa initial_isa() {
    if (const char* env = std::getenv("TRIPEVAL_SIMD"); env != nullptr && *env != '\0') {
        const Isa requested = parse_isa(env);
        if (!isa_supported(requested)) {
            throw UsageError(std::string("TRIPEVAL_SIMD=") + env + " is not supported on this CPU");
        }
        return requested;
    }
    return best_supported();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

Isa parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2") return Isa::Avx2;
    if (name == "neon") return Isa::Neon;
    throw UsageError("unknown instruction set '" + std::string(name) + "'");
}

const KernelTable& scalar_kernels() { return kScalar; }

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(TRIPEVAL_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(TRIPEVAL_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_supported(isa)) {
        throw UsageError("instruction set '" + std::string(isa_name(isa)) + "' is not available");
    }
    switch (isa) {
#if defined(TRIPEVAL_HAVE_AVX2)
        case Isa::Avx2: return kAvx2;
#endif
#if defined(TRIPEVAL_HAVE_NEON)
        case Isa::Neon: return kNeon;
#endif
        default: return kScalar;
    }
}

const KernelTable& active_kernels() {
    const KernelTable* table = g_active.load(std::memory_order_acquire);
    if (table == nullptr) {
        table = &kernels_for(initial_isa());
        const KernelTable* expected = nullptr;
        if (!g_active.compare_exchange_strong(expected, table)) table = expected;
    }
    return *table;
}

void set_active_isa(Isa isa) { g_active.store(&kernels_for(isa), std::memory_order_release); }

}  // namespace tripeval::simd
