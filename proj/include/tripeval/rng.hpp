#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tripeval {

// Seeded generator with platform-independent derived distributions.
//
// The std:: distributions are implementation-defined, which would make
// reports differ between standard libraries. Only the raw mt19937_64 stream
// (fully specified by the standard) is used; uniform, normal and index draws
// are derived from it here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Uniform on (0, 1); never returns 0.
    double uniform_open();

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    // Standard normal via Box-Muller; the spare variate is cached.
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over the bytes of s.
std::uint64_t hash_string(std::string_view s);

// Stable seed derivation: folds each component into the running state with
// mix64(state ^ component). Used for every seed the harness hands out.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t a = 0, std::uint64_t b = 0);

// k distinct indices from [0, n), drawn by a partial Fisher-Yates shuffle.
// The order of the result is the draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace tripeval
