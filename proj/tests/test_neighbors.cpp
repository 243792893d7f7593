#include <gtest/gtest.h>

#include "fixture.hpp"
#include "oracles.hpp"
#include "tripeval/error.hpp"
#include "tripeval/neighbors.hpp"
#include "tripeval/parallel.hpp"
#include "tripeval/rng.hpp"

using namespace tripeval;

namespace {

std::vector<simd::Isa> supported() {
    std::vector<simd::Isa> out;
    for (auto isa : {simd::Isa::Scalar, simd::Isa::Avx2, simd::Isa::Neon}) {
        if (simd::isa_supported(isa)) out.push_back(isa);
    }
    return out;
}

}  // namespace

TEST(Neighbors, NearestMatchesBruteForceExactly) {
    Rng rng(1);
    for (auto isa : supported()) {
        simd::set_active_isa(isa);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t d = 1 + rng.below(40);
            const auto q = fixture::random_matrix(1 + rng.below(120), d, rng.next_u64(), trial % 3 == 0 ? 0.25 : 0.0);
            const auto r = fixture::random_matrix(1 + rng.below(120), d, rng.next_u64(), trial % 3 == 0 ? 0.25 : 0.0);
            EXPECT_EQ(neighbors::nearest_distances(q, r), oracle::nearest(q, r)) << "trial " << trial;
        }
    }
}

TEST(Neighbors, KthOtherMatchesBruteForceExactly) {
    Rng rng(2);
    for (auto isa : supported()) {
        simd::set_active_isa(isa);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t n = 2 + rng.below(100);
            const auto x = fixture::random_matrix(n, 1 + rng.below(20), rng.next_u64(), trial % 2 ? 0.5 : 0.0);
            const std::size_t k = 1 + rng.below(std::min<std::size_t>(n - 1, 7));
            EXPECT_EQ(neighbors::kth_other_distances(x, k), oracle::kth_other(x, k));
        }
    }
}

TEST(Neighbors, DuplicatesCountAtZero) {
    const auto x = EncodedMatrix::from_rows({{0.0, 0.0}, {0.0, 0.0}, {3.0, 4.0}});
    const auto d = neighbors::nearest_other_distances(x);
    EXPECT_EQ(d[0], 0.0);
    EXPECT_EQ(d[1], 0.0);
    EXPECT_EQ(d[2], 5.0);
    EXPECT_THROW(neighbors::kth_other_distances(x, 3), UsageError);
}

TEST(Neighbors, WithinRadiusIncludesBoundary) {
    const auto q = EncodedMatrix::from_rows({{0.0, 0.0}, {10.0, 10.0}});
    const auto c = EncodedMatrix::from_rows({{3.0, 4.0}});
    const std::vector<double> radii{5.0, 1.0};
    const auto hit = neighbors::within_radius(q, radii, c);
    EXPECT_EQ(hit[0], 1);
    EXPECT_EQ(hit[1], 0);
}

TEST(Neighbors, IndependentOfThreadCount) {
    const auto q = fixture::random_matrix(700, 9, 5);
    const auto r = fixture::random_matrix(300, 9, 6);
    set_thread_count(1);
    const auto one = neighbors::nearest_distances(q, r);
    set_thread_count(7);
    EXPECT_EQ(neighbors::nearest_distances(q, r), one);
    set_thread_count(0);
}

TEST(Neighbors, ShapeMismatchIsRejected) {
    const auto a = fixture::random_matrix(5, 3, 1);
    const auto b = fixture::random_matrix(5, 4, 1);
    EXPECT_THROW(neighbors::nearest_distances(a, b), UsageError);
}
