#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tripeval/dataset.hpp"

// Exact nearest-neighbour queries under the L2 metric on encoded rows.
//
// The scans use the runtime-selected SIMD kernel with early abandoning of
// candidates whose partial squared distance already exceeds the current
// bound, and split query rows across threads. Abandoning is exact (partial
// sums never exceed the full sum) and every variant rounds like the scalar
// kernel, so results equal a naive double loop bit for bit.
namespace tripeval::neighbors {

// L2 distance with the active kernel: sqrt of the squared sum.
double distance(std::span<const double> a, std::span<const double> b);

// For each query row, the distance to its nearest reference row.
std::vector<double> nearest_distances(const EncodedMatrix& queries, const EncodedMatrix& reference);

// For each row, the distance to its k-th nearest OTHER row of the same set.
// The row itself is skipped by index; exact duplicates count at distance 0.
// Requires 1 <= k < points.rows().
std::vector<double> kth_other_distances(const EncodedMatrix& points, std::size_t k);

// k = 1 case of kth_other_distances.
std::vector<double> nearest_other_distances(const EncodedMatrix& points);

// For each query row i, 1 if some candidate c has distance(i, c) <= radii[i].
std::vector<std::uint8_t> within_radius(const EncodedMatrix& queries, std::span<const double> radii,
                                        const EncodedMatrix& candidates);

}  // namespace tripeval::neighbors
