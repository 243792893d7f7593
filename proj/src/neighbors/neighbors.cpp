#include "tripeval/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tripeval/error.hpp"
#include "tripeval/parallel.hpp"
#include "tripeval/simd/kernels.hpp"

namespace tripeval::neighbors {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Keeps the k smallest values seen so far in ascending order.
class SmallestK {
public:
    explicit SmallestK(std::size_t k) : k_(k) { best_.reserve(k); }

    double bound() const { return best_.size() < k_ ? kInf : best_.back(); }

    void offer(double value) {
        if (best_.size() == k_) {
            if (!(value < best_.back())) return;
            best_.pop_back();
        }
        best_.insert(std::upper_bound(best_.begin(), best_.end(), value), value);
    }

    double kth() const { return best_.back(); }

private:
    std::size_t k_;
    std::vector<double> best_;
};

}  // namespace

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw UsageError("distance: dimension mismatch");
    return std::sqrt(simd::active_kernels().squared_l2(a.data(), b.data(), a.size()));
}

std::vector<double> nearest_distances(const EncodedMatrix& queries, const EncodedMatrix& reference) {
    require_same_encoding(queries, reference, "nearest_distances");
    if (reference.empty()) throw UsageError("nearest_distances: empty reference set");

    const auto& kernels = simd::active_kernels();
    const std::size_t dim = queries.cols();
    std::vector<double> out(queries.rows());
    parallel_for(queries.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* q = queries.row_ptr(i);
            double best = kInf;
            for (std::size_t j = 0; j < reference.rows() && best > 0.0; ++j) {
                const double d2 = kernels.squared_l2_bounded(q, reference.row_ptr(j), dim, best);
                if (d2 < best) best = d2;
            }
            out[i] = std::sqrt(best);
        }
    });
    return out;
}

std::vector<double> kth_other_distances(const EncodedMatrix& points, std::size_t k) {
    if (k == 0 || k >= points.rows()) {
        throw UsageError("k must satisfy 1 <= k < " + std::to_string(points.rows()) + ", got " +
                         std::to_string(k));
    }
    const auto& kernels = simd::active_kernels();
    const std::size_t dim = points.cols();
    std::vector<double> out(points.rows());
    parallel_for(points.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* p = points.row_ptr(i);
            SmallestK best(k);
            for (std::size_t j = 0; j < points.rows(); ++j) {
                if (j == i) continue;
                const double bound = best.bound();
                const double d2 = kernels.squared_l2_bounded(p, points.row_ptr(j), dim, bound);
                if (d2 < bound) best.offer(d2);
            }
            out[i] = std::sqrt(best.kth());
        }
    });
    return out;
}

std::vector<double> nearest_other_distances(const EncodedMatrix& points) {
    return kth_other_distances(points, 1);
}

std::vector<std::uint8_t> within_radius(const EncodedMatrix& queries, std::span<const double> radii,
                                        const EncodedMatrix& candidates) {
    require_same_encoding(queries, candidates, "within_radius");
    if (radii.size() != queries.rows()) throw UsageError("within_radius: one radius per query row required");

    const auto& kernels = simd::active_kernels();
    const std::size_t dim = queries.cols();
    std::vector<std::uint8_t> out(queries.rows(), 0);
    parallel_for(queries.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double radius = radii[i];
            // Any squared sum whose root can round to <= radius stays below
            // this bound, so abandoning above it never drops a hit.
            const double bound = radius * radius * (1.0 + 1e-12);
            const double* q = queries.row_ptr(i);
            for (std::size_t j = 0; j < candidates.rows(); ++j) {
                const double d2 = kernels.squared_l2_bounded(q, candidates.row_ptr(j), dim, bound);
                if (d2 <= bound && std::sqrt(d2) <= radius) {
                    out[i] = 1;
                    break;
                }
            }
        }
    });
    return out;
}

}  // namespace tripeval::neighbors
