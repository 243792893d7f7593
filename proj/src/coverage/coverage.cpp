#include "tripeval/coverage.hpp"

#include <numeric>

#include "tripeval/error.hpp"
#include "tripeval/neighbors.hpp"

namespace tripeval {

double coverage(const EncodedMatrix& real, const EncodedMatrix& synth, const CoverageConfig& cfg) {
    require_same_encoding(real, synth, "coverage");
    if (cfg.k == 0 || cfg.k >= real.rows()) {
        throw UsageError("coverage: k must satisfy 1 <= k < " + std::to_string(real.rows()));
    }
    if (synth.empty()) throw UsageError("coverage: synthetic set is empty");

    const auto radii = neighbors::kth_other_distances(real, cfg.k);
    const auto covered = neighbors::within_radius(real, radii, synth);
    const std::size_t hits = std::accumulate(covered.begin(), covered.end(), std::size_t{0});
    return static_cast<double>(hits) / static_cast<double>(real.rows());
}

}  // namespace tripeval
