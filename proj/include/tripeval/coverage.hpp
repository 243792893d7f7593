#pragma once

#include "tripeval/dataset.hpp"

namespace tripeval {

struct CoverageConfig {
    std::size_t k = 5;
};

// Fraction of real rows whose k-NN ball (radius = distance to the k-th
// nearest other real row) contains at least one synthetic row. A synthetic
// row exactly on the boundary counts as inside.
//
// Requires 1 <= k < real.rows(), a non-empty synthetic set and a shared
// encoder.
double coverage(const EncodedMatrix& real, const EncodedMatrix& synth, const CoverageConfig& cfg = {});

}  // namespace tripeval
