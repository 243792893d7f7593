#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tripeval/dataset.hpp"

namespace tripeval {

// Dense n x m matrix of ground costs (L2 distances between encoded rows).
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> costs);

    // Pairwise L2 distances with the active SIMD kernel.
    static CostMatrix l2(const EncodedMatrix& a, const EncodedMatrix& b);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return costs_[i * cols_ + j]; }
    const double* row_ptr(std::size_t i) const { return costs_.data() + i * cols_; }
    const std::vector<double>& data() const { return costs_; }

    double mean() const;
    double max() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> costs_;
};

enum class OtSolver {
    Exact,     // exact transport when max(n_a, n_b) <= exact_cutoff, else Sinkhorn
    Sinkhorn,  // always Sinkhorn
};

enum class OtPath { Exact, Sinkhorn };

std::string_view to_string(OtSolver solver);
std::string_view to_string(OtPath path);
OtSolver parse_ot_solver(std::string_view text);

struct OtConfig {
    OtSolver solver = OtSolver::Exact;
    std::size_t exact_cutoff = 1024;
    double sinkhorn_epsilon_fraction = 0.01;  // of the mean ground cost
    std::size_t sinkhorn_max_iters = 10000;
    double sinkhorn_tolerance = 1e-7;  // L1 violation of the row marginal
    std::size_t subsample_cap = 2000;
    std::uint64_t seed = 0;

    // Throws UsageError on epsilon_fraction <= 0 or caps < 2.
    void validate() const;
};

struct OtResult {
    double distance = 0.0;
    OtPath path = OtPath::Exact;
    std::size_t rows_a = 0;  // after subsampling
    std::size_t rows_b = 0;
    bool subsampled = false;
    std::size_t iterations = 0;          // Sinkhorn only
    double marginal_violation = 0.0;     // Sinkhorn only
    double epsilon = 0.0;                // Sinkhorn only
};

// Minimum-cost coupling of two uniform empirical measures (weights 1/n and
// 1/m) under `costs`, solved exactly as a transportation problem by
// successive shortest augmenting paths. Returns sum_ij pi_ij c_ij.
double transport_exact(const CostMatrix& costs);

struct SinkhornResult {
    double cost = 0.0;  // sum_ij pi_ij c_ij of the entropic plan
    std::size_t iterations = 0;
    double marginal_violation = 0.0;
    bool converged = false;
};

// Entropic transport between uniform marginals with regularization epsilon.
// Scaling iterations run in the stabilized kernel domain (dual potentials
// absorb large scalings) with epsilon annealed down to the target.
SinkhornResult sinkhorn(const CostMatrix& costs, double epsilon, std::size_t max_iters, double tolerance);

// W1 between the uniform empirical distributions of the rows of a and b
// under the L2 ground cost. Inputs above cfg.subsample_cap rows are first
// subsampled without replacement (seeded by cfg.seed). Throws NumericError
// when Sinkhorn fails to converge.
OtResult wasserstein(const EncodedMatrix& a, const EncodedMatrix& b, const OtConfig& cfg);

// Closed-form 1-D W1 for equal-size samples: mean |sort(a)_i - sort(b)_i|.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

// 1-D W1 for samples of any sizes: integral of |F_a - F_b|.
double wasserstein_1d_empirical(std::span<const double> a, std::span<const double> b);

}  // namespace tripeval
