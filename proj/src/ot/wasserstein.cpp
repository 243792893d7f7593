#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tripeval/error.hpp"
#include "tripeval/ot.hpp"
#include "tripeval/parallel.hpp"
#include "tripeval/rng.hpp"
#include "tripeval/simd/kernels.hpp"

namespace tripeval {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> costs)
    : rows_(rows), cols_(cols), costs_(std::move(costs)) {
    if (costs_.size() != rows_ * cols_) throw UsageError("cost matrix size mismatch");
}

CostMatrix CostMatrix::l2(const EncodedMatrix& a, const EncodedMatrix& b) {
    require_same_encoding(a, b, "cost matrix");
    std::vector<double> costs(a.rows() * b.rows());
    const auto& k = simd::active_kernels();
    parallel_for(a.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < b.rows(); ++j) {
                costs[i * b.rows() + j] = std::sqrt(k.squared_l2(a.row_ptr(i), b.row_ptr(j), a.cols()));
            }
        }
    }, 16);
    return CostMatrix(a.rows(), b.rows(), std::move(costs));
}

double CostMatrix::mean() const {
    if (costs_.empty()) return 0.0;
    return std::accumulate(costs_.begin(), costs_.end(), 0.0) / static_cast<double>(costs_.size());
}

double CostMatrix::max() const {
    return costs_.empty() ? 0.0 : *std::max_element(costs_.begin(), costs_.end());
}

std::string_view to_string(OtSolver solver) {
    return solver == OtSolver::Exact ? "exact" : "sinkhorn";
}

std::string_view to_string(OtPath path) { return path == OtPath::Exact ? "exact" : "sinkhorn"; }

OtSolver parse_ot_solver(std::string_view text) {
    if (text == "exact") return OtSolver::Exact;
    if (text == "sinkhorn") return OtSolver::Sinkhorn;
    throw UsageError("unknown OT solver '" + std::string(text) + "'");
}

void OtConfig::validate() const {
    if (!(sinkhorn_epsilon_fraction > 0.0)) throw UsageError("sinkhorn_epsilon_fraction must be > 0");
    if (exact_cutoff < 2 || subsample_cap < 2) throw UsageError("exact_cutoff and subsample_cap must be >= 2");
    if (sinkhorn_max_iters == 0) throw UsageError("sinkhorn_max_iters must be >= 1");
    if (!(sinkhorn_tolerance > 0.0)) throw UsageError("sinkhorn_tolerance must be > 0");
}

OtResult wasserstein(const EncodedMatrix& a, const EncodedMatrix& b, const OtConfig& cfg) {
    cfg.validate();
    require_same_encoding(a, b, "wasserstein");
    if (a.empty() || b.empty()) throw UsageError("wasserstein: both inputs must be non-empty");

    OtResult result;
    auto cap = [&](const EncodedMatrix& m, std::string_view label) {
        if (m.rows() <= cfg.subsample_cap) return m;
        result.subsampled = true;
        Rng rng(derive_seed(cfg.seed, label));
        auto rows = sample_without_replacement(m.rows(), cfg.subsample_cap, rng);
        std::sort(rows.begin(), rows.end());
        return m.select_rows(rows);
    };
    const EncodedMatrix sa = cap(a, "ot-subsample-a");
    const EncodedMatrix sb = cap(b, "ot-subsample-b");
    result.rows_a = sa.rows();
    result.rows_b = sb.rows();

    const CostMatrix costs = CostMatrix::l2(sa, sb);
    const bool exact = cfg.solver == OtSolver::Exact && std::max(sa.rows(), sb.rows()) <= cfg.exact_cutoff;
    if (exact) {
        result.path = OtPath::Exact;
        result.distance = transport_exact(costs);
        return result;
    }

    result.path = OtPath::Sinkhorn;
    const double mean_cost = costs.mean();
    if (mean_cost == 0.0) {
        result.distance = 0.0;  // every pair coincides
        return result;
    }
    result.epsilon = cfg.sinkhorn_epsilon_fraction * mean_cost;
    const auto sk = sinkhorn(costs, result.epsilon, cfg.sinkhorn_max_iters, cfg.sinkhorn_tolerance);
    result.iterations = sk.iterations;
    result.marginal_violation = sk.marginal_violation;
    if (!sk.converged) {
        std::ostringstream msg;
        msg << "Sinkhorn did not converge in " << sk.iterations << " iterations (marginal violation "
            << sk.marginal_violation << ", tolerance " << cfg.sinkhorn_tolerance << ")";
        throw NumericError(msg.str());
    }
    result.distance = sk.cost;
    return result;
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw UsageError("wasserstein_1d: samples must have equal length");
    if (a.empty()) throw UsageError("wasserstein_1d: empty samples");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) sum += std::fabs(sa[i] - sb[i]);
    return sum / static_cast<double>(sa.size());
}

double wasserstein_1d_empirical(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw UsageError("wasserstein_1d_empirical: empty samples");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());

    // Sweep the merged support; between consecutive points both CDFs are flat.
    std::size_t ia = 0, ib = 0;
    double prev = std::min(sa.front(), sb.front());
    double total = 0.0;
    while (ia < sa.size() || ib < sb.size()) {
        const double next = ib == sb.size() || (ia < sa.size() && sa[ia] <= sb[ib]) ? sa[ia] : sb[ib];
        const double fa = static_cast<double>(ia) / na;
        const double fb = static_cast<double>(ib) / nb;
        total += std::fabs(fa - fb) * (next - prev);
        while (ia < sa.size() && sa[ia] == next) ++ia;
        while (ib < sb.size() && sb[ib] == next) ++ib;
        prev = next;
    }
    return total;
}

}  // namespace tripeval
