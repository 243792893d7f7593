#include <algorithm>
#include <cmath>
#include <limits>

#include "tripeval/error.hpp"
#include "tripeval/ot.hpp"
#include "tripeval/simd/kernels.hpp"

namespace tripeval {
namespace {

// Scalings beyond exp(+-kAbsorb) are folded into the dual potentials.
constexpr double kAbsorb = 50.0;
constexpr std::size_t kCheckEvery = 10;
// Over-relaxed scaling updates u <- u^(1-w) (a / Kv)^w share the fixed point
// of plain Sinkhorn and need far fewer sweeps at small epsilon.
constexpr double kOverRelax = 1.5;

// Gibbs kernel K_ij = exp((f_i + g_j - C_ij) / eps) with scalings u, v;
// the current plan is u_i K_ij v_j.
class ScalingState {
public:
    ScalingState(const CostMatrix& costs)
        : c_(costs), n_(costs.rows()), m_(costs.cols()),
          a_(1.0 / static_cast<double>(n_)), b_(1.0 / static_cast<double>(m_)),
          f_(n_, 0.0), g_(m_, 0.0), u_(n_, 1.0), v_(m_, 1.0), kernel_(n_ * m_), ktu_(m_) {}

    void set_epsilon(double eps) {
        absorb();
        eps_ = eps;
        // Fresh row potentials via the c-transform keep every kernel row's
        // largest entry at exp(0).
        for (std::size_t i = 0; i < n_; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < m_; ++j) best = std::min(best, c_(i, j) - g_[j]);
            f_[i] = best;
        }
        rebuild_kernel();
    }

    // One u-update followed by one v-update.
    void iterate() {
        const auto& k = simd::active_kernels();
        for (std::size_t i = 0; i < n_; ++i) {
            const double s = k.dot(row(i), v_.data(), m_);
            if (s > 0.0 && std::isfinite(s)) {
                u_[i] = relax(u_[i], a_ / s);
            } else {
                log_update_row(i);
            }
        }
        std::fill(ktu_.begin(), ktu_.end(), 0.0);
        for (std::size_t i = 0; i < n_; ++i) k.axpy(u_[i], row(i), ktu_.data(), m_);
        bool degenerate = false;
        for (std::size_t j = 0; j < m_; ++j) {
            if (ktu_[j] > 0.0 && std::isfinite(ktu_[j])) {
                v_[j] = relax(v_[j], b_ / ktu_[j]);
            } else {
                degenerate = true;
            }
        }
        if (degenerate) {
            // A column vanished under the current potentials; recentre them
            // on a column c-transform and retry from unit scalings.
            absorb();
            for (std::size_t j = 0; j < m_; ++j) {
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < n_; ++i) best = std::min(best, c_(i, j) - f_[i]);
                g_[j] = best;
            }
            rebuild_kernel();
            return;
        }
        if (needs_absorb()) {
            absorb();
            rebuild_kernel();
        }
    }

    // L1 distance of the plan's row and column sums from the uniform
    // marginals.
    double marginal_violation() {
        const auto& k = simd::active_kernels();
        double err = 0.0;
        std::fill(ktu_.begin(), ktu_.end(), 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            err += std::fabs(u_[i] * k.dot(row(i), v_.data(), m_) - a_);
            k.axpy(u_[i], row(i), ktu_.data(), m_);
        }
        for (std::size_t j = 0; j < m_; ++j) err += std::fabs(v_[j] * ktu_[j] - b_);
        return err;
    }

    double plan_cost() const {
        double total = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double* kr = row(i);
            const double* cr = c_.row_ptr(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < m_; ++j) acc += kr[j] * v_[j] * cr[j];
            total += u_[i] * acc;
        }
        return total;
    }

private:
    static double relax(double old, double target) { return old * std::pow(target / old, kOverRelax); }

    const double* row(std::size_t i) const { return kernel_.data() + i * m_; }

    bool needs_absorb() const {
        auto out_of_range = [](double s) { return std::fabs(std::log(s)) > kAbsorb; };
        return std::any_of(u_.begin(), u_.end(), out_of_range) ||
               std::any_of(v_.begin(), v_.end(), out_of_range);
    }

    void absorb() {
        if (eps_ == 0.0) return;
        for (std::size_t i = 0; i < n_; ++i) {
            f_[i] += eps_ * std::log(u_[i]);
            u_[i] = 1.0;
        }
        for (std::size_t j = 0; j < m_; ++j) {
            g_[j] += eps_ * std::log(v_[j]);
            v_[j] = 1.0;
        }
    }

    void rebuild_kernel() {
        for (std::size_t i = 0; i < n_; ++i) rebuild_row(i);
    }

    void rebuild_row(std::size_t i) {
        double* kr = kernel_.data() + i * m_;
        const double* cr = c_.row_ptr(i);
        for (std::size_t j = 0; j < m_; ++j) kr[j] = std::exp((f_[i] + g_[j] - cr[j]) / eps_);
    }

    // Log-domain row update for a row whose kernel underflowed.
    void log_update_row(std::size_t i) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m_; ++j) {
            top = std::max(top, (g_[j] + eps_ * std::log(v_[j]) - c_(i, j)) / eps_);
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < m_; ++j) {
            sum += std::exp((g_[j] + eps_ * std::log(v_[j]) - c_(i, j)) / eps_ - top);
        }
        f_[i] = eps_ * (std::log(a_) - top - std::log(sum));
        u_[i] = 1.0;
        rebuild_row(i);
    }

    const CostMatrix& c_;
    std::size_t n_, m_;
    double a_, b_;
    double eps_ = 0.0;
    std::vector<double> f_, g_, u_, v_, kernel_, ktu_;
};

}  // namespace

SinkhornResult sinkhorn(const CostMatrix& costs, double epsilon, std::size_t max_iters, double tolerance) {
    if (costs.rows() == 0 || costs.cols() == 0) throw UsageError("sinkhorn: empty cost matrix");
    if (!(epsilon > 0.0)) throw UsageError("sinkhorn: epsilon must be positive");

    ScalingState state(costs);
    SinkhornResult result;

    // Anneal from the cost scale down to the target epsilon; intermediate
    // stages only need to be roughly converged.
    std::vector<double> schedule;
    for (double eps = std::max(costs.max(), epsilon); eps > epsilon; eps *= 0.5) schedule.push_back(eps);
    schedule.push_back(epsilon);

    for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
        const bool last = stage + 1 == schedule.size();
        const double stage_tol = last ? tolerance : std::max(tolerance, 1e-3);
        state.set_epsilon(schedule[stage]);
        while (result.iterations < max_iters) {
            state.iterate();
            ++result.iterations;
            if (result.iterations % kCheckEvery == 0) {
                result.marginal_violation = state.marginal_violation();
                if (result.marginal_violation <= stage_tol) break;
            }
        }
        if (result.iterations >= max_iters) break;
    }
    result.marginal_violation = state.marginal_violation();
    result.converged = result.marginal_violation <= tolerance;
    result.cost = state.plan_cost();
    return result;
}

}  // namespace tripeval
