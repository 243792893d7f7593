// Exact transportation solver for uniform marginals.
//
// Masses are scaled to integers: every row point supplies m/g units and
// every column point demands n/g units (g = gcd(n, m)). Flow is pushed
// along shortest augmenting paths in the residual bipartite graph with
// Johnson potentials, which keep reduced costs non-negative so each path is
// found by Dijkstra. With n == m this is the Hungarian method.
#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>

#include "tripeval/error.hpp"
#include "tripeval/ot.hpp"

namespace tripeval {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class TransportSolver {
public:
    explicit TransportSolver(const CostMatrix& costs)
        : c_(costs), n_(costs.rows()), m_(costs.cols()) {
        const std::uint64_t g = std::gcd<std::uint64_t>(n_, m_);
        supply_.assign(n_, static_cast<std::int64_t>(m_ / g));
        demand_.assign(m_, static_cast<std::int64_t>(n_ / g));
        total_ = static_cast<std::int64_t>(n_ / g * m_);
        flow_.assign(n_ * m_, 0);
        senders_.resize(m_);
        pi_row_.assign(n_, 0.0);
        pi_col_.assign(m_, 0.0);
    }

    double solve() {
        std::int64_t shipped = 0;
        while (shipped < total_) shipped += augment();

        double cost = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < m_; ++j) {
                const std::int64_t f = flow_[i * m_ + j];
                if (f != 0) cost += static_cast<double>(f) * c_(i, j);
            }
        }
        return cost / static_cast<double>(total_);
    }

private:
    // Node ids: rows [0, n), columns [n, n + m), sink n + m.
    std::int64_t augment() {
        const std::size_t sink = n_ + m_;
        dist_.assign(n_ + m_ + 1, kInf);
        done_.assign(n_ + m_ + 1, 0);
        pred_.assign(n_ + m_ + 1, kNone);

        using Entry = std::pair<double, std::size_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
        for (std::size_t i = 0; i < n_; ++i) {
            if (supply_[i] > 0) {
                dist_[i] = std::max(0.0, -pi_row_[i]);
                heap.emplace(dist_[i], i);
            }
        }

        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (done_[u]) continue;
            done_[u] = 1;
            if (u == sink) break;
            if (u < n_) {
                const double* row = c_.row_ptr(u);
                const double pi_u = pi_row_[u];
                for (std::size_t j = 0; j < m_; ++j) {
                    const std::size_t v = n_ + j;
                    if (done_[v]) continue;
                    const double nd = d + std::max(0.0, row[j] + pi_u - pi_col_[j]);
                    if (nd < dist_[v]) {
                        dist_[v] = nd;
                        pred_[v] = u;
                        heap.emplace(nd, v);
                    }
                }
            } else {
                const std::size_t j = u - n_;
                for (std::size_t i : senders_[j]) {
                    if (done_[i]) continue;
                    const double nd = d + std::max(0.0, pi_col_[j] - pi_row_[i] - c_(i, j));
                    if (nd < dist_[i]) {
                        dist_[i] = nd;
                        pred_[i] = u;
                        heap.emplace(nd, i);
                    }
                }
                if (demand_[j] > 0) {
                    const double nd = d + std::max(0.0, pi_col_[j] - pi_sink_);
                    if (nd < dist_[sink]) {
                        dist_[sink] = nd;
                        pred_[sink] = u;
                        heap.emplace(nd, sink);
                    }
                }
            }
        }
        if (!done_[sink]) throw NumericError("transport solver found no augmenting path");

        // Bottleneck along the path sink <- column <- row <- column ... <- row.
        const std::size_t last_col = pred_[sink] - n_;
        std::int64_t delta = demand_[last_col];
        std::size_t v = pred_[sink];
        while (true) {
            const std::size_t i = pred_[v];  // row feeding column v
            if (pred_[i] == kNone) {
                delta = std::min(delta, supply_[i]);
                break;
            }
            const std::size_t prev_col = pred_[i] - n_;  // flow i -> prev_col is cancelled
            delta = std::min(delta, flow_[i * m_ + prev_col]);
            v = pred_[i];
        }

        v = pred_[sink];
        demand_[last_col] -= delta;
        while (true) {
            const std::size_t j = v - n_;
            const std::size_t i = pred_[v];
            add_flow(i, j, delta);
            if (pred_[i] == kNone) {
                supply_[i] -= delta;
                break;
            }
            add_flow(i, pred_[i] - n_, -delta);
            v = pred_[i];
        }

        const double reach = dist_[sink];
        for (std::size_t i = 0; i < n_; ++i) pi_row_[i] += std::min(dist_[i], reach);
        for (std::size_t j = 0; j < m_; ++j) pi_col_[j] += std::min(dist_[n_ + j], reach);
        pi_sink_ += reach;
        return delta;
    }

    void add_flow(std::size_t i, std::size_t j, std::int64_t delta) {
        std::int64_t& f = flow_[i * m_ + j];
        const bool was_zero = f == 0;
        f += delta;
        auto& list = senders_[j];
        if (was_zero && f != 0) {
            list.push_back(i);
        } else if (!was_zero && f == 0) {
            auto it = std::find(list.begin(), list.end(), i);
            *it = list.back();
            list.pop_back();
        }
    }

    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    const CostMatrix& c_;
    std::size_t n_, m_;
    std::vector<std::int64_t> supply_, demand_, flow_;
    std::int64_t total_ = 0;
    std::vector<std::vector<std::size_t>> senders_;  // rows with positive flow into each column
    std::vector<double> pi_row_, pi_col_;
    double pi_sink_ = 0.0;
    std::vector<double> dist_;
    std::vector<std::uint8_t> done_;
    std::vector<std::size_t> pred_;
};

}  // namespace

double transport_exact(const CostMatrix& costs) {
    if (costs.rows() == 0 || costs.cols() == 0) throw UsageError("transport_exact: empty cost matrix");
    return TransportSolver(costs).solve();
}

}  // namespace tripeval
