#pragma once

// Naive reference implementations the library is checked against. They are
// written straight from the definitions, favouring obviousness over speed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "tripeval/dataset.hpp"
#include "tripeval/ot.hpp"
#include "tripeval/privacy.hpp"
#include "tripeval/simd/kernels.hpp"

namespace oracle {

// Scalar reference kernel, so that brute-force distances round exactly like
// the accelerated scans.
inline double dist(const tripeval::EncodedMatrix& a, std::size_t i, const tripeval::EncodedMatrix& b, std::size_t j) {
    return std::sqrt(tripeval::simd::scalar_kernels().squared_l2(a.row_ptr(i), b.row_ptr(j), a.cols()));
}

inline std::vector<double> nearest(const tripeval::EncodedMatrix& q, const tripeval::EncodedMatrix& r) {
    std::vector<double> out(q.rows(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < q.rows(); ++i) {
        for (std::size_t j = 0; j < r.rows(); ++j) out[i] = std::min(out[i], dist(q, i, r, j));
    }
    return out;
}

inline std::vector<double> kth_other(const tripeval::EncodedMatrix& x, std::size_t k) {
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < x.rows(); ++j) {
            if (j != i) d.push_back(dist(x, i, x, j));
        }
        std::sort(d.begin(), d.end());
        out[i] = d[k - 1];
    }
    return out;
}

inline double coverage(const tripeval::EncodedMatrix& real, const tripeval::EncodedMatrix& synth, std::size_t k) {
    const auto radius = kth_other(real, k);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < real.rows(); ++i) {
        bool hit = false;
        for (std::size_t j = 0; j < synth.rows() && !hit; ++j) hit = dist(real, i, synth, j) <= radius[i];
        hits += hit ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(real.rows());
}

inline std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline tripeval::DcrProfile dcr(const tripeval::EncodedMatrix& train, const tripeval::EncodedMatrix& holdout,
                                const tripeval::EncodedMatrix& synth) {
    tripeval::DcrProfile p;
    p.rs = sorted(nearest(train, synth));
    p.hs = sorted(nearest(holdout, synth));
    p.rr = sorted(kth_other(train, 1));
    p.ss = sorted(kth_other(synth, 1));
    return p;
}

// Minimum mean cost over all perfect matchings of an n x n cost matrix.
inline double permutation_ot(const tripeval::CostMatrix& c) {
    const std::size_t n = c.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += c(i, perm[i]);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(n);
}

// Uniform n vs m transport reduced to a matching between L = lcm(n, m)
// replicated atoms (each a-row L/n times, each b-row L/m times).
inline double replicated_ot(const tripeval::CostMatrix& c) {
    const std::size_t n = c.rows();
    const std::size_t m = c.cols();
    const std::size_t l = std::lcm(n, m);
    std::vector<double> big(l * l);
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) big[i * l + j] = c(i / (l / n), j / (l / m));
    }
    return permutation_ot(tripeval::CostMatrix(l, l, std::move(big)));
}

// Percentile by the closest-ranks linear interpolation definition.
inline double percentile(std::vector<double> v, double alpha) {
    std::sort(v.begin(), v.end());
    const double pos = alpha / 100.0 * static_cast<double>(v.size() - 1);
    const double lo = std::floor(pos);
    const double hi = std::ceil(pos);
    return v[static_cast<std::size_t>(lo)] + (pos - lo) * (v[static_cast<std::size_t>(hi)] - v[static_cast<std::size_t>(lo)]);
}

// Least-squares boosting written from the textbook recursion: every node
// tries every feature and every midpoint between consecutive distinct values
// and measures the two children's squared error directly.
class NaiveBooster {
public:
    NaiveBooster(std::size_t trees, double lr, std::size_t depth) : trees_(trees), lr_(lr), depth_(depth) {}

    void fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
        base_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
        std::vector<double> pred(y.size(), base_);
        std::vector<std::size_t> all(y.size());
        std::iota(all.begin(), all.end(), 0);
        for (std::size_t t = 0; t < trees_; ++t) {
            std::vector<double> res(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) res[i] = y[i] - pred[i];
            nodes_.emplace_back();
            grow(nodes_.back(), x, res, all, 0);
            for (std::size_t i = 0; i < y.size(); ++i) pred[i] += lr_ * eval(nodes_.back(), 0, x[i]);
        }
    }

    double predict(const std::vector<double>& row) const {
        double s = 0.0;
        for (const auto& tree : nodes_) s += eval(tree, 0, row);
        return base_ + lr_ * s;
    }

private:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
        double value = 0.0;
    };

    static double sse(const std::vector<double>& r, const std::vector<std::size_t>& idx) {
        if (idx.empty()) return 0.0;
        double m = 0.0;
        for (auto i : idx) m += r[i];
        m /= static_cast<double>(idx.size());
        double s = 0.0;
        for (auto i : idx) s += (r[i] - m) * (r[i] - m);
        return s;
    }

    void grow(std::vector<Node>& tree, const std::vector<std::vector<double>>& x, const std::vector<double>& r,
              const std::vector<std::size_t>& idx, std::size_t depth) {
        const std::size_t id = tree.size();
        tree.emplace_back();
        double mean = 0.0;
        for (auto i : idx) mean += r[i];
        tree[id].value = mean / static_cast<double>(idx.size());
        if (depth >= depth_) return;

        const double parent = sse(r, idx);
        double best_gain = 1e-12 * parent;
        int best_f = -1;
        double best_t = 0.0;
        for (std::size_t f = 0; f < x.front().size(); ++f) {
            std::vector<double> vals;
            for (auto i : idx) vals.push_back(x[i][f]);
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
                const double t = vals[k] + (vals[k + 1] - vals[k]) * 0.5;
                std::vector<std::size_t> l, rr;
                for (auto i : idx) (x[i][f] <= t ? l : rr).push_back(i);
                const double gain = parent - sse(r, l) - sse(r, rr);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_f = static_cast<int>(f);
                    best_t = t;
                }
            }
        }
        if (best_f < 0) return;
        std::vector<std::size_t> l, rr;
        for (auto i : idx) (x[i][best_f] <= best_t ? l : rr).push_back(i);
        tree[id].feature = best_f;
        tree[id].threshold = best_t;
        tree[id].left = tree.size();
        grow(tree, x, r, l, depth + 1);
        tree[id].right = tree.size();
        grow(tree, x, r, rr, depth + 1);
    }

    static double eval(const std::vector<Node>& tree, std::size_t id, const std::vector<double>& row) {
        while (tree[id].feature >= 0) id = row[tree[id].feature] <= tree[id].threshold ? tree[id].left : tree[id].right;
        return tree[id].value;
    }

    std::size_t trees_;
    double lr_;
    std::size_t depth_;
    double base_ = 0.0;
    std::vector<std::vector<Node>> nodes_;
};

}  // namespace oracle
