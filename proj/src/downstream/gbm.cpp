#include <algorithm>
#include <cmath>
#include <numeric>

#include "tripeval/downstream.hpp"
#include "tripeval/error.hpp"
#include "tripeval/rng.hpp"

namespace tripeval {
namespace {

struct SplitChoice {
    double gain = 0.0;
    std::int32_t feature = -1;
    double threshold = 0.0;
};

struct NodeStats {
    std::size_t count = 0;
    double sum = 0.0;
    double sumsq = 0.0;
};

// Splits must remove more than this fraction of the node's squared error,
// which keeps rounding noise from producing splits on settled residuals.
constexpr double kMinRelativeGain = 1e-12;

// Point strictly between lo and hi (lo < hi) that sends lo left and hi right.
double split_point(double lo, double hi) {
    const double mid = lo + (hi - lo) * 0.5;
    return mid < hi ? mid : lo;
}

double sse_gain(const NodeStats& left, const NodeStats& total) {
    const double nl = static_cast<double>(left.count);
    const double nr = static_cast<double>(total.count - left.count);
    const double sr = total.sum - left.sum;
    return left.sum * left.sum / nl + sr * sr / nr - total.sum * total.sum / static_cast<double>(total.count);
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<std::vector<double>>& columns,
                const std::vector<std::vector<std::uint32_t>>& order, const GbmConfig& cfg)
        : columns_(columns), order_(order), cfg_(cfg) {}

    // Grows one tree on the rows with node_of[i] == 0 (others are -1).
    RegressionTree build(const std::vector<double>& residual, std::vector<std::int32_t>& node_of) {
        RegressionTree tree;
        tree.nodes.emplace_back();
        std::vector<std::int32_t> frontier{0};
        std::vector<NodeStats> stats(1);
        for (std::size_t i = 0; i < residual.size(); ++i) {
            if (node_of[i] == 0) {
                ++stats[0].count;
                stats[0].sum += residual[i];
                stats[0].sumsq += residual[i] * residual[i];
            }
        }

        for (std::size_t depth = 0; depth < cfg_.max_depth && !frontier.empty(); ++depth) {
            const auto choices = best_splits(residual, node_of, stats, frontier);

            std::vector<std::int32_t> next;
            std::vector<std::int32_t> remap(tree.nodes.size(), -1);
            for (std::size_t k = 0; k < frontier.size(); ++k) {
                const SplitChoice& c = choices[k];
                if (c.feature < 0) continue;
                const std::int32_t id = frontier[k];
                const auto left = static_cast<std::int32_t>(tree.nodes.size());
                tree.nodes[id].feature = c.feature;
                tree.nodes[id].threshold = c.threshold;
                tree.nodes[id].left = left;
                tree.nodes[id].right = left + 1;
                tree.nodes.emplace_back();
                tree.nodes.emplace_back();
                next.push_back(left);
                next.push_back(left + 1);
                remap[id] = left;
            }
            if (next.empty()) break;

            stats.assign(tree.nodes.size(), NodeStats{});
            for (std::size_t i = 0; i < residual.size(); ++i) {
                const std::int32_t id = node_of[i];
                if (id < 0 || remap[id] < 0) {
                    if (id >= 0) node_of[i] = -2 - id;  // parked in a finished leaf
                    continue;
                }
                const auto& node = tree.nodes[id];
                const std::int32_t child =
                    columns_[node.feature][i] <= node.threshold ? node.left : node.right;
                node_of[i] = child;
                ++stats[child].count;
                stats[child].sum += residual[i];
                stats[child].sumsq += residual[i] * residual[i];
            }
            frontier = std::move(next);
        }

        // Leaf values are mean residuals of the rows that reached them.
        std::vector<NodeStats> leaf(tree.nodes.size());
        for (std::size_t i = 0; i < residual.size(); ++i) {
            std::int32_t id = node_of[i];
            if (id == -1) continue;
            if (id < -1) id = -2 - id;
            ++leaf[id].count;
            leaf[id].sum += residual[i];
        }
        for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
            if (tree.nodes[id].feature < 0 && leaf[id].count > 0) {
                tree.nodes[id].value = leaf[id].sum / static_cast<double>(leaf[id].count);
            }
        }
        return tree;
    }

private:
    std::vector<SplitChoice> best_splits(const std::vector<double>& residual,
                                         const std::vector<std::int32_t>& node_of,
                                         const std::vector<NodeStats>& stats,
                                         const std::vector<std::int32_t>& frontier) const {
        std::vector<std::int32_t> slot(stats.size(), -1);
        for (std::size_t k = 0; k < frontier.size(); ++k) slot[frontier[k]] = static_cast<std::int32_t>(k);

        std::vector<SplitChoice> best(frontier.size());
        for (std::size_t k = 0; k < frontier.size(); ++k) {
            const NodeStats& s = stats[frontier[k]];
            const double sse = s.sumsq - s.sum * s.sum / static_cast<double>(s.count);
            best[k].gain = kMinRelativeGain * std::max(sse, 0.0);
        }
        std::vector<NodeStats> left(frontier.size());
        std::vector<double> last(frontier.size());
        const std::size_t min_leaf = std::max<std::size_t>(cfg_.min_samples_leaf, 1);

        for (std::size_t f = 0; f < columns_.size(); ++f) {
            std::fill(left.begin(), left.end(), NodeStats{});
            const auto& col = columns_[f];
            for (std::uint32_t i : order_[f]) {
                const std::int32_t id = node_of[i];
                if (id < 0) continue;
                const std::int32_t k = slot[id];
                if (k < 0) continue;
                NodeStats& l = left[k];
                const double x = col[i];
                if (l.count > 0 && x > last[k]) {
                    const NodeStats& total = stats[id];
                    if (l.count >= min_leaf && total.count - l.count >= min_leaf) {
                        const double gain = sse_gain(l, total);
                        if (gain > best[k].gain) {
                            best[k] = {gain, static_cast<std::int32_t>(f), split_point(last[k], x)};
                        }
                    }
                }
                ++l.count;
                l.sum += residual[i];
                last[k] = x;
            }
        }
        return best;
    }

    const std::vector<std::vector<double>>& columns_;
    const std::vector<std::vector<std::uint32_t>>& order_;
    const GbmConfig& cfg_;
};

double sum_squared_error(std::span<const double> y, std::span<const double> pred) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - pred[i];
        s += e * e;
    }
    return s;
}

}  // namespace

void GbmConfig::validate() const {
    if (n_trees == 0) throw UsageError("n_trees must be >= 1");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw UsageError("learning_rate must lie in (0, 1]");
    if (!(subsample > 0.0 && subsample <= 1.0)) throw UsageError("subsample must lie in (0, 1]");
}

double RegressionTree::predict(const double* x) const {
    std::size_t id = 0;
    while (nodes[id].feature >= 0) {
        const Node& n = nodes[id];
        id = static_cast<std::size_t>(x[n.feature] <= n.threshold ? n.left : n.right);
    }
    return nodes[id].value;
}

GbmModel gbm_fit(const EncodedMatrix& features, std::span<const double> target, const GbmConfig& cfg,
                 FitObserver* observer) {
    cfg.validate();
    const std::size_t n = features.rows();
    const std::size_t m = features.cols();
    if (n == 0) throw UsageError("gbm_fit: empty training set");
    if (target.size() != n) throw UsageError("gbm_fit: target length does not match the feature rows");
    for (double y : target) {
        if (!std::isfinite(y)) throw DataError("gbm_fit: non-finite target value");
    }

    std::vector<std::vector<double>> columns(m, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (observer) observer->on_row_read(features.source(), i);
        const double* row = features.row_ptr(i);
        for (std::size_t f = 0; f < m; ++f) columns[f][i] = row[f];
    }
    std::vector<std::vector<std::uint32_t>> order(m, std::vector<std::uint32_t>(n));
    for (std::size_t f = 0; f < m; ++f) {
        auto& o = order[f];
        std::iota(o.begin(), o.end(), 0u);
        const auto& col = columns[f];
        std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }

    GbmModel model;
    model.learning_rate = cfg.learning_rate;
    model.n_features = m;
    model.base_prediction = std::accumulate(target.begin(), target.end(), 0.0) / static_cast<double>(n);

    std::vector<double> prediction(n, model.base_prediction);
    std::vector<double> residual(n);
    model.training_loss.push_back(sum_squared_error(target, prediction));

    Rng rng(cfg.seed);
    const auto sample_size = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(cfg.subsample * static_cast<double>(n))));
    TreeBuilder builder(columns, order, cfg);
    std::vector<std::int32_t> node_of(n);

    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = target[i] - prediction[i];
        if (sample_size < n) {
            std::fill(node_of.begin(), node_of.end(), -1);
            for (std::size_t i : sample_without_replacement(n, sample_size, rng)) node_of[i] = 0;
        } else {
            std::fill(node_of.begin(), node_of.end(), 0);
        }
        RegressionTree tree = builder.build(residual, node_of);
        for (std::size_t i = 0; i < n; ++i) {
            prediction[i] += cfg.learning_rate * tree.predict(features.row_ptr(i));
        }
        model.trees.push_back(std::move(tree));
        model.training_loss.push_back(sum_squared_error(target, prediction));
    }
    return model;
}

std::vector<double> gbm_predict(const GbmModel& model, const EncodedMatrix& features) {
    if (features.cols() != model.n_features) {
        throw UsageError("gbm_predict: model expects " + std::to_string(model.n_features) +
                         " features, got " + std::to_string(features.cols()));
    }
    std::vector<double> out(features.rows(), model.base_prediction);
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const double* x = features.row_ptr(i);
        double acc = 0.0;
        for (const auto& tree : model.trees) acc += tree.predict(x);
        out[i] += model.learning_rate * acc;
    }
    return out;
}

double r_squared(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size()) {
        throw UsageError("r_squared: inputs must be non-empty and of equal length");
    }
    const double mean = std::accumulate(y_true.begin(), y_true.end(), 0.0) / static_cast<double>(y_true.size());
    double u = 0.0;
    double v = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double e = y_true[i] - y_pred[i];
        const double d = y_true[i] - mean;
        u += e * e;
        v += d * d;
    }
    if (v == 0.0) throw NumericError("undefined R²: the true values are constant");
    return 1.0 - u / v;
}

}  // namespace tripeval
