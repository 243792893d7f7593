#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tripeval/dataset.hpp"

namespace tripeval {

// Least-squares gradient boosting with exact greedy depth-wise trees.
struct GbmConfig {
    std::size_t n_trees = 100;
    double learning_rate = 0.1;
    std::size_t max_depth = 3;
    std::size_t min_samples_leaf = 1;
    double subsample = 1.0;  // fraction of rows drawn (without replacement) per tree
    std::uint64_t seed = 0;

    void validate() const;
};

struct RegressionTree {
    struct Node {
        // Internal nodes: rows with x[feature] <= threshold go left.
        std::int32_t feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;  // leaf value: mean residual of its training rows
    };
    std::vector<Node> nodes;  // nodes[0] is the root

    double predict(const double* x) const;
};

struct GbmModel {
    double base_prediction = 0.0;  // mean training target
    double learning_rate = 0.1;
    std::size_t n_features = 0;
    std::vector<RegressionTree> trees;
    // Training sum of squared errors after 0, 1, ..., n_trees stages.
    std::vector<double> training_loss;
};

// Instrumentation hook: told about every feature row gbm_fit reads.
class FitObserver {
public:
    virtual ~FitObserver() = default;
    virtual void on_row_read(std::string_view source, std::size_t row) = 0;
};

// Deterministic given cfg.seed. Split search scans features in index order
// and thresholds in increasing order; only strictly better gains replace the
// incumbent, so ties go to the lowest feature, then the lowest threshold.
GbmModel gbm_fit(const EncodedMatrix& features, std::span<const double> target, const GbmConfig& cfg,
                 FitObserver* observer = nullptr);

// base_prediction + learning_rate * sum_t tree_t(x) per row.
std::vector<double> gbm_predict(const GbmModel& model, const EncodedMatrix& features);

// 1 - sum (y - y_hat)^2 / sum (y - mean y)^2. Throws NumericError when y is
// constant (R^2 undefined).
double r_squared(std::span<const double> y_true, std::span<const double> y_pred);

// A regressor together with the encoder fitted on its training table.
struct DownstreamModel {
    Encoder encoder;  // excludes the target column
    std::string target;
    GbmModel model;
};

// Fits the encoder and the GBM on `table` only.
DownstreamModel fit_downstream(const DataTable& table, std::string_view target, const GbmConfig& cfg,
                               FitObserver* observer = nullptr);

// R^2 of the model's predictions on `table`.
double evaluate_downstream(const DownstreamModel& model, const DataTable& table);

// R^2 for the six (fit on, predict on) pairs. Values may be negative.
struct DownstreamResult {
    double tr_tr = 0.0;
    double tr_syn = 0.0;
    double tr_te = 0.0;
    double syn_syn = 0.0;
    double syn_tr = 0.0;
    double syn_te = 0.0;
};

DownstreamResult downstream_suite(const DataTable& train, const DataTable& holdout, const DataTable& synth,
                                  std::string_view target, const GbmConfig& cfg,
                                  FitObserver* observer = nullptr);

// Same, reusing an already fitted train-side model.
DownstreamResult downstream_suite(const DownstreamModel& train_model, const DataTable& train,
                                  const DataTable& holdout, const DataTable& synth, const GbmConfig& cfg,
                                  FitObserver* observer = nullptr);

}  // namespace tripeval
