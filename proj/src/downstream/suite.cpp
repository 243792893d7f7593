#include "tripeval/downstream.hpp"
#include "tripeval/error.hpp"

namespace tripeval {
namespace {

const std::vector<double>& target_values(const DataTable& table, std::string_view target) {
    const Column& col = table.column(target);
    if (!is_numeric(col.kind)) throw UsageError("target column '" + std::string(target) + "' is not numeric");
    return col.number;
}

}  // namespace

DownstreamModel fit_downstream(const DataTable& table, std::string_view target, const GbmConfig& cfg,
                               FitObserver* observer) {
    const auto& y = target_values(table, target);
    const std::string name(target);
    DownstreamModel out{Encoder::fit(table, std::span<const std::string>(&name, 1)), name, {}};
    out.model = gbm_fit(out.encoder.encode(table), y, cfg, observer);
    return out;
}

double evaluate_downstream(const DownstreamModel& model, const DataTable& table) {
    const auto& y = target_values(table, model.target);
    const auto pred = gbm_predict(model.model, model.encoder.encode(table));
    return r_squared(y, pred);
}

DownstreamResult downstream_suite(const DataTable& train, const DataTable& holdout, const DataTable& synth,
                                  std::string_view target, const GbmConfig& cfg, FitObserver* observer) {
    const DownstreamModel on_train = fit_downstream(train, target, cfg, observer);
    return downstream_suite(on_train, train, holdout, synth, cfg, observer);
}

DownstreamResult downstream_suite(const DownstreamModel& train_model, const DataTable& train,
                                  const DataTable& holdout, const DataTable& synth, const GbmConfig& cfg,
                                  FitObserver* observer) {
    if (!train.schema().same_columns(holdout.schema()) || !train.schema().same_columns(synth.schema())) {
        throw UsageError("downstream_suite: tables do not share a schema");
    }
    const DownstreamModel on_synth = fit_downstream(synth, train_model.target, cfg, observer);

    DownstreamResult r;
    r.tr_tr = evaluate_downstream(train_model, train);
    r.tr_syn = evaluate_downstream(train_model, synth);
    r.tr_te = evaluate_downstream(train_model, holdout);
    r.syn_syn = evaluate_downstream(on_synth, synth);
    r.syn_tr = evaluate_downstream(on_synth, train);
    r.syn_te = evaluate_downstream(on_synth, holdout);
    return r;
}

}  // namespace tripeval
