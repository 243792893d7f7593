#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "tripeval/error.hpp"
#include "tripeval/graph_metric.hpp"
#include "tripeval/harness.hpp"
#include "tripeval/neighbors.hpp"
#include "tripeval/privacy.hpp"
#include "tripeval/rng.hpp"

namespace tripeval {
namespace {

// Metric rows in report order.
const std::vector<std::string> kRunMetrics = {
    "dwn_tr_tr", "dwn_tr_syn", "dwn_tr_te",  "dwn_syn_syn", "dwn_syn_tr", "dwn_syn_te",
    "w1_tr_syn", "w1_te_syn",  "G_tr_syn",   "G_te_syn",    "cov_tr_syn", "cov_te_syn",
    "dcr_rs",    "dcr_hs",     "rDCR",       "dcr_rr",      "dcr_ss",
};

std::string target_name(const ExperimentConfig& cfg, const TableSchema& schema) {
    if (cfg.target) return *cfg.target;
    if (schema.target()) return *schema.target();
    throw UsageError("no regression target: set 'target' in the config or the schema");
}

GbmConfig gbm_config(const ExperimentConfig& cfg) {
    GbmConfig g = cfg.gbm;
    g.seed = cfg.gbm_seed ? *cfg.gbm_seed : derive_seed(cfg.master_seed, "gbm");
    return g;
}

OtConfig ot_config(const ExperimentConfig& cfg, std::uint64_t seed) {
    OtConfig o = cfg.ot;
    o.seed = seed;
    return o;
}

EncodedMatrix cap_rows(const EncodedMatrix& m, std::size_t cap, std::uint64_t seed) {
    if (m.rows() <= cap) return m;
    Rng rng(seed);
    auto idx = sample_without_replacement(m.rows(), cap, rng);
    std::sort(idx.begin(), idx.end());
    return m.select_rows(idx);
}

std::vector<double> sorted_copy(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

EdgeDistribution graph_of(const DataTable& t, const std::pair<std::string, std::string>& zones) {
    return edge_distribution(build_graph(t, zones.first, zones.second));
}

// Everything that depends on the split only, computed once per experiment.
struct Prepared {
    DataTable train;
    DataTable holdout;
    std::string target;
    GbmConfig gbm;
    Encoder encoder;  // all columns, fitted on train
    EncodedMatrix train_enc;
    EncodedMatrix holdout_enc;
    EncodedMatrix train_capped;
    EncodedMatrix holdout_capped;
    std::vector<double> rr;  // sorted
    DownstreamModel train_model;
    std::optional<EdgeDistribution> train_graph;
    std::optional<EdgeDistribution> holdout_graph;
};

Prepared prepare(const DataTable& train, const DataTable& holdout, const ExperimentConfig& cfg) {
    Prepared p;
    p.train = train.with_source("train");
    p.holdout = holdout.with_source("holdout");
    p.target = target_name(cfg, train.schema());
    p.gbm = gbm_config(cfg);
    p.encoder = Encoder::fit(p.train);
    p.train_enc = p.encoder.encode(p.train);
    p.holdout_enc = p.encoder.encode(p.holdout);
    p.train_capped = cap_rows(p.train_enc, cfg.row_cap, derive_seed(cfg.master_seed, "cap:train"));
    p.holdout_capped = cap_rows(p.holdout_enc, cfg.row_cap, derive_seed(cfg.master_seed, "cap:holdout"));
    p.rr = sorted_copy(neighbors::nearest_other_distances(p.train_capped));
    p.train_model = fit_downstream(p.train, p.target, p.gbm);
    if (cfg.zone_columns) {
        p.train_graph = graph_of(p.train, *cfg.zone_columns);
        p.holdout_graph = graph_of(p.holdout, *cfg.zone_columns);
    }
    return p;
}

ReferenceValues reference_from(const Prepared& p, const ExperimentConfig& cfg) {
    ReferenceValues r;
    const OtResult w1 = wasserstein(p.train_enc, p.holdout_enc, ot_config(cfg, derive_seed(cfg.master_seed, "ot:reference")));
    r.w1_tr_te = w1.distance;
    r.w1_path = std::string(to_string(w1.path));
    r.cov_tr_te = coverage(p.train_capped, p.holdout_capped, cfg.coverage);
    if (p.train_graph) r.g_tr_te = graph_similarity(*p.train_graph, *p.holdout_graph);
    r.dwn_tr_tr = evaluate_downstream(p.train_model, p.train);
    r.dwn_tr_te = evaluate_downstream(p.train_model, p.holdout);
    return r;
}

struct RunOutcome {
    std::vector<double> values;  // parallel to kRunMetrics; NaN = not applicable
    std::vector<RdcrResult> sweep;
    std::string w1_tr_path;
    std::string w1_te_path;
};

RunOutcome evaluate_run(const Prepared& p, const DataTable& synth_in, const ExperimentConfig& cfg,
                        const std::string& name, std::size_t fit, std::size_t sample) {
    const DataTable synth = synth_in.with_source(name);
    if (!synth.schema().same_columns(p.train.schema())) {
        throw DataError("synthetic table columns do not match the training schema");
    }
    if (synth.rows() < 2) throw DataError("synthetic table needs at least two rows");
    const std::uint64_t m = cfg.master_seed;

    RunOutcome out;
    out.values.assign(kRunMetrics.size(), std::nan(""));
    auto set = [&](std::string_view metric, double v) {
        const auto it = std::find(kRunMetrics.begin(), kRunMetrics.end(), metric);
        out.values[static_cast<std::size_t>(it - kRunMetrics.begin())] = v;
    };

    const DownstreamResult d = downstream_suite(p.train_model, p.train, p.holdout, synth, p.gbm);
    set("dwn_tr_tr", d.tr_tr);
    set("dwn_tr_syn", d.tr_syn);
    set("dwn_tr_te", d.tr_te);
    set("dwn_syn_syn", d.syn_syn);
    set("dwn_syn_tr", d.syn_tr);
    set("dwn_syn_te", d.syn_te);

    const EncodedMatrix synth_enc = p.encoder.encode(synth);
    const OtResult w_tr = wasserstein(p.train_enc, synth_enc, ot_config(cfg, derive_seed(m, "ot-tr:" + name, fit, sample)));
    const OtResult w_te = wasserstein(p.holdout_enc, synth_enc, ot_config(cfg, derive_seed(m, "ot-te:" + name, fit, sample)));
    set("w1_tr_syn", w_tr.distance);
    set("w1_te_syn", w_te.distance);
    out.w1_tr_path = std::string(to_string(w_tr.path));
    out.w1_te_path = std::string(to_string(w_te.path));

    if (cfg.zone_columns) {
        const EdgeDistribution g = graph_of(synth, *cfg.zone_columns);
        set("G_tr_syn", graph_similarity(*p.train_graph, g));
        set("G_te_syn", graph_similarity(*p.holdout_graph, g));
    }

    const EncodedMatrix synth_capped = cap_rows(synth_enc, cfg.row_cap, derive_seed(m, "cap:" + name, fit, sample));
    set("cov_tr_syn", coverage(p.train_capped, synth_capped, cfg.coverage));
    set("cov_te_syn", coverage(p.holdout_capped, synth_capped, cfg.coverage));

    DcrProfile profile;
    profile.rs = sorted_copy(neighbors::nearest_distances(p.train_capped, synth_capped));
    profile.hs = sorted_copy(neighbors::nearest_distances(p.holdout_capped, synth_capped));
    profile.rr = p.rr;
    profile.ss = sorted_copy(neighbors::nearest_other_distances(synth_capped));
    const RdcrResult r = rdcr(profile, cfg.rdcr_alpha);
    set("dcr_rs", r.d_rs);
    set("dcr_hs", r.d_hs);
    set("rDCR", r.ratio);
    set("dcr_rr", percentile(profile.rr, cfg.rdcr_alpha));
    set("dcr_ss", percentile(profile.ss, cfg.rdcr_alpha));
    out.sweep = rdcr_sweep(profile, cfg.alphas);
    return out;
}

void aggregate(GeneratorReport& g, const std::vector<RunOutcome>& runs, const std::vector<double>& alphas) {
    for (std::size_t k = 0; k < kRunMetrics.size(); ++k) {
        if (std::isnan(runs.front().values[k])) {
            g.metrics.emplace_back(kRunMetrics[k], not_applicable());
            continue;
        }
        std::vector<double> v;
        for (const auto& r : runs) v.push_back(r.values[k]);
        g.metrics.emplace_back(kRunMetrics[k], summarize(std::move(v)));
    }
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        std::vector<double> rs, hs, ratio;
        for (const auto& r : runs) {
            rs.push_back(r.sweep[a].d_rs);
            hs.push_back(r.sweep[a].d_hs);
            ratio.push_back(r.sweep[a].ratio);
        }
        g.sweep.push_back({alphas[a], summarize(std::move(rs)), summarize(std::move(hs)), summarize(std::move(ratio))});
    }
}

GeneratorReport run_generator(const Prepared& p, const GeneratorEntry& entry, const ExperimentConfig& cfg,
                              const TableSchema& schema, std::ostream* log) {
    GeneratorReport g;
    g.name = entry.name;
    g.kind = entry.spec ? std::string(to_string(entry.spec->kind)) : "external";
    std::vector<RunOutcome> outcomes;
    try {
        if (entry.spec) {
            for (std::size_t f = 0; f < cfg.fits_per_model; ++f) {
                GeneratorSpec spec = *entry.spec;
                spec.seed = derive_seed(cfg.master_seed, "fit:" + entry.name, f);
                const auto model = fit_generator(p.train, spec);
                for (std::size_t s = 0; s < cfg.samples_per_fit; ++s) {
                    const std::uint64_t seed = sample_seed(cfg.master_seed, entry.name, f, s);
                    if (log) *log << "[" << entry.name << "] fit " << f << " sample " << s << "\n";
                    const DataTable synth = sample(*model, cfg.sample_size, seed);
                    outcomes.push_back(evaluate_run(p, synth, cfg, entry.name, f, s));
                    g.runs.push_back({f, s, seed, {}, outcomes.back().w1_tr_path, outcomes.back().w1_te_path});
                }
            }
        } else {
            for (std::size_t s = 0; s < entry.files.size(); ++s) {
                if (log) *log << "[" << entry.name << "] file " << entry.files[s] << "\n";
                const DataTable raw = load_csv(cfg.resolve(entry.files[s]), schema);
                const DataTable synth = preprocess_trips(raw, cfg.preprocess).table;
                outcomes.push_back(evaluate_run(p, synth, cfg, entry.name, 0, s));
                g.runs.push_back({0, s, 0, entry.files[s], outcomes.back().w1_tr_path, outcomes.back().w1_te_path});
            }
        }
        aggregate(g, outcomes, cfg.alphas);
    } catch (const std::exception& e) {
        g.error = e.what();
        g.runs.clear();
        g.metrics.clear();
        g.sweep.clear();
        if (log) *log << "[" << entry.name << "] failed: " << e.what() << "\n";
    }
    return g;
}

}  // namespace

MetricSummary summarize(std::vector<double> values) {
    MetricSummary s;
    s.run_count = values.size();
    if (values.empty()) return s;
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        s.mean = values.front();  // summation would round away from the common value
        s.values = std::move(values);
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    s.values = std::move(values);
    return s;
}

MetricSummary not_applicable() {
    MetricSummary s;
    s.applicable = false;
    return s;
}

const MetricSummary* GeneratorReport::find(std::string_view metric) const {
    for (const auto& [name, summary] : metrics) {
        if (name == metric) return &summary;
    }
    return nullptr;
}

ReferenceValues reference_baselines(const DataTable& train, const DataTable& holdout, const ExperimentConfig& cfg) {
    cfg.validate();
    return reference_from(prepare(train, holdout, cfg), cfg);
}

MetricReport run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
    const TableSchema schema = load_schema(cfg.resolve(cfg.schema));
    return run_experiment(cfg, load_csv(cfg.resolve(cfg.data), schema), log);
}

MetricReport run_experiment(const ExperimentConfig& cfg, const DataTable& raw, std::ostream* log) {
    cfg.validate();
    MetricReport report;
    report.config_json = config_to_json(cfg);
    report.master_seed = cfg.master_seed;
    report.rdcr_alpha = cfg.rdcr_alpha;
    report.rows_loaded = raw.rows();

    const PreprocessResult pre = preprocess_trips(raw, cfg.preprocess);
    report.rows_removed = pre.rows_removed;

    SplitSpec split_spec;
    split_spec.train_size = cfg.train_size;
    split_spec.holdout_size = cfg.holdout_size;
    split_spec.seed = cfg.split_seed ? *cfg.split_seed : derive_seed(cfg.master_seed, "split");
    report.split_seed = split_spec.seed;
    const TrainHoldout parts = split(pre.table, split_spec);
    report.train_rows = parts.train.rows();
    report.holdout_rows = parts.holdout.rows();

    if (log) *log << "preparing reference metrics\n";
    const Prepared p = prepare(parts.train, parts.holdout, cfg);
    report.gbm_seed = p.gbm.seed;
    report.reference = reference_from(p, cfg);

    for (const auto& entry : cfg.generators) {
        report.generators.push_back(run_generator(p, entry, cfg, pre.table.schema(), log));
    }
    return report;
}

}  // namespace tripeval
