#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tripeval/error.hpp"
#include "tripeval/harness.hpp"
#include "tripeval/privacy.hpp"

namespace tripeval {
namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double number_from(const ordered_json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw DataError("invalid number '" + s + "' in report");
}

ordered_json summary_json(const MetricSummary& s) {
    ordered_json j;
    j["applicable"] = s.applicable;
    if (!s.applicable) return j;
    j["mean"] = number(s.mean);
    j["std"] = number(s.std);
    j["run_count"] = s.run_count;
    ordered_json values = ordered_json::array();
    for (double v : s.values) values.push_back(number(v));
    j["values"] = values;
    return j;
}

MetricSummary summary_from(const ordered_json& j) {
    MetricSummary s;
    s.applicable = j.at("applicable").get<bool>();
    if (!s.applicable) return s;
    s.mean = number_from(j.at("mean"));
    s.std = number_from(j.at("std"));
    s.run_count = j.at("run_count").get<std::size_t>();
    for (const auto& v : j.at("values")) s.values.push_back(number_from(v));
    return s;
}

// Row embedding used by the Wasserstein, coverage and DCR metrics.
constexpr const char* kEmbedding = "one-hot categorical, min-max numeric fitted on train, L2 distance";

ordered_json report_json(const MetricReport& r) {
    ordered_json doc;
    doc["toolkit"] = {{"name", "tripeval"}, {"version", r.toolkit_version}};
    doc["config"] = r.config_json.empty() ? ordered_json::object() : ordered_json::parse(r.config_json);
    doc["seeds"] = {{"master", r.master_seed}, {"split", r.split_seed}, {"gbm", r.gbm_seed}};
    doc["data"] = {{"rows_loaded", r.rows_loaded},
                   {"rows_removed", r.rows_removed},
                   {"train_rows", r.train_rows},
                   {"holdout_rows", r.holdout_rows}};
    doc["rdcr_alpha"] = r.rdcr_alpha;
    doc["embedding"] = kEmbedding;
    doc["render_scale"] = {{"dwn", 100}, {"w1", 1}, {"G", 100}, {"cov", 100}, {"dcr", 1}};

    ordered_json ref;
    ref["w1_tr_te"] = number(r.reference.w1_tr_te);
    ref["w1_path"] = r.reference.w1_path;
    ref["cov_tr_te"] = number(r.reference.cov_tr_te);
    ref["G_tr_te"] = r.reference.g_tr_te ? number(*r.reference.g_tr_te) : ordered_json(nullptr);
    ref["dwn_tr_tr"] = number(r.reference.dwn_tr_tr);
    ref["dwn_tr_te"] = number(r.reference.dwn_tr_te);
    doc["reference"] = ref;

    ordered_json gens = ordered_json::array();
    for (const auto& g : r.generators) {
        ordered_json gj;
        gj["name"] = g.name;
        gj["kind"] = g.kind;
        gj["status"] = g.error ? "error" : "ok";
        if (g.error) gj["error"] = *g.error;
        ordered_json runs = ordered_json::array();
        for (const auto& run : g.runs) {
            runs.push_back({{"fit", run.fit},
                            {"sample", run.sample},
                            {"seed", run.seed},
                            {"source", run.source},
                            {"w1_tr_path", run.w1_tr_path},
                            {"w1_te_path", run.w1_te_path}});
        }
        gj["runs"] = runs;
        ordered_json metrics = ordered_json::object();
        for (const auto& [name, s] : g.metrics) metrics[name] = summary_json(s);
        gj["metrics"] = metrics;
        ordered_json sweep = ordered_json::array();
        for (const auto& p : g.sweep) {
            sweep.push_back({{"alpha", p.alpha},
                             {"d_rs", summary_json(p.d_rs)},
                             {"d_hs", summary_json(p.d_hs)},
                             {"ratio", summary_json(p.ratio)}});
        }
        gj["sweep"] = sweep;
        gens.push_back(gj);
    }
    doc["generators"] = gens;
    return doc;
}

struct TableColumn {
    std::string header;
    std::string metric;  // per-run metric name; empty for reference/constant
    std::optional<double> reference;  // reference value (std shown as 0)
    bool reference_na = false;
};

struct Family {
    std::string title;
    std::vector<TableColumn> columns;
    double scale = 1.0;
    int decimals = 2;
    bool percentile_column = false;
};

std::vector<Family> families(const MetricReport& r) {
    const auto& ref = r.reference;
    std::vector<Family> out;
    out.push_back({"Downstream task performance (R² x 100)",
                   {{"dwn_tr_tr", "dwn_tr_tr", {}, false},
                    {"dwn_tr_syn", "dwn_tr_syn", {}, false},
                    {"dwn_tr_te", "dwn_tr_te", {}, false},
                    {"dwn_syn_syn", "dwn_syn_syn", {}, false},
                    {"dwn_syn_tr", "dwn_syn_tr", {}, false},
                    {"dwn_syn_te", "dwn_syn_te", {}, false}},
                   100.0, 2, false});
    out.push_back({"Wasserstein distance",
                   {{"w1_tr_te", "", ref.w1_tr_te, false},
                    {"w1_tr_syn", "w1_tr_syn", {}, false},
                    {"w1_te_syn", "w1_te_syn", {}, false}},
                   1.0, 4, false});
    out.push_back({"Graph similarity (x 100)",
                   {{"G_tr_te", "", ref.g_tr_te, !ref.g_tr_te.has_value()},
                    {"G_tr_syn", "G_tr_syn", {}, false},
                    {"G_te_syn", "G_te_syn", {}, false}},
                   100.0, 2, false});
    out.push_back({"Coverage (%)",
                   {{"cov_tr_te", "", ref.cov_tr_te, false},
                    {"cov_tr_syn", "cov_tr_syn", {}, false},
                    {"cov_te_syn", "cov_te_syn", {}, false}},
                   100.0, 2, false});
    out.push_back({"Distance to closest record (" + format_number(r.rdcr_alpha, ColumnKind::Float) + "% quantile)",
                   {{"dcr_rs", "dcr_rs", {}, false},
                    {"dcr_hs", "dcr_hs", {}, false},
                    {"rDCR", "rDCR", {}, false},
                    {"dcr_rr", "dcr_rr", {}, false},
                    {"dcr_ss", "dcr_ss", {}, false}},
                   1.0, 3, true});
    return out;
}

std::string render_markdown(const MetricReport& r) {
    std::ostringstream out;
    out << "# Evaluation report\n\n";
    out << "- toolkit: tripeval " << r.toolkit_version << "\n";
    out << "- master seed: " << r.master_seed << ", split seed: " << r.split_seed << "\n";
    out << "- rows: " << r.rows_loaded << " loaded, " << r.rows_removed << " removed in preprocessing, "
        << r.train_rows << " train, " << r.holdout_rows << " holdout\n";
    out << "- embedding: " << kEmbedding << "\n";

    std::vector<const GeneratorReport*> ok;
    for (const auto& g : r.generators) {
        if (!g.error) ok.push_back(&g);
    }

    for (const Family& fam : families(r)) {
        out << "\n## " << fam.title << "\n\n";
        bool any_value = false;
        for (const auto* g : ok) {
            for (const auto& c : fam.columns) {
                if (c.metric.empty()) continue;
                const MetricSummary* s = g->find(c.metric);
                any_value = any_value || (s && s->applicable);
            }
        }
        if (!any_value) {
            out << "_No results for this table; omitted._\n";
            continue;
        }
        out << "| model |";
        for (const auto& c : fam.columns) out << ' ' << c.header << " |";
        if (fam.percentile_column) out << " percentile |";
        out << "\n|---|";
        for (std::size_t i = 0; i < fam.columns.size(); ++i) out << "---|";
        if (fam.percentile_column) out << "---|";
        out << "\n";
        for (const auto* g : ok) {
            out << "| " << g->name << " |";
            for (const auto& c : fam.columns) {
                std::string cell = "N/A";
                if (c.metric.empty()) {
                    if (c.reference && !c.reference_na) cell = format_mean_std(*c.reference * fam.scale, 0.0, fam.decimals);
                } else if (const MetricSummary* s = g->find(c.metric); s && s->applicable) {
                    cell = format_mean_std(s->mean * fam.scale, s->std * fam.scale, fam.decimals);
                }
                out << ' ' << cell << " |";
            }
            if (fam.percentile_column) out << ' ' << format_number(r.rdcr_alpha, ColumnKind::Float) << " |";
            out << "\n";
        }
    }

    bool header = false;
    for (const auto& g : r.generators) {
        if (!g.error) continue;
        if (!header) out << "\n## Failed generators\n\n";
        header = true;
        out << "- " << g.name << ": " << *g.error << "\n";
    }
    return out.str();
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return format_number(v, ColumnKind::Float);
}

std::string render_csv(const MetricReport& r) {
    std::ostringstream out;
    out << "generator,metric,mean,std,run_count\n";
    auto row = [&](const std::string& gen, const std::string& metric, const std::string& mean,
                   const std::string& std, std::size_t n) {
        const std::vector<std::string> fields{gen, metric, mean, std, std::to_string(n)};
        write_csv_record(out, fields);
    };
    row("reference", "w1_tr_te", csv_number(r.reference.w1_tr_te), "0", 1);
    row("reference", "cov_tr_te", csv_number(r.reference.cov_tr_te), "0", 1);
    if (r.reference.g_tr_te) {
        row("reference", "G_tr_te", csv_number(*r.reference.g_tr_te), "0", 1);
    } else {
        row("reference", "G_tr_te", "NA", "NA", 0);
    }
    row("reference", "dwn_tr_tr", csv_number(r.reference.dwn_tr_tr), "0", 1);
    row("reference", "dwn_tr_te", csv_number(r.reference.dwn_tr_te), "0", 1);
    for (const auto& g : r.generators) {
        if (g.error) {
            row(g.name, "error", "NA", "NA", 0);
            continue;
        }
        for (const auto& [name, s] : g.metrics) {
            if (s.applicable) {
                row(g.name, name, csv_number(s.mean), csv_number(s.std), s.run_count);
            } else {
                row(g.name, name, "NA", "NA", 0);
            }
        }
    }
    return out.str();
}

}  // namespace

std::string format_mean_std(double mean, double std, int decimals) {
    auto fmt = [&](double v) -> std::string {
        if (std::isnan(v)) return "nan";
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
        return buf;
    };
    return fmt(mean) + " (" + fmt(std) + ")";
}

ReportFormat parse_report_format(std::string_view text) {
    if (text == "json") return ReportFormat::Json;
    if (text == "markdown" || text == "md") return ReportFormat::Markdown;
    if (text == "csv") return ReportFormat::Csv;
    throw UsageError("unknown report format '" + std::string(text) + "' (json, markdown, csv)");
}

std::string render_report(const MetricReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: return report_json(report).dump(2) + "\n";
        case ReportFormat::Markdown: return render_markdown(report);
        case ReportFormat::Csv: return render_csv(report);
    }
    throw UsageError("unknown report format");
}

MetricReport parse_report_json(std::string_view text) {
    MetricReport r;
    try {
        const auto doc = ordered_json::parse(text);
        r.toolkit_version = doc.at("toolkit").at("version").get<std::string>();
        r.config_json = doc.at("config").dump();
        r.master_seed = doc.at("seeds").at("master").get<std::uint64_t>();
        r.split_seed = doc.at("seeds").at("split").get<std::uint64_t>();
        r.gbm_seed = doc.at("seeds").at("gbm").get<std::uint64_t>();
        const auto& data = doc.at("data");
        r.rows_loaded = data.at("rows_loaded").get<std::size_t>();
        r.rows_removed = data.at("rows_removed").get<std::size_t>();
        r.train_rows = data.at("train_rows").get<std::size_t>();
        r.holdout_rows = data.at("holdout_rows").get<std::size_t>();
        r.rdcr_alpha = doc.at("rdcr_alpha").get<double>();

        const auto& ref = doc.at("reference");
        r.reference.w1_tr_te = number_from(ref.at("w1_tr_te"));
        r.reference.w1_path = ref.at("w1_path").get<std::string>();
        r.reference.cov_tr_te = number_from(ref.at("cov_tr_te"));
        if (!ref.at("G_tr_te").is_null()) r.reference.g_tr_te = number_from(ref.at("G_tr_te"));
        r.reference.dwn_tr_tr = number_from(ref.at("dwn_tr_tr"));
        r.reference.dwn_tr_te = number_from(ref.at("dwn_tr_te"));

        for (const auto& gj : doc.at("generators")) {
            GeneratorReport g;
            g.name = gj.at("name").get<std::string>();
            g.kind = gj.at("kind").get<std::string>();
            if (gj.contains("error")) g.error = gj.at("error").get<std::string>();
            for (const auto& run : gj.at("runs")) {
                g.runs.push_back({run.at("fit").get<std::size_t>(), run.at("sample").get<std::size_t>(),
                                  run.at("seed").get<std::uint64_t>(), run.at("source").get<std::string>(),
                                  run.at("w1_tr_path").get<std::string>(), run.at("w1_te_path").get<std::string>()});
            }
            for (const auto& [name, s] : gj.at("metrics").items()) g.metrics.emplace_back(name, summary_from(s));
            for (const auto& p : gj.at("sweep")) {
                g.sweep.push_back({p.at("alpha").get<double>(), summary_from(p.at("d_rs")), summary_from(p.at("d_hs")),
                                   summary_from(p.at("ratio"))});
            }
            r.generators.push_back(std::move(g));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid report: ") + e.what());
    }
    return r;
}

MetricReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open report " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_report_json(buffer.str());
}

std::string sweep_csv(const GeneratorReport& generator) {
    std::vector<RdcrResult> rows;
    for (const auto& p : generator.sweep) {
        RdcrResult r;
        r.alpha = p.alpha;
        r.d_rs = p.d_rs.mean;
        r.d_hs = p.d_hs.mean;
        r.ratio = p.ratio.mean;
        rows.push_back(r);
    }
    std::ostringstream out;
    write_sweep_csv(out, rows);
    return out.str();
}

std::vector<std::filesystem::path> write_sweep_csvs(const MetricReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& g : report.generators) {
        if (g.sweep.empty()) continue;
        const auto path = dir / (g.name + "_sweep.csv");
        std::ofstream out(path);
        if (!out) throw DataError("cannot write " + path.string());
        out << sweep_csv(g);
        written.push_back(path);
    }
    return written;
}

}  // namespace tripeval
