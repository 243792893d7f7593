// tripeval command line: preprocessing, splitting, baseline generation,
// experiment evaluation and report rendering.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tripeval/baselines.hpp"
#include "tripeval/error.hpp"
#include "tripeval/harness.hpp"
#include "tripeval/parallel.hpp"
#include "tripeval/privacy.hpp"
#include "tripeval/simd/kernels.hpp"

namespace {

using namespace tripeval;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

std::vector<double> parse_alphas(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_number(item, ColumnKind::Float);
        if (!v) throw UsageError("invalid alpha '" + item + "'");
        out.push_back(*v);
    }
    if (out.empty()) throw UsageError("no alphas given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evaluate synthetic trip data against real trip data"};
    app.require_subcommand(1);

    std::string simd;
    std::size_t threads = 0;
    app.add_option("--simd", simd, "Force a kernel set: scalar, avx2, neon");
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "Drop columns, split datetimes, remove incomplete rows");
    std::string pre_in, pre_schema, pre_out, pre_schema_out;
    std::vector<std::string> pre_drop, pre_datetime;
    pre->add_option("--in", pre_in, "Raw trip CSV")->required();
    pre->add_option("--schema", pre_schema, "Schema JSON of the raw CSV")->required();
    pre->add_option("--out", pre_out, "Output CSV")->required();
    pre->add_option("--schema-out", pre_schema_out, "Where to write the output schema");
    pre->add_option("--drop", pre_drop, "Columns to drop");
    pre->add_option("--datetime", pre_datetime, "Datetime columns to split into weekday and time");

    // split
    auto* spl = app.add_subcommand("split", "Draw disjoint train and holdout sets");
    std::string spl_in, spl_schema, spl_train, spl_holdout;
    SplitSpec spl_spec;
    spl->add_option("--in", spl_in, "Preprocessed CSV")->required();
    spl->add_option("--schema", spl_schema, "Schema JSON")->required();
    spl->add_option("--train-size", spl_spec.train_size)->capture_default_str();
    spl->add_option("--holdout-size", spl_spec.holdout_size)->capture_default_str();
    spl->add_option("--seed", spl_spec.seed)->capture_default_str();
    spl->add_option("--train-out", spl_train, "Train CSV")->required();
    spl->add_option("--holdout-out", spl_holdout, "Holdout CSV")->required();

    // generate
    auto* gen = app.add_subcommand("generate", "Fit a baseline generator and sample from it");
    std::string gen_kind, gen_train, gen_schema, gen_out;
    std::size_t gen_n = 20000;
    std::uint64_t gen_seed = 0;
    double gen_sigma = 0.01;
    gen->add_option("--kind", gen_kind, "gaussian_copula, independent_marginals or noisy_memorizer")->required();
    gen->add_option("--train", gen_train, "Training CSV")->required();
    gen->add_option("--schema", gen_schema, "Schema JSON")->required();
    gen->add_option("--n", gen_n, "Rows to sample")->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--sigma", gen_sigma, "Memorizer noise in encoded units")->capture_default_str();
    gen->add_option("--out", gen_out, "Output CSV")->required();

    // evaluate
    auto* eva = app.add_subcommand("evaluate", "Run an experiment config and write a JSON report");
    std::string eva_config, eva_out, eva_sweep_dir;
    bool eva_quiet = false;
    eva->add_option("--config", eva_config, "Experiment config JSON")->required();
    eva->add_option("--out", eva_out, "Report JSON")->required();
    eva->add_option("--sweep-dir", eva_sweep_dir, "Also write per-generator alpha sweep CSVs here");
    eva->add_flag("--quiet", eva_quiet, "No progress output");

    // report
    auto* rep = app.add_subcommand("report", "Render a JSON report");
    std::string rep_in, rep_format = "markdown", rep_out, rep_sweep_dir;
    rep->add_option("--in", rep_in, "Report JSON")->required();
    rep->add_option("--format", rep_format, "json, markdown or csv")->capture_default_str();
    rep->add_option("--out", rep_out, "Output file (default stdout)");
    rep->add_option("--sweep-dir", rep_sweep_dir, "Write per-generator alpha sweep CSVs here");

    // sweep
    auto* swp = app.add_subcommand("sweep", "rDCR over a list of percentiles");
    std::string swp_profile, swp_alphas = "1,2,3,4,5,10,15,20,30,40,50", swp_out;
    swp->add_option("--profile", swp_profile, "DCR profile JSON")->required();
    swp->add_option("--alphas", swp_alphas, "Comma separated percentiles")->capture_default_str();
    swp->add_option("--out", swp_out, "Output CSV (default stdout)");

    // dcr
    auto* dcr = app.add_subcommand("dcr", "Compute a DCR profile for train, holdout and synthetic CSVs");
    std::string dcr_train, dcr_holdout, dcr_synth, dcr_schema, dcr_out;
    dcr->add_option("--train", dcr_train)->required();
    dcr->add_option("--holdout", dcr_holdout)->required();
    dcr->add_option("--synth", dcr_synth)->required();
    dcr->add_option("--schema", dcr_schema)->required();
    dcr->add_option("--out", dcr_out, "Profile JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!simd.empty()) simd::set_active_isa(simd::parse_isa(simd));
        if (threads > 0) set_thread_count(threads);

        if (*pre) {
            const TableSchema schema = load_schema(pre_schema);
            PreprocessSpec spec{pre_drop, pre_datetime};
            const auto result = preprocess_trips(load_csv(pre_in, schema), spec);
            save_csv(pre_out, result.table);
            if (!pre_schema_out.empty()) save_schema(pre_schema_out, result.table.schema());
            std::cerr << "kept " << result.table.rows() << " rows, removed " << result.rows_removed
                      << " (" << result.datetime_parse_failures << " unparseable datetimes)\n";
            for (const auto& c : result.absent_drop_columns) std::cerr << "note: column '" << c << "' was not present\n";
        } else if (*spl) {
            const TableSchema schema = load_schema(spl_schema);
            const auto parts = split(load_csv(spl_in, schema), spl_spec);
            save_csv(spl_train, parts.train);
            save_csv(spl_holdout, parts.holdout);
        } else if (*gen) {
            const TableSchema schema = load_schema(gen_schema);
            GeneratorSpec spec;
            spec.kind = parse_generator_kind(gen_kind);
            spec.noise_sigma = gen_sigma;
            spec.seed = gen_seed;
            const auto model = fit_generator(load_csv(gen_train, schema), spec);
            save_csv(gen_out, sample(*model, gen_n, gen_seed));
        } else if (*eva) {
            const ExperimentConfig cfg = load_experiment_config(eva_config);
            const MetricReport report = run_experiment(cfg, eva_quiet ? nullptr : &std::cerr);
            write_text(eva_out, render_report(report, ReportFormat::Json));
            if (!eva_sweep_dir.empty()) write_sweep_csvs(report, eva_sweep_dir);
            for (const auto& g : report.generators) {
                if (g.error) std::cerr << "generator '" << g.name << "' failed: " << *g.error << "\n";
            }
        } else if (*rep) {
            const ReportFormat format = parse_report_format(rep_format);
            const MetricReport report = load_report(rep_in);
            write_text(rep_out, render_report(report, format));
            if (!rep_sweep_dir.empty()) write_sweep_csvs(report, rep_sweep_dir);
        } else if (*swp) {
            const DcrProfile profile = load_profile(swp_profile);
            const auto results = rdcr_sweep(profile, parse_alphas(swp_alphas));
            std::ostringstream out;
            write_sweep_csv(out, results);
            write_text(swp_out, out.str());
        } else if (*dcr) {
            const TableSchema schema = load_schema(dcr_schema);
            const DataTable train = load_csv(dcr_train, schema);
            const Encoder enc = Encoder::fit(train);
            const DcrProfile profile = dcr_profile(enc.encode(train), enc.encode(load_csv(dcr_holdout, schema)),
                                                   enc.encode(load_csv(dcr_synth, schema)));
            save_profile(dcr_out, profile);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
