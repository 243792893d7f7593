#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tripeval/error.hpp"
#include "tripeval/harness.hpp"
#include "tripeval/rng.hpp"

namespace tripeval {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) throw UsageError(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw UsageError("unknown key '" + key + "' in " + std::string(where));
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

std::size_t read_count(const json& obj, const char* key, std::size_t fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_unsigned()) throw UsageError(std::string("'") + key + "' must be a non-negative integer");
    return it->get<std::size_t>();
}

GeneratorEntry parse_generator(const json& g) {
    reject_unknown(g, {"name", "kind", "noise_sigma", "files"}, "generator entry");
    GeneratorEntry e;
    e.name = g.at("name").get<std::string>();
    if (e.name.empty()) throw UsageError("generator name must not be empty");
    const bool has_kind = g.contains("kind");
    const bool has_files = g.contains("files");
    if (has_kind == has_files) throw UsageError("generator '" + e.name + "' needs exactly one of 'kind' or 'files'");
    if (has_kind) {
        GeneratorSpec spec;
        spec.kind = parse_generator_kind(g.at("kind").get<std::string>());
        read(g, "noise_sigma", spec.noise_sigma);
        spec.validate();
        e.spec = spec;
    } else {
        if (g.contains("noise_sigma")) throw UsageError("'noise_sigma' only applies to built-in generators");
        e.files = g.at("files").get<std::vector<std::string>>();
        if (e.files.empty()) throw UsageError("generator '" + e.name + "' lists no files");
    }
    return e;
}

}  // namespace

std::filesystem::path ExperimentConfig::resolve(const std::string& path) const {
    const std::filesystem::path p(path);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

void ExperimentConfig::validate() const {
    if (fits_per_model * samples_per_fit < 1) throw UsageError("fits_per_model x samples_per_fit must be >= 1");
    if (sample_size < 1) throw UsageError("sample_size must be >= 1");
    if (train_size < 2 || holdout_size < 2) throw UsageError("train and holdout need at least two rows each");
    if (row_cap < 2) throw UsageError("row_cap must be >= 2");
    if (alphas.empty()) throw UsageError("alphas must not be empty");
    for (double a : alphas) {
        if (!(a > 0.0 && a <= 100.0)) throw UsageError("alphas must lie in (0, 100]");
    }
    if (!(rdcr_alpha > 0.0 && rdcr_alpha <= 100.0)) throw UsageError("rdcr_alpha must lie in (0, 100]");
    ot.validate();
    gbm.validate();
    std::set<std::string> names;
    for (const auto& g : generators) {
        if (!names.insert(g.name).second) throw UsageError("duplicate generator name '" + g.name + "'");
    }
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    try {
        const json doc = json::parse(text);
        reject_unknown(doc,
                       {"data", "schema", "target", "preprocess", "split", "generators", "fits_per_model",
                        "samples_per_fit", "sample_size", "ot", "coverage", "row_cap", "gbm", "alphas",
                        "rdcr_alpha", "zones", "master_seed"},
                       "experiment config");
        read(doc, "data", cfg.data);
        read(doc, "schema", cfg.schema);
        if (doc.contains("target")) cfg.target = doc.at("target").get<std::string>();

        if (auto it = doc.find("preprocess"); it != doc.end()) {
            reject_unknown(*it, {"drop", "datetime"}, "preprocess");
            read(*it, "drop", cfg.preprocess.drop_columns);
            read(*it, "datetime", cfg.preprocess.datetime_columns);
        }
        if (auto it = doc.find("split"); it != doc.end()) {
            reject_unknown(*it, {"train_size", "holdout_size", "seed"}, "split");
            cfg.train_size = read_count(*it, "train_size", cfg.train_size);
            cfg.holdout_size = read_count(*it, "holdout_size", cfg.holdout_size);
            if (it->contains("seed")) cfg.split_seed = it->at("seed").get<std::uint64_t>();
        }
        if (auto it = doc.find("generators"); it != doc.end()) {
            for (const auto& g : *it) cfg.generators.push_back(parse_generator(g));
        }
        cfg.fits_per_model = read_count(doc, "fits_per_model", cfg.fits_per_model);
        cfg.samples_per_fit = read_count(doc, "samples_per_fit", cfg.samples_per_fit);
        cfg.sample_size = read_count(doc, "sample_size", cfg.sample_size);

        if (auto it = doc.find("ot"); it != doc.end()) {
            reject_unknown(*it, {"solver", "exact_cutoff", "epsilon_fraction", "max_iters", "tolerance", "subsample_cap"},
                           "ot");
            if (it->contains("solver")) cfg.ot.solver = parse_ot_solver(it->at("solver").get<std::string>());
            cfg.ot.exact_cutoff = read_count(*it, "exact_cutoff", cfg.ot.exact_cutoff);
            read(*it, "epsilon_fraction", cfg.ot.sinkhorn_epsilon_fraction);
            cfg.ot.sinkhorn_max_iters = read_count(*it, "max_iters", cfg.ot.sinkhorn_max_iters);
            read(*it, "tolerance", cfg.ot.sinkhorn_tolerance);
            cfg.ot.subsample_cap = read_count(*it, "subsample_cap", cfg.ot.subsample_cap);
        }
        if (auto it = doc.find("coverage"); it != doc.end()) {
            reject_unknown(*it, {"k"}, "coverage");
            cfg.coverage.k = read_count(*it, "k", cfg.coverage.k);
        }
        cfg.row_cap = read_count(doc, "row_cap", cfg.row_cap);
        if (auto it = doc.find("gbm"); it != doc.end()) {
            reject_unknown(*it, {"n_trees", "learning_rate", "max_depth", "min_samples_leaf", "subsample", "seed"},
                           "gbm");
            cfg.gbm.n_trees = read_count(*it, "n_trees", cfg.gbm.n_trees);
            read(*it, "learning_rate", cfg.gbm.learning_rate);
            cfg.gbm.max_depth = read_count(*it, "max_depth", cfg.gbm.max_depth);
            cfg.gbm.min_samples_leaf = read_count(*it, "min_samples_leaf", cfg.gbm.min_samples_leaf);
            read(*it, "subsample", cfg.gbm.subsample);
            if (it->contains("seed")) cfg.gbm_seed = it->at("seed").get<std::uint64_t>();
        }
        read(doc, "alphas", cfg.alphas);
        read(doc, "rdcr_alpha", cfg.rdcr_alpha);
        if (auto it = doc.find("zones"); it != doc.end()) {
            reject_unknown(*it, {"pickup", "dropoff"}, "zones");
            cfg.zone_columns = std::make_pair(it->at("pickup").get<std::string>(), it->at("dropoff").get<std::string>());
        }
        if (doc.contains("master_seed")) cfg.master_seed = doc.at("master_seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("invalid experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    ordered_json doc;
    doc["data"] = cfg.data;
    doc["schema"] = cfg.schema;
    doc["target"] = cfg.target ? ordered_json(*cfg.target) : ordered_json(nullptr);
    doc["preprocess"] = {{"drop", cfg.preprocess.drop_columns}, {"datetime", cfg.preprocess.datetime_columns}};
    ordered_json split = {{"train_size", cfg.train_size}, {"holdout_size", cfg.holdout_size}};
    split["seed"] = cfg.split_seed ? ordered_json(*cfg.split_seed) : ordered_json(nullptr);
    doc["split"] = split;
    ordered_json gens = ordered_json::array();
    for (const auto& g : cfg.generators) {
        ordered_json e;
        e["name"] = g.name;
        if (g.spec) {
            e["kind"] = std::string(to_string(g.spec->kind));
            e["noise_sigma"] = g.spec->noise_sigma;
        } else {
            e["files"] = g.files;
        }
        gens.push_back(e);
    }
    doc["generators"] = gens;
    doc["fits_per_model"] = cfg.fits_per_model;
    doc["samples_per_fit"] = cfg.samples_per_fit;
    doc["sample_size"] = cfg.sample_size;
    doc["ot"] = {{"solver", std::string(to_string(cfg.ot.solver))},
                 {"exact_cutoff", cfg.ot.exact_cutoff},
                 {"epsilon_fraction", cfg.ot.sinkhorn_epsilon_fraction},
                 {"max_iters", cfg.ot.sinkhorn_max_iters},
                 {"tolerance", cfg.ot.sinkhorn_tolerance},
                 {"subsample_cap", cfg.ot.subsample_cap}};
    doc["coverage"] = {{"k", cfg.coverage.k}};
    doc["row_cap"] = cfg.row_cap;
    ordered_json gbm = {{"n_trees", cfg.gbm.n_trees},
                        {"learning_rate", cfg.gbm.learning_rate},
                        {"max_depth", cfg.gbm.max_depth},
                        {"min_samples_leaf", cfg.gbm.min_samples_leaf},
                        {"subsample", cfg.gbm.subsample}};
    gbm["seed"] = cfg.gbm_seed ? ordered_json(*cfg.gbm_seed) : ordered_json(nullptr);
    doc["gbm"] = gbm;
    doc["alphas"] = cfg.alphas;
    doc["rdcr_alpha"] = cfg.rdcr_alpha;
    if (cfg.zone_columns) {
        doc["zones"] = {{"pickup", cfg.zone_columns->first}, {"dropoff", cfg.zone_columns->second}};
    } else {
        doc["zones"] = nullptr;
    }
    doc["master_seed"] = cfg.master_seed;
    return doc.dump();
}

std::uint64_t sample_seed(std::uint64_t master, std::string_view generator, std::size_t fit, std::size_t sample) {
    return derive_seed(master, generator, fit, sample);
}

}  // namespace tripeval
