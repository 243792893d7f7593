#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixture.hpp"
#include "tripeval/harness.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "tripeval_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        const auto raw = fixture::make_trips({.rows = 400, .seed = 3, .zones = true, .raw = true});
        tripeval::save_csv(d / "raw.csv", raw);
        tripeval::save_schema(d / "raw.json", raw.schema());
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(TRIPEVAL_CLI) + " " + args + " >" + (work() / "stdout.txt").string() + " 2>" +
                            (work() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string at(const char* name) { return (work() / name).string(); }

}  // namespace

TEST(Cli, Pipeline) {
    ASSERT_EQ(run("preprocess --in " + at("raw.csv") + " --schema " + at("raw.json") + " --out " + at("pre.csv") +
                  " --schema-out " + at("pre.json") + " --drop Ehail_fee --datetime lpep_pickup_datetime"),
              0)
        << slurp(work() / "stderr.txt");
    ASSERT_EQ(run("split --in " + at("pre.csv") + " --schema " + at("pre.json") +
                  " --train-size 200 --holdout-size 150 --seed 1 --train-out " + at("train.csv") + " --holdout-out " +
                  at("holdout.csv")),
              0);
    ASSERT_EQ(run("--simd scalar generate --kind noisy_memorizer --train " + at("train.csv") + " --schema " +
                  at("pre.json") + " --n 100 --seed 2 --out " + at("synth.csv")),
              0)
        << slurp(work() / "stderr.txt");
    ASSERT_EQ(run("dcr --train " + at("train.csv") + " --holdout " + at("holdout.csv") + " --synth " + at("synth.csv") +
                  " --schema " + at("pre.json") + " --out " + at("profile.json")),
              0);
    ASSERT_EQ(run("sweep --profile " + at("profile.json") + " --alphas 5,50"), 0);
    const std::string sweep = slurp(work() / "stdout.txt");
    EXPECT_EQ(sweep.rfind("alpha,d_rs,d_hs,ratio\n5,", 0), 0u) << sweep;

    std::ofstream(work() / "config.json") << R"({
        "data": "raw.csv", "schema": "raw.json",
        "preprocess": {"drop": ["Ehail_fee"], "datetime": ["lpep_pickup_datetime"]},
        "split": {"train_size": 200, "holdout_size": 150},
        "generators": [{"name": "indep", "kind": "independent_marginals"}, {"name": "given", "files": ["synth.csv"]}],
        "fits_per_model": 1, "samples_per_fit": 2, "sample_size": 100,
        "gbm": {"n_trees": 5}, "zones": {"pickup": "PULocationID", "dropoff": "DOLocationID"}, "master_seed": 5
    })";
    ASSERT_EQ(run("--threads 2 evaluate --quiet --config " + at("config.json") + " --out " + at("report.json") +
                  " --sweep-dir " + at("sweeps")),
              0)
        << slurp(work() / "stderr.txt");
    EXPECT_TRUE(fs::exists(work() / "sweeps" / "indep_sweep.csv"));
    ASSERT_EQ(run("report --in " + at("report.json") + " --format markdown"), 0);
    EXPECT_NE(slurp(work() / "stdout.txt").find("indep"), std::string::npos);
    ASSERT_EQ(run("report --in " + at("report.json") + " --format csv --out " + at("report.csv")), 0);
    EXPECT_EQ(slurp(work() / "report.csv").rfind("generator,metric,mean,std,run_count\n", 0), 0u);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("split --in x.csv"), 1);
    EXPECT_EQ(run("report --in " + at("raw.csv") + " --format html"), 1);
    EXPECT_EQ(run("preprocess --in /nonexistent.csv --schema " + at("raw.json") + " --out " + at("x.csv")), 2);
    EXPECT_EQ(run("report --in /nonexistent.json"), 2);
    std::ofstream(work() / "bad.json") << R"({"unknown": true})";
    EXPECT_EQ(run("evaluate --config " + at("bad.json") + " --out " + at("r.json")), 1);
    EXPECT_EQ(run("--simd avx512 sweep --profile x.json"), 1);
    EXPECT_EQ(run("--help"), 0);
}
