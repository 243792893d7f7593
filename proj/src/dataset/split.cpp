#include <algorithm>

#include "tripeval/dataset.hpp"
#include "tripeval/error.hpp"
#include "tripeval/rng.hpp"

namespace tripeval {

TrainHoldout split(const DataTable& table, const SplitSpec& spec) {
    const std::size_t wanted = spec.train_size + spec.holdout_size;
    if (spec.train_size == 0) throw UsageError("train size must be positive");
    if (wanted > table.rows()) {
        throw UsageError("split needs " + std::to_string(wanted) + " rows but the table has " +
                         std::to_string(table.rows()));
    }
    Rng rng(spec.seed);
    auto drawn = sample_without_replacement(table.rows(), wanted, rng);
    std::vector<std::size_t> train(drawn.begin(), drawn.begin() + static_cast<std::ptrdiff_t>(spec.train_size));
    std::vector<std::size_t> holdout(drawn.begin() + static_cast<std::ptrdiff_t>(spec.train_size), drawn.end());
    std::sort(train.begin(), train.end());
    std::sort(holdout.begin(), holdout.end());
    return {table.select_rows(train).with_source("train"), table.select_rows(holdout).with_source("holdout")};
}

}  // namespace tripeval
