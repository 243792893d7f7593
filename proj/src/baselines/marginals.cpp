#include <algorithm>
#include <map>

#include "tripeval/baselines.hpp"
#include "tripeval/error.hpp"

namespace tripeval {

Marginal Marginal::fit(const Column& column) {
    const std::size_t n = column.size();
    if (n == 0) throw DataError("cannot fit a marginal on an empty column");
    for (auto m : column.missing) {
        if (m) throw DataError("cannot fit a marginal on a column with missing cells");
    }

    Marginal out;
    out.kind_ = column.kind;
    const double dn = static_cast<double>(n);
    if (is_numeric(column.kind)) {
        std::vector<double> sorted = column.number;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && sorted[j] == sorted[i]) ++j;
            // mean of (r + 0.5) / n over ranks r = i .. j-1
            const double mid_rank = 0.5 * static_cast<double>(i + j - 1) + 0.5;
            out.values_.push_back(sorted[i]);
            out.probabilities_.push_back(mid_rank / dn);
            i = j;
        }
    } else {
        std::map<std::string, std::size_t> counts;
        for (const auto& v : column.text) ++counts[v];
        std::size_t running = 0;
        for (const auto& [value, count] : counts) {
            running += count;
            out.categories_.push_back(value);
            out.cumulative_.push_back(static_cast<double>(running) / dn);
        }
        out.cumulative_.back() = 1.0;
    }
    return out;
}

double Marginal::cdf(double value) const {
    if (!is_numeric(kind_)) throw UsageError("numeric cdf on a categorical marginal");
    if (value <= values_.front()) return probabilities_.front();
    if (value >= values_.back()) return probabilities_.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(values_.begin(), values_.end(), value) - values_.begin());
    const std::size_t lo = hi - 1;
    if (values_[lo] == value) return probabilities_[lo];
    const double t = (value - values_[lo]) / (values_[hi] - values_[lo]);
    return probabilities_[lo] + t * (probabilities_[hi] - probabilities_[lo]);
}

double Marginal::cdf(std::string_view category) const {
    if (is_numeric(kind_)) throw UsageError("categorical cdf on a numeric marginal");
    const auto it = std::lower_bound(categories_.begin(), categories_.end(), category);
    if (it == categories_.end() || *it != category) {
        throw DataError("category '" + std::string(category) + "' not seen when fitting");
    }
    const auto k = static_cast<std::size_t>(it - categories_.begin());
    const double lo = k == 0 ? 0.0 : cumulative_[k - 1];
    return 0.5 * (lo + cumulative_[k]);
}

double Marginal::quantile(double u) const {
    if (!is_numeric(kind_)) throw UsageError("numeric quantile on a categorical marginal");
    if (u <= probabilities_.front()) return values_.front();
    if (u >= probabilities_.back()) return values_.back();
    const auto hi = static_cast<std::size_t>(
        std::upper_bound(probabilities_.begin(), probabilities_.end(), u) - probabilities_.begin());
    const std::size_t lo = hi - 1;
    const double t = (u - probabilities_[lo]) / (probabilities_[hi] - probabilities_[lo]);
    return values_[lo] + t * (values_[hi] - values_[lo]);
}

const std::string& Marginal::category_at(double u) const {
    if (is_numeric(kind_)) throw UsageError("category_at on a numeric marginal");
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t k = it == cumulative_.end() ? categories_.size() - 1
                                                  : static_cast<std::size_t>(it - cumulative_.begin());
    return categories_[k];
}

}  // namespace tripeval
