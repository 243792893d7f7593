#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tripeval/dataset.hpp"

namespace tripeval {

enum class GeneratorKind { GaussianCopula, IndependentMarginals, NoisyMemorizer };

std::string_view to_string(GeneratorKind kind);
// "gaussian_copula", "independent_marginals", "noisy_memorizer".
GeneratorKind parse_generator_kind(std::string_view text);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::GaussianCopula;
    double noise_sigma = 0.01;  // memorizer noise, in min-max encoded units
    std::uint64_t seed = 0;  // recorded only; the built-in fits are deterministic

    void validate() const;
};

// One column's marginal distribution.
//
// Numeric: an empirical CDF through the points (v_k, p_k), where v_k are the
// distinct values and p_k the mean of (rank + 0.5) / n over the ties of v_k;
// linear in between, flat outside.
// Categorical: categories in lexicographic order, each owning the interval
// [F_{k-1}, F_k) of the cumulative frequency.
class Marginal {
public:
    static Marginal fit(const Column& column);

    ColumnKind kind() const { return kind_; }

    // Numeric cell -> interpolated CDF value in (0, 1).
    double cdf(double value) const;
    // Categorical cell -> midpoint of its interval. Unknown values throw.
    double cdf(std::string_view category) const;

    double quantile(double u) const;
    const std::string& category_at(double u) const;

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& probabilities() const { return probabilities_; }
    const std::vector<std::string>& categories() const { return categories_; }
    const std::vector<double>& cumulative() const { return cumulative_; }

private:
    ColumnKind kind_ = ColumnKind::Float;
    std::vector<double> values_;
    std::vector<double> probabilities_;
    std::vector<std::string> categories_;
    std::vector<double> cumulative_;  // upper interval ends; last is 1
};

class Generator {
public:
    virtual ~Generator() = default;
    virtual GeneratorKind kind() const = 0;
    // Pure given the seed; the result matches the training schema and has no
    // missing cells.
    virtual DataTable sample(std::size_t n, std::uint64_t seed) const = 0;
};

// Latent Gaussian copula over every column, empirical marginals.
class GaussianCopula final : public Generator {
public:
    static std::unique_ptr<GaussianCopula> fit(const DataTable& train);

    GeneratorKind kind() const override { return GeneratorKind::GaussianCopula; }
    DataTable sample(std::size_t n, std::uint64_t seed) const override;

    std::size_t dimension() const { return marginals_.size(); }
    // Row-major d x d correlation after nearest-PSD repair.
    const std::vector<double>& correlation() const { return correlation_; }
    double correlation(std::size_t i, std::size_t j) const { return correlation_[i * dimension() + j]; }
    const std::vector<Marginal>& marginals() const { return marginals_; }

private:
    TableSchema schema_;
    std::vector<Marginal> marginals_;
    std::vector<double> correlation_;
    std::vector<double> cholesky_;  // lower triangle, row-major
};

class IndependentMarginals final : public Generator {
public:
    static std::unique_ptr<IndependentMarginals> fit(const DataTable& train);

    GeneratorKind kind() const override { return GeneratorKind::IndependentMarginals; }
    DataTable sample(std::size_t n, std::uint64_t seed) const override;

    const std::vector<Marginal>& marginals() const { return marginals_; }

private:
    TableSchema schema_;
    std::vector<Marginal> marginals_;
};

// Resamples training rows with replacement and perturbs numeric cells by
// N(0, sigma^2) in min-max encoded units. Integer cells are rounded.
class NoisyMemorizer final : public Generator {
public:
    NoisyMemorizer(DataTable train, double noise_sigma);

    GeneratorKind kind() const override { return GeneratorKind::NoisyMemorizer; }
    DataTable sample(std::size_t n, std::uint64_t seed) const override;

    std::size_t rows() const { return train_.rows(); }
    double noise_sigma() const { return sigma_; }

private:
    DataTable train_;
    double sigma_ = 0.0;
    std::vector<double> span_;  // max - min per column (0 for categorical)
};

// Train must be preprocessed (no missing cells, at least one row).
std::unique_ptr<Generator> fit_generator(const DataTable& train, const GeneratorSpec& spec);

// Throws UsageError when n == 0.
DataTable sample(const Generator& generator, std::size_t n, std::uint64_t seed);

}  // namespace tripeval
