#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "tripeval/baselines.hpp"
#include "tripeval/error.hpp"
#include "tripeval/rng.hpp"

namespace tripeval {
namespace {

const boost::math::normal kStandardNormal;

// Keeps Phi^-1 finite when the latent draw lands far in a tail.
constexpr double kUniformFloor = 1e-12;

void require_fit_input(const DataTable& train) {
    if (train.rows() == 0) throw DataError("cannot fit a generator on an empty table");
    if (train.has_missing()) throw DataError("cannot fit a generator on a table with missing cells");
}

std::vector<Marginal> fit_marginals(const DataTable& train) {
    std::vector<Marginal> out;
    out.reserve(train.cols());
    for (std::size_t j = 0; j < train.cols(); ++j) out.push_back(Marginal::fit(train.column(j)));
    return out;
}

std::vector<Column> empty_columns(const TableSchema& schema, std::size_t n) {
    std::vector<Column> cols(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
        cols[j].kind = schema[j].kind;
        cols[j].missing.assign(n, 0);
        if (is_numeric(schema[j].kind)) {
            cols[j].number.resize(n);
        } else {
            cols[j].text.resize(n);
        }
    }
    return cols;
}

void put(Column& col, const Marginal& marginal, std::size_t row, double u) {
    if (is_numeric(col.kind)) {
        double v = marginal.quantile(u);
        if (col.kind == ColumnKind::Integer) v = std::nearbyint(v);
        col.number[row] = v;
    } else {
        col.text[row] = marginal.category_at(u);
    }
}

// Clips eigenvalues below `floor`, rebuilds, and rescales to a unit diagonal.
Eigen::MatrixXd nearest_correlation(const Eigen::MatrixXd& c, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
    if (eig.info() != Eigen::Success) throw NumericError("copula: eigen decomposition failed");
    Eigen::VectorXd values = eig.eigenvalues().cwiseMax(floor);
    Eigen::MatrixXd r = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
    const Eigen::VectorXd scale = r.diagonal().cwiseSqrt().cwiseInverse();
    r = scale.asDiagonal() * r * scale.asDiagonal();
    r = 0.5 * (r + r.transpose());
    r.diagonal().setOnes();
    return r;
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::GaussianCopula: return "gaussian_copula";
        case GeneratorKind::IndependentMarginals: return "independent_marginals";
        case GeneratorKind::NoisyMemorizer: return "noisy_memorizer";
    }
    return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view text) {
    if (text == "gaussian_copula") return GeneratorKind::GaussianCopula;
    if (text == "independent_marginals") return GeneratorKind::IndependentMarginals;
    if (text == "noisy_memorizer") return GeneratorKind::NoisyMemorizer;
    throw UsageError("unknown generator kind '" + std::string(text) + "'");
}

void GeneratorSpec::validate() const {
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw UsageError("noise_sigma must be >= 0");
}

std::unique_ptr<GaussianCopula> GaussianCopula::fit(const DataTable& train) {
    require_fit_input(train);
    auto model = std::unique_ptr<GaussianCopula>(new GaussianCopula());
    model->schema_ = train.schema();
    model->marginals_ = fit_marginals(train);

    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    Eigen::MatrixXd z(n, d);
    for (std::size_t j = 0; j < d; ++j) {
        const Column& col = train.column(j);
        const Marginal& m = model->marginals_[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double u = is_numeric(col.kind) ? m.cdf(col.number[i]) : m.cdf(col.text[i]);
            z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = boost::math::quantile(kStandardNormal, u);
        }
    }

    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    if (n > 1) {
        const Eigen::RowVectorXd mean = z.colwise().mean();
        z.rowwise() -= mean;
        const Eigen::MatrixXd cov = z.transpose() * z;
        for (Eigen::Index a = 0; a < corr.rows(); ++a) {
            for (Eigen::Index b = 0; b < a; ++b) {
                const double denom = std::sqrt(cov(a, a) * cov(b, b));
                // point-mass columns stay uncorrelated
                const double r = denom > 0.0 ? std::clamp(cov(a, b) / denom, -1.0, 1.0) : 0.0;
                corr(a, b) = r;
                corr(b, a) = r;
            }
        }
        corr = nearest_correlation(corr, 1e-10);
    }

    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success) throw NumericError("copula: correlation matrix is not positive definite");
    const Eigen::MatrixXd lower = llt.matrixL();

    model->correlation_.resize(d * d);
    model->cholesky_.resize(d * d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            const auto ia = static_cast<Eigen::Index>(a);
            const auto ib = static_cast<Eigen::Index>(b);
            model->correlation_[a * d + b] = corr(ia, ib);
            model->cholesky_[a * d + b] = lower(ia, ib);
        }
    }
    return model;
}

DataTable GaussianCopula::sample(std::size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    const std::size_t d = dimension();
    auto cols = empty_columns(schema_, n);
    std::vector<double> eps(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& e : eps) e = rng.normal();
        for (std::size_t a = 0; a < d; ++a) {
            const double* l = cholesky_.data() + a * d;
            double z = 0.0;
            for (std::size_t b = 0; b <= a; ++b) z += l[b] * eps[b];
            const double u = std::clamp(boost::math::cdf(kStandardNormal, z), kUniformFloor, 1.0 - kUniformFloor);
            put(cols[a], marginals_[a], i, u);
        }
    }
    return DataTable(schema_, std::move(cols), std::string(to_string(kind())));
}

std::unique_ptr<IndependentMarginals> IndependentMarginals::fit(const DataTable& train) {
    require_fit_input(train);
    auto model = std::unique_ptr<IndependentMarginals>(new IndependentMarginals());
    model->schema_ = train.schema();
    model->marginals_ = fit_marginals(train);
    return model;
}

DataTable IndependentMarginals::sample(std::size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    auto cols = empty_columns(schema_, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) put(cols[j], marginals_[j], i, rng.uniform());
    }
    return DataTable(schema_, std::move(cols), std::string(to_string(kind())));
}

NoisyMemorizer::NoisyMemorizer(DataTable train, double noise_sigma)
    : train_(std::move(train)), sigma_(noise_sigma) {
    require_fit_input(train_);
    if (!(sigma_ >= 0.0)) throw UsageError("noise_sigma must be >= 0");
    span_.assign(train_.cols(), 0.0);
    for (std::size_t j = 0; j < train_.cols(); ++j) {
        const Column& c = train_.column(j);
        if (!is_numeric(c.kind)) continue;
        const auto [lo, hi] = std::minmax_element(c.number.begin(), c.number.end());
        span_[j] = *hi - *lo;
    }
}

DataTable NoisyMemorizer::sample(std::size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = static_cast<std::size_t>(rng.below(train_.rows()));
    const DataTable picked = train_.select_rows(rows);
    if (sigma_ == 0.0) return picked.with_source(std::string(to_string(kind())));

    std::vector<Column> cols;
    cols.reserve(picked.cols());
    for (std::size_t j = 0; j < picked.cols(); ++j) {
        Column c = picked.column(j);
        if (is_numeric(c.kind) && span_[j] > 0.0) {
            for (double& v : c.number) {
                v += sigma_ * span_[j] * rng.normal();
                if (c.kind == ColumnKind::Integer) v = std::nearbyint(v);
            }
        }
        cols.push_back(std::move(c));
    }
    return DataTable(picked.schema(), std::move(cols), std::string(to_string(kind())));
}

std::unique_ptr<Generator> fit_generator(const DataTable& train, const GeneratorSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case GeneratorKind::GaussianCopula: return GaussianCopula::fit(train);
        case GeneratorKind::IndependentMarginals: return IndependentMarginals::fit(train);
        case GeneratorKind::NoisyMemorizer: return std::make_unique<NoisyMemorizer>(train, spec.noise_sigma);
    }
    throw UsageError("unknown generator kind");
}

DataTable sample(const Generator& generator, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw UsageError("sample size must be >= 1");
    return generator.sample(n, seed);
}

}  // namespace tripeval
