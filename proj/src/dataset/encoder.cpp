#include <algorithm>
#include <bit>
#include <set>

#include "tripeval/dataset.hpp"
#include "tripeval/error.hpp"
#include "tripeval/rng.hpp"

namespace tripeval {

EncodedMatrix::EncodedMatrix(std::size_t rows, std::size_t cols, std::vector<double> data,
                             std::uint64_t fingerprint, std::string source)
    : rows_(rows), cols_(cols), data_(std::move(data)), fingerprint_(fingerprint), source_(std::move(source)) {
    if (data_.size() != rows_ * cols_) throw UsageError("encoded matrix data size mismatch");
}

EncodedMatrix EncodedMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                       std::uint64_t fingerprint, std::string source) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw UsageError("ragged rows in EncodedMatrix::from_rows");
        data.insert(data.end(), r.begin(), r.end());
    }
    return EncodedMatrix(rows.size(), cols, std::move(data), fingerprint, std::move(source));
}

EncodedMatrix EncodedMatrix::select_rows(std::span<const std::size_t> rows) const {
    std::vector<double> data;
    data.reserve(rows.size() * cols_);
    for (std::size_t r : rows) {
        if (r >= rows_) throw UsageError("row index out of range");
        data.insert(data.end(), row_ptr(r), row_ptr(r) + cols_);
    }
    return EncodedMatrix(rows.size(), cols_, std::move(data), fingerprint_, source_);
}

EncodedMatrix EncodedMatrix::scaled(double factor) const {
    std::vector<double> data = data_;
    for (double& v : data) v *= factor;
    return EncodedMatrix(rows_, cols_, std::move(data), fingerprint_, source_);
}

void require_same_encoding(const EncodedMatrix& a, const EncodedMatrix& b, std::string_view what) {
    if (a.cols() != b.cols() || a.fingerprint() != b.fingerprint()) {
        throw UsageError(std::string(what) + ": inputs were not encoded with the same encoder (" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.cols()) + " columns)");
    }
}

Encoder Encoder::fit(const DataTable& table, std::span<const std::string> exclude) {
    if (table.rows() == 0) throw DataError("cannot fit an encoder on an empty table");
    if (table.has_missing()) throw DataError("cannot fit an encoder on a table with missing cells");

    Encoder enc;
    enc.schema_ = table.schema();
    std::uint64_t fp = hash_string("tripeval-encoder-v1");
    const TableSchema& schema = table.schema();

    for (std::size_t j = 0; j < schema.size(); ++j) {
        const ColumnSpec& spec = schema[j];
        if (std::find(exclude.begin(), exclude.end(), spec.name) != exclude.end()) continue;

        EncodedColumn col;
        col.name = spec.name;
        col.kind = spec.kind;
        col.offset = enc.width_;
        const Column& data = table.column(j);
        if (is_numeric(spec.kind)) {
            const auto [lo, hi] = std::minmax_element(data.number.begin(), data.number.end());
            col.min = *lo;
            col.max = *hi;
            col.width = 1;
        } else {
            std::set<std::string> values(data.text.begin(), data.text.end());
            col.vocabulary.assign(values.begin(), values.end());
            col.width = col.vocabulary.size();
        }
        enc.width_ += col.width;

        fp = mix64(fp ^ hash_string(col.name));
        fp = mix64(fp ^ static_cast<std::uint64_t>(col.kind));
        fp = mix64(fp ^ std::bit_cast<std::uint64_t>(col.min));
        fp = mix64(fp ^ std::bit_cast<std::uint64_t>(col.max));
        for (const auto& v : col.vocabulary) fp = mix64(fp ^ hash_string(v));

        enc.columns_.push_back(std::move(col));
        enc.source_index_.push_back(j);
    }
    enc.fingerprint_ = mix64(fp ^ enc.width_);
    return enc;
}

EncodedMatrix Encoder::encode(const DataTable& table) const {
    if (!table.schema().same_columns(schema_)) {
        throw UsageError("encode: table schema does not match the encoder's source schema");
    }
    if (table.has_missing()) throw DataError("encode: table has missing cells; preprocess it first");

    const std::size_t n = table.rows();
    std::vector<double> data(n * width_, 0.0);
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        const EncodedColumn& col = columns_[c];
        const Column& src = table.column(source_index_[c]);
        if (is_numeric(col.kind)) {
            const double span = col.max - col.min;
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                if (span > 0.0) v = std::clamp((src.number[i] - col.min) / span, 0.0, 1.0);
                data[i * width_ + col.offset] = v;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const auto it = std::lower_bound(col.vocabulary.begin(), col.vocabulary.end(), src.text[i]);
                if (it != col.vocabulary.end() && *it == src.text[i]) {
                    data[i * width_ + col.offset + static_cast<std::size_t>(it - col.vocabulary.begin())] = 1.0;
                }
            }
        }
    }
    return EncodedMatrix(n, width_, std::move(data), fingerprint_, table.source());
}

const EncodedColumn* Encoder::find(std::string_view name) const {
    for (const auto& c : columns_) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

}  // namespace tripeval
