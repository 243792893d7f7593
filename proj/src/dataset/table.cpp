#include <charconv>
#include <cmath>
#include <cstring>

#include "tripeval/dataset.hpp"
#include "tripeval/error.hpp"

namespace tripeval {

std::optional<double> parse_number(std::string_view cell, ColumnKind kind) {
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
        cell.remove_suffix(1);
    }
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    if (kind == ColumnKind::Integer && value != std::nearbyint(value)) return std::nullopt;
    return value;
}

std::string format_number(double value, ColumnKind kind) {
    if (kind == ColumnKind::Integer && std::fabs(value) < 9.0e15) {
        return std::to_string(static_cast<long long>(value));
    }
    if (value == 0.0) return "0";  // drop the sign of -0.0
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

DataTable::DataTable(TableSchema schema, std::vector<Column> columns, std::string source)
    : schema_(std::move(schema)), columns_(std::move(columns)), source_(std::move(source)) {
    if (columns_.size() != schema_.size()) {
        throw DataError("table has " + std::to_string(columns_.size()) + " columns, schema has " +
                        std::to_string(schema_.size()));
    }
    rows_ = columns_.empty() ? 0 : columns_.front().size();
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        const Column& c = columns_[j];
        if (c.kind != schema_[j].kind) {
            throw DataError("column '" + schema_[j].name + "' kind does not match the schema");
        }
        const std::size_t cells = is_numeric(c.kind) ? c.number.size() : c.text.size();
        if (c.size() != rows_ || cells != rows_) {
            throw DataError("column '" + schema_[j].name + "' has inconsistent length");
        }
    }
}

bool DataTable::has_missing() const {
    for (const auto& c : columns_) {
        for (auto m : c.missing) {
            if (m) return true;
        }
    }
    return false;
}

DataTable DataTable::with_source(std::string source) const {
    DataTable copy = *this;
    copy.source_ = std::move(source);
    return copy;
}

DataTable DataTable::select_rows(std::span<const std::size_t> rows) const {
    std::vector<Column> out(columns_.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        const Column& src = columns_[j];
        Column& dst = out[j];
        dst.kind = src.kind;
        dst.missing.reserve(rows.size());
        if (is_numeric(src.kind)) {
            dst.number.reserve(rows.size());
        } else {
            dst.text.reserve(rows.size());
        }
        for (std::size_t r : rows) {
            if (r >= rows_) throw UsageError("row index out of range");
            dst.missing.push_back(src.missing[r]);
            if (is_numeric(src.kind)) {
                dst.number.push_back(src.number[r]);
            } else {
                dst.text.push_back(src.text[r]);
            }
        }
    }
    return DataTable(schema_, std::move(out), source_);
}

std::string DataTable::format_cell(std::size_t row, std::size_t col) const {
    if (is_missing(row, col)) return {};
    const Column& c = columns_[col];
    if (is_numeric(c.kind)) return format_number(c.number[row], c.kind);
    return c.text[row];
}

bool DataTable::operator==(const DataTable& other) const {
    if (!(schema_ == other.schema_) || rows_ != other.rows_) return false;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        const Column& a = columns_[j];
        const Column& b = other.columns_[j];
        if (a.missing != b.missing || a.text != b.text) return false;
        if (a.number.size() != b.number.size()) return false;
        // Bitwise comparison: determinism checks must not hide -0.0 vs 0.0.
        if (!a.number.empty() &&
            std::memcmp(a.number.data(), b.number.data(), a.number.size() * sizeof(double)) != 0) {
            return false;
        }
    }
    return true;
}

TableBuilder::TableBuilder(TableSchema schema) : schema_(std::move(schema)) {
    columns_.resize(schema_.size());
    for (std::size_t j = 0; j < schema_.size(); ++j) columns_[j].kind = schema_[j].kind;
}

void TableBuilder::append_parsed(std::size_t col, std::string_view cell) {
    Column& c = columns_.at(col);
    if (is_numeric(c.kind)) {
        if (auto v = parse_number(cell, c.kind)) {
            append_number(col, *v);
        } else {
            append_missing(col);
        }
    } else if (cell.empty()) {
        append_missing(col);
    } else {
        append_text(col, std::string(cell));
    }
}

void TableBuilder::append_text(std::size_t col, std::string value) {
    Column& c = columns_.at(col);
    if (is_numeric(c.kind)) throw UsageError("append_text on numeric column " + schema_[col].name);
    c.text.push_back(std::move(value));
    c.missing.push_back(0);
}

void TableBuilder::append_number(std::size_t col, double value) {
    Column& c = columns_.at(col);
    if (!is_numeric(c.kind)) throw UsageError("append_number on categorical column " + schema_[col].name);
    if (!std::isfinite(value)) {
        append_missing(col);
        return;
    }
    c.number.push_back(value);
    c.missing.push_back(0);
}

void TableBuilder::append_missing(std::size_t col) {
    Column& c = columns_.at(col);
    if (is_numeric(c.kind)) {
        c.number.push_back(0.0);
    } else {
        c.text.emplace_back();
    }
    c.missing.push_back(1);
}

void TableBuilder::append_row(std::span<const std::string> cells) {
    if (cells.size() != columns_.size()) {
        throw DataError("row has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(columns_.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) append_parsed(j, cells[j]);
}

DataTable TableBuilder::build(std::string source) && {
    return DataTable(std::move(schema_), std::move(columns_), std::move(source));
}

DataTable make_table(const TableSchema& schema, const std::vector<std::vector<std::string>>& rows,
                     std::string source) {
    TableBuilder builder(schema);
    for (const auto& r : rows) builder.append_row(r);
    return std::move(builder).build(std::move(source));
}

}  // namespace tripeval
