#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tripeval {

enum class ColumnKind { Categorical, Integer, Float };

std::string_view to_string(ColumnKind kind);
ColumnKind parse_column_kind(std::string_view text);

inline bool is_numeric(ColumnKind kind) { return kind != ColumnKind::Categorical; }

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Float;

    bool operator==(const ColumnSpec&) const = default;
};

// Ordered column layout plus an optional regression target.
// Column names are unique; the target, when set, names a Float column.
class TableSchema {
public:
    TableSchema() = default;
    explicit TableSchema(std::vector<ColumnSpec> columns,
                         std::optional<std::string> target = std::nullopt);

    const std::vector<ColumnSpec>& columns() const { return columns_; }
    std::size_t size() const { return columns_.size(); }
    const ColumnSpec& operator[](std::size_t j) const { return columns_[j]; }

    std::optional<std::size_t> find(std::string_view name) const;
    // Throws DataError("unknown column ...") when absent.
    std::size_t index_of(std::string_view name) const;

    const std::optional<std::string>& target() const { return target_; }
    TableSchema with_target(std::optional<std::string> target) const;

    bool same_columns(const TableSchema& other) const { return columns_ == other.columns_; }
    bool operator==(const TableSchema&) const = default;

private:
    std::vector<ColumnSpec> columns_;
    std::optional<std::string> target_;
};

// {"columns": [{"name": ..., "kind": "categorical"|"integer"|"float"}, ...], "target": ...}
TableSchema parse_schema_json(std::string_view text);
std::string schema_to_json(const TableSchema& schema);
TableSchema load_schema(const std::filesystem::path& path);
void save_schema(const std::filesystem::path& path, const TableSchema& schema);

// Column-major cell storage. Categorical cells live in `text`, numeric cells
// (integer or float) in `number`; exactly one of the two vectors is used.
struct Column {
    ColumnKind kind = ColumnKind::Float;
    std::vector<std::string> text;
    std::vector<double> number;
    std::vector<std::uint8_t> missing;

    std::size_t size() const { return missing.size(); }
};

// Immutable table of trip records.
class DataTable {
public:
    DataTable() = default;
    // Validates column count, kinds and lengths against the schema.
    DataTable(TableSchema schema, std::vector<Column> columns, std::string source = {});

    const TableSchema& schema() const { return schema_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    const Column& column(std::size_t j) const { return columns_[j]; }
    const Column& column(std::string_view name) const { return columns_[schema_.index_of(name)]; }

    bool is_missing(std::size_t row, std::size_t col) const { return columns_[col].missing[row] != 0; }
    const std::string& text(std::size_t row, std::size_t col) const { return columns_[col].text[row]; }
    double number(std::size_t row, std::size_t col) const { return columns_[col].number[row]; }

    bool has_missing() const;

    // Label carried into encodings ("train", "holdout", a generator name...).
    const std::string& source() const { return source_; }
    DataTable with_source(std::string source) const;

    DataTable select_rows(std::span<const std::size_t> rows) const;

    // Cell rendered as it would appear in CSV; missing cells are "".
    std::string format_cell(std::size_t row, std::size_t col) const;

    bool operator==(const DataTable& other) const;

private:
    TableSchema schema_;
    std::vector<Column> columns_;
    std::size_t rows_ = 0;
    std::string source_;
};

// Appends cells column by column and produces a validated DataTable.
class TableBuilder {
public:
    explicit TableBuilder(TableSchema schema);

    // Parses `cell` according to the column kind. Empty or unparseable
    // numeric cells become missing.
    void append_parsed(std::size_t col, std::string_view cell);
    void append_text(std::size_t col, std::string value);
    void append_number(std::size_t col, double value);
    void append_missing(std::size_t col);

    // Convenience for whole rows of unparsed cells.
    void append_row(std::span<const std::string> cells);

    DataTable build(std::string source = {}) &&;

private:
    TableSchema schema_;
    std::vector<Column> columns_;
};

// Parses a numeric cell. Returns nullopt for empty, non-finite or malformed
// text, and for non-integral values in Integer columns.
std::optional<double> parse_number(std::string_view cell, ColumnKind kind);

// Shortest text that round-trips the value ("68739", "0.5", "1e-09").
std::string format_number(double value, ColumnKind kind);

DataTable make_table(const TableSchema& schema, const std::vector<std::vector<std::string>>& rows,
                     std::string source = {});

// ---------------------------------------------------------------------------
// CSV (RFC 4180: comma separated, double-quote quoting, "" escapes a quote,
// quoted fields may span lines). A header row is required.

struct CsvRecord {
    std::size_t line = 0;  // 1-based line the record starts on
    std::vector<std::string> fields;
};

std::vector<CsvRecord> read_csv_records(std::istream& in);
void write_csv_record(std::ostream& out, std::span<const std::string> fields);

// Header must name exactly the schema's columns, in any order. Wrong arity
// rows raise DataError naming the line number.
DataTable read_csv(std::istream& in, const TableSchema& schema, std::string source = {});
DataTable load_csv(const std::filesystem::path& path, const TableSchema& schema);

void write_csv(std::ostream& out, const DataTable& table);
void save_csv(const std::filesystem::path& path, const DataTable& table);

// ---------------------------------------------------------------------------
// Preprocessing

struct DateTimeParts {
    int weekday = 0;       // 0 = Monday ... 6 = Sunday
    double seconds = 0.0;  // seconds since midnight
};

// Accepts "YYYY-MM-DD hh:mm:ss" and "MM/DD/YYYY hh:mm:ss AM|PM".
std::optional<DateTimeParts> parse_datetime(std::string_view text);

struct PreprocessSpec {
    std::vector<std::string> drop_columns;
    std::vector<std::string> datetime_columns;
};

struct PreprocessResult {
    DataTable table;
    std::size_t rows_removed = 0;          // rows dropped for any missing cell
    std::size_t datetime_parse_failures = 0;  // subset of rows_removed
    std::vector<std::string> absent_drop_columns;  // already gone (or never present)
};

// Drops the listed columns, splits each datetime column `c` into
// `c_weekday` (Categorical "0".."6") and `c_time` (Float seconds), then
// removes every row with a missing cell. Names that were already handled by
// an earlier pass are skipped, so the operation is idempotent.
PreprocessResult preprocess_trips(const DataTable& table, const PreprocessSpec& spec);

// ---------------------------------------------------------------------------
// Train / holdout split

struct SplitSpec {
    std::size_t train_size = 40000;
    std::size_t holdout_size = 20000;
    std::uint64_t seed = 0;
};

struct TrainHoldout {
    DataTable train;
    DataTable holdout;
};

// Disjoint uniform samples without replacement. Rows keep their original
// relative order within each part.
TrainHoldout split(const DataTable& table, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Numeric embedding: one-hot categorical + min-max numeric.

struct EncodedColumn {
    std::string name;
    ColumnKind kind = ColumnKind::Float;
    std::size_t offset = 0;  // first encoded column
    std::size_t width = 0;   // 1 for numeric, vocabulary size for categorical
    double min = 0.0;
    double max = 0.0;
    std::vector<std::string> vocabulary;  // sorted lexicographically
};

// Row-major n x m matrix of encoded features.
class EncodedMatrix {
public:
    EncodedMatrix() = default;
    EncodedMatrix(std::size_t rows, std::size_t cols, std::vector<double> data,
                  std::uint64_t fingerprint = 0, std::string source = {});

    // Builds a matrix from explicit rows (tests, raw numeric data).
    static EncodedMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                   std::uint64_t fingerprint = 0, std::string source = {});

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    std::span<const double> row(std::size_t i) const { return {row_ptr(i), cols_}; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }

    // Identifies the encoder that produced the matrix; distance metrics
    // require equal fingerprints.
    std::uint64_t fingerprint() const { return fingerprint_; }
    const std::string& source() const { return source_; }

    EncodedMatrix select_rows(std::span<const std::size_t> rows) const;
    EncodedMatrix scaled(double factor) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
    std::uint64_t fingerprint_ = 0;
    std::string source_;
};

// Throws UsageError unless both matrices come from the same encoder.
void require_same_encoding(const EncodedMatrix& a, const EncodedMatrix& b, std::string_view what);

// Encoding descriptor fitted on one table and applied to others.
class Encoder {
public:
    // Numeric ranges from the table's min/max; vocabularies from observed
    // categories. Columns named in `exclude` are left out of the encoding.
    // Requires a table without missing cells.
    static Encoder fit(const DataTable& table, std::span<const std::string> exclude = {});

    // Numeric cells are min-max scaled and clamped to [0, 1]; a constant
    // column encodes to 0. Unseen categories give an all-zero block.
    EncodedMatrix encode(const DataTable& table) const;

    std::size_t width() const { return width_; }
    const std::vector<EncodedColumn>& columns() const { return columns_; }
    const TableSchema& source_schema() const { return schema_; }
    std::uint64_t fingerprint() const { return fingerprint_; }

    // The encoded column for a source column name, or nullptr if excluded.
    const EncodedColumn* find(std::string_view name) const;

private:
    TableSchema schema_;
    std::vector<EncodedColumn> columns_;
    std::vector<std::size_t> source_index_;  // column in schema_ per encoded column
    std::size_t width_ = 0;
    std::uint64_t fingerprint_ = 0;
};

}  // namespace tripeval
