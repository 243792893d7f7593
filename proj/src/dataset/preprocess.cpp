#include <algorithm>
#include <charconv>
#include <chrono>

#include "tripeval/dataset.hpp"
#include "tripeval/error.hpp"

namespace tripeval {
namespace {

bool read_int(std::string_view& s, std::size_t digits, int& out) {
    if (s.size() < digits) return false;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + digits, out);
    if (ec != std::errc() || end != s.data() + digits) return false;
    s.remove_prefix(digits);
    return true;
}

bool expect(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

std::optional<DateTimeParts> finish(int year, int month, int day, int hour, int minute, int second) {
    using namespace std::chrono;
    const year_month_day date{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                              std::chrono::day{static_cast<unsigned>(day)}};
    if (!date.ok() || hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 59) {
        return std::nullopt;
    }
    const weekday wd{sys_days{date}};
    // iso_encoding: Monday = 1 ... Sunday = 7.
    return DateTimeParts{static_cast<int>(wd.iso_encoding()) - 1,
                         static_cast<double>(hour * 3600 + minute * 60 + second)};
}

std::optional<DateTimeParts> parse_iso(std::string_view s) {
    int year, month, day, hour, minute, second;
    if (!read_int(s, 4, year) || !expect(s, '-') || !read_int(s, 2, month) || !expect(s, '-') ||
        !read_int(s, 2, day)) {
        return std::nullopt;
    }
    if (s.empty() || (s.front() != ' ' && s.front() != 'T')) return std::nullopt;
    s.remove_prefix(1);
    if (!read_int(s, 2, hour) || !expect(s, ':') || !read_int(s, 2, minute) || !expect(s, ':') ||
        !read_int(s, 2, second) || !s.empty()) {
        return std::nullopt;
    }
    return finish(year, month, day, hour, minute, second);
}

std::optional<DateTimeParts> parse_us(std::string_view s) {
    int year, month, day, hour, minute, second;
    if (!read_int(s, 2, month) || !expect(s, '/') || !read_int(s, 2, day) || !expect(s, '/') ||
        !read_int(s, 4, year) || !expect(s, ' ') || !read_int(s, 2, hour) || !expect(s, ':') ||
        !read_int(s, 2, minute) || !expect(s, ':') || !read_int(s, 2, second) || !expect(s, ' ')) {
        return std::nullopt;
    }
    if (hour < 1 || hour > 12) return std::nullopt;
    if (s == "AM") {
        if (hour == 12) hour = 0;
    } else if (s == "PM") {
        if (hour != 12) hour += 12;
    } else {
        return std::nullopt;
    }
    return finish(year, month, day, hour, minute, second);
}

bool contains(const std::vector<std::string>& names, std::string_view name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

std::optional<DateTimeParts> parse_datetime(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (text.size() >= 5 && text[4] == '-') return parse_iso(text);
    if (text.size() >= 3 && text[2] == '/') return parse_us(text);
    return std::nullopt;
}

PreprocessResult preprocess_trips(const DataTable& table, const PreprocessSpec& spec) {
    const TableSchema& schema = table.schema();
    const auto& target = schema.target();

    for (const auto& name : spec.drop_columns) {
        if (target && *target == name) {
            throw UsageError("cannot drop the target column '" + name + "'");
        }
    }
    for (const auto& name : spec.datetime_columns) {
        if (contains(spec.drop_columns, name)) {
            throw UsageError("column '" + name + "' is both dropped and split as a datetime");
        }
        if (target && *target == name) {
            throw UsageError("the target column '" + name + "' cannot be a datetime column");
        }
        if (auto j = schema.find(name)) {
            if (schema[*j].kind != ColumnKind::Categorical) {
                throw UsageError("datetime column '" + name + "' must hold text (categorical) cells");
            }
        } else if (!schema.find(name + "_weekday") || !schema.find(name + "_time")) {
            throw DataError("unknown column '" + name + "'");
        }
    }

    PreprocessResult result;
    for (const auto& name : spec.drop_columns) {
        if (!schema.find(name)) result.absent_drop_columns.push_back(name);
    }

    std::vector<ColumnSpec> out_specs;
    std::vector<Column> out_columns;
    std::vector<std::uint8_t> datetime_failed(table.rows(), 0);

    for (std::size_t j = 0; j < schema.size(); ++j) {
        const ColumnSpec& spec_j = schema[j];
        if (contains(spec.drop_columns, spec_j.name)) continue;
        if (!contains(spec.datetime_columns, spec_j.name)) {
            out_specs.push_back(spec_j);
            out_columns.push_back(table.column(j));
            continue;
        }
        Column weekday{ColumnKind::Categorical, {}, {}, {}};
        Column time{ColumnKind::Float, {}, {}, {}};
        for (std::size_t i = 0; i < table.rows(); ++i) {
            std::optional<DateTimeParts> parts;
            if (!table.is_missing(i, j)) parts = parse_datetime(table.text(i, j));
            if (parts) {
                weekday.text.push_back(std::to_string(parts->weekday));
                weekday.missing.push_back(0);
                time.number.push_back(parts->seconds);
                time.missing.push_back(0);
            } else {
                datetime_failed[i] = 1;
                weekday.text.emplace_back();
                weekday.missing.push_back(1);
                time.number.push_back(0.0);
                time.missing.push_back(1);
            }
        }
        out_specs.push_back({spec_j.name + "_weekday", ColumnKind::Categorical});
        out_columns.push_back(std::move(weekday));
        out_specs.push_back({spec_j.name + "_time", ColumnKind::Float});
        out_columns.push_back(std::move(time));
    }

    TableSchema out_schema(std::move(out_specs), target);
    DataTable expanded(out_schema, std::move(out_columns), table.source());

    std::vector<std::size_t> keep;
    keep.reserve(expanded.rows());
    for (std::size_t i = 0; i < expanded.rows(); ++i) {
        bool complete = true;
        for (std::size_t j = 0; j < expanded.cols() && complete; ++j) complete = !expanded.is_missing(i, j);
        if (complete) {
            keep.push_back(i);
        } else {
            ++result.rows_removed;
            if (datetime_failed[i]) ++result.datetime_parse_failures;
        }
    }
    result.table = keep.size() == expanded.rows() ? std::move(expanded) : expanded.select_rows(keep);
    return result;
}

}  // namespace tripeval
