#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "tripeval/dataset.hpp"
#include "tripeval/error.hpp"

namespace tripeval {

std::vector<CsvRecord> read_csv_records(std::istream& in) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    std::size_t line = 1;
    bool in_quotes = false;
    bool field_started = false;  // record has content (so a blank line is skipped)
    current.line = line;

    auto finish_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
    };
    auto finish_record = [&] {
        if (field_started || !current.fields.empty()) {
            finish_field();
            records.push_back(std::move(current));
        }
        current = CsvRecord{};
        field_started = false;
    };

    char ch;
    while (in.get(ch)) {
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                field_started = true;
                finish_field();
                break;
            case '\r':
                if (in.peek() == '\n') break;
                [[fallthrough]];
            case '\n':
                finish_record();
                ++line;
                current.line = line;
                break;
            default:
                field_started = true;
                field.push_back(ch);
        }
    }
    if (in_quotes) {
        throw DataError("unterminated quoted field starting on line " + std::to_string(current.line));
    }
    finish_record();
    return records;
}

void write_csv_record(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\r\n") != std::string::npos) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

DataTable read_csv(std::istream& in, const TableSchema& schema, std::string source) {
    const auto records = read_csv_records(in);
    if (records.empty()) throw DataError("CSV input has no header row");

    const auto& header = records.front().fields;
    std::vector<std::size_t> position(header.size());
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string_view name = header[i];
        if (i == 0 && name.starts_with("\xEF\xBB\xBF")) name.remove_prefix(3);
        const auto j = schema.find(name);
        if (!j) throw DataError("unknown column '" + std::string(name) + "' in CSV header");
        if (!seen.insert(*j).second) throw DataError("duplicate column '" + std::string(name) + "' in CSV header");
        position[i] = *j;
    }
    if (seen.size() != schema.size()) {
        for (const auto& c : schema.columns()) {
            bool present = false;
            for (std::size_t i = 0; i < header.size(); ++i) present |= schema[position[i]].name == c.name;
            if (!present) throw DataError("CSV header is missing column '" + c.name + "'");
        }
    }

    // Cells arrive in header order; the builder wants schema order.
    std::vector<std::size_t> header_of(schema.size());
    for (std::size_t i = 0; i < header.size(); ++i) header_of[position[i]] = i;

    TableBuilder builder(schema);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size()) {
            throw DataError("line " + std::to_string(rec.line) + ": expected " +
                            std::to_string(header.size()) + " fields, found " +
                            std::to_string(rec.fields.size()));
        }
        for (std::size_t j = 0; j < schema.size(); ++j) builder.append_parsed(j, rec.fields[header_of[j]]);
    }
    return std::move(builder).build(std::move(source));
}

DataTable load_csv(const std::filesystem::path& path, const TableSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open CSV file " + path.string());
    return read_csv(in, schema, path.stem().string());
}

void write_csv(std::ostream& out, const DataTable& table) {
    std::vector<std::string> fields;
    for (const auto& c : table.schema().columns()) fields.push_back(c.name);
    write_csv_record(out, fields);
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.cols(); ++j) fields[j] = table.format_cell(i, j);
        write_csv_record(out, fields);
    }
}

void save_csv(const std::filesystem::path& path, const DataTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write CSV file " + path.string());
    write_csv(out, table);
}

}  // namespace tripeval
