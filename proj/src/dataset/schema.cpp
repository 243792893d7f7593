#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tripeval/dataset.hpp"
#include "tripeval/error.hpp"

namespace tripeval {

std::string_view to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Integer: return "integer";
        case ColumnKind::Float: return "float";
    }
    return "unknown";
}

ColumnKind parse_column_kind(std::string_view text) {
    if (text == "categorical") return ColumnKind::Categorical;
    if (text == "integer") return ColumnKind::Integer;
    if (text == "float") return ColumnKind::Float;
    throw DataError("unknown column kind '" + std::string(text) + "'");
}

TableSchema::TableSchema(std::vector<ColumnSpec> columns, std::optional<std::string> target)
    : columns_(std::move(columns)), target_(std::move(target)) {
    std::set<std::string_view> seen;
    for (const auto& c : columns_) {
        if (c.name.empty()) throw DataError("schema column with empty name");
        if (!seen.insert(c.name).second) throw DataError("duplicate column '" + c.name + "'");
    }
    if (target_) {
        const auto j = find(*target_);
        if (!j) throw DataError("target column '" + *target_ + "' is not in the schema");
        if (columns_[*j].kind != ColumnKind::Float) {
            throw DataError("target column '" + *target_ + "' must be a float column");
        }
    }
}

std::optional<std::size_t> TableSchema::find(std::string_view name) const {
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (columns_[j].name == name) return j;
    }
    return std::nullopt;
}

std::size_t TableSchema::index_of(std::string_view name) const {
    if (auto j = find(name)) return *j;
    throw DataError("unknown column '" + std::string(name) + "'");
}

TableSchema TableSchema::with_target(std::optional<std::string> target) const {
    return TableSchema(columns_, std::move(target));
}

TableSchema parse_schema_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array()) {
        throw DataError("schema must be an object with a \"columns\" array");
    }
    std::vector<ColumnSpec> columns;
    for (const auto& entry : doc["columns"]) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("kind") ||
            !entry["name"].is_string() || !entry["kind"].is_string()) {
            throw DataError("schema columns need string \"name\" and \"kind\" fields");
        }
        columns.push_back({entry["name"].get<std::string>(),
                           parse_column_kind(entry["kind"].get<std::string>())});
    }
    std::optional<std::string> target;
    if (doc.contains("target") && !doc["target"].is_null()) {
        if (!doc["target"].is_string()) throw DataError("schema \"target\" must be a string");
        target = doc["target"].get<std::string>();
    }
    return TableSchema(std::move(columns), std::move(target));
}

std::string schema_to_json(const TableSchema& schema) {
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : schema.columns()) {
        doc["columns"].push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}});
    }
    if (schema.target()) doc["target"] = *schema.target();
    return doc.dump(2) + "\n";
}

TableSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schema file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_schema_json(buffer.str());
}

void save_schema(const std::filesystem::path& path, const TableSchema& schema) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write schema file " + path.string());
    out << schema_to_json(schema);
}

}  // namespace tripeval
