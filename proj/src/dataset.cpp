#include "asmf/dataset.hpp"

#include <algorithm>
#include <cctype>

#include "asmf/error.hpp"

namespace asmf {

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(schema.class_arity(), 0);
    for (const Record& r : records)
        if (r.label && *r.label < counts.size()) ++counts[*r.label];
    return counts;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Minimal RFC 4180 field splitter for one physical line.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && trim(cur).empty()) {
            quoted = was_quoted = true;
            cur.clear();
        } else if (c == ',') {
            fields.emplace_back(was_quoted ? cur : std::string(trim(cur)));
            cur.clear();
            was_quoted = false;
        } else {
            cur += c;
        }
    }
    if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quoted field");
    fields.emplace_back(was_quoted ? cur : std::string(trim(cur)));
    return fields;
}

struct Column {
    enum class Kind { attribute, label } kind;
    std::size_t index = 0;
    std::string name;
};

}  // namespace

CsvIngest ingest_csv(const Schema& schema, std::string_view text, const IngestOptions& opts) {
    CsvIngest out;
    out.dataset.schema = schema;

    std::vector<Column> columns;
    bool have_header = false;
    bool have_label_column = false;
    std::size_t line_no = 0;
    std::size_t row_id = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;

        auto fields = split_csv_line(line, line_no);
        if (!have_header) {
            have_header = true;
            std::vector<bool> seen_attr(schema.attribute_count(), false);
            for (const auto& name : fields) {
                if (iequals(name, schema.class_name)) {
                    if (have_label_column) throw DataError("header: duplicate column " + name);
                    have_label_column = true;
                    columns.push_back({Column::Kind::label, 0, schema.class_name});
                    continue;
                }
                auto a = schema.find_attribute(name);
                if (!a) throw DataError("header: unknown column '" + name + "'");
                if (seen_attr[*a]) throw DataError("header: duplicate column " + name);
                seen_attr[*a] = true;
                columns.push_back({Column::Kind::attribute, *a, schema.attributes[*a].name});
            }
            if (opts.require_labels && !have_label_column)
                throw DataError("header: class column " + schema.class_name + " is missing");
            continue;
        }

        ++row_id;
        Record rec;
        rec.row_id = row_id;
        rec.values.assign(schema.attribute_count(), std::nullopt);
        try {
            if (fields.size() != columns.size())
                throw DataError("row " + std::to_string(row_id) + ": expected " + std::to_string(columns.size()) +
                                " cells, found " + std::to_string(fields.size()));
            for (std::size_t c = 0; c < columns.size(); ++c) {
                const std::string& cell = fields[c];
                const Column& col = columns[c];
                auto where = [&] { return "row " + std::to_string(row_id) + ", column " + col.name; };
                if (cell.empty()) throw DataError(where() + ": missing value");
                if (col.kind == Column::Kind::label) {
                    auto k = schema.find_class(cell);
                    if (!k) throw DataError(where() + ": unknown class label '" + cell + "'");
                    rec.label = *k;
                    continue;
                }
                const AttributeDef& attr = schema.attributes[col.index];
                if (auto l = attr.find_level(cell)) {
                    rec.values[col.index] = *l;
                } else if (auto raw = attr.has_bins() ? parse_number(cell) : std::nullopt) {
                    try {
                        rec.values[col.index] = bin_numeric(attr, *raw);
                    } catch (const DataError& e) {
                        throw DataError(where() + ": " + e.what());
                    }
                } else {
                    throw DataError(where() + ": unknown level '" + cell + "'");
                }
            }
        } catch (const DataError& e) {
            if (!opts.skip_invalid) throw;
            out.skipped.push_back({row_id, e.what()});
            continue;
        }
        out.dataset.records.push_back(std::move(rec));
    }
    if (!have_header) throw DataError("no header row");
    return out;
}

std::vector<Violation> validate(const Dataset& dataset, ValidationMode mode) {
    std::vector<Violation> out;
    const Schema& s = dataset.schema;
    if (dataset.empty()) {
        out.push_back({0, "no records"});
        return out;
    }
    for (const Record& r : dataset.records) {
        if (r.values.size() != s.attribute_count()) {
            out.push_back({r.row_id, "record has " + std::to_string(r.values.size()) + " values, schema has " +
                                         std::to_string(s.attribute_count()) + " attributes"});
            continue;
        }
        for (std::size_t a = 0; a < r.values.size(); ++a) {
            const auto& v = r.values[a];
            if (!v) {
                if (mode == ValidationMode::training)
                    out.push_back({r.row_id, "missing value for " + s.attributes[a].name});
            } else if (*v >= s.attributes[a].arity()) {
                out.push_back({r.row_id, "level index out of range for " + s.attributes[a].name});
            }
        }
        if (r.label) {
            if (*r.label >= s.class_arity()) out.push_back({r.row_id, "class index out of range"});
        } else if (mode == ValidationMode::training) {
            out.push_back({r.row_id, "missing class label"});
        }
    }
    return out;
}

std::string export_csv(const Dataset& dataset) {
    const Schema& s = dataset.schema;
    std::vector<std::size_t> present;
    for (std::size_t a = 0; a < s.attribute_count(); ++a) {
        bool any = std::any_of(dataset.records.begin(), dataset.records.end(),
                               [a](const Record& r) { return a < r.values.size() && r.values[a]; });
        if (any || dataset.empty()) present.push_back(a);
    }
    bool labeled = dataset.empty() || std::any_of(dataset.records.begin(), dataset.records.end(),
                                                  [](const Record& r) { return r.label.has_value(); });
    std::string out;
    for (std::size_t i = 0; i < present.size(); ++i) out += (i ? "," : "") + s.attributes[present[i]].name;
    if (labeled) out += (present.empty() ? "" : ",") + s.class_name;
    out += '\n';
    for (const Record& r : dataset.records) {
        for (std::size_t i = 0; i < present.size(); ++i) {
            if (i) out += ',';
            const auto& v = r.values[present[i]];
            if (v) out += s.attributes[present[i]].levels[*v];
        }
        if (labeled) {
            if (!present.empty()) out += ',';
            if (r.label) out += s.class_aliases.empty() ? s.class_levels[*r.label] : s.class_aliases[*r.label];
        }
        out += '\n';
    }
    return out;
}

Dataset bundled_dataset() {
    Schema schema = parse_schema(bundled_schema_text());
    return ingest_csv(schema, bundled_training_csv(), {.skip_invalid = false, .require_labels = true}).dataset;
}

}  // namespace asmf
