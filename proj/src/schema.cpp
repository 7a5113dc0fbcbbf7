#include "asmf/schema.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "asmf/error.hpp"

namespace asmf {

std::string fold_case(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::optional<double> parse_number(std::string_view text) {
    if (iequals(text, "inf") || iequals(text, "+inf")) return std::numeric_limits<double>::infinity();
    if (iequals(text, "-inf")) return -std::numeric_limits<double>::infinity();
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::optional<LevelIndex> AttributeDef::find_level(std::string_view label) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (iequals(levels[i], label)) return static_cast<LevelIndex>(i);
    return std::nullopt;
}

std::optional<AttributeIndex> Schema::find_attribute(std::string_view name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i)
        if (iequals(attributes[i].name, name)) return i;
    return std::nullopt;
}

AttributeIndex Schema::attribute_index(std::string_view name) const {
    if (auto i = find_attribute(name)) return *i;
    throw SchemaError("unknown attribute '" + std::string(name) + "'");
}

const AttributeDef& Schema::attribute(std::string_view name) const {
    return attributes[attribute_index(name)];
}

std::optional<ClassIndex> Schema::find_class(std::string_view label) const {
    for (std::size_t i = 0; i < class_levels.size(); ++i)
        if (iequals(class_levels[i], label)) return static_cast<ClassIndex>(i);
    for (std::size_t i = 0; i < class_aliases.size(); ++i)
        if (iequals(class_aliases[i], label)) return static_cast<ClassIndex>(i);
    return std::nullopt;
}

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto head = static_cast<unsigned char>(s.front());
    if (!std::isalpha(head) && head != '_') return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

bool is_label(std::string_view s) {
    if (s.empty()) return false;
    return std::none_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isspace(c) || c == ',' || c == '{' || c == '}' || c == '=' || c == '"' ||
               c == '[' || c == ']' || c == '(' || c == ')' || c == ':' || c == '#';
    });
}

void check_labels(const std::vector<std::string>& labels, const std::string& owner) {
    if (labels.empty()) throw SchemaError(owner + ": empty level list");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!is_label(l)) throw SchemaError(owner + ": invalid level label '" + l + "'");
        if (!seen.insert(fold_case(l)).second)
            throw SchemaError(owner + ": duplicate level '" + l + "'");
    }
}

void check_class_decl(const Schema& schema) {
    if (!is_identifier(schema.class_name)) throw SchemaError("missing or invalid class declaration");
    const std::string owner = "class " + schema.class_name;
    check_labels(schema.class_levels, owner);
    if (schema.class_aliases.empty()) return;
    if (schema.class_aliases.size() != schema.class_levels.size())
        throw SchemaError(owner + ": labels= count does not match levels= count");
    std::set<std::string> seen;
    for (const auto& l : schema.class_levels) seen.insert(fold_case(l));
    for (std::size_t i = 0; i < schema.class_aliases.size(); ++i) {
        const auto& a = schema.class_aliases[i];
        if (!is_label(a)) throw SchemaError(owner + ": invalid label '" + a + "'");
        if (iequals(a, schema.class_levels[i])) continue;
        if (!seen.insert(fold_case(a)).second) throw SchemaError(owner + ": ambiguous label '" + a + "'");
    }
}

void check_attribute_def(const AttributeDef& attr) {
    if (!is_identifier(attr.name)) throw SchemaError("invalid attribute name '" + attr.name + "'");
    const std::string owner = "attribute " + attr.name;
    check_labels(attr.levels, owner);
    for (std::size_t i = 0; i < attr.bins.size(); ++i) {
        const Bin& b = attr.bins[i];
        if (b.level >= attr.arity()) throw SchemaError(owner + ": bin maps to an undeclared level");
        if (std::isnan(b.lo) || std::isnan(b.hi) || !(b.lo < b.hi))
            throw SchemaError(owner + ": empty bin [" + format_number(b.lo) + "," + format_number(b.hi) + ")");
        if (i > 0 && attr.bins[i - 1].hi > b.lo)
            throw SchemaError(owner + ": overlapping bins [" + format_number(attr.bins[i - 1].lo) + "," +
                              format_number(attr.bins[i - 1].hi) + ") and [" + format_number(b.lo) + "," +
                              format_number(b.hi) + ")");
    }
}

}  // namespace

void check_schema(const Schema& schema) {
    check_class_decl(schema);
    if (schema.attributes.empty()) throw SchemaError("schema declares no attributes");
    std::set<std::string> names{fold_case(schema.class_name)};
    for (const auto& attr : schema.attributes) {
        check_attribute_def(attr);
        if (!names.insert(fold_case(attr.name)).second) throw SchemaError("duplicate name '" + attr.name + "'");
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits on commas that are not inside [...) or [...] brackets.
std::vector<std::string_view> split_top_level(std::string_view s) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '[') ++depth;
        else if ((c == ')' || c == ']') && depth > 0) --depth;
        else if (c == ',' && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

struct LineParser {
    std::size_t line_no;

    [[noreturn]] void fail(const std::string& what) const {
        throw SchemaError("schema line " + std::to_string(line_no) + ": " + what);
    }

    // Tokenizes `key=value` clauses; whitespace inside brackets is kept in the value.
    std::vector<std::pair<std::string, std::string>> clauses(std::string_view rest) const {
        std::vector<std::pair<std::string, std::string>> out;
        std::size_t i = 0;
        while (i < rest.size()) {
            while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
            if (i >= rest.size()) break;
            std::size_t eq = rest.find('=', i);
            if (eq == std::string_view::npos) fail("expected key=value, found '" + std::string(rest.substr(i)) + "'");
            std::string key(trim(rest.substr(i, eq - i)));
            if (!is_identifier(key)) fail("invalid clause name '" + key + "'");
            std::size_t j = eq + 1;
            int depth = 0;
            while (j < rest.size()) {
                char c = rest[j];
                if (c == '[') ++depth;
                else if ((c == ')' || c == ']') && depth > 0) --depth;
                else if (std::isspace(static_cast<unsigned char>(c)) && depth == 0) break;
                ++j;
            }
            out.emplace_back(key, std::string(rest.substr(eq + 1, j - eq - 1)));
            i = j;
        }
        return out;
    }

    std::vector<std::string> list(std::string_view value, const std::string& what) const {
        std::vector<std::string> out;
        if (trim(value).empty()) fail("empty " + what + " list");
        for (auto item : split_top_level(value)) {
            if (item.empty()) fail("empty entry in " + what + " list");
            out.emplace_back(item);
        }
        return out;
    }

    std::vector<Bin> bins(std::string_view value, const AttributeDef& attr) const {
        std::vector<Bin> out;
        for (auto item : split_top_level(value)) {
            // [lo,hi):Level
            if (item.empty() || item.front() != '[') fail("bin must look like [lo,hi):Level, got '" + std::string(item) + "'");
            auto close = item.find(')');
            auto comma = item.find(',');
            if (close == std::string_view::npos || comma == std::string_view::npos || comma > close ||
                close + 1 >= item.size() || item[close + 1] != ':')
                fail("bin must look like [lo,hi):Level, got '" + std::string(item) + "'");
            auto lo = parse_number(trim(item.substr(1, comma - 1)));
            auto hi = parse_number(trim(item.substr(comma + 1, close - comma - 1)));
            if (!lo || !hi) fail("invalid bin bound in '" + std::string(item) + "'");
            auto label = trim(item.substr(close + 2));
            auto level = attr.find_level(label);
            if (!level) fail("bin references unknown level '" + std::string(label) + "' of attribute " + attr.name);
            out.push_back(Bin{*lo, *hi, *level});
        }
        std::sort(out.begin(), out.end(), [](const Bin& a, const Bin& b) { return a.lo < b.lo; });
        return out;
    }
};

}  // namespace

Schema parse_schema(std::string_view text) {
    Schema schema;
    bool have_class = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        LineParser p{line_no};
        std::size_t sp = line.find_first_of(" \t");
        std::string_view keyword = line.substr(0, sp);
        std::string_view rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
        std::size_t sp2 = rest.find_first_of(" \t");
        std::string name(rest.substr(0, sp2));
        std::string_view clause_text = sp2 == std::string_view::npos ? std::string_view{} : rest.substr(sp2);
        if (keyword != "class" && keyword != "attr")
            p.fail("expected 'class' or 'attr', found '" + std::string(keyword) + "'");
        if (!is_identifier(name)) p.fail("missing or invalid name after '" + std::string(keyword) + "'");

        auto clauses = p.clauses(clause_text);
        auto find = [&](std::string_view key) -> const std::string* {
            const std::string* hit = nullptr;
            for (const auto& [k, v] : clauses) {
                if (k != key) continue;
                if (hit) p.fail("clause '" + std::string(key) + "' given twice");
                hit = &v;
            }
            return hit;
        };
        const std::string* levels = find("levels");
        if (!levels) p.fail("'" + name + "' has no levels= clause");

        if (keyword == "class") {
            if (have_class) p.fail("second class declaration '" + name + "'");
            for (const auto& [k, v] : clauses)
                if (k != "levels" && k != "labels") p.fail("unknown clause '" + k + "' on class");
            have_class = true;
            schema.class_name = name;
            schema.class_levels = p.list(*levels, "level");
            if (const std::string* labels = find("labels")) schema.class_aliases = p.list(*labels, "label");
        } else {
            for (const auto& [k, v] : clauses)
                if (k != "levels" && k != "bins") p.fail("unknown clause '" + k + "' on attribute " + name);
            AttributeDef attr;
            attr.name = name;
            attr.levels = p.list(*levels, "level");
            if (const std::string* bins = find("bins")) attr.bins = p.bins(*bins, attr);
            schema.attributes.push_back(std::move(attr));
        }
        try {
            if (keyword == "class") {
                check_class_decl(schema);
                if (schema.find_attribute(name)) throw SchemaError("duplicate name '" + name + "'");
            } else {
                check_attribute_def(schema.attributes.back());
                bool clash = iequals(name, schema.class_name);
                for (std::size_t i = 0; i + 1 < schema.attributes.size(); ++i)
                    clash = clash || iequals(schema.attributes[i].name, name);
                if (clash) throw SchemaError("duplicate name '" + name + "'");
            }
        } catch (const SchemaError& e) {
            p.fail(e.what());
        }
    }
    if (!have_class) throw SchemaError("schema has no class declaration");
    check_schema(schema);
    return schema;
}

std::string to_dsl(const Schema& schema) {
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
        return s;
    };
    std::ostringstream out;
    out << "class " << schema.class_name << " levels=" << join(schema.class_levels);
    if (!schema.class_aliases.empty()) out << " labels=" << join(schema.class_aliases);
    out << '\n';
    for (const auto& attr : schema.attributes) {
        out << "attr " << attr.name << " levels=" << join(attr.levels);
        if (attr.has_bins()) {
            out << " bins=";
            for (std::size_t i = 0; i < attr.bins.size(); ++i) {
                const Bin& b = attr.bins[i];
                out << (i ? "," : "") << '[' << format_number(b.lo) << ',' << format_number(b.hi)
                    << "):" << attr.levels[b.level];
            }
        }
        out << '\n';
    }
    return out.str();
}

LevelIndex bin_numeric(const AttributeDef& attribute, double raw) {
    if (!attribute.has_bins())
        throw DataError("attribute " + attribute.name + " declares no bins");
    if (std::isfinite(raw))
        for (const Bin& b : attribute.bins)
            if (b.contains(raw)) return b.level;
    throw DataError("value " + format_number(raw) + " is outside every bin of attribute " + attribute.name);
}

const std::string& bin_numeric(const Schema& schema, std::string_view attribute, double raw) {
    const AttributeDef& attr = schema.attribute(attribute);
    return attr.levels[bin_numeric(attr, raw)];
}

}  // namespace asmf
