#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asmf {

using LevelIndex = std::uint32_t;
using ClassIndex = std::uint32_t;
using AttributeIndex = std::size_t;

/// Half-open score interval [lo, hi) mapped onto an attribute level.
struct Bin {
    double lo = 0.0;
    double hi = 0.0;
    LevelIndex level = 0;

    bool contains(double x) const noexcept { return x >= lo && x < hi; }
    bool operator==(const Bin&) const = default;
};

struct AttributeDef {
    std::string name;
    std::vector<std::string> levels;  // ordinal, best first
    std::vector<Bin> bins;            // sorted by lo; empty when the attribute is purely categorical

    std::size_t arity() const noexcept { return levels.size(); }
    bool has_bins() const noexcept { return !bins.empty(); }

    /// Case-insensitive lookup of a level label.
    std::optional<LevelIndex> find_level(std::string_view label) const;

    bool operator==(const AttributeDef&) const = default;
};

/// Ordered class labels (best to worst) plus the predictor attributes in
/// declaration order. Declaration order is the tie-breaker everywhere.
struct Schema {
    std::string class_name;
    std::vector<std::string> class_levels;
    std::vector<std::string> class_aliases;  // empty, or one per class level
    std::vector<AttributeDef> attributes;

    std::size_t class_arity() const noexcept { return class_levels.size(); }
    std::size_t attribute_count() const noexcept { return attributes.size(); }

    std::optional<AttributeIndex> find_attribute(std::string_view name) const;
    /// Throws SchemaError naming the attribute when it is not declared.
    AttributeIndex attribute_index(std::string_view name) const;
    const AttributeDef& attribute(std::string_view name) const;

    /// Matches a class label or its numeric alias, case-insensitively.
    std::optional<ClassIndex> find_class(std::string_view label) const;
    const std::string& class_label(ClassIndex c) const { return class_levels.at(c); }

    bool operator==(const Schema&) const = default;
};

/// Parses the line-oriented schema language:
///
///     # comment
///     class P levels=Good,Average,Poor labels=1,2,3
///     attr GPA levels=Good,Average,Poor bins=[7.5,inf):Good,[6.5,7.5):Average,[5.0,6.5):Poor
///     attr PS levels=Good,Average,Poor
///
/// Errors are reported as SchemaError with the offending line number.
Schema parse_schema(std::string_view text);

/// Renders a schema back into the DSL; parse_schema(to_dsl(s)) == s.
std::string to_dsl(const Schema& schema);

/// Throws SchemaError if any schema invariant is violated.
void check_schema(const Schema& schema);

/// Maps a raw decimal score onto the level whose bin contains it.
LevelIndex bin_numeric(const AttributeDef& attribute, double raw);
const std::string& bin_numeric(const Schema& schema, std::string_view attribute, double raw);

std::string fold_case(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;

/// Shortest decimal text that parses back to the same double; "inf"/"-inf" for infinities.
std::string format_number(double value);
std::optional<double> parse_number(std::string_view text);

}  // namespace asmf
