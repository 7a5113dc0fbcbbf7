#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asmf/dataset.hpp"

namespace asmf {

enum class Criterion { asmf_diagonal, asmf_maxcell, gain_ratio };

std::string_view to_string(Criterion c) noexcept;
/// Accepts "asmf", "asmf-diagonal", "asmf-maxcell", "maxcell", "gainratio", "gain-ratio".
Criterion parse_criterion(std::string_view text);

enum class AsmfMode { diagonal, maxcell };

/// Level-by-class occurrence counts for one attribute over one partition.
struct ContingencyTable {
    std::string attribute;
    std::vector<std::vector<std::size_t>> counts;  // [level][class]
    std::vector<std::size_t> row_totals;
    std::size_t grand_total = 0;

    std::size_t levels() const noexcept { return counts.size(); }
    std::size_t classes() const noexcept { return counts.empty() ? 0 : counts.front().size(); }
    std::size_t nonempty_rows() const noexcept;

    bool operator==(const ContingencyTable&) const = default;
};

/// Builds a table (with totals) from raw counts; rows must have equal length.
ContingencyTable make_table(std::string attribute, std::vector<std::vector<std::size_t>> counts);

struct CriterionScore {
    std::string attribute;
    AttributeIndex attribute_index = 0;
    Criterion criterion = Criterion::asmf_diagonal;
    double value = 0.0;   // full precision; rounding happens only in reports
    bool defined = true;  // false for gain ratio with zero split information

    bool operator==(const CriterionScore&) const = default;
};

/// Tabulates `attribute` over `records`; every record must be labeled and
/// carry a value for the attribute.
ContingencyTable contingency(const Schema& schema, std::span<const Record> records, AttributeIndex attribute);
ContingencyTable contingency(const Dataset& dataset, std::string_view attribute);

/// Attribute selection measure: the sum, over nonempty levels, of the share
/// of that level's records that fall in its aligned class (diagonal) or in
/// its most frequent class (maxcell). A perfectly aligned attribute scores
/// the number of nonempty levels; empty levels contribute nothing.
CriterionScore asmf(const ContingencyTable& table, AsmfMode mode = AsmfMode::diagonal);

/// C4.5 gain ratio in bits. `defined` is false when every record shares one
/// attribute level, because split information is then zero.
CriterionScore gain_ratio(const ContingencyTable& table);

CriterionScore score(const ContingencyTable& table, Criterion criterion);

/// Throws CriterionError when `criterion` cannot be applied to `attribute`
/// (diagonal ASMF needs the attribute arity to equal the class arity).
void check_applicable(const Schema& schema, AttributeIndex attribute, Criterion criterion);

/// Scores sorted descending; ties keep schema declaration order and
/// undefined scores go last.
std::vector<CriterionScore> rank_attributes(const Schema& schema, std::span<const Record> records,
                                            std::span<const AttributeIndex> attributes, Criterion criterion);
std::vector<CriterionScore> rank_attributes(const Dataset& dataset, Criterion criterion);

}  // namespace asmf
