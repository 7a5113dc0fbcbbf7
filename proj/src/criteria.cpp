#include "asmf/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asmf/error.hpp"

namespace asmf {

std::string_view to_string(Criterion c) noexcept {
    switch (c) {
        case Criterion::asmf_diagonal: return "asmf-diagonal";
        case Criterion::asmf_maxcell: return "asmf-maxcell";
        case Criterion::gain_ratio: return "gain-ratio";
    }
    return "?";
}

Criterion parse_criterion(std::string_view text) {
    if (iequals(text, "asmf") || iequals(text, "asmf-diagonal") || iequals(text, "diagonal"))
        return Criterion::asmf_diagonal;
    if (iequals(text, "asmf-maxcell") || iequals(text, "maxcell")) return Criterion::asmf_maxcell;
    if (iequals(text, "gainratio") || iequals(text, "gain-ratio")) return Criterion::gain_ratio;
    throw CriterionError("unknown criterion '" + std::string(text) + "' (expected asmf, asmf-maxcell or gainratio)");
}

std::size_t ContingencyTable::nonempty_rows() const noexcept {
    return static_cast<std::size_t>(std::count_if(row_totals.begin(), row_totals.end(), [](std::size_t t) { return t > 0; }));
}

ContingencyTable make_table(std::string attribute, std::vector<std::vector<std::size_t>> counts) {
    ContingencyTable t;
    t.attribute = std::move(attribute);
    const std::size_t width = counts.empty() ? 0 : counts.front().size();
    for (const auto& row : counts) {
        if (row.size() != width) throw CriterionError("contingency rows for " + t.attribute + " differ in length");
        t.row_totals.push_back(std::accumulate(row.begin(), row.end(), std::size_t{0}));
        t.grand_total += t.row_totals.back();
    }
    t.counts = std::move(counts);
    return t;
}

ContingencyTable contingency(const Schema& schema, std::span<const Record> records, AttributeIndex attribute) {
    if (attribute >= schema.attribute_count())
        throw SchemaError("unknown attribute index " + std::to_string(attribute));
    const AttributeDef& def = schema.attributes[attribute];
    std::vector<std::vector<std::size_t>> counts(def.arity(), std::vector<std::size_t>(schema.class_arity(), 0));
    for (const Record& r : records) {
        if (!r.label) throw DataError("row " + std::to_string(r.row_id) + ": unlabeled record");
        if (attribute >= r.values.size() || !r.values[attribute])
            throw DataError("row " + std::to_string(r.row_id) + ": missing value for " + def.name);
        ++counts.at(*r.values[attribute]).at(*r.label);
    }
    return make_table(def.name, std::move(counts));
}

ContingencyTable contingency(const Dataset& dataset, std::string_view attribute) {
    return contingency(dataset.schema, dataset.records, dataset.schema.attribute_index(attribute));
}

CriterionScore asmf(const ContingencyTable& table, AsmfMode mode) {
    if (mode == AsmfMode::diagonal && table.levels() != table.classes())
        throw CriterionError("diagonal ASMF needs as many levels as classes; " + table.attribute + " has " +
                             std::to_string(table.levels()) + " levels for " + std::to_string(table.classes()) +
                             " classes");
    if (table.grand_total == 0) throw CriterionError("ASMF of " + table.attribute + " over an empty partition");

    double sum = 0.0;
    for (std::size_t i = 0; i < table.levels(); ++i) {
        if (table.row_totals[i] == 0) continue;
        const auto& row = table.counts[i];
        const std::size_t hits = mode == AsmfMode::diagonal ? row[i] : *std::max_element(row.begin(), row.end());
        sum += static_cast<double>(hits) / static_cast<double>(table.row_totals[i]);
    }
    return {table.attribute, 0, mode == AsmfMode::diagonal ? Criterion::asmf_diagonal : Criterion::asmf_maxcell, sum,
            true};
}

namespace {

// Entropy in bits of a count vector, evaluated through proportions so that
// scaling every count by k leaves the result bit-identical.
double entropy(std::span<const std::size_t> counts, std::size_t total) {
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

CriterionScore gain_ratio(const ContingencyTable& table) {
    if (table.grand_total == 0) throw CriterionError("gain ratio of " + table.attribute + " over an empty partition");
    std::vector<std::size_t> class_totals(table.classes(), 0);
    for (const auto& row : table.counts)
        for (std::size_t j = 0; j < row.size(); ++j) class_totals[j] += row[j];

    const double n = static_cast<double>(table.grand_total);
    double conditional = 0.0;
    for (std::size_t i = 0; i < table.levels(); ++i)
        if (table.row_totals[i] > 0)
            conditional += static_cast<double>(table.row_totals[i]) / n * entropy(table.counts[i], table.row_totals[i]);
    const double split_info = entropy(table.row_totals, table.grand_total);

    CriterionScore s{table.attribute, 0, Criterion::gain_ratio, 0.0, true};
    if (split_info <= 0.0) {
        s.defined = false;
        s.value = std::nan("");
        return s;
    }
    const double gain = std::max(0.0, entropy(class_totals, table.grand_total) - conditional);
    s.value = gain / split_info;
    return s;
}

CriterionScore score(const ContingencyTable& table, Criterion criterion) {
    switch (criterion) {
        case Criterion::asmf_diagonal: return asmf(table, AsmfMode::diagonal);
        case Criterion::asmf_maxcell: return asmf(table, AsmfMode::maxcell);
        case Criterion::gain_ratio: return gain_ratio(table);
    }
    throw CriterionError("unsupported criterion");
}

void check_applicable(const Schema& schema, AttributeIndex attribute, Criterion criterion) {
    const AttributeDef& def = schema.attributes.at(attribute);
    if (criterion == Criterion::asmf_diagonal && def.arity() != schema.class_arity())
        throw CriterionError("diagonal ASMF needs attribute " + def.name + " to have " +
                             std::to_string(schema.class_arity()) + " levels aligned with the classes, it has " +
                             std::to_string(def.arity()));
}

std::vector<CriterionScore> rank_attributes(const Schema& schema, std::span<const Record> records,
                                            std::span<const AttributeIndex> attributes, Criterion criterion) {
    if (attributes.empty()) throw CriterionError("no attributes to rank");
    std::vector<CriterionScore> scores;
    scores.reserve(attributes.size());
    for (AttributeIndex a : attributes) {
        check_applicable(schema, a, criterion);
        CriterionScore s = score(contingency(schema, records, a), criterion);
        s.attribute_index = a;
        scores.push_back(std::move(s));
    }
    std::stable_sort(scores.begin(), scores.end(), [](const CriterionScore& x, const CriterionScore& y) {
        if (x.defined != y.defined) return x.defined;
        if (x.defined && x.value != y.value) return x.value > y.value;
        return x.attribute_index < y.attribute_index;
    });
    return scores;
}

std::vector<CriterionScore> rank_attributes(const Dataset& dataset, Criterion criterion) {
    std::vector<AttributeIndex> all(dataset.schema.attribute_count());
    std::iota(all.begin(), all.end(), AttributeIndex{0});
    return rank_attributes(dataset.schema, dataset.records, all, criterion);
}

}  // namespace asmf
