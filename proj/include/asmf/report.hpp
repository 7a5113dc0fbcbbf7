#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "asmf/criteria.hpp"
#include "asmf/dataset.hpp"
#include "asmf/tree.hpp"

namespace asmf {

/// Half-up rounding to `decimals` places. Values within 1e-9 of a rounding
/// boundary are treated as on it, so 2.545 (stored as 2.54499...) gives 2.55.
double round_half_up(double value, int decimals = 2);
/// round_half_up then fixed-point text, e.g. 2.2 -> "2.20".
std::string format_fixed(double value, int decimals = 2);

struct CriterionReportRow {
    std::string attribute;
    double value = 0.0;    // full precision
    double rounded = 0.0;  // two decimals, half-up
    bool defined = true;
};

struct CriterionReport {
    Criterion criterion = Criterion::asmf_diagonal;
    std::vector<CriterionReportRow> rows;  // descending by value, ties in declaration order
};

CriterionReport criterion_report(const Dataset& dataset, Criterion criterion);

std::string render_text(const CriterionReport& report);
std::string render_csv(const CriterionReport& report);

/// Resubstitution counts, indexed [actual][predicted].
struct ConfusionMatrix {
    std::vector<std::vector<std::size_t>> counts;
    std::size_t total = 0;
    std::size_t correct = 0;

    double accuracy() const noexcept {
        return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }
};

ConfusionMatrix resubstitution_report(const DecisionTree& tree, const Dataset& dataset);

std::string render_text(const ConfusionMatrix& matrix, const Schema& schema);
std::string render_csv(const ConfusionMatrix& matrix, const Schema& schema);

/// Graphviz digraph. Node ids follow the tree's pre-order, so the output
/// depends only on the tree.
std::string export_dot(const DecisionTree& tree, const Schema& schema);

}  // namespace asmf
