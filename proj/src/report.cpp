#include "asmf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "asmf/error.hpp"
#include "asmf/rules.hpp"

namespace asmf {

double round_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) return "undefined";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, round_half_up(value, decimals));
    return buf;
}

CriterionReport criterion_report(const Dataset& dataset, Criterion criterion) {
    if (dataset.empty()) throw DataError("no records");
    CriterionReport report{criterion, {}};
    for (const CriterionScore& s : rank_attributes(dataset, criterion))
        report.rows.push_back({s.attribute, s.value, s.defined ? round_half_up(s.value) : s.value, s.defined});
    return report;
}

std::string render_text(const CriterionReport& report) {
    std::size_t width = std::string_view("ATTRIBUTE").size();
    for (const auto& r : report.rows) width = std::max(width, r.attribute.size());
    const std::string header = std::string(to_string(report.criterion));
    std::ostringstream out;
    auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };
    out << pad("ATTRIBUTE") << header << '\n';
    for (const auto& r : report.rows)
        out << pad(r.attribute) << (r.defined ? format_fixed(r.value) : "undefined") << '\n';
    return out.str();
}

std::string render_csv(const CriterionReport& report) {
    std::ostringstream out;
    out << "attribute,criterion,value,rounded\n";
    for (const auto& r : report.rows) {
        out << r.attribute << ',' << to_string(report.criterion) << ',';
        if (r.defined) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", r.value);
            out << buf << ',' << format_fixed(r.value);
        } else {
            out << ",";
        }
        out << '\n';
    }
    return out.str();
}

ConfusionMatrix resubstitution_report(const DecisionTree& tree, const Dataset& dataset) {
    if (dataset.empty()) throw DataError("no records");
    const std::size_t k = dataset.schema.class_arity();
    ConfusionMatrix m{std::vector<std::vector<std::size_t>>(k, std::vector<std::size_t>(k, 0)), 0, 0};
    for (const Record& r : dataset.records) {
        if (!r.label) throw DataError("row " + std::to_string(r.row_id) + ": unlabeled record");
        const ClassIndex predicted = classify(tree, dataset.schema, r).predicted;
        ++m.counts[*r.label][predicted];
        ++m.total;
        if (predicted == *r.label) ++m.correct;
    }
    return m;
}

std::string render_text(const ConfusionMatrix& matrix, const Schema& schema) {
    std::size_t width = std::string_view("actual\\predicted").size();
    for (const auto& l : schema.class_levels) width = std::max(width, l.size());
    std::ostringstream out;
    auto cell = [](const std::string& s, std::size_t w) { return std::string(w - std::min(w, s.size()), ' ') + s; };
    out << std::string("actual\\predicted") + std::string(width - 16, ' ');
    for (const auto& l : schema.class_levels) out << cell(l, std::max<std::size_t>(l.size(), 5) + 2);
    out << '\n';
    for (std::size_t a = 0; a < matrix.counts.size(); ++a) {
        const auto& label = schema.class_levels[a];
        out << label << std::string(width - label.size(), ' ');
        for (std::size_t p = 0; p < matrix.counts[a].size(); ++p)
            out << cell(std::to_string(matrix.counts[a][p]), std::max<std::size_t>(schema.class_levels[p].size(), 5) + 2);
        out << '\n';
    }
    out << "accuracy=" << matrix.correct << '/' << matrix.total << " (" << format_fixed(matrix.accuracy(), 4) << ")\n";
    return out.str();
}

std::string render_csv(const ConfusionMatrix& matrix, const Schema& schema) {
    std::ostringstream out;
    out << "actual";
    for (const auto& l : schema.class_levels) out << ',' << l;
    out << '\n';
    for (std::size_t a = 0; a < matrix.counts.size(); ++a) {
        out << schema.class_levels[a];
        for (std::size_t c : matrix.counts[a]) out << ',' << c;
        out << '\n';
    }
    return out.str();
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string export_dot(const DecisionTree& tree, const Schema& schema) {
    std::ostringstream out;
    out << "digraph asmf_tree {\n";
    out << "  node [fontname=\"Helvetica\"];\n";
    for (NodeIndex i = 0; i < tree.size(); ++i) {
        const TreeNode& n = tree.node(i);
        out << "  n" << i << " [";
        if (n.is_leaf()) {
            std::string label = dot_escape(schema.class_label(n.predicted)) + "\\nsupport=" + std::to_string(n.support);
            if (n.is_default)
                label += "\\n(default)";
            else
                label += "\\nconfidence=" +
                         format_fixed(static_cast<double>(n.distribution[n.predicted]) / static_cast<double>(n.support));
            out << "shape=ellipse, label=\"" << label << "\"";
        } else {
            out << "shape=box, label=\"" << dot_escape(schema.attributes.at(*n.attribute).name)
                << "\\nsupport=" << n.support << "\"";
        }
        out << "];\n";
        for (std::size_t level = 0; level < n.children.size(); ++level)
            out << "  n" << i << " -> n" << n.children[level] << " [label=\""
                << dot_escape(schema.attributes.at(*n.attribute).levels.at(level)) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace asmf
