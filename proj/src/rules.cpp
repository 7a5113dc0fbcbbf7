#include "asmf/rules.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "asmf/error.hpp"
#include "asmf/report.hpp"

namespace asmf {

bool Condition::matches(const Record& r) const {
    if (attribute >= r.values.size() || !r.values[attribute]) return false;
    return std::binary_search(levels.begin(), levels.end(), *r.values[attribute]);
}

bool Rule::matches(const Record& r) const {
    return std::all_of(conditions.begin(), conditions.end(), [&](const Condition& c) { return c.matches(r); });
}

namespace {

template <typename Visit>
void for_each_leaf_path(const DecisionTree& tree, Visit&& visit) {
    std::vector<Condition> path;
    std::function<void(NodeIndex)> walk = [&](NodeIndex i) {
        const TreeNode& n = tree.node(i);
        if (n.is_leaf()) {
            if (!n.is_default) visit(n, path);
            return;
        }
        for (std::size_t level = 0; level < n.children.size(); ++level) {
            path.push_back({*n.attribute, {static_cast<LevelIndex>(level)}});
            walk(n.children[level]);
            path.pop_back();
        }
    };
    walk(0);
}

}  // namespace

RuleSet extract_rules(const DecisionTree& tree, const Dataset& training) {
    RuleSet rules;
    for_each_leaf_path(tree, [&](const TreeNode& leaf, const std::vector<Condition>& path) {
        Rule rule{path, leaf.predicted, 0, 0};
        for (const Record& r : training.records) {
            if (!rule.matches(r)) continue;
            ++rule.support;
            if (r.label == rule.predicted) ++rule.correct;
        }
        rules.push_back(std::move(rule));
    });
    return rules;
}

RuleSet extract_rules(const DecisionTree& tree) {
    RuleSet rules;
    for_each_leaf_path(tree, [&](const TreeNode& leaf, const std::vector<Condition>& path) {
        rules.push_back({path, leaf.predicted, leaf.support, leaf.distribution.at(leaf.predicted)});
    });
    return rules;
}

namespace {

// Index of the single condition in which two same-shaped rules differ.
std::optional<std::size_t> mergeable(const Rule& a, const Rule& b) {
    if (a.predicted != b.predicted || a.conditions.size() != b.conditions.size()) return std::nullopt;
    std::optional<std::size_t> diff;
    for (std::size_t i = 0; i < a.conditions.size(); ++i) {
        const Condition& x = a.conditions[i];
        const Condition& y = b.conditions[i];
        if (x.attribute != y.attribute) return std::nullopt;
        if (x.levels == y.levels) continue;
        if (diff) return std::nullopt;
        diff = i;
    }
    return diff;
}

}  // namespace

RuleSet merge_rules(RuleSet rules, const Schema& schema) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < rules.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < rules.size() && !changed; ++j) {
                auto at = mergeable(rules[i], rules[j]);
                if (!at) continue;
                Rule& keep = rules[i];
                auto& levels = keep.conditions[*at].levels;
                const auto& extra = rules[j].conditions[*at].levels;
                std::vector<LevelIndex> merged;
                std::set_union(levels.begin(), levels.end(), extra.begin(), extra.end(), std::back_inserter(merged));
                levels = std::move(merged);
                keep.support += rules[j].support;
                keep.correct += rules[j].correct;
                if (levels.size() == schema.attributes.at(keep.conditions[*at].attribute).arity())
                    keep.conditions.erase(keep.conditions.begin() + static_cast<std::ptrdiff_t>(*at));
                rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(j));
                changed = true;
            }
        }
    }
    return rules;
}

std::optional<std::size_t> first_match(const RuleSet& rules, const Record& r) {
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (rules[i].matches(r)) return i;
    return std::nullopt;
}

std::string render_rule(const Rule& rule, const Schema& schema) {
    std::string out = "IF ";
    if (rule.conditions.empty()) out += "TRUE";
    for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
        const Condition& c = rule.conditions[i];
        const AttributeDef& attr = schema.attributes.at(c.attribute);
        if (i) out += " AND ";
        out += attr.name + " in {";
        for (std::size_t k = 0; k < c.levels.size(); ++k) out += (k ? "," : "") + attr.levels.at(c.levels[k]);
        out += '}';
    }
    out += " THEN " + schema.class_name + " = " + schema.class_label(rule.predicted);
    out += "  [support=" + std::to_string(rule.support) + ", confidence=" + format_fixed(rule.confidence()) + "]";
    return out;
}

std::string_view to_string(Recommendation r) noexcept {
    switch (r) {
        case Recommendation::deploy: return "deploy";
        case Recommendation::deploy_with_training: return "deploy-with-training";
        case Recommendation::do_not_deploy: return "do-not-deploy";
    }
    return "?";
}

Recommendation recommend(const Schema& schema, ClassIndex cls) {
    if (cls >= schema.class_arity()) throw DataError("unknown class index " + std::to_string(cls));
    if (cls == 0) return Recommendation::deploy;
    if (cls + 1 == schema.class_arity()) return Recommendation::do_not_deploy;
    return Recommendation::deploy_with_training;
}

Recommendation recommend(const Schema& schema, std::string_view class_label) {
    auto c = schema.find_class(class_label);
    if (!c) throw DataError("unknown class label '" + std::string(class_label) + "'");
    return recommend(schema, *c);
}

std::optional<double> Prediction::confidence() const {
    const std::size_t total = std::accumulate(distribution.begin(), distribution.end(), std::size_t{0});
    if (from_default_leaf || total == 0) return std::nullopt;
    return static_cast<double>(distribution.at(predicted)) / static_cast<double>(total);
}

Prediction classify(const DecisionTree& tree, const Schema& schema, const Record& record) {
    if (tree.empty()) throw TreeError("cannot classify with an empty tree");
    Prediction p;
    NodeIndex at = 0;
    while (!tree.node(at).is_leaf()) {
        const TreeNode& n = tree.node(at);
        const AttributeIndex a = *n.attribute;
        if (a >= record.values.size() || !record.values[a])
            throw DataError("row " + std::to_string(record.row_id) + ": missing value for " +
                            schema.attributes.at(a).name + ", which the tree tests");
        const LevelIndex level = *record.values[a];
        if (level >= n.children.size())
            throw DataError("row " + std::to_string(record.row_id) + ": level index out of range for " +
                            schema.attributes.at(a).name);
        p.path.push_back({a, level});
        at = n.children[level];
    }
    const TreeNode& leaf = tree.node(at);
    p.leaf = at;
    p.predicted = leaf.predicted;
    p.distribution = leaf.distribution;
    p.from_default_leaf = leaf.is_default;
    p.recommendation = recommend(schema, leaf.predicted);
    return p;
}

}  // namespace asmf
