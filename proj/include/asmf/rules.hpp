#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asmf/dataset.hpp"
#include "asmf/tree.hpp"

namespace asmf {

struct Condition {
    AttributeIndex attribute = 0;
    std::vector<LevelIndex> levels;  // sorted, non-empty

    bool matches(const Record& r) const;
    bool operator==(const Condition&) const = default;
};

struct Rule {
    std::vector<Condition> conditions;  // root-first
    ClassIndex predicted = 0;
    std::size_t support = 0;
    std::size_t correct = 0;

    bool matches(const Record& r) const;
    double confidence() const noexcept {
        return support == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(support);
    }
    bool operator==(const Rule&) const = default;
};

using RuleSet = std::vector<Rule>;

/// One rule per non-default leaf, in pre-order. Support and correct counts
/// come from `training`.
RuleSet extract_rules(const DecisionTree& tree, const Dataset& training);
/// Same, but takes support and correct counts from the leaves' stored training statistics.
RuleSet extract_rules(const DecisionTree& tree);

/// Repeatedly unions the level sets of same-class rules that differ in a
/// single condition, until no pair qualifies. Conditions that end up
/// covering every level of their attribute are dropped.
RuleSet merge_rules(RuleSet rules, const Schema& schema);

/// Index of the first rule matching `r`, if any.
std::optional<std::size_t> first_match(const RuleSet& rules, const Record& r);

/// `IF PS in {Good} AND DKA in {Good,Average} THEN P = Good  [support=6, confidence=1.00]`
std::string render_rule(const Rule& rule, const Schema& schema);

enum class Recommendation { deploy, deploy_with_training, do_not_deploy };

std::string_view to_string(Recommendation r) noexcept;

/// Best class deploys, worst does not, everything in between deploys with training.
Recommendation recommend(const Schema& schema, ClassIndex cls);
Recommendation recommend(const Schema& schema, std::string_view class_label);

struct PathStep {
    AttributeIndex attribute = 0;
    LevelIndex level = 0;
    bool operator==(const PathStep&) const = default;
};

struct Prediction {
    ClassIndex predicted = 0;
    std::vector<std::size_t> distribution;
    Recommendation recommendation = Recommendation::deploy;
    std::vector<PathStep> path;
    NodeIndex leaf = 0;
    bool from_default_leaf = false;

    /// Share of the deciding leaf's training records in the predicted class;
    /// empty for default leaves, which saw no records.
    std::optional<double> confidence() const;
};

/// Walks the tree from the root; throws DataError when the record lacks an
/// attribute the walk needs.
Prediction classify(const DecisionTree& tree, const Schema& schema, const Record& record);

}  // namespace asmf
