#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "asmf/criteria.hpp"
#include "asmf/dataset.hpp"

namespace asmf {

struct TreeConfig {
    Criterion criterion = Criterion::asmf_diagonal;
    std::size_t min_split = 2;    // smallest partition that may still be split
    std::size_t min_support = 2;  // pruning threshold
    std::optional<std::size_t> max_depth;

    /// Throws TreeError on out-of-range settings.
    void check() const;

    bool operator==(const TreeConfig&) const = default;
};

using NodeIndex = std::size_t;

struct TreeNode {
    std::optional<AttributeIndex> attribute;  // set on internal nodes
    std::vector<NodeIndex> children;          // one per level of `attribute`
    ClassIndex predicted = 0;                 // majority class of the node's partition
    std::vector<std::size_t> distribution;    // per-class training counts
    std::size_t support = 0;                  // training records reaching the node
    bool is_default = false;                  // leaf for a level no training record took

    bool is_leaf() const noexcept { return !attribute.has_value(); }
    bool operator==(const TreeNode&) const = default;
};

/// Immutable decision tree stored in pre-order; node 0 is the root.
class DecisionTree {
public:
    DecisionTree() = default;
    /// Throws TreeError unless `nodes` is a well-formed pre-order tree.
    explicit DecisionTree(std::vector<TreeNode> nodes);

    const TreeNode& root() const { return nodes_.front(); }
    const TreeNode& node(NodeIndex i) const { return nodes_.at(i); }
    std::span<const TreeNode> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    std::size_t leaf_count() const noexcept;
    std::size_t depth() const;

    bool operator==(const DecisionTree&) const = default;

private:
    std::vector<TreeNode> nodes_;
};

/// Lowest class index among the modes of `distribution`.
ClassIndex majority_class(std::span<const std::size_t> distribution);

/// Checks the tree against a schema: arities, distributions, support
/// bookkeeping and that no attribute repeats along a path.
void check_tree(const DecisionTree& tree, const Schema& schema);

/// Recursive induction: each node splits on the criterion-maximal attribute
/// not yet used on its path. A node becomes a leaf when it is class-pure,
/// holds fewer than min_split records, has no usable attribute left, or sits
/// at max_depth. Levels with no records get a default leaf predicting the
/// parent's majority class.
DecisionTree build_tree(const Dataset& dataset, const TreeConfig& config = {});

/// Support-threshold post-pruning, bottom-up. A node with any (non-default)
/// child supported by fewer than min_support records collapses into a
/// majority leaf; so does a node whose children are leaves that all predict
/// the same class.
DecisionTree prune(const DecisionTree& tree, std::size_t min_support);

/// build_tree followed by prune(config.min_support).
DecisionTree train(const Dataset& dataset, const TreeConfig& config = {});

}  // namespace asmf
